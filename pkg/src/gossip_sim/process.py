"""Round-synchronous discovery processes on dynamic graphs.

Three processes are implemented:

* triangulation -- every node draws two independent uniform neighbors
  (with replacement) and connects them;
* two-hop walk -- every node takes a uniform two-hop walk and connects
  itself to the endpoint;
* directed two-hop walk -- the same walk on a digraph, adding a directed
  edge to the destination.

All draws in a round are made against the start-of-round snapshot: queued
edges are applied only after every node has taken its turn.  Each trial
consumes one deterministic random stream; draws are consumed in ascending
node order, two per node per round, and a skipped draw (a node or
first-hop target with no out-neighbors) consumes nothing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .graph import (
    DirectedGraph,
    GraphError,
    IsolatedNodeError,
    UndirectedGraph,
    transitive_closure,
)

__all__ = [
    "DEFAULT_MAX_ROUNDS",
    "ProcessKind",
    "ProcessConfig",
    "RoundOutcome",
    "DisconnectedGraphError",
    "ProcessGraphMismatchError",
    "DegreeDoublingViolation",
    "triangulation_round",
    "twohop_round",
    "directed_twohop_round",
    "round_function",
    "run_to_convergence",
    "convergence_target",
    "mix64",
    "trial_seed",
]

DEFAULT_MAX_ROUNDS = 10**7

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """SplitMix64 finalizer: bijective 64-bit mixing."""
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)

def trial_seed(master_seed: int, trial_index: int) -> int:
    """Per-trial seed: element ``trial_index`` of the SplitMix64 stream.

    Sweeps derive independent trial streams from one master seed with
    this function; nothing else in the package draws randomness.
    """
    return mix64((master_seed + (trial_index + 1) * _GOLDEN) & _MASK64)


class ProcessKind(Enum):
    TRIANGULATION = "tri"
    TWOHOP_UNDIRECTED = "twohop"
    TWOHOP_DIRECTED = "dtwohop"

    @property
    def directed(self) -> bool:
        return self is ProcessKind.TWOHOP_DIRECTED


class DisconnectedGraphError(GraphError):
    """Undirected process started on a disconnected graph."""


class ProcessGraphMismatchError(GraphError):
    """Process kind does not match the graph type (directed vs undirected)."""


class DegreeDoublingViolation(RuntimeError):
    """A triangulation round more than doubled some node's degree.

    Structurally impossible (each neighbor queues at most one edge), so
    raising means a bookkeeping bug; the check runs on every round.
    """


@dataclass(frozen=True)
class ProcessConfig:
    """Which process to run, its seed, and the round cap.

    ``snapshot`` is reserved: start-of-round draw semantics is the only
    supported mode and the field must stay True.
    """

    kind: ProcessKind
    seed: int
    max_rounds: int = DEFAULT_MAX_ROUNDS
    snapshot: bool = True

    def __post_init__(self) -> None:
        if self.max_rounds < 1:
            raise ValueError(f"max_rounds must be >= 1, got {self.max_rounds}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.snapshot is not True:
            raise ValueError("only snapshot semantics is supported")


@dataclass
class RoundOutcome:
    """Edges queued and applied by one round."""

    round_index: int
    edges_added: list[tuple[int, int]]
    new_edge_count: int


def triangulation_round(
    g: UndirectedGraph,
    rng: random.Random,
    round_index: int = 0,
    draw_log: list[tuple[int, int, int]] | None = None,
) -> RoundOutcome:
    """One push-discovery round: each node connects two random neighbors.

    For each node u in ascending order, two independent uniform draws v, w
    from u's start-of-round neighbors; if v != w and {v, w} is neither
    present in the snapshot nor already queued, it is queued.  Queued
    edges are applied after every node has drawn.
    """
    adj = g._adj
    adj_sets = g._adj_sets
    gb = rng.getrandbits
    queued: list[tuple[int, int]] = []
    queued_set: set[tuple[int, int]] = set()
    for u in range(g.n):
        nbrs = adj[u]
        d = len(nbrs)
        if d == 0:
            raise IsolatedNodeError(u)
        if d == 1:
            v = w = nbrs[0]
        else:
            k = d.bit_length()
            r = gb(k)
            while r >= d:
                r = gb(k)
            v = nbrs[r]
            r = gb(k)
            while r >= d:
                r = gb(k)
            w = nbrs[r]
        if draw_log is not None:
            draw_log.append((u, v, w))
        if v == w:
            continue
        key = (v, w) if v < w else (w, v)
        if key[1] in adj_sets[key[0]] or key in queued_set:
            continue
        queued_set.add(key)
        queued.append(key)
    _check_degree_doubling(g, queued)
    for a, b in queued:
        g.add_edge(a, b)
    return RoundOutcome(round_index, queued, g.edge_count)


def _check_degree_doubling(g: UndirectedGraph, queued: list[tuple[int, int]]) -> None:
    gains: dict[int, int] = {}
    for a, b in queued:
        gains[a] = gains.get(a, 0) + 1
        gains[b] = gains.get(b, 0) + 1
    for x, gain in gains.items():
        if gain > len(g._adj[x]):
            raise DegreeDoublingViolation(
                f"node {x} would gain {gain} edges at degree {len(g._adj[x])}"
            )


def twohop_round(
    g: UndirectedGraph,
    rng: random.Random,
    round_index: int = 0,
    draw_log: list[tuple[int, int, int]] | None = None,
) -> RoundOutcome:
    """One pull-discovery round: each node walks two hops and connects there.

    For each node u in ascending order, v is uniform on u's snapshot
    neighbors and w uniform on v's snapshot neighbors; if w != u and
    {u, w} is neither present nor queued, it is queued.
    """
    adj = g._adj
    adj_sets = g._adj_sets
    gb = rng.getrandbits
    queued: list[tuple[int, int]] = []
    queued_set: set[tuple[int, int]] = set()
    for u in range(g.n):
        nbrs = adj[u]
        d = len(nbrs)
        if d == 0:
            raise IsolatedNodeError(u)
        if d == 1:
            v = nbrs[0]
        else:
            k = d.bit_length()
            r = gb(k)
            while r >= d:
                r = gb(k)
            v = nbrs[r]
        nbrs2 = adj[v]
        d2 = len(nbrs2)
        if d2 == 1:
            w = nbrs2[0]
        else:
            k = d2.bit_length()
            r = gb(k)
            while r >= d2:
                r = gb(k)
            w = nbrs2[r]
        if draw_log is not None:
            draw_log.append((u, v, w))
        if w == u:
            continue
        key = (u, w) if u < w else (w, u)
        if key[1] in adj_sets[key[0]] or key in queued_set:
            continue
        queued_set.add(key)
        queued.append(key)
    for a, b in queued:
        g.add_edge(a, b)
    return RoundOutcome(round_index, queued, g.edge_count)


def directed_twohop_round(
    g: DirectedGraph,
    rng: random.Random,
    round_index: int = 0,
    draw_log: list[tuple[int, int, int]] | None = None,
) -> RoundOutcome:
    """One directed two-hop round.

    Nodes without out-neighbors skip their turn; a first hop onto a node
    with no out-neighbors is a no-op for this round.  Neither consumes
    randomness.
    """
    out = g._out
    out_sets = g._out_sets
    gb = rng.getrandbits
    queued: list[tuple[int, int]] = []
    queued_set: set[tuple[int, int]] = set()
    for u in range(g.n):
        nbrs = out[u]
        d = len(nbrs)
        if d == 0:
            continue
        if d == 1:
            v = nbrs[0]
        else:
            k = d.bit_length()
            r = gb(k)
            while r >= d:
                r = gb(k)
            v = nbrs[r]
        nbrs2 = out[v]
        d2 = len(nbrs2)
        if d2 == 0:
            continue
        if d2 == 1:
            w = nbrs2[0]
        else:
            k = d2.bit_length()
            r = gb(k)
            while r >= d2:
                r = gb(k)
            w = nbrs2[r]
        if draw_log is not None:
            draw_log.append((u, v, w))
        if w == u:
            continue
        if w in out_sets[u] or (u, w) in queued_set:
            continue
        queued_set.add((u, w))
        queued.append((u, w))
    for a, b in queued:
        g.add_edge(a, b)
    return RoundOutcome(round_index, queued, g.edge_count)


def round_function(kind: ProcessKind):
    return {
        ProcessKind.TRIANGULATION: triangulation_round,
        ProcessKind.TWOHOP_UNDIRECTED: twohop_round,
        ProcessKind.TWOHOP_DIRECTED: directed_twohop_round,
    }[kind]


def convergence_target(g: UndirectedGraph | DirectedGraph, kind: ProcessKind) -> int:
    """Edge count at which the process stops.

    Undirected processes stop at the complete graph; the directed walk
    stops at the transitive closure of the initial graph (the closure is
    invariant under the process, so it is computed once up front).
    """
    if kind.directed:
        if not isinstance(g, DirectedGraph):
            raise ProcessGraphMismatchError(f"{kind.value} needs a directed graph")
        return transitive_closure(g).edge_count
    if not isinstance(g, UndirectedGraph):
        raise ProcessGraphMismatchError(f"{kind.value} needs an undirected graph")
    return g.n * (g.n - 1) // 2


def run_to_convergence(
    g: UndirectedGraph | DirectedGraph,
    config: ProcessConfig,
    trace_sink=None,
) -> tuple[int, bool]:
    """Run rounds until converged or ``config.max_rounds`` is hit.

    Returns ``(rounds, capped)``.  The run is fully deterministic given
    the initial graph and ``config.seed``.  When ``trace_sink`` is given,
    its ``begin_round(graph, index, missing)`` hook is called while the
    graph is still in its start-of-round state and ``end_round(outcome)``
    after the round's edges are applied.
    """
    target = convergence_target(g, config.kind)
    if not config.kind.directed and not g.is_connected():
        raise DisconnectedGraphError("undirected input must be connected")
    rng = random.Random(config.seed)
    step = round_function(config.kind)
    rounds = 0
    while g.edge_count < target and rounds < config.max_rounds:
        if trace_sink is not None:
            trace_sink.begin_round(g, rounds, target - g.edge_count)
        outcome = step(g, rng, round_index=rounds)
        if trace_sink is not None:
            trace_sink.end_round(outcome)
        rounds += 1
    return rounds, g.edge_count < target
