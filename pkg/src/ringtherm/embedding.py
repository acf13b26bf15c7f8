"""Chain-free ring embeddings: odd simple cycles in a hardware graph.

``find_ring_embedding`` looks for a simple cycle of exactly the requested
odd length, one node per logical spin. Fixed-length cycle finding is hard
in general, so the search is an explicitly best-effort randomized DFS:
neighbors are tried in Warnsdorff order (fewest unvisited neighbors first,
random tie-break), candidates whose BFS distance back to the start exceeds
the remaining budget are pruned, the cycle is closed opportunistically as
soon as the path reaches full length next to its start, and dead searches
restart from a fresh node. Failure means "not found within the budget",
never "nonexistent" -- except on bipartite graphs, where odd cycles provably
do not exist and the search fails fast with that proof.

With ``timeout=None`` the search is a pure function of (graph, length,
seed, max_steps) and reproduces the same cycle every time.
"""

from __future__ import annotations

import random
import time
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    BipartiteGraphError,
    DanglingNodeError,
    DomainError,
    EmbeddingNotFoundError,
    ParityError,
    ParseError,
)

__all__ = [
    "HardwareGraph",
    "RingEmbedding",
    "EmbeddingReport",
    "load_graph",
    "find_ring_embedding",
    "verify_embedding",
    "is_bipartite",
    "write_embedding",
]


@dataclass(eq=False)
class HardwareGraph:
    """Undirected graph of qubit ids; no self-loops, duplicate edges merged."""

    nodes: frozenset
    adjacency: dict

    @classmethod
    def from_edges(cls, edges, nodes=()) -> "HardwareGraph":
        node_set = {int(n) for n in nodes}
        adj: dict = {n: set() for n in node_set}
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise DomainError(f"self-loop at node {u}")
            if nodes and (u not in node_set or v not in node_set):
                missing = u if u not in node_set else v
                raise DanglingNodeError(f"edge ({u}, {v}) references unknown node {missing}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return cls(frozenset(adj), {n: tuple(sorted(nb)) for n, nb in adj.items()})

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return sum(len(nb) for nb in self.adjacency.values()) // 2

    def degree(self, node) -> int:
        return len(self.adjacency[node])


@dataclass(frozen=True)
class RingEmbedding:
    """An ordered simple cycle of qubit ids, one per logical spin."""

    cycle: tuple

    @property
    def length(self) -> int:
        return len(self.cycle)


@dataclass(frozen=True)
class EmbeddingReport:
    ok: bool
    violation: str | None = None

    def __bool__(self):
        return self.ok


def load_graph(path) -> HardwareGraph:
    """Parse a whitespace-separated edge list; '#' comments, one edge per line.

    A line with a single integer declares an isolated node.
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read graph: {exc}", path=str(path)) from exc
    edges = []
    nodes = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            ids = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", path=str(path), line=lineno) from None
        if len(ids) == 1:
            nodes.append(ids[0])
        elif len(ids) == 2:
            if ids[0] == ids[1]:
                raise ParseError(f"self-loop at node {ids[0]}", path=str(path), line=lineno)
            edges.append((ids[0], ids[1]))
        else:
            raise ParseError(
                f"expected 1 or 2 integers per line, got {len(ids)}", path=str(path), line=lineno
            )
    for u, v in edges:
        nodes.append(u)
        nodes.append(v)
    return HardwareGraph.from_edges(edges, nodes)


def is_bipartite(graph: HardwareGraph) -> bool:
    """BFS 2-coloring over all components."""
    color: dict = {}
    for start in graph.adjacency:
        if start in color:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in graph.adjacency[u]:
                if v not in color:
                    color[v] = color[u] ^ 1
                    queue.append(v)
                elif color[v] == color[u]:
                    return False
    return True


def _bfs_distances(graph: HardwareGraph, start) -> dict:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in graph.adjacency[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


_ENDGAME_WINDOW = 12  # path steps left below which ordering turns homeward


def _search_from(graph, start, length, rng, step_cap, deadline):
    """Bounded DFS for one cycle through ``start``; None if the cap runs out."""
    adj = graph.adjacency
    dist = _bfs_distances(graph, start)
    path = [start]
    on_path = {start}
    stack = [iter(_ordered_neighbors(adj, start, on_path, rng, dist, length - 1))]
    steps = 0
    while stack:
        steps += 1
        if steps > step_cap:
            return None
        if deadline is not None and steps % 1024 == 0 and time.monotonic() > deadline:
            raise EmbeddingNotFoundError(
                f"no {length}-cycle found before timeout (existence undecided)"
            )
        frontier = stack[-1]
        advanced = False
        for cand in frontier:
            if len(path) == length - 1:
                # one node left: it must neighbor both the path end and start
                if cand not in on_path and start in adj[cand]:
                    return path + [cand]
                continue
            if cand in on_path:
                continue
            # edges still available from cand back to start
            if dist.get(cand, length + 1) > length - len(path):
                continue
            path.append(cand)
            on_path.add(cand)
            remaining = length - len(path)
            stack.append(iter(_ordered_neighbors(adj, cand, on_path, rng, dist, remaining)))
            advanced = True
            break
        if not advanced:
            stack.pop()
            on_path.discard(path.pop())
    return None


def _ordered_neighbors(adj, node, on_path, rng, dist, remaining):
    """Candidate order: Warnsdorff early, homeward (tightest slack) late.

    While plenty of budget remains, prefer the neighbor with the fewest
    unvisited neighbors (random tie-break); in the endgame, prefer the
    candidate whose distance back to the start matches the remaining
    budget most tightly, which steers the walk home.
    """
    cands = [v for v in adj[node] if v not in on_path]
    rng.shuffle(cands)
    if remaining <= _ENDGAME_WINDOW:
        cands.sort(key=lambda v: remaining - dist.get(v, 1 << 30))
    else:
        cands.sort(key=lambda v: sum(1 for w in adj[v] if w not in on_path))
    return cands


def find_ring_embedding(
    graph: HardwareGraph,
    length: int,
    timeout: float | None = 10.0,
    seed: int = 0,
    max_steps: int | None = None,
) -> RingEmbedding:
    """Best-effort search for a simple cycle of exactly ``length`` nodes.

    ``max_steps`` bounds DFS steps per restart (default 50 * length); with
    ``timeout=None`` the result is deterministic in (graph, length, seed).
    Raises BipartiteGraphError when no odd cycle can exist, and
    EmbeddingNotFoundError when the budget runs out (existence undecided).
    """
    length = int(length)
    if length % 2 == 0:
        raise ParityError(f"ring length must be odd, got {length}")
    if length < 3 or length > graph.num_nodes:
        raise DomainError(
            f"length must lie in [3, {graph.num_nodes}], got {length}"
        )
    if is_bipartite(graph):
        raise BipartiteGraphError(
            "graph is bipartite: no odd cycle exists for any odd length"
        )
    rng = random.Random(seed)
    deadline = None if timeout is None else time.monotonic() + float(timeout)
    step_cap = max_steps if max_steps is not None else 50 * length
    starts = sorted(n for n in graph.adjacency if graph.degree(n) >= 2)
    if not starts:
        raise EmbeddingNotFoundError("graph has no node of degree >= 2")
    restarts = 0
    while True:
        start = starts[rng.randrange(len(starts))]
        found = _search_from(graph, start, length, rng, step_cap, deadline)
        if found is not None:
            return RingEmbedding(tuple(found))
        restarts += 1
        if deadline is not None and time.monotonic() > deadline:
            raise EmbeddingNotFoundError(
                f"no {length}-cycle found in {restarts} restarts before timeout "
                "(existence undecided)"
            )
        if deadline is None and restarts >= 64:
            raise EmbeddingNotFoundError(
                f"no {length}-cycle found in {restarts} restarts within the step budget "
                "(existence undecided)"
            )


def verify_embedding(graph: HardwareGraph, embedding, length: int) -> EmbeddingReport:
    """Check the one-qubit-per-spin cycle contract; first violation wins."""
    cycle = tuple(embedding.cycle if isinstance(embedding, RingEmbedding) else embedding)
    if len(cycle) != length:
        return EmbeddingReport(False, f"cycle has {len(cycle)} nodes, expected {length}")
    if length % 2 == 0 or length < 3:
        return EmbeddingReport(False, f"length {length} is not an odd ring length >= 3")
    seen = set()
    for node in cycle:
        if node in seen:
            return EmbeddingReport(False, f"repeated node {node}")
        seen.add(node)
        if node not in graph.adjacency:
            return EmbeddingReport(False, f"node {node} not in graph")
    for i, node in enumerate(cycle):
        nxt = cycle[(i + 1) % length]
        if nxt not in graph.adjacency[node]:
            return EmbeddingReport(False, f"nodes {node} and {nxt} are not adjacent")
    return EmbeddingReport(True)


def write_embedding(path, embedding: RingEmbedding) -> None:
    """One node id per line, usable directly as a qubit assignment list."""
    Path(path).write_text(
        "\n".join(str(n) for n in embedding.cycle) + "\n", encoding="utf-8"
    )
