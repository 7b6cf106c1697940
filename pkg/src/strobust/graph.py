"""Immutable DAGs with designated input and output nodes.

Nodes are dense integers ``0..n_nodes-1`` stored in topological order, so every
edge satisfies ``src < dst``. Path lengths are counted in edges throughout.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

UNREACHABLE = None


class GraphError(ValueError):
    """Raised for malformed graphs or invalid node/edge references."""


@dataclass(frozen=True)
class IoDag:
    n_nodes: int
    edges: tuple[tuple[int, int], ...]
    inputs: tuple[int, ...] = ()
    outputs: tuple[int, ...] = ()
    label: str = ""

    def __post_init__(self):
        n = self.n_nodes
        if n < 0:
            raise GraphError(f"negative node count {n}")
        edges = tuple(sorted((int(u), int(v)) for u, v in self.edges))
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) references a node outside [0, {n})")
            if u >= v:
                raise GraphError(f"edge ({u}, {v}) violates topological index order")
        for a, b in zip(edges, edges[1:]):
            if a == b:
                raise GraphError(f"duplicate edge {a}")
        for name in ("inputs", "outputs"):
            nodes = tuple(int(x) for x in getattr(self, name))
            if len(set(nodes)) != len(nodes):
                raise GraphError(f"{name} contain duplicates")
            for x in nodes:
                if not 0 <= x < n:
                    raise GraphError(f"{name} node {x} outside [0, {n})")
            object.__setattr__(self, name, nodes)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(
        cls,
        n_nodes: int,
        edges: Iterable[tuple[int, int]],
        inputs: Sequence[int] = (),
        outputs: Sequence[int] = (),
        label: str = "",
    ) -> tuple["IoDag", list[int]]:
        """Build a graph from edges in arbitrary index order.

        Nodes are relabelled into the smallest-index-first topological order
        (Kahn's algorithm with a heap). Returns the graph and the
        ``old -> new`` index table.
        """
        edges = sorted(set((int(u), int(v)) for u, v in edges))
        succ: list[list[int]] = [[] for _ in range(n_nodes)]
        indeg = [0] * n_nodes
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            succ[u].append(v)
            indeg[v] += 1
        heap = [v for v in range(n_nodes) if indeg[v] == 0]
        heapq.heapify(heap)
        new_index = [-1] * n_nodes
        nxt = 0
        while heap:
            u = heapq.heappop(heap)
            new_index[u] = nxt
            nxt += 1
            for v in succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(heap, v)
        if nxt != n_nodes:
            raise GraphError("edge list contains a cycle")
        g = cls(
            n_nodes,
            tuple((new_index[u], new_index[v]) for u, v in edges),
            tuple(new_index[x] for x in inputs),
            tuple(new_index[x] for x in outputs),
            label,
        )
        return g, new_index

    @cached_property
    def succ(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for u, v in self.edges:
            out[u].append(v)
        return tuple(tuple(x) for x in out)

    @cached_property
    def pred(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for u, v in self.edges:
            out[v].append(u)
        return tuple(tuple(x) for x in out)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_terminals(self) -> int:
        return len(self.inputs)

    def indegree(self, v: int) -> int:
        return len(self.pred[v])

    def outdegree(self, v: int) -> int:
        return len(self.succ[v])

    @cached_property
    def max_indegree(self) -> int:
        return max((len(p) for p in self.pred), default=0)

    @cached_property
    def max_degree(self) -> int:
        """Largest total (in + out) degree of any node."""
        return max((len(self.pred[v]) + len(self.succ[v]) for v in range(self.n_nodes)), default=0)

    @cached_property
    def sources(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n_nodes) if not self.pred[v])

    @cached_property
    def sinks(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n_nodes) if not self.succ[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_index

    def relabel(self, label: str) -> "IoDag":
        return IoDag(self.n_nodes, self.edges, self.inputs, self.outputs, label)


@dataclass(frozen=True)
class RemovalSet:
    """Nodes or edge indices to delete from a graph."""

    kind: str = "node"
    members: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.kind not in ("node", "edge"):
            raise ValueError(f"unknown removal kind {self.kind!r}")
        object.__setattr__(self, "members", frozenset(int(x) for x in self.members))

    @classmethod
    def nodes(cls, members: Iterable[int] = ()) -> "RemovalSet":
        return cls("node", frozenset(members))

    @classmethod
    def edges(cls, members: Iterable[int] = ()) -> "RemovalSet":
        return cls("edge", frozenset(members))

    @classmethod
    def of_edges(cls, g: IoDag, pairs: Iterable[tuple[int, int]]) -> "RemovalSet":
        """Edge removal set named by ``(src, dst)`` pairs instead of indices."""
        idx = []
        for e in pairs:
            e = (int(e[0]), int(e[1]))
            if e not in g.edge_index:
                raise GraphError(f"edge {e} not in graph")
            idx.append(g.edge_index[e])
        return cls("edge", frozenset(idx))

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list[int]:
        return sorted(self.members)

    def validate(self, g: IoDag) -> None:
        bound = g.n_nodes if self.kind == "node" else g.n_edges
        for x in self.members:
            if not 0 <= x < bound:
                raise GraphError(f"{self.kind} id {x} invalid for graph with {bound} {self.kind}s")


@dataclass(frozen=True)
class PathRec:
    nodes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(int(x) for x in self.nodes))
        if len(set(self.nodes)) != len(self.nodes):
            raise GraphError("path repeats a node")

    @property
    def length(self) -> int:
        return max(len(self.nodes) - 1, 0)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.nodes, self.nodes[1:]))

    def is_valid_in(self, g: IoDag, dead: Iterable[int] = ()) -> bool:
        dead = set(dead)
        if not self.nodes or any(v in dead or not 0 <= v < g.n_nodes for v in self.nodes):
            return False
        return all(g.has_edge(u, v) for u, v in self.edges)


def _dead_mask(g: IoDag, s: RemovalSet | Iterable[int] | None) -> bytearray:
    dead = bytearray(g.n_nodes)
    if s is None:
        return dead
    if isinstance(s, RemovalSet):
        if s.kind != "node":
            raise GraphError("expected a node removal set")
        s.validate(g)
        s = s.members
    for x in s:
        dead[x] = 1
    return dead


def delete(g: IoDag, s: RemovalSet) -> tuple[IoDag, list[int | None]]:
    """Return ``g - s`` and the ``old -> new`` node index table.

    Removed nodes map to ``None``. Edge removals keep every node.
    """
    s.validate(g)
    if s.kind == "edge":
        keep = [e for i, e in enumerate(g.edges) if i not in s.members]
        out = IoDag(g.n_nodes, tuple(keep), g.inputs, g.outputs, g.label)
        return out, list(range(g.n_nodes))
    remap: list[int | None] = []
    nxt = 0
    for v in range(g.n_nodes):
        if v in s.members:
            remap.append(None)
        else:
            remap.append(nxt)
            nxt += 1
    edges = tuple(
        (remap[u], remap[v]) for u, v in g.edges if remap[u] is not None and remap[v] is not None
    )
    out = IoDag(
        nxt,
        edges,
        tuple(remap[x] for x in g.inputs if remap[x] is not None),
        tuple(remap[x] for x in g.outputs if remap[x] is not None),
        g.label,
    )
    return out, remap


# Masked kernels: ``dead`` is a bytearray over nodes. These avoid building a
# new graph per removal set inside the exhaustive checkers.


def depth_profile_masked(g: IoDag, dead: bytearray) -> list[int]:
    """Longest path (edges) ending at each node; -1 for dead nodes."""
    prof = [-1] * g.n_nodes
    pred = g.pred
    for v in range(g.n_nodes):
        if dead[v]:
            continue
        best = 0
        for p in pred[v]:
            d = prof[p] + 1
            if d > best:
                best = d
        prof[v] = best
    return prof


def depth_masked(g: IoDag, dead: bytearray) -> int:
    return max(depth_profile_masked(g, dead), default=0) if g.n_nodes else 0


def edge_depth_masked(g: IoDag, dead_edges: set[int]) -> int:
    prof = [0] * g.n_nodes
    for i, (u, v) in enumerate(g.edges):
        if i in dead_edges:
            continue
        if prof[u] + 1 > prof[v]:
            prof[v] = prof[u] + 1
    return max(prof, default=0)


def input_reach_masks(g: IoDag, dead: bytearray) -> list[int]:
    """Bitmask per node of the input positions that reach it in ``g - dead``."""
    masks = [0] * g.n_nodes
    pos = {x: i for i, x in enumerate(g.inputs)}
    pred = g.pred
    for v in range(g.n_nodes):
        if dead[v]:
            continue
        m = 1 << pos[v] if v in pos else 0
        for p in pred[v]:
            m |= masks[p]
        masks[v] = m
    return masks


def longest_from_masked(g: IoDag, src: int, dead: bytearray) -> list[int]:
    """Longest path length from ``src`` to each node; -1 where unreachable."""
    dist = [-1] * g.n_nodes
    if dead[src]:
        return dist
    dist[src] = 0
    pred = g.pred
    for v in range(src + 1, g.n_nodes):
        if dead[v]:
            continue
        best = -1
        for p in pred[v]:
            if dist[p] >= 0 and dist[p] + 1 > best:
                best = dist[p] + 1
        dist[v] = best
    return dist


def longest_path_masked(g: IoDag, src: int, dst: int, dead: bytearray) -> PathRec | None:
    """A longest ``src -> dst`` path avoiding dead nodes, or ``None``."""
    dist = longest_from_masked(g, src, dead)
    if dist[dst] < 0:
        return None
    nodes = [dst]
    v = dst
    while v != src:
        # smallest predecessor on a longest path keeps the choice canonical
        v = min(p for p in g.pred[v] if dist[p] == dist[v] - 1 and dist[p] >= 0)
        nodes.append(v)
    return PathRec(tuple(reversed(nodes)))


# Public structural queries


def depth(g: IoDag) -> int:
    """Maximum number of edges on any directed path."""
    return depth_masked(g, bytearray(g.n_nodes))


def node_depth_profile(g: IoDag) -> list[int]:
    return depth_profile_masked(g, bytearray(g.n_nodes))


def reach_matrix(g: IoDag) -> np.ndarray:
    """Boolean ``len(inputs) x len(outputs)`` matrix; a node reaches itself."""
    masks = input_reach_masks(g, bytearray(g.n_nodes))
    out = np.zeros((len(g.inputs), len(g.outputs)), dtype=bool)
    for j, o in enumerate(g.outputs):
        m = masks[o]
        for i in range(len(g.inputs)):
            out[i, j] = bool(m >> i & 1)
    return out


def pairwise_longest(g: IoDag, s: int, t: int) -> int | None:
    """Exact longest ``s -> t`` path length in edges, ``None`` if unreachable."""
    d = longest_from_masked(g, s, bytearray(g.n_nodes))[t]
    return None if d < 0 else d


def longest_path(g: IoDag, s: int, t: int) -> PathRec | None:
    return longest_path_masked(g, s, t, bytearray(g.n_nodes))


def disjoint_union(graphs: Sequence[IoDag]) -> tuple[list[tuple[int, int]], list[int]]:
    """Concatenate edge lists with index offsets; returns edges and offsets."""
    edges: list[tuple[int, int]] = []
    offsets = []
    base = 0
    for h in graphs:
        offsets.append(base)
        edges.extend((u + base, v + base) for u, v in h.edges)
        base += h.n_nodes
    return edges, offsets


def chain(n: int, label: str = "") -> IoDag:
    return IoDag(n, tuple((i, i + 1) for i in range(n - 1)), (0,) if n else (), (n - 1,) if n else (), label or f"chain {n}")


def complete_dag(n: int, label: str = "") -> IoDag:
    """K_n with every edge ``i -> j`` for ``i < j``."""
    edges = tuple((i, j) for i in range(n) for j in range(i + 1, n))
    return IoDag(n, edges, (0,) if n else (), (n - 1,) if n else (), label or f"complete {n}")
