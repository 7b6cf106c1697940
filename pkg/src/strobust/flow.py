"""Vertex-disjoint path counting.

``max_disjoint_paths`` splits every node into an in/out pair joined by a
unit-capacity arc and runs augmenting-path max-flow. ``brute_force_disjoint_paths``
enumerates simple paths and searches for the largest pairwise-disjoint family;
it is the independent oracle for small graphs.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .graph import IoDag


def max_disjoint_paths(
    g: IoDag, sources: Iterable[int], targets: Iterable[int], dead: Iterable[int] = ()
) -> int:
    """Maximum number of vertex-disjoint paths from ``sources`` to ``targets``.

    Every node (endpoints included) has capacity 1, so a node in both sets
    counts as a zero-length path.
    """
    n = g.n_nodes
    dead = set(dead)
    # node v -> v_in = 2v, v_out = 2v+1; super source 2n, super sink 2n+1
    src, snk = 2 * n, 2 * n + 1
    size = 2 * n + 2
    cap: list[dict[int, int]] = [dict() for _ in range(size)]

    def arc(a: int, b: int) -> None:
        cap[a][b] = cap[a].get(b, 0) + 1
        cap[b].setdefault(a, 0)

    for v in range(n):
        if v not in dead:
            arc(2 * v, 2 * v + 1)
    for u, v in g.edges:
        if u not in dead and v not in dead:
            arc(2 * u + 1, 2 * v)
    for s in set(sources):
        if s not in dead:
            arc(src, 2 * s)
    for t in set(targets):
        if t not in dead:
            arc(2 * t + 1, snk)

    flow = 0
    while True:
        parent = [-1] * size
        parent[src] = src
        queue = deque([src])
        while queue and parent[snk] < 0:
            a = queue.popleft()
            for b, c in cap[a].items():
                if c > 0 and parent[b] < 0:
                    parent[b] = a
                    queue.append(b)
        if parent[snk] < 0:
            return flow
        b = snk
        while b != src:
            a = parent[b]
            cap[a][b] -= 1
            cap[b][a] += 1
            b = a
        flow += 1


def all_simple_paths(g: IoDag, sources: Iterable[int], targets: Iterable[int]) -> list[tuple[int, ...]]:
    targets = set(targets)
    found: list[tuple[int, ...]] = []

    def walk(path: list[int]) -> None:
        v = path[-1]
        if v in targets:
            found.append(tuple(path))
        for w in g.succ[v]:
            path.append(w)
            walk(path)
            path.pop()

    for s in sorted(set(sources)):
        walk([s])
    return found


def brute_force_disjoint_paths(g: IoDag, sources: Iterable[int], targets: Iterable[int]) -> int:
    """Largest family of pairwise vertex-disjoint source->target paths, by search."""
    paths = [frozenset(p) for p in all_simple_paths(g, sources, targets)]
    # paths with the same node set are interchangeable
    paths = sorted(set(paths), key=len)
    best = 0

    def search(start: int, used: frozenset, count: int) -> None:
        nonlocal best
        if count > best:
            best = count
        for i in range(start, len(paths)):
            if count + (len(paths) - i) <= best:
                return
            p = paths[i]
            if not (p & used):
                search(i + 1, used | p, count + 1)

    search(0, frozenset(), 0)
    return best
