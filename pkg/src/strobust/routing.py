"""Vertex-disjoint routing of prescribed input/output pairings, and the
edge-subset permutation codec built on it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import GraphError, IoDag, PathRec
from .search import DEFAULT_BUDGET, BudgetExceeded


class MalformedEncoding(ValueError):
    """A bitvector that does not describe a set of disjoint input->output paths."""


@dataclass(frozen=True)
class Routing:
    pairing: tuple[tuple[int, int], ...]
    paths: tuple[PathRec, ...]

    def is_valid_in(self, g: IoDag) -> bool:
        seen: set[int] = set()
        for (x, y), p in zip(self.pairing, self.paths):
            if p.nodes[0] != x or p.nodes[-1] != y or not p.is_valid_in(g):
                return False
            if seen & set(p.nodes):
                return False
            seen.update(p.nodes)
        return len(self.paths) == len(self.pairing)


def _reaches(g: IoDag, src: int, dst: int, used: set[int]) -> bool:
    if src in used or dst in used:
        return False
    if src == dst:
        return True
    stack = [src]
    seen = {src}
    while stack:
        v = stack.pop()
        for w in g.succ[v]:
            if w > dst or w in used or w in seen:
                continue
            if w == dst:
                return True
            seen.add(w)
            stack.append(w)
    return False


def route_pairing(
    g: IoDag, pairing: Sequence[tuple[int, int]], budget: int = DEFAULT_BUDGET
) -> Routing | None:
    """Vertex-disjoint paths joining each ``(input, output)`` pair, or ``None``.

    Pairs are node ids. Backtracking handles pairs in input-index order and
    tries paths in lexicographic order; before committing a path every
    remaining pair must still be reachable around the used nodes. Raises
    :class:`BudgetExceeded` after ``budget`` search steps.
    """
    pairs = [(int(x), int(y)) for x, y in pairing]
    if len({x for x, _ in pairs}) != len(pairs) or len({y for _, y in pairs}) != len(pairs):
        raise GraphError("pairing must be injective on both sides")
    order = sorted(range(len(pairs)), key=lambda i: pairs[i][0])
    found: list[PathRec | None] = [None] * len(pairs)
    used: set[int] = set()
    # endpoints of every pair are off-limits to the other pairs' paths
    reserved = {x for x, _ in pairs} | {y for _, y in pairs}
    steps = 0

    def remaining_ok(k: int) -> bool:
        return all(_reaches(g, *pairs[j], used) for j in order[k:])

    def place(k: int) -> bool:
        if k == len(order):
            return True
        i = order[k]
        x, y = pairs[i]
        path = [x]
        used.add(x)

        def extend() -> bool:
            nonlocal steps
            steps += 1
            if steps > budget:
                raise BudgetExceeded("routing search steps", steps, budget)
            v = path[-1]
            if v == y:
                if remaining_ok(k + 1):
                    found[i] = PathRec(tuple(path))
                    return place(k + 1)
                return False
            for w in g.succ[v]:
                if w > y or w in used or (w in reserved and w != y):
                    continue
                path.append(w)
                used.add(w)
                if extend():
                    return True
                used.discard(w)
                path.pop()
            return False

        if extend():
            return True
        used.discard(x)
        return False

    if not remaining_ok(0) or not place(0):
        return None
    return Routing(tuple(pairs), tuple(found))  # type: ignore[arg-type]


def encode_permutation(g: IoDag, perm: Sequence[int], budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Edge bitvector (``uint8`` over ``g.edges``) of a routing of ``i -> perm[i]``.

    ``perm`` indexes ``g.inputs`` / ``g.outputs`` by position.
    """
    n = len(g.inputs)
    if sorted(perm) != list(range(n)) or len(g.outputs) != n:
        raise ValueError(f"perm must be a permutation of range({n})")
    routing = route_pairing(g, [(g.inputs[i], g.outputs[p]) for i, p in enumerate(perm)], budget)
    if routing is None:
        raise GraphError(f"permutation {list(perm)} is not routable in {g.label or 'graph'}")
    bits = np.zeros(g.n_edges, dtype=np.uint8)
    for p in routing.paths:
        for e in p.edges:
            bits[g.edge_index[e]] = 1
    return bits


def decode_permutation(g: IoDag, bits: Sequence[int]) -> list[int]:
    """Recover the permutation by walking set edges from every input."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.shape != (g.n_edges,) or np.any(bits > 1):
        raise MalformedEncoding(f"expected {g.n_edges} bits of 0/1")
    out_pos = {o: j for j, o in enumerate(g.outputs)}
    walked = 0
    perm = []
    for x in g.inputs:
        v = x
        seen = {v}
        while True:
            nxt = [w for w in g.succ[v] if bits[g.edge_index[(v, w)]]]
            if len(nxt) > 1:
                raise MalformedEncoding(f"walk from input {x} branches at node {v}")
            if not nxt:
                break
            v = nxt[0]
            walked += 1
            if v in seen:
                raise MalformedEncoding("walk revisits a node")
            seen.add(v)
        if v not in out_pos:
            raise MalformedEncoding(f"walk from input {x} dead-ends at non-output node {v}")
        perm.append(out_pos[v])
    if walked != int(bits.sum()):
        raise MalformedEncoding("set bits not covered by the input walks")
    if sorted(perm) != list(range(len(g.outputs))) or len(perm) != len(g.outputs):
        raise MalformedEncoding("walks do not end on distinct outputs")
    return perm
