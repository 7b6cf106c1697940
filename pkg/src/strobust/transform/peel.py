"""Greedy path peeling and the two-sided witness for three-layer graphs."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..construct import grate_layers
from ..graph import IoDag, PathRec, RemovalSet, _dead_mask, input_reach_masks
from ..verify import StWitness


def _lex_longest(g: IoDag, dead: bytearray, allowed: range | None = None) -> PathRec | None:
    """Lexicographically smallest longest path among live nodes."""
    n = g.n_nodes
    ok = [not dead[v] and (allowed is None or v in allowed) for v in range(n)]
    tail = [-1] * n  # longest path (edges) starting at v
    for v in range(n - 1, -1, -1):
        if not ok[v]:
            continue
        best = 0
        for w in g.succ[v]:
            if ok[w] and tail[w] + 1 > best:
                best = tail[w] + 1
        tail[v] = best
    if not any(ok):
        return None
    top = max(tail)
    v = min(u for u in range(n) if tail[u] == top)
    nodes = [v]
    while tail[v] > 0:
        v = min(w for w in g.succ[v] if ok[w] and tail[w] == tail[v] - 1)
        nodes.append(v)
    return PathRec(tuple(nodes))


def greedy_peel(g: IoDag, s: RemovalSet | None, ell: int, allowed: range | None = None) -> list[PathRec]:
    """Vertex-disjoint paths of exactly ``ell`` nodes (``ell - 1`` edges).

    Repeatedly takes the lexicographically smallest longest path in what
    survives, keeps its first ``ell`` nodes and deletes them, until no path
    with ``ell`` nodes is left. ``allowed`` restricts the search to a node range.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    dead = _dead_mask(g, s)
    out = []
    while True:
        p = _lex_longest(g, dead, allowed)
        if p is None or len(p.nodes) < ell:
            return out
        piece = PathRec(p.nodes[:ell])
        out.append(piece)
        for v in piece.nodes:
            dead[v] = 1


def halves(p: PathRec) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(lower, upper) halves; for odd lengths the middle node is in both."""
    k = len(p.nodes)
    return p.nodes[: (k + 1) // 2], p.nodes[k // 2 :]


@dataclass
class AbOutcome:
    witness: StWitness | None
    diagnostic: str | None = None
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.witness is not None


def ab_witness(g3: IoDag, s: RemovalSet | None, ell: int) -> AbOutcome:
    """Assemble all-pairs-connected ``A`` (layer one) and ``B`` (layer three).

    Peels ``ell``-node paths in each layer, splits each into lower and upper
    halves, and links layer-one path ``i`` to middle path ``j`` when an edge
    runs from the upper half of ``i`` into the lower half of ``j`` (likewise
    middle to top). ``A`` is the union of lower halves of the chosen bottom
    paths, ``B`` the union of upper halves of the chosen top paths; every
    chosen pair shares a linking middle path, and the result is re-checked
    against actual reachability in ``g3 - s``.
    """
    layers = grate_layers(g3)
    dead = _dead_mask(g3, s)
    peeled = []
    for idx, layer in enumerate(layers):
        paths = greedy_peel(g3, RemovalSet.nodes(i for i in range(g3.n_nodes) if dead[i]), ell, allowed=layer)
        if not paths:
            return AbOutcome(None, f"no surviving {ell}-node path in layer {idx + 1}", {"failed_layer": idx + 1})
        peeled.append([halves(p) for p in paths])
    bottom, middle, top = peeled

    def links(lower_paths, upper_paths):
        # links[i] = indices j such that some edge goes from upper(i) into lower(j)
        out = []
        for lo_i, up_i in lower_paths:
            heads = {w for x in up_i for w in g3.succ[x] if not dead[w]}
            out.append({j for j, (lo_j, _) in enumerate(upper_paths) if heads & set(lo_j)})
        return out

    up_links = links(bottom, middle)  # bottom i -> middle j
    down = links(middle, top)  # middle j -> top i'
    top_links = [{j for j in range(len(middle)) if t in down[j]} for t in range(len(top))]

    k = len(middle)
    stats = {
        "paths_per_layer": [len(bottom), k, len(top)],
        "bad_bottom": [k - len(x) for x in up_links],
        "bad_top": [k - len(x) for x in top_links],
        "slack_threshold": k / 10,
    }
    # pick the middle path that serves the most (bottom, top) combinations,
    # then widen each side while every pair still shares a middle path
    best_j, best_score = None, 0
    for j in range(k):
        score = sum(j in x for x in up_links) * sum(j in x for x in top_links)
        if score > best_score:
            best_j, best_score = j, score
    if best_j is None:
        return AbOutcome(None, "no middle path links the bottom and top layers", stats)
    good_top = [t for t in range(len(top)) if best_j in top_links[t]]
    good_bottom = [i for i in range(len(bottom)) if all(up_links[i] & top_links[t] for t in good_top)]
    good_top = [t for t in range(len(top)) if all(up_links[i] & top_links[t] for i in good_bottom)]
    a_side = tuple(sorted({x for i in good_bottom for x in bottom[i][0]}))
    b_side = tuple(sorted({x for t in good_top for x in top[t][1]}))
    stats.update(good_bottom=good_bottom, good_top=good_top, A_size=len(a_side), B_size=len(b_side))

    # independent re-check by reachability
    probe = IoDag(g3.n_nodes, g3.edges, a_side, b_side)
    masks = input_reach_masks(probe, dead)
    full = (1 << len(a_side)) - 1
    if any(masks[b] & full != full for b in b_side):
        return AbOutcome(None, "assembled sets failed the reachability re-check", stats)
    return AbOutcome(StWitness(a_side, b_side, None), None, stats)
