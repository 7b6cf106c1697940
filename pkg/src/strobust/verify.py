"""Exhaustive and sampled checkers for robustness properties of IoDags.

Every checker returns a :class:`Report`. A refutation carries the removal set
(or pairing) that breaks the property. All properties checked over removal
sets here are monotone in the removal set, so a search over sets of exactly
the stated bound covers every smaller set as well.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from .flow import max_disjoint_paths
from .graph import (
    IoDag,
    RemovalSet,
    depth_masked,
    depth_profile_masked,
    edge_depth_masked,
    input_reach_masks,
    longest_from_masked,
    _dead_mask,
)
from .search import BudgetExceeded, SearchMode, subsets
from .routing import route_pairing

SCHEMA = 1
HOLDS = "holds"
REFUTED = "refuted"
HOLDS_ON_SAMPLE = "holds-on-sample"


@dataclass(frozen=True)
class StWitness:
    """Inputs ``A`` and outputs ``B`` that are pairwise connected after a deletion.

    ``min_pair_depth`` is the smallest longest-path length over ``A x B``;
    ``None`` when either side is empty.
    """

    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    min_pair_depth: int | None = None

    def to_dict(self) -> dict:
        return {"A": list(self.inputs), "B": list(self.outputs), "min_pair_depth": self.min_pair_depth}


@dataclass
class Report:
    property: str
    params: dict
    verdict: str
    explored: int
    mode: SearchMode
    counterexample: RemovalSet | None = None
    witness: StWitness | None = None
    detail: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def holds(self) -> bool:
        return self.verdict != REFUTED

    def evidence(self) -> dict | None:
        ev: dict = {}
        if self.counterexample is not None:
            ev["removal"] = {"kind": self.counterexample.kind, "members": self.counterexample.sorted()}
        if self.witness is not None:
            ev["witness"] = self.witness.to_dict()
        ev.update(self.detail)
        return ev or None

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "property": self.property,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "verdict": self.verdict,
            "evidence": self.evidence(),
            "explored": self.explored,
            "mode": self.mode.mode,
            "seed": self.mode.seed,
            "stats": {k: _jsonable(v) for k, v in self.stats.items()},
            "wall_time": round(self.wall_time, 6),
        }

    def to_json(self, timing: bool = True) -> str:
        d = self.to_dict()
        if not timing:
            d.pop("wall_time")
        return json.dumps(d, indent=2, sort_keys=True)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, np.integer):
        return int(v)
    return v


def _fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x).limit_denominator(1 << 20)


def _report(prop, params, mode, t0, explored, cex=None, **kw) -> Report:
    if cex is not None or kw.get("detail", {}).get("failed"):
        verdict = REFUTED
    else:
        verdict = HOLDS if mode.is_exhaustive else HOLDS_ON_SAMPLE
    return Report(prop, params, verdict, explored, mode, counterexample=cex, wall_time=time.perf_counter() - t0, **kw)


def _scan_nodes(g: IoDag, size: int, mode: SearchMode, violates, stream: int = 0):
    """Run ``violates(dead, subset)`` over node removal sets; first hit wins."""
    dead = bytearray(g.n_nodes)
    explored = 0
    for sub in subsets(g.n_nodes, size, mode, stream=stream):
        explored += 1
        for x in sub:
            dead[x] = 1
        bad = violates(dead, sub)
        for x in sub:
            dead[x] = 0
        if bad:
            return RemovalSet.nodes(sub), explored
    return None, explored


# Depth robustness


def check_depth_robust(g: IoDag, e: int, d: int, mode: SearchMode = SearchMode()) -> Report:
    """``g`` is (e, d)-depth-robust: every deletion of <= e nodes leaves a path of d edges."""
    if e >= g.n_nodes and g.n_nodes:
        raise ValueError(f"e={e} must be below the node count {g.n_nodes}")
    t0 = time.perf_counter()
    cex, explored = _scan_nodes(g, e, mode, lambda dead, _: depth_masked(g, dead) < d)
    return _report("depth-robust", {"e": e, "d": d}, mode, t0, explored, cex)


def check_edge_depth_robust(g: IoDag, e: int, d: int, mode: SearchMode = SearchMode()) -> Report:
    t0 = time.perf_counter()
    explored = 0
    cex = None
    for sub in subsets(g.n_edges, e, mode, what="edge removal sets"):
        explored += 1
        if edge_depth_masked(g, set(sub)) < d:
            cex = RemovalSet.edges(sub)
            break
    r = _report("edge-depth-robust", {"e": e, "d": d}, mode, t0, explored, cex)
    if cex is not None:
        r.detail["removed_edges"] = [list(g.edges[i]) for i in cex.sorted()]
    return r


def min_depth_after_removal(g: IoDag, e: int, mode: SearchMode = SearchMode(), edges: bool = False) -> int:
    """Smallest depth over the searched removal sets of size ``e``.

    In exhaustive mode this is the largest ``d`` for which ``g`` is
    (e, d)-(edge-)depth-robust.
    """
    best = None
    if edges:
        for sub in subsets(g.n_edges, e, mode, what="edge removal sets"):
            v = edge_depth_masked(g, set(sub))
            best = v if best is None else min(best, v)
    else:
        dead = bytearray(g.n_nodes)
        for sub in subsets(g.n_nodes, e, mode):
            for x in sub:
                dead[x] = 1
            v = depth_masked(g, dead)
            for x in sub:
                dead[x] = 0
            best = v if best is None else min(best, v)
    return best if best is not None else 0


# ST-robustness


def _st_witness_masked(
    g: IoDag, dead: bytearray, k2: int, d_min: int = 0, budget: int | None = None, with_depth: bool = False
) -> StWitness | None:
    n_in = len(g.inputs)
    alive_in = [i for i in range(n_in) if not dead[g.inputs[i]]]
    alive_out = [o for o in g.outputs if not dead[o]]
    if k2 > len(alive_in) or k2 > len(alive_out):
        return None
    if budget is not None and math.comb(len(alive_in), k2) > budget:
        raise BudgetExceeded("input subsets", math.comb(len(alive_in), k2), budget)

    dists: dict[int, list[int]] = {}
    if d_min > 0:
        cols = {o: 0 for o in alive_out}
        for i in alive_in:
            dist = dists[i] = longest_from_masked(g, g.inputs[i], dead)
            for o in alive_out:
                if dist[o] >= d_min:
                    cols[o] |= 1 << i
    else:
        masks = input_reach_masks(g, dead)
        cols = {o: masks[o] for o in alive_out}

    chosen = None
    full = 0
    for i in alive_in:
        full |= 1 << i
    # common case: everything still connected
    if sum(1 for o in alive_out if cols[o] & full == full) >= k2:
        chosen = tuple(alive_in[:k2])
    else:
        for combo in combinations(alive_in, k2):
            amask = 0
            for i in combo:
                amask |= 1 << i
            if sum(1 for o in alive_out if cols[o] & amask == amask) >= k2:
                chosen = combo
                break
    if chosen is None:
        return None
    amask = 0
    for i in chosen:
        amask |= 1 << i
    b_side = tuple(o for o in alive_out if cols[o] & amask == amask)
    a_side = tuple(g.inputs[i] for i in chosen)
    depth = None
    if with_depth and a_side and b_side:
        depth = min(
            (dists.get(i) or longest_from_masked(g, g.inputs[i], dead))[o] for i in chosen for o in b_side
        )
    return StWitness(a_side, b_side, depth)


def find_st_witness(
    g: IoDag, deleted: RemovalSet, k2: int, d_min: int = 0, budget: int = SearchMode().budget
) -> StWitness | None:
    """Inputs ``A`` (exactly ``k2``, lexicographically first) and the maximal
    outputs ``B`` reachable from all of ``A`` in ``g - deleted``, if ``|B| >= k2``.

    With ``d_min > 0`` a pair only counts as connected through a path of at
    least ``d_min`` edges. Deleted inputs and outputs are unavailable.
    """
    dead = _dead_mask(g, deleted)
    return _st_witness_masked(g, dead, k2, d_min, budget, with_depth=True)


def check_st_robust(
    g: IoDag,
    k1: int,
    k2: int,
    d_min: int = 0,
    mode: SearchMode = SearchMode(),
    record_depth: bool = False,
    stream: int = 0,
) -> Report:
    """(k1, k2)-ST-robust (or (k1, k2, d_min)): every deletion of <= k1 nodes
    leaves k2 inputs all connected to k2 outputs."""
    t0 = time.perf_counter()
    depths: list[int] = []

    def violates(dead, _):
        w = _st_witness_masked(g, dead, k2, d_min, mode.budget, with_depth=record_depth)
        if w is None:
            return True
        if w.min_pair_depth is not None:
            depths.append(w.min_pair_depth)
        return False

    cex, explored = _scan_nodes(g, k1, mode, violates, stream=stream)
    stats = {"min_pair_depth": min(depths) if depths else None} if record_depth else {}
    return _report("st-robust", {"k1": k1, "k2": k2, "d_min": d_min}, mode, t0, explored, cex, stats=stats)


def _require_square(g: IoDag) -> int:
    if len(g.inputs) != len(g.outputs):
        raise ValueError(f"needs |inputs| == |outputs|, got {len(g.inputs)} and {len(g.outputs)}")
    return len(g.inputs)


def check_maximally_st_robust(
    g: IoDag, c1=1, mode: SearchMode = SearchMode(), d_min: int = 0, record_depth: bool = False
) -> Report:
    """(k, n-k)-ST-robust for every ``0 <= k <= c1 * n``."""
    n = _require_square(g)
    c1 = _fraction(c1)
    if not 0 < c1 <= 1:
        raise ValueError("c1 must lie in (0, 1]")
    t0 = time.perf_counter()
    k_max = math.floor(c1 * n)
    explored = 0
    depths = []
    per_k = {}
    for k in range(k_max + 1):
        sub = check_st_robust(g, k, n - k, d_min, mode, record_depth, stream=k)
        explored += sub.explored
        per_k[k] = sub.explored
        if sub.stats.get("min_pair_depth") is not None:
            depths.append(sub.stats["min_pair_depth"])
        if not sub.holds:
            r = _report("max-st-robust", {"c1": c1, "d_min": d_min}, mode, t0, explored, sub.counterexample)
            r.detail["failed_k"] = k
            r.stats["explored_per_k"] = per_k
            return r
    stats = {"explored_per_k": per_k}
    if record_depth:
        stats["min_pair_depth"] = min(depths) if depths else None
    return _report("max-st-robust", {"c1": c1, "d_min": d_min}, mode, t0, explored, stats=stats)


def measure_max_st_fraction(g: IoDag, mode: SearchMode = SearchMode()) -> tuple[int, Fraction]:
    """Largest ``k_max`` with (k, n-k)-ST-robustness for all ``k <= k_max``.

    Returns ``(k_max, Fraction(k_max, n))``; the fraction is the measured
    ``c`` of c-maximal ST-robustness.
    """
    n = _require_square(g)
    for k in range(n + 1):
        if not check_st_robust(g, k, n - k, mode=mode, stream=k).holds:
            return k - 1, Fraction(max(k - 1, 0), n)
    return n, Fraction(1)


# Superconcentrators and connectors


def check_superconcentrator(g: IoDag, mode: SearchMode = SearchMode()) -> Report:
    """Every r inputs and r outputs are joined by r vertex-disjoint paths."""
    n = _require_square(g)
    t0 = time.perf_counter()
    explored = 0
    params = {"n": n}
    if mode.is_exhaustive:
        total = sum(math.comb(n, r) ** 2 for r in range(1, n + 1))
        if total > mode.budget:
            raise BudgetExceeded("superconcentrator (X, Y) pairs", total, mode.budget)
        cases = (
            (r, xs, ys)
            for r in range(1, n + 1)
            for xs in combinations(g.inputs, r)
            for ys in combinations(g.outputs, r)
        )
    else:
        rng = np.random.default_rng([mode.seed, 1])

        def draw():
            for _ in range(mode.trials):
                r = int(rng.integers(1, n + 1))
                xs = tuple(sorted(int(x) for x in rng.choice(g.inputs, r, replace=False)))
                ys = tuple(sorted(int(y) for y in rng.choice(g.outputs, r, replace=False)))
                yield r, xs, ys

        cases = draw()
    for r, xs, ys in cases:
        explored += 1
        f = max_disjoint_paths(g, xs, ys)
        if f != r:
            detail = {"failed": True, "r": r, "X": list(xs), "Y": list(ys), "flow": f}
            return _report("superconcentrator", params, mode, t0, explored, detail=detail)
    return _report("superconcentrator", params, mode, t0, explored)


def check_connector(
    g: IoDag, mode: SearchMode = SearchMode(), partial: bool = False, max_exhaustive_n: int = 8
) -> Report:
    """Every prescribed injective pairing routes along vertex-disjoint paths.

    By default only full pairings (permutations) are routed: any partial
    pairing extends to a permutation whose routing restricts to it. Pass
    ``partial=True`` to enumerate every r and every partial pairing as well.
    """
    n = _require_square(g)
    t0 = time.perf_counter()
    params = {"n": n, "partial": partial}
    if mode.is_exhaustive:
        if n > max_exhaustive_n:
            raise BudgetExceeded(f"connector check with n={n} > {max_exhaustive_n}", math.factorial(n), mode.budget)
        if partial:
            total = sum(math.comb(n, r) * math.perm(n, r) for r in range(1, n + 1))
            cases = (
                tuple(zip(xs, ys))
                for r in range(1, n + 1)
                for xs in combinations(range(n), r)
                for ys in permutations(range(n), r)
            )
        else:
            total = math.factorial(n)
            cases = (tuple(enumerate(p)) for p in permutations(range(n)))
        if total > mode.budget:
            raise BudgetExceeded("connector pairings", total, mode.budget)
    else:
        rng = np.random.default_rng([mode.seed, 2])

        def draw():
            for _ in range(mode.trials):
                if partial:
                    r = int(rng.integers(1, n + 1))
                    xs = sorted(int(x) for x in rng.choice(n, r, replace=False))
                    ys = [int(y) for y in rng.permutation(n)[:r]]
                    yield tuple(zip(xs, ys))
                else:
                    yield tuple(enumerate(int(y) for y in rng.permutation(n)))

        cases = draw()
    explored = 0
    for pairing in cases:
        explored += 1
        nodes = [(g.inputs[i], g.outputs[j]) for i, j in pairing]
        if route_pairing(g, nodes, mode.budget) is None:
            detail = {"failed": True, "pairing": [list(p) for p in nodes]}
            return _report("connector", params, mode, t0, explored, detail=detail)
    return _report("connector", params, mode, t0, explored)


# Grates, SSDR and hardness


def check_grate(g: IoDag, c0, c1, mode: SearchMode = SearchMode()) -> Report:
    """After any <= c0*n deletions at least c1*n^2 input/output pairs stay connected."""
    n = _require_square(g)
    c0, c1 = _fraction(c0), _fraction(c1)
    size = math.floor(c0 * n)
    need = math.ceil(c1 * n * n)
    t0 = time.perf_counter()
    worst = [n * n]

    def violates(dead, _):
        masks = input_reach_masks(g, dead)
        count = sum(bin(masks[o]).count("1") for o in g.outputs if not dead[o])
        worst[0] = min(worst[0], count)
        return count < need

    cex, explored = _scan_nodes(g, size, mode, violates)
    r = _report("grate", {"c0": c0, "c1": c1}, mode, t0, explored, cex)
    r.stats.update(removal_size=size, pairs_needed=need, min_connected_pairs=worst[0])
    return r


def check_ssdr(g: IoDag, e: int, d: int, mode: SearchMode = SearchMode()) -> Report:
    """(e, d)-source-to-sink-depth-robust, sources and sinks taken from the undeleted graph."""
    sources = set(g.sources)
    sinks = g.sinks
    t0 = time.perf_counter()
    pred = g.pred

    def violates(dead, _):
        dist = [-1] * g.n_nodes
        for v in range(g.n_nodes):
            if dead[v]:
                continue
            best = 0 if v in sources else -1
            for p in pred[v]:
                if dist[p] >= 0 and dist[p] + 1 > best:
                    best = dist[p] + 1
            dist[v] = best
        return max((dist[t] for t in sinks if not dead[t]), default=-1) < d

    cex, explored = _scan_nodes(g, e, mode, violates)
    return _report("ssdr", {"e": e, "d": d}, mode, t0, explored, cex)


def check_hardness(
    g: IoDag, challenge_set: Sequence[int], s: int, t: int, eps, mode: SearchMode = SearchMode()
) -> Report:
    """(s, t, eps)-hardness of ``(g, challenge_set)``.

    A challenged node removed by the adversary counts as failing.
    """
    eps = _fraction(eps)
    vc = list(challenge_set)
    for v in vc:
        if not 0 <= v < g.n_nodes:
            raise ValueError(f"challenge node {v} not in graph")
    need = math.ceil((1 - eps) * len(vc))
    t0 = time.perf_counter()
    worst = [len(vc)]

    def violates(dead, _):
        prof = depth_profile_masked(g, dead)
        good = sum(1 for v in vc if prof[v] >= t)
        worst[0] = min(worst[0], good)
        return good < need

    cex, explored = _scan_nodes(g, s, mode, violates)
    r = _report("hardness", {"s": s, "t": t, "eps": eps, "challenge_size": len(vc)}, mode, t0, explored, cex)
    r.stats.update(needed=need, min_deep_challenges=worst[0])
    return r
