"""End-to-end property suites.

Each suite composes generators, transforms and checkers into a list of
claim lines. Every line carries the property name of the underlying
:class:`~strobust.verify.Report`, so a suite report can be traced back to
the individual checks it ran.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .construct import amplify, sandwich_parts
from .graph import IoDag, PathRec, RemovalSet
from .search import SearchMode, subsets
from .transform.overlay import overlay
from .transform.reduce import ReduceMap, butterfly_family, irrepairable_edges, lift_path, metanode_states, reduce
from .verify import (
    HOLDS,
    REFUTED,
    SCHEMA,
    Report,
    _report,
    check_connector,
    check_depth_robust,
    check_edge_depth_robust,
    check_hardness,
    check_maximally_st_robust,
    check_ssdr,
    measure_max_st_fraction,
    min_depth_after_removal,
)


@dataclass
class ClaimLine:
    claim: str
    report: Report

    def to_dict(self) -> dict:
        d = self.report.to_dict()
        d.pop("wall_time")
        return {"claim": self.claim, "property": self.report.property, "verdict": self.report.verdict, "report": d}


@dataclass
class SuiteReport:
    suite: str
    params: dict
    lines: list[ClaimLine] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(line.report.holds for line in self.lines)

    def add(self, claim: str, report: Report) -> Report:
        self.lines.append(ClaimLine(claim, report))
        return report

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "suite": self.suite,
            "params": self.params,
            "verdict": HOLDS if self.holds else REFUTED,
            "lines": [line.to_dict() for line in self.lines],
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def summary(self) -> str:
        out = [f"{self.suite}: {'holds' if self.holds else 'refuted'}"]
        for line in self.lines:
            out.append(f"  [{line.report.verdict}] {line.report.property}: {line.claim}")
        return "\n".join(out)


# Reduce bookkeeping checks


def check_irrepairable_bound(g: IoDag, rmap: ReduceMap, size: int, mode: SearchMode = SearchMode()) -> Report:
    """``|S_irr| <= 2|S|`` for every node deletion ``S`` of the reduced graph of ``size`` nodes."""
    t0 = time.perf_counter()
    explored = 0
    worst = 0
    for sub in subsets(rmap.reduced.n_nodes, size, mode, what="irrepairable bound"):
        explored += 1
        s = RemovalSet.nodes(sub)
        n_irr = len(irrepairable_edges(g, rmap, s))
        worst = max(worst, n_irr)
        if n_irr > 2 * size:
            r = _report("irrepairable-bound", {"size": size}, mode, t0, explored, s)
            r.stats["max_irrepairable"] = n_irr
            return r
    r = _report("irrepairable-bound", {"size": size}, mode, t0, explored)
    r.stats["max_irrepairable"] = worst
    return r


def genesis_paths(g: IoDag, banned: frozenset = frozenset(), usable=None) -> list[PathRec]:
    """Every path of ``g`` (single nodes included) avoiding ``banned`` edges
    and staying on nodes where ``usable[v]`` is true."""
    ok = usable if usable is not None else [True] * g.n_nodes
    out = []

    def walk(path):
        out.append(PathRec(tuple(path)))
        v = path[-1]
        for w in g.succ[v]:
            if ok[w] and (v, w) not in banned:
                path.append(w)
                walk(path)
                path.pop()

    for v in range(g.n_nodes):
        if ok[v]:
            walk([v])
    return out


def min_io_distance(m: IoDag) -> int:
    """Shortest input-to-output path length over all reachable pairs; a lower
    bound on any lifted stretch through the metanode."""
    best = None
    for a in m.inputs:
        dist = {a: 0}
        frontier = [a]
        while frontier:
            nxt = []
            for v in frontier:
                for w in m.succ[v]:
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        nxt.append(w)
            frontier = nxt
        for b in m.outputs:
            if b in dist and (best is None or dist[b] < best):
                best = dist[b]
    return best or 0


def check_path_lift(rmap: ReduceMap, size: int, mode: SearchMode = SearchMode(), uniform_bound: bool = False) -> Report:
    """Every path of ``G - S_irr`` lifts to a valid path of ``reduced - S`` at
    least as long; with ``uniform_bound`` the lifted length must also reach
    ``length(p) * d_delta`` where ``d_delta`` is the metanode I/O distance."""
    t0 = time.perf_counter()
    g = rmap.genesis
    sizes = set(rmap.metanode_size)
    d_delta = min(min_io_distance(rmap.metanodes[k]) for k in sizes) if uniform_bound else 0
    explored = 0
    lifted = 0
    for sub in subsets(rmap.reduced.n_nodes, size, mode, what="path lift"):
        explored += 1
        s = RemovalSet.nodes(sub)
        states = metanode_states(rmap, s)
        s_irr = irrepairable_edges(g, rmap, s)
        for p in genesis_paths(g, s_irr, [st.repairable for st in states]):
            q = lift_path(rmap, p, s)
            lifted += 1
            bound = max(p.length, p.length * d_delta)
            if not q.is_valid_in(rmap.reduced, sub) or q.length < bound:
                r = _report("path-lift", {"size": size, "uniform": uniform_bound}, mode, t0, explored, s)
                r.detail.update(path=list(p.nodes), lifted=list(q.nodes), bound=bound)
                return r
    r = _report("path-lift", {"size": size, "uniform": uniform_bound}, mode, t0, explored)
    r.stats.update(paths_lifted=lifted, d_delta=d_delta)
    return r


# Suites


def edge_frontier(g: IoDag, mode: SearchMode = SearchMode()) -> list[tuple[int, int]]:
    """Maximal ``e`` for every attained ``d``: the (e, d) edge-depth-robust pairs
    that are not implied by another pair."""
    pairs = [(e, min_depth_after_removal(g, e, mode, edges=True)) for e in range(g.n_edges + 1)]
    return [(e, d) for e, d in pairs if d >= 1 and not any(e2 > e and d2 >= d for e2, d2 in pairs)]


def theorem2(g: IoDag, seed: int, samples: int = 200, mode: SearchMode = SearchMode()) -> SuiteReport:
    """Edge-depth robustness of ``g`` carries over to node robustness of the
    reduced graph at half the budget; the irrepairable-edge bound and path
    lifting are sampled on the side."""
    rep = SuiteReport("theorem2", {"graph": g.label, "seed": seed, "samples": samples})
    reduced, rmap = reduce(g, butterfly_family)
    rep.notes.update(reduced_nodes=reduced.n_nodes, reduced_max_indegree=reduced.max_indegree)
    frontier = edge_frontier(g, mode)
    rep.notes["edge_frontier"] = [list(p) for p in frontier]
    for e, d in frontier:
        rep.add(f"genesis is ({e}, {d})-edge-depth-robust", check_edge_depth_robust(g, e, d, mode))
        rep.add(
            f"reduced graph is ({e // 2}, {d})-depth-robust",
            check_depth_robust(reduced, e // 2, d, mode),
        )
    sample = SearchMode.sampled(samples, seed, mode.budget)
    for size in (1, 2, 3):
        rep.add(f"|S_irr| <= 2|S| for |S| = {size}", check_irrepairable_bound(g, rmap, size, sample))
    for size in (0, 1, 2):
        m = SearchMode.exhaustive(mode.budget) if size == 0 else sample
        rep.add(f"paths of G - S_irr lift for |S| = {size}", check_path_lift(rmap, size, m))
    return rep


def theorem5(g: IoDag, mode: SearchMode = SearchMode()) -> SuiteReport:
    """A connector is maximally ST-robust."""
    rep = SuiteReport("theorem5", {"graph": g.label})
    conn = rep.add("graph is a connector", check_connector(g, mode))
    if conn.holds:
        rep.add("graph is maximally ST-robust", check_maximally_st_robust(g, 1, mode))
    else:
        rep.notes["vacuous"] = "not a connector; the implication is not exercised"
    return rep


def theorem6(n: int, tau: int, seed: int, mode: SearchMode = SearchMode()) -> SuiteReport:
    """Amplifying a c-maximally ST-robust sandwich yields a maximally ST-robust graph."""
    rep = SuiteReport("theorem6", {"n": n, "tau": tau, "seed": seed})
    sw = sandwich_parts(n, tau, seed)
    k_max, c = measure_max_st_fraction(sw.graph, mode)
    rep.notes.update(sandwich_nodes=sw.graph.n_nodes, measured_k_max=k_max, measured_c=str(c))
    if c == 0:
        rep.notes["vacuous"] = "sandwich is not c-maximally ST-robust for any c > 0"
        return rep
    rep.add(f"sandwich is {c}-maximally ST-robust", check_maximally_st_robust(sw.graph, c, mode))
    amp = amplify(sw.graph, c)
    rep.notes["amplified_nodes"] = amp.n_nodes
    rep.add("amplified graph is maximally ST-robust", check_maximally_st_robust(amp, 1, mode))
    return rep


def theorem7(g: IoDag, s: int = 1, mode: SearchMode = SearchMode()) -> SuiteReport:
    """If ``g`` is ``(s, d)``-depth-robust, the overlay is ``(s, d+1, s/|V_C|)``-hard
    with every output challenged; one quantum below that the check refutes."""
    rep = SuiteReport("theorem7", {"graph": g.label, "s": s})
    d = min_depth_after_removal(g, s, mode)
    rep.add(f"genesis is ({s}, {d})-depth-robust", check_depth_robust(g, s, d, mode))
    h, vc = overlay(g)
    eps = Fraction(s, len(vc))
    rep.notes.update(overlay_nodes=h.n_nodes, challenge_size=len(vc), t=d + 1, eps=str(eps))
    rep.add(f"overlay is ({s}, {d + 1}, {eps})-hard", check_hardness(h, vc, s, d + 1, eps, mode))
    below = eps - Fraction(1, len(vc))
    tight = check_hardness(h, vc, s, d + 1, below, mode)
    rep.notes["tightness"] = {"eps": str(below), "verdict": tight.verdict, "evidence": tight.evidence()}
    return rep


def theorem8(g: IoDag, mode: SearchMode = SearchMode()) -> SuiteReport:
    """A maximally ST-robust graph with pairwise depth ``d`` is ``(n-1, d)``-SSDR."""
    rep = SuiteReport("theorem8", {"graph": g.label})
    n = len(g.inputs)
    rep.notes["inputs_are_sources"] = set(g.inputs) <= set(g.sources)
    rep.notes["outputs_are_sinks"] = set(g.outputs) <= set(g.sinks)
    st = rep.add("graph is maximally ST-robust", check_maximally_st_robust(g, 1, mode, record_depth=True))
    d = st.stats.get("min_pair_depth")
    rep.notes["min_pair_depth"] = d
    if st.holds and d is not None:
        rep.add(f"graph is ({n - 1}, {d})-SSDR", check_ssdr(g, n - 1, d, mode))
    return rep


SUITES = ("theorem2", "theorem5", "theorem6", "theorem7", "theorem8")

