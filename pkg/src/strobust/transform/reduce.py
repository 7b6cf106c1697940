"""Edge-to-node reduction: every node ``v`` becomes a maximally ST-robust
metanode with ``delta(v) = max(indeg, outdeg)`` inputs/outputs, and every edge
``(u, v)`` becomes an edge from an output of ``u``'s metanode to an input of
``v``'s metanode.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable

from ..construct import single_node, superconcentrator
from ..fileformat import parse, render
from ..graph import GraphError, IoDag, PathRec, RemovalSet, longest_path_masked
from ..verify import StWitness, _st_witness_masked

MetanodeFamily = Callable[[int], IoDag]


def butterfly_family(size: int) -> IoDag:
    """Butterfly-backed connectors; size 1 is the single node."""
    if size <= 1:
        return single_node()
    return superconcentrator(size)


@dataclass(frozen=True)
class ReduceMap:
    """Bookkeeping that ties the reduced graph back to the genesis graph.

    ``pi_in[v]`` maps each in-neighbour ``u`` of ``v`` to a local input node
    of ``v``'s metanode; ``pi_out[v]`` maps out-neighbours to local outputs.
    ``external_edges`` maps genesis edges to reduced-graph edges.
    """

    genesis: IoDag
    reduced: IoDag
    ranges: tuple[tuple[int, int], ...]
    delta: tuple[int, ...]
    metanode_size: tuple[int, ...]
    metanodes: dict[int, IoDag]
    pi_in: tuple[dict[int, int], ...]
    pi_out: tuple[dict[int, int], ...]
    external_edges: dict[tuple[int, int], tuple[int, int]]

    def metanode(self, v: int) -> IoDag:
        return self.metanodes[self.metanode_size[v]]

    def local(self, v: int, x: int) -> int:
        return x - self.ranges[v][0]

    def glob(self, v: int, x: int) -> int:
        return self.ranges[v][0] + x

    def owner(self, x: int) -> int:
        """Genesis node whose metanode contains reduced node ``x``."""
        lo, hi = 0, len(self.ranges) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.ranges[mid][0] <= x:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def to_dict(self) -> dict:
        return {
            "genesis": render(self.genesis),
            "reduced_nodes": self.reduced.n_nodes,
            "ranges": [list(r) for r in self.ranges],
            "delta": list(self.delta),
            "metanode_size": list(self.metanode_size),
            "metanodes": {str(k): render(g) for k, g in sorted(self.metanodes.items())},
            "pi_in": [{str(u): p for u, p in sorted(m.items())} for m in self.pi_in],
            "pi_out": [{str(w): p for w, p in sorted(m.items())} for m in self.pi_out],
            "external_edges": [[list(e), list(r)] for e, r in sorted(self.external_edges.items())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "ReduceMap":
        genesis = parse(d["genesis"])
        metanodes = {int(k): parse(v) for k, v in d["metanodes"].items()}
        sizes = tuple(d["metanode_size"])
        reduced = _assemble(genesis, metanodes, sizes)[0]
        return cls(
            genesis,
            reduced,
            tuple(tuple(r) for r in d["ranges"]),
            tuple(d["delta"]),
            sizes,
            metanodes,
            tuple({int(u): p for u, p in m.items()} for m in d["pi_in"]),
            tuple({int(w): p for w, p in m.items()} for m in d["pi_out"]),
            {tuple(e): tuple(r) for e, r in d["external_edges"]},
        )

    @classmethod
    def from_json(cls, text: str) -> "ReduceMap":
        return cls.from_dict(json.loads(text))


def _assemble(g: IoDag, metanodes: dict[int, IoDag], sizes):
    ranges = []
    base = 0
    edges = []
    for v in range(g.n_nodes):
        m = metanodes[sizes[v]]
        ranges.append((base, base + m.n_nodes))
        edges.extend((base + a, base + b) for a, b in m.edges)
        base += m.n_nodes
    pi_in = [dict() for _ in range(g.n_nodes)]
    pi_out = [dict() for _ in range(g.n_nodes)]
    external = {}
    for v in range(g.n_nodes):
        m = metanodes[sizes[v]]
        # sorted neighbours onto ports in port order
        for idx, u in enumerate(sorted(g.pred[v])):
            pi_in[v][u] = m.inputs[idx]
        for idx, w in enumerate(sorted(g.succ[v])):
            pi_out[v][w] = m.outputs[idx]
    for u, v in g.edges:
        e = (ranges[u][0] + pi_out[u][v], ranges[v][0] + pi_in[v][u])
        external[(u, v)] = e
        edges.append(e)
    ins = tuple(ranges[v][0] + x for v in g.inputs for x in metanodes[sizes[v]].inputs)
    outs = tuple(ranges[v][0] + x for v in g.outputs for x in metanodes[sizes[v]].outputs)
    reduced = IoDag(base, tuple(edges), ins, outs, f"reduce[{g.label}]")
    return reduced, tuple(ranges), tuple(pi_in), tuple(pi_out), external


def reduce(g: IoDag, family: MetanodeFamily = butterfly_family, uniform: int | None = None) -> tuple[IoDag, ReduceMap]:
    """Replace every node by a metanode from ``family``.

    ``family(size)`` must return a graph with ``size`` inputs and outputs.
    Isolated nodes use size 1. With ``uniform`` every node uses
    ``family(uniform)``, which must cover the largest degree.
    """
    delta = tuple(max(g.indegree(v), g.outdegree(v)) for v in range(g.n_nodes))
    if uniform is not None:
        if uniform < max(delta, default=0):
            raise ValueError(f"uniform size {uniform} below maximum degree {max(delta)}")
        sizes = tuple(uniform for _ in delta)
    else:
        sizes = tuple(max(d, 1) for d in delta)
    metanodes = {}
    for s in sorted(set(sizes)):
        m = family(s)
        if len(m.inputs) != s or len(m.outputs) != s:
            raise GraphError(f"family returned {len(m.inputs)}x{len(m.outputs)} terminals for size {s}")
        metanodes[s] = m
    reduced, ranges, pi_in, pi_out, external = _assemble(g, metanodes, sizes)
    rmap = ReduceMap(g, reduced, ranges, delta, sizes, metanodes, pi_in, pi_out, external)
    return reduced, rmap


@dataclass(frozen=True)
class MetanodeState:
    """Deleted nodes and surviving witness of one metanode, in local ids."""

    deleted: frozenset[int]
    repairable: bool
    witness: StWitness | None


def metanode_states(rmap: ReduceMap, s: RemovalSet | Iterable[int]) -> list[MetanodeState]:
    """Per genesis node: the deleted local nodes and, when fewer than the
    metanode's port count are deleted, the first input/output witness."""
    members = s.members if isinstance(s, RemovalSet) else set(s)
    if isinstance(s, RemovalSet):
        if s.kind != "node":
            raise GraphError("expected a node removal set on the reduced graph")
        s.validate(rmap.reduced)
    per: list[set[int]] = [set() for _ in rmap.ranges]
    for x in members:
        v = rmap.owner(x)
        per[v].add(x - rmap.ranges[v][0])
    states = []
    for v, local in enumerate(per):
        m = rmap.metanode(v)
        ports = len(m.inputs)
        if len(local) >= ports:
            states.append(MetanodeState(frozenset(local), False, None))
            continue
        dead = bytearray(m.n_nodes)
        for x in local:
            dead[x] = 1
        w = _st_witness_masked(m, dead, ports - len(local), with_depth=True)
        states.append(MetanodeState(frozenset(local), w is not None, w))
    return states


def _irrepairable_from_states(rmap: ReduceMap, states: list[MetanodeState]) -> frozenset[tuple[int, int]]:
    bad = set()
    for u, v in rmap.genesis.edges:
        su, sv = states[u], states[v]
        if not (su.repairable and sv.repairable):
            bad.add((u, v))
        elif rmap.pi_out[u][v] not in su.witness.outputs or rmap.pi_in[v][u] not in sv.witness.inputs:
            bad.add((u, v))
    return frozenset(bad)


def irrepairable_edges(g: IoDag, rmap: ReduceMap, s: RemovalSet) -> frozenset[tuple[int, int]]:
    """Genesis edges that a deletion ``s`` on the reduced graph makes unusable.

    An edge is irrepairable when either endpoint's metanode lost at least as
    many nodes as it has ports, or when its port on either side is outside
    that metanode's surviving input/output witness.
    """
    if g != rmap.genesis:
        raise GraphError("graph does not match the reduce map")
    return _irrepairable_from_states(rmap, metanode_states(rmap, s))


def lift_path(rmap: ReduceMap, p: PathRec, s: RemovalSet) -> PathRec:
    """Map a path of the genesis graph avoiding irrepairable edges to a path of
    the reduced graph avoiding ``s``.

    The lifted path enters the first metanode at a witness input and leaves
    the last at a witness output; inside each metanode it follows a longest
    surviving path between the two ports.
    """
    states = metanode_states(rmap, s)
    s_irr = _irrepairable_from_states(rmap, states)
    g = rmap.genesis
    for e in p.edges:
        if not g.has_edge(*e):
            raise GraphError(f"path edge {e} not in genesis graph")
        if e in s_irr:
            raise GraphError(f"path uses irrepairable edge {e}")
    vs = p.nodes
    for v in vs:
        if not states[v].repairable:
            raise GraphError(f"path visits irrepairable node {v}")

    def inner(v: int, a_choices, b_choices) -> list[int]:
        m = rmap.metanode(v)
        dead = bytearray(m.n_nodes)
        for x in states[v].deleted:
            dead[x] = 1
        best = None
        for a in a_choices:
            for b in b_choices:
                q = longest_path_masked(m, a, b, dead)
                if q is not None and (best is None or q.length > best.length):
                    best = q
        if best is None:
            raise GraphError(f"no surviving path inside metanode of {v}")
        return [rmap.glob(v, x) for x in best.nodes]

    out: list[int] = []
    for idx, v in enumerate(vs):
        w = states[v].witness
        entry = [rmap.pi_in[v][vs[idx - 1]]] if idx > 0 else list(w.inputs)
        leave = [rmap.pi_out[v][vs[idx + 1]]] if idx + 1 < len(vs) else list(w.outputs)
        out.extend(inner(v, entry, leave))
    return PathRec(tuple(out))
