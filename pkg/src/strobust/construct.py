"""Generators for butterflies, superconcentrators, base depth-robust graphs,
the three-layer randomized graph, the superconcentrator sandwich and the
ST-robustness amplifier.

Randomized generators take ``rng``: an integer seed or a
``numpy.random.Generator``. Integer seeds feed numpy's PCG64 bit generator,
so a seed gives the same graph on every platform.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graph import IoDag, disjoint_union
from .search import SearchMode
from .verify import _fraction, check_depth_robust, check_superconcentrator, min_depth_after_removal

# Butterflies above this dimension are refused (2^k * (2k+1) nodes).
MAX_BUTTERFLY_DIM = 12


def make_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.Generator(np.random.PCG64(rng))


def butterfly(k: int) -> IoDag:
    """Two back-to-back FFT graphs with a shared middle level.

    Levels ``0..2k`` of ``2^k`` nodes; node ``j`` on level ``l`` is
    ``l * 2^k + j`` and has parents ``j`` and ``j ^ 2^b`` on level ``l - 1``,
    with ``b`` running ``k-1..0`` and then ``0..k-1``.
    """
    if k < 0:
        raise ValueError("dimension must be >= 0")
    if k > MAX_BUTTERFLY_DIM:
        raise ValueError(f"dimension {k} above size budget {MAX_BUTTERFLY_DIM}")
    w = 1 << k
    bits = list(range(k - 1, -1, -1)) + list(range(k))
    edges = []
    for level, b in enumerate(bits, start=1):
        for j in range(w):
            v = level * w + j
            edges.append(((level - 1) * w + j, v))
            edges.append(((level - 1) * w + (j ^ (1 << b)), v))
    return IoDag(
        (2 * k + 1) * w,
        tuple(edges),
        tuple(range(w)),
        tuple(range(2 * k * w, (2 * k + 1) * w)),
        f"butterfly k={k}",
    )


def _truncated_butterfly(n: int) -> IoDag:
    k = max(n - 1, 0).bit_length()
    b = butterfly(k)
    if n == len(b.inputs):
        return b
    return IoDag(b.n_nodes, b.edges, b.inputs[:n], b.outputs[:n], f"butterfly k={k} truncated to n={n}")


@lru_cache(maxsize=None)
def superconcentrator(n: int, check: bool = True, seed: int = 0) -> IoDag:
    """An n-superconcentrator: ``butterfly(log2 n)``, or the next power-of-two
    butterfly with only its first ``n`` inputs/outputs designated.

    With ``check`` the result is certified by flow (exhaustive up to n = 8,
    sampled with ``seed`` beyond) and a failure raises.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    g = _truncated_butterfly(n)
    if check:
        mode = SearchMode.exhaustive() if n <= 8 else SearchMode.sampled(500, seed)
        report = check_superconcentrator(g, mode)
        if not report.holds:
            raise AssertionError(f"superconcentrator self-check failed: {report.evidence()}")
    return g


@dataclass(frozen=True)
class BaseGraphCert:
    """A candidate base graph with the robustness pair it was measured to have."""

    graph: IoDag
    e: int
    d: int
    robustness_kind: str = "node"
    verified_mode: SearchMode = SearchMode()

    def to_dict(self) -> dict:
        return {
            "label": self.graph.label,
            "n_nodes": self.graph.n_nodes,
            "e": self.e,
            "d": self.d,
            "robustness_kind": self.robustness_kind,
            "verified_mode": self.verified_mode.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def spine_graph(n: int, rng, tau_base: int = 2) -> IoDag:
    """Chain ``0 -> ... -> n-1`` plus ``tau_base`` random long edges into each node.

    Long edges into ``v`` come from ``[0, v-2]``; repeated draws collapse.
    """
    gen = make_rng(rng)
    edges = {(i, i + 1) for i in range(n - 1)}
    for v in range(2, n):
        for u in gen.integers(0, v - 1, size=tau_base):
            edges.add((int(u), v))
    return IoDag(n, tuple(edges), (0,) if n else (), (n - 1,) if n else (), f"spine n={n} tau_base={tau_base}")


def base_depth_robust(
    n: int, rng, e: int = 0, tau_base: int = 2, mode: SearchMode | None = None
) -> BaseGraphCert:
    """Stand-in base graph with a measured (e, d) certificate.

    ``d`` is the smallest depth left by any ``e``-node deletion: exact when
    the search is exhaustive (default whenever ``C(n, e)`` fits the budget),
    an upper bound on the true value when sampled.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    g = spine_graph(n, rng, tau_base)
    if e >= n:
        raise ValueError(f"e={e} must be below n={n}")
    if mode is None:
        mode = SearchMode.exhaustive()
        if math.comb(n, e) > mode.budget:
            mode = SearchMode.sampled(1000, seed=0)
    d = min_depth_after_removal(g, e, mode)
    report = check_depth_robust(g, e, d, mode)
    assert report.holds
    return BaseGraphCert(g, e, d, "node", mode)


def three_grates(h1: IoDag, h2: IoDag, h3: IoDag, tau: int, rng) -> IoDag:
    """Three disjoint copies of a base graph with ``tau`` uniform random edges
    into every node of layers two and three from the layer below.

    Layers occupy consecutive index blocks of equal size; inputs are layer
    one, outputs layer three.
    """
    if tau < 1:
        raise ValueError("tau must be >= 1")
    if not (h1.n_nodes == h2.n_nodes == h3.n_nodes and h1.edges == h2.edges == h3.edges):
        raise ValueError("layers must be structurally identical")
    gen = make_rng(rng)
    n = h1.n_nodes
    edges, _ = disjoint_union([h1, h2, h3])
    extra = set()
    # top layer first, then the middle, matching the sampling order of the construction
    for upper, lower in ((2, 1), (1, 0)):
        for v in range(n):
            for x in gen.integers(0, n, size=tau):
                extra.add((lower * n + int(x), upper * n + v))
    return IoDag(
        3 * n,
        tuple(set(edges) | extra),
        tuple(range(n)),
        tuple(range(2 * n, 3 * n)),
        f"three-grates n={n} tau={tau}",
    )


def grate_layers(g3: IoDag) -> list[range]:
    """Node ranges of the three layers of a :func:`three_grates` graph."""
    n = len(g3.inputs)
    if g3.n_nodes != 3 * n:
        raise ValueError("not a three-layer graph")
    return [range(0, n), range(n, 2 * n), range(2 * n, 3 * n)]


@dataclass(frozen=True)
class Sandwich:
    graph: IoDag
    base: BaseGraphCert
    sc_nodes: int
    grates_offset: int


def sandwich_parts(n: int, tau: int, rng, base_e: int = 0, tau_base: int = 2) -> Sandwich:
    if n < 1:
        raise ValueError("n must be >= 1")
    gen = make_rng(rng)
    base_rng, grate_rng = gen.spawn(2)
    sc = superconcentrator(n)
    base = base_depth_robust(n, base_rng, min(base_e, n - 1), tau_base)
    h = base.graph
    mid = three_grates(h, h, h, tau, grate_rng)
    edges, (o1, o2, o3) = disjoint_union([sc, mid, sc])
    # index-wise seams: SC1 output i -> layer-one node i, layer-three node i -> SC2 input i
    for i in range(n):
        edges.append((o1 + sc.outputs[i], o2 + mid.inputs[i]))
        edges.append((o2 + mid.outputs[i], o3 + sc.inputs[i]))
    g = IoDag(
        2 * sc.n_nodes + mid.n_nodes,
        tuple(edges),
        tuple(o1 + x for x in sc.inputs),
        tuple(o3 + x for x in sc.outputs),
        f"sandwich n={n} tau={tau}",
    )
    return Sandwich(g, base, sc.n_nodes, o2)


def sandwich(n: int, tau: int, rng) -> IoDag:
    """Superconcentrator -> three-layer graph -> superconcentrator."""
    return sandwich_parts(n, tau, rng).graph


def amplify(m: IoDag, c) -> IoDag:
    """``ceil(1/c)`` copies of ``m`` between fresh input and output rows.

    Fresh input ``i_k`` feeds input ``k`` of every copy; output ``k`` of every
    copy feeds fresh output ``o_k``.
    """
    c = _fraction(c)
    if not 0 < c <= 1:
        raise ValueError("c must lie in (0, 1]")
    n = len(m.inputs)
    if len(m.outputs) != n:
        raise ValueError("m needs as many outputs as inputs")
    copies = math.ceil(1 / c)
    size = m.n_nodes
    out_base = n + copies * size
    edges = []
    for j in range(copies):
        off = n + j * size
        edges.extend((u + off, v + off) for u, v in m.edges)
        for k in range(n):
            edges.append((k, off + m.inputs[k]))
            edges.append((off + m.outputs[k], out_base + k))
    return IoDag(
        out_base + n,
        tuple(edges),
        tuple(range(n)),
        tuple(range(out_base, out_base + n)),
        f"amplify copies={copies} of [{m.label}]",
    )


def amplify_copies(c) -> int:
    return math.ceil(1 / _fraction(c))


def single_node(label: str = "M_1") -> IoDag:
    """The one-node graph that is both input and output."""
    return IoDag(1, (), (0,), (0,), label)
