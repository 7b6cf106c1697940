"""Proof-of-space overlay: a graph's edge pattern laid over the inputs of a
maximally ST-robust graph, with challenges drawn from its outputs."""

from __future__ import annotations

from ..graph import IoDag
from .reduce import MetanodeFamily, butterfly_family


def overlay(g: IoDag, family: MetanodeFamily = butterfly_family, challenge_size: int | None = None) -> tuple[IoDag, list[int]]:
    """Return ``(H_G, V_C)``.

    ``H_G`` is ``family(n)`` for ``n = g.n_nodes`` plus an edge
    ``inputs[u] -> inputs[v]`` for every edge ``(u, v)`` of ``g``; ``V_C`` is
    the first ``challenge_size`` outputs (all of them by default).
    """
    n = g.n_nodes
    if challenge_size is None:
        challenge_size = n
    if not 0 <= challenge_size <= n:
        raise ValueError(f"challenge_size {challenge_size} outside [0, {n}]")
    m = family(max(n, 1))
    edges = list(m.edges) + [(m.inputs[u], m.inputs[v]) for u, v in g.edges]
    h, remap = IoDag.from_edges(m.n_nodes, edges, m.inputs, m.outputs, f"overlay[{g.label}] on [{m.label}]")
    return h, list(h.outputs[:challenge_size])
