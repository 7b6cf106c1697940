"""Line-oriented text format for :class:`IoDag`.

::

    # comment
    nodes 6
    inputs 0 1
    outputs 4 5
    label butterfly k=1
    edge 0 2
    ...

Rendering is canonical: headers in fixed order, edges sorted.
"""

from __future__ import annotations

from pathlib import Path

from .graph import GraphError, IoDag


class ParseError(GraphError):
    pass


def render(g: IoDag) -> str:
    lines = [
        f"nodes {g.n_nodes}",
        "inputs" + "".join(f" {x}" for x in g.inputs),
        "outputs" + "".join(f" {x}" for x in g.outputs),
    ]
    if g.label:
        lines.append(f"label {g.label}")
    lines.extend(f"edge {u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse(text: str) -> IoDag:
    n = None
    inputs: list[int] = []
    outputs: list[int] = []
    label = ""
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith("label") else raw.strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        try:
            if key == "nodes":
                n = int(rest)
            elif key == "inputs":
                inputs = [int(x) for x in rest.split()]
            elif key == "outputs":
                outputs = [int(x) for x in rest.split()]
            elif key == "label":
                label = rest.strip()
            elif key == "edge":
                u, v = rest.split()
                edges.append((int(u), int(v)))
            else:
                raise ParseError(f"line {lineno}: unknown directive {key!r}")
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"line {lineno}: {exc}") from None
    if n is None:
        raise ParseError("missing 'nodes' header")
    try:
        return IoDag(n, tuple(edges), tuple(inputs), tuple(outputs), label)
    except GraphError as exc:
        raise ParseError(str(exc)) from None


def load(path: str | Path) -> IoDag:
    return parse(Path(path).read_text(encoding="utf-8"))


def save(g: IoDag, path: str | Path) -> None:
    Path(path).write_text(render(g), encoding="utf-8")
