"""Layered layout and SVG / DOT export of string diagrams.

Boxes are assigned layers by longest path from the inputs, ordered inside a
layer by the barycenter of their input ports, and wires are routed as
three-segment polylines.  Output is plain text built with fixed float
formatting so identical diagrams give byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple
from xml.sax.saxutils import escape, quoteattr

from .diagram import BOUNDARY, Diagram, Port
from .ownership import owner_of_label

NEUTRAL = "#333333"
FALLBACK = "#888888"
PITCH = 40.0      # horizontal space per port
LAYER_H = 70.0    # vertical distance between layers
BOX_H = 30.0
MARGIN = 20.0
MIN_SIZE = 100.0
STRUCTURAL = {"phi", "psi", "phiI", "psiI"}

Point = Tuple[float, float]


@dataclass(frozen=True)
class PlacedNode:
    index: int
    layer: int
    x: float        # left edge
    y: float        # top edge
    width: float
    label: str
    kind: str
    in_colours: Tuple[str, ...]
    out_colours: Tuple[str, ...]


@dataclass(frozen=True)
class Route:
    source: Port
    sink: Port
    label: str
    colour: str
    points: Tuple[Point, ...]


@dataclass(frozen=True)
class Layout:
    layers: Tuple[Tuple[int, ...], ...]
    nodes: Tuple[PlacedNode, ...]
    routes: Tuple[Route, ...]
    width: float
    height: float
    input_points: Tuple[Point, ...]
    output_points: Tuple[Point, ...]

    @property
    def colour_of(self) -> Dict[Tuple[Port, Port], str]:
        return {(r.source, r.sink): r.colour for r in self.routes}


def longest_path_layers(d: Diagram) -> List[int]:
    """Layer of each node: one more than the deepest predecessor, inputs being layer 0."""
    layer: Dict[int, int] = {}

    def visit(k: int) -> int:
        if k not in layer:
            layer[k] = 1 + max((visit(j) for j in d.predecessors(k)), default=0)
        return layer[k]

    return [visit(k) for k in range(len(d.nodes))]


def _colour(label: str, colours: Optional[Mapping[str, str]]) -> str:
    owner = owner_of_label(label)
    if owner is None:
        return NEUTRAL
    return (colours or {}).get(owner, FALLBACK)


def layout(d: Diagram, colours: Optional[Mapping[str, str]] = None) -> Layout:
    layer_of = longest_path_layers(d)
    depth = max(layer_of, default=0)
    widths = [PITCH * max(1, len(n.dom), len(n.cod)) for n in d.nodes]

    out_x: Dict[Port, float] = {(BOUNDARY, i): MARGIN + PITCH * (i + 0.5) for i in range(len(d.dom))}
    left: Dict[int, float] = {}
    layers: List[Tuple[int, ...]] = []
    for lv in range(1, depth + 1):
        members = [k for k in range(len(d.nodes)) if layer_of[k] == lv]

        def bary(k: int) -> float:
            xs = [out_x[s] for s in d.node_inputs[k]]
            return sum(xs) / len(xs) if xs else float("inf")

        members.sort(key=lambda k: (bary(k), k))
        cursor = MARGIN
        for k in members:
            b = bary(k)
            want = cursor if b == float("inf") else b - widths[k] / 2
            left[k] = max(cursor, want)
            cursor = left[k] + widths[k] + PITCH / 2
            n_out = len(d.nodes[k].cod)
            for q in range(n_out):
                out_x[(k, q)] = left[k] + widths[k] * (q + 0.5) / n_out
        layers.append(tuple(members))

    def top(k: int) -> float:
        return MARGIN + LAYER_H * layer_of[k] - BOX_H / 2

    bottom_y = MARGIN + LAYER_H * (depth + 1)
    n_outs = len(d.cod)
    right_edge = max(
        [MARGIN + PITCH * len(d.dom), MARGIN + PITCH * n_outs]
        + [left[k] + widths[k] for k in left]
    )
    if not d.nodes and not d.dom:
        width = height = MIN_SIZE
    else:
        width = max(MIN_SIZE, right_edge + MARGIN)
        height = max(MIN_SIZE, bottom_y + MARGIN)
    ins = tuple((MARGIN + PITCH * (i + 0.5), MARGIN) for i in range(len(d.dom)))
    outs = tuple((MARGIN + PITCH * (j + 0.5), bottom_y) for j in range(n_outs))

    def src_point(s: Port) -> Point:
        if s[0] == BOUNDARY:
            return ins[s[1]]
        return (out_x[s], top(s[0]) + BOX_H)

    def snk_point(t: Port) -> Point:
        if t[0] == BOUNDARY:
            return outs[t[1]]
        n_in = len(d.nodes[t[0]].dom)
        return (left[t[0]] + widths[t[0]] * (t[1] + 0.5) / n_in, top(t[0]))

    routes = []
    for s, t in d.wires():
        a, b = src_point(s), snk_point(t)
        bend = min(LAYER_H / 4, (b[1] - a[1]) / 2)
        pts = (a, (a[0], a[1] + bend), (b[0], b[1] - bend), b)
        label = d.source_label(s)
        routes.append(Route(s, t, label, _colour(label, colours), pts))

    placed = tuple(
        PlacedNode(
            k, layer_of[k], left[k], top(k), widths[k], n.label, n.kind,
            tuple(_colour(a, colours) for a in n.dom),
            tuple(_colour(a, colours) for a in n.cod),
        )
        for k, n in enumerate(d.nodes)
    )
    return Layout(tuple(layers), placed, tuple(routes), width, height, ins, outs)


# -- SVG ----------------------------------------------------------------------------


def _f(v: float) -> str:
    return f"{v:.1f}"


def _pts(points) -> str:
    return " ".join(f"{_f(x)},{_f(y)}" for x, y in points)


def _node_svg(n: PlacedNode, structural_labels: bool) -> List[str]:
    x, y, w, h = n.x, n.y, n.width, BOX_H
    head = f'<g class="node" data-kind={quoteattr(n.kind)} data-label={quoteattr(n.label)}>'
    body: List[str] = []
    if n.kind in STRUCTURAL and not structural_labels:
        colour = (n.in_colours or n.out_colours or (NEUTRAL,))[0]
        if n.kind in ("phi", "phiI"):   # merge: wide top, point at the bottom
            tri = [(x, y), (x + w, y), (x + w / 2, y + h)]
        else:                           # fork: point at the top
            tri = [(x + w / 2, y), (x, y + h), (x + w, y + h)]
        body.append(f'<polygon points="{_pts(tri)}" fill="{colour}" stroke="{colour}"/>')
    elif n.kind == "gamma" and not structural_labels:
        before = n.in_colours[0] if n.in_colours else NEUTRAL
        after = n.out_colours[0] if n.out_colours else NEUTRAL
        mid = y + h / 2
        body.append(f'<rect x="{_f(x)}" y="{_f(y + h / 4)}" width="{_f(w)}" height="{_f(h / 4)}" fill="{before}"/>')
        body.append(f'<rect x="{_f(x)}" y="{_f(mid)}" width="{_f(w)}" height="{_f(h / 4)}" fill="{after}"/>')
    else:
        body.append(
            f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" rx="4" '
            f'fill="#ffffff" stroke="{NEUTRAL}"/>'
        )
        body.append(
            f'<text x="{_f(x + w / 2)}" y="{_f(y + h / 2 + 5)}" text-anchor="middle" '
            f'font-family="monospace" font-size="13">{escape(n.label)}</text>'
        )
    return [head] + ["  " + s for s in body] + ["</g>"]


def render_svg(lay: Layout, show_structural_labels: bool = False) -> str:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(lay.width)}" height="{_f(lay.height)}" '
        f'viewBox="0 0 {_f(lay.width)} {_f(lay.height)}">',
        f'<rect class="background" x="0" y="0" width="{_f(lay.width)}" height="{_f(lay.height)}" fill="#ffffff"/>',
        '<g class="wires">',
    ]
    for r in lay.routes:
        out.append(
            f'<polyline class="wire" data-label={quoteattr(r.label)} points="{_pts(r.points)}" '
            f'fill="none" stroke="{r.colour}" stroke-width="2"/>'
        )
    out.append("</g>")
    out.append('<g class="nodes">')
    for n in lay.nodes:
        out.extend(_node_svg(n, show_structural_labels))
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- DOT ----------------------------------------------------------------------------


def _dot_id(p: Port, boundary: str) -> str:
    return f"{boundary}{p[1]}" if p[0] == BOUNDARY else f"n{p[0]}"


def render_dot(lay: Layout, show_structural_labels: bool = False) -> str:
    out = ["digraph diagram {", "  rankdir=TB;", '  node [fontname="monospace"];']
    for i in range(len(lay.input_points)):
        out.append(f"  in{i} [shape=point];")
    for n in lay.nodes:
        if n.kind in STRUCTURAL and not show_structural_labels:
            shape = "invtriangle" if n.kind in ("phi", "phiI") else "triangle"
            out.append(f'  n{n.index} [shape={shape}, label="", style=filled, fillcolor="{n.in_colours[0] if n.in_colours else n.out_colours[0]}"];')
        else:
            label = n.label.replace("\\", "\\\\").replace('"', '\\"')
            out.append(f'  n{n.index} [shape=box, label="{label}"];')
    for j in range(len(lay.output_points)):
        out.append(f"  out{j} [shape=point];")
    for r in lay.routes:
        label = r.label.replace('"', '\\"')
        out.append(
            f'  {_dot_id(r.source, "in")} -> {_dot_id(r.sink, "out")} '
            f'[label="{label}", color="{r.colour}", tailport=s, headport=n];'
        )
    out.append("}")
    return "\n".join(out) + "\n"
