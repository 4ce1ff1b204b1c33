"""Adams-style charts: a small document model with SVG and TSV renderers.

Coordinates are Adams coordinates (x, y) = (t - s, s).  Edges join dots by
index; the fixed kinds carry fixed displacements (v2: (6, 1), h1: (1, 1),
h2: (3, 1), d<r>: (-1, r)).  "custom" edges may join any two dots.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from fractions import Fraction
from xml.sax.saxutils import escape, quoteattr

__all__ = ["Dot", "Edge", "ChartDoc", "EDGE_SLOPES", "render", "parse_tsv", "from_dims", "from_ext_chart"]

EDGE_SLOPES = {"v2": (6, 1), "h1": (1, 1), "h2": (3, 1)}
_DR = re.compile(r"d(\d+)$")

CELL = 24
MARGIN = 40
MARK_R = 3


@dataclass(frozen=True)
class Dot:
    x: int
    y: int
    count: int = 1
    label: str = ""
    style: str = "ext"


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    kind: str = "custom"


def edge_displacement(kind: str) -> tuple[int, int] | None:
    if kind in EDGE_SLOPES:
        return EDGE_SLOPES[kind]
    m = _DR.match(kind)
    if m:
        return (-1, int(m.group(1)))
    if kind == "custom":
        return None
    raise ValueError(f"unknown edge kind {kind!r}")


@dataclass
class ChartDoc:
    dots: list[Dot] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    lines: list[tuple[Fraction, Fraction]] = field(default_factory=list)  # y = slope * x + intercept
    parabolas: list[Fraction] = field(default_factory=list)  # masses
    title: str = ""

    def add_dot(self, x: int, y: int, count: int = 1, label: str = "", style: str = "ext") -> int:
        self.dots.append(Dot(x, y, count, label, style))
        return len(self.dots) - 1

    def add_edge(self, src: int, dst: int, kind: str = "custom") -> None:
        self.edges.append(Edge(src, dst, kind))
        self._check_edge(self.edges[-1])

    def _check_edge(self, e: Edge) -> None:
        n = len(self.dots)
        if not (0 <= e.src < n and 0 <= e.dst < n):
            raise ValueError(f"edge {e} references a missing dot")
        disp = edge_displacement(e.kind)
        if disp is not None:
            a, b = self.dots[e.src], self.dots[e.dst]
            if (b.x - a.x, b.y - a.y) != disp:
                raise ValueError(f"{e.kind} edge from ({a.x},{a.y}) to ({b.x},{b.y}) has the wrong slope")

    def validate(self) -> None:
        for d in self.dots:
            if d.count < 1:
                raise ValueError(f"dot at ({d.x},{d.y}) has count {d.count}")
        for e in self.edges:
            self._check_edge(e)


def from_dims(xy: dict[tuple[int, int], int], style: str = "ext") -> ChartDoc:
    """One dot per nonzero (x, y) entry, in sorted order."""
    doc = ChartDoc()
    for (x, y), n in sorted(xy.items()):
        if n:
            doc.add_dot(x, y, n, "", style)
    return doc


def from_ext_chart(chart) -> ChartDoc:
    """Dots from an ``ExtChart``; its (kind, (s,t,k), (s,t,k), label) annotations become edges."""
    doc = ChartDoc()
    where = {}
    for (s, t), n in sorted(chart.dims.items()):
        if n:
            where[(s, t)] = doc.add_dot(t - s, s, n, ",".join(chart.names.get((s, t), [])))
    for kind, a, b, _label in chart.annotations:
        doc.add_edge(where[(a[0], a[1])], where[(b[0], b[1])], kind)
    return doc


# --- SVG --------------------------------------------------------------------

def _extent(doc: ChartDoc) -> tuple[int, int]:
    xs = [d.x for d in doc.dots] or [0]
    ys = [d.y for d in doc.dots] or [0]
    return max(max(xs), 1) + 1, max(max(ys), 1) + 1


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _svg(doc: ChartDoc) -> bytes:
    doc.validate()
    w, h = _extent(doc)
    width = 2 * MARGIN + w * CELL
    height = 2 * MARGIN + h * CELL

    def px(x: float, y: float) -> tuple[str, str]:
        return _fmt(MARGIN + x * CELL), _fmt(height - MARGIN - y * CELL)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]
    if doc.title:
        out.append(f"<title>{escape(doc.title)}</title>")
    # axes
    x0, y0 = px(0, 0)
    x1, _ = px(w, 0)
    _, y1 = px(0, h)
    out.append('<g class="axes" stroke="black" stroke-width="1">')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>')
    out.append("</g>")
    out.append('<g class="ticks" font-size="9" text-anchor="middle">')
    for x in range(0, w + 1, 2):
        tx, ty = px(x, 0)
        out.append(f'<text x="{tx}" y="{_fmt(float(ty) + 14)}">{x}</text>')
    for y in range(0, h + 1, 2):
        tx, ty = px(0, y)
        out.append(f'<text x="{_fmt(float(tx) - 12)}" y="{_fmt(float(ty) + 3)}">{y}</text>')
    out.append("</g>")
    # overlays
    for slope, icpt in doc.lines:
        a = px(0, float(icpt))
        b = px(w, float(slope * w + icpt))
        out.append(f'<line class="overlay-line" x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" '
                   'stroke="gray" stroke-dasharray="4 2"/>')
    for m in doc.parabolas:
        pts = []
        for k in range(0, 4 * h + 1):
            n = k / 4
            x = float(4 / Fraction(m)) * n * n - 3 * n + 6
            if x > w:
                break
            pts.append(",".join(px(x, n)))
        out.append(f'<polyline class="overlay-parabola" fill="none" stroke="gray" points="{" ".join(pts)}"/>')
    # edges
    for e in doc.edges:
        a, b = doc.dots[e.src], doc.dots[e.dst]
        p, q = px(a.x, a.y), px(b.x, b.y)
        out.append(f'<line class={quoteattr("edge " + e.kind)} x1="{p[0]}" y1="{p[1]}" x2="{q[0]}" y2="{q[1]}" '
                   'stroke="black"/>')
    # dots
    for d in doc.dots:
        cx, cy = px(d.x, d.y)
        title = f"<title>{escape(d.label)}</title>" if d.label else ""
        if d.count > 4:
            out.append(f'<text class={quoteattr("mark numeral " + d.style)} x="{cx}" y="{_fmt(float(cy) + 4)}" '
                       f'font-size="11" text-anchor="middle">{d.count}{title}</text>')
            continue
        for k in range(d.count):
            off = (k - (d.count - 1) / 2) * 2.5 * MARK_R
            out.append(f'<circle class={quoteattr("mark " + d.style)} cx="{_fmt(float(cx) + off)}" cy="{cy}" '
                       f'r="{MARK_R}">{title}</circle>')
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")


# --- TSV --------------------------------------------------------------------

def _tsv(doc: ChartDoc) -> bytes:
    doc.validate()
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(["#record", "fields"])
    for d in doc.dots:
        w.writerow(["dot", d.x, d.y, d.count, d.label, d.style])
    for e in doc.edges:
        w.writerow(["edge", e.kind, e.src, e.dst])
    for slope, icpt in doc.lines:
        w.writerow(["line", str(Fraction(slope)), str(Fraction(icpt))])
    for m in doc.parabolas:
        w.writerow(["parabola", str(Fraction(m))])
    return buf.getvalue().encode("utf-8")


def parse_tsv(data: bytes | str) -> ChartDoc:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    doc = ChartDoc()
    edges = []
    for row in csv.reader(io.StringIO(text), delimiter="\t"):
        if not row or row[0].startswith("#"):
            continue
        kind = row[0]
        if kind == "dot":
            doc.dots.append(Dot(int(row[1]), int(row[2]), int(row[3]), row[4], row[5]))
        elif kind == "edge":
            edges.append(Edge(int(row[2]), int(row[3]), row[1]))
        elif kind == "line":
            doc.lines.append((Fraction(row[1]), Fraction(row[2])))
        elif kind == "parabola":
            doc.parabolas.append(Fraction(row[1]))
        else:
            raise ValueError(f"unknown TSV record {kind!r}")
    doc.edges = edges
    doc.validate()
    return doc


def render(doc: ChartDoc, fmt: str = "svg") -> bytes:
    if fmt == "svg":
        return _svg(doc)
    if fmt == "tsv":
        return _tsv(doc)
    raise ValueError(f"unknown format {fmt!r}")
