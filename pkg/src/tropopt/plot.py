"""Schematic SVG drawings of two-dimensional max-plus problems.

For a closure matrix ``S`` (``S >= I``, ``S S = S``) the set ``{S u : u >= l}``
equals ``{x : x >= S l, S x = x}``.  In the plane this is the intersection of
at most four half-planes, ``x1 >= m1``, ``x2 >= m2``, ``x1 - x2 >= s12`` and
``x2 - x1 >= s21``, which is clipped to the view box and drawn as a polygon
(or as a segment when ``s12 + s21 = 0`` collapses it onto a line).
"""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .ineq import SolutionSet, is_feasible
from .linalg import Mat, mat_mul, star
from .optimizer import OptResult
from .semifield import Semifield
from .serialize import ProblemFile, format_number

__all__ = ["PlotConfig", "region_polygon", "render_svg"]

Point = tuple[float, float]
HalfPlane = tuple[float, float, float]  # a1*x1 + a2*x2 >= c


@dataclass(frozen=True)
class PlotConfig:
    size: int = 600
    margin: float = 0.10
    min_span: float = 4.0


@dataclass(frozen=True)
class View:
    x0: float
    y0: float
    span: float
    size: int

    def screen(self, p: Point) -> Point:
        k = self.size / self.span
        return ((p[0] - self.x0) * k, self.size - (p[1] - self.y0) * k)

    @property
    def corners(self) -> list[Point]:
        x0, y0, s = self.x0, self.y0, self.span
        return [(x0, y0), (x0 + s, y0), (x0 + s, y0 + s), (x0, y0 + s)]


def _clip(poly: list[Point], hp: HalfPlane) -> list[Point]:
    a1, a2, c = hp
    out: list[Point] = []
    for k, p in enumerate(poly):
        q = poly[(k + 1) % len(poly)]
        fp = a1 * p[0] + a2 * p[1] - c
        fq = a1 * q[0] + a2 * q[1] - c
        if fp >= 0:
            out.append(p)
        if (fp >= 0) != (fq >= 0):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    # drop repeated vertices produced when an edge lies on the clip line
    return [p for k, p in enumerate(out) if not _same(p, out[k - 1])] if len(out) > 1 else out


def _same(p: Point, q: Point) -> bool:
    return abs(p[0] - q[0]) < 1e-12 and abs(p[1] - q[1]) < 1e-12


def _half_planes(ss: SolutionSet) -> tuple[list[HalfPlane], float | None]:
    """Half-planes of the set; second item is ``s21`` when the set is a line."""
    S = ss.generator.to_rows()
    m = mat_mul(ss.generator, ss.lower).to_list()
    hps: list[HalfPlane] = []
    if m[0] is not None:
        hps.append((1.0, 0.0, m[0]))
    if m[1] is not None:
        hps.append((0.0, 1.0, m[1]))
    s12, s21 = S[0][1], S[1][0]
    if s12 is not None:
        hps.append((1.0, -1.0, s12))
    if s21 is not None:
        hps.append((-1.0, 1.0, s21))
    line = s21 if s12 is not None and s21 is not None and abs(s12 + s21) < 1e-9 else None
    return hps, line


def region_polygon(ss: SolutionSet, view: View) -> tuple[str, list[Point]]:
    """``("polygon", pts)`` or ``("segment", [start, end])`` in world coordinates."""
    if ss.field is not Semifield.MAX_PLUS or ss.n != 2:
        raise ValueError("only 2-D max-plus solution sets can be drawn")
    hps, line = _half_planes(ss)
    if line is None:
        poly = view.corners
        for hp in hps:
            if not poly:
                break
            poly = _clip(poly, hp)
        return "polygon", poly
    # x2 = x1 + line for x1 in [lo, hi]
    lo, hi = view.x0, view.x0 + view.span
    lo = max(lo, view.y0 - line)
    hi = min(hi, view.y0 + view.span - line)
    for a1, a2, c in hps:
        if a1 == 1.0 and a2 == 0.0:
            lo = max(lo, c)
        elif a1 == 0.0 and a2 == 1.0:
            lo = max(lo, c - line)
    if lo > hi:
        return "segment", []
    return "segment", [(lo, lo + line), (hi, hi + line)]


def _columns(M: Mat) -> list[tuple[float | None, float | None]]:
    rows = M.to_rows()
    return [(rows[0][k], rows[1][k]) for k in range(2)]


def _fmt(v: float) -> str:
    return repr(format_number(round(v, 3)))


def _pts(points: list[Point]) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)


def _view(points: list[Point], cfg: PlotConfig) -> View:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    span = max(max(xs) - min(xs), max(ys) - min(ys), cfg.min_span)
    pad = cfg.margin * span
    cx = (max(xs) + min(xs)) / 2
    cy = (max(ys) + min(ys)) / 2
    full = span + 2 * pad
    return View(cx - full / 2, cy - full / 2, full, cfg.size)


def render_svg(problem: ProblemFile, result, cfg: PlotConfig | None = None) -> str:
    """SVG 1.1 document for a 2-D max-plus problem and its solver result."""
    cfg = cfg or PlotConfig()
    if problem.field is not Semifield.MAX_PLUS or problem.n != 2:
        raise ValueError("plots need a 2x2 max-plus problem")
    A, C, g = problem.A, problem.C, problem.g
    if C is None:
        C = Mat.zeros(A.field, 2)
    if g is None:
        g = Mat.zeros(A.field, 2, 1)

    constraint_set = SolutionSet(star(C), g) if is_feasible(C) else None
    solution_set = result.solutions if isinstance(result, OptResult) else None
    minimal = result.minimal if isinstance(result, OptResult) else None

    features: list[Point] = [(0.0, 0.0)]
    vecs = {"A": _columns(A)}
    if constraint_set is not None:
        vecs["C*"] = _columns(constraint_set.generator)
    if solution_set is not None:
        vecs["S"] = _columns(solution_set.generator)
    for cols in vecs.values():
        for x, y in cols:
            features.append((0.0 if x is None else x, 0.0 if y is None else y))
    gl = g.to_list()
    if None not in gl:
        features.append((gl[0], gl[1]))
    if minimal is not None:
        mx = minimal.to_list()
        features.append((mx[0], mx[1]))
        # leave room for the part of the set beyond the minimal point
        features.append((mx[0] + 2.0, mx[1] + 2.0))
    view = _view(features, cfg)

    def scr(p: Point) -> str:
        sx, sy = view.screen(p)
        return f'x="{_fmt(sx)}" y="{_fmt(sy)}"'

    def line(p: Point, q: Point, cls: str, extra: str = "") -> str:
        (x1, y1), (x2, y2) = view.screen(p), view.screen(q)
        return (f'<line class="{cls}" x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}"'
                f' data-world="{_pts([p, q])}"{extra}/>')

    def shape(kind: str, pts: list[Point], cls: str, style: str) -> str:
        if not pts:
            return f"<!-- {cls}: empty inside view -->"
        screen_pts = _pts([view.screen(p) for p in pts])
        tag = "polygon" if kind == "polygon" else "polyline"
        return f'<{tag} class="{cls}" points="{screen_pts}" data-world="{_pts(pts)}" {style}/>'

    size = cfg.size
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        "<defs>",
        '<pattern id="hatch" patternUnits="userSpaceOnUse" width="8" height="8" patternTransform="rotate(45)">',
        '<line x1="0" y1="0" x2="0" y2="8" stroke="#888" stroke-width="1"/>',
        "</pattern>",
        '<marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto">',
        '<path d="M0,0 L10,5 L0,10 z"/>',
        "</marker>",
        "</defs>",
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        '<g id="axes" stroke="black" stroke-width="1">',
    ]
    x_lo, x_hi = view.x0, view.x0 + view.span
    y_lo, y_hi = view.y0, view.y0 + view.span
    if y_lo <= 0 <= y_hi:
        out.append(line((x_lo, 0.0), (x_hi, 0.0), "axis", ' marker-end="url(#arrow)"'))
    if x_lo <= 0 <= x_hi:
        out.append(line((0.0, y_lo), (0.0, y_hi), "axis", ' marker-end="url(#arrow)"'))
    out.append("</g>")

    if constraint_set is not None:
        kind, pts = region_polygon(constraint_set, view)
        out.append('<g id="constraints">')
        out.append(shape(kind, pts, "feasible", 'fill="url(#hatch)" stroke="#555" stroke-width="1"'))
        out.append("</g>")
    if solution_set is not None:
        kind, pts = region_polygon(solution_set, view)
        style = ('fill="none" stroke="black" stroke-width="4"' if kind == "segment"
                 else 'fill="#4a7fd0" fill-opacity="0.35" stroke="black" stroke-width="3"')
        out.append('<g id="solution">')
        out.append(shape(kind, pts, "solution", style))
        out.append("</g>")

    colours = {"A": "#c0392b", "C*": "#27ae60", "S": "#2c3e50"}
    out.append('<g id="columns" stroke-width="2">')
    for name, cols in vecs.items():
        for k, (x, y) in enumerate(cols, start=1):
            end = (x_lo if x is None else x, y_lo if y is None else y)
            dash = ' stroke-dasharray="4 3"' if x is None or y is None else ""
            extra = f' stroke="{colours[name]}" marker-end="url(#arrow)"{dash}'
            out.append(line((0.0, 0.0), end, f"column column-{escape(name)}", extra))
            out.append(f'<text {scr(end)} font-size="12" fill="{colours[name]}">{escape(name)}[{k}]</text>')
    out.append("</g>")

    if None not in gl:
        gx, gy = view.screen((gl[0], gl[1]))
        out.append(f'<circle class="lower-bound" cx="{_fmt(gx)}" cy="{_fmt(gy)}" r="4" fill="none" '
                   f'stroke="#27ae60" stroke-width="2" data-world="{_pts([(gl[0], gl[1])])}"/>')
        out.append(f'<text {scr((gl[0], gl[1]))} font-size="12">g</text>')
    if minimal is not None:
        mx = minimal.to_list()
        px, py = view.screen((mx[0], mx[1]))
        out.append(f'<circle id="minimal" class="minimal" cx="{_fmt(px)}" cy="{_fmt(py)}" r="5" fill="black" '
                   f'data-world="{_pts([(mx[0], mx[1])])}"/>')
        out.append(f'<text {scr((mx[0], mx[1]))} font-size="12">x0</text>')
    if isinstance(result, OptResult):
        caption = f"theta = {_fmt(result.theta.value)}"
    else:
        caption = getattr(result, "status", "")
    out.append(f'<text x="10" y="20" font-size="14">{escape(caption)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

