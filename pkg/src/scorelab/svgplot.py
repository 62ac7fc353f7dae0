"""Deterministic SVG rendering from CSV files.

Output is plain string-built SVG with a fixed canvas, a fixed tick
algorithm, and fixed number formatting, so identical inputs produce
byte-identical files; golden-file comparisons are safe.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

WIDTH, HEIGHT = 800.0, 500.0
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70.0, 70.0, 42.0, 48.0
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf")
HIST_BIN_WIDTH = 0.2


@dataclass(frozen=True)
class PlotSpec:
    """What to draw from a CSV.

    kind "lines": columns `y` against column `x`.
    kind "dual_axis": `y` on the left scale and `y2` on the right scale.
    kind "histogram": column `value` binned at `bin_width` over [lo, hi],
    one overlaid histogram per distinct entry of `group` when given.
    """

    kind: str
    x: str | None = None
    y: tuple[str, ...] = ()
    y2: tuple[str, ...] = ()
    value: str | None = None
    group: str | None = None
    bin_width: float = HIST_BIN_WIDTH
    lo: float | None = None
    hi: float | None = None
    title: str = ""

    def __post_init__(self):
        if self.kind not in ("lines", "dual_axis", "histogram"):
            raise ValueError(f"unknown plot kind {self.kind!r}")
        if self.kind == "histogram":
            if self.value is None or self.lo is None or self.hi is None:
                raise ValueError("histogram plots need value, lo and hi")
            if self.bin_width <= 0 or self.hi <= self.lo:
                raise ValueError("histogram range or bin width is degenerate")
        else:
            if self.x is None or not self.y:
                raise ValueError(f"{self.kind} plots need x and at least one y column")


def _read_columns(csv_path: Path, names: list[str]) -> dict[str, list[str]]:
    with open(csv_path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        for name in names:
            if name not in header:
                raise ValueError(f"{csv_path.name}: missing column {name!r}")
        out: dict[str, list[str]] = {name: [] for name in names}
        for row in reader:
            for name in names:
                out[name].append(row[name])
    return out


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10.0 ** np.floor(np.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = np.ceil(lo / step) * step
    ticks = np.arange(first, hi + step * 0.5, step)
    return [float(t) for t in ticks]


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _px(v: float) -> str:
    return f"{v:.2f}"


class _Canvas:
    def __init__(self, title: str):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:g}" height="{HEIGHT:g}" '
            f'viewBox="0 0 {WIDTH:g} {HEIGHT:g}">',
            f'<rect width="{WIDTH:g}" height="{HEIGHT:g}" fill="white"/>',
        ]
        if title:
            self.text(WIDTH / 2, 24, title, anchor="middle", size=15)

    def text(self, x, y, content, anchor="start", size=11, fill="#000000"):
        self.parts.append(
            f'<text x="{_px(x)}" y="{_px(y)}" font-family="monospace" font-size="{size}" '
            f'text-anchor="{anchor}" fill="{fill}">{content}</text>'
        )

    def line(self, x1, y1, x2, y2, stroke="#888888", width=1.0):
        self.parts.append(
            f'<line x1="{_px(x1)}" y1="{_px(y1)}" x2="{_px(x2)}" y2="{_px(y2)}" '
            f'stroke="{stroke}" stroke-width="{width:g}"/>'
        )

    def polyline(self, points, stroke, width=1.5):
        coords = " ".join(f"{_px(x)},{_px(y)}" for x, y in points)
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="{width:g}"/>'
        )

    def polygon(self, points, fill, opacity=0.45):
        coords = " ".join(f"{_px(x)},{_px(y)}" for x, y in points)
        self.parts.append(f'<polygon points="{coords}" fill="{fill}" fill-opacity="{opacity:g}"/>')

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


class _Scale:
    def __init__(self, lo: float, hi: float, px_lo: float, px_hi: float):
        if hi <= lo:
            lo, hi = lo - 1.0, hi + 1.0
        self.lo, self.hi = lo, hi
        self.px_lo, self.px_hi = px_lo, px_hi

    def __call__(self, v: float) -> float:
        t = (v - self.lo) / (self.hi - self.lo)
        return self.px_lo + t * (self.px_hi - self.px_lo)


def _padded(values: np.ndarray) -> tuple[float, float]:
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        return lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _axes(cv: _Canvas, xs: _Scale, ys: _Scale, right: _Scale | None = None):
    x0, x1 = MARGIN_L, WIDTH - MARGIN_R
    y0, y1 = HEIGHT - MARGIN_B, MARGIN_T
    cv.line(x0, y0, x1, y0, "#000000")
    cv.line(x0, y0, x0, y1, "#000000")
    for t in _nice_ticks(xs.lo, xs.hi):
        px = xs(t)
        cv.line(px, y0, px, y0 + 4, "#000000")
        cv.text(px, y0 + 16, _fmt(t), anchor="middle")
    for t in _nice_ticks(ys.lo, ys.hi):
        py = ys(t)
        cv.line(x0 - 4, py, x0, py, "#000000")
        cv.text(x0 - 7, py + 3.5, _fmt(t), anchor="end")
    if right is not None:
        cv.line(x1, y0, x1, y1, "#000000")
        for t in _nice_ticks(right.lo, right.hi):
            py = right(t)
            cv.line(x1, py, x1 + 4, py, "#000000")
            cv.text(x1 + 7, py + 3.5, _fmt(t), anchor="start")


def _legend(cv: _Canvas, labels: list[tuple[str, str]]):
    x = MARGIN_L + 8
    y = MARGIN_T + 14
    for label, color in labels:
        cv.line(x, y - 4, x + 18, y - 4, color, 2.4)
        cv.text(x + 24, y, label)
        y += 15


def render_svg(csv_path: str | Path, spec: PlotSpec, out_path: str | Path | None = None) -> Path:
    """Render one CSV into a deterministic SVG; returns the output path.

    A CSV with zero data rows yields an axes-only plot.  A CSV lacking a
    column named by the spec is rejected with the missing column named.
    """
    csv_path = Path(csv_path)
    out_path = Path(out_path) if out_path is not None else csv_path.with_suffix(".svg")
    if spec.kind == "histogram":
        content = _render_histogram(csv_path, spec)
    else:
        content = _render_lines(csv_path, spec)
    out_path.write_text(content, encoding="utf-8")
    return out_path


def _render_lines(csv_path: Path, spec: PlotSpec) -> str:
    names = [spec.x] + list(spec.y) + list(spec.y2)
    data = _read_columns(csv_path, names)
    cv = _Canvas(spec.title)
    n = len(data[spec.x])
    if n == 0:
        xs = _Scale(0.0, 1.0, MARGIN_L, WIDTH - MARGIN_R)
        ys = _Scale(0.0, 1.0, HEIGHT - MARGIN_B, MARGIN_T)
        _axes(cv, xs, ys)
        return cv.render()

    cols = {name: np.array([float(v) for v in data[name]]) for name in names}
    xvals = cols[spec.x]
    left = np.concatenate([cols[name] for name in spec.y])
    xs = _Scale(*_padded(xvals), MARGIN_L, WIDTH - MARGIN_R)
    ys = _Scale(*_padded(left), HEIGHT - MARGIN_B, MARGIN_T)
    right = None
    if spec.y2:
        rvals = np.concatenate([cols[name] for name in spec.y2])
        right = _Scale(*_padded(rvals), HEIGHT - MARGIN_B, MARGIN_T)
    _axes(cv, xs, ys, right)

    labels = []
    series = [(name, ys) for name in spec.y] + [(name, right) for name in spec.y2]
    for idx, (name, scale) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        pts = [(xs(x), scale(y)) for x, y in zip(xvals, cols[name])]
        cv.polyline(pts, color)
        labels.append((name, color))
    _legend(cv, labels)
    cv.text(WIDTH / 2, HEIGHT - 10, spec.x, anchor="middle")
    return cv.render()


def _render_histogram(csv_path: Path, spec: PlotSpec) -> str:
    names = [spec.value] + ([spec.group] if spec.group else [])
    data = _read_columns(csv_path, names)
    cv = _Canvas(spec.title)
    edges = np.arange(spec.lo, spec.hi + spec.bin_width * 0.5, spec.bin_width)
    if edges.size < 2:
        edges = np.array([spec.lo, spec.hi])

    values = np.array([float(v) for v in data[spec.value]]) if data[spec.value] else np.array([])
    if spec.group:
        groups = data[spec.group]
        order = sorted(set(groups))
        grouped = [
            (g, values[np.array([gg == g for gg in groups], dtype=bool)]) for g in order
        ]
    else:
        grouped = [("", values)]

    counts = [np.histogram(v, bins=edges)[0] if v.size else np.zeros(edges.size - 1) for _, v in grouped]
    peak = max((float(c.max()) for c in counts), default=0.0)
    xs = _Scale(float(edges[0]), float(edges[-1]), MARGIN_L, WIDTH - MARGIN_R)
    ys = _Scale(0.0, peak if peak > 0 else 1.0, HEIGHT - MARGIN_B, MARGIN_T)
    _axes(cv, xs, ys)

    labels = []
    for idx, ((gname, _), c) in enumerate(zip(grouped, counts)):
        color = PALETTE[idx % len(PALETTE)]
        base = ys(0.0)
        pts = [(xs(float(edges[0])), base)]
        for b in range(c.size):
            top = ys(float(c[b]))
            pts.append((xs(float(edges[b])), top))
            pts.append((xs(float(edges[b + 1])), top))
        pts.append((xs(float(edges[-1])), base))
        cv.polygon(pts, color)
        if gname:
            labels.append((gname, color))
    if labels:
        _legend(cv, labels)
    cv.text(WIDTH / 2, HEIGHT - 10, spec.value, anchor="middle")
    return cv.render()
