"""Deterministic pictures of digital segments.

SVG is the main format: every coordinate is an integer multiple of the
cell size (cell centres sit at half a cell, so the size must be even).
PPM (binary ``P6``) needs nothing but the standard library. The sweep
figure goes through matplotlib's Agg backend with metadata stripped, so
repeated runs write identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .segments import Point, Segment

PALETTE = (
    (31, 119, 180), (255, 127, 14), (44, 160, 44), (214, 39, 40), (148, 103, 189),
    (140, 86, 75), (227, 119, 194), (127, 127, 127), (188, 189, 34), (23, 190, 207),
)

SVG_DOCTYPE = (
    '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
    '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">'
)


@dataclass
class RenderSpec:
    """What to draw: segments on the lattice rectangle ``lo..hi``."""

    segments: list[Segment]
    lo: Point
    hi: Point
    cell: int = 12
    chords: bool = True
    grid: bool = True
    title: str = ""

    def __post_init__(self) -> None:
        if self.cell < 2 or self.cell % 2:
            raise ValueError("cell size must be an even integer >= 2")
        for seg in self.segments:
            for x, y in (seg[0], seg[-1]):
                if not (self.lo[0] <= x <= self.hi[0] and self.lo[1] <= y <= self.hi[1]):
                    raise ValueError(f"endpoint {(x, y)} outside the canvas {self.lo}..{self.hi}")

    @property
    def width(self) -> int:
        return (self.hi[0] - self.lo[0] + 1) * self.cell

    @property
    def height(self) -> int:
        return (self.hi[1] - self.lo[1] + 1) * self.cell

    def corner(self, p: Point) -> tuple[int, int]:
        """Top-left pixel of the cell holding ``p`` (y grows downwards)."""
        return (p[0] - self.lo[0]) * self.cell, (self.hi[1] - p[1]) * self.cell

    def centre(self, p: Point) -> tuple[int, int]:
        x, y = self.corner(p)
        return x + self.cell // 2, y + self.cell // 2


def _hex(rgb: Sequence[int]) -> str:
    return "#%02x%02x%02x" % tuple(rgb)


def render_svg(spec: RenderSpec) -> str:
    c = spec.cell
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        SVG_DOCTYPE,
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{spec.width}" '
        f'height="{spec.height}" viewBox="0 0 {spec.width} {spec.height}">',
    ]
    if spec.title:
        out.append(f"<title>{_escape(spec.title)}</title>")
    out.append(f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="#ffffff"/>')
    if spec.grid:
        out.append('<g stroke="#e0e0e0" stroke-width="1">')
        for i in range(spec.hi[0] - spec.lo[0] + 2):
            out.append(f'<line x1="{i * c}" y1="0" x2="{i * c}" y2="{spec.height}"/>')
        for j in range(spec.hi[1] - spec.lo[1] + 2):
            out.append(f'<line x1="0" y1="{j * c}" x2="{spec.width}" y2="{j * c}"/>')
        out.append("</g>")
    for i, seg in enumerate(spec.segments):
        colour = _hex(PALETTE[i % len(PALETTE)])
        out.append(f'<g fill="{colour}" fill-opacity="0.6">')
        for p in seg:
            if spec.lo[0] <= p[0] <= spec.hi[0] and spec.lo[1] <= p[1] <= spec.hi[1]:
                x, y = spec.corner(p)
                out.append(f'<rect x="{x}" y="{y}" width="{c}" height="{c}"/>')
        out.append("</g>")
    if spec.chords:
        out.append('<g stroke="#000000" stroke-width="1">')
        for seg in spec.segments:
            (x1, y1), (x2, y2) = spec.centre(seg[0]), spec.centre(seg[-1])
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_ppm(spec: RenderSpec) -> bytes:
    w, h, c = spec.width, spec.height, spec.cell
    buf = bytearray(b"\xff" * (w * h * 3))

    def put(x: int, y: int, rgb: Sequence[int]) -> None:
        if 0 <= x < w and 0 <= y < h:
            k = 3 * (y * w + x)
            buf[k:k + 3] = bytes(rgb)

    if spec.grid:
        for y in range(h):
            for x in range(0, w, c):
                put(x, y, (224, 224, 224))
        for y in range(0, h, c):
            for x in range(w):
                put(x, y, (224, 224, 224))
    for i, seg in enumerate(spec.segments):
        rgb = PALETTE[i % len(PALETTE)]
        for p in seg:
            x0, y0 = spec.corner(p)
            for y in range(y0 + 1, y0 + c):
                for x in range(x0 + 1, x0 + c):
                    put(x, y, rgb)
    if spec.chords:
        for seg in spec.segments:
            (x1, y1), (x2, y2) = spec.centre(seg[0]), spec.centre(seg[-1])
            n = max(abs(x2 - x1), abs(y2 - y1), 1)
            # integer rounding of t/n keeps the raster free of float jitter
            for t in range(n + 1):
                put(x1 + ((x2 - x1) * t * 2 + n) // (2 * n), y1 + ((y2 - y1) * t * 2 + n) // (2 * n), (0, 0, 0))
    return b"P6\n%d %d\n255\n" % (w, h) + bytes(buf)


def sweep_figure(rows, path: str, title: str = "") -> None:
    """Plot the largest distance per length against the logarithmic bound."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # a fixed salt stops the SVG writer from drawing random element ids
    matplotlib.rcParams["svg.hashsalt"] = "digiseg"

    Ls = [r.L for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4), dpi=100)
    ax.plot(Ls, [r.hausdorff for r in rows], ".", ms=3, label="largest H")
    ax.plot(Ls, [r.bound for r in rows], "-", lw=1, label="sqrt(5) log2 L")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("L (steps)")
    ax.set_ylabel("Hausdorff distance")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper left")
    fig.tight_layout()
    fmt = path.rsplit(".", 1)[-1].lower()
    metadata = {"Software": None} if fmt == "png" else {"Creator": None, "Date": None} if fmt == "svg" else None
    fig.savefig(path, metadata=metadata)
    plt.close(fig)
