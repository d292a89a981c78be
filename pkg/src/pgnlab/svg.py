"""SVG rendering of the polygonal partition (16 px per unit, cosmetic only)."""

from __future__ import annotations

from fractions import Fraction

from .psystem import Region, cell_pieces, enumerate_partition, region_polygon

SCALE = 16
PAD = 24

_TONES = {1: "#d9d9d9", 2: "#969696", 3: "#4a4a4a"}  # light / medium / dark


def _fmt(x) -> str:
    return f"{float(x):.2f}"


class _Canvas:
    def __init__(self, q1_max: int, q2_floor: int):
        self.q1_max = q1_max
        self.q2_floor = q2_floor
        self.w = q1_max * SCALE + 2 * PAD
        self.h = (q1_max - q2_floor) * SCALE + 2 * PAD
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.w}" '
            f'height="{self.h}" viewBox="0 0 {self.w} {self.h}">',
            f'<rect width="{self.w}" height="{self.h}" fill="white"/>',
        ]

    def pt(self, q1, q2):
        return (PAD + float(q1) * SCALE, PAD + (self.q1_max - float(q2)) * SCALE)

    def polygon(self, pts, fill="none", stroke="black", width=1.0, opacity=1.0):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (self.pt(*p) for p in pts))
        self.parts.append(
            f'<polygon points="{coords}" fill="{fill}" fill-opacity="{opacity}" '
            f'stroke="{stroke}" stroke-width="{width}"/>'
        )

    def line(self, p, q, stroke="black", width=1.0, dash=None):
        (x1, y1), (x2, y2) = self.pt(*p), self.pt(*q)
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{width}"{d}/>'
        )

    def text(self, p, s, size=11, anchor="middle", fill="black"):
        x, y = self.pt(*p)
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
            f'text-anchor="{anchor}" fill="{fill}" font-family="sans-serif">{s}</text>'
        )

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"])


def _centroid(poly):
    n = len(poly)
    return (sum(Fraction(p[0]) for p in poly) / n, sum(Fraction(p[1]) for p in poly) / n)


def render_partition(q1_max: int, p1_shading: bool = False, q2_floor: int | None = None) -> str:
    """The partition restricted to q1 <= q1_max as an SVG document.

    With shading, every affine piece is toned by which expression gives the
    smallest component (light: q1 - a, medium: q2 - b, dark: c), restricted
    to the square 0 <= q2 <= q1 <= q1_max.
    """
    if q2_floor is None:
        q2_floor = 0 if p1_shading else -2
    cv = _Canvas(q1_max, q2_floor)
    regions = enumerate_partition(q1_max)

    if p1_shading:
        for reg in regions:
            for perm, poly in cell_pieces(reg, floor_y=q2_floor):
                rank_of_x, rank_of_y, rank_of_k = perm
                if rank_of_x == 1:
                    tone = _TONES[1]
                elif rank_of_y == 1:
                    tone = _TONES[2]
                else:
                    tone = _TONES[3]
                cv.polygon(poly, fill=tone, stroke="none", opacity=0.85)

    for reg in regions:
        cv.polygon(region_polygon(reg, q2_floor), stroke="black", width=1.2)
        cx, cy = _centroid(region_polygon(reg, q2_floor))
        if reg.kind == "cell" or not p1_shading:
            cv.text((cx, cy), reg.name, size=10)
        for v in reg.vertices:
            x, y = cv.pt(*v)
            cv.parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="2.5" fill="black"/>')

    # axes
    cv.line((0, q2_floor), (0, q1_max), width=1.5)
    cv.line((0, 0), (q1_max, 0), width=1.5)
    cv.line((0, 0), (q1_max, q1_max), dash="4 3", width=0.8)
    for t in range(2, q1_max + 1, 2):
        cv.text((t, q2_floor - 0.5), str(t), size=8)
    return cv.render()


def write_partition_svg(path: str, q1_max: int, p1_shading: bool = False) -> None:
    with open(path, "w") as fh:
        fh.write(render_partition(q1_max, p1_shading=p1_shading))
