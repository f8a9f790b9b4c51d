"""Newton polygons of the one-variable operator family.

The polygon of a support set S is the convex hull of the union of the
corner sets corner(i, j) = { (x, y) : x <= i, y >= j }.  Because every
corner set is an upper-left quadrant, the hull is determined by its
finite boundary: a horizontal ray at the lowest support height, a chain
of edges with strictly increasing positive slopes, and a terminal
vertical ray at the largest abscissa.

``vertices`` lists the corner points of the boundary drawn up to the
height of the topmost support point on the terminal vertical edge, so
a support point sitting on that edge above the last hull corner is
reported as the final vertex (with edge slope "vertical").  All slope
arithmetic is exact rational.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .analysis import ThetaOperator

VERTICAL = "vertical"


@dataclass(frozen=True)
class NewtonPolygon:
    support: frozenset
    vertices: tuple
    edges: tuple  # ((i1,j1), (i2,j2), Fraction | "vertical")
    lower_ordinate: int

    def to_json_dict(self) -> dict:
        return {
            "support": [list(p) for p in sorted(self.support)],
            "vertices": [list(p) for p in self.vertices],
            "edges": [
                [list(a), list(b), sl if sl == VERTICAL else str(sl)]
                for (a, b, sl) in self.edges
            ],
            "lower_ordinate": self.lower_ordinate,
        }


def build_polygon(support) -> NewtonPolygon:
    pts = sorted(set((int(i), int(j)) for (i, j) in support))
    if not pts:
        raise ValueError("empty support")
    maximal = [
        p
        for p in pts
        if not any(q != p and p[0] <= q[0] and p[1] >= q[1] for q in pts)
    ]
    maximal.sort()

    chain: list[tuple[int, int]] = []
    for pt in maximal:
        while len(chain) >= 2:
            (i1, j1), (i2, j2) = chain[-2], chain[-1]
            s_prev = Fraction(j2 - j1, i2 - i1)
            s_new = Fraction(pt[1] - j2, pt[0] - i2)
            if s_new <= s_prev:
                chain.pop()
            else:
                break
        chain.append(pt)

    edges = []
    for a, b in zip(chain, chain[1:]):
        edges.append((a, b, Fraction(b[1] - a[1], b[0] - a[0])))

    vertices = list(chain)
    i_max = chain[-1][0]
    j_top = max(j for (i, j) in pts if i == i_max)
    if j_top > chain[-1][1]:
        top = (i_max, j_top)
        edges.append((chain[-1], top, VERTICAL))
        vertices.append(top)

    return NewtonPolygon(
        support=frozenset(pts),
        vertices=tuple(vertices),
        edges=tuple(edges),
        lower_ordinate=min(j for (_i, j) in pts),
    )


def first_positive_slope(poly: NewtonPolygon):
    """Least positive finite edge slope, or None (vertical edges excluded)."""
    slopes = [sl for (_a, _b, sl) in poly.edges if sl != VERTICAL and sl > 0]
    return min(slopes) if slopes else None


@dataclass(frozen=True)
class ConditionVerdict:
    a_holds: bool
    a_witness: int | None
    b_holds: bool
    b_witness: int | None
    s: Fraction
    n_star: int
    polygons: dict  # n -> NewtonPolygon | None

    @property
    def stable_polygon(self):
        return self.polygons[self.n_star]

    def to_json_dict(self) -> dict:
        return {
            "a": {"holds": self.a_holds, "witness": self.a_witness},
            "b": {"holds": self.b_holds, "witness": self.b_witness, "s": str(self.s)},
            "n_star": self.n_star,
            "polygons": {
                str(n): (poly.to_json_dict() if poly is not None else None)
                for n, poly in sorted(self.polygons.items())
            },
        }


def check_conditions(T: ThetaOperator, s: Fraction) -> ConditionVerdict:
    """Lower-ordinate and first-slope conditions across all rows n.

    Per-row supports drop the entries whose polynomial vanishes at that
    n; since those polynomials are falling factorials, the vanishing
    pattern is stable for n >= n*, so checking one row past n*
    certifies every larger n.  With s = 0 the slope condition requires
    that no positive slope exists at all.
    """
    n_star = T.stability_index()
    polygons: dict[int, NewtonPolygon | None] = {}
    a_holds, a_witness = True, None
    b_holds, b_witness = True, None
    for n in range(n_star + 2):
        sup = T.support_at(n)
        if not sup:
            polygons[n] = None
            if a_holds:
                a_holds, a_witness = False, n
            continue
        poly = build_polygon(sup)
        polygons[n] = poly
        if poly.lower_ordinate != 0 and a_holds:
            a_holds, a_witness = False, n
        fps = first_positive_slope(poly)
        if b_holds:
            if s == 0:
                ok = fps is None
            else:
                ok = fps is None or fps >= Fraction(1) / s
            if not ok:
                b_holds, b_witness = False, n
    return ConditionVerdict(
        a_holds=a_holds,
        a_witness=a_witness,
        b_holds=b_holds,
        b_witness=b_witness,
        s=s,
        n_star=n_star,
        polygons=polygons,
    )


def polygon_svg(poly: NewtonPolygon, size: int = 360) -> str:
    """Small standalone SVG of the staircase, for reports."""
    pts = sorted(poly.support)
    i_max = max(i for i, _ in pts) + 1
    j_max = max(j for _, j in pts) + 1
    scale = size / max(i_max + 1, j_max + 1)

    def xy(p):
        return (30 + p[0] * scale, size + 10 - p[1] * scale)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 60}" height="{size + 40}">',
        f'<line x1="{xy((0, 0))[0]}" y1="{xy((0, 0))[1]}" x2="{xy((i_max, 0))[0]}" '
        f'y2="{xy((0, 0))[1]}" stroke="black"/>',
        f'<line x1="{xy((0, 0))[0]}" y1="{xy((0, 0))[1]}" x2="{xy((0, 0))[0]}" '
        f'y2="{xy((0, j_max))[1]}" stroke="black"/>',
    ]
    for a, b, sl in poly.edges:
        x1, y1 = xy(a)
        x2, y2 = xy(b)
        dash = ' stroke-dasharray="4"' if sl == VERTICAL else ""
        out.append(
            f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="blue"{dash}/>'
        )
    for p in pts:
        x, y = xy(p)
        fill = "red" if p in set(poly.vertices) else "gray"
        out.append(f'<circle cx="{x}" cy="{y}" r="4" fill="{fill}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
