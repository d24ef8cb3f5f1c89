"""Newton-polygon expansion of plane-curve germ branches.

Branches of F(x, y) = 0 through a point are computed rational-Puiseux
style: each class of conjugate branches is expanded once, over the
smallest extension of the coefficient field that supports it, and the
class size is recorded instead of expanding conjugates separately.  Edge
polynomials are taken in the variable c^q (Duval's reduction), so a
single geometric branch with ramification never splits into spurious
root-of-unity copies.  Parametrizations use an honest integer-exponent
local parameter: x(s) is a monomial c*s^e (or 0 for the vertical axis)
and y(s) an ordinary truncated series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fields import ExtensionField, coerce, fresh_name, rat
from .poly import Poly, factor_univariate
from .series import LaurentSeries, SeriesPrecisionLoss, poly_at_series

_MAX_DEPTH = 64
_MAX_LIFT_ROUNDS = 64


class DegenerateComposition(Exception):
    """A composed series vanished identically up to the safety bound."""


INFINITE = "infinite"  # sentinel for limits at infinity on the value sphere


@dataclass(frozen=True)
class NewtonSegment:
    slope: object          # rational p/q (y ~ x^slope); None for the x = 0 axis
    lattice_length: int
    edge_poly: Poly        # reduced edge polynomial in c^q (univariate); may be None for axes

    def __repr__(self):
        return "NewtonSegment(slope=%s, length=%d)" % (self.slope, self.lattice_length)


@dataclass(frozen=True)
class NewtonPolygon:
    segments: tuple


@dataclass(frozen=True)
class PuiseuxBranch:
    """One conjugacy class of branches of a curve germ.

    ``x_series`` is always a monomial (or the zero series for the
    vertical-line branch); ``y_series`` is a truncated power series.
    ``conj_multiplicity`` counts the conjugate geometric branches this
    expansion stands for.
    """

    field: object
    x_series: LaurentSeries
    y_series: LaurentSeries
    conj_multiplicity: int
    truncation_order: int

    def ramification(self):
        o = self.x_series.order_or_none()
        return o if o is not None else 0


def _staircase(points):
    """Minimal j per i, sorted by i."""
    best = {}
    for i, j in points:
        if i not in best or j < best[i]:
            best[i] = j
    return sorted(best.items())


def _lower_hull(points):
    pts = _staircase(points)
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    # keep only the strictly descending part (edges facing the origin)
    out = []
    for a, b in zip(hull, hull[1:]):
        if b[1] < a[1]:
            out.append((a, b))
    return out


def _edge_data(F, a_pt, b_pt):
    """Slope p/q, lattice length, Bezout pair, weight, and on-edge terms."""
    (i1, j1), (i2, j2) = a_pt, b_pt
    di, dj = i2 - i1, j1 - j2
    g = math.gcd(di, dj)
    p, q = di // g, dj // g
    weight = q * i1 + p * j1
    on_edge = {e: c for e, c in F.terms.items() if q * e[0] + p * e[1] == weight}
    # a*q - b*p = 1
    gg, a, minus_b = _ext_gcd(q, p)
    assert gg == 1
    b = -minus_b
    return p, q, g, a, b, weight, on_edge


def _ext_gcd(m, n):
    if n == 0:
        return m, 1, 0
    g, x, y = _ext_gcd(n, m % n)
    return g, y, x - (m // n) * y


def _edge_poly(field, on_edge, a, b):
    """Reduced edge polynomial in the variable c^q."""
    exps = {b * i + a * j: c for (i, j), c in on_edge.items()}
    lo = min(exps)
    return Poly(field, 1, {(k - lo,): c for k, c in exps.items()})


def newton_polygon(F):
    """Lower Newton polygon of a bivariate F with F(0,0) = 0, F != 0."""
    if F.is_zero():
        raise ValueError("Newton polygon of the zero polynomial")
    if not F.field.is_zero(F.constant_term()):
        raise ValueError("no branch through the origin: F(0,0) != 0")
    segs = []
    ax = min(e[0] for e in F.terms)
    ay = min(e[1] for e in F.terms)
    if ax > 0:
        segs.append(NewtonSegment(None, ax, None))
    if ay > 0:
        segs.append(NewtonSegment(rat(0), ay, None))
    body = Poly(F.field, 2, {(i - ax, j - ay): c for (i, j), c in F.terms.items()})
    if not body.is_constant():
        for a_pt, b_pt in _lower_hull(body.terms.keys()):
            p, q, g, a, b, _w, on_edge = _edge_data(body, a_pt, b_pt)
            segs.append(NewtonSegment(rat(p, q), g, _edge_poly(F.field, on_edge, a, b)))
    return NewtonPolygon(tuple(segs))


def _strip_axis_powers(F):
    ax = min(e[0] for e in F.terms)
    ay = min(e[1] for e in F.terms)
    if ax == 0 and ay == 0:
        return F, 0, 0
    stripped = Poly(F.field, 2, {(i - ax, j - ay): c for (i, j), c in F.terms.items()})
    return stripped, ax, ay


def _duval_substitute(F, field, c0, p, q, a, b, weight):
    """F(c0^b * x1^q, x1^p * (c0^a + y1)) / x1^weight over ``field``."""
    c0b = field.pow(c0, b)
    c0a = field.pow(c0, a)
    shift = Poly.var(field, 2, 1) + Poly.const(field, 2, c0a)  # c0^a + y1
    max_j = max(e[1] for e in F.terms)
    shift_pows = [Poly.const(field, 2, field.one())]
    for _ in range(max_j):
        shift_pows.append(shift_pows[-1] * shift)
    out = Poly.zero(field, 2)
    for (i, j), c in F.terms.items():
        k = q * i + p * j - weight
        assert k >= 0
        coef = field.mul(c, field.pow(c0b, i))
        mono = Poly(field, 2, {(k, 0): coef})
        out = out + mono * shift_pows[j]
    return out


def _newton_lift(G, field, target):
    """Unique series y(x) with y(0) = 0, G(x, y(x)) = 0, dG/dy a unit."""
    x = LaurentSeries.monomial(field, field.one(), 1, target)
    y = LaurentSeries.zero(field, target)
    gy = G.diff(1)
    for _ in range(_MAX_LIFT_ROUNDS):
        num = poly_at_series(G, (x, y))
        if num.is_zero_shown():
            return y
        den = poly_at_series(gy, (x, y))
        y = y - num / den
    raise ArithmeticError("Newton lifting failed to converge")


def _expand_core(F, field, target, depth, top_level, cap):
    if depth > _MAX_DEPTH:
        raise ArithmeticError("Puiseux recursion exceeded its depth bound")
    branches = []
    F, ax, ay = _strip_axis_powers(F)
    if ax > 0 and top_level:
        branches.append((field, LaurentSeries.zero(field, target),
                         LaurentSeries.monomial(field, field.one(), 1, target), 1))
    if ay > 0:
        branches.append((field, LaurentSeries.monomial(field, field.one(), 1, target),
                         LaurentSeries.zero(field, target), 1))
    if not field.is_zero(F.constant_term()):
        return branches
    for a_pt, b_pt in _lower_hull(F.terms.keys()):
        p, q, _g, a, b, weight, on_edge = _edge_data(F, a_pt, b_pt)
        edge = _edge_poly(field, on_edge, a, b)
        _unit, facs = factor_univariate(edge)
        for h, mult in facs:
            if h.degree_in(0) == 1:
                f2 = field
                c0 = field.neg(field.div(h.constant_term(), h.terms[(1,)]))
                F2 = F
            else:
                name = fresh_name(field, "g")
                f2 = ExtensionField(field, name, h.coeffs_in(0), cap=cap)
                c0 = f2.gen()
                F2 = F.to_field(f2)
            if field.is_zero(c0) if f2 is field else f2.is_zero(c0):
                continue  # zero root corresponds to no branch on this edge
            G1 = _duval_substitute(F2, f2, c0, p, q, a, b, weight)
            c0b = f2.pow(c0, b)
            c0a = f2.pow(c0, a)
            if mult == 1:
                psi = _newton_lift(G1, f2, target)
                inner = [(f2, LaurentSeries.monomial(f2, f2.one(), 1, target), psi, 1)]
            else:
                inner = _expand_core(G1, f2, target, depth + 1, False, cap)
            for bf, x_in, y_in, cm in inner:
                c0b_l = coerce(bf, f2, c0b)
                c0a_l = coerce(bf, f2, c0a)
                x_out = (x_in ** q).scale(c0b_l)
                y_out = (x_in ** p) * (y_in + LaurentSeries.const(bf, c0a_l, y_in.trunc))
                branches.append((bf, x_out, y_out, cm * h.degree_in(0)))
    return branches


def expand_branches(F, center=None, target_order=None, cap=None):
    """All branch classes of F = 0 through ``center`` (default: origin).

    ``F`` must be bivariate and squarefree; ``center`` is a pair of
    elements of F's field.  Each branch satisfies F(x(s), y(s)) = 0
    exactly to its truncation.
    """
    from .fields import DEFAULT_TOWER_CAP
    if cap is None:
        cap = DEFAULT_TOWER_CAP
    if F.is_zero():
        raise ValueError("cannot expand branches of the zero polynomial")
    field = F.field
    if center is not None and any(not field.is_zero(c) for c in center):
        F = F.translate(center)
    if not field.is_zero(F.constant_term()):
        raise ValueError("the curve does not pass through the requested center")
    if target_order is None:
        target_order = 2 * F.total_degree() + 2
    out = []
    for bf, xs, ys, cm in _expand_core(F, field, target_order, 0, True, cap):
        trunc = min(xs.trunc, ys.trunc)
        out.append(PuiseuxBranch(bf, xs, ys, cm, trunc))
    return out


def branch_residual(F, branch):
    """F composed with the branch parametrization (must vanish to trunc)."""
    Fb = F.to_field(branch.field)
    return poly_at_series(Fb, (branch.x_series, branch.y_series))


def compose_on_branch(num, den, branch):
    """Laurent expansion of num/den along the branch.

    ``den`` may be None for a polynomial composition.  Raises
    SeriesPrecisionLoss when the order cannot be certified at the branch
    truncation (caller should re-expand deeper), and DegenerateComposition
    if the numerator vanishes identically on the branch.
    """
    bf = branch.field
    top = poly_at_series(num.to_field(bf), (branch.x_series, branch.y_series))
    if den is None:
        return top
    bot = poly_at_series(den.to_field(bf), (branch.x_series, branch.y_series))
    return top / bot


def series_order_after_limit(series):
    """Limit value and order convention for f along an escaping arc.

    For a certified series: negative order means the limit is infinite and
    the order is returned as-is; otherwise the limit is the constant term
    and the order is that of (series - limit).
    """
    o = series.order()  # raises SeriesPrecisionLoss when uncertified
    if o < 0:
        return INFINITE, o
    alpha = series.coeff(0)
    rest = series - LaurentSeries.const(series.field, alpha, series.trunc)
    return alpha, rest.order()


def count_vanishing_solutions(g_order, h_order):
    """Number of nonzero roots of g - t*h converging to 0 as t -> 0."""
    return g_order - h_order if g_order >= h_order else 0
