"""Polar curve, singular locus, and genericity certification.

For f in two variables and a linear form ell = a*x + b*y, the polar
curve is the closure of the locus where grad f is parallel to (a, b)
away from Sing f: the squarefree part of a*f_y - b*f_x with every
irreducible factor dividing both partials removed.  Genericity of ell
is certified a posteriori rather than described symbolically: the raw
polar must be squarefree, and the point of the line ell = 0 on the line
at infinity must avoid the ends of both the polar curve and Sing f.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .fields import ExtensionField, RationalField, coerce, fresh_name, rat
from .poly import (Poly, divides, exact_div, factor_qq, factor_univariate,
                   gcd_qq, gcd_univar, resultant)

QQ = RationalField()


class GenericityError(Exception):
    """No accepted linear form within the redraw budget."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class LinearForm:
    a: object
    b: object
    provenance: str = "explicit"

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise ValueError("the zero linear form is not allowed")

    def poly(self):
        x = Poly.var(QQ, 2, 0)
        y = Poly.var(QQ, 2, 1)
        return x.scale(rat(self.a)) + y.scale(rat(self.b))

    def __str__(self):
        return "(%s)*x + (%s)*y" % (self.a, self.b)


@dataclass(frozen=True)
class AffinePointClass:
    """A Galois orbit of points (x, y), one representative expanded."""

    field: object
    x: object
    y: object
    mult: int          # order of this orbit's x-coordinate in the eliminant
    conj: int          # number of points in the orbit

    def coords_str(self):
        return "(%s, %s)" % (self.field.elem_str(self.x), self.field.elem_str(self.y))


@dataclass(frozen=True)
class InfinityPointClass:
    """A Galois orbit of points on the line at infinity.

    ``u`` is the coordinate x/y of the representative [u : 1 : 0];
    ``u is None`` encodes the single point [1 : 0 : 0].
    """

    field: object
    u: object
    mult: int          # multiplicity as a root of the top-degree form
    conj: int

    @property
    def chart(self):
        return "x" if self.u is None else "y"

    def coords_str(self):
        if self.u is None:
            return "[1 : 0 : 0]"
        return "[%s : 1 : 0]" % self.field.elem_str(self.u)


@dataclass(frozen=True)
class PolarCurve:
    equation: Poly
    degree: int
    infinity_points: tuple

    def is_empty(self):
        return self.equation.is_constant()


@dataclass(frozen=True)
class SingularLocus:
    isolated_points: tuple      # AffinePointClass
    one_dim_components: tuple   # reduced irreducible Poly


@dataclass
class GenericityReport:
    polar_squarefree: bool
    ell_avoids_infinity_points: bool
    no_degenerate_compositions: bool = True
    redraws: int = 0
    seed: object = None

    def accepted(self):
        return (self.polar_squarefree and self.ell_avoids_infinity_points
                and self.no_degenerate_compositions)


def _raw_polar(f, ell):
    fx, fy = f.diff(0), f.diff(1)
    return fy.scale(rat(ell.a)) - fx.scale(rat(ell.b))


def _removed_factors(raw, fx, fy):
    """Factors of ``raw`` kept/removed by the Sing-f divisibility test."""
    _c, facs = factor_qq(raw)
    kept, removed = [], []
    for fac, m in facs:
        if divides(fac, fx) and divides(fac, fy):
            removed.append((fac, m))
        else:
            kept.append((fac, m))
    return kept, removed


def _root_class(px, base):
    """Field and root element for one irreducible univariate factor."""
    d = px.degree_in(0)
    if d == 1:
        c1 = px.terms[(1,)]
        c0 = px.constant_term()
        return base, base.neg(base.div(c0, c1))
    ext = ExtensionField(base, fresh_name(base, "r"), px.coeffs_in(0))
    return ext, ext.gen()


def _eval_var(p, target, value, var):
    """Substitute ``value`` (element of target) for variable ``var`` of a
    bivariate p; returns a univariate Poly over target."""
    out = Poly.zero(target, 1)
    power = target.one()
    for cpoly in p.coeffs_in(var):
        out = out + cpoly.to_field(target).scale(power)
        power = target.mul(power, value)
    return out


def polar_equation(f, ell):
    """The polar curve of f with respect to ell."""
    if f.is_constant():
        raise ValueError("polar curve of a constant polynomial")
    raw = _raw_polar(f, ell)
    if raw.is_zero() or raw.is_constant():
        return PolarCurve(Poly.const(QQ, 2, rat(1)), 0, ())
    kept, _removed = _removed_factors(raw, f.diff(0), f.diff(1))
    eq = Poly.const(QQ, 2, rat(1))
    for fac, _m in kept:
        eq = eq * fac
    if eq.is_constant():
        return PolarCurve(eq, 0, ())
    return PolarCurve(eq, eq.total_degree(), tuple(_top_form_roots(eq)))


def _top_form_roots(eq):
    """Orbits of roots of the top-degree form, as points [x : y : 0]."""
    top = eq.top_form()
    j_min = min(e[1] for e in top.terms)
    out = []
    if j_min > 0:
        out.append(InfinityPointClass(QQ, None, j_min, 1))
    # dehomogenize by y: u = x/y
    tu = Poly(QQ, 1, {(e[0],): c for e, c in top.terms.items() if e[1] >= j_min})
    if not tu.is_constant():
        _c, facs = factor_qq(tu)
        for fac, m in sorted(facs, key=lambda t: (t[0].degree_in(0), str(t[0]))):
            fld, u0 = _root_class(fac, QQ)
            out.append(InfinityPointClass(fld, u0, m, fac.degree_in(0)))
    return out


def infinity_points(polar):
    """Roots of the top form of the polar equation, with multiplicities."""
    return list(polar.infinity_points)


def singular_locus(f):
    """Isolated points and one-dimensional components of Sing f."""
    if f.is_constant():
        raise ValueError("singular locus of a constant polynomial")
    fx, fy = f.diff(0), f.diff(1)
    if fx.is_zero() and fy.is_zero():
        raise ValueError("singular locus of a constant polynomial")
    comp = gcd_qq(fx, fy)
    components = []
    if not comp.is_constant():
        _c, cf = factor_qq(comp)
        components = [fac for fac, _m in cf]
        fx = exact_div(fx, comp)
        fy = exact_div(fy, comp)
    points = _common_zeros(fx, fy, exclude=comp if components else None)
    return SingularLocus(tuple(points), tuple(components))


def _common_zeros(g1, g2, exclude=None):
    """Finite common zero set of two coprime bivariate polynomials.

    Points on the curve ``exclude`` = 0 are dropped (they sit on a
    positive-dimensional component, not at an isolated point).
    """
    if g1.is_constant() or g2.is_constant():
        if (g1.is_constant() and not g1.is_zero()) or \
           (g2.is_constant() and not g2.is_zero()):
            return []
    d1, d2 = g1.degree_in(1), g2.degree_in(1)
    if d1 > 0 and d2 > 0:
        elim = resultant(g1, g2, 1)
    elif d1 == 0:
        elim = Poly(QQ, 1, {(e[0],): c for e, c in g1.terms.items()})
    else:
        elim = Poly(QQ, 1, {(e[0],): c for e, c in g2.terms.items()})
    if elim.is_zero():
        raise ValueError("the two polynomials share a curve component")
    if elim.is_constant():
        return []
    out = []
    _c, facs = factor_qq(elim)
    for px, m in sorted(facs, key=lambda t: (t[0].degree_in(0), str(t[0]))):
        kf, x0 = _root_class(px, QQ)
        a1 = _eval_var(g1, kf, x0, 0)
        a2 = _eval_var(g2, kf, x0, 0)
        if a1.is_zero() and a2.is_zero():
            raise ValueError("vertical line inside the common zero set")
        if a1.is_zero():
            h = a2
        elif a2.is_zero():
            h = a1
        else:
            h = gcd_univar(a1, a2)
        if h.is_constant():
            continue
        for ry, _mr in factor_univariate(h)[1]:
            lf, y0 = _root_class(ry, kf)
            x0l = coerce(lf, kf, x0)
            if exclude is not None and \
                    lf.is_zero(exclude.to_field(lf).eval((x0l, y0))):
                continue
            out.append(AffinePointClass(lf, x0l, y0, m, px.degree_in(0) * ry.degree_in(0)))
    return out


def check_genericity(f, ell, sing=None, polar=None):
    """A-posteriori genericity flags for a candidate linear form."""
    if f.is_constant():
        raise ValueError("polar curve of a constant polynomial")
    raw = _raw_polar(f, ell)
    if raw.is_zero():
        return GenericityReport(False, False)
    if sing is None:
        sing = singular_locus(f)
    if raw.is_constant():
        squarefree = True
        polar = polar if polar is not None else polar_equation(f, ell)
    else:
        _c, facs = factor_qq(raw)
        squarefree = all(m == 1 for _fac, m in facs)
        polar = polar if polar is not None else polar_equation(f, ell)
    # the point {ell = 0} ∩ {z = 0} is [b : -a : 0]
    pb, pa = rat(ell.b), QQ.neg(rat(ell.a))
    avoided = True
    forms = [] if polar.is_empty() else [polar.equation]
    forms += list(sing.one_dim_components)
    for g in forms:
        top = g.top_form()
        if QQ.is_zero(top.eval((pb, pa))):
            avoided = False
            break
    return GenericityReport(squarefree, avoided)


def draw_generic_ell(f, seed, max_redraws=16):
    """Seeded random small-height linear forms until one passes the checks."""
    if max_redraws < 1:
        raise ValueError("max_redraws must be at least 1")
    rng = random.Random(seed)
    sing = singular_locus(f)
    report = None
    for i in range(max_redraws):
        a = rat(rng.randint(-97, 97), rng.randint(1, 97))
        b = rat(rng.randint(-97, 97), rng.randint(1, 97))
        if a == 0 and b == 0:
            continue
        ell = LinearForm(a, b, provenance="seeded-random(%s,%d)" % (seed, i))
        report = check_genericity(f, ell, sing=sing)
        report.redraws = i
        report.seed = seed
        if report.polar_squarefree and report.ell_avoids_infinity_points:
            return ell, report
    raise GenericityError(
        "no generic linear form found in %d draws (seed %s)" % (max_redraws, seed),
        report)
