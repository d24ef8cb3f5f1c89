"""Attractors of Morse points of the deformation f - t*ell, with indices.

As t -> 0 each Morse critical point of f_t travels along a branch of the
polar curve and either converges to a singular point of f (an affine
attractor) or escapes to a point P on the line at infinity with f
converging to a limit alpha in C or to infinity (an attractor (P, alpha)
at infinity).  The number of Morse points absorbed by an attractor is
read off order data of f and ell expanded along the polar branches:

  affine:    index  = sum over branches of  ord(f - f(p)) - ord(ell - ell(p))
  infinity:  index  = sum over branches of  max(0, m_fbar - (d-1) * m_Hinf)

where along each branch of the projective polar closure m_fbar is the
contact order with the closure of the fiber {f = alpha} and m_Hinf the
contact order with the line at infinity, d = deg f.  The two routes are
linked by  m_fbar - (d-1)*m_Hinf = ord(f|branch - alpha) - ord(ell|branch),
which is computed independently on every branch and asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import mpmath

from .fields import RationalField, coerce, rat
from .poly import Poly, minpoly_over
from .polar import (AffinePointClass, GenericityError, InfinityPointClass,
                    LinearForm, check_genericity, draw_generic_ell,
                    infinity_points, polar_equation, singular_locus)
from .puiseux import (DegenerateComposition, INFINITE, expand_branches,
                      poly_at_series, series_order_after_limit)
from .series import LaurentSeries, SeriesPrecisionLoss

QQ = RationalField()


@dataclass(frozen=True)
class BranchContribution:
    branch: object
    ord_f: int
    ord_ell: int
    mult_fbar: object          # int at infinity, None for affine attractors
    mult_hinf: object
    contribution: int
    conj_multiplicity: int


@dataclass(frozen=True)
class Attractor:
    """One Galois orbit of attractors sharing an index.

    ``index`` is the per-point index; the orbit contains ``n_points``
    individual attractors (conjugate locations x conjugate alpha values),
    each absorbing ``index`` Morse points.
    """

    kind: str                  # "affine" | "infinity"
    point: object              # AffinePointClass | InfinityPointClass
    chart: object              # chart id for infinity attractors, else None
    alpha_kind: str            # "finite" | "infinite"
    alpha_field: object
    alpha_value: object        # representative value when finite
    alpha_minpoly: object      # minpoly of alpha over Q (finite case)
    index: int
    n_points: int
    contributions: tuple

    def total(self):
        return self.index * self.n_points


@dataclass
class MorseReport:
    f: Poly
    ell: LinearForm
    degree: int
    genericity: object
    attractors: list
    morse_number: int
    verification: object = None


def safety_bound(f, polar):
    d = max(f.total_degree(), polar.equation.total_degree(), 1)
    return d * (2 * d - 1) + d + 1


def _component_candidates(polar, sing, ell):
    """Candidate attractors on one-dimensional components of Sing f.

    Every Morse-point trajectory stays on the polar curve, so its affine
    limit on a component W lies in the finite set polar ∩ W.  This is a
    superset of the critical points of ell restricted to W; spurious
    members simply receive index 0."""
    from .polar import _common_zeros
    out = []
    for w in sing.one_dim_components:
        out.extend(_common_zeros(polar.equation, w))
    return out


def _point_key(p):
    """Numeric dedup key for an affine point class (canonical embedding)."""
    with mpmath.workdps(40):
        zx = p.field.to_mpc(p.x)
        zy = p.field.to_mpc(p.y)
        return (mpmath.nstr(zx.real, 18), mpmath.nstr(zx.imag, 18),
                mpmath.nstr(zy.real, 18), mpmath.nstr(zy.imag, 18))


def _on_polar(polar, points):
    for p in points:
        eq = polar.equation.to_field(p.field)
        if p.field.is_zero(eq.eval((p.x, p.y))):
            yield p


def affine_candidates(f, polar, sing, ell):
    """Points of Sing f that can absorb Morse points: isolated singular
    points lying on the polar curve, plus critical points of ell
    restricted to one-dimensional components of Sing f (including
    pairwise component intersections), also intersected with the polar
    curve."""
    if polar.is_empty():
        return []
    cands = list(sing.isolated_points)
    extra = _component_candidates(polar, sing, ell)
    seen = {_point_key(p) for p in cands}
    for p in extra:
        k = _point_key(p)
        if k not in seen:
            seen.add(k)
            cands.append(p)
    return list(_on_polar(polar, cands))


def _expand_retry(germ, compute, start_order, bound):
    """Run ``compute`` on branch expansions, doubling the truncation on
    precision loss up to the safety bound."""
    target = start_order
    while True:
        branches = expand_branches(germ, target_order=target)
        try:
            return compute(branches)
        except SeriesPrecisionLoss:
            if target > 2 * bound:
                raise DegenerateComposition(
                    "a composition vanished beyond the safety bound %d" % bound)
            target *= 2


def affine_index(f, ell, polar, pcls, bound=None):
    """Attractor record at an isolated affine candidate point."""
    L = pcls.field
    center = (pcls.x, pcls.y)
    germ = polar.equation.to_field(L).translate(center)
    if not L.is_zero(germ.constant_term()):
        raise ValueError("candidate point does not lie on the polar curve")
    floc = f.to_field(L).translate(center)
    fp = floc.constant_term()
    fsh = floc - Poly.const(L, 2, fp)
    elloc = ell.poly().to_field(L)
    ellsh = elloc.translate(center) - Poly.const(
        L, 2, elloc.eval(center))
    if bound is None:
        bound = safety_bound(f, polar)

    def compute(branches):
        contribs = []
        for br in branches:
            fser = poly_at_series(fsh.to_field(br.field),
                                  (br.x_series, br.y_series))
            ellser = poly_at_series(ellsh.to_field(br.field),
                                    (br.x_series, br.y_series))
            of, oe = fser.order(), ellser.order()
            c = of - oe
            if c < 0:
                raise ArithmeticError(
                    "affine branch with ord f < ord ell at %s" % pcls.coords_str())
            contribs.append(BranchContribution(br, of, oe, None, None, c,
                                               br.conj_multiplicity))
        return contribs

    contribs = _expand_retry(germ, compute, 2 * germ.total_degree() + 2, bound)
    index = sum(c.contribution * c.conj_multiplicity for c in contribs)
    mp = minpoly_over(L, fp, QQ) if L is not QQ else None
    return Attractor("affine", pcls, None, "finite", L, fp, mp,
                     index, pcls.conj, tuple(contribs))


def _chart_polys(f, ell, polar, chart):
    """Polar closure, degree-d fiber numerator, and ell numerator in a chart.

    Chart "y" has coordinates (u, z) with [x:y:1] = [u/z : 1/z : 1]; chart
    "x" has (v, z) with [1/z : v/z : 1].  In either chart f = fbar / z^d
    and ell = ellbar / z on the chart domain.
    """
    drop = 1 if chart == "y" else 0
    G = polar.equation.homogenize().dehomogenize(drop)
    fbar = f.homogenize().dehomogenize(drop)
    a, b = rat(ell.a), rat(ell.b)
    u = Poly.var(QQ, 2, 0)
    if chart == "y":
        ellbar = u.scale(a) + Poly.const(QQ, 2, b)
    else:
        ellbar = u.scale(b) + Poly.const(QQ, 2, a)
    return G, fbar, ellbar


def chart_center(ipcls, chart):
    """Chart coordinate of an infinity point class, or None if invisible."""
    if chart == "y":
        return ipcls.u
    if ipcls.u is None:
        return ipcls.field.zero()
    if ipcls.field.is_zero(ipcls.u):
        return None
    return ipcls.field.inv(ipcls.u)


def infinity_index(f, ell, polar, ipcls, chart=None, bound=None):
    """Attractor records (one per limit value alpha) at an infinity point."""
    if chart is None:
        chart = ipcls.chart
    c0 = chart_center(ipcls, chart)
    if c0 is None:
        raise ValueError("infinity point is not visible in chart %s" % chart)
    d = f.total_degree()
    K = ipcls.field
    G, fbar, ellbar = _chart_polys(f, ell, polar, chart)
    germ = G.to_field(K).translate((c0, K.zero()))
    if not K.is_zero(germ.constant_term()):
        raise ValueError("point is not on the closure of the polar curve")
    if bound is None:
        bound = safety_bound(f, polar)

    def compute(branches):
        data = []
        for br in branches:
            bf = br.field
            c0b = coerce(bf, K, c0)
            user = br.x_series + LaurentSeries.const(bf, c0b, br.x_series.trunc)
            zser = br.y_series
            mh = zser.order()
            fbar_ser = poly_at_series(fbar.to_field(bf), (user, zser))
            fser = fbar_ser * zser ** (-d)
            alpha, of = series_order_after_limit(fser)
            ellser = poly_at_series(ellbar.to_field(bf), (user, zser)) * zser ** (-1)
            oe = ellser.order()
            if alpha is INFINITE:
                mfb = fbar_ser.order()
            else:
                shifted = fbar_ser - (zser ** d).scale(alpha)
                mfb = shifted.order()
            if mfb - (d - 1) * mh != of - oe:
                raise AssertionError(
                    "chart-consistency failure at %s: %d - %d*%d != %d - %d"
                    % (ipcls.coords_str(), mfb, d - 1, mh, of, oe))
            c = mfb - (d - 1) * mh
            data.append((br, alpha,
                         BranchContribution(br, of, oe, mfb, mh,
                                            max(0, c), br.conj_multiplicity)))
        return data

    data = _expand_retry(germ, compute, 2 * germ.total_degree() + 2, bound)
    # group branches by the limit value alpha (as an orbit over K)
    groups = {}
    for br, alpha, contrib in data:
        if alpha is INFINITE:
            key = ("infinite",)
            mp = None
        else:
            mp = minpoly_over(br.field, alpha, K) if br.field is not K \
                else _linear_minpoly(K, alpha)
            key = ("finite", mp)
        groups.setdefault(key, []).append((br, alpha, mp, contrib))
    out = []
    for key in sorted(groups, key=_group_sort_key):
        members = groups[key]
        contribs = tuple(c for _b, _a, _m, c in members)
        if key[0] == "infinite":
            e = 1
            index = sum(c.contribution * c.conj_multiplicity for c in contribs)
            out.append(Attractor("infinity", ipcls, chart, "infinite",
                                 None, None, None, index, ipcls.conj * e, contribs))
        else:
            mp = key[1]
            e = mp.degree_in(0)
            index = 0
            for _b, _a, _m, c in members:
                if c.conj_multiplicity % e != 0:
                    raise AssertionError("branch orbit not divisible by alpha orbit")
                index += c.contribution * (c.conj_multiplicity // e)
            br0, a0 = members[0][0], members[0][1]
            mp_qq = minpoly_over(br0.field, a0, QQ) if br0.field is not QQ else None
            out.append(Attractor("infinity", ipcls, chart, "finite",
                                 br0.field, a0, mp_qq, index,
                                 ipcls.conj * e, contribs))
    return out


def _linear_minpoly(K, alpha):
    """T - alpha as a univariate polynomial over K."""
    return Poly(K, 1, {(1,): K.one(), (0,): K.neg(alpha)}) if not K.is_zero(alpha) \
        else Poly(K, 1, {(1,): K.one()})


def _group_sort_key(key):
    if key[0] == "infinite":
        return (1, "")
    return (0, str(key[1]))


def total_morse_number(attractors):
    return sum(a.total() for a in attractors)


def compute_attractors(f, ell, polar, sing):
    """All attractor records for an accepted (f, ell)."""
    bound = safety_bound(f, polar)
    out = []
    for p in affine_candidates(f, polar, sing, ell):
        out.append(affine_index(f, ell, polar, p, bound=bound))
    for ip in infinity_points(polar):
        out.extend(infinity_index(f, ell, polar, ip, bound=bound))
    return out


def _attractor_sort_key(a):
    with mpmath.workdps(40):
        if a.kind == "affine":
            zx = a.point.field.to_mpc(a.point.x)
            zy = a.point.field.to_mpc(a.point.y)
            return (0, float(zx.real), float(zx.imag), float(zy.real),
                    float(zy.imag), 0.0)
        if a.point.u is None:
            loc = (1, float("inf"), 0.0, 0.0, 0.0)
        else:
            zu = a.point.field.to_mpc(a.point.u)
            loc = (1, float(zu.real), float(zu.imag), 0.0, 0.0)
        akey = 2.0 if a.alpha_kind == "infinite" else (
            0.0 if a.alpha_field is None else float(
                a.alpha_field.to_mpc(a.alpha_value).real))
        return loc + (akey,)


@dataclass(frozen=True)
class IndividualAttractor:
    """One concrete attractor: a numeric location with its limit value.

    Conjugate orbits in an Attractor record expand into one of these per
    embedding; exact data stays on the parent record."""

    parent: Attractor
    location: tuple            # affine: (x, y) mpc pair; infinity: (u,) or ("x-point",)
    alpha: object              # mpc value or INFINITE
    index: int


def expand_individuals(attractors):
    """Expand orbit records into individual attractors, deterministically."""
    out = []
    with mpmath.workdps(40):
        for a in attractors:
            if a.kind == "affine":
                embs = sorted(a.point.field.embeddings(),
                              key=lambda e: [(mpmath.nstr(v.real, 25),
                                              mpmath.nstr(v.imag, 25)) for v in e])
                assert len(embs) == a.n_points
                for emb in embs:
                    loc = (a.point.field.to_mpc(a.point.x, emb),
                           a.point.field.to_mpc(a.point.y, emb))
                    out.append(IndividualAttractor(
                        a, loc, a.alpha_field.to_mpc(a.alpha_value, emb), a.index))
                continue
            K = a.point.field
            embs = sorted(K.embeddings(),
                          key=lambda e: [(mpmath.nstr(v.real, 25),
                                          mpmath.nstr(v.imag, 25)) for v in e])
            for emb in embs:
                if a.point.u is None:
                    loc = ("x-point",)
                else:
                    loc = (K.to_mpc(a.point.u, emb),)
                if a.alpha_kind == "infinite":
                    out.append(IndividualAttractor(a, loc, INFINITE, a.index))
                    continue
                mp = _alpha_minpoly_over_point_field(a)
                if mp is None:
                    # alpha lives in the point field: follow the embedding
                    out.append(IndividualAttractor(
                        a, loc, K.to_mpc(a.alpha_value, emb), a.index))
                    continue
                coeffs = [K.to_mpc(c, emb) for c in reversed(mp.coeffs_in(0))]
                from .fields import _poly_roots
                for r in _poly_roots(coeffs):
                    out.append(IndividualAttractor(a, loc, r, a.index))
    assert len(out) == sum(a.n_points for a in attractors)
    return out


def _alpha_minpoly_over_point_field(a):
    """Minimal polynomial of alpha over the point's field, or None when
    alpha already lives there (rational over the point field)."""
    K = a.point.field
    if a.alpha_field is K:
        return None
    return minpoly_over(a.alpha_field, a.alpha_value, K)


def build_report(f, ell, genericity, attractors, verdict=None):
    attractors = sorted(attractors, key=_attractor_sort_key)
    return MorseReport(f, ell, f.total_degree(), genericity,
                       attractors, total_morse_number(attractors), verdict)


def analyze_symbolic(f, ell=None, seed=0, max_redraws=16):
    """Full symbolic pipeline: choose/accept ell, certify genericity,
    expand all attractors, and assemble the report."""
    if f.is_constant():
        raise ValueError("a constant polynomial has no Morse points")
    sing = singular_locus(f)
    explicit = ell is not None
    attempts = 1 if explicit else max_redraws
    last_report = None
    for i in range(attempts):
        if explicit:
            cand = ell
            report = check_genericity(f, cand, sing=sing)
        else:
            cand, report = draw_generic_ell(f, seed + i, max_redraws=max_redraws)
            report.seed = seed
            report.redraws = i
        last_report = report
        if not (report.polar_squarefree and report.ell_avoids_infinity_points):
            if explicit:
                raise GenericityError("the given linear form fails the "
                                      "genericity checks", report)
            continue
        polar = polar_equation(f, cand)
        try:
            attractors = compute_attractors(f, cand, polar, sing)
        except DegenerateComposition:
            report.no_degenerate_compositions = False
            if explicit:
                raise GenericityError("compositions degenerate for the given "
                                      "linear form", report)
            continue
        return build_report(f, cand, report, attractors)
    raise GenericityError("no generic linear form accepted", last_report)
