"""Sparse multivariate polynomials over Q or an extension tower.

The main pipeline works with polynomials in at most 3 variables whose
coefficients live in a field from :mod:`polarmorse.fields`.  Heavy
classical algorithms over Q (factorization, gcd, resultants) are delegated
to sympy; everything that must run over an extension tower (gcd, resultant
by evaluation/interpolation, Trager norm factorization, relative minimal
polynomials) is implemented here directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import sympy

from .fields import (
    QQ,
    ExtensionField,
    RationalField,
    coerce,
    rat,
    udivmod,
    ueval,
    ugcd,
    umul,
    utrim,
)

DEFAULT_VARS = ("x", "y", "z")


class PolyParseError(ValueError):
    def __init__(self, message, position):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


@dataclass(frozen=True)
class Poly:
    """Sparse polynomial: a map from exponent tuples to nonzero coefficients."""

    field: object
    arity: int
    terms: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        for e in self.terms:
            if len(e) != self.arity:
                raise ValueError("exponent vector of wrong length")

    # -- constructors --------------------------------------------------
    @staticmethod
    def zero(field, arity):
        return Poly(field, arity, {})

    @staticmethod
    def const(field, arity, c):
        if field.is_zero(c):
            return Poly.zero(field, arity)
        return Poly(field, arity, {(0,) * arity: c})

    @staticmethod
    def var(field, arity, i):
        e = [0] * arity
        e[i] = 1
        return Poly(field, arity, {tuple(e): field.one()})

    @staticmethod
    def make(field, arity, items):
        terms = {}
        for e, c in items:
            e = tuple(e)
            if e in terms:
                c = field.add(terms[e], c)
            if field.is_zero(c):
                terms.pop(e, None)
            else:
                terms[e] = c
        return Poly(field, arity, terms)

    # -- basic queries --------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.arity, self.field.zero())

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=-1)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = self._match(other)
        terms = dict(self.terms)
        f = self.field
        for e, c in other.terms.items():
            s = f.add(terms.get(e, f.zero()), c)
            if f.is_zero(s):
                terms.pop(e, None)
            else:
                terms[e] = s
        return Poly(f, self.arity, terms)

    def __neg__(self):
        f = self.field
        return Poly(f, self.arity, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._match(other))

    def __mul__(self, other):
        other = self._match(other)
        f = self.field
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = f.mul(c1, c2)
                if e in terms:
                    p = f.add(terms[e], p)
                if f.is_zero(p):
                    terms.pop(e, None)
                else:
                    terms[e] = p
        return Poly(f, self.arity, terms)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(self.field, self.arity, self.field.one())
        acc = self
        while n:
            if n & 1:
                out = out * acc
            acc = acc * acc
            n >>= 1
        return out

    def scale(self, c):
        f = self.field
        if f.is_zero(c):
            return Poly.zero(f, self.arity)
        return Poly(f, self.arity, {e: f.mul(v, c) for e, v in self.terms.items()})

    def _match(self, other):
        if isinstance(other, Poly):
            if other.field is not self.field:
                raise ValueError("mixed coefficient fields; coerce first")
            return other
        return Poly.const(self.field, self.arity, self.field.from_rat(rat(other)))

    def map_coeffs(self, target_field, fn):
        terms = {}
        for e, c in self.terms.items():
            v = fn(c)
            if not target_field.is_zero(v):
                terms[e] = v
        return Poly(target_field, self.arity, terms)

    def to_field(self, target_field):
        """Coerce into a larger field of the same tower."""
        if target_field is self.field:
            return self
        return self.map_coeffs(target_field, lambda c: coerce(target_field, self.field, c))

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if self.field is not other.field or self.arity != other.arity:
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(self.field.eq(c, other.terms[e]) for e, c in self.terms.items())

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms)))

    # -- calculus and substitution --------------------------------------
    def diff(self, i):
        f = self.field
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            terms[tuple(e2)] = f.mul(c, f.from_rat(rat(e[i])))
        return Poly(f, self.arity, terms)

    def eval(self, values):
        """Full evaluation; values are field elements (len == arity)."""
        f = self.field
        acc = f.zero()
        pows = [{0: f.one()} for _ in range(self.arity)]

        def pw(i, n):
            if n not in pows[i]:
                pows[i][n] = f.mul(pw(i, n - 1), values[i])
            return pows[i][n]

        for e, c in self.terms.items():
            t = c
            for i, n in enumerate(e):
                if n:
                    t = f.mul(t, pw(i, n))
            acc = f.add(acc, t)
        return acc

    def compose(self, args):
        """Substitute polynomials (over the same field) for the variables."""
        f = self.field
        arity = args[0].arity
        out = Poly.zero(f, arity)
        pows = [{0: Poly.const(f, arity, f.one())} for _ in range(self.arity)]

        def pw(i, n):
            if n not in pows[i]:
                pows[i][n] = pw(i, n - 1) * args[i]
            return pows[i][n]

        for e, c in self.terms.items():
            t = Poly.const(f, arity, c)
            for i, n in enumerate(e):
                if n:
                    t = t * pw(i, n)
            out = out + t
        return out

    def translate(self, center):
        """p(x1 + c1, ..., xn + cn)."""
        f = self.field
        args = [
            Poly.var(f, self.arity, i) + Poly.const(f, self.arity, c)
            for i, c in enumerate(center)
        ]
        return self.compose(args)

    # -- homogenization ---------------------------------------------------
    def homogenize(self):
        """Homogenize with one extra variable appended."""
        d = self.total_degree()
        if d < 0:
            return Poly.zero(self.field, self.arity + 1)
        terms = {}
        for e, c in self.terms.items():
            terms[e + (d - sum(e),)] = c
        return Poly(self.field, self.arity + 1, terms)

    def dehomogenize(self, i):
        """Substitute 1 for variable i (input must be homogeneous)."""
        if not self.is_homogeneous():
            raise ValueError("dehomogenize requires a homogeneous polynomial")
        f = self.field
        terms = {}
        for e, c in self.terms.items():
            e2 = e[:i] + e[i + 1:]
            if e2 in terms:
                s = f.add(terms[e2], c)
                if f.is_zero(s):
                    del terms[e2]
                else:
                    terms[e2] = s
            else:
                terms[e2] = c
        return Poly(f, self.arity - 1, terms)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def top_form(self):
        d = self.total_degree()
        return Poly(self.field, self.arity,
                    {e: c for e, c in self.terms.items() if sum(e) == d})

    # -- univariate views -------------------------------------------------
    def coeffs_in(self, i):
        """Coefficient list (low-to-high) in variable i; entries are Polys
        in the remaining variables (or field elements when arity == 1)."""
        f = self.field
        n = self.degree_in(i)
        if self.arity == 1:
            out = [f.zero()] * (n + 1)
            for e, c in self.terms.items():
                out[e[0]] = c
            return out
        out = [dict() for _ in range(n + 1)]
        for e, c in self.terms.items():
            out[e[i]][e[:i] + e[i + 1:]] = c
        return [Poly(f, self.arity - 1, t) for t in out]

    @staticmethod
    def from_coeffs(field, coeffs, arity=1, i=0):
        """Inverse of coeffs_in for arity-1 coefficient entries."""
        terms = {}
        for k, c in enumerate(coeffs):
            if isinstance(c, Poly):
                for e, v in c.terms.items():
                    terms[e[:i] + (k,) + e[i:]] = v
            elif not field.is_zero(c):
                key = [0] * arity
                key[i] = k
                terms[tuple(key)] = c
        return Poly(field, arity, terms)

    # -- printing ---------------------------------------------------------
    def __str__(self):
        return poly_str(self)

    def __repr__(self):
        return "Poly(%s)" % poly_str(self)


def _coeff_str(field, c, need_sign):
    if isinstance(field, RationalField):
        s = str(c)
        neg = s.startswith("-")
        mag = s[1:] if neg else s
        if need_sign:
            return (" - " if neg else " + "), mag
        return ("-" if neg else ""), mag
    s = "(%s)" % field.elem_str(c)
    return (" + " if need_sign else ""), s


def poly_str(p, names=None):
    if p.is_zero():
        return "0"
    names = names or DEFAULT_VARS[: p.arity]
    keys = sorted(p.terms, key=lambda e: (sum(e), e), reverse=True)
    out = []
    first = True
    for e in keys:
        sign, mag = _coeff_str(p.field, p.terms[e], not first)
        vars_part = "*".join(
            n if k == 1 else "%s^%d" % (n, k)
            for n, k in zip(names, e) if k
        )
        if vars_part:
            body = vars_part if mag == "1" else "%s*%s" % (mag, vars_part)
        else:
            body = mag
        out.append(sign + body)
        first = False
    return "".join(out)


# ---------------------------------------------------------------------------
# parsing


def _tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()/":
            toks.append((ch, ch, i))
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
        else:
            raise PolyParseError("unexpected character %r" % ch, i)
    toks.append(("end", "", n))
    return toks


def parse_poly(text, variables=None):
    """Parse the input grammar into a polynomial over Q.

    Grammar: sums of '*'-separated factors, each a variable, a rational
    literal, or a parenthesized expression, optionally raised by '^' to a
    non-negative integer.  A leading sign is accepted so that printing is
    a parse fixed point.
    """
    variables = list(variables) if variables is not None else list(DEFAULT_VARS[:2])
    arity = len(variables)
    toks = _tokenize(text)
    pos = [0]

    def peek():
        return toks[pos[0]]

    def take(kind=None):
        t = toks[pos[0]]
        if kind is not None and t[0] != kind:
            raise PolyParseError("expected %s, found %r" % (kind, t[1] or "end of input"), t[2])
        pos[0] += 1
        return t

    def parse_expr():
        sign = 1
        if peek()[0] in "+-":
            sign = -1 if take()[0] == "-" else 1
        acc = parse_term().scale(QQ.from_rat(rat(sign)))
        while peek()[0] in "+-":
            op = take()[0]
            t = parse_term()
            acc = acc + (t if op == "+" else -t)
        return acc

    def parse_term():
        acc = parse_factor()
        while peek()[0] == "*":
            take()
            acc = acc * parse_factor()
        return acc

    def parse_factor():
        base = parse_base()
        if peek()[0] == "^":
            take()
            t = take("int")
            return base ** int(t[1])
        return base

    def parse_base():
        kind, val, at = peek()
        if kind == "name":
            take()
            if val not in variables:
                raise PolyParseError("unknown variable %r" % val, at)
            return Poly.var(QQ, arity, variables.index(val))
        if kind == "int":
            take()
            num = int(val)
            if peek()[0] == "/":
                take()
                dt = take("int")
                den = int(dt[1])
                if den == 0:
                    raise PolyParseError("zero denominator", dt[2])
                return Poly.const(QQ, arity, rat(num, den))
            return Poly.const(QQ, arity, rat(num))
        if kind == "(":
            take()
            inner = parse_expr()
            take(")")
            return inner
        raise PolyParseError("expected a variable, number or '('", at)

    result = parse_expr()
    end = take("end")
    del end
    return result


# ---------------------------------------------------------------------------
# sympy bridge (Q coefficients only)

_SYM_VARS = sympy.symbols("v0 v1 v2")


def to_sympy(p):
    if not isinstance(p.field, RationalField):
        raise ValueError("sympy bridge is for Q coefficients")
    gens = _SYM_VARS[: p.arity]
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for g, k in zip(gens, e):
            term *= g ** k
        expr += term
    return sympy.Poly(expr, *gens, domain="QQ")

def from_sympy(sp, arity):
    terms = {}
    for e, c in sp.terms():
        c = sympy.Rational(c)
        terms[tuple(e)] = rat(int(c.p), int(c.q))
    return Poly(QQ, arity, {e: c for e, c in terms.items() if c != 0})


# ---------------------------------------------------------------------------
# gcd / squarefree / factorization


def gcd_qq(p, q):
    """Gcd over Q in any arity (monic-normalized leading coefficient)."""
    if p.is_zero():
        return q
    if q.is_zero():
        return p
    g = sympy.gcd(to_sympy(p), to_sympy(q))
    return from_sympy(sympy.Poly(g, *_SYM_VARS[: p.arity]), p.arity)


def gcd_univar(p, q):
    """Univariate gcd over any field, monic."""
    f = p.field
    g = ugcd(f, p.coeffs_in(0), q.coeffs_in(0))
    return Poly.from_coeffs(f, g)


def exact_div(p, q):
    """Exact division p / q (raises if not divisible)."""
    f = p.field
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if q.is_constant():
        return p.scale(f.inv(q.constant_term()))
    # choose a variable present in q and do coefficient-wise division
    var = next(i for i in range(q.arity) if q.degree_in(i) > 0)
    pc = p.coeffs_in(var)
    qc = q.coeffs_in(var)
    if p.arity == 1:
        quo, rem = udivmod(f, pc, qc)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        return Poly.from_coeffs(f, quo)
    # multivariate: recursive pseudo-division in one variable
    out = []
    pc = list(pc)
    lead = qc[-1]
    while len(pc) >= len(qc):
        c = _exact_div_coeff(pc[-1], lead)
        k = len(pc) - len(qc)
        out.append((k, c))
        for i, qq in enumerate(qc):
            pc[k + i] = pc[k + i] - c * qq
        while pc and pc[-1].is_zero():
            pc.pop()
        if not pc:
            break
    if pc:
        raise ArithmeticError("inexact polynomial division")
    terms = {}
    for k, c in out:
        for e, v in c.terms.items():
            e2 = e[:var] + (k,) + e[var:]
            terms[e2] = v
    return Poly(f, p.arity, terms)


def _exact_div_coeff(a, b):
    if b.is_constant():
        return a.scale(a.field.inv(b.constant_term()))
    return exact_div(a, b)


def divides(q, p):
    try:
        exact_div(p, q)
        return True
    except ArithmeticError:
        return False


def squarefree_part(p):
    """Product of the distinct irreducible factors of p (unit-normalized)."""
    if p.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    if isinstance(p.field, RationalField):
        sp = to_sympy(p)
        _, facs = sympy.factor_list(sp)
        out = Poly.const(QQ, p.arity, rat(1))
        for fac, _m in facs:
            out = out * from_sympy(sympy.Poly(fac, *_SYM_VARS[: p.arity]), p.arity)
        return out
    if p.arity != 1:
        raise NotImplementedError("squarefree part over extensions is univariate only")
    g = gcd_univar(p, p.diff(0))
    return exact_div(p, g)


def factor_qq(p):
    """Irreducible factorization over Q, any arity.

    Returns (rational content, [(primitive irreducible Poly, multiplicity)]).
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if not isinstance(p.field, RationalField):
        raise ValueError("factor_qq needs rational coefficients")
    content, facs = sympy.factor_list(to_sympy(p))
    content = sympy.Rational(content)
    out = []
    for fac, m in facs:
        out.append((from_sympy(sympy.Poly(fac, *_SYM_VARS[: p.arity]), p.arity), m))
    return rat(int(content.p), int(content.q)), out


def factor_univariate(p):
    """Complete factorization of a univariate p over its field.

    Returns (unit, [(monic irreducible Poly, multiplicity), ...]).
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if p.arity != 1:
        raise ValueError("factor_univariate needs a univariate input")
    f = p.field
    if p.is_constant():
        return p.constant_term(), []
    if isinstance(f, RationalField):
        content, facs = sympy.factor_list(to_sympy(p))
        out = []
        unit = rat(int(sympy.Rational(content).p), int(sympy.Rational(content).q))
        for fac, m in facs:
            fp = from_sympy(sympy.Poly(fac, _SYM_VARS[0]), 1)
            lead = fp.terms[(fp.degree_in(0),)]
            unit *= lead ** m
            out.append((fp.scale(QQ.inv(lead)), m))
        return unit, out
    # extension field: squarefree split, then Trager on each squarefree part
    lead = p.terms[max(p.terms, key=lambda e: e[0])]
    monic = p.scale(f.inv(lead))
    out = {}
    for part, mult in _squarefree_decomposition(monic):
        for fac in _trager_factor_squarefree(part):
            out[fac] = out.get(fac, 0) + mult
    return lead, sorted(out.items(), key=lambda kv: (kv[0].degree_in(0), poly_str(kv[0])))


def _squarefree_decomposition(p):
    """Yun-style decomposition of a monic univariate p: [(part, mult), ...]."""
    f = p.field
    out = []
    g = gcd_univar(p, p.diff(0))
    w = exact_div(p, g)
    i = 1
    while w.degree_in(0) > 0:
        y = gcd_univar(w, g)
        part = exact_div(w, y)
        if part.degree_in(0) > 0:
            out.append((part, i))
        w, g = y, exact_div(g, y)
        i += 1
    return out


def _ext_to_bivar(p):
    """Univariate p over K = base(g) as a bivariate over base in (t, y),
    with t standing for the generator."""
    K = p.field
    base = K.base
    terms = {}
    for (k,), c in p.terms.items():
        for j, cj in enumerate(c):
            if not base.is_zero(cj):
                terms[(j, k)] = cj
    return Poly(base, 2, terms)


def _trager_factor_squarefree(p):
    """Irreducible monic factors of squarefree monic p over an ExtensionField."""
    K = p.field
    base = K.base
    if p.degree_in(0) == 1:
        return [p]
    minpoly_t = Poly.from_coeffs(base, list(K.minpoly), arity=2, i=0)
    theta = K.gen()
    for lam in itertools.count(0):
        lam_e = K.from_rat(rat(lam))
        shifted = _shift_by(p, K.mul(lam_e, theta))  # p(y + lam*theta)
        bivar = _ext_to_bivar(shifted)
        norm = resultant(bivar, minpoly_t, 0)  # eliminate t -> poly in y over base
        if norm.degree_in(0) == p.degree_in(0) * K.degree and \
                gcd_univar(norm, norm.diff(0)).degree_in(0) == 0:
            break
        if lam > 40:
            raise ArithmeticError("no squarefree norm found (input not squarefree?)")
    _, nfacs = factor_univariate(norm)
    out = []
    for nf, m in nfacs:
        assert m == 1
        nf_k = nf.to_field(K)
        cand = _shift_by(nf_k, K.neg(K.mul(lam_e, theta)))  # N_i(y - lam*theta)
        g = gcd_univar(p, cand)
        if g.degree_in(0) > 0:
            out.append(g)
    assert sum(g.degree_in(0) for g in out) == p.degree_in(0)
    return out


def _shift_by(p, c):
    """p(y + c) for univariate p."""
    f = p.field
    shift = Poly.var(f, 1, 0) + Poly.const(f, 1, c)
    return p.compose([shift])


# ---------------------------------------------------------------------------
# determinants, resultants, characteristic polynomials


def det(field, rows):
    """Determinant of a square matrix of field elements (Gaussian elimination)."""
    n = len(rows)
    m = [list(r) for r in rows]
    detval = field.one()
    for col in range(n):
        piv = next((r for r in range(col, n) if not field.is_zero(m[r][col])), None)
        if piv is None:
            return field.zero()
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            detval = field.neg(detval)
        detval = field.mul(detval, m[col][col])
        inv = field.inv(m[col][col])
        for r in range(col + 1, n):
            if field.is_zero(m[r][col]):
                continue
            factor = field.mul(m[r][col], inv)
            for c in range(col, n):
                m[r][c] = field.sub(m[r][c], field.mul(factor, m[col][c]))
    return detval


def _sylvester_entries(pc, qc):
    """Sylvester matrix rows built from coefficient lists (low-to-high)."""
    m, n = len(pc) - 1, len(qc) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [None] * size
        for j, c in enumerate(reversed(pc)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [None] * size
        for j, c in enumerate(reversed(qc)):
            row[i + j] = c
        rows.append(row)
    return rows


def resultant(p, q, var):
    """Sylvester resultant of p and q eliminating variable ``var``."""
    f = p.field
    dp, dq = p.degree_in(var), q.degree_in(var)
    if dp < 1 and dq < 1:
        raise ValueError("both inputs are constant in the eliminated variable")
    if p.is_zero() or q.is_zero():
        return Poly.zero(f, p.arity - 1)
    if dp < 1 or dq < 1:
        # resultant with a constant-in-var polynomial: c^deg(other)
        const, other, d = (p, q, dq) if dp < 1 else (q, p, dp)
        c = const.coeffs_in(var)[0]
        if p.arity == 1:
            return Poly.const(f, 0, f.pow(c, d)) if not isinstance(c, Poly) else c ** d
        return c ** d
    if isinstance(f, RationalField) and p.arity == 2:
        sp, sq = to_sympy(p), to_sympy(q)
        g = _SYM_VARS[var]
        keep = _SYM_VARS[1 - var]
        res = sympy.resultant(sp.as_expr(), sq.as_expr(), g)
        return from_sympy(sympy.Poly(res, keep), 1)
    pc, qc = p.coeffs_in(var), q.coeffs_in(var)
    rows = _sylvester_entries(pc, qc)
    if p.arity == 1:
        zero = f.zero()
        rows = [[zero if e is None else e for e in row] for row in rows]
        return Poly.const(f, 0, det(f, rows))
    if p.arity != 2:
        raise NotImplementedError("resultant supported for arity <= 2")
    # evaluation / interpolation in the remaining variable
    bound = dp * q.degree_in(1 - var) + dq * p.degree_in(1 - var)
    xs = [f.from_rat(rat(k)) for k in range(bound + 1)]
    ys = []
    zero = f.zero()
    for x in xs:
        ev = [[zero if e is None else e.eval([x]) for e in row] for row in rows]
        ys.append(det(f, ev))
    return _lagrange(f, xs, ys)


def _lagrange(field, xs, ys):
    """Interpolating univariate Poly through (xs, ys)."""
    n = len(xs)
    coeffs = [field.zero()] * n
    for i in range(n):
        # basis polynomial prod_{j!=i} (X - x_j) / (x_i - x_j)
        basis = [field.one()]
        denom = field.one()
        for j in range(n):
            if j == i:
                continue
            basis = umul(field, basis, [field.neg(xs[j]), field.one()])
            denom = field.mul(denom, field.sub(xs[i], xs[j]))
        c = field.div(ys[i], denom)
        for k, b in enumerate(basis):
            coeffs[k] = field.add(coeffs[k], field.mul(b, c))
    return Poly.from_coeffs(field, utrim(field, coeffs))


# ---------------------------------------------------------------------------
# relative minimal polynomials


def _relative_basis(field, subfield):
    """Power-product basis of ``field`` over ``subfield`` (as field elements)."""
    if field is subfield:
        return [field.one() if not isinstance(field, RationalField) else rat(1)]
    below = _relative_basis(field.base, subfield)
    out = []
    for k in range(field.degree):
        gk = field.pow(field.gen(), k)
        for b in below:
            out.append(field.mul(gk, field.lift(b)))
    return out


def _flatten(field, subfield, x):
    # coordinate order matches _relative_basis: gen^k major, base minor
    if field is subfield:
        return [x]
    out = []
    for c in x:
        out.extend(_flatten(field.base, subfield, c))
    return out


def charpoly(subfield, matrix):
    """Characteristic polynomial det(X*I - M) of a matrix over subfield,
    returned as a monic univariate Poly over subfield."""
    n = len(matrix)
    if isinstance(subfield, RationalField):
        sm = sympy.Matrix(
            [[sympy.Rational(int(c.numerator), int(c.denominator)) for c in row]
             for row in matrix])
        cp = sm.charpoly()
        coeffs = list(reversed(cp.all_coeffs()))
        return Poly.from_coeffs(
            QQ, [rat(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in coeffs])
    # evaluate det(xI - M) at n+1 points and interpolate
    xs = [subfield.from_rat(rat(k)) for k in range(n + 1)]
    ys = []
    for x in xs:
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                v = subfield.neg(matrix[i][j])
                if i == j:
                    v = subfield.add(v, x)
                row.append(v)
            rows.append(row)
        ys.append(det(subfield, rows))
    return _lagrange(subfield, xs, ys)


def minpoly_over(field, elem, subfield):
    """Monic minimal polynomial of ``elem`` (in ``field``) over ``subfield``."""
    if field is subfield:
        return Poly.from_coeffs(subfield, [subfield.neg(elem), subfield.one()])
    basis = _relative_basis(field, subfield)
    n = len(basis)
    cols = [_flatten(field, subfield, field.mul(elem, b)) for b in basis]
    matrix = [[cols[j][i] for j in range(n)] for i in range(n)]
    cp = charpoly(subfield, matrix)
    # elem's minimal polynomial is the unique irreducible factor vanishing at elem
    _, facs = factor_univariate(cp)
    for fac, _m in facs:
        lifted = fac.map_coeffs(field, lambda c: coerce(field, subfield, c))
        if field.is_zero(lifted.eval([elem])):
            return fac
    raise ArithmeticError("no factor of the characteristic polynomial vanishes")
