"""Exact arithmetic in towers of algebraic extensions of the rationals.

Coefficients throughout the symbolic pipeline are exact: rationals at the
bottom, and elements of iterated extensions Q(g1)(g2)... above.  An
extension element is stored as a coordinate tuple over the power basis of
its top generator, with entries in the field one level down.  Every field
carries a numeric embedding (a chosen complex root per generator) so that
elements can be approximated, compared against numerics, and serialized
deterministically.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

try:
    from gmpy2 import mpq as _mpq

    def rat(num, den=1):
        return _mpq(num, den)

    RAT_TYPES = (type(_mpq(0)), Fraction, int)
except ImportError:  # pragma: no cover - gmpy2 is normally available
    def rat(num, den=1):
        return Fraction(num, den)

    RAT_TYPES = (Fraction, int)


#: Largest allowed total degree of an extension tower over Q.  Desk-scale
#: inputs stay far below this; hitting the cap is reported, never silent.
DEFAULT_TOWER_CAP = 16

#: Working decimal precision for embedding roots.
EMBED_DPS = 60


class ExtensionTooLarge(Exception):
    """Raised when an extension tower would exceed the degree cap."""


class RationalField:
    """The field Q.  Elements are exact rationals.  A singleton, so that
    identity comparison of coefficient fields works everywhere."""

    base = None
    name = None
    degree = 1
    total_degree = 1

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def zero(self):
        return rat(0)

    def one(self):
        return rat(1)

    def from_rat(self, r):
        return rat(r)

    def lift(self, x):
        raise TypeError("rationals have no base field")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / rat(a)

    def div(self, a, b):
        return a / rat(b)

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def pow(self, a, n):
        return rat(a) ** n

    def levels(self):
        return []

    def embeddings(self):
        return [()]

    def to_mpc(self, a, embedding=()):
        return mpmath.mpc(mpmath.mpf(int(a.numerator)) / mpmath.mpf(int(a.denominator)))

    def elem_str(self, a):
        return str(a)

    def __repr__(self):
        return "QQ"


QQ = RationalField()


# --- list-based univariate helpers over an arbitrary field -------------
# Coefficient lists are low-to-high and trimmed (no trailing zeros).

def utrim(field, cs):
    cs = list(cs)
    while cs and field.is_zero(cs[-1]):
        cs.pop()
    return cs


def uadd(field, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else field.zero()
        y = b[i] if i < len(b) else field.zero()
        out.append(field.add(x, y))
    return utrim(field, out)


def usub(field, a, b):
    return uadd(field, a, [field.neg(c) for c in b])


def uscale(field, a, c):
    if field.is_zero(c):
        return []
    return [field.mul(x, c) for x in a]


def umul(field, a, b):
    if not a or not b:
        return []
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if field.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(x, y))
    return utrim(field, out)


def udivmod(field, a, b):
    """Division with remainder; b must be nonzero."""
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    a = list(a)
    q = [field.zero()] * max(0, len(a) - len(b) + 1)
    inv_lead = field.inv(b[-1])
    while len(a) >= len(b):
        c = field.mul(a[-1], inv_lead)
        k = len(a) - len(b)
        q[k] = c
        for i, bc in enumerate(b):
            a[k + i] = field.sub(a[k + i], field.mul(c, bc))
        a = utrim(field, a)
        if not a:
            break
    return utrim(field, q), utrim(field, a)


def ugcd(field, a, b):
    a, b = utrim(field, a), utrim(field, b)
    while b:
        _, r = udivmod(field, a, b)
        a, b = b, r
    if a:
        a = uscale(field, a, field.inv(a[-1]))
    return a


def ugcdext(field, a, b):
    """Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = utrim(field, a), utrim(field, b)
    s0, s1 = [field.one()], []
    t0, t1 = [], [field.one()]
    while r1:
        q, r = udivmod(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, usub(field, s0, umul(field, q, s1))
        t0, t1 = t1, usub(field, t0, umul(field, q, t1))
    if r0:
        c = field.inv(r0[-1])
        r0 = uscale(field, r0, c)
        s0 = uscale(field, s0, c)
        t0 = uscale(field, t0, c)
    return r0, s0, t0


def ueval(field, cs, x):
    acc = field.zero()
    for c in reversed(cs):
        acc = field.add(field.mul(acc, x), c)
    return acc


def _poly_roots(coeffs_mpc, maxsteps=300):
    """All complex roots of a polynomial given low-to-high mpc coefficients."""
    cs = list(coeffs_mpc)
    while cs and abs(cs[-1]) == 0:
        cs.pop()
    if len(cs) <= 1:
        return []
    roots = mpmath.polyroots(list(reversed(cs)), maxsteps=maxsteps, extraprec=200)
    return sorted(roots, key=lambda z: (mpmath.mpf(z.real), mpmath.mpf(z.imag)))


class ExtensionField:
    """A simple algebraic extension of ``base`` by a root of ``minpoly``.

    ``minpoly`` is a monic coefficient list (low-to-high) over ``base``,
    assumed irreducible there.  Elements are tuples of ``degree`` base
    elements.  A specific complex root is fixed at construction, making
    the whole tower numerically embedded.
    """

    def __init__(self, base, name, minpoly, root_hint=None, cap=DEFAULT_TOWER_CAP):
        minpoly = utrim(base, list(minpoly))
        if len(minpoly) < 3:
            raise ValueError("extension by a linear polynomial is pointless")
        if not base.eq(minpoly[-1], base.one()):
            lead_inv = base.inv(minpoly[-1])
            minpoly = [base.mul(c, lead_inv) for c in minpoly]
        self.base = base
        self.name = name
        self.minpoly = tuple(minpoly)
        self.degree = len(minpoly) - 1
        self.total_degree = base.total_degree * self.degree
        if self.total_degree > cap:
            raise ExtensionTooLarge(
                "tower degree %d exceeds cap %d" % (self.total_degree, cap))
        self._red = self._reduction_table()
        self.root = self._choose_root(root_hint)

    def _reduction_table(self):
        """Representations of gen^k, k = degree..2*degree-2, as vectors."""
        base, d = self.base, self.degree
        # gen^d = -(m_0 + m_1 gen + ...)
        top = [base.neg(c) for c in self.minpoly[:d]]
        table = {d: list(top)}
        cur = list(top)
        for k in range(d + 1, 2 * d - 1):
            nxt = [base.zero()] + cur[: d - 1]
            if not base.is_zero(cur[d - 1]):
                hi = cur[d - 1]
                nxt = [base.add(nxt[i], base.mul(hi, top[i])) for i in range(d)]
            table[k] = nxt
            cur = nxt
        return table

    def _choose_root(self, root_hint):
        with mpmath.workdps(EMBED_DPS):
            coeffs = [self.base.to_mpc(c) for c in self.minpoly]
            roots = _poly_roots(coeffs)
            if not roots:
                raise ArithmeticError("minimal polynomial has no roots?")
            if root_hint is None:
                return roots[0]
            return min(roots, key=lambda z: abs(z - root_hint))

    # -- element construction ------------------------------------------
    def zero(self):
        return (self.base.zero(),) * self.degree

    def one(self):
        return (self.base.one(),) + (self.base.zero(),) * (self.degree - 1)

    def gen(self):
        v = [self.base.zero()] * self.degree
        v[1] = self.base.one()
        return tuple(v)

    def from_rat(self, r):
        return self.lift(self.base.from_rat(r))

    def lift(self, x):
        """Embed a base-field element."""
        return (x,) + (self.base.zero(),) * (self.degree - 1)

    def lift_from(self, field, x):
        """Embed an element of any field lower in this tower."""
        if field is self:
            return x
        chain = []
        f = self
        while f is not None and f is not field:
            chain.append(f)
            f = f.base
        if f is None:
            raise ValueError("field is not in this tower")
        for g in reversed(chain):
            x = g.lift(x)
        return x

    def from_vec(self, vec):
        vec = list(vec)
        if len(vec) > self.degree:
            raise ValueError("coordinate vector too long")
        vec += [self.base.zero()] * (self.degree - len(vec))
        return tuple(vec)

    # -- arithmetic ----------------------------------------------------
    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        base, d = self.base, self.degree
        prod = [base.zero()] * (2 * d - 1)
        for i, x in enumerate(a):
            if base.is_zero(x):
                continue
            for j, y in enumerate(b):
                prod[i + j] = base.add(prod[i + j], base.mul(x, y))
        out = prod[:d]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if base.is_zero(c):
                continue
            red = self._red[k]
            out = [base.add(out[i], base.mul(c, red[i])) for i in range(d)]
        return tuple(out)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = ugcdext(self.base, utrim(self.base, list(a)), list(self.minpoly))
        if len(g) != 1:
            raise ArithmeticError("minimal polynomial is not irreducible")
        return self.from_vec(s)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if n < 0:
            return self.pow(self.inv(a), -n)
        out = self.one()
        acc = a
        while n:
            if n & 1:
                out = self.mul(out, acc)
            acc = self.mul(acc, acc)
            n >>= 1
        return out

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def eq(self, a, b):
        return all(self.base.eq(x, y) for x, y in zip(a, b))

    # -- structure -----------------------------------------------------
    def levels(self):
        return self.base.levels() + [self]

    def embeddings(self):
        """All numeric embeddings of the tower, as tuples of generator values."""
        out = []
        with mpmath.workdps(EMBED_DPS):
            for emb in self.base.embeddings():
                coeffs = [self.base.to_mpc(c, emb) for c in self.minpoly]
                for r in _poly_roots(coeffs):
                    out.append(emb + (r,))
        return out

    def canonical_embedding(self):
        f, emb = self, []
        while f.base is not None:
            emb.append(f.root)
            f = f.base
        return tuple(reversed(emb))

    def to_mpc(self, a, embedding=None):
        if embedding is None:
            embedding = self.canonical_embedding()
        r = embedding[-1]
        acc = mpmath.mpc(0)
        for c in reversed(a):
            acc = acc * r + self.base.to_mpc(c, embedding[:-1])
        return acc

    def elem_str(self, a):
        parts = []
        for k, c in enumerate(a):
            if self.base.is_zero(c):
                continue
            cs = self.base.elem_str(c)
            if k == 0:
                parts.append(cs)
            elif k == 1:
                parts.append("(%s)*%s" % (cs, self.name))
            else:
                parts.append("(%s)*%s^%d" % (cs, self.name, k))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "%r(%s deg %d)" % (self.base, self.name, self.degree)


def common_field(f1, f2):
    """The higher of two fields in the same tower, or None if unrelated."""
    l1, l2 = [QQ] + f1.levels(), [QQ] + f2.levels()
    if len(l1) < len(l2):
        l1, l2 = l2, l1
        f1, f2 = f2, f1
    return f1 if l1[: len(l2)] == l2 else None


def coerce(field, src_field, x):
    """Lift x from src_field into field (which must contain it)."""
    if field is src_field:
        return x
    if isinstance(field, RationalField):
        raise ValueError("cannot coerce an extension element into Q")
    return field.lift_from(src_field, x)


def fresh_name(field, prefix="a"):
    used = {lvl.name for lvl in field.levels()}
    k = len(used)
    while "%s%d" % (prefix, k) in used:
        k += 1
    return "%s%d" % (prefix, k)
