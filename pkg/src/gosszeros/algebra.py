"""Exact arithmetic in F_q, the polynomial ring F_q[T], and its fraction field.

Field elements are represented as integers 0..q-1 whose base-p digits are
the coordinates with respect to a fixed defining polynomial of degree f
(a small built-in table of primitive irreducibles; all quantities the
package asserts are independent of this choice, and the test suite checks
that for two different irreducibles).

Polynomials are stored per prime-field component as one big Python integer
with 16-bit slots per T-coefficient.  Multiplication of two components is
then a single integer multiplication (the slot width leaves enough headroom
that no convolution sum can overflow), followed by a slot-wise reduction
mod p.  This keeps the Goss-recursion oracle exact and fast without any
floating point or external computer algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

SLOT_BITS = 16
SLOT_BYTES = 2
_SLOT_MASK = (1 << SLOT_BITS) - 1

#: default defining polynomials, little-endian coefficients of a monic
#: irreducible of degree f over F_p (primitive for every listed q)
DEFAULT_MODULI = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (2, 2, 1),
    16: (1, 1, 0, 0, 1),
    25: (2, 4, 1),
    27: (1, 2, 0, 1),
}


@lru_cache(maxsize=None)
def _ones_mask(nslots: int) -> int:
    """0x0001 repeated nslots times (slot-wise '& 1' reducer for p = 2)."""
    return ((1 << (SLOT_BITS * nslots)) - 1) // _SLOT_MASK


def _reduce_slots(x: int, p: int) -> int:
    """Reduce every 16-bit slot of x modulo p."""
    if x == 0:
        return 0
    nslots = (x.bit_length() + SLOT_BITS - 1) // SLOT_BITS
    if p == 2:
        return x & _ones_mask(nslots)
    buf = x.to_bytes(nslots * SLOT_BYTES, "little")
    arr = np.frombuffer(buf, dtype="<u2").astype(np.uint32) % p
    return int.from_bytes(arr.astype("<u2").tobytes(), "little")


def _pack(coeffs: Sequence[int]) -> int:
    if not coeffs:
        return 0
    arr = np.asarray(coeffs, dtype="<u2")
    return int.from_bytes(arr.tobytes(), "little")


def _unpack(x: int, n: int) -> list[int]:
    buf = x.to_bytes(n * SLOT_BYTES, "little")
    return np.frombuffer(buf, dtype="<u2").tolist()


class Fq:
    """The field with q = p^f elements, elements encoded as ints 0..q-1."""

    def __init__(self, p: int, f: int, modulus: Sequence[int] | None = None):
        self.p = p
        self.f = f
        self.q = p ** f
        if modulus is None:
            if f == 1:
                modulus = (0, 1)  # x itself; unused for prime fields
            elif self.q in DEFAULT_MODULI:
                modulus = DEFAULT_MODULI[self.q]
            else:
                raise ValueError(
                    f"no built-in defining polynomial for q = {self.q}; supply one")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != f + 1 or modulus[f] != 1:
            raise ValueError("modulus must be monic of degree f")
        self.modulus = modulus
        self._build_tables()

    # -- table construction -------------------------------------------------

    def _poly_of(self, e: int) -> list[int]:
        out = []
        for _ in range(self.f):
            e, r = divmod(e, self.p)
            out.append(r)
        return out

    def _of_poly(self, digs: Sequence[int]) -> int:
        v = 0
        for d in reversed(digs):
            v = v * self.p + d
        return v

    def _build_tables(self):
        p, f, q = self.p, self.f, self.q
        # mul: schoolbook product in F_p[x] reduced by the modulus
        red = [(-c) % p for c in self.modulus[:f]]  # x^f = red as vector
        xpow = []  # x^m for m in 0..2f-2 as F_p vectors
        cur = [0] * f
        cur[0] = 1
        for _ in range(2 * f - 1):
            xpow.append(list(cur))
            nxt = [0] + cur[:-1]
            carry = cur[-1]
            if carry:
                nxt = [(nxt[i] + carry * red[i]) % p for i in range(f)]
            nxt = nxt[:f]
            cur = nxt
        self._xpow = [self._of_poly(v) for v in xpow]
        mul = [0] * (q * q)
        for a in range(q):
            da = self._poly_of(a)
            for b in range(a, q):
                db = self._poly_of(b)
                acc = [0] * f
                for i, ca in enumerate(da):
                    if not ca:
                        continue
                    for j, cb in enumerate(db):
                        if not cb:
                            continue
                        w = (ca * cb) % p
                        xv = xpow[i + j]
                        for t in range(f):
                            acc[t] = (acc[t] + w * xv[t]) % p
                v = self._of_poly(acc)
                mul[a * q + b] = v
                mul[b * q + a] = v
        self._mul = mul
        add = [0] * (q * q)
        for a in range(q):
            da = self._poly_of(a)
            for b in range(q):
                db = self._poly_of(b)
                add[a * q + b] = self._of_poly(
                    [(x + y) % p for x, y in zip(da, db)])
        self._add = add
        self._neg = [self._of_poly([(-d) % p for d in self._poly_of(a)])
                     for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a * q + b] == 1:
                    inv[a] = b
                    break
        self._inv = inv
        # multiplication-by-g^m weights for the packed polynomial product:
        # component r of g^(a+b) * (component product) accumulates with
        # weight gweights[a+b][r]
        self.gweights = tuple(tuple(self._poly_of(self._xpow[m]))
                              for m in range(2 * f - 1))
        # frobenius x -> x^p as an F_p-linear map, per component of the input
        frob_img = [self.pow_int(self._of_poly([0] * c + [1] + [0] * (f - 1 - c)), p)
                    for c in range(f)]
        self.frob_matrix = tuple(tuple(self._poly_of(frob_img[c]))
                                 for c in range(f))
        # regular representation of each element (for scalar multiplication)
        self._regrep = tuple(
            tuple(tuple(self._poly_of(self.mul_int(e, self._of_poly(
                [0] * c + [1] + [0] * (f - 1 - c)))))
                  for c in range(f))
            for e in range(q))

    # -- int-level ops -------------------------------------------------------

    def add_int(self, a: int, b: int) -> int:
        return self._add[a * self.q + b]

    def mul_int(self, a: int, b: int) -> int:
        return self._mul[a * self.q + b]

    def neg_int(self, a: int) -> int:
        return self._neg[a]

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self._inv[a]

    def sub_int(self, a: int, b: int) -> int:
        return self._add[a * self.q + self._neg[b]]

    def pow_int(self, a: int, n: int) -> int:
        if n == 0:
            return 1
        if a == 0:
            return 0
        n %= self.q - 1
        if n == 0:
            return 1
        out, base = 1, a
        while n:
            if n & 1:
                out = self.mul_int(out, base)
            base = self.mul_int(base, base)
            n >>= 1
        return out

    # -- element surface -----------------------------------------------------

    def el(self, v) -> "FqElem":
        if isinstance(v, FqElem):
            if v.field is not self:
                raise ValueError("element from another field")
            return v
        v = int(v)
        if 0 <= v < self.q:
            return FqElem(self, v)
        # integers act through the prime field
        return FqElem(self, v % self.p)

    @property
    def zero(self) -> "FqElem":
        return FqElem(self, 0)

    @property
    def one(self) -> "FqElem":
        return FqElem(self, 1)

    @property
    def gen(self) -> "FqElem":
        """The adjoined root of the defining polynomial (f >= 2)."""
        if self.f < 2:
            raise ValueError("prime field has no adjoined generator")
        return FqElem(self, self.p)

    def elements(self):
        return (FqElem(self, v) for v in range(self.q))

    def __repr__(self):
        return f"Fq(p={self.p}, f={self.f})"


@dataclass(frozen=True)
class FqElem:
    field: Fq
    v: int

    def __add__(self, other):
        return FqElem(self.field, self.field.add_int(self.v, self.field.el(other).v))

    __radd__ = __add__

    def __sub__(self, other):
        return FqElem(self.field, self.field.sub_int(self.v, self.field.el(other).v))

    def __mul__(self, other):
        return FqElem(self.field, self.field.mul_int(self.v, self.field.el(other).v))

    __rmul__ = __mul__

    def __neg__(self):
        return FqElem(self.field, self.field.neg_int(self.v))

    def __truediv__(self, other):
        o = self.field.el(other)
        return FqElem(self.field, self.field.mul_int(self.v, self.field.inv_int(o.v)))

    def __pow__(self, n: int):
        return FqElem(self.field, self.field.pow_int(self.v, n))

    def inverse(self):
        return FqElem(self.field, self.field.inv_int(self.v))

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        if isinstance(other, FqElem):
            return self.field is other.field and self.v == other.v
        if isinstance(other, int):
            return self == self.field.el(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.v))

    def __repr__(self):
        return f"<{self.v} in F{self.field.q}>"


# ---------------------------------------------------------------------------
# packed polynomials

def _comps_add(a: tuple, b: tuple, p: int) -> tuple:
    if p == 2:
        return tuple(x ^ y for x, y in zip(a, b))
    return tuple(_reduce_slots(x + y, p) for x, y in zip(a, b))


def _comps_mul(a: tuple, b: tuple, field: Fq,
               min_len: int | None = None) -> tuple:
    """Component product with on-the-fly reduction by the defining polynomial.

    Slot headroom: every output slot is bounded by f^2 (p-1)^3 min_len, which
    must stay below 2^16; the caller guards the length.
    """
    f, p = field.f, field.p
    prods = {}
    for i in range(f):
        if not a[i]:
            continue
        for j in range(f):
            if not b[j]:
                continue
            prods[(i, j)] = a[i] * b[j]
    out = [0] * f
    gw = field.gweights
    for (i, j), pr in prods.items():
        for r, w in enumerate(gw[i + j]):
            if w == 1:
                out[r] += pr
            elif w:
                out[r] += w * pr
    return tuple(_reduce_slots(x, p) for x in out)


def _guard_mul_len(field: Fq, la: int, lb: int):
    m = min(la, lb)
    bound = field.f ** 2 * (field.p - 1) ** 3 * max(m, 1)
    if bound >= 1 << SLOT_BITS:
        raise OverflowError(
            f"polynomial too long for 16-bit slot multiply (len {m}, q={field.q})")


class FqPoly:
    """Dense polynomial over F_q in the variable T (slot-packed components)."""

    __slots__ = ("field", "comps")

    def __init__(self, field: Fq, comps: tuple):
        self.field = field
        self.comps = comps

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, field: Fq) -> "FqPoly":
        return cls(field, (0,) * field.f)

    @classmethod
    def one(cls, field: Fq) -> "FqPoly":
        return cls.from_coeffs(field, [1])

    @classmethod
    def T(cls, field: Fq) -> "FqPoly":
        return cls.from_coeffs(field, [0, 1])

    @classmethod
    def from_coeffs(cls, field: Fq, coeffs: Iterable) -> "FqPoly":
        vals = [c.v if isinstance(c, FqElem) else field.el(c).v for c in coeffs]
        while vals and vals[-1] == 0:
            vals.pop()
        comps = []
        p = field.p
        for c in range(field.f):
            comp_digits = [(v // p ** c) % p for v in vals]
            comps.append(_pack(comp_digits))
        return cls(field, tuple(comps))

    @classmethod
    def monomial(cls, field: Fq, coeff, deg: int) -> "FqPoly":
        return cls.from_coeffs(field, [0] * deg + [coeff])

    # -- structure ------------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree in T; -1 for the zero polynomial."""
        d = -1
        for comp in self.comps:
            if comp:
                d = max(d, (comp.bit_length() - 1) // SLOT_BITS)
        return d

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.comps)

    def coeff_int(self, j: int) -> int:
        shift = SLOT_BITS * j
        p = self.field.p
        return sum(((comp >> shift) & _SLOT_MASK) * p ** c
                   for c, comp in enumerate(self.comps))

    def coeff(self, j: int) -> FqElem:
        return FqElem(self.field, self.coeff_int(j))

    def coeffs(self) -> list[int]:
        """All coefficients as field-element ints, little-endian."""
        n = self.degree + 1
        if n == 0:
            return []
        cols = [_unpack(comp, n) for comp in self.comps]
        p = self.field.p
        return [sum(cols[c][j] * p ** c for c in range(self.field.f))
                for j in range(n)]

    def lc(self) -> FqElem:
        d = self.degree
        if d < 0:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeff(d)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "FqPoly") -> "FqPoly":
        return FqPoly(self.field, _comps_add(self.comps, other.comps, self.field.p))

    def __neg__(self) -> "FqPoly":
        if self.field.p == 2:
            return self
        return self.scale_prime(self.field.p - 1)

    def __sub__(self, other: "FqPoly") -> "FqPoly":
        if self.field.p == 2:
            return self + other
        return self + other.scale_prime(self.field.p - 1)

    def scale_prime(self, c: int) -> "FqPoly":
        """Multiply by a prime-field scalar c in 0..p-1."""
        c %= self.field.p
        if c == 0:
            return FqPoly.zero(self.field)
        if c == 1:
            return self
        p = self.field.p
        return FqPoly(self.field,
                      tuple(_reduce_slots(comp * c, p) for comp in self.comps))

    def scale(self, elem) -> "FqPoly":
        """Multiply by a field element (regular-representation mix of comps)."""
        e = self.field.el(elem).v
        if e == 0:
            return FqPoly.zero(self.field)
        if e == 1:
            return self
        rep = self.field._regrep[e]  # rep[c] = coordinates of e * g^c
        f, p = self.field.f, self.field.p
        out = [0] * f
        for c in range(f):
            comp = self.comps[c]
            if not comp:
                continue
            for r in range(f):
                w = rep[c][r]
                if w:
                    out[r] += w * comp
        return FqPoly(self.field, tuple(_reduce_slots(x, p) for x in out))

    def __mul__(self, other: "FqPoly") -> "FqPoly":
        if self.is_zero() or other.is_zero():
            return FqPoly.zero(self.field)
        _guard_mul_len(self.field, self.degree + 1, other.degree + 1)
        return FqPoly(self.field, _comps_mul(self.comps, other.comps, self.field))

    def shift(self, k: int) -> "FqPoly":
        """Multiply by T^k."""
        if k < 0:
            raise ValueError("negative shift")
        sh = SLOT_BITS * k
        return FqPoly(self.field, tuple(comp << sh for comp in self.comps))

    def frobenius(self) -> "FqPoly":
        """p-th power: coefficients to the p, exponents spread by p."""
        f, p = self.field.f, self.field.p
        n = self.degree + 1
        if n == 0:
            return self
        cols = [_unpack(comp, n) for comp in self.comps]
        fm = self.field.frob_matrix
        out = []
        for r in range(f):
            spread = [0] * ((n - 1) * p + 1)
            for c in range(f):
                w = fm[c][r]
                if not w:
                    continue
                col = cols[c]
                for j in range(n):
                    if col[j]:
                        spread[j * p] = (spread[j * p] + w * col[j]) % p
            out.append(_pack(spread))
        return FqPoly(self.field, tuple(out))

    def __pow__(self, n: int) -> "FqPoly":
        """n-th power via base-p digits of n and iterated Frobenius."""
        if n < 0:
            raise ValueError("negative exponent")
        if n == 0:
            return FqPoly.one(self.field)
        p = self.field.p
        result = None
        power = self  # self^(p^e)
        while n:
            n, d = divmod(n, p)
            if d:
                piece = power
                for _ in range(d - 1):
                    piece = piece * power
                result = piece if result is None else result * piece
            if n:
                power = power.frobenius()
        return result

    def evaluate(self, x) -> FqElem:
        xe = self.field.el(x)
        acc = self.field.zero
        for c in reversed(self.coeffs()):
            acc = acc * xe + self.field.el(c)
        return acc

    # -- division -------------------------------------------------------------

    def __divmod__(self, other: "FqPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        field = self.field
        db = other.degree
        rem = self.coeffs()
        bs = other.coeffs()
        inv_lc = field.inv_int(bs[-1])
        quo = [0] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            fac = field.mul_int(c, inv_lc)
            quo[i - db] = fac
            for j, bj in enumerate(bs):
                if bj:
                    rem[i - db + j] = field.sub_int(
                        rem[i - db + j], field.mul_int(fac, bj))
        return (FqPoly.from_coeffs(field, quo), FqPoly.from_coeffs(field, rem))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "FqPoly":
        if self.is_zero():
            return self
        return self.scale(self.lc().inverse())

    def gcd(self, other: "FqPoly") -> "FqPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    # -- misc -----------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FqPoly) and self.field is other.field
                and self.comps == other.comps)

    def __hash__(self):
        return hash((id(self.field), self.comps))

    def __repr__(self):
        cs = self.coeffs()
        if not cs:
            return "FqPoly(0)"
        terms = [f"{c}*T^{j}" if j else f"{c}"
                 for j, c in enumerate(cs) if c]
        return "FqPoly(" + " + ".join(terms) + ")"


class RatFunc:
    """Reduced fraction of polynomials over F_q, denominator monic.

    ``val`` is the degree valuation deg(num) - deg(den); with the absolute
    value normalized by |T| = q this is log_q |x| for x in F_q(T).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: FqPoly, den: FqPoly, reduce: bool = True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce and not num.is_zero():
            g = num.gcd(den)
            if g.degree > 0:
                num = num // g
                den = den // g
        if num.is_zero():
            den = FqPoly.one(num.field)
        else:
            c = den.lc().inverse()
            num = num.scale(c)
            den = den.scale(c)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: FqPoly) -> "RatFunc":
        return cls(p, FqPoly.one(p.field), reduce=False)

    @classmethod
    def zero(cls, field: Fq) -> "RatFunc":
        return cls(FqPoly.zero(field), FqPoly.one(field), reduce=False)

    @classmethod
    def one(cls, field: Fq) -> "RatFunc":
        return cls(FqPoly.one(field), FqPoly.one(field), reduce=False)

    @property
    def field(self) -> Fq:
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def val(self) -> int | None:
        """deg num - deg den (= log_q of the absolute value); None for 0."""
        if self.num.is_zero():
            return None
        return self.num.degree - self.den.degree

    def residue(self) -> FqElem:
        """Image in F_q of an element with val <= 0 (0 when val < 0)."""
        v = self.val()
        if v is None or v < 0:
            return self.field.zero
        if v > 0:
            raise ValueError("no residue: positive valuation")
        return self.num.lc() / self.den.lc()

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den - other.num * self.den,
                       self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduce=False)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return RatFunc(self.den ** (-n), self.num ** (-n))
        return RatFunc(self.num ** n, self.den ** n, reduce=False)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num!r} / {self.den!r})"
