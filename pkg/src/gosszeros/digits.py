"""Base-p / base-q digit calculus for a fixed prime power q = p^f.

Everything downstream (compositions, approximation numbers, zero spectra)
reduces to combinatorics of p-adic and q-adic expansions:

* digit-sum functions ``ell_i``, ``ell``, ``ell_partial``;
* the cyclic group of order f acting on digit positions inside each
  q-adic block, with the twisted digit sum ``ell_sigma``;
* the indicator ``I(n) = min over shifts of the twisted digit sum``,
  which computes the height of n (the maximal length of a carry-free
  chain of (q-1)-divisible subnumbers);
* carry-free ("smooth") addition and the digit-domination orders.

All functions are pure; a :class:`Config` is immutable and shareable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence


class CarryError(ValueError):
    """A p-digit carry occurred where a smooth sum was required."""

    def __init__(self, position: int):
        super().__init__(f"p-digit carry at position {position}")
        self.position = position


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _factor_prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            f = 0
            m = q
            while m % p == 0:
                m //= p
                f += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, f
    raise ValueError(f"{q} is not a prime power")


@dataclass(frozen=True)
class Config:
    """Arithmetic context: prime p, exponent f, q = p^f, and digit tables."""

    p: int
    f: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.f < 1:
            raise ValueError(f"f = {self.f} must be positive")

    @classmethod
    def create(cls, p: int | None = None, f: int | None = None,
               q: int | None = None) -> "Config":
        if q is not None:
            qp, qf = _factor_prime_power(q)
            if p is not None and p != qp:
                raise ValueError(f"q = {q} is not a power of p = {p}")
            if f is not None and f != qf:
                raise ValueError(f"q = {q} != {p or qp}^{f}")
            return cls(qp, qf)
        if p is None or f is None:
            raise ValueError("give q, or both p and f")
        return cls(p, f)

    @property
    def q(self) -> int:
        return self.p ** self.f

    # Representative sets F, P, Q, Q' for Z/f, Z/p, Z/q, Z/(q-1).
    @property
    def F(self) -> range:
        return range(self.f)

    @property
    def P(self) -> range:
        return range(self.p)

    @property
    def Q(self) -> range:
        return range(self.q)

    @property
    def Qprime(self) -> range:
        return range(self.q - 1)

    @cached_property
    def qdigit_pdigits(self) -> tuple[tuple[int, ...], ...]:
        """p-digit vector (length f) of every digit in Q."""
        out = []
        for d in range(self.q):
            v, digs = d, []
            for _ in range(self.f):
                v, r = divmod(v, self.p)
                digs.append(r)
            out.append(tuple(digs))
        return tuple(out)

    @cached_property
    def shift_tables(self) -> tuple[tuple[int, ...], ...]:
        """shift_tables[s][d] = image of the q-digit d under the s-shift.

        The shift by s sends the p-part of type i inside a block to type
        (i - s) mod f, so the p-digit at slot i of the image is the source
        digit at slot (i + s) mod f.
        """
        tabs = []
        for s in range(self.f):
            row = []
            for d in range(self.q):
                pd = self.qdigit_pdigits[d]
                row.append(sum(pd[(i + s) % self.f] * self.p ** i
                               for i in range(self.f)))
            tabs.append(tuple(row))
        return tuple(tabs)

    @cached_property
    def ellp_table(self) -> tuple[int, ...]:
        """Number of p-parts (p-digit sum) of each digit in Q."""
        return tuple(sum(self.qdigit_pdigits[d]) for d in range(self.q))


@dataclass(frozen=True)
class CyclicShift:
    """An element sigma_s of the cyclic shift group of order f."""

    s: int
    f: int

    def __post_init__(self):
        if not 0 <= self.s < self.f:
            raise ValueError(f"shift {self.s} outside 0..{self.f - 1}")

    def compose(self, other: "CyclicShift") -> "CyclicShift":
        if self.f != other.f:
            raise ValueError("mismatched shift groups")
        return CyclicShift((self.s + other.s) % self.f, self.f)

    def inverse(self) -> "CyclicShift":
        return CyclicShift((-self.s) % self.f, self.f)


def _shift_of(sigma, cfg: Config) -> int:
    if isinstance(sigma, CyclicShift):
        if sigma.f != cfg.f:
            raise ValueError("shift group does not match config")
        return sigma.s
    s = int(sigma)
    return s % cfg.f


@dataclass(frozen=True)
class DigitSeq:
    """Little-endian digit expansion, base p or base q.

    ``tail`` is an optional constant digit repeated beyond the finite part;
    the only supported tail is q-1 (base q) / p-1 (base p), which encodes a
    negative integer p-adically.  Operations on tailed sequences require an
    explicit truncation index from the caller.
    """

    base: int
    digits: tuple[int, ...]
    tail: int | None = None

    def __post_init__(self):
        for d in self.digits:
            if not 0 <= d < self.base:
                raise ValueError(f"digit {d} outside base {self.base}")
        if self.tail is not None and self.tail != self.base - 1:
            raise ValueError("only a constant tail of base-1 is supported")
        # canonical form: no trailing zeros in the finite part
        digs = self.digits
        if self.tail is None:
            while digs and digs[-1] == 0:
                digs = digs[:-1]
        if digs != self.digits:
            object.__setattr__(self, "digits", digs)

    def digit(self, j: int) -> int:
        if j < len(self.digits):
            return self.digits[j]
        if self.tail is not None:
            return self.tail
        return 0

    def value(self) -> int:
        if self.tail is not None:
            raise ValueError("a tailed sequence has no finite value")
        v = 0
        for d in reversed(self.digits):
            v = v * self.base + d
        return v

    def truncate(self, upto: int) -> "DigitSeq":
        """Finite sequence of the digits at positions 0..upto-1."""
        digs = tuple(self.digit(j) for j in range(upto))
        return DigitSeq(self.base, digs)

    def __len__(self) -> int:
        return len(self.digits)


# ---------------------------------------------------------------------------
# low-level digit vectors (plain lists; hot paths stay on these)

def qdigits(n: int, cfg: Config) -> list[int]:
    if n < 0:
        raise ValueError("negative integer")
    q, out = cfg.q, []
    while n:
        n, r = divmod(n, q)
        out.append(r)
    return out


def pdigits(n: int, cfg: Config) -> list[int]:
    if n < 0:
        raise ValueError("negative integer")
    p, out = cfg.p, []
    while n:
        n, r = divmod(n, p)
        out.append(r)
    return out


def from_qdigits(digs: Sequence[int], cfg: Config) -> int:
    v = 0
    for d in reversed(digs):
        v = v * cfg.q + d
    return v


def expand(n: int, base: str | int, cfg: Config) -> DigitSeq:
    """Canonical digit expansion of n >= 0 to base 'p' or 'q'."""
    if isinstance(base, str):
        b = cfg.p if base == "p" else cfg.q if base == "q" else None
    else:
        b = base if base in (cfg.p, cfg.q) else None
    if b is None:
        raise ValueError(f"base must be p={cfg.p} or q={cfg.q}")
    digs = pdigits(n, cfg) if b == cfg.p else qdigits(n, cfg)
    return DigitSeq(b, tuple(digs))


# ---------------------------------------------------------------------------
# digit sums

def ell_i(n: int, i: int, cfg: Config) -> int:
    """Number of p-parts of n of type i (p-positions congruent to i mod f)."""
    if i not in cfg.F:
        raise ValueError(f"type {i} outside 0..{cfg.f - 1}")
    tab = cfg.qdigit_pdigits
    return sum(tab[d][i] for d in qdigits(n, cfg))


def ell(n: int, cfg: Config) -> int:
    """q-adic digit sum of n."""
    return sum(qdigits(n, cfg))


def ell_partial(n: int, i: int, cfg: Config) -> int:
    """Partial sum ell^{(i)}(n) = sum_{0 <= j < i} ell_j(n) p^j, 1 <= i <= f."""
    if not 1 <= i <= cfg.f:
        raise ValueError(f"partial index {i} outside 1..{cfg.f}")
    tab = cfg.qdigit_pdigits
    digs = qdigits(n, cfg)
    return sum(sum(tab[d][j] for d in digs) * cfg.p ** j for j in range(i))


def ell_p(n: int, cfg: Config) -> int:
    """Total number of p-parts of n (p-adic digit sum)."""
    return sum(pdigits(n, cfg))


# ---------------------------------------------------------------------------
# cyclic action

def sigma_act(x, sigma, cfg: Config):
    """Apply the shift to a non-negative integer or a DigitSeq.

    The action permutes p-digit slots within each q-digit block; the value
    of the q-digit d becomes shift_tables[s][d].
    """
    s = _shift_of(sigma, cfg)
    tab = cfg.shift_tables[s]
    if isinstance(x, DigitSeq):
        if x.base == cfg.q:
            digs = tuple(tab[d] for d in x.digits)
            return DigitSeq(cfg.q, digs, x.tail)  # (q-1)^sigma = q-1
        # base p: regroup into q-blocks, shift, flatten
        if x.tail is not None:
            raise ValueError("shift a tailed p-sequence via its q-form")
        n = x.value()
        return expand(sigma_act(n, s, cfg), "p", cfg)
    n = int(x)
    if n < 0:
        raise ValueError("negative integer")
    q, out, pos = cfg.q, 0, 1
    while n:
        n, d = divmod(n, q)
        out += tab[d] * pos
        pos *= q
    return out


def ell_sigma(n: int, sigma, cfg: Config) -> int:
    """Twisted digit sum: ell of the shifted integer."""
    s = _shift_of(sigma, cfg)
    tab = cfg.shift_tables[s]
    return sum(tab[d] for d in qdigits(n, cfg))


class Indicator(NamedTuple):
    value: int
    critical: tuple[int, ...]  # shifts s attaining the minimum, ascending


def _indicator_digits(digs: Sequence[int], cfg: Config) -> tuple[int, list[int]]:
    tabs = cfg.shift_tables
    best, crit = None, []
    for s in range(cfg.f):
        tab = tabs[s]
        v = 0
        for d in digs:
            v += tab[d]
        if best is None or v < best:
            best, crit = v, [s]
        elif v == best:
            crit.append(s)
    return best or 0, crit


def indicator(n: int, cfg: Config) -> Indicator:
    """I(n) = min over shifts of the twisted digit sum, with critical shifts."""
    if n < 0:
        raise ValueError("negative integer")
    v, crit = _indicator_digits(qdigits(n, cfg), cfg)
    return Indicator(v, tuple(crit))


def height(n: int, cfg: Config) -> int:
    """Maximal length of a chain 0 < n_1 < ... < n_h digit-dominated by n.

    Chain steps are strict, carry-free and divisible by q-1; the value is
    floor(I(n)/(q-1)) by the indicator characterization.
    """
    if n < 0:
        raise ValueError("negative integer")
    return indicator(n, cfg).value // (cfg.q - 1)


# ---------------------------------------------------------------------------
# order relations and smooth sums

def rel_p(a: int, b: int, cfg: Config) -> bool:
    """Digitwise p-adic domination a <=_p b (no carry in b = a + (b-a))."""
    if a < 0 or b < 0:
        raise ValueError("negative integer")
    if cfg.p == 2:
        return a & b == a
    while a:
        if a % cfg.p > b % cfg.p:
            return False
        a //= cfg.p
        b //= cfg.p
    return True


def rel_prec(a: int, b: int, cfg: Config) -> bool:
    """a <=_p b together with a = b mod q-1."""
    return (a - b) % (cfg.q - 1) == 0 and rel_p(a, b, cfg)


def try_smooth_add(parts: Iterable[int], cfg: Config) -> int | None:
    """Sum of parts if no p-digit carry occurs, else None."""
    parts = list(parts)
    total = sum(parts)
    if cfg.p == 2:
        acc = 0
        for x in parts:
            if acc & x:
                return None
            acc |= x
        return acc
    p, rem = cfg.p, list(parts)
    while any(rem):
        if sum(x % p for x in rem) >= p:
            return None
        rem = [x // p for x in rem]
    return total


def smooth_add(parts: Iterable[int], cfg: Config) -> int:
    """Carry-free sum; raises CarryError naming the first carry position."""
    parts = list(parts)
    for x in parts:
        if x < 0:
            raise ValueError("negative integer")
    p, rem, pos = cfg.p, list(parts), 0
    while any(rem):
        if sum(x % p for x in rem) >= p:
            raise CarryError(pos)
        rem = [x // p for x in rem]
        pos += 1
    return sum(parts)


def sup_p(a: int, b: int, cfg: Config) -> int:
    """Digitwise maximum in base p."""
    if cfg.p == 2:
        return a | b
    out, pos = 0, 1
    while a or b:
        out += max(a % cfg.p, b % cfg.p) * pos
        a //= cfg.p
        b //= cfg.p
        pos *= cfg.p
    return out


def inf_p(a: int, b: int, cfg: Config) -> int:
    """Digitwise minimum in base p."""
    if cfg.p == 2:
        return a & b
    out, pos = 0, 1
    while a and b:
        out += min(a % cfg.p, b % cfg.p) * pos
        a //= cfg.p
        b //= cfg.p
        pos *= cfg.p
    return out


def greedy_min_indicator(parts: Iterable[int], target: int, cfg: Config) -> int:
    """Least value assembled from a p-part supply whose indicator hits target.

    ``parts`` yields p-positions in ascending value order (with multiplicity).
    Seed with parts until I >= target, then drop parts from the second-largest
    down whenever I stays at or above target; the result ends with I exactly
    at target, which makes it divisible by q-1 automatically.
    """
    if target <= 0:
        return 0
    f, p = cfg.f, cfg.p
    gen = iter(parts)
    digs: list[int] = []
    picked: list[int] = []
    while _indicator_digits(digs, cfg)[0] < target:
        try:
            j = next(gen)
        except StopIteration:
            raise ValueError(f"part supply exhausted before indicator {target}")
        J, c = divmod(j, f)
        while len(digs) <= J:
            digs.append(0)
        digs[J] += p ** c
        picked.append(j)
    idx = len(picked) - 1
    while _indicator_digits(digs, cfg)[0] != target:
        idx -= 1
        if idx < 0:
            raise ValueError("greedy removal exhausted the seed")
        J, c = divmod(picked[idx], f)
        step = p ** c
        digs[J] -= step
        if _indicator_digits(digs, cfg)[0] < target:
            digs[J] += step
    v = 0
    for d in reversed(digs):
        v = v * cfg.q + d
    return v


# ---------------------------------------------------------------------------
# chain witness

def _pick_block(avail: list[int], cfg: Config) -> list[int]:
    """Pick p-part counts with digit sum exactly q-1 from availability.

    Step i wants p-1 parts of type i (smallest positions first); a deficit is
    compensated by the smallest unused parts of lower types, largest type
    first, so that the running weighted count stays at p^{i+1}-1.
    ``avail[j]`` counts free p-parts at p-position j and is updated in place.
    """
    p, f = cfg.p, cfg.f
    take = [0] * len(avail)

    def grab(type_i: int, count: int) -> int:
        got = 0
        for j in range(type_i, len(avail), f):
            while avail[j] and got < count:
                avail[j] -= 1
                take[j] += 1
                got += 1
            if got == count:
                break
        return got

    for i in range(f):
        got = grab(i, p - 1)
        deficit = (p - 1) - got
        if deficit:
            rem = deficit * p ** i
            for t in range(i - 1, -1, -1):
                want = rem // p ** t
                got_t = grab(t, want)
                rem -= got_t * p ** t
            if rem:
                raise ValueError("compensation failed: height too small")
    return take


def chain_witness(n: int, H: int, cfg: Config) -> list[int]:
    """A chain 0 < n_1 < ... < n_H <=_p n witnessing height at least H.

    The chain elements satisfy ell(shifted n_j) = (q-1) j for a single
    witness shift; consecutive differences are carry-free and divisible
    by q-1.  Raises ValueError when the height of n is smaller than H.
    """
    if H == 0:
        return []
    if height(n, cfg) < H:
        raise ValueError(f"height of {n} is smaller than {H}")
    p, f = cfg.p, cfg.f
    witness = None
    for s in range(f):
        ns = sigma_act(n, s, cfg)
        if all(ell_partial(ns, i, cfg) >= (p ** i - 1) * H for i in range(1, f + 1)):
            witness = s
            break
    if witness is None:  # cannot happen when height(n) >= H
        raise ValueError("no witness shift found")
    shifted = sigma_act(n, witness, cfg)
    avail = pdigits(shifted, cfg)
    chain_shifted, acc = [], 0
    for _ in range(H):
        take = _pick_block(avail, cfg)
        block = sum(c * p ** j for j, c in enumerate(take))
        acc += block  # disjoint p-parts: smooth by construction
        chain_shifted.append(acc)
    inv = (-witness) % f
    return [sigma_act(c, inv, cfg) for c in chain_shifted]
