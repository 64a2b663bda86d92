"""Sheats compositions of integers divisible by q-1.

The Sheats composition of n is the unique carry-free decomposition
n = X_1 + ... + X_h (h = height of n, every X_j > 0 divisible by q-1)
of dominant weight; its transpose is lexicographically maximal.  The
greedy algorithm here peels off the largest factor X_h by scanning the
p-parts of n in decreasing order and keeping a part exactly when the
remainder after removing it still has height h-1, measured through the
indicator function.

Also provided: weights and coweights with respect to arbitrary weight
systems, an exhaustive maximum-weight oracle, and direct power sums
over F_q[T] whose degrees realize the weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Fq, FqPoly
from .digits import (Config, _indicator_digits, ell_p, greedy_min_indicator,
                     height, pdigits, qdigits, rel_prec, try_smooth_add)


class SearchBudgetError(RuntimeError):
    """An exhaustive search exceeded its configured bound."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed (indicates an implementation bug)."""


@dataclass(frozen=True)
class SheatsData:
    """Composition (X_1..X_h) and sequence (0, n_1, ..., n_h = n)."""

    n: int
    height: int
    composition: tuple[int, ...]
    sequence: tuple[int, ...]
    cfg: Config


@dataclass(frozen=True)
class WeightSystem:
    """Strictly increasing log critical radii 0 = r_0 < r_1 < ... (a prefix)."""

    rs: tuple[Fraction, ...]

    def __post_init__(self):
        rs = tuple(Fraction(r) for r in self.rs)
        object.__setattr__(self, "rs", rs)
        if not rs or rs[0] != 0:
            raise ValueError("weight system must start with r_0 = 0")
        if any(a >= b for a, b in zip(rs, rs[1:])):
            raise ValueError("weights must be strictly increasing")

    @classmethod
    def natural(cls, length: int = 64) -> "WeightSystem":
        """The weight system 0, 1, 2, ... of the lattice F_q[T]."""
        return cls(tuple(Fraction(j) for j in range(length)))

    def is_natural(self) -> bool:
        return all(r == j for j, r in enumerate(self.rs))

    def r(self, j: int) -> Fraction:
        if j >= len(self.rs):
            raise IndexError(f"weight system has no r_{j}; supply more weights")
        return self.rs[j]

    def __len__(self) -> int:
        return len(self.rs)


def _check_divisible(n: int, cfg: Config):
    if n <= 0 or n % (cfg.q - 1) != 0:
        raise ValueError(f"n = {n} must be positive and divisible by q-1 = {cfg.q - 1}")


def _parts_desc(n: int, cfg: Config) -> list[int]:
    """p-positions of the p-parts of n, descending, with multiplicity."""
    out = []
    for j, a in enumerate(pdigits(n, cfg)):
        out.extend([j] * a)
    out.reverse()
    return out


def largest_factor(n: int, cfg: Config) -> int:
    """The largest Sheats factor X_h of n (greedy scan over p-parts).

    A part is kept for X_h exactly when the rest of n still has height
    h-1 without it; the scan stops as soon as the digit-sum indicator of
    the picked sum reaches q-1, which is also its final value.
    """
    _check_divisible(n, cfg)
    q1 = cfg.q - 1
    h = height(n, cfg)
    need_rest = q1 * (h - 1)
    f = cfg.f
    # mutable q-digit vectors for the picked part (m) and the rest (mp)
    mp = qdigits(n, cfg)
    m = [0] * len(mp)
    p = cfg.p
    for j in _parts_desc(n, cfg):
        J, c = divmod(j, f)
        step = p ** c
        mp[J] -= step
        if _indicator_digits(mp, cfg)[0] >= need_rest:
            m[J] += step
        else:
            mp[J] += step
        if _indicator_digits(m, cfg)[0] >= q1:
            break
    picked_I = _indicator_digits(m, cfg)[0]
    if picked_I != q1:
        raise ConsistencyError(f"factor scan ended with indicator {picked_I}")
    val = 0
    for d in reversed(m):
        val = val * cfg.q + d
    return val


def sheats(n: int, cfg: Config) -> SheatsData:
    """Full Sheats composition and sequence of n via repeated peeling."""
    _check_divisible(n, cfg)
    h = height(n, cfg)
    comp_rev, cur = [], n
    for _ in range(h):
        x = largest_factor(cur, cfg)
        comp_rev.append(x)
        cur -= x
    if cur != 0:
        raise ConsistencyError("composition does not sum to n")
    comp = tuple(reversed(comp_rev))
    seq, acc = [0], 0
    for x in comp:
        acc += x
        seq.append(acc)
    return SheatsData(n, h, comp, tuple(seq), cfg)


def _parts_asc(n: int, cfg: Config) -> list[int]:
    out = []
    for j, a in enumerate(pdigits(n, cfg)):
        out.extend([j] * a)
    return out


def min_subnumber_with_height(n: int, j: int, cfg: Config) -> int:
    """Least m digitwise below n with m divisible by q-1 and height >= j."""
    if j <= 0:
        return 0
    try:
        return greedy_min_indicator(_parts_asc(n, cfg), (cfg.q - 1) * j, cfg)
    except ValueError:
        raise ValueError(f"height of {n} is smaller than {j}") from None


def composition_at(n: int, i: int, cfg: Config) -> tuple[int, ...]:
    """The Sheats i-composition: dominant weight, transpose lex-maximal.

    Built greedily from the top: the last part is n minus the least
    subnumber of height i-1, and so on down.  For i = ht(n) this is the
    full Sheats composition; for smaller i it can differ from merging the
    top factors of the full composition (the power-sum degrees follow
    this one, not the merge).
    """
    if i < 1:
        raise IndexError("composition length must be >= 1")
    _check_divisible(n, cfg)
    parts_rev = []
    m = n
    for level in range(i, 1, -1):
        r = min_subnumber_with_height(m, level - 1, cfg)
        parts_rev.append(m - r)
        m = r
    parts_rev.append(m)
    return tuple(reversed(parts_rev))


def truncated(sh: SheatsData, i: int) -> tuple[int, ...]:
    """The Sheats i-composition of sh.n (see :func:`composition_at`)."""
    if not 1 <= i <= sh.height:
        raise IndexError(f"truncation length {i} outside 1..{sh.height}")
    if i == sh.height:
        return sh.composition
    return composition_at(sh.n, i, sh.cfg)


def weight(comp: Sequence[int], ws: WeightSystem) -> Fraction:
    """wt_r(X) = sum r_{j-1} X_j over the composition (1-indexed)."""
    return sum((ws.r(j) * x for j, x in enumerate(comp)), Fraction(0))


def weight_n0(comp: Sequence[int]) -> int:
    """Weight for the natural system 0,1,2,...: sum (j-1) X_j."""
    return sum(j * x for j, x in enumerate(comp))


def coweight_i(n: int, i: int, cfg: Config) -> int:
    """ct^{(i)}(n) = i n - wt(Sheats i-composition)."""
    if i > height(n, cfg):
        raise ValueError(f"height of {n} is smaller than {i}")
    return i * n - weight_n0(composition_at(n, i, cfg))


def reduced_coweight(n: int, i: int, cfg: Config) -> int:
    """ct_i(n) = ct^{(i)}(n) - n = sum of the i-composition's prefix sums."""
    return coweight_i(n, i, cfg) - n


# ---------------------------------------------------------------------------
# exhaustive oracle

MAX_BRUTE_PARTS = 16


def _sub_digit_numbers(v: int, cfg: Config):
    """All m with 0 < m <=_p v (digitwise), as integers."""
    if cfg.p == 2:
        # classic submask walk
        m = v
        while m:
            yield m
            m = (m - 1) & v
        return
    digs = pdigits(v, cfg)
    pows = [cfg.p ** j for j in range(len(digs))]

    def rec(j, acc):
        if j == len(digs):
            if acc:
                yield acc
            return
        for c in range(digs[j] + 1):
            yield from rec(j + 1, acc + c * pows[j])

    yield from rec(0, 0)


class _BruteTable:
    """Shared memo for exhaustive maximum-weight compositions.

    ``best[(v, i)]`` holds (weight, last factor, tie flag) of the dominant
    i-composition of v for the natural weight system; reconstruction walks
    the last factors.  Enumeration is by digit partition, so carry-freeness
    is automatic.
    """

    def __init__(self, cfg: Config):
        self.cfg = cfg
        self.memo: dict[tuple[int, int], tuple[int, int, bool] | None] = {}

    def best(self, v: int, i: int):
        key = (v, i)
        if key in self.memo:
            return self.memo[key]
        cfg = self.cfg
        q1 = cfg.q - 1
        if i == 1:
            res = (0, v, False) if v > 0 and v % q1 == 0 else None
            self.memo[key] = res
            return res
        best = None
        tie = False
        for last in _sub_digit_numbers(v, cfg):
            if last % q1:
                continue
            rest = v - last
            sub = self.best(rest, i - 1)
            if sub is None:
                continue
            w = sub[0] + (i - 1) * last
            if best is None or w > best[0]:
                best = (w, last, sub[2])
                tie = sub[2]
            elif w == best[0]:
                tie = True
                best = (best[0], best[1], True)
        if best is not None and tie:
            best = (best[0], best[1], True)
        self.memo[key] = best
        return best


_brute_tables: dict[tuple[int, int], _BruteTable] = {}


def brute_sheats(n: int, i: int, cfg: Config,
                 max_parts: int = MAX_BRUTE_PARTS) -> tuple[int, ...]:
    """Dominant-weight i-composition of n by exhaustive enumeration.

    Independent of the greedy algorithm; a weight tie between distinct
    compositions raises ConsistencyError since dominance must be strict.
    """
    _check_divisible(n, cfg)
    if ell_p(n, cfg) > max_parts:
        raise SearchBudgetError(
            f"{n} has {ell_p(n, cfg)} p-parts > budget {max_parts}")
    table = _brute_tables.setdefault((cfg.p, cfg.f), _BruteTable(cfg))
    res = table.best(n, i)
    if res is None:
        raise ValueError(f"{n} admits no {i}-composition")
    if res[2]:
        raise ConsistencyError(f"weight tie among {i}-compositions of {n}")
    comp_rev, v = [], n
    for j in range(i, 0, -1):
        w, last, _ = table.best(v, j)
        comp_rev.append(last)
        v -= last
    return tuple(reversed(comp_rev))


# ---------------------------------------------------------------------------
# power sums

MAX_POWER_SUM_TERMS = 4096


def power_sum(i: int, n: int, cfg: Config, field: Fq | None = None) -> FqPoly:
    """S_{i,A}(n): sum of a^n over the q^i polynomials a of degree < i.

    Computed by direct summation in F_q[T]; vanishes unless n is divisible
    by q-1 with height at least i, in which case its degree equals the
    weight of the truncated Sheats composition of length i.
    """
    if i < 1:
        raise ValueError("need i >= 1")
    if cfg.q ** i > MAX_POWER_SUM_TERMS:
        raise SearchBudgetError(f"q^i = {cfg.q ** i} exceeds {MAX_POWER_SUM_TERMS}")
    if field is None:
        field = Fq(cfg.p, cfg.f)
    total = FqPoly.zero(field)
    coeffs = [0] * i
    while True:
        a = FqPoly.from_coeffs(field, coeffs)
        if not a.is_zero():
            total = total + a ** n
        elif n == 0:
            total = total + FqPoly.one(field)
        j = 0
        while j < i:
            coeffs[j] += 1
            if coeffs[j] < cfg.q:
                break
            coeffs[j] = 0
            j += 1
        if j == i:
            break
    return total
