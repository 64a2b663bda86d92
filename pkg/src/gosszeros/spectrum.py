"""Per-k analysis of the zero spectrum of the k-th Goss polynomial.

For fixed q and k the machinery here computes, in exact arithmetic:

* the digit data of -k (the tailed base-q expansion kappa);
* approximation numbers mu_i(k): least admissible integers of height i,
  by a greedy removal algorithm seeded from the smallest p-parts of kappa;
* regularity (do the mu_i form a domination chain?), the minimal number
  M with forced low digits, its height H, the minimal critical shift,
  and the resulting Case 1 / Case 2 split;
* the vanishing order gamma(k) of the Goss polynomial at 0 (closed form,
  checked against the stabilized limit (k + mu_i)/q^i);
* irregular zero radii strictly between consecutive integer types, from
  the lower convex hull over the candidate set Theta(k, i);
* the strictly decreasing type-to-log-radius map L, and the full
  predicted Newton polygon for any separable weight system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .digits import (Config, DigitSeq, _indicator_digits, from_qdigits,
                     greedy_min_indicator, height, indicator, qdigits, rel_p,
                     rel_prec)
from .sheats import (ConsistencyError, SheatsData, WeightSystem, largest_factor,
                     reduced_coweight, sheats)


class ScanBoundError(RuntimeError):
    """A linear scan exceeded its bound before finding its target."""


class ScopeError(ValueError):
    """Requested prediction outside the supported scope."""


# ---------------------------------------------------------------------------
# kappa digits and admissibility

def kappa_digits(k: int, upto: int, cfg: Config) -> DigitSeq:
    """Base-q digits of -k: q-1-k_j up to the degree of k-1, then all q-1.

    ``upto`` is the number of finite digits materialized; positions beyond
    are covered by the constant tail q-1.
    """
    if k < 1:
        raise ValueError("k must be positive")
    kd = qdigits(k - 1, cfg)
    alpha = max(len(kd) - 1, 0)
    n = max(upto, alpha + 1)
    digs = [cfg.q - 1 - (kd[j] if j < len(kd) else 0) for j in range(n)]
    return DigitSeq(cfg.q, tuple(digs), tail=cfg.q - 1)


def _kappa_digit(kappa: DigitSeq, j: int) -> int:
    return kappa.digit(j)


def is_admissible(n: int, i: int, profile: "KProfile", cfg: Config | None = None) -> bool:
    """n = 0 mod q-1, n digitwise below kappa, and height at least i."""
    cfg = cfg or profile.cfg
    if n < 0:
        return False
    if n % (cfg.q - 1) != 0:
        return False
    tab = cfg.qdigit_pdigits
    kap = profile.kappa
    for j, d in enumerate(qdigits(n, cfg)):
        kd = kap.digit(j)
        if kd != cfg.q - 1:
            pd, pk = tab[d], tab[kd]
            if any(a > b for a, b in zip(pd, pk)):
                return False
    return height(n, cfg) >= i


# ---------------------------------------------------------------------------
# approximation numbers

def _kappa_parts_ascending(k: int, cfg: Config) -> Iterator[int]:
    """p-positions of the p-parts of kappa = -k, ascending, with multiplicity."""
    kd = qdigits(k - 1, cfg)
    alpha = max(len(kd) - 1, 0)
    tab = cfg.qdigit_pdigits
    J = 0
    while True:
        kj = kd[J] if J < len(kd) else 0
        digit = cfg.q - 1 - kj if J <= alpha else cfg.q - 1
        pd = tab[digit]
        for c in range(cfg.f):
            for _ in range(pd[c]):
                yield J * cfg.f + c
        J += 1


def mu(k_or_profile, i: int, cfg: Config | None = None) -> int:
    """The i-th approximation number: least i-admissible integer.

    Seeded with the smallest p-parts of kappa until the indicator reaches
    (q-1) i, then parts are dropped greedily from the second-largest down
    whenever the indicator stays at or above the target.
    """
    if isinstance(k_or_profile, KProfile):
        k, cfg = k_or_profile.k, k_or_profile.cfg
    else:
        k = int(k_or_profile)
        if cfg is None:
            raise ValueError("cfg required when passing a bare k")
    if i < 0:
        raise ValueError("need i >= 0")
    if i == 0:
        return 0
    return greedy_min_indicator(_kappa_parts_ascending(k, cfg),
                                (cfg.q - 1) * i, cfg)


DEFAULT_SCAN_BOUND = 1 << 20


def mu_brute(k: int, i: int, cfg: Config, bound: int = DEFAULT_SCAN_BOUND) -> int:
    """Linear-scan oracle for mu: first admissible multiple of q-1."""
    prof = profile(k, cfg, i_max=0)
    q1 = cfg.q - 1
    n = 0
    while n <= bound:
        if is_admissible(n, i, prof):
            return n
        n += q1
    raise ScanBoundError(f"mu_{i}({k}) exceeds scan bound {bound}")


# ---------------------------------------------------------------------------
# the profile

@dataclass(frozen=True)
class KProfile:
    """Everything the spectrum of the k-th Goss polynomial depends on."""

    k: int
    cfg: Config
    alpha: int
    kappa: DigitSeq
    R: int
    mu: tuple[int, ...]
    regular_up_to: int
    is_regular: bool
    M: int
    H: int
    s_bar: int
    R_under: int
    R_over: int
    case: int
    jbar: int
    gamma0: int
    gamma_k: int


@dataclass(frozen=True)
class CaseData:
    case: int
    M: int
    H: int
    R: int
    s_bar: int
    R_under: int
    R_over: int


def _smooth_digit_pair(a: int, b: int, cfg: Config) -> bool:
    tab = cfg.qdigit_pdigits
    return all(x + y < cfg.p for x, y in zip(tab[a], tab[b]))


def jbar_gamma0(k: int, cfg: Config) -> tuple[int, int]:
    """Largest j with a nonvanishing binomial in the prime-field closed form.

    The constant-depth zero count gamma_0 equals jbar (q-1).  By Lucas,
    binom(k-1-j(q-1), j) is nonzero mod p exactly when k-1 = qj + b with
    the p-digits of j and b adding carry-free; jbar is found by a digit DP
    over the base-q digits of k-1 with the base-q carry and the pending
    j-digit as state.
    """
    q = cfg.q
    kd = qdigits(k - 1, cfg)
    npos = len(kd) + 2
    # state (carry into position t, j-digit chosen at t-1) -> max partial j
    states: dict[tuple[int, int], int] = {(0, 0): 0}
    qpow = 1
    for t in range(npos):
        c_t = kd[t] if t < len(kd) else 0
        nxt: dict[tuple[int, int], int] = {}
        for (carry, j_prev), val in states.items():
            for j_t in range(q):
                b_t = (c_t - j_prev - carry) % q
                carry_out = (j_prev + b_t + carry - c_t) // q
                if not _smooth_digit_pair(j_t, b_t, cfg):
                    continue
                key = (carry_out, j_t)
                v = val + j_t * qpow
                if nxt.get(key, -1) < v:
                    nxt[key] = v
        states = nxt
        qpow *= q
    jbar = max((v for (carry, j_last), v in states.items()
                if carry == 0 and j_last == 0), default=None)
    if jbar is None:
        raise ConsistencyError(f"no carry-free split of {k - 1} found")
    return jbar, jbar * (q - 1)


def _gamma_closed_form(case: int, R: int, R_under: int, R_over: int,
                       alpha: int, H: int, cfg: Config) -> int:
    q = cfg.q
    if case == 1:
        return (R + 1) * q ** (alpha - H + 1)
    return (R_over + q * (R_under + 1)) * q ** (alpha - H)


def profile(k: int, cfg: Config, i_max: int | None = None) -> KProfile:
    """Build the full profile of k (mu list up to H + 3 by default)."""
    if k < 1:
        raise ValueError("k must be positive")
    q, q1 = cfg.q, cfg.q - 1
    kd = qdigits(k - 1, cfg)
    alpha = max(len(kd) - 1, 0)
    kappa = kappa_digits(k, alpha + 1, cfg)
    R = sum(kd) % q1
    M = from_qdigits([kappa.digit(j) for j in range(alpha + 1)], cfg) + R * q ** (alpha + 1)
    ind = indicator(M, cfg)
    H = ind.value // q1
    s_bar = ind.critical[0]
    R_under = R % cfg.p ** s_bar
    R_over = R - R_under
    case = 1 if (s_bar == 0 or R_under == cfg.p ** s_bar - 1 or R_over == 0) else 2
    if i_max is None:
        i_max = H + 3
    i_max = max(i_max, 0)
    mus = tuple(mu(k, i, cfg) for i in range(i_max + 1))
    reg_up = 1
    while reg_up + 1 <= i_max and rel_prec(mus[reg_up], mus[reg_up + 1], cfg):
        reg_up += 1
    need = H - 1 if case == 1 else H
    is_reg = reg_up >= need or need <= 1
    jb, g0 = jbar_gamma0(k, cfg)
    gamma_k = _gamma_closed_form(case, R, R_under, R_over, alpha, H, cfg)
    prof = KProfile(k=k, cfg=cfg, alpha=alpha, kappa=kappa, R=R, mu=mus,
                    regular_up_to=reg_up, is_regular=is_reg, M=M, H=H,
                    s_bar=s_bar, R_under=R_under, R_over=R_over, case=case,
                    jbar=jb, gamma0=g0, gamma_k=gamma_k)
    if i_max >= (H + 1 if case == 1 else H + 2):
        _check_gamma_stabilized(prof)
    return prof


def case_classify(prof: KProfile, cfg: Config | None = None) -> CaseData:
    return CaseData(prof.case, prof.M, prof.H, prof.R, prof.s_bar,
                    prof.R_under, prof.R_over)


def regularity(prof: KProfile, cfg: Config | None = None) -> tuple[int, bool]:
    """(largest i with a mu-chain up to i, regular per the H-cutoff)."""
    return prof.regular_up_to, prof.is_regular


def _check_gamma_stabilized(prof: KProfile):
    q = prof.cfg.q
    start = prof.H if prof.case == 1 else prof.H + 1
    for i in (start, start + 1):
        if i >= len(prof.mu):
            return
        num = prof.k + prof.mu[i]
        if num % q ** i or num // q ** i != prof.gamma_k:
            raise ConsistencyError(
                f"(k + mu_{i})/q^{i} != gamma({prof.k}) = {prof.gamma_k}")


def gamma_vanishing(prof: KProfile, cfg: Config | None = None) -> int:
    """Vanishing order of the k-th Goss polynomial at 0 (exact)."""
    _check_gamma_stabilized(prof)
    return prof.gamma_k


def gamma_band(prof: KProfile, j: int, cfg: Config | None = None) -> int:
    """Total zero count of the band [j, j+1): ((q-1)k + q mu_j - mu_{j+1})/q^{j+1}."""
    cfg = cfg or prof.cfg
    if j + 1 >= len(prof.mu):
        raise ValueError(f"profile holds mu only up to {len(prof.mu) - 1}")
    q = cfg.q
    num = (q - 1) * prof.k + q * prof.mu[j] - prof.mu[j + 1]
    if num % q ** (j + 1):
        raise ConsistencyError(f"band count for j={j} not integral")
    return num // q ** (j + 1)


# ---------------------------------------------------------------------------
# M^{(i)} and its closed-form largest factor

def M_shifted(prof: KProfile, i: int) -> int:
    """M extended by i blocks of q-1 and the shifted remainder digit."""
    if i < 0:
        raise ValueError("need i >= 0")
    cfg = prof.cfg
    q, a = cfg.q, prof.alpha
    base = from_qdigits([prof.kappa.digit(j) for j in range(a + 1)], cfg)
    for j in range(1, i + 1):
        base += (q - 1) * q ** (a + j)
    return base + prof.R * q ** (a + i + 1)


def sheats_of_M_shifted(prof: KProfile, i: int, cfg: Config | None = None) -> int:
    """Closed-form largest Sheats factor of M^{(i)} (must match the greedy scan)."""
    cfg = cfg or prof.cfg
    q, a, R = cfg.q, prof.alpha, prof.R
    if prof.case == 1:
        if i < 1:
            raise ValueError("Case 1 closed form needs i >= 1")
        return (q - 1 - R) * q ** (a + i) + R * q ** (a + i + 1)
    if i < 2:
        raise ValueError("Case 2 closed form needs i >= 2")
    return ((q - prof.R_over) * q ** (a + i - 1)
            + (q - 1 - (prof.R_under + 1)) * q ** (a + i)
            + R * q ** (a + i + 1))


# ---------------------------------------------------------------------------
# irregular bands

@dataclass(frozen=True)
class IrregularBand:
    """Hull data of the band (i, i+1): candidate set bound, break thetas,
    fractional types rho, and per-rho zero counts (of the Goss polynomial)."""

    i: int
    Gamma: int
    thetas: tuple[int, ...]   # theta(0) > theta(1) > ... > theta(t) = mu_{i+1}
    rhos: tuple[Fraction, ...]
    counts: tuple[int, ...]

    @property
    def empty(self) -> bool:
        return not self.rhos


def _sub_digits_of(d: int, cfg: Config) -> list[int]:
    """All digit values e with e <=_p d, ascending."""
    tab = cfg.qdigit_pdigits
    out = [e for e in range(d + 1)
           if all(a <= b for a, b in zip(tab[e], tab[d]))]
    return out


def theta_set(prof: KProfile, i: int) -> list[int]:
    """All candidates for dominating subscripts in the band (i, i+1).

    Digits at positions 0..i are forced to kappa's (congruence to -k mod
    q^{i+1} plus digit domination); higher positions are searched digit by
    digit under the domination, value and congruence constraints, then the
    height condition is applied.
    """
    cfg = prof.cfg
    k, q, q1 = prof.k, cfg.q, cfg.q - 1
    gsum = sum(gamma_band(prof, j) for j in range(i))
    Gamma = (k - gsum) * q ** (i + 1) - k
    if Gamma <= 0:
        return []
    prefix = [prof.kappa.digit(j) for j in range(i + 1)]
    pref_val = from_qdigits(prefix, cfg)
    if pref_val > Gamma:
        return []
    jmax = len(qdigits(Gamma, cfg)) - 1
    positions = list(range(i + 1, jmax + 1))
    sub_cache: dict[int, list[int]] = {}
    for j in positions:
        d = prof.kappa.digit(j)
        if d not in sub_cache:
            sub_cache[d] = _sub_digits_of(d, cfg)
    out: list[int] = []
    target = q1 * (i + 1)
    pref_sum = sum(prefix)
    if not positions:
        if pref_val and pref_val % q1 == 0 and \
                _indicator_digits(prefix, cfg)[0] >= target:
            out.append(pref_val)
        return out
    # residue buckets for the lowest position, enumerated last
    low = positions[0]
    low_digits = sub_cache[prof.kappa.digit(low)]
    buckets: dict[int, list[int]] = {}
    for d in low_digits:
        buckets.setdefault(d % q1, []).append(d)
    rest = positions[1:][::-1]  # highest first, for value pruning
    digs_template = prefix + [0] * len(positions)

    def rec(idx: int, value: int, digsum: int):
        if idx == len(rest):
            want = (-digsum) % q1
            for d in buckets.get(want, ()):
                v = value + d * q ** low
                if v > Gamma:
                    continue
                digs = list(digs_template)
                digs[low] = d
                if _indicator_digits(digs, cfg)[0] >= target:
                    out.append(v)
            return
        j = rest[idx]
        pw = q ** j
        for d in sub_cache[prof.kappa.digit(j)]:
            v = value + d * pw
            if v > Gamma:
                break
            digs_template[j] = d
            rec(idx + 1, v, digsum + d)
        digs_template[j] = 0

    rec(0, pref_val, pref_sum)
    out.sort()
    return out


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Lower convex hull, input sorted by x; collinear points absorbed."""
    hull: list[tuple[int, int]] = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep strict right turns only
            if (x2 - x1) * (pt[1] - y1) <= (pt[0] - x1) * (y2 - y1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def irregular_band(prof: KProfile, i: int, cfg: Config | None = None) -> IrregularBand:
    """Fractional zero types in (i, i+1) with their counts.

    Empty exactly when mu_i is dominated by mu_{i+1}; otherwise the break
    points of the lower hull of (theta, reduced coweight) give the types
    through slope = i - rho and the counts through theta differences.
    """
    cfg = cfg or prof.cfg
    if i + 1 >= len(prof.mu):
        raise ValueError(f"profile holds mu only up to {len(prof.mu) - 1}")
    mu_i, mu_i1 = prof.mu[i], prof.mu[i + 1]
    if rel_prec(mu_i, mu_i1, cfg):
        return IrregularBand(i, 0, (), (), ())
    thetas_all = theta_set(prof, i)
    if mu_i1 not in thetas_all:
        raise ConsistencyError(f"mu_{i + 1} missing from Theta({prof.k},{i})")
    pts = [(t, reduced_coweight(t, i + 1, cfg)) for t in thetas_all]
    ct_min = min(ct for _, ct in pts)
    theta0 = min(t for t, ct in pts if ct == ct_min)
    pts = [p for p in pts if p[0] <= theta0]
    hull = _lower_hull(pts)  # left-to-right; hull[0] is (mu_{i+1}, ct)
    if hull[0][0] != mu_i1:
        raise ConsistencyError("hull does not start at mu_{i+1}")
    thetas = tuple(t for t, _ in reversed(hull))
    q_pow = cfg.q ** (i + 1)
    rhos, counts = [], []
    for s in range(1, len(thetas)):
        t_prev, t_cur = thetas[s - 1], thetas[s]
        ct_prev = hull[len(thetas) - s][1]
        ct_cur = hull[len(thetas) - 1 - s][1]
        slope = Fraction(ct_prev - ct_cur, t_prev - t_cur)
        rho = i - slope
        if not (i < rho < i + 1):
            raise ConsistencyError(f"hull slope {slope} leaves ({i},{i + 1})")
        diff = t_prev - t_cur
        if diff % q_pow:
            raise ConsistencyError("theta difference not divisible by q^(i+1)")
        rhos.append(rho)
        counts.append(diff // q_pow)
    if not rhos:
        raise ConsistencyError(
            "band flagged irregular but the hull has a single vertex")
    gsum = sum(gamma_band(prof, j) for j in range(i))
    Gamma = (prof.k - gsum) * cfg.q ** (i + 1) - prof.k
    return IrregularBand(i, Gamma, thetas, tuple(rhos), tuple(counts))


# ---------------------------------------------------------------------------
# the L map and spectrum prediction

def L_map(t, ws: WeightSystem, cfg: Config) -> Fraction:
    """Strictly decreasing bijection from zero types to log radii of Goss zeros.

    On integers: L(i) = (q-1) sum_{j<i} r_j q^j - r_i q^i.  Between integers
    the critical radius interpolates linearly in the exponent, which forces
    L(i+a) = (q-1) sum_{j<=i} r_j q^j - (r_i (1-a) + r_{i+1} a) q^{i+1}.
    """
    t = Fraction(t)
    if t < 0:
        raise ValueError("types are non-negative")
    q = cfg.q
    i = int(t)
    if t == i:
        s = sum(ws.r(j) * q ** j for j in range(i))
        return (q - 1) * s - ws.r(i) * q ** i
    a = t - i
    s = sum(ws.r(j) * q ** j for j in range(i + 1))
    interp = ws.r(i) * (1 - a) + ws.r(i + 1) * a
    return (q - 1) * s - interp * q ** (i + 1)


@dataclass(frozen=True)
class SpectrumEntry:
    band: int
    type: Fraction          # integer i or fractional rho in (i, i+1)
    log_z: Fraction         # log radius of the zeros upstairs
    log_x: Fraction         # L(type): log radius of the Goss-polynomial zeros
    count_gk: int
    count_ck: int


@dataclass(frozen=True)
class ZeroSpectrum:
    k: int
    weight_system: WeightSystem
    entries: tuple[SpectrumEntry, ...]
    newton_breaks: tuple[tuple[int, Fraction], ...]
    gamma_list: tuple[int, ...]
    gamma_vanishing: int
    irregular: tuple[IrregularBand, ...]


def band_cutoff(prof: KProfile) -> int:
    """Largest band index that can carry zeros (H-1 in Case 1, H in Case 2)."""
    return prof.H - 1 if prof.case == 1 else prof.H


def predict_spectrum(prof: KProfile, ws: WeightSystem | None = None,
                     cfg: Config | None = None) -> ZeroSpectrum:
    """Radii, multiplicities and Newton break points of the k-th Goss polynomial.

    For the natural weight system irregular bands are included; any other
    weight system requires a regular k (the fractional-band machinery is
    specific to the lattice F_q[T]).
    """
    cfg = cfg or prof.cfg
    cutoff = band_cutoff(prof)
    natural = ws is None or ws.is_natural()
    if ws is None:
        ws = WeightSystem.natural(max(cutoff + 2, 2))
    if not natural and not prof.is_regular:
        raise ScopeError(
            f"k = {prof.k} is irregular: non-integer types are only "
            "predicted for the natural weight system")
    k, q = prof.k, cfg.q
    entries: list[SpectrumEntry] = []
    gamma_list: list[int] = []
    irregulars: list[IrregularBand] = []
    gsum = 0
    for i in range(cutoff + 1):
        gi_band = gamma_band(prof, i)
        band = irregular_band(prof, i) if natural else IrregularBand(i, 0, (), (), ())
        q_pow = q ** (i + 1)
        if band.empty:
            gamma_i = gi_band
        else:
            theta0 = band.thetas[0]
            num = k + theta0
            if num % q_pow:
                raise ConsistencyError("theta(0) congruence failed")
            gamma_i = k - gsum - num // q_pow
            if gamma_i + sum(band.counts) != gi_band:
                raise ConsistencyError(f"band {i} does not add up")
            irregulars.append(band)
        gamma_list.append(gamma_i)
        entries.append(SpectrumEntry(
            band=i, type=Fraction(i), log_z=ws.r(i),
            log_x=L_map(i, ws, cfg), count_gk=gamma_i, count_ck=gamma_i * q_pow))
        for rho, cnt in zip(band.rhos, band.counts):
            entries.append(SpectrumEntry(
                band=i, type=rho, log_z=rho, log_x=L_map(rho, ws, cfg),
                count_gk=cnt, count_ck=cnt * q_pow))
        gsum += gi_band
    gk = prof.gamma_k
    if k - gsum != gk:
        raise ConsistencyError(
            f"zero accounting: k - sum of bands = {k - gsum} != gamma = {gk}")
    # Newton breaks, anchored at (k, 0), accumulated right to left
    breaks: list[tuple[int, Fraction]] = [(k, Fraction(0))]
    x, y = k, Fraction(0)
    for e in sorted(entries, key=lambda e: e.type):
        if e.count_gk == 0:
            continue
        x -= e.count_gk
        y += e.count_gk * (-e.log_x)
        breaks.append((x, y))
    if breaks[-1][0] != gk:
        raise ConsistencyError("leftmost break is not the vanishing order")
    breaks.reverse()
    return ZeroSpectrum(k=k, weight_system=ws, entries=tuple(entries),
                        newton_breaks=tuple(breaks), gamma_list=tuple(gamma_list),
                        gamma_vanishing=gk, irregular=tuple(irregulars))
