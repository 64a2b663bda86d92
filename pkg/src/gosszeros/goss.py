"""Goss polynomials over finite sub-lattices of F_q[T], exactly.

The ground-truth side of the package: build the lattice exponential of
Lambda' = F-span(T^{r_0}, ..., T^{r_t}) as an actual polynomial by the
tower recurrence, run the Goss recursion over exact rational functions,
extract the Newton polygon from coefficient valuations, and compare the
observed root radii and vanishing order against the predicted spectrum.

The recursion engine keeps every coefficient as a numerator polynomial
over the fixed denominator beta_0^m, so no gcd is ever needed in the hot
path: valuations are degree differences, and zero tests are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import Fq, FqPoly, RatFunc
from .digits import Config
from .sheats import WeightSystem
from .spectrum import (KProfile, ZeroSpectrum, band_cutoff, gamma_band,
                       predict_spectrum, profile)


class BudgetError(ValueError):
    """A size budget (lattice points, k) was exceeded."""


MAX_LATTICE_POINTS = 1024
MAX_K = 200


def field_for(cfg: Config, modulus=None) -> Fq:
    return Fq(cfg.p, cfg.f, modulus=modulus)


@dataclass(frozen=True)
class LatticeExp:
    """Exponential data of a finite separable lattice with monomial basis.

    ``betas[i]`` is the z^{q^i} coefficient of the product polynomial
    prod_{lambda} (z - lambda); ``alphas[i] = betas[i]/betas[0]`` are the
    coefficients of the normalized exponential (alpha_0 = 1).
    """

    field: Fq
    exponents: tuple[int, ...]        # basis T^{r_0}, ..., T^{r_t}
    betas: tuple[FqPoly, ...]
    alphas: tuple[RatFunc, ...]

    @property
    def dim(self) -> int:
        return len(self.exponents)

    def weight_system(self) -> WeightSystem:
        return WeightSystem(tuple(Fraction(r) for r in self.exponents))


def lattice_exp(t: int, cfg: Config, field: Fq | None = None,
                exponents=None, max_points: int = MAX_LATTICE_POINTS) -> LatticeExp:
    """Tower construction of the exponential of span(T^{r_0}, ..., T^{r_t}).

    Default basis exponents are 0..t.  Each step applies
    e_{i+1}(z) = e_i(z)^q - e_i(lambda_i)^{q-1} e_i(z), which multiplies the
    vanishing set by the next basis line.
    """
    if exponents is None:
        if t < 0:
            raise ValueError("need t >= 0")
        exponents = tuple(range(t + 1))
    else:
        exponents = tuple(int(r) for r in exponents)
        if exponents[0] != 0 or any(a >= b for a, b in zip(exponents, exponents[1:])):
            raise ValueError("basis exponents must be strictly increasing from 0")
    dim = len(exponents)
    q = cfg.q
    if q ** dim > max_points:
        raise BudgetError(f"lattice has q^{dim} = {q ** dim} > {max_points} points")
    if field is None:
        field = field_for(cfg)
    one = FqPoly.one(field)
    betas = [one]  # e_0(z) = z
    for r in exponents:
        # c = e_i(T^r)^(q-1)
        ev = FqPoly.zero(field)
        qpow = 1
        for b in betas:
            ev = ev + b.shift(r * qpow)
            qpow *= q
        c = ev ** (q - 1)
        new = [-(c * betas[0])]
        for m in range(1, len(betas) + 1):
            term = betas[m - 1] ** q
            if m < len(betas):
                term = term - c * betas[m]
            new.append(term)
        betas = new
    alphas = tuple(RatFunc(b, betas[0]) for b in betas)
    return LatticeExp(field=field, exponents=exponents,
                      betas=tuple(betas), alphas=alphas)


# ---------------------------------------------------------------------------
# the recursion engine

@dataclass(frozen=True)
class GossPoly:
    """A Goss polynomial with exact rational-function coefficients."""

    k: int
    lattice: LatticeExp
    coeffs: tuple[RatFunc, ...]   # index j = coefficient of X^j, length k+1

    def valuations(self) -> list[int | None]:
        return [c.val() for c in self.coeffs]

    def coeff(self, j: int) -> RatFunc:
        return self.coeffs[j]


class GossEngine:
    """Bottom-up Goss recursion over a fixed finite lattice.

    Row k holds the numerators of G_k against the denominator beta_0^{m_k};
    the recursion multiplies each predecessor row by one fixed polynomial,
    so a row costs about k polynomial products.  ``sweep`` evicts rows
    older than the deepest lag to keep memory flat.
    """

    def __init__(self, lattice: LatticeExp, cfg: Config):
        self.lattice = lattice
        self.cfg = cfg
        self.field = lattice.field
        q = cfg.q
        self.lags = [q ** i for i in range(len(lattice.betas))]  # 1, q, ..., q^dim
        self.beta0_deg = lattice.betas[0].degree
        self.m: list[int] = [0]
        self.rows: dict[int, list[FqPoly]] = {}
        self._beta0_pows: dict[int, FqPoly] = {0: FqPoly.one(self.field)}

    def _beta0_pow(self, e: int) -> FqPoly:
        if e not in self._beta0_pows:
            self._beta0_pows[e] = self._beta0_pow(e - 1) * self.lattice.betas[0]
        return self._beta0_pows[e]

    def _exponent(self, k: int) -> int:
        while len(self.m) <= k:
            kk = len(self.m)
            if kk <= self.cfg.q:
                self.m.append(0)
                continue
            e = self.m[kk - 1]
            for lag in self.lags[1:]:
                if kk - lag >= 1:
                    e = max(e, self.m[kk - lag] + 1)
            self.m.append(e)
        return self.m[k]

    def _row(self, k: int) -> list[FqPoly]:
        zero = FqPoly.zero(self.field)
        one = FqPoly.one(self.field)
        if k <= self.cfg.q:
            return [zero] * k + [one]
        mk = self._exponent(k)
        coeffs = [zero] * (k + 1)
        for i, lag in enumerate(self.lags):
            kk = k - lag
            if kk < 1:
                break
            pred = self.rows[kk]
            if i == 0:
                factor = self._beta0_pow(mk - self.m[kk])
            else:
                factor = self.lattice.betas[i] * self._beta0_pow(mk - self.m[kk] - 1)
            trivial = factor == one
            for j, c in enumerate(pred):
                if c.is_zero():
                    continue
                piece = c if trivial else factor * c
                coeffs[j + 1] = coeffs[j + 1] + piece
        return coeffs

    def sweep(self, kmax: int):
        """Yield (k, valuation list) for k = 1..kmax with bounded memory."""
        if kmax > MAX_K:
            raise BudgetError(f"k = {kmax} > budget {MAX_K}")
        self._exponent(kmax)
        window = self.lags[-1]
        for k in range(1, kmax + 1):
            row = self._row(k)
            self.rows[k] = row
            dead = k - window
            if dead >= 1:
                self.rows.pop(dead, None)
            yield k, self._vals(k, row)

    def _vals(self, k: int, row: list[FqPoly]) -> list[int | None]:
        base = self.m[k] * self.beta0_deg
        return [None if c.is_zero() else c.degree - base for c in row]

    def valuations(self, k: int) -> list[int | None]:
        for kk, vals in self.sweep(k):
            if kk == k:
                return vals
        raise AssertionError("unreachable")

    def goss_poly(self, k: int) -> GossPoly:
        """G_k with reduced rational-function coefficients (small k)."""
        if k > MAX_K:
            raise BudgetError(f"k = {k} > budget {MAX_K}")
        row = None
        for kk, _ in self.sweep(k):
            if kk == k:
                row = self.rows[k]
        den = self._beta0_pow(self.m[k])
        coeffs = tuple(RatFunc(c, den) for c in row)
        return GossPoly(k=k, lattice=self.lattice, coeffs=coeffs)


def goss_recursion(k: int, lattice: LatticeExp, cfg: Config) -> GossPoly:
    """Convenience wrapper: one Goss polynomial from scratch."""
    return GossEngine(lattice, cfg).goss_poly(k)


# ---------------------------------------------------------------------------
# the closed prime-field form

def binom_mod_p(a: int, b: int, p: int) -> int:
    """binom(a, b) mod p by the digit product."""
    if b < 0 or b > a:
        return 0
    out = 1
    while b:
        ad, bd = a % p, b % p
        if bd > ad:
            return 0
        num = den = 1
        for i in range(bd):
            num = num * (ad - i) % p
            den = den * (i + 1) % p
        out = out * num * pow(den, p - 2, p) % p
        a //= p
        b //= p
    return out


def goss_closed_F(k: int, cfg: Config, field: Fq | None = None) -> list[int]:
    """Coefficients (index = X-power) of the k-th Goss polynomial of the
    one-dimensional lattice F: an alternating binomial sum with support on
    k - j(q-1)."""
    if k < 1:
        raise ValueError("k must be positive")
    if field is None:
        field = field_for(cfg)
    p, q1 = cfg.p, cfg.q - 1
    coeffs = [0] * (k + 1)
    j = 0
    while k - j * q1 >= 1:
        b = binom_mod_p(k - 1 - j * q1, j, p)
        if b:
            if j % 2:
                b = (p - b) % p
            coeffs[k - j * q1] = b
        j += 1
    return coeffs


# ---------------------------------------------------------------------------
# Newton polygons

@dataclass(frozen=True)
class NewtonData:
    """Lower hull of (exponent, -log |coefficient|).

    A segment of slope s and horizontal run m certifies exactly m roots x
    with log |x| = s; the leftmost abscissa is the vanishing order at 0.
    """

    degree: int
    vanishing_order: int
    breaks: tuple[tuple[int, int], ...]
    segments: tuple[tuple[Fraction, int], ...]   # (log radius, multiplicity)


def newton_extract(g) -> NewtonData:
    """Newton data from a GossPoly or a valuation list (index = exponent)."""
    vals = g.valuations() if isinstance(g, GossPoly) else list(g)
    pts = [(j, -v) for j, v in enumerate(vals) if v is not None]
    if not pts:
        raise ValueError("zero polynomial has no Newton polygon")
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) <= (pt[0] - x1) * (y2 - y1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = tuple(
        (Fraction(hull[i + 1][1] - hull[i][1], hull[i + 1][0] - hull[i][0]),
         hull[i + 1][0] - hull[i][0])
        for i in range(len(hull) - 1))
    return NewtonData(degree=pts[-1][0], vanishing_order=pts[0][0],
                      breaks=tuple(hull), segments=segments)


# ---------------------------------------------------------------------------
# prediction vs oracle

@dataclass(frozen=True)
class VerifyReport:
    k: int
    t: int
    passed: bool
    expected_segments: tuple[tuple[Fraction, int], ...]
    observed_segments: tuple[tuple[Fraction, int], ...]
    expected_vanishing: int
    observed_vanishing: int
    gamma_A: int
    mismatch: str | None


def expected_root_data(prof: KProfile, t: int,
                       spectrum: ZeroSpectrum | None = None):
    """Root log-radii with multiplicities of G_{k, A_{t+1}}, from predictions.

    Zeros upstairs of type below t+1 agree with the infinite lattice; the
    vanishing order absorbs everything above.
    """
    spec = spectrum if spectrum is not None else predict_spectrum(prof)
    cutoff = band_cutoff(prof)
    segs = []
    vanish = prof.k
    for e in spec.entries:
        if e.band <= t and e.count_gk:
            segs.append((e.log_x, e.count_gk))
            vanish -= e.count_gk
    segs.sort()
    return tuple(segs), vanish


def verify(k: int, t: int, cfg: Config, engine: GossEngine | None = None,
           prof: KProfile | None = None) -> VerifyReport:
    """Compare the actual Newton polygon of G_{k, A_{t+1}} with predictions.

    Checks every root band below type t+1 (radii and multiplicities, exact)
    and the vanishing order k - sum of the covered band counts.
    """
    if engine is None:
        engine = GossEngine(lattice_exp(t, cfg), cfg)
    if prof is None:
        prof = profile(k, cfg)
    spec = predict_spectrum(prof)
    expected, vanish_exp = expected_root_data(prof, t, spec)
    nd = newton_extract(engine.valuations(k))
    observed = tuple(sorted(nd.segments))
    mismatch = None
    if nd.vanishing_order != vanish_exp:
        mismatch = (f"vanishing order: observed {nd.vanishing_order}, "
                    f"expected {vanish_exp}")
    elif observed != expected:
        for (ls, ms), (le, me) in zip(observed, expected):
            if (ls, ms) != (le, me):
                mismatch = (f"band at log radius {le}: observed "
                            f"({ls}, x{ms}), expected ({le}, x{me})")
                break
        else:
            mismatch = f"segment count: {len(observed)} vs {len(expected)}"
    gamma_A = prof.gamma_k
    if mismatch is None and nd.vanishing_order < gamma_A:
        mismatch = (f"vanishing order {nd.vanishing_order} below the "
                    f"infinite-lattice bound {gamma_A}")
    return VerifyReport(k=k, t=t, passed=mismatch is None,
                        expected_segments=expected, observed_segments=observed,
                        expected_vanishing=vanish_exp,
                        observed_vanishing=nd.vanishing_order,
                        gamma_A=gamma_A, mismatch=mismatch)


def verify_range(kmax: int, t: int, cfg: Config, skip_p_multiples: bool = True):
    """Yield VerifyReports for k = 1..kmax sharing one recursion sweep."""
    engine = GossEngine(lattice_exp(t, cfg), cfg)
    for k, vals in engine.sweep(kmax):
        if skip_p_multiples and k % cfg.p == 0:
            continue
        prof = profile(k, cfg)
        spec = predict_spectrum(prof)
        expected, vanish_exp = expected_root_data(prof, t, spec)
        nd = newton_extract(vals)
        observed = tuple(sorted(nd.segments))
        mismatch = None
        if nd.vanishing_order != vanish_exp:
            mismatch = (f"vanishing order: observed {nd.vanishing_order}, "
                        f"expected {vanish_exp}")
        elif observed != expected:
            mismatch = f"segments {observed} != {expected}"
        elif nd.vanishing_order < prof.gamma_k:
            mismatch = "vanishing order below infinite-lattice bound"
        yield VerifyReport(k=k, t=t, passed=mismatch is None,
                           expected_segments=expected,
                           observed_segments=observed,
                           expected_vanishing=vanish_exp,
                           observed_vanishing=nd.vanishing_order,
                           gamma_A=prof.gamma_k, mismatch=mismatch)
