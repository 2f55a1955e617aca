"""Classical generators: Eisenstein series, Delta, j, eta quotients, E_N, Faber basis.

All expansions here are exact (rational coefficients).  Prime-level objects
carry expansions at both cusps of Gamma_0(N); the cusp-0 expansion is pinned
to sigma_0 = S = [[0,-1],[1,0]], computed through the eta transformation law
eta(-1/w) = sqrt(-iw) eta(w), and stored on the width-N grid q^(1/N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import BadEtaIndex, Unsupported
from .qseries import QSeries, invert, power, theta_derivative


def sigma1(n) -> Fraction:
    """Divisor sum extended by zero off the positive integers."""
    f = Fraction(n)
    if f.denominator != 1 or f <= 0:
        return Fraction(0)
    return Fraction(_sigma(1, f.numerator))


def _sigma(k: int, n: int) -> int:
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**k
            e = n // d
            if e != d:
                total += e**k
        d += 1
    return total


@lru_cache(maxsize=None)
def eisenstein(k: int, order: int) -> QSeries:
    """Normalized E_2, E_4 or E_6 with constant term 1."""
    if k not in (2, 4, 6):
        raise Unsupported(f"eisenstein weight {k} not provided")
    mult = {2: -24, 4: 240, 6: -504}[k]
    terms = {0: Fraction(1)}
    for n in range(1, order + 1):
        terms[n] = Fraction(mult * _sigma(k - 1, n))
    return QSeries.from_terms(terms, order)


@lru_cache(maxsize=None)
def delta(order: int) -> QSeries:
    """Discriminant (E4^3 - E6^2)/1728 = q - 24q^2 + 252q^3 - ..."""
    e4 = eisenstein(4, order)
    e6 = eisenstein(6, order)
    return (power(e4, 3) - power(e6, 2)).scaled(Fraction(1, 1728))


@lru_cache(maxsize=None)
def eta_power(exponent: int, order: int) -> QSeries:
    """q^(exponent/24-free part stripped) is NOT taken here: full eta(z)^exponent.

    Requires 24 | exponent so the expansion lives on the integer grid;
    eta(z)^24 = Delta is the basic case.
    """
    if exponent % 24:
        raise Unsupported("eta power must be a multiple of 24 on the integer grid")
    p = pentagonal(order)
    s = power(p, exponent)
    lead = exponent // 24
    return _shift(s, lead)


@lru_cache(maxsize=None)
def pentagonal(order: int) -> QSeries:
    """Euler product prod (1-q^n) as a q-series via the pentagonal number theorem."""
    terms = {0: Fraction(1)}
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        if e1 > order and e2 > order:
            break
        s = Fraction(-1 if k % 2 else 1)
        if e1 <= order:
            terms[e1] = s
        if e2 <= order:
            terms[e2] = s
        k += 1
    return QSeries.from_terms(terms, order)


def _shift(s: QSeries, k: int) -> QSeries:
    """Multiply by q^(k/alpha)."""
    return QSeries(s.valuation + k, s.order + k, s.alpha, s.coeffs, s.domain, s.prec)


@lru_cache(maxsize=None)
def jfunction(order: int) -> QSeries:
    """Modular j = E4^3 / Delta = q^-1 + 744 + 196884 q + ..."""
    guard = order + 2
    e4 = eisenstein(4, guard)
    return (power(e4, 3) * invert(delta(guard))).truncated(order)


# -- level structure ---------------------------------------------------------

CUSP_INF = "inf"
CUSP_ZERO = "zero"


@dataclass(frozen=True)
class FormExpansion:
    """q-expansions of one modular object at every cusp of Gamma_0(N).

    For prime N the cusps are i-infinity (width 1) and 0 (width N); for N = 1
    only i-infinity.  Each stored series' alpha equals its cusp width.
    """

    weight: int
    level: int
    expansions: dict
    label: str = ""

    def __post_init__(self):
        if self.level == 1:
            expected = {CUSP_INF}
        elif _is_prime(self.level):
            expected = {CUSP_INF, CUSP_ZERO}
        else:
            raise Unsupported("only level 1 and prime levels carry cusp data")
        if set(self.expansions) != expected:
            raise ValueError(f"need expansions exactly at {sorted(expected)}")
        widths = {CUSP_INF: 1, CUSP_ZERO: self.level}
        for cusp, series in self.expansions.items():
            if series.alpha != widths[cusp]:
                raise ValueError(
                    f"cusp {cusp} series has alpha {series.alpha}, width is {widths[cusp]}")

    @property
    def cusps(self):
        return sorted(self.expansions)

    def at(self, cusp: str) -> QSeries:
        return self.expansions[cusp]

    def width(self, cusp: str) -> int:
        return 1 if cusp == CUSP_INF else self.level

    def map_series(self, f, label=None) -> "FormExpansion":
        return FormExpansion(self.weight, self.level,
                             {c: f(s) for c, s in self.expansions.items()},
                             label if label is not None else self.label)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def level1_form(series: QSeries, weight: int, label: str = "") -> FormExpansion:
    return FormExpansion(weight, 1, {CUSP_INF: series}, label)


@lru_cache(maxsize=None)
def eisenstein_EN(N: int, order: int) -> FormExpansion:
    """E_N(z) = E_2(z) - N E_2(Nz), the weight-2 Eisenstein series of prime level N.

    At i-infinity: (1-N) - 24 sum (sigma1(n) - N sigma1(n/N)) q^n.
    At the cusp 0 (via Fricke): E_N |_2 S = -(1/N) E_N(w/N), exact rationals.
    """
    if not _is_prime(N):
        raise Unsupported("E_N is provided for prime N only")
    terms = {0: Fraction(1 - N)}
    for n in range(1, order + 1):
        terms[n] = -24 * (sigma1(n) - N * sigma1(Fraction(n, N)))
    inf = QSeries.from_terms(terms, order)
    # cusp 0 on the q^(1/N) grid: exponents n are numerators over N
    zterms = {n: -Fraction(c, N) for n, c in terms.items()}
    zero = QSeries.from_terms(zterms, order * N, alpha=N)
    return FormExpansion(2, N, {CUSP_INF: inf, CUSP_ZERO: zero}, label=f"E_{N}")


def eta_quotient(r: dict, N: int, order: int, zero_order: int | None = None) -> FormExpansion:
    """prod_d eta(d z)^{r_d} as a FormExpansion at level N (N prime or 1).

    Preconditions: every index divides N; the total weight (1/2) sum r_d is an
    integer; the leading exponents at both cusps are integral on their width
    grids; prod d^{r_d} is a perfect square (so the cusp-0 scalar is rational).
    ``zero_order`` is the cusp-0 trust window in 1/N units (defaults to N*order).
    """
    for d in r:
        if d < 1 or N % d:
            raise BadEtaIndex(f"{d} does not divide the level {N}")
    rsum = sum(r.values())
    if rsum % 2:
        raise Unsupported("half-integral weight eta quotients are out of scope")
    weight = rsum // 2

    lead24 = sum(d * rd for d, rd in r.items())
    if lead24 % 24:
        raise Unsupported("leading exponent at i-infinity not integral")
    rel = order - lead24 // 24
    if rel < 0:
        raise Unsupported("order window below the leading exponent")
    inf = QSeries.one(rel)
    for d, rd in sorted(r.items()):
        # eta(dz) = q^(d/24) P(q^d) with P the Euler product
        p = pentagonal(max(rel // d + 1, 1))
        inf = inf * power(_stretch(p, d), rd)
    inf = _shift(inf, lead24 // 24).truncated(order)

    if N == 1:
        return FormExpansion(weight, 1, {CUSP_INF: inf},
                             label=_eta_label(r))

    # cusp 0: f|_k S = (-1)^(k/2) (prod d^{r_d})^(-1/2) prod_d eta(w/d)^{r_d}
    sq = 1
    for d, rd in r.items():
        sq *= Fraction(d) ** rd
    root = _fraction_sqrt(sq)
    if root is None:
        raise Unsupported("prod d^{r_d} is not a perfect square; cusp-0 scalar irrational")
    if weight % 2:
        raise Unsupported("odd weight eta quotients need the multiplier system")
    scalar = Fraction((-1) ** (weight // 2), 1) / root

    zorder = zero_order if zero_order is not None else N * order
    lead0_num = Fraction(N * sum(Fraction(rd, d) for d, rd in r.items()), 24)
    if lead0_num.denominator != 1:
        raise Unsupported("leading exponent at cusp 0 not integral on the width grid")
    zrel = zorder - int(lead0_num)
    if zrel < 0:
        raise Unsupported("cusp-0 order window below the leading exponent")
    zero = QSeries.one(zrel)
    for d, rd in sorted(r.items()):
        # eta(w/d) = q^(N/(24d)) * P(q^(N/d)) on the width-N grid
        step = N // d
        p = pentagonal(max(zrel // step + 1, 1))
        zero = zero * power(_stretch(p, step), rd)
    zero = QSeries(zero.valuation, zero.order, N, zero.coeffs, zero.domain, zero.prec)
    zero = _shift(zero, int(lead0_num)).truncated(zorder).scaled(scalar)
    return FormExpansion(weight, N, {CUSP_INF: inf, CUSP_ZERO: zero},
                         label=_eta_label(r))


def _stretch(s: QSeries, k: int) -> QSeries:
    """Substitute q -> q^k (exponents multiply by k, same alpha)."""
    if k == 1:
        return s
    zero = Fraction(0)
    coeffs = [zero] * ((s.order - s.valuation) * k + 1)
    for i, c in enumerate(s.coeffs):
        coeffs[i * k] = c
    return QSeries(s.valuation * k, s.order * k, s.alpha, tuple(coeffs),
                   s.domain, s.prec)


def _fraction_sqrt(x: Fraction):
    num = math.isqrt(x.numerator)
    den = math.isqrt(x.denominator)
    if num * num == x.numerator and den * den == x.denominator:
        return Fraction(num, den)
    return None


def _eta_label(r: dict) -> str:
    return "eta:" + ",".join(f"{d}^{rd}" for d, rd in sorted(r.items()))


# -- Faber basis --------------------------------------------------------------

@lru_cache(maxsize=None)
def faber(m: int, order: int) -> QSeries:
    """The unique level-1 weight-0 basis element j_m = q^-m + O(q).

    Computed by reducing j * j_{m-1} against the previously computed j_d;
    exact integer coefficients throughout.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if order < 1:
        raise Unsupported("order window too small for the O(q) normalization")
    if m == 0:
        return QSeries.one(order)
    j1 = jfunction(order + m - 1) - 744
    if m == 1:
        return j1.truncated(order)
    prev = faber(m - 1, order + 1)
    cur = j1 * prev
    # clear coefficients of q^(-d) for d < m, then the constant term
    for d in range(m - 1, 0, -1):
        cd = cur.c(-d)
        if cd:
            cur = cur - faber(d, cur.order).scaled(cd)
    cur = cur - cur.c(0)
    return cur.truncated(order)
