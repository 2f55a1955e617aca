"""Slash-family operators on q-expansions and a numerical xi operator.

Two Hecke normalizations coexist and are never implicit:

* ``normalized``  : b(n) = sum_{d | (m,n)} d^(k-1) a(mn/d^2), the classical
  action whose eigenvalues are the lambda_m of the eigen layer;
* ``divisor-sum`` : f|T_m = sum_{ad=m, 0<=b<d} f((az+b)/d) with no prefactor,
  matching the Hecke-orbit point multiset; at weight 0 its coefficient action
  is b(n) = sum_{e | (m,n)} (m/e) a(nm/e^2), i.e. m times the normalized one.

The cross-convention scalar m^(1-k)... at weight 0 is exactly m and is pinned
by a test rather than folded in silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .classical import CUSP_INF, CUSP_ZERO, FormExpansion
from .errors import NotCoprime, StepTooSmall, Unsupported
from .qseries import EXACT, QSeries

NORMALIZED = "normalized"
DIVISOR_SUM = "divisor-sum"


@dataclass(frozen=True)
class OperatorSpec:
    kind: str                      # T, U, V or sieve
    index: int
    weight: int = 0
    level: int = 1
    convention: str = NORMALIZED

    def __post_init__(self):
        if self.kind not in ("T", "U", "V", "sieve"):
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.index < 1:
            raise ValueError("operator index must be positive")
        if self.kind == "T" and math.gcd(self.index, self.level) != 1:
            raise NotCoprime(f"T_{self.index} at level {self.level}")
        if self.convention not in (NORMALIZED, DIVISOR_SUM):
            raise ValueError(f"unknown convention {self.convention!r}")


def _divisors(n: int):
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def hecke_T(F: QSeries, m: int, k: int, N: int = 1,
            convention: str = NORMALIZED) -> QSeries:
    """Hecke operator on an integer-grid expansion; the window shrinks to floor(M/m)."""
    if math.gcd(m, N) != 1:
        raise NotCoprime(f"gcd({m},{N}) != 1")
    if F.alpha != 1:
        raise Unsupported("hecke_T expects an integer-exponent expansion")
    if convention not in (NORMALIZED, DIVISOR_SUM):
        raise ValueError(f"unknown convention {convention!r}")
    if m == 1:
        return F
    # the d = m summand reaches a(n m / m^2), so poles deepen to v*m
    v_out = F.valuation * m if F.valuation < 0 else -((-F.valuation) // m)
    m_out = F.order // m                    # floor(M/m)
    out = []
    for n in range(v_out, m_out + 1):
        acc = Fraction(0) if F.domain == EXACT else mp.mpc(0)
        for d in _divisors(math.gcd(abs(n), m)):
            num = n * m
            if num % (d * d):
                continue
            c = F.c(num // (d * d))
            if c == 0:
                continue
            if convention == NORMALIZED:
                w = Fraction(d) ** (k - 1) if F.domain == EXACT else mp.mpf(d) ** (k - 1)
            else:
                if k != 0:
                    raise Unsupported("divisor-sum convention is pinned to weight 0")
                w = Fraction(m, d) if F.domain == EXACT else mp.mpf(m) / d
            acc += w * c
        out.append(acc)
    return QSeries(v_out, m_out, 1, tuple(out), F.domain, F.prec).normalized()


def hecke_T_form(F: FormExpansion, m: int, convention: str = NORMALIZED) -> FormExpansion:
    """Hecke action on both cusp expansions of a prime-level form.

    The cusp-0 series transforms through the Fricke conjugation: with
    h(z) = N^{k/2} (f|S)(Nz) one has (f|T_m)|S (w) = N^{-k/2} (h|T_m)(w/N),
    valid for m coprime to N.
    """
    N, k = F.level, F.weight
    if math.gcd(m, N) != 1:
        raise NotCoprime(f"gcd({m},{N}) != 1")
    inf = hecke_T(F.at(CUSP_INF), m, k, N, convention)
    if N == 1:
        return FormExpansion(k, 1, {CUSP_INF: inf}, label=f"{F.label}|T{m}")
    z = F.at(CUSP_ZERO)
    scale = Fraction(N) ** (k // 2) if k % 2 == 0 else None
    if scale is None:
        raise Unsupported("odd weight Fricke scaling not supported")
    h = QSeries(z.valuation, z.order, 1, z.coeffs, z.domain, z.prec).scaled(scale)
    ht = hecke_T(h, m, k, N, convention)
    back = QSeries(ht.valuation, ht.order, N, ht.coeffs, ht.domain, ht.prec)
    back = back.scaled(Fraction(1, 1) / scale)
    return FormExpansion(k, N, {CUSP_INF: inf, CUSP_ZERO: back},
                         label=f"{F.label}|T{m}")


def hecke_U(F: QSeries, m: int) -> QSeries:
    """(F|U_m)(z) = sum a_F(mn) q^n."""
    if F.alpha != 1:
        raise Unsupported("U_m expects an integer-exponent expansion")
    if m == 1:
        return F
    v_out = -((-F.valuation) // m)
    m_out = F.order // m
    coeffs = tuple(F.c(n * m) for n in range(v_out, m_out + 1))
    return QSeries(v_out, m_out, 1, coeffs, F.domain, F.prec)


def hecke_V(F: QSeries, m: int) -> QSeries:
    """(F|V_m)(z) = sum a_F(n) q^{mn}."""
    if F.alpha != 1:
        raise Unsupported("V_m expects an integer-exponent expansion")
    if m == 1:
        return F
    zero = Fraction(0) if F.domain == EXACT else mp.mpc(0)
    coeffs = [zero] * ((F.order - F.valuation) * m + 1)
    for i, c in enumerate(F.coeffs):
        coeffs[i * m] = c
    return QSeries(F.valuation * m, F.order * m, 1, tuple(coeffs), F.domain, F.prec)


def sieve_prime(F: QSeries, p: int) -> QSeries:
    """F - F|U_p|V_p: kills every coefficient at an exponent divisible by p."""
    uv = hecke_V(hecke_U(F, p), p)
    return F.truncated(uv.order) - uv


def prin(principal) -> int:
    """Prin(f) = prod over n > 1 with a_f(-n) != 0; empty product is 1.

    Accepts a QSeries (its q^(<0) part is read off) or a {n: a(-n)} mapping.
    """
    if isinstance(principal, QSeries):
        if principal.alpha != 1:
            raise Unsupported("Prin is defined on integer-grid expansions")
        idx = {-n: principal.c(n) for n in range(principal.valuation, 0)}
    else:
        idx = dict(principal)
    out = 1
    for n, c in idx.items():
        if n > 1 and c != 0:
            out *= n
    return out


def xi_numeric(f, k: int, z, h=None):
    """xi_k(f)(z) = 2i y^k conj(d f / d zbar) by central differences.

    ``k`` is the weight of f itself (the paper's xi_{-k} acting on weight -k
    inputs).  Uses steps h and h/2 with Richardson extrapolation; returns
    (value, error_estimate).  Error estimate is the h^2-model disagreement of
    the two stencils, an honest noise floor for holomorphic inputs.
    """
    zc = mp.mpc(z)
    y = zc.imag
    if y <= 0:
        raise ValueError("point must lie in the upper half plane")
    if h is None:
        h = mp.mpf("1e-4") * y
    h = mp.mpf(h)
    if not (mp.mpf("1e-8") * y < h < mp.mpf("1e-2") * y):
        raise StepTooSmall(f"step {h} outside (1e-8, 1e-2)*y")

    def dzbar(step):
        fx = (f(zc + step) - f(zc - step)) / (2 * step)
        fy = (f(zc + 1j * step) - f(zc - 1j * step)) / (2 * step)
        return (fx + 1j * fy) / 2

    v1 = 2j * y**k * mp.conj(dzbar(h))
    v2 = 2j * y**k * mp.conj(dzbar(h / 2))
    value = (4 * v2 - v1) / 3
    err = abs(v2 - v1) / 3 + mp.mpf(10) ** (-mp.mp.dps + 3) * (1 + abs(value))
    return value, err
