"""Exact LLL, integer-relation detection (algdep) and its experiments.

LLL runs entirely in exact arithmetic (integer basis, Fraction Gram-Schmidt)
with delta = 0.99; the lattices here are tiny (dimension <= 14), so
reliability beats speed.  algdep embeds real and imaginary parts as two
scaled columns; a relation must annihilate both, and any returned polynomial
must be re-found identically at 20 extra digits or the answer is None.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .errors import PrecisionInsufficient, RankDeficient

DELTA = Fraction(99, 100)


def lll_reduce(basis, delta: Fraction = DELTA):
    """Exact LLL (Cohen Alg. 2.6.3 with rational GSO bookkeeping).

    Returns (reduced_rows, transform) with transform unimodular and
    transform . input = reduced.  Raises RankDeficient on dependent rows.
    """
    b = [[int(x) for x in row] for row in basis]
    n = len(b)
    m = len(b[0]) if n else 0
    if any(len(r) != m for r in b):
        raise ValueError("ragged basis")
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    star = [None] * n

    def gso_row(i):
        v = [Fraction(x) for x in b[i]]
        for j in range(i):
            num = sum(Fraction(b[i][t]) * star[j][t] for t in range(m))
            mu[i][j] = num / B[j]
            v = [v[t] - mu[i][j] * star[j][t] for t in range(m)]
        star[i] = v
        B[i] = sum(x * x for x in v)
        if B[i] == 0:
            raise RankDeficient(f"row {i} dependent on the previous ones")

    for i in range(n):
        gso_row(i)

    def size_reduce(k, j):
        if abs(mu[k][j]) > Fraction(1, 2):
            r = round(mu[k][j])
            b[k] = [b[k][t] - r * b[j][t] for t in range(m)]
            u[k] = [u[k][t] - r * u[j][t] for t in range(n)]
            mu[k][j] -= r
            for l in range(j):
                mu[k][l] -= r * mu[j][l]

    k = 1
    while k < n:
        size_reduce(k, k - 1)
        if B[k] < (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            b[k], b[k - 1] = b[k - 1], b[k]
            u[k], u[k - 1] = u[k - 1], u[k]
            mu_old = mu[k][k - 1]
            Bnew = B[k] + mu_old**2 * B[k - 1]
            mu[k][k - 1] = mu_old * B[k - 1] / Bnew
            B[k] = B[k - 1] * B[k] / Bnew
            B[k - 1] = Bnew
            for j in range(k - 1):
                mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
            for i in range(k + 1, n):
                t = mu[i][k]
                mu[i][k] = mu[i][k - 1] - mu_old * t
                mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]
            k = max(k - 1, 1)
        else:
            for j in range(k - 2, -1, -1):
                size_reduce(k, j)
            k += 1
    return b, u


def gram_det(rows) -> Fraction:
    """Determinant of the Gram matrix (exact); LLL must preserve it."""
    n = len(rows)
    g = [[Fraction(sum(a * b for a, b in zip(rows[i], rows[j]))) for j in range(n)]
         for i in range(n)]
    # fraction-free-ish Gaussian elimination
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if g[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            g[c], g[piv] = g[piv], g[c]
            det = -det
        det *= g[c][c]
        inv = Fraction(1) / g[c][c]
        for r in range(c + 1, n):
            f = g[r][c] * inv
            g[r] = [g[r][t] - f * g[c][t] for t in range(n)]
    return det


# -- algebraic dependence -------------------------------------------------------


def _poly_eval_abs(coeffs, x):
    acc = mp.mpc(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return abs(acc)


def _content(coeffs) -> int:
    g = 0
    for c in coeffs:
        g = math.gcd(g, abs(int(c)))
    return g or 1


def _algdep_once(x, d: int, height: float, digits: int):
    with mp.workdps(digits):
        xv = mp.mpc(x)
        p = digits - 12
        scale = mp.mpf(10) ** p
        pows = [mp.mpc(1)]
        for _ in range(d):
            pows.append(pows[-1] * xv)
        rows = []
        for i in range(d + 1):
            re = int(mp.nint(pows[i].real * scale))
            im = int(mp.nint(pows[i].imag * scale))
            rows.append([re, im] + [1 if j == i else 0 for j in range(d + 1)])
        reduced, _ = lll_reduce(rows)
        best = None
        for row in reduced:
            coeffs = row[2:]
            if all(c == 0 for c in coeffs):
                continue
            cont = _content(coeffs)
            coeffs = [c // cont for c in coeffs]
            while coeffs and coeffs[-1] == 0:
                coeffs = coeffs[:-1]
            # x | p and x != 0: strip the power of x (keeps the relation)
            while coeffs and coeffs[0] == 0 and abs(xv) > mp.mpf(10) ** (-p):
                coeffs = coeffs[1:]
            # sign convention: leading nonzero coefficient positive
            if coeffs[-1] < 0:
                coeffs = [-c for c in coeffs]
            if max(abs(c) for c in coeffs) > height:
                continue
            resid = _poly_eval_abs(coeffs, xv)
            if resid < mp.mpf(10) ** (-p // 2):
                # prefer the minimal degree, then the smallest height: makes the
                # two-precision identity check stable when the search degree
                # exceeds the true degree (non-minimal multiples also relate)
                key = (len(coeffs), max(abs(c) for c in coeffs), tuple(coeffs))
                if best is None or key < best[2]:
                    best = (coeffs, resid, key)
        return (best[0], best[1]) if best else None


def algdep(x, d: int, height: float = 1e20, digits: int | None = None):
    """Minimal-polynomial search: integer coefficients, deg <= d, height <= H.

    Returns (coeffs ascending, residual) or None.  A candidate must be
    re-found identically at digits+20 (two-precision stability) and its
    residual re-verified there.  The input value must therefore carry at
    least digits+25 true digits; a lower-precision x makes the stability
    check fail closed (None), never a wrong positive.
    """
    digits = digits or mp.mp.dps
    first = _algdep_once(x, d, height, digits)
    if first is None:
        return None
    second = _algdep_once(x, d, height, digits + 20)
    if second is None or second[0] != first[0]:
        return None
    coeffs = first[0]
    with mp.workdps(digits + 20):
        resid = _poly_eval_abs(coeffs, mp.mpc(x))
        if resid > mp.mpf(10) ** (-(digits - 12) // 2 + 5):
            return None
    return coeffs, resid


def poly_text(coeffs) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if i == 0:
            term = f"{c}"
        elif abs(c) == 1:
            term = mono if c > 0 else f"-{mono}"
        else:
            term = f"{c}*{mono}"
        parts.append(term)
    out = " + ".join(parts).replace("+ -", "- ")
    return out or "0"


# -- binary quadratic forms and the class polynomial experiment -----------------


def reduced_forms(disc: int, primitive_only: bool = True):
    """Reduced forms (a,b,c) of the given negative discriminant."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise ValueError("need a negative discriminant = 0, 1 mod 4")
    out = []
    amax = math.isqrt(-disc // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if primitive_only and math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            out.append((a, b, c))
    return sorted(out)


def class_number_weighted(disc: int) -> Fraction:
    """Primitive class count with weights 1/3 at disc -3 and 1/2 at disc -4."""
    forms = reduced_forms(disc)
    if disc == -3:
        return Fraction(len(forms), 3)
    if disc == -4:
        return Fraction(len(forms), 2)
    return Fraction(len(forms))


@dataclass
class ClassPolyResult:
    disc: int
    coeffs: list            # ascending, monic
    max_round_residual: float
    root_residuals: list    # |H(j(tau_Q))| per reduced form
    forms: list
    digits: int

    def poly_text(self) -> str:
        return poly_text(self.coeffs)


def hilbert_class_experiment(disc: int, digits: int = 80) -> ClassPolyResult:
    """Enumerate reduced forms, evaluate j at their roots, expand prod (x - j).

    Rounds to integers and reports the rounding residual and per-root values
    of the rounded polynomial; raises PrecisionInsufficient when rounding is
    worse than 1e-5.
    """
    from .classical import jfunction
    from .halfplane import HPoint, eval_qseries

    if not (-(10**4) <= disc < 0):
        raise ValueError("desk scale: |disc| <= 10^4")
    forms = reduced_forms(disc)
    with mp.workdps(digits + 20):
        needed = max(60, int(2.8 * digits))
        js = jfunction(needed)
        roots = []
        for (a, b, c) in forms:
            tau = HPoint.from_quadratic(a, b, c)
            val, _ = eval_qseries(js, tau, reduce_first=True)
            roots.append(val)
        poly = [mp.mpc(1)]
        for r in roots:
            nxt = [mp.mpc(0)] * (len(poly) + 1)
            for i, c in enumerate(poly):
                nxt[i + 1] += c
                nxt[i] -= c * r
            poly = nxt
        coeffs = []
        max_resid = mp.mpf(0)
        for c in poly:
            ci = mp.nint(c.real)
            max_resid = max(max_resid, abs(c - ci))
            coeffs.append(int(ci))
        if max_resid > mp.mpf("1e-5"):
            raise PrecisionInsufficient(
                f"rounding residual {mp.nstr(max_resid, 4)} at {digits} digits",
                recommended_digits=int(digits * 1.5) + 20)
        root_resid = [float(_poly_eval_abs(coeffs, r)) for r in roots]
    return ClassPolyResult(disc, coeffs, float(max_resid), root_resid, forms, digits)


# -- orbit transcendence reports -------------------------------------------------


@dataclass
class OrbitRow:
    m: int
    value: object
    poly: list | None
    residual: float | None
    digits_used: tuple


@dataclass
class OrbitReport:
    tau_text: str
    level: int
    degree_bound: int
    height_bound: float
    rows: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if not self.rows:
            return "EMPTY"
        if all(r.poly is not None for r in self.rows):
            return "ALGEBRAIC-EVIDENCE"
        return "TRANSCENDENTAL-EVIDENCE"

    def to_text(self) -> str:
        lines = [
            f"orbit transcendence report  tau = {self.tau_text}  level {self.level}",
            f"algdep bounds: degree <= {self.degree_bound}, height <= {self.height_bound:g}",
            f"{'m':>4}  {'value':<44}  {'recognized':<30} residual",
        ]
        for r in self.rows:
            val = mp.nstr(mp.mpc(r.value), 24)
            rec = poly_text(r.poly) if r.poly else "NONE"
            resid = f"{r.residual:.3e}" if r.residual is not None else "-"
            lines.append(f"{r.m:>4}  {val:<44}  {rec:<30} {resid}")
        lines.append(f"verdict: {self.verdict} (heuristic; search bounds above)")
        return "\n".join(lines)

    def csv_rows(self):
        yield ("m", "value_re", "value_im", "recognized", "residual")
        for r in self.rows:
            v = mp.mpc(r.value)
            yield (r.m, mp.nstr(v.real, 20), mp.nstr(v.imag, 20),
                   poly_text(r.poly) if r.poly else "NONE",
                   "" if r.residual is None else f"{r.residual:.6e}")


def orbit_transcendence_report(f_eval, tau, m_list, N: int = 1,
                               degree: int = 8, height: float = 1e20,
                               digit_pairs=(60, 100), tau_text: str = "") -> OrbitReport:
    """Evaluate f over T_m orbits and attempt algdep on each value.

    ``digit_pairs`` are the working precisions; a relation must be stable
    across both or it is reported as NONE (transcendence evidence, never a
    transcendence assertion).
    """
    from .halfplane import eval_divisor, hecke_orbit, Divisor

    report = OrbitReport(tau_text or repr(tau), N, degree, float(height))
    for m in m_list:
        w_hi = max(digit_pairs)
        with mp.workdps(w_hi + 10):
            orbit = hecke_orbit(m, tau, N)
            div = Divisor.of(*[(p, 1) for p in orbit], level=N)
            value = eval_divisor(f_eval, div)
        found = None
        for w in digit_pairs:
            found = algdep(value, degree, height, digits=w)
            if found is None:
                break
        if found is None:
            report.rows.append(OrbitRow(m, value, None, None, tuple(digit_pairs)))
        else:
            report.rows.append(OrbitRow(m, value, found[0], float(found[1]),
                                        tuple(digit_pairs)))
    return report
