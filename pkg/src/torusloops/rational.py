"""Continued fractions, convergents, and closed-form cycle-count predictions.

The aspect ratio m/n controls the orbit structure. Near a rational p/q the
deviation is measured on two scales: rho = (m - (p/q)n)/sqrt(n) for the
primary spike and C = (m - (p/q)n)/sqrt(n ln n) for the valley and the
secondary spike. Away from small-denominator rationals the relevant class
is the continued-fraction convergent of m/n at denominator scale n^(1/3).
Natural log throughout.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .torus import HomologyClass


class ExtrapolationWarning(UserWarning):
    """Formula evaluated outside the regime where it is the leading behavior."""


@dataclass(frozen=True)
class ContinuedFraction:
    """Euclidean expansion a0 + 1/(a1 + 1/(...)); a0 >= 0, a_j >= 1 for j >= 1."""

    coefficients: tuple[int, ...]

    def value(self) -> Fraction:
        acc = Fraction(self.coefficients[-1])
        for a in reversed(self.coefficients[:-1]):
            acc = a + 1 / acc
        return acc


@dataclass(frozen=True)
class ConvergentTable:
    """Convergents p_j/q_j from the standard recurrence with seeds
    (p_-1, q_-1) = (1, 0) and (p_-2, q_-2) = (0, 1)."""

    entries: tuple[tuple[int, int], ...]
    j0: int | None = None


@dataclass(frozen=True)
class J0Selection:
    index: int
    saturated: bool  # even the final convergent has q <= n^(1/3)


class Regime(Enum):
    PRIMARY_SPIKE = "primary_spike"
    VALLEY = "valley"
    SECONDARY_SPIKE = "secondary_spike"
    IRRATIONAL = "irrational"


@dataclass(frozen=True)
class RegimePrediction:
    regime: Regime
    base_class: HomologyClass | None
    deviation_rho: float | None
    deviation_c: float | None
    predicted_class: HomologyClass | None
    predicted_count: float | None
    predicted_length: float


def continued_fraction(m: int, n: int) -> ContinuedFraction:
    """Plain Euclidean expansion of m/n (strictly decreasing remainders)."""
    if m < 1 or n < 1:
        raise ValueError(f"need positive integers, got ({m}, {n})")
    coeffs = []
    a, b = m, n
    while b:
        coeffs.append(a // b)
        a, b = b, a % b
    return ContinuedFraction(tuple(coeffs))


def convergents(cf: ContinuedFraction) -> ConvergentTable:
    p_prev2, q_prev2 = 0, 1
    p_prev1, q_prev1 = 1, 0
    entries = []
    for a in cf.coefficients:
        p = a * p_prev1 + p_prev2
        q = a * q_prev1 + q_prev2
        entries.append((p, q))
        p_prev2, q_prev2 = p_prev1, q_prev1
        p_prev1, q_prev1 = p, q
    return ConvergentTable(tuple(entries))


def select_j0(n: int, table: ConvergentTable) -> J0Selection:
    """Largest index j with q_j <= n^(1/3), cube root compared in exact
    integer arithmetic. Saturated when even the last convergent qualifies."""
    if not table.entries:
        raise ValueError("empty convergent table")
    j0 = 0
    for j, (_, q) in enumerate(table.entries):
        if q**3 <= n:
            j0 = j
    return J0Selection(j0, saturated=table.entries[-1][1] ** 3 <= n)


def irrational_length_floor(n: int, cf: ContinuedFraction, table: ConvergentTable) -> Fraction:
    """Lower bound n*q_(j0+1)/(a_(j0+1)+1) on the convergent-class cycle length.

    The recurrence gives q_(j0+1) <= (a_(j0+1)+1) * q_j0, so the bound divides
    by a_(j0+1)+1; dividing by a_j0+1 instead is not a valid bound when the
    next coefficient is large.
    """
    j0 = select_j0(n, table).index
    if j0 + 1 >= len(table.entries):
        return Fraction(n * table.entries[j0][1])
    return Fraction(n * table.entries[j0 + 1][1], cf.coefficients[j0 + 1] + 1)


def expected_cycles_formula(n: int, c: float, p: int = 1, q: int = 1) -> float:
    """Expected count of (p, q)-cycles at deviation scale C:
    (sqrt(p) / (2 q sqrt(pi))) * n^(1/2 - C^2/(4p)).

    Valid as the leading behavior for 0 <= C < sqrt(2p); outside that range a
    value is still returned but flagged as extrapolated.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if p < 1 or q < 1 or math.gcd(p, q) != 1:
        raise ValueError(f"(p, q) must be coprime positive integers, got ({p}, {q})")
    if c < 0:
        raise ValueError(f"C must be nonnegative, got {c}")
    if c >= math.sqrt(2 * p):
        warnings.warn(
            f"C={c:g} is at or beyond sqrt(2p)={math.sqrt(2 * p):g}; value extrapolated",
            ExtrapolationWarning,
            stacklevel=2,
        )
    return math.sqrt(p) / (2 * q * math.sqrt(math.pi)) * n ** (0.5 - c * c / (4 * p))


def _best_p(m: int, n: int, q: int) -> int:
    """p minimizing |m - (p/q) n| for fixed q; exact halves round down.

    round-half-down(x) = ceil(x - 1/2), evaluated in integers for x = mq/n.
    """
    return -((n - 2 * m * q) // (2 * n))


def predict_regime(
    n: int, m: int, q_max: int = 12, c_spike: float = 1.5
) -> RegimePrediction:
    """Classify (n, m) into one of the four regimes.

    Primary spikes are detected against coprime p/q in ascending q
    (deviation within c_spike * sqrt(n)); a denominator q >= 2 is eligible
    only while (3q)^3 <= n, i.e. well below the convergent scale n^(1/3),
    since beyond that scale a q-fold winding cannot stabilize and every m
    sits within sqrt(n) of some rational. Failing a spike, the valley /
    secondary-spike scales are measured against the nearest integer ratio
    p/1 with the fixed windows |C| < sqrt(2) (valley) and
    sqrt(2) <= |C| <= 3 sqrt(2) (secondary spike); beyond them the aspect
    ratio is treated as irrational and the prediction comes from the
    continued-fraction convergent at denominator scale n^(1/3). Finite-n
    C-windows of distinct rationals overlap heavily, so the C-scales of
    ratios with q >= 2 are deliberately not classified; they resolve to a
    spike, to the q=1 windows, or to the convergent machinery.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if m < n:
        raise ValueError(f"need n <= m (transpose the torus), got n={n}, m={m}")
    sqrt_n = math.sqrt(n)
    for q in range(1, q_max + 1):
        if q > 1 and 27 * q**3 > n:
            break
        p = _best_p(m, n, q)
        if p < 1 or math.gcd(p, q) != 1:
            continue
        delta = m - Fraction(p * n, q)
        if abs(delta) <= c_spike * sqrt_n:
            hom = HomologyClass(p, q)
            return RegimePrediction(
                regime=Regime.PRIMARY_SPIKE,
                base_class=hom,
                deviation_rho=float(delta) / sqrt_n,
                deviation_c=None,
                predicted_class=hom,
                predicted_count=None,
                predicted_length=float(n * p + m * q),
            )
    ln_n = math.log(n) if n > 1 else 1.0
    unit = math.sqrt(n * ln_n)
    p1 = _best_p(m, n, 1)
    c = (m - p1 * n) / unit
    if abs(c) < math.sqrt(2):
        hom = HomologyClass(p1, 1)
        return RegimePrediction(
            regime=Regime.VALLEY,
            base_class=hom,
            deviation_rho=None,
            deviation_c=c,
            predicted_class=hom,
            predicted_count=expected_cycles_formula(n, abs(c), p1, 1),
            predicted_length=float(n * p1 + m),
        )
    if abs(c) <= 3 * math.sqrt(2):
        if p1 == 1:
            length = n**1.5 / (3 * abs(c) * math.sqrt(ln_n))
        else:
            length = n**1.5 / math.sqrt(ln_n)
        return RegimePrediction(
            regime=Regime.SECONDARY_SPIKE,
            base_class=HomologyClass(p1, 1),
            deviation_rho=None,
            deviation_c=c,
            predicted_class=None,
            predicted_count=1.0,
            predicted_length=length,
        )
    table = convergents(continued_fraction(m, n))
    j0 = select_j0(n, table).index
    pj, qj = table.entries[j0]
    return RegimePrediction(
        regime=Regime.IRRATIONAL,
        base_class=None,
        deviation_rho=None,
        deviation_c=None,
        predicted_class=HomologyClass(pj, qj),
        predicted_count=None,
        predicted_length=float(n * pj + m * qj),
    )


def prediction_to_json(pred: RegimePrediction) -> dict:
    return {
        "regime": pred.regime.value,
        "base_class": list(pred.base_class) if pred.base_class else None,
        "deviation_rho": pred.deviation_rho,
        "deviation_C": pred.deviation_c,
        "predicted_class": list(pred.predicted_class) if pred.predicted_class else None,
        "predicted_count": pred.predicted_count,
        "predicted_length": pred.predicted_length,
    }
