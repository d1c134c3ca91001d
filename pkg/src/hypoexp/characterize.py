"""Mechanized verification of the exponential characterization equations.

Given distinct positive scales mu_1 > ... > mu_n with signed weights w_j, a
candidate reciprocal-transform series psi(t) = sum a_k t^k solves the
product/mixture identity iff

    sum_j w_j * prod_{i != j} psi(mu_i t)  ==  1            (density form)
    sum_j (w_j / mu_j) * prod_{i != j} psi(mu_i t)  ==  -t  (survival form)

as formal series.  This module computes the per-order residuals of both
equations, the structural coefficients that make each order's equation linear
in the highest unknown, and forward-solves those recursions to exhibit the
unique (exponential) solution at truncation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (
    RateVector,
    ScaleVector,
    WeightVector,
    complete_homogeneous,
    lagrange_weights,
    weights_from_scales,
)
from .errors import NotNormalizedError, StructureViolationError, ZeroDivisorError
from .series import Series

#: Default truncation order for solvers and residual sweeps.
DEFAULT_ORDER = 16

#: Default scaled tolerance for residual verdicts and structural checks.
DEFAULT_TOL = 1e-10

VERDICT_COMPATIBLE = "exponential-compatible"
VERDICT_INCOMPATIBLE = "incompatible"
VERDICT_DEGENERATE = "degenerate"


@dataclass(frozen=True)
class ResidualReport:
    """Per-order residuals of a characterization equation.

    ``residuals[k]`` is the order-k residual, k = 0..order.  The verdict is
    incompatible exactly when some residual exceeds the scaled tolerance, in
    which case ``first_violation_k`` records the smallest offending order.
    """

    order: int
    residuals: tuple[float, ...]
    tolerance: float
    verdict: str
    first_violation_k: Optional[int] = None
    fitted_lambda: Optional[float] = None

    @property
    def compatible(self) -> bool:
        return self.verdict != VERDICT_INCOMPATIBLE

    def to_dict(self) -> dict:
        out = {
            "order": self.order,
            "residuals": list(self.residuals),
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "first_violation_k": self.first_violation_k,
        }
        if self.fitted_lambda is not None:
            out["fitted_lambda"] = self.fitted_lambda
        return out


@dataclass(frozen=True)
class StructuralCoefficients:
    """Order-indexed linear coefficients of the forward recursions.

    ``kind`` is "c" (density-form equation: c_1 = 0, c_k < 0 for k >= 2) or
    "d" (survival-form equation: d_1 = 1, d_k > 0 for k >= 2).
    ``values[k-1]`` holds the coefficient at order k; ``term_scales[k-1]``
    records the largest term magnitude entering it, the natural reference
    for "numerically zero" decisions (the coefficients themselves decay
    geometrically when all scales are below one).
    """

    kind: str
    values: tuple[float, ...]
    term_scales: tuple[float, ...]

    def at(self, k: int) -> float:
        if not 1 <= k <= len(self.values):
            raise IndexError(f"order {k} outside 1..{len(self.values)}")
        return self.values[k - 1]

    def scale_at(self, k: int) -> float:
        return self.term_scales[k - 1]


@dataclass(frozen=True)
class Lemma2Report:
    """Residuals of the three weight identities plus the moment identity.

    ``power_sum_residuals[k-1]`` is sum_j w_j lambda_j^k for k = 1..n-1 (should
    vanish).  ``reciprocal_gaps[k-1]`` is sum_j w_j / lambda_j^k minus
    sum_j 1 / lambda_j^k for k = 1..order (zero at k=1, strictly positive
    after).  ``symmetric_residuals`` compares sum_j w_j / lambda_j^k against
    the complete homogeneous symmetric polynomial of the reciprocal rates.
    """

    order: int
    weight_sum_residual: float
    power_sum_residuals: tuple[float, ...]
    reciprocal_gaps: tuple[float, ...]
    symmetric_residuals: tuple[float, ...]
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "weight_sum_residual": self.weight_sum_residual,
            "power_sum_residuals": list(self.power_sum_residuals),
            "reciprocal_gaps": list(self.reciprocal_gaps),
            "symmetric_residuals": list(self.symmetric_residuals),
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ExponentialVerdict:
    """Outcome of testing whether a series is 1 + t/lambda."""

    is_exponential: bool
    fitted_lambda: Optional[float]
    degenerate: bool

    def to_dict(self) -> dict:
        return {
            "is_exponential": self.is_exponential,
            "fitted_lambda": self.fitted_lambda,
            "degenerate": self.degenerate,
        }


def _scaled_ok(value: float, scale: float, tol: float) -> bool:
    return abs(value) <= tol * max(1.0, scale)


def c_coefficients(
    mu: ScaleVector, order: int, tol: float = DEFAULT_TOL
) -> StructuralCoefficients:
    """c_k = sum_i mu_i^k - sum_j w_j mu_j^k for k = 1..order.

    Checks the structural signs (c_1 = 0 within tolerance, c_k < 0 for
    k >= 2) and raises StructureViolationError when they fail.
    """
    weights = weights_from_scales(mu)
    values = []
    scales = []
    for k in range(1, order + 1):
        powers = [m**k for m in mu.scales]
        weighted = [w * p for w, p in zip(weights.weights, powers)]
        ck = math.fsum(powers) - math.fsum(weighted)
        scale = max(max(powers), max(abs(t) for t in weighted))
        if k == 1:
            if abs(ck) > tol * max(1.0, scale):
                raise StructureViolationError(
                    f"c_1 = {ck!r} not zero within scaled tolerance {tol!r}"
                )
        elif ck >= 0.0:
            raise StructureViolationError(f"c_{k} = {ck!r} is not negative")
        values.append(ck)
        scales.append(scale)
    return StructuralCoefficients("c", tuple(values), tuple(scales))


def d_coefficients(
    mu: ScaleVector, order: int, tol: float = DEFAULT_TOL
) -> StructuralCoefficients:
    """d_k = sum_j w_j mu_j^(k-1) for k = 1..order.

    Checks d_1 = 1 within tolerance and d_k > 0 for k >= 2.
    """
    weights = weights_from_scales(mu)
    values = []
    scales = []
    for k in range(1, order + 1):
        weighted = [w * m ** (k - 1) for w, m in zip(weights.weights, mu.scales)]
        dk = math.fsum(weighted)
        scale = max(abs(t) for t in weighted)
        if k == 1:
            if not _scaled_ok(dk - 1.0, scale, tol):
                raise StructureViolationError(
                    f"d_1 = {dk!r} not 1 within scaled tolerance {tol!r}"
                )
        elif dk <= 0.0:
            raise StructureViolationError(f"d_{k} = {dk!r} is not positive")
        values.append(dk)
        scales.append(scale)
    return StructuralCoefficients("d", tuple(values), tuple(scales))


def lemma2_check(
    rates: RateVector, order: int = 12, tol: float = DEFAULT_TOL
) -> Lemma2Report:
    """Verify the weight-sum, power-sum, and reciprocal-power identities.

    The reciprocal-power gaps are formally guaranteed only up to k = n-1, but
    hold at every order; the sweep reports all k <= order.
    """
    weights = lagrange_weights(rates)
    lam = rates.rates
    w = weights.weights
    n = rates.n

    ws_residual = math.fsum(w) - 1.0
    passed = _scaled_ok(ws_residual, max(abs(v) for v in w), tol)

    power_residuals = []
    for k in range(1, n):
        terms = [wj * lj**k for wj, lj in zip(w, lam)]
        r = math.fsum(terms)
        power_residuals.append(r)
        passed &= _scaled_ok(r, max(abs(t) for t in terms), tol)

    gaps = []
    symmetric_residuals = []
    for k in range(1, order + 1):
        terms = [wj / lj**k for wj, lj in zip(w, lam)]
        weighted = math.fsum(terms)
        plain = math.fsum(1.0 / lj**k for lj in lam)
        gap = weighted - plain
        gaps.append(gap)
        scale = max(abs(t) for t in terms)
        if k == 1:
            passed &= _scaled_ok(gap, scale, tol)
        else:
            passed &= gap > 0.0
        hk = complete_homogeneous([1.0 / lj for lj in lam], k)
        sym = weighted - hk
        symmetric_residuals.append(sym)
        passed &= _scaled_ok(sym, max(scale, abs(hk)), tol)

    return Lemma2Report(
        order=order,
        weight_sum_residual=ws_residual,
        power_sum_residuals=tuple(power_residuals),
        reciprocal_gaps=tuple(gaps),
        symmetric_residuals=tuple(symmetric_residuals),
        tolerance=tol,
        passed=passed,
    )


def _normalize(psi: Series) -> Series:
    a0 = psi.coefficients[0]
    if not math.isfinite(a0) or a0 == 0.0:
        raise NotNormalizedError(
            f"constant term {a0!r} cannot be normalized to 1"
        )
    if a0 == 1.0:
        return psi
    return psi.scale_values(1.0 / a0)


def _offdiag_products(psi: Series, mu: ScaleVector) -> list[Series]:
    """For each j, the product of psi(mu_i t) over i != j."""
    out = []
    for j in range(mu.n):
        prod = Series.one(psi.order)
        for i, m in enumerate(mu.scales):
            if i != j:
                prod = prod * psi.scale_arg(m)
        out.append(prod)
    return out


def _weighted_combination(
    psi: Series, mu: ScaleVector, coeffs: Sequence[float]
) -> tuple[list[float], list[float]]:
    """Series sum_j coeffs[j] * prod_{i != j} psi(mu_i t), with per-order scales."""
    products = _offdiag_products(psi, mu)
    values = []
    scales = []
    for k in range(psi.order + 1):
        terms = [c * p[k] for c, p in zip(coeffs, products)]
        values.append(math.fsum(terms))
        scales.append(max(abs(t) for t in terms))
    return values, scales


def _verdict_from_residuals(
    psi: Series,
    residuals: list[float],
    scales: list[float],
    tol: float,
) -> tuple[str, Optional[int], Optional[float]]:
    first_violation = None
    for k, (r, s) in enumerate(zip(residuals, scales)):
        if not _scaled_ok(r, s, tol):
            first_violation = k
            break
    if first_violation is not None:
        return VERDICT_INCOMPATIBLE, first_violation, None
    if all(abs(c) <= tol for c in psi.coefficients[1:]):
        return VERDICT_DEGENERATE, None, None
    a1 = psi.coefficients[1]
    fitted = 1.0 / a1 if a1 > 0.0 else None
    return VERDICT_COMPATIBLE, None, fitted


def residual_h(
    psi: Series, mu: ScaleVector, tol: float = DEFAULT_TOL
) -> ResidualReport:
    """Residuals of the density-form equation sum_j w_j prod_{i!=j} psi(mu_i t) = 1.

    psi is normalized to unit constant term first.  Residual order 0 is the
    weight-sum defect; orders >= 1 must vanish for a solution.
    """
    psi = _normalize(psi)
    weights = weights_from_scales(mu)
    values, scales = _weighted_combination(psi, mu, weights.weights)
    residuals = [values[0] - 1.0] + values[1:]
    verdict, violation, fitted = _verdict_from_residuals(
        psi, residuals, scales, tol
    )
    return ResidualReport(
        order=psi.order,
        residuals=tuple(residuals),
        tolerance=tol,
        verdict=verdict,
        first_violation_k=violation,
        fitted_lambda=fitted,
    )


def residual_q(
    psi: Series, mu: ScaleVector, tol: float = DEFAULT_TOL
) -> ResidualReport:
    """Residuals of the survival-form equation sum_j (w_j/mu_j) prod psi(mu_i t) = -t.

    The order-k residual is the series coefficient minus the target -[k == 1].
    """
    psi = _normalize(psi)
    weights = weights_from_scales(mu)
    coeffs = [w / m for w, m in zip(weights.weights, mu.scales)]
    values, scales = _weighted_combination(psi, mu, coeffs)
    residuals = list(values)
    if psi.order >= 1:
        residuals[1] += 1.0
    verdict, violation, fitted = _verdict_from_residuals(
        psi, residuals, scales, tol
    )
    return ResidualReport(
        order=psi.order,
        residuals=tuple(residuals),
        tolerance=tol,
        verdict=verdict,
        first_violation_k=violation,
        fitted_lambda=fitted,
    )


def _elementary_symmetric(values: Sequence[float], k: int) -> float:
    """Elementary symmetric polynomial e_k via the product recurrence."""
    e = [1.0] + [0.0] * k
    for v in values:
        for d in range(min(k, len(values)), 0, -1):
            e[d] += v * e[d - 1]
    return e[k]


def _check_unit_block_cancellation(
    mu: ScaleVector,
    weights: WeightVector,
    a1: float,
    k: int,
    tol: float,
) -> None:
    """The all-ones multi-index block of order k must cancel across j.

    Its contribution is a1^k * sum_j w_j * e_k(mu with entry j removed),
    which vanishes identically because sum_j w_j / mu_j = 0.
    """
    if not 2 <= k <= mu.n - 1:
        return
    terms = []
    for j, w in enumerate(weights.weights):
        others = [m for i, m in enumerate(mu.scales) if i != j]
        terms.append(w * a1**k * _elementary_symmetric(others, k))
    total = math.fsum(terms)
    scale = max(abs(t) for t in terms)
    if not _scaled_ok(total, scale, max(tol, 1e-11)):
        raise StructureViolationError(
            f"order-{k} all-ones block sums to {total!r}, expected cancellation"
        )


def forward_solve_theorem1(
    mu: ScaleVector,
    a1: float,
    order: int = DEFAULT_ORDER,
    tol: float = DEFAULT_TOL,
) -> Series:
    """Solve the density-form equation order by order, starting from a_1.

    Each order k >= 2 is linear in a_k with coefficient c_k:  the remainder
    is evaluated by series arithmetic with a_k set to zero, and a_k is then
    isolated by division.  For the exponential candidate the solved a_k all
    vanish; a near-zero divisor c_k signals numeric breakdown.
    """
    if a1 <= 0.0:
        raise ValueError(f"a1={a1!r} must be positive (positive-mean candidate)")
    cks = c_coefficients(mu, order, tol)
    weights = weights_from_scales(mu)
    coeffs = [1.0, float(a1)] + [0.0] * (order - 1)
    for k in range(2, order + 1):
        partial = Series(tuple(coeffs[: k + 1]))
        values, _ = _weighted_combination(partial, mu, weights.weights)
        ck = cks.at(k)
        if abs(ck) <= 1e-13 * cks.scale_at(k):
            raise ZeroDivisorError(f"c_{k} = {ck!r} is numerically zero")
        coeffs[k] = -values[k] / ck
        _check_unit_block_cancellation(mu, weights, a1, k, tol)
    return Series(tuple(coeffs))


def forward_solve_theorem2(
    mu: ScaleVector,
    order: int = DEFAULT_ORDER,
    tol: float = DEFAULT_TOL,
) -> Series:
    """Solve the survival-form equation order by order; a_1 is forced to 1/d_1.

    Returns the solved series, which must come out as (1, 1, 0, ..., 0).
    """
    dks = d_coefficients(mu, order, tol)
    weights = weights_from_scales(mu)
    mix = [w / m for w, m in zip(weights.weights, mu.scales)]
    coeffs = [1.0] + [0.0] * order
    for k in range(1, order + 1):
        partial = Series(tuple(coeffs[: k + 1]))
        values, _ = _weighted_combination(partial, mu, mix)
        dk = dks.at(k)
        if abs(dk) <= 1e-13 * dks.scale_at(k):
            raise ZeroDivisorError(f"d_{k} = {dk!r} is numerically zero")
        target = -1.0 if k == 1 else 0.0
        # values[k] = -dk * a_k + remainder; solve values[k] == target.
        coeffs[k] = (values[k] - target) / dk
    return Series(tuple(coeffs))


def is_exponential_series(
    psi: Series, tol: float = DEFAULT_TOL
) -> ExponentialVerdict:
    """Decide whether psi is 1 + t/lambda for some lambda > 0.

    True iff every coefficient of order >= 2 is below the scaled tolerance
    and the linear coefficient is positive; the all-zero tail with a_1 = 0
    is labeled degenerate (the zero random variable), not exponential.
    """
    psi = _normalize(psi)
    a1 = psi.coefficients[1] if psi.order >= 1 else 0.0
    tail_ok = all(
        abs(c) <= tol * max(1.0, abs(a1) ** k)
        for k, c in enumerate(psi.coefficients[2:], start=2)
    )
    if tail_ok and abs(a1) <= tol:
        return ExponentialVerdict(False, None, degenerate=True)
    if tail_ok and a1 > 0.0:
        return ExponentialVerdict(True, 1.0 / a1, degenerate=False)
    return ExponentialVerdict(False, None, degenerate=False)
