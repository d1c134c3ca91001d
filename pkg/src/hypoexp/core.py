"""Hypoexponential distribution with pairwise distinct rates.

The distribution of a sum of independent exponentials Exp(lambda_1), ...,
Exp(lambda_n) with distinct rates has density

    g(x) = sum_j w_j * lambda_j * exp(-lambda_j * x),

where the signed mixture weights w_j = prod_{i != j} lambda_i / (lambda_i -
lambda_j) sum to one and alternate in sign when the rates are sorted.  The
alternating sum is prone to catastrophic cancellation, so weights are carried
as sign + log-magnitude and sums of signed terms go through ``math.fsum``.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BinomialCapError,
    NegativeDensityError,
    NonConvergenceError,
    NonPositiveRateError,
    NotDistinctError,
    TooFewRatesError,
    WeightOverflowError,
)

#: Default relative gap below which two rates are treated as tied.
DISTINCTNESS_TOL = 1e-9

#: Largest n for which binomial weights are produced as exact integers.
BINOMIAL_CAP = 60

_LOG_FLOAT_MAX = math.log(sys.float_info.max)


@dataclass(frozen=True)
class RateVector:
    """Validated, ascending-sorted vector of distinct positive rates.

    ``permutation[i]`` is the position in the original input of the i-th
    sorted rate, so the input ordering can be reconstructed.
    """

    rates: tuple[float, ...]
    permutation: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.rates)

    def original_order(self) -> tuple[float, ...]:
        out = [0.0] * self.n
        for i, pos in enumerate(self.permutation):
            out[pos] = self.rates[i]
        return tuple(out)


@dataclass(frozen=True)
class ScaleVector:
    """Strictly decreasing positive scales mu_1 > mu_2 > ... > mu_n.

    Scales are the reciprocal-rate parametrization: taking lambda_j = 1/mu_j
    maps a ScaleVector onto an ascending RateVector.
    """

    scales: tuple[float, ...]
    permutation: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.scales)

    def to_rates(self, reference: float = 1.0) -> RateVector:
        """Rates lambda_j = reference / mu_j, ascending (mu descending)."""
        return RateVector(
            tuple(reference / m for m in self.scales), self.permutation
        )


@dataclass(frozen=True)
class WeightVector:
    """Signed mixture weights with sign and log-magnitude carried separately.

    ``exact`` marks weights produced from exact integer arithmetic
    (binomial special case).
    """

    weights: tuple[float, ...]
    signs: tuple[int, ...]
    log_magnitudes: tuple[float, ...]
    exact: bool = False

    @property
    def n(self) -> int:
        return len(self.weights)

    def reconstruct(self) -> tuple[float, ...]:
        """Rebuild weight values from sign and log-magnitude."""
        return tuple(
            s * math.exp(lm) if s != 0 else 0.0
            for s, lm in zip(self.signs, self.log_magnitudes)
        )


def validate_rates(
    raw: Sequence[float], tol: float = DISTINCTNESS_TOL
) -> RateVector:
    """Validate raw rates: positive, finite, pairwise distinct; sort ascending.

    Raises TooFewRatesError, NonPositiveRateError, or NotDistinctError.
    """
    values = [float(v) for v in raw]
    if len(values) < 2:
        raise TooFewRatesError(f"need at least 2 rates, got {len(values)}")
    for v in values:
        if not math.isfinite(v) or v <= 0.0:
            raise NonPositiveRateError(f"rate {v!r} is not a positive real")
    order = sorted(range(len(values)), key=lambda i: values[i])
    rates = [values[i] for i in order]
    for a, b in zip(rates, rates[1:]):
        if (b - a) / max(a, b) < tol:
            raise NotDistinctError(
                f"rates {a!r} and {b!r} closer than relative tolerance {tol!r}"
            )
    return RateVector(tuple(rates), tuple(order))


def validate_scales(
    raw: Sequence[float], tol: float = DISTINCTNESS_TOL
) -> ScaleVector:
    """Validate raw scales and sort them strictly descending."""
    values = [float(v) for v in raw]
    if len(values) < 2:
        raise TooFewRatesError(f"need at least 2 scales, got {len(values)}")
    for v in values:
        if not math.isfinite(v) or v <= 0.0:
            raise NonPositiveRateError(f"scale {v!r} is not a positive real")
    order = sorted(range(len(values)), key=lambda i: -values[i])
    scales = [values[i] for i in order]
    for a, b in zip(scales, scales[1:]):
        if (a - b) / max(a, b) < tol:
            raise NotDistinctError(
                f"scales {a!r} and {b!r} closer than relative tolerance {tol!r}"
            )
    return ScaleVector(tuple(scales), tuple(order))


def lagrange_weights(rates: RateVector) -> WeightVector:
    """Signed mixture weights w_j = prod_{i != j} lambda_i / (lambda_i - lambda_j).

    Each factor contributes its sign and log-magnitude separately, keeping
    the product overflow-safe for large n and wide rate spreads.
    """
    lam = rates.rates
    signs: list[int] = []
    log_mags: list[float] = []
    weights: list[float] = []
    for j, lj in enumerate(lam):
        sign = 1
        log_mag = 0.0
        for i, li in enumerate(lam):
            if i == j:
                continue
            diff = li - lj
            if diff < 0.0:
                sign = -sign
            log_mag += math.log(li) - math.log(abs(diff))
        if log_mag > _LOG_FLOAT_MAX:
            raise WeightOverflowError(
                f"weight {j} has log-magnitude {log_mag:.1f}, beyond float range"
                " (rates are too close to tied)"
            )
        signs.append(sign)
        log_mags.append(log_mag)
        weights.append(sign * math.exp(log_mag))
    return WeightVector(tuple(weights), tuple(signs), tuple(log_mags))


def weights_from_scales(mu: ScaleVector) -> WeightVector:
    """Weights in the scale parametrization, w_j = prod_{i != j} mu_j / (mu_j - mu_i).

    Identical to ``lagrange_weights`` applied to rates 1/mu_j; with mu sorted
    descending the induced rates are already ascending.
    """
    return lagrange_weights(mu.to_rates())


def binomial_weights(n: int) -> WeightVector:
    """Exact weights C(n, j) * (-1)^(j-1) of the harmonic-scale case mu_j = 1/j."""
    if n < 2:
        raise TooFewRatesError(f"need n >= 2, got {n}")
    if n > BINOMIAL_CAP:
        raise BinomialCapError(
            f"n={n} exceeds the exact-integer cap {BINOMIAL_CAP}"
        )
    weights = []
    signs = []
    log_mags = []
    for j in range(1, n + 1):
        w = math.comb(n, j) * (-1) ** (j - 1)
        weights.append(float(w))
        signs.append(1 if w > 0 else -1)
        log_mags.append(math.log(abs(w)))
    return WeightVector(tuple(weights), tuple(signs), tuple(log_mags), exact=True)


def _as_rate_vector(rates: RateVector | Sequence[float]) -> RateVector:
    if isinstance(rates, RateVector):
        return rates
    return validate_rates(rates)


@dataclass(frozen=True)
class HypoexpDistribution:
    """Sum of independent exponentials with distinct rates.

    Immutable; weights are computed once from the rates at construction.
    """

    rates: RateVector
    weights: WeightVector

    @classmethod
    def from_rates(
        cls, rates: RateVector | Sequence[float], tol: float = DISTINCTNESS_TOL
    ) -> "HypoexpDistribution":
        rv = rates if isinstance(rates, RateVector) else validate_rates(rates, tol)
        return cls(rv, lagrange_weights(rv))

    @property
    def n(self) -> int:
        return self.rates.n

    # -- pointwise evaluation -------------------------------------------------

    def pdf(self, x):
        """Density at x >= 0; accepts a scalar or an ndarray."""
        if isinstance(x, np.ndarray):
            return self._pdf_many(x)
        x = float(x)
        if x < 0.0:
            raise ValueError(f"x={x!r} outside support [0, inf)")
        terms = [
            w * lam * math.exp(-lam * x)
            for w, lam in zip(self.weights.weights, self.rates.rates)
        ]
        value = math.fsum(terms)
        clamp = 1e-12 * max(abs(t) for t in terms)
        if value < -clamp:
            raise NegativeDensityError(
                f"pdf({x}) = {value!r} below the cancellation clamp -{clamp!r}"
            )
        return max(value, 0.0)

    def survival(self, x):
        """P(S > x); accepts a scalar or an ndarray."""
        if isinstance(x, np.ndarray):
            return self._survival_many(x)
        x = float(x)
        if x < 0.0:
            raise ValueError(f"x={x!r} outside support [0, inf)")
        terms = [
            w * math.exp(-lam * x)
            for w, lam in zip(self.weights.weights, self.rates.rates)
        ]
        value = math.fsum(terms)
        clamp = 1e-12 * max(abs(t) for t in terms)
        if value < -clamp:
            raise NegativeDensityError(
                f"survival({x}) = {value!r} below the cancellation clamp"
            )
        return min(max(value, 0.0), 1.0)

    def cdf(self, x):
        """P(S <= x) = 1 - survival(x); accepts a scalar or an ndarray."""
        return 1.0 - self.survival(x)

    def _pdf_many(self, x: np.ndarray) -> np.ndarray:
        lam = np.asarray(self.rates.rates)
        w = np.asarray(self.weights.weights)
        values = np.exp(-np.outer(x, lam)) @ (w * lam)
        return np.maximum(values, 0.0)

    def _survival_many(self, x: np.ndarray) -> np.ndarray:
        lam = np.asarray(self.rates.rates)
        w = np.asarray(self.weights.weights)
        values = np.exp(-np.outer(x, lam)) @ w
        return np.clip(values, 0.0, 1.0)

    # -- transforms and moments ----------------------------------------------

    def laplace(self, t: float, form: str = "product") -> float:
        """Laplace transform E[exp(-t S)] at t >= 0.

        ``product`` evaluates prod_i lambda_i / (lambda_i + t); ``mixture``
        evaluates sum_j w_j lambda_j / (lambda_j + t).  The two agree as an
        algebraic identity (partial fractions).
        """
        t = float(t)
        if t < 0.0:
            raise ValueError(f"t={t!r} must be nonnegative")
        if form == "product":
            value = 1.0
            for lam in self.rates.rates:
                value *= lam / (lam + t)
            return value
        if form == "mixture":
            return math.fsum(
                w * lam / (lam + t)
                for w, lam in zip(self.weights.weights, self.rates.rates)
            )
        raise ValueError(f"unknown form {form!r}")

    def moment(self, k: int) -> float:
        """Raw moment E[S^k] = k! * h_k(1/lambda_1, ..., 1/lambda_n).

        h_k is the complete homogeneous symmetric polynomial, evaluated by
        the O(n*k) prefix recurrence rather than multi-index enumeration.
        """
        if k < 1:
            raise ValueError(f"moment order k={k} must be >= 1")
        hk = complete_homogeneous(
            [1.0 / lam for lam in self.rates.rates], k
        )
        return math.factorial(k) * hk

    def mean(self) -> float:
        return self.moment(1)

    def variance(self) -> float:
        return self.moment(2) - self.moment(1) ** 2

    # -- inverse cdf and sampling --------------------------------------------

    def quantile(self, p: float, tol: float = 1e-13, max_iter: int = 500) -> float:
        """Inverse cdf by bracketing bisection; cdf(quantile(p)) is within tol of p."""
        p = float(p)
        if not 0.0 < p < 1.0:
            raise ValueError(f"p={p!r} must lie in (0, 1)")
        upper = self.mean()
        doublings = 0
        while self.cdf(upper) <= p:
            upper *= 2.0
            doublings += 1
            if doublings > 200:
                raise NonConvergenceError(f"no bracket found for p={p!r}")
        lower = 0.0
        for _ in range(max_iter):
            mid = 0.5 * (lower + upper)
            c = self.cdf(mid)
            if abs(c - p) <= tol:
                return mid
            if c < p:
                lower = mid
            else:
                upper = mid
            if upper - lower <= 1e-16 * max(1.0, upper):
                return 0.5 * (lower + upper)
        raise NonConvergenceError(
            f"bisection did not converge for p={p!r} after {max_iter} iterations"
        )

    def sample(self, count: int, seed: int) -> np.ndarray:
        """Draw ``count`` values of the sum by inverse transform, deterministically.

        Each component is -log(U)/lambda_i with U uniform on (0, 1].
        """
        if count < 1:
            raise ValueError(f"count={count} must be >= 1")
        rng = np.random.default_rng(seed)
        lam = np.asarray(self.rates.rates)
        u = 1.0 - rng.random((count, self.n))  # maps [0,1) onto (0,1]
        return (-np.log(u) / lam).sum(axis=1)


def complete_homogeneous(xs: Sequence[float], k: int) -> float:
    """Complete homogeneous symmetric polynomial h_k(xs) by the prefix recurrence.

    h_k over the first j variables satisfies
    h_k(x_1..x_j) = h_k(x_1..x_{j-1}) + x_j * h_{k-1}(x_1..x_j), costing O(n*k).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    h = [1.0] + [0.0] * k
    for x in xs:
        for d in range(1, k + 1):
            h[d] += x * h[d - 1]
    return h[k]
