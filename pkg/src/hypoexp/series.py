"""Truncated formal power series and scaled-product coefficient machinery.

A Series holds coefficients a_0..a_K of a power series truncated at order K.
Products of argument-scaled copies of one series, prod_i u(mu_i t), are the
workhorse of the characterization equations; their coefficients are computed
by repeated Cauchy product, with a multi-index enumeration kept only as an
independent (budget-capped) oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .core import ScaleVector
from .errors import BudgetExceededError, ZeroConstantTermError

#: Hard cap on the number of multi-indices an enumeration may produce.
COMPOSITION_BUDGET = 10**7


@dataclass(frozen=True)
class Series:
    """Coefficients a_0..a_K of a truncated formal power series."""

    coefficients: tuple[float, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("a series needs at least the constant coefficient")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> float:
        return self.coefficients[k]

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[float]) -> "Series":
        return cls(tuple(float(c) for c in coeffs))

    @classmethod
    def one(cls, order: int) -> "Series":
        """Multiplicative identity 1 + 0t + ... truncated at ``order``."""
        return cls((1.0,) + (0.0,) * order)

    def truncate(self, order: int) -> "Series":
        if order >= self.order:
            return Series(self.coefficients + (0.0,) * (order - self.order))
        return Series(self.coefficients[: order + 1])

    def __mul__(self, other: "Series") -> "Series":
        """Cauchy product at the common truncation order."""
        if self.order != other.order:
            raise ValueError(
                f"truncation orders differ: {self.order} vs {other.order}"
            )
        u, v = self.coefficients, other.coefficients
        out = tuple(
            math.fsum(u[i] * v[k - i] for i in range(k + 1))
            for k in range(self.order + 1)
        )
        return Series(out)

    def reciprocal(self) -> "Series":
        """Series b with (self * b) = 1 at truncation order; needs a_0 != 0."""
        a = self.coefficients
        if a[0] == 0.0:
            raise ZeroConstantTermError("reciprocal needs a nonzero constant term")
        b = [1.0 / a[0]] + [0.0] * self.order
        for k in range(1, self.order + 1):
            b[k] = -math.fsum(a[i] * b[k - i] for i in range(1, k + 1)) / a[0]
        return Series(tuple(b))

    def scale_arg(self, mu: float) -> "Series":
        """Argument substitution t -> mu*t: coefficient k becomes a_k * mu^k."""
        if mu <= 0.0:
            raise ValueError(f"scale mu={mu!r} must be positive")
        return Series(
            tuple(c * mu**k for k, c in enumerate(self.coefficients))
        )

    def scale_values(self, factor: float) -> "Series":
        """Multiply every coefficient by a constant."""
        return Series(tuple(c * factor for c in self.coefficients))


def product_of_scaled(u: Series, mu: ScaleVector | Sequence[float]) -> Series:
    """Coefficients of prod_i u(mu_i t) by iterated Cauchy product."""
    scales = mu.scales if isinstance(mu, ScaleVector) else tuple(mu)
    if not scales:
        raise ValueError("need at least one scale")
    out = u.scale_arg(scales[0])
    for m in scales[1:]:
        out = out * u.scale_arg(m)
    return out


def composition_count(k: int, m: int) -> int:
    """Number of m-tuples of nonnegative integers summing to k (stars and bars)."""
    return math.comb(k + m - 1, m - 1)


def enumerate_compositions(k: int, m: int) -> Iterator[tuple[int, ...]]:
    """All m-tuples of nonnegative integers with entry sum k, lexicographically.

    Raises BudgetExceededError up front when the count C(k+m-1, m-1) exceeds
    the hard budget.
    """
    if k < 0 or m < 1:
        raise ValueError(f"need k >= 0 and m >= 1, got k={k}, m={m}")
    count = composition_count(k, m)
    if count > COMPOSITION_BUDGET:
        raise BudgetExceededError(
            f"{count} compositions of {k} into {m} parts exceeds budget"
            f" {COMPOSITION_BUDGET}"
        )
    return _compositions(k, m)


def _compositions(k: int, m: int) -> Iterator[tuple[int, ...]]:
    if m == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in _compositions(k - first, m - 1):
            yield (first,) + rest


def leibniz_coefficient(
    u: Series, mu: ScaleVector | Sequence[float], k: int
) -> float:
    """Coefficient k of prod_i u(mu_i t) by direct multi-index summation.

    Evaluates sum over |alpha| = k of prod_i mu_i^alpha_i * a_{alpha_i}.
    Exponential in k; exists as a test oracle for ``product_of_scaled``.
    """
    scales = mu.scales if isinstance(mu, ScaleVector) else tuple(mu)
    if k > u.order:
        raise ValueError(f"k={k} exceeds truncation order {u.order}")
    a = u.coefficients
    terms = []
    for alpha in enumerate_compositions(k, len(scales)):
        prod = 1.0
        for m, ai in zip(scales, alpha):
            prod *= m**ai * a[ai]
        terms.append(prod)
    return math.fsum(terms)
