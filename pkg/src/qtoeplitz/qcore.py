"""Truncated complex power series and the q-calculus primitives.

A :class:`PowerSeries` holds ``a_0..a_N`` of a polynomial truncation
``f(z) = sum a_n z^n``. Functions of the normalized class have
``a_0 = 0`` and ``a_1 = 1``.

The Jackson q-derivative is available in two independent forms: the
difference quotient evaluated pointwise, and the coefficient map
``a_n -> [n]_q a_n`` acting on the series.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InvalidArgument, OutOfDomain

DEFAULT_ORDER = 8
SAFE_DISK_EPS = 1e-3
NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class QParam:
    """Deformation parameter ``q``, strictly inside ``(0, 1)``."""

    q: float

    def __post_init__(self) -> None:
        q = float(self.q)
        if not math.isfinite(q) or not 0.0 < q < 1.0:
            raise InvalidArgument(f"q must lie strictly inside (0, 1), got {self.q!r}")
        object.__setattr__(self, "q", q)

    def bracket(self, n: int) -> float:
        return bracket(self, n)


QLike = Union[QParam, float]


def as_qparam(q: QLike) -> QParam:
    return q if isinstance(q, QParam) else QParam(q)


def bracket(qp: QLike, n: int) -> float:
    """The q-integer ``[n]_q = 1 + q + ... + q^(n-1)``.

    Summed term by term rather than as ``(1 - q^n)/(1 - q)``, which loses
    digits to cancellation as ``q -> 1``.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidArgument(f"bracket index must be a positive integer, got {n!r}")
    q = as_qparam(qp).q
    return math.fsum(q**k for k in range(int(n)))


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients ``a_0..a_N`` of a truncated Taylor series."""

    coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(complex(c) for c in self.coeffs)
        if len(coeffs) < 2:
            raise InvalidArgument("a power series needs at least a_0 and a_1")
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in coeffs):
            raise InvalidArgument("coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def normalized(cls, higher: Iterable[complex] = ()) -> "PowerSeries":
        """Build ``z + a_2 z^2 + ...`` from ``a_2, a_3, ...``."""
        return cls((0j, 1 + 0j, *higher))

    @property
    def truncation_order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> complex:
        """Coefficient ``a_n``; zero beyond the truncation order."""
        if n < 0:
            raise IndexError(n)
        return self.coeffs[n] if n < len(self.coeffs) else 0j

    def is_normalized(self, tol: float = NORMALIZATION_TOL) -> bool:
        return abs(self.coeffs[0]) <= tol and abs(self.coeffs[1] - 1) <= tol

    def derivative(self) -> "PowerSeries":
        """Analytic derivative of the truncated polynomial."""
        d = [n * c for n, c in enumerate(self.coeffs)][1:]
        if len(d) < 2:
            d.append(0j)
        return PowerSeries(tuple(d))

    def __call__(self, z):
        return horner(self.coeffs, z)

    def to_json(self) -> str:
        return json.dumps([[c.real, c.imag] for c in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> "PowerSeries":
        data = json.loads(text)
        try:
            return cls(tuple(complex(re, im) for re, im in data))
        except (TypeError, ValueError) as exc:
            raise InvalidArgument(f"expected a JSON array of [re, im] pairs: {exc}") from None


def horner(coeffs: Sequence[complex], z):
    """Evaluate ``sum coeffs[n] z^n``; ``z`` may be a scalar or an array."""
    acc = np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def evaluate(f: PowerSeries, z: complex, eps: float = SAFE_DISK_EPS) -> complex:
    """Value of the truncated polynomial at ``z`` with ``|z| <= 1 - eps``."""
    if abs(z) > 1.0 - eps:
        raise OutOfDomain(f"|z| = {abs(z):.6g} exceeds the safe radius {1.0 - eps:.6g}")
    return complex(horner(f.coeffs, z))


def _require_normalized(f: PowerSeries) -> None:
    if not f.is_normalized():
        raise InvalidArgument(
            f"series is not normalized: a_0 = {f.coeffs[0]}, a_1 = {f.coeffs[1]}"
        )


def q_derivative_series(f: PowerSeries, qp: QLike) -> PowerSeries:
    """Coefficients of ``D_q f``: entry ``k`` is ``[k+1]_q a_{k+1}``.

    The result has order ``N - 1``; for ``N = 1`` the constant series ``1``
    is padded with a zero linear term.
    """
    _require_normalized(f)
    qp = as_qparam(qp)
    out = [bracket(qp, n) * f.coeffs[n] for n in range(1, len(f.coeffs))]
    out[0] = 1 + 0j
    if len(out) < 2:
        out.append(0j)
    return PowerSeries(tuple(out))


def q_derivative_pointwise(f: PowerSeries, qp: QLike, z: complex) -> complex:
    """Jackson difference quotient ``(f(z) - f(qz)) / ((1 - q) z)``.

    At ``z = 0`` the quotient is replaced by ``f'(0) = a_1``.
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise OutOfDomain(f"|z| = {abs(z):.6g} is outside the unit disk")
    q = as_qparam(qp).q
    if z == 0:
        return f.coeffs[1]
    fz = complex(horner(f.coeffs, z))
    fqz = complex(horner(f.coeffs, q * z))
    return (fz - fqz) / ((1.0 - q) * z)
