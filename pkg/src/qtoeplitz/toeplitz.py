"""Symmetric Toeplitz determinants of Taylor coefficient sequences.

``T_m(n)`` is the determinant of the ``m x m`` matrix with entry
``a_{n + |i - j|}``, using the convention ``a_1 = 1``. The helpers
:func:`t22`, :func:`t23`, :func:`t31` and :func:`t32` are the expanded
forms for the four determinants that carry closed-form bounds; they accept
numpy arrays so the search can evaluate whole grids at once.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InvalidArgument
from .qcore import PowerSeries

IDENTITY_TOL = 1e-12

Coefficients = Union[PowerSeries, Mapping[int, complex], Sequence[complex], Callable[[int], complex]]


@dataclass(frozen=True)
class ToeplitzSpec:
    m: int  # matrix size
    n: int  # first coefficient index

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise InvalidArgument(f"need m >= 1 and n >= 1, got m={self.m}, n={self.n}")

    @property
    def indices(self) -> range:
        return range(self.n, self.n + self.m)


def _lookup(coeffs: Coefficients, k: int) -> complex:
    """``a_k`` from the accessor; sequences are indexed by degree."""
    try:
        if isinstance(coeffs, PowerSeries):
            if k >= len(coeffs.coeffs):
                raise KeyError(k)
            return coeffs.coeffs[k]
        if callable(coeffs):
            return complex(coeffs(k))
        if isinstance(coeffs, Mapping):
            return complex(coeffs[k])
        return complex(coeffs[k])
    except (KeyError, IndexError):
        if k == 1:
            return 1 + 0j
        raise InvalidArgument(f"coefficient a_{k} is missing") from None


def coefficient_vector(spec: ToeplitzSpec, coeffs: Coefficients) -> np.ndarray:
    vals = []
    for k in spec.indices:
        a = _lookup(coeffs, k)
        if k == 1 and abs(a - 1) > IDENTITY_TOL:
            raise InvalidArgument(f"a_1 must equal 1, got {a}")
        vals.append(a)
    return np.array(vals, dtype=complex)


def toeplitz_matrix(spec: ToeplitzSpec, coeffs: Coefficients) -> np.ndarray:
    c = coefficient_vector(spec, coeffs)
    idx = np.abs(np.arange(spec.m)[:, None] - np.arange(spec.m)[None, :])
    return c[idx]


def toeplitz_det(spec: ToeplitzSpec, coeffs: Coefficients) -> complex:
    """Signed determinant of the symmetric Toeplitz matrix."""
    c = coefficient_vector(spec, coeffs)
    if spec.m == 1:
        return complex(c[0])
    if spec.m == 2:
        return complex(c[0] * c[0] - c[1] * c[1])
    if spec.m == 3:
        a, b, d = c
        return complex(a**3 - 2 * a * b * b - a * d * d + 2 * b * b * d)
    # LAPACK getrf: LU with partial pivoting.
    return complex(np.linalg.det(toeplitz_matrix(spec, coeffs)))


def _assert_identity(lhs, rhs, scale, what: str) -> None:
    if not np.all(np.abs(lhs - rhs) <= IDENTITY_TOL * np.maximum(1.0, scale)):
        raise AssertionError(f"{what}: expanded and factored forms disagree")


def t22(a2, a3):
    """``T_2(2) = a_2^2 - a_3^2``."""
    return a2 * a2 - a3 * a3


def t23(a3, a4):
    """``T_2(3) = a_3^2 - a_4^2``."""
    return a3 * a3 - a4 * a4


def t32_factored(a2, a3, a4):
    return (a2 - a4) * (a2 * a2 + a2 * a4 - 2 * a3 * a3)


def t32(a2, a3, a4, check: bool = True):
    """``T_3(2) = a_2^3 - 2 a_2 a_3^2 - a_2 a_4^2 + 2 a_3^2 a_4``.

    With ``check`` the result is compared against the factored form
    ``(a_2 - a_4)(a_2^2 + a_2 a_4 - 2 a_3^2)``.
    """
    val = a2**3 - 2 * a2 * a3 * a3 - a2 * a4 * a4 + 2 * a3 * a3 * a4
    if check:
        scale = (np.abs(a2) + np.abs(a3) + np.abs(a4)) ** 3
        _assert_identity(val, t32_factored(a2, a3, a4), scale, "T_3(2)")
    return val


def t31(a2, a3, check: bool = True):
    """``T_3(1) = 1 + 2 a_2^2 (a_3 - 1) - a_3^2``.

    With ``check`` (scalars only) the value is compared with the general
    determinant routine.
    """
    val = 1 + 2 * a2 * a2 * (a3 - 1) - a3 * a3
    if check and np.ndim(val) == 0:
        ref = toeplitz_det(ToeplitzSpec(3, 1), {1: 1, 2: a2, 3: a3})
        scale = 1 + (abs(a2) + abs(a3)) ** 3
        _assert_identity(val, ref, scale, "T_3(1)")
    return val
