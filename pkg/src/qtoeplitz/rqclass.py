"""Functions of the class R(q) built from Caratheodory coefficients.

``f`` is in R(q) when ``Re D_q f > 0`` on the unit disk, i.e. when
``D_q f = p`` for some ``p`` in P. Matching coefficients gives
``a_n = p_{n-1} / [n]_q``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgument
from .qcore import (DEFAULT_ORDER, PowerSeries, QLike, QParam, as_qparam, bracket,
                    horner, q_derivative_series)

RADIUS_CAP = 0.999
MEMBERSHIP_TOL = -1e-9


@dataclass(frozen=True)
class RqFunction:
    series: PowerSeries
    qp: QParam
    source: tuple[complex, ...]

    def a(self, n: int) -> complex:
        return self.series[n]

    def to_dict(self) -> dict:
        return {
            "q": self.qp.q,
            "coeffs": [[c.real, c.imag] for c in self.series.coeffs],
            "source_p": [[c.real, c.imag] for c in self.source],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "RqFunction":
        d = json.loads(text)
        return cls(
            PowerSeries(tuple(complex(re, im) for re, im in d["coeffs"])),
            QParam(d["q"]),
            tuple(complex(re, im) for re, im in d["source_p"]),
        )


def from_p_coefficients(p_coeffs: Sequence[complex], qp: QLike,
                        order: int = DEFAULT_ORDER) -> RqFunction:
    """Build ``f = z + sum_{n=2}^{order} p_{n-1}/[n]_q z^n``.

    ``p_coeffs`` starts at ``p_1`` and must supply ``order - 1`` values.
    """
    if order < 4:
        raise InvalidArgument(f"order must be at least 4, got {order}")
    if len(p_coeffs) < order - 1:
        raise InvalidArgument(
            f"order {order} needs {order - 1} Caratheodory coefficients, got {len(p_coeffs)}"
        )
    qp = as_qparam(qp)
    src = tuple(complex(c) for c in p_coeffs[: order - 1])
    higher = [src[n - 2] / bracket(qp, n) for n in range(2, order + 1)]
    return RqFunction(PowerSeries.normalized(higher), qp, src)


def a234(p1, p2, p3, qp: QLike):
    """``(a_2, a_3, a_4)`` from ``(p_1, p_2, p_3)``; vectorizes over arrays."""
    qp = as_qparam(qp)
    return p1 / bracket(qp, 2), p2 / bracket(qp, 3), p3 / bracket(qp, 4)


@dataclass(frozen=True)
class MembershipReport:
    ok: bool
    minimum: float
    location: complex
    grid_index: tuple[int, int]

    def __bool__(self) -> bool:
        return self.ok


def membership_check(f: RqFunction, grid_radii: int = 32, grid_angles: int = 64,
                     radius_cap: float = RADIUS_CAP) -> MembershipReport:
    """Sample ``Re D_q f`` on a polar grid and report its minimum.

    Radii are ``radius_cap * i / grid_radii`` for ``i = 1..grid_radii``,
    angles ``2 pi j / grid_angles``. Passing is necessary, not sufficient,
    for membership; the minimum is the first one in (radius, angle) order.
    """
    if grid_radii < 8 or grid_angles < 8:
        raise InvalidArgument("grid sizes must be at least 8")
    radii = radius_cap * np.arange(1, grid_radii + 1) / grid_radii
    angles = 2.0 * math.pi * np.arange(grid_angles) / grid_angles
    z = radii[:, None] * np.exp(1j * angles)[None, :]
    dq = q_derivative_series(f.series, f.qp)
    re = horner(dq.coeffs, z).real
    flat = int(np.argmin(re))
    i, j = divmod(flat, grid_angles)
    minimum = float(re[i, j])
    return MembershipReport(minimum > MEMBERSHIP_TOL, minimum, complex(z[i, j]), (i, j))


def coefficient_bound_ok(f: RqFunction, tol: float = 1e-12) -> bool:
    """``|a_n| <= 2 / [n]_q`` for every stored coefficient."""
    return all(abs(f.a(n)) <= 2.0 / bracket(f.qp, n) + tol
               for n in range(2, f.series.truncation_order + 1))


@dataclass(frozen=True)
class QLimitReport:
    q_values: tuple[float, ...]
    coefficients: tuple[tuple[complex, ...], ...]  # rows of a_2..a_{k+1}, one per q
    limits: tuple[complex, ...]  # p_{n-1} / n
    deviations: tuple[float, ...]  # |a_n(q_last) - p_{n-1}/n|


def q_limit_coefficients(p_coeffs: Sequence[complex], q_sequence: Sequence[float]) -> QLimitReport:
    """Track ``a_n(q) = p_{n-1}/[n]_q`` as ``q -> 1`` against ``p_{n-1}/n``."""
    qs = [float(q) for q in q_sequence]
    if not qs:
        raise InvalidArgument("q_sequence is empty")
    if any(b <= a for a, b in zip(qs, qs[1:])):
        raise InvalidArgument("q_sequence must be strictly increasing")
    src = [complex(c) for c in p_coeffs]
    rows = tuple(
        tuple(c / bracket(q, n) for n, c in enumerate(src, start=2)) for q in qs
    )
    limits = tuple(c / n for n, c in enumerate(src, start=2))
    devs = tuple(abs(a - lim) for a, lim in zip(rows[-1], limits))
    return QLimitReport(tuple(qs), rows, limits, devs)
