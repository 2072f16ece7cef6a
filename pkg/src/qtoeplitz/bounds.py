"""Closed-form bounds and the objective functions used to derive them.

Every bound is available twice: as an expanded rational function of ``q``
(:func:`bound`) and rebuilt from q-brackets
(:func:`bound_via_brackets`). :func:`bound` cross-checks the two.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import InvalidArgument
from .qcore import QLike, as_qparam, bracket

SELF_CHECK_TOL = 1e-12


class TheoremId(str, Enum):
    T22 = "T22"
    T23 = "T23"
    T32 = "T32"
    T31 = "T31"
    AuxA = "AuxA"  # |a_2 - a_4|
    AuxB = "AuxB"  # |a_2^2 - 2 a_3^2 + a_2 a_4|

    @classmethod
    def parse(cls, name: "str | TheoremId") -> "TheoremId":
        if isinstance(name, cls):
            return name
        for tid in cls:
            if tid.value.lower() == str(name).lower():
                return tid
        raise InvalidArgument(f"unknown theorem id {name!r}")


# Values as q -> 1 (the classical class of functions with Re f' > 0).
CLASSICAL_LIMITS = {
    TheoremId.T22: 5.0 / 9.0,
    TheoremId.T23: 4.0 / 9.0,
    TheoremId.T32: 4.0 / 9.0,
    TheoremId.T31: 13.0 / 9.0,
    TheoremId.AuxA: 0.5,
    TheoremId.AuxB: 8.0 / 9.0,
}


def _printed(tid: TheoremId, q: float) -> float:
    if tid is TheoremId.T22:
        return 4 * q**2 * (q**2 + 2 * q + 2) / (1 + 2 * q + 2 * q**2 + q**3) ** 2
    if tid in (TheoremId.T23, TheoremId.T32):
        return 16 * q**2 / ((1 + q + q**2 + q**3) * (1 + q + q**2) ** 2)
    if tid is TheoremId.T31:
        return 1 + 4 / (1 + q + q**2) ** 2
    if tid is TheoremId.AuxA:
        return 2 * q**2 / (1 + q + q**2 + q**3)
    return 8 / (1 + q + q**2) ** 2


def bound_via_brackets(tid: "TheoremId | str", qp: QLike) -> float:
    tid = TheoremId.parse(tid)
    qp = as_qparam(qp)
    q = qp.q
    b2, b3, b4 = bracket(qp, 2), bracket(qp, 3), bracket(qp, 4)
    if tid is TheoremId.T22:
        return 4 / b2**2 - 4 / b3**2
    if tid in (TheoremId.T23, TheoremId.T32):
        return (2 * q**2 / b4) * (8 / b3**2)
    if tid is TheoremId.T31:
        return 1 + 4 / b3**2
    if tid is TheoremId.AuxA:
        return 2 * q**2 / b4
    return 8 / b3**2


def bound(tid: "TheoremId | str", qp: QLike) -> float:
    """The closed-form bound for ``tid`` at ``q``."""
    tid = TheoremId.parse(tid)
    qp = as_qparam(qp)
    val = _printed(tid, qp.q)
    alt = bound_via_brackets(tid, qp)
    if abs(val - alt) > SELF_CHECK_TOL * max(1.0, abs(val)):
        raise AssertionError(f"{tid.value}: printed and bracket forms disagree ({val!r} vs {alt!r})")
    return val


def proof_bound_t23(qp: QLike) -> float:
    """``4 / [3]_q^2``, the value the T_2(3) argument actually reaches.

    It differs from ``bound(T23, q)`` for every ``q < 1``.
    """
    return 4 / bracket(qp, 3) ** 2


def objective_F(p, t, qp: QLike):
    """Majorant of ``|a_3^2 - a_2^2|`` with ``p_1 = p`` and ``|x| = t``."""
    qp = as_qparam(qp)
    b2, b3 = bracket(qp, 2), bracket(qp, 3)
    big_p = 4 - p * p
    return (np.abs(p**4 / (4 * b3**2) - p**2 / b2**2)
            + t * p**2 * big_p / (2 * b3**2)
            + t**2 * big_p**2 / (4 * b3**2))


def objective_G(p, t, qp: QLike):
    """Majorant of ``|a_4^2 - a_3^2|`` as a quartic in ``t = |x|``.

    Coefficients are kept exactly as stated, including groupings that do
    not follow from expanding ``|a_4^2 - a_3^2|``.
    """
    qp = as_qparam(qp)
    s3, s4 = bracket(qp, 3) ** 2, bracket(qp, 4) ** 2
    P = 4 - p * p
    P2 = P * P
    c4 = p**2 * P2 / (4 * s4) + P2 / s4 - p * P2 / s4
    c3 = p**2 * P2 / s4 - 2 * p * P2 / s4
    c2 = (p**2 * P2 / s4 - 2 * P2 / s4 + P2 / s3
          + p**4 * P / (2 * s4) - p**3 * P / s4 + p * P2 / s4)
    c1 = p**4 * P / s4 + 2 * p * P2 / s4 + 2 * p**2 * P / s3
    c0 = P2 / s4 + p**3 * P / s4 + np.abs(p**6 / (4 * s4) - p**4 / s3)
    return 0.25 * (c4 * t**4 + c3 * t**3 + c2 * t**2 + c1 * t + c0)


def objective_t31(p, qp: QLike):
    """Majorant of ``|T_3(1)|`` over ``|x| <= 1`` for fixed ``p_1 = p``."""
    qp = as_qparam(qp)
    b2, b3 = bracket(qp, 2), bracket(qp, 3)
    c = 1 / (b2**2 * b3) - 1 / (4 * b3**2)
    big_p = 4 - p * p
    return (np.abs(1 + c * p**4 - 2 * p**2 / b2**2)
            + c * p**2 * big_p + big_p**2 / (4 * b3**2))


def monotonicity_violations(objective, qp: QLike, p_grid=None, t_grid=None,
                            tol: float = 0.0) -> list[tuple[float, float, float]]:
    """Places where ``objective(p, ., q)`` decreases along ``t``.

    Returns ``(p, t, drop)`` for every consecutive pair on the grid whose
    value drops by more than ``tol``.
    """
    p_grid = np.linspace(0, 2, 81) if p_grid is None else np.asarray(p_grid, dtype=float)
    t_grid = np.linspace(0, 1, 201) if t_grid is None else np.asarray(t_grid, dtype=float)
    vals = objective(p_grid[:, None], t_grid[None, :], qp)
    drops = vals[:, :-1] - vals[:, 1:]
    bad = np.argwhere(drops > tol)
    return [(float(p_grid[i]), float(t_grid[j]), float(drops[i, j])) for i, j in bad]
