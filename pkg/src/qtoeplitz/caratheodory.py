"""Members of the Caratheodory class P and their coefficient data.

Two generators are provided. :class:`MoebiusMix` is a finite Herglotz
mixture of kernels ``(1 + e^{it} z) / (1 - e^{it} z)``; positivity of the
real part holds by construction and ``p_1`` may be any complex number
with ``|p_1| <= 2``. :class:`Lemma2Triple` is the ``(p, x, z)``
parametrization of ``(p_1, p_2, p_3)`` with ``p_1 = p`` real in ``[0, 2]``.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidArgument

WEIGHT_SUM_TOL = 1e-12
LEMMA1_TOL = 1e-9
DEGENERACY_TOL = 1e-12
MAX_RANDOM_ATOMS = 5


@dataclass(frozen=True)
class MoebiusMix:
    """Convex combination of Moebius kernels, stored as ``(weight, angle)`` atoms."""

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        atoms = tuple((float(w), float(t)) for w, t in self.atoms)
        if not atoms:
            raise InvalidArgument("a Moebius mixture needs at least one atom")
        if any(not (math.isfinite(w) and math.isfinite(t)) for w, t in atoms):
            raise InvalidArgument("atom weights and angles must be finite")
        if any(w < 0 for w, _ in atoms):
            raise InvalidArgument("atom weights must be nonnegative")
        total = math.fsum(w for w, _ in atoms)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidArgument(f"atom weights must sum to 1, got {total!r}")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def from_arrays(cls, weights: Sequence[float], angles: Sequence[float]) -> "MoebiusMix":
        """Build a mixture, rescaling the weights onto the simplex."""
        w = np.asarray(weights, dtype=float)
        if w.shape != np.shape(angles) or w.ndim != 1:
            raise InvalidArgument("weights and angles must be 1-d and of equal length")
        if np.any(w < 0) or w.sum() <= 0:
            raise InvalidArgument("weights must be nonnegative with a positive sum")
        w = w / w.sum()
        # Push the rounding residue onto the largest weight so the sum is 1.
        k = int(np.argmax(w))
        w[k] = 1.0 - (math.fsum(w) - w[k])
        return cls(tuple(zip(w.tolist(), np.asarray(angles, dtype=float).tolist())))

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.atoms])

    @property
    def angles(self) -> np.ndarray:
        return np.array([t for _, t in self.atoms])

    def __call__(self, z):
        """Value of ``p(z)`` for ``|z| < 1``; ``z`` may be an array."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for w, t in self.atoms:
            u = cmath.exp(1j * t) * z
            out = out + w * (1 + u) / (1 - u)
        return out if out.ndim else complex(out)

    def rotated(self, phi: float) -> "MoebiusMix":
        """The mixture for ``p(e^{i phi} z)``, whose coefficients are ``p_n e^{i n phi}``."""
        return MoebiusMix(tuple((w, t + phi) for w, t in self.atoms))

    def to_dict(self) -> dict:
        return {"atoms": [{"weight": w, "angle": t} for w, t in self.atoms]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "MoebiusMix":
        try:
            return cls(tuple((a["weight"], a["angle"]) for a in data["atoms"]))
        except (KeyError, TypeError) as exc:
            raise InvalidArgument(f"malformed Moebius mixture: {exc!r}") from None

    @classmethod
    def from_json(cls, text: str) -> "MoebiusMix":
        return cls.from_dict(json.loads(text))


def mix_coefficients(m: MoebiusMix, count: int) -> list[complex]:
    """Taylor coefficients ``p_1..p_count``, ``p_n = 2 sum w_k e^{i n t_k}``."""
    if count < 1:
        raise InvalidArgument("count must be positive")
    n = np.arange(1, count + 1)[:, None]
    vals = 2.0 * (np.exp(1j * n * m.angles[None, :]) @ m.weights)
    return [complex(v) for v in vals]


def random_mix(rng: np.random.Generator, max_atoms: int = MAX_RANDOM_ATOMS) -> MoebiusMix:
    """Random mixture: ``K`` uniform on ``1..max_atoms``, flat Dirichlet weights, uniform angles."""
    k = int(rng.integers(1, max_atoms + 1))
    weights = rng.dirichlet(np.ones(k))
    angles = rng.uniform(0.0, 2.0 * math.pi, size=k)
    return MoebiusMix.from_arrays(weights, angles)


def sample_mixes(seed: int, count: int, max_atoms: int = MAX_RANDOM_ATOMS) -> list[MoebiusMix]:
    rng = np.random.default_rng(seed)
    return [random_mix(rng, max_atoms) for _ in range(count)]


@dataclass(frozen=True)
class Lemma2Triple:
    """Parameters ``p in [0, 2]``, ``|x| <= 1``, ``|z| <= 1``."""

    p: float
    x: complex
    z: complex

    def __post_init__(self) -> None:
        p, x, z = float(self.p), complex(self.x), complex(self.z)
        if not 0.0 <= p <= 2.0:
            raise InvalidArgument(f"p must lie in [0, 2], got {p!r}")
        if abs(x) > 1.0 + DEGENERACY_TOL or abs(z) > 1.0 + DEGENERACY_TOL:
            raise InvalidArgument("x and z must lie in the closed unit disk")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    @property
    def P_aux(self) -> float:
        return 4.0 - self.p * self.p

    @property
    def R_aux(self) -> complex:
        return (1.0 - abs(self.x) ** 2) * self.z


def lemma2_map(p, x, z):
    """Vectorized ``(p, x, z) -> (p_1, p_2, p_3)``; accepts numpy arrays."""
    big_p = 4.0 - p * p
    p2 = (p * p + x * big_p) / 2.0
    p3 = (p**3 + 2.0 * big_p * p * x - p * big_p * x * x
          + 2.0 * big_p * (1.0 - np.abs(x) ** 2) * z) / 4.0
    return p, p2, p3


def lemma2_coefficients(t: Lemma2Triple) -> tuple[complex, complex, complex]:
    p1, p2, p3 = lemma2_map(t.p, t.x, t.z)
    return complex(p1), complex(p2), complex(p3)


@dataclass(frozen=True)
class Lemma2Recovery:
    """Inverse of the ``(p, x, z)`` map; ``None`` marks a degenerate component."""

    p: float
    x: Optional[complex]
    z: Optional[complex]
    x_degenerate: bool
    z_degenerate: bool

    def triple(self) -> Lemma2Triple:
        if self.x is None or self.z is None:
            raise InvalidArgument("recovery is partial; no full triple available")
        return Lemma2Triple(self.p, self.x, self.z)


def recover_lemma2(p1: complex, p2: complex, p3: complex,
                   tol: float = DEGENERACY_TOL) -> Lemma2Recovery:
    """Solve for ``x`` and ``z`` given ``(p_1, p_2, p_3)`` with real ``p_1 in [0, 2]``.

    ``x`` is undetermined when ``p_1 = 2`` and ``z`` when ``|x| = 1``; those
    strata hold the extremal functions and are reported rather than raised.
    """
    p1 = complex(p1)
    p = p1.real
    if abs(p1.imag) > tol or not 0.0 <= p <= 2.0:
        raise InvalidArgument(f"p_1 must be real in [0, 2], got {p1!r}")
    big_p = 4.0 - p * p
    if big_p <= tol:
        return Lemma2Recovery(p, None, None, True, True)
    x = (2.0 * complex(p2) - p * p) / big_p
    one_minus = 1.0 - abs(x) ** 2
    if one_minus <= tol:
        return Lemma2Recovery(p, x, None, False, True)
    num = 4.0 * complex(p3) - p**3 - 2.0 * big_p * p * x + p * big_p * x * x
    return Lemma2Recovery(p, x, num / (2.0 * big_p * one_minus), False, False)


@dataclass
class Lemma1Report:
    ok: bool
    moduli: list[tuple[int, float, bool]] = field(default_factory=list)
    fekete: Optional[tuple[float, float, bool]] = None

    def __bool__(self) -> bool:
        return self.ok


def check_lemma1(coeffs: Sequence[complex], tol: float = LEMMA1_TOL) -> Lemma1Report:
    """Check ``|p_n| <= 2`` and ``|p_2 - p_1^2/2| <= 2 - |p_1|^2/2``.

    ``coeffs`` starts at ``p_1``. Each inequality is reported as
    ``(lhs, rhs, holds)``; moduli entries carry the index ``n``.
    """
    if len(coeffs) == 0:
        raise InvalidArgument("at least p_1 is required")
    c = [complex(v) for v in coeffs]
    moduli = [(n, abs(v), abs(v) <= 2.0 + tol) for n, v in enumerate(c, start=1)]
    fekete = None
    if len(c) >= 2:
        lhs = abs(c[1] - c[0] ** 2 / 2.0)
        rhs = 2.0 - abs(c[0]) ** 2 / 2.0
        fekete = (lhs, rhs, lhs <= rhs + tol)
    ok = all(m[2] for m in moduli) and (fekete is None or fekete[2])
    return Lemma1Report(ok, moduli, fekete)
