"""Numerical maximization of coefficient functionals over the class P.

Every point the search evaluates is an admissible Caratheodory coefficient
triple, so ``max_found`` is a certified lower bound on the supremum over
R(q). A closed-form bound below ``max_found`` is therefore refuted; one
that ``max_found`` meets is at least not contradicted, and sharp when an
evaluated point attains it.

Two parametrizations are searched:

``lemma2``
    ``p_1 = p`` in ``[0, 2]`` with ``x``, ``z`` in the closed unit disk
    (optionally with ``p_1`` rotated by ``e^{i phi}``). Every functional is
    a polynomial in ``a_4``, which is affine and holomorphic in ``z``, so
    by the maximum modulus principle ``|z| = 1`` loses nothing and only
    ``arg z`` is searched.
``mix``
    Moebius mixtures with up to five atoms. With ``restrict_p_real`` the
    mixture is rotated so that ``p_1 >= 0``.

The coarse stage scores a tensor grid in fixed-size chunks. Chunks are
reduced to their best ``TOP_K`` points with ties broken on the flat grid
index, which follows lexicographic parameter order, so the reduction gives
the same answer in any evaluation order or worker count. The best points
are then polished by compass search with step halving.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from . import __version__
from .bounds import TheoremId, bound, proof_bound_t23
from .caratheodory import (Lemma2Triple, MoebiusMix, check_lemma1, lemma2_map,
                           mix_coefficients)
from .errors import InvalidArgument, NoKnownWitness
from .qcore import QLike, as_qparam
from .rqclass import a234
from .toeplitz import t22, t23, t31, t32

TOP_K = 16
VERDICT_TOL = 1e-6
TWO_PI = 2.0 * math.pi
# below this |p_1| the rotation angle is rounding noise
P1_ZERO = 1e-12

SHARP = "SHARP"
HOLDS_NOT_SHARP = "HOLDS_NOT_SHARP"
VIOLATED = "VIOLATED"

USES_P3 = frozenset({TheoremId.T23, TheoremId.T32, TheoremId.AuxA, TheoremId.AuxB})


@dataclass(frozen=True)
class SearchConfig:
    mode: str = "lemma2"
    grid: int = 48
    refine_iters: int = 400
    seed: int = 0
    tol: float = 1e-8
    restrict_p_real: bool = True
    workers: int = 1
    # Per-axis grid size is lowered when grid**dim would exceed this.
    max_grid_points: int = 6_000_000
    # Random mixtures scored per atom count K = 3..5 in mix mode.
    mix_samples: int = 20_000

    def __post_init__(self) -> None:
        if self.mode not in ("lemma2", "mix"):
            raise InvalidArgument(f"mode must be 'lemma2' or 'mix', got {self.mode!r}")
        if self.grid < 8:
            raise InvalidArgument("grid must be at least 8")
        if self.refine_iters < 0:
            raise InvalidArgument("refine_iters must be nonnegative")
        if not self.tol > 0:
            raise InvalidArgument("tol must be positive")
        if self.seed < 0:
            raise InvalidArgument("seed must be an unsigned integer")
        if self.workers < 1:
            raise InvalidArgument("workers must be at least 1")


def functional_array(tid: TheoremId, p1, p2, p3, qp: QLike):
    """``|functional|`` evaluated elementwise on coefficient arrays."""
    a2, a3, a4 = a234(p1, p2, p3, qp)
    if tid is TheoremId.T22:
        v = t22(a2, a3)
    elif tid is TheoremId.T23:
        v = t23(a3, a4)
    elif tid is TheoremId.T32:
        v = t32(a2, a3, a4, check=False)
    elif tid is TheoremId.T31:
        v = t31(a2, a3, check=False)
    elif tid is TheoremId.AuxA:
        v = a2 - a4
    else:
        v = a2 * a2 - 2 * a3 * a3 + a2 * a4
    return np.abs(v)


def functional_value(theorem: "TheoremId | str", triple: Sequence[complex], qp: QLike) -> float:
    """The functional for ``theorem`` at ``(p_1, p_2, p_3)``.

    The triple must satisfy the coefficient inequalities of the class P.
    """
    tid = TheoremId.parse(theorem)
    if len(triple) != 3:
        raise InvalidArgument("expected (p_1, p_2, p_3)")
    report = check_lemma1(triple)
    if not report.ok:
        raise InvalidArgument(f"triple violates the class-P coefficient bounds: {report}")
    p1, p2, p3 = (complex(c) for c in triple)
    tid_val = functional_array(tid, np.complex128(p1), np.complex128(p2), np.complex128(p3), qp)
    if tid is TheoremId.T32:
        # scalar call keeps the factored-form self-check
        a2, a3, a4 = a234(p1, p2, p3, qp)
        t32(a2, a3, a4)
    elif tid is TheoremId.T31:
        a2, a3, _ = a234(p1, p2, p3, qp)
        t31(a2, a3)
    return float(tid_val)


# --------------------------------------------------------------------------
# parameter spaces


@dataclass
class _Space:
    """A box of real parameters with periodic angle coordinates."""

    names: tuple[str, ...]
    lower: np.ndarray
    upper: np.ndarray
    periodic: np.ndarray
    steps: np.ndarray  # initial compass step per coordinate
    triples: Callable[[np.ndarray], tuple]  # (n, dim) -> (p1, p2, p3)
    record: Callable[[np.ndarray], dict]

    @property
    def dim(self) -> int:
        return len(self.names)

    def project(self, x: np.ndarray) -> np.ndarray:
        return np.where(self.periodic, x, np.clip(x, self.lower, self.upper))

    def canonical(self, x: np.ndarray) -> np.ndarray:
        return np.where(self.periodic, np.mod(x, TWO_PI), x)


def _grid_axis(lo: float, hi: float, n: int, periodic: bool) -> np.ndarray:
    if periodic:
        return TWO_PI * np.arange(n) / n
    return np.linspace(lo, hi, n)


def _lemma2_space(tid: TheoremId, restrict: bool) -> _Space:
    names = ["p", "abs_x", "arg_x"]
    if tid in USES_P3:
        names.append("arg_z")
    if not restrict:
        names.append("phi")
    lower = np.array([0.0 if n in ("p", "abs_x") else -np.inf for n in names])
    upper = np.array([2.0 if n == "p" else 1.0 if n == "abs_x" else np.inf for n in names])
    periodic = np.array([n.startswith("arg") or n == "phi" for n in names])
    cols = {n: i for i, n in enumerate(names)}

    def unpack(x: np.ndarray):
        p = x[:, cols["p"]]
        xv = x[:, cols["abs_x"]] * np.exp(1j * x[:, cols["arg_x"]])
        zv = np.exp(1j * x[:, cols["arg_z"]]) if "arg_z" in cols else np.zeros_like(xv)
        phi = x[:, cols["phi"]] if "phi" in cols else None
        return p, xv, zv, phi

    def triples(x: np.ndarray):
        p, xv, zv, phi = unpack(x)
        p1, p2, p3 = lemma2_map(p.astype(complex), xv, zv)
        if phi is not None:
            e = np.exp(1j * phi)
            p1, p2, p3 = p1 * e, p2 * e * e, p3 * e**3
        return p1, p2, p3

    def record(x: np.ndarray) -> dict:
        p, xv, zv, phi = unpack(x[None, :])
        t = Lemma2Triple(min(max(float(p[0]), 0.0), 2.0), complex(xv[0]), complex(zv[0]))
        out = {"p": t.p, "x": _cpair(t.x), "z": _cpair(t.z)}
        if phi is not None:
            out["phi"] = float(phi[0])
        return out

    return _Space(tuple(names), lower, upper, periodic, np.zeros(len(names)), triples, record)


def _mix_weights(u: np.ndarray) -> np.ndarray:
    s = u.sum(axis=1, keepdims=True)
    k = u.shape[1]
    return np.where(s > 0, u / np.where(s > 0, s, 1.0), 1.0 / k)


def _normalizing_angle(p1):
    """Rotation taking ``p_1`` to the nonnegative axis; zero when ``p_1`` vanishes."""
    return np.where(np.abs(p1) > P1_ZERO, np.angle(p1), 0.0)


def _mix_coeffs(u: np.ndarray, theta: np.ndarray, restrict: bool):
    w = _mix_weights(u)
    p = [2.0 * np.sum(w * np.exp(1j * n * theta), axis=1) for n in (1, 2, 3)]
    if restrict:
        phi = _normalizing_angle(p[0])
        p = [c * np.exp(-1j * n * phi) for n, c in zip((1, 2, 3), p)]
        p[0] = np.abs(p[0]) + 0j
    return tuple(p)


def _mix_space(k: int, restrict: bool) -> _Space:
    names = tuple([f"u{i}" for i in range(k)] + [f"theta{i}" for i in range(k)])
    lower = np.array([0.0] * k + [-np.inf] * k)
    upper = np.array([1.0] * k + [np.inf] * k)
    periodic = np.array([False] * k + [True] * k)

    def triples(x: np.ndarray):
        return _mix_coeffs(x[:, :k], x[:, k:], restrict)

    def record(x: np.ndarray) -> dict:
        return _mix_record(x[:k], x[k:], restrict).to_dict()

    return _Space(names, lower, upper, periodic, np.zeros(2 * k), triples, record)


def _mix_record(u: np.ndarray, theta: np.ndarray, restrict: bool) -> MoebiusMix:
    w = _mix_weights(u[None, :])[0]
    theta = np.asarray(theta, dtype=float)
    if restrict:
        theta = theta - _normalizing_angle(2.0 * np.sum(w * np.exp(1j * theta)))
    keep = w > 0
    return MoebiusMix.from_arrays(w[keep], np.mod(theta[keep], TWO_PI))


# --------------------------------------------------------------------------
# coarse stage


@dataclass
class _Candidates:
    values: np.ndarray
    params: np.ndarray  # (n, dim)
    order: np.ndarray  # global tie-break key


def _top_k(values: np.ndarray, key: np.ndarray, k: int) -> np.ndarray:
    """Positions of the ``k`` largest values, ties broken by smallest ``key``."""
    if values.size <= k:
        return np.lexsort((key, -values))
    part = np.argpartition(-values, k - 1)[:k]
    threshold = values[part].min()
    cand = np.flatnonzero(values >= threshold)
    sel = cand[np.lexsort((key[cand], -values[cand]))]
    return sel[:k]


def _tensor_chunks(axes: list[np.ndarray]) -> Iterator[tuple[int, np.ndarray]]:
    """Slices of the tensor grid, one per value of the first axis."""
    rest = np.meshgrid(*axes[1:], indexing="ij")
    rest = np.stack([r.ravel() for r in rest], axis=1)
    n_rest = rest.shape[0]
    for i, v in enumerate(axes[0]):
        block = np.empty((n_rest, len(axes)))
        block[:, 0] = v
        block[:, 1:] = rest
        yield i * n_rest, block


def _score_block(space: _Space, tid: TheoremId, qp, offset: int, block: np.ndarray):
    vals = functional_array(tid, *space.triples(block), qp)
    key = offset + np.arange(block.shape[0])
    sel = _top_k(vals, key, TOP_K)
    return vals[sel], block[sel], key[sel]


def _reduce(parts: list[tuple]) -> _Candidates:
    vals = np.concatenate([p[0] for p in parts])
    params = np.concatenate([p[1] for p in parts])
    keys = np.concatenate([p[2] for p in parts])
    sel = _top_k(vals, keys, TOP_K)
    return _Candidates(vals[sel], params[sel], keys[sel])


def _run_blocks(space, tid, qp, blocks, workers: int) -> list[tuple]:
    fn = lambda ob: _score_block(space, tid, qp, *ob)  # noqa: E731
    if workers == 1:
        return [fn(ob) for ob in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, blocks))


def _axis_count(cfg: SearchConfig, dim: int) -> int:
    n = cfg.grid
    while n > 8 and n**dim > cfg.max_grid_points:
        n -= 1
    return n


# --------------------------------------------------------------------------
# refinement


@dataclass
class CompassResult:
    x: np.ndarray
    value: float
    trace: list[float]
    iterations: int
    converged: bool
    evaluations: int


def compass_search(fun: Callable[[np.ndarray], np.ndarray], x0: np.ndarray, step0: np.ndarray,
                   project: Callable[[np.ndarray], np.ndarray], tol: float,
                   max_iter: int) -> CompassResult:
    """Maximize ``fun`` by coordinate polling with step halving.

    Each iteration polls ``x +- step_i e_i`` for all coordinates and moves to
    the best poll if it improves; otherwise every step is halved. The best
    value never decreases. Converged means all steps dropped below ``tol``.
    """
    x = project(np.asarray(x0, dtype=float))
    f = float(fun(x[None, :])[0])
    step = np.asarray(step0, dtype=float).copy()
    dim = x.size
    trace = [f]
    evals = 1
    it = 0
    while it < max_iter and step.max() >= tol:
        it += 1
        polls = np.repeat(x[None, :], 2 * dim, axis=0)
        idx = np.arange(dim)
        polls[2 * idx, idx] += step
        polls[2 * idx + 1, idx] -= step
        polls = project(polls)
        vals = fun(polls)
        evals += 2 * dim
        j = int(np.argmax(vals))
        if vals[j] > f:
            x, f = polls[j], float(vals[j])
        else:
            step = step * 0.5
        trace.append(f)
    return CompassResult(x, f, trace, it, bool(step.max() < tol), evals)


# --------------------------------------------------------------------------
# reports


def _cpair(c: complex) -> list[float]:
    return [float(c.real), float(c.imag)]


def classify(max_found: float, closed: float) -> str:
    if max_found > closed + VERDICT_TOL:
        return VIOLATED
    if abs(closed - max_found) <= VERDICT_TOL:
        return SHARP
    return HOLDS_NOT_SHARP


@dataclass
class VerificationReport:
    theorem: str
    q: float
    mode: str
    max_found: float
    argmax: dict
    closed_bound: float
    gap: float
    verdict: str
    proof_bound: Optional[float] = None
    proof_verdict: Optional[str] = None
    coarse_max: float = 0.0
    converged: bool = True
    evaluations: int = 0
    config: dict = field(default_factory=dict)
    version: str = __version__
    timestamp: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), indent=2, **kw)


def maximize(theorem: "TheoremId | str", qp: QLike, cfg: SearchConfig = SearchConfig()) -> VerificationReport:
    """Grid search plus compass refinement of ``|functional|`` over P."""
    tid = TheoremId.parse(theorem)
    qp = as_qparam(qp)
    rng = np.random.default_rng(cfg.seed)
    evaluations = 0

    runs: list[tuple[_Space, _Candidates]] = []
    if cfg.mode == "lemma2":
        space = _lemma2_space(tid, cfg.restrict_p_real)
        n = _axis_count(cfg, space.dim)
        axes = [_grid_axis(lo, hi, n, per)
                for lo, hi, per in zip(space.lower, space.upper, space.periodic)]
        space.steps = np.array([(hi - lo) / (n - 1) if not per else TWO_PI / n
                                for lo, hi, per in zip(space.lower, space.upper, space.periodic)])
        runs.append((space, _reduce(_run_blocks(space, tid, qp, _tensor_chunks(axes), cfg.workers))))
        evaluations += n ** space.dim
    else:
        n = cfg.grid
        angles = _grid_axis(0, 0, n, True)
        offset = 0
        for k in range(1, 6):
            space = _mix_space(k, cfg.restrict_p_real)
            space.steps = np.array([1.0 / (n - 1)] * k + [TWO_PI / n] * k)
            if k == 1:
                blocks = [(offset, np.stack([np.ones(n), angles], axis=1))]
            elif k == 2:
                # odd count so the equal split w = 1/2 is on the grid
                w = np.linspace(0.0, 1.0, n + 1 - n % 2)
                t1, t2 = np.meshgrid(angles, angles, indexing="ij")
                blocks = []
                for i, wi in enumerate(w):
                    b = np.empty((n * n, 4))
                    b[:, 0], b[:, 1] = wi, 1.0 - wi
                    b[:, 2], b[:, 3] = t1.ravel(), t2.ravel()
                    blocks.append((offset + i * n * n, b))
            else:
                u = rng.dirichlet(np.ones(k), size=cfg.mix_samples)
                th = rng.uniform(0.0, TWO_PI, size=(cfg.mix_samples, k))
                blocks = [(offset, np.concatenate([u, th], axis=1))]
            size = sum(b.shape[0] for _, b in blocks)
            runs.append((space, _reduce(_run_blocks(space, tid, qp, blocks, cfg.workers))))
            evaluations += size
            offset += size

    # global top-K across spaces, ties on the global key
    pool = [(float(v), int(key), space, params)
            for space, cand in runs
            for v, key, params in zip(cand.values, cand.order, cand.params)]
    pool.sort(key=lambda t: (-t[0], t[1]))
    starts = pool[:TOP_K]
    coarse_max = starts[0][0]

    best_val, best_space, best_x = starts[0][0], starts[0][2], starts[0][3]
    converged = True
    for v0, _, space, x0 in starts:
        fun = lambda x, s=space: functional_array(tid, *s.triples(x), qp)  # noqa: E731
        res = compass_search(fun, x0, space.steps, space.project, cfg.tol, cfg.refine_iters)
        evaluations += res.evaluations
        converged = converged and res.converged
        if res.value > best_val:
            best_val, best_space, best_x = res.value, space, res.x

    closed = bound(tid, qp)
    report = VerificationReport(
        theorem=tid.value,
        q=qp.q,
        mode=cfg.mode,
        max_found=best_val,
        argmax=_argmax_record(best_space, best_x, qp),
        closed_bound=closed,
        gap=closed - best_val,
        verdict=classify(best_val, closed),
        coarse_max=coarse_max,
        converged=converged,
        evaluations=evaluations,
        config=asdict(cfg),
        timestamp=time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    )
    if tid is TheoremId.T23:
        report.proof_bound = proof_bound_t23(qp)
        report.proof_verdict = classify(best_val, report.proof_bound)
    return report


def _argmax_record(space: _Space, x: np.ndarray, qp) -> dict:
    x = space.canonical(np.asarray(x, dtype=float))
    out = {"params": dict(zip(space.names, map(float, x)))}
    out.update(space.record(x))
    p1, p2, p3 = (complex(c[0]) for c in space.triples(x[None, :]))
    a2, a3, a4 = a234(p1, p2, p3, qp)
    out["p_coeffs"] = [_cpair(p1), _cpair(p2), _cpair(p3)]
    out["a_coeffs"] = [_cpair(a2), _cpair(a3), _cpair(a4)]
    return out


# --------------------------------------------------------------------------
# closed-form extremal candidates

_WITNESSES = {
    TheoremId.T22: ((1.0, 0.0),),
    TheoremId.AuxA: ((1.0, 0.0),),
    TheoremId.T23: ((0.5, 0.0), (0.5, math.pi)),
    TheoremId.AuxB: ((0.5, 0.0), (0.5, math.pi)),
    # p_1 = p_3 = 0, p_2 = 2i
    TheoremId.T31: ((0.5, math.pi / 4), (0.5, 5 * math.pi / 4)),
}


def sharpness_witness(theorem: "TheoremId | str", qp: QLike) -> tuple[MoebiusMix, float]:
    """The candidate extremal mixture for ``theorem`` and its functional value."""
    tid = TheoremId.parse(theorem)
    if tid not in _WITNESSES:
        raise NoKnownWitness(f"no single extremal function is known for {tid.value}")
    mix = MoebiusMix(_WITNESSES[tid])
    triple = mix_coefficients(mix, 3)
    return mix, functional_value(tid, triple, qp)
