import cmath
import json
import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import bracket_exact, functionals_exact, printed_bounds_exact
from qtoeplitz.bounds import TheoremId, bound
from qtoeplitz.caratheodory import (Lemma2Triple, check_lemma1, lemma2_coefficients, lemma2_map,
                                    mix_coefficients, sample_mixes)
from qtoeplitz.errors import InvalidArgument, NoKnownWitness
from qtoeplitz.search import (HOLDS_NOT_SHARP, SHARP, VIOLATED, SearchConfig, classify,
                              compass_search, functional_array, functional_value, maximize,
                              sharpness_witness)

HALF = Fraction(1, 2)
B = {n: bracket_exact(HALF, n) for n in (2, 3, 4)}


def exact_value(tid, p1, p2, p3):
    """|functional| at q = 1/2 through the oracle module (complex arithmetic)."""
    a = [complex(p) / float(B[n]) for p, n in ((p1, 2), (p2, 3), (p3, 4))]
    return abs(functionals_exact(*a)[tid])


class TestFunctionalValue:
    def test_koebe_t22(self):
        ex = (2 / B[2]) ** 2 - (2 / B[3]) ** 2
        assert ex == Fraction(208, 441)
        assert functional_value("T22", (2, 2, 2), 0.5) == pytest.approx(208 / 441, abs=1e-15)

    def test_t23_pair(self):
        assert (2 / B[3]) ** 2 == Fraction(64, 49)
        assert functional_value("T23", (0, 2, 0), 0.5) == pytest.approx(64 / 49, abs=1e-15)

    def test_t31_imaginary(self):
        assert 1 + (2 / B[3]) ** 2 == Fraction(113, 49)
        assert functional_value("T31", (0, 2j, 0), 0.5) == pytest.approx(113 / 49, abs=1e-14)

    def test_rejects_non_member(self):
        with pytest.raises(InvalidArgument):
            functional_value("T22", (3, 0, 0), 0.5)
        with pytest.raises(InvalidArgument):
            functional_value("T22", (2, 2), 0.5)

    def test_matches_oracle_on_random_members(self):
        for m in sample_mixes(17, 300):
            trip = mix_coefficients(m, 3)
            for tid in TheoremId:
                assert functional_value(tid, trip, 0.5) == pytest.approx(exact_value(tid.value, *trip), rel=1e-12, abs=1e-14)


class TestWitness:
    @pytest.mark.parametrize("tid, atoms, expected", [
        ("T22", 1, Fraction(208, 441)),
        ("AuxA", 1, Fraction(4, 15)),
        ("T23", 2, Fraction(64, 49)),
        ("AuxB", 2, Fraction(128, 49)),
        ("T31", 2, Fraction(113, 49)),
    ])
    def test_values(self, tid, atoms, expected):
        mix, value = sharpness_witness(tid, 0.5)
        assert len(mix.atoms) == atoms
        assert value == pytest.approx(float(expected), abs=1e-14)
        # the T_2(3) pair attains the proof's 4/[3]^2, not the stated bound
        key = "T23_proof" if tid == "T23" else tid
        assert expected == printed_bounds_exact(HALF)[key]

    def test_t31_witness_coefficients(self):
        mix, _ = sharpness_witness("T31", 0.5)
        p1, p2, p3 = mix_coefficients(mix, 3)
        assert abs(p1) < 1e-14 and abs(p3) < 1e-14 and abs(p2 - 2j) < 1e-14

    def test_t32_unsupported(self):
        with pytest.raises(NoKnownWitness):
            sharpness_witness("T32", 0.5)


def test_classify():
    assert classify(1.0, 1.0 + 5e-7) == SHARP
    assert classify(1.0, 1.1) == HOLDS_NOT_SHARP
    assert classify(1.0 + 2e-6, 1.0) == VIOLATED


@pytest.mark.parametrize("kw", [dict(mode="grid"), dict(grid=4), dict(refine_iters=-1),
                                dict(tol=0.0), dict(seed=-3), dict(workers=0)])
def test_config_validation(kw):
    with pytest.raises(InvalidArgument):
        SearchConfig(**kw)


def test_compass_trace_monotone():
    f = lambda x: -np.sum((x - np.array([0.3, -0.7])) ** 2, axis=1) + np.sin(5 * x[:, 0]) * 0.1
    res = compass_search(f, np.array([1.0, 1.0]), np.array([0.5, 0.5]), lambda x: x, 1e-10, 500)
    assert res.converged
    assert all(b >= a for a, b in zip(res.trace, res.trace[1:]))
    assert res.value >= f(np.array([[0.3, -0.7]]))[0]


def test_compass_respects_bounds():
    f = lambda x: x[:, 0]
    proj = lambda x: np.clip(x, 0.0, 2.0)
    res = compass_search(f, np.array([0.1]), np.array([0.3]), proj, 1e-9, 100)
    assert res.x[0] == 2.0 and res.value == 2.0


def test_t23_discrepancy_at_half():
    rep = maximize("T23", 0.5)
    assert rep.max_found >= 64 / 49 - 1e-6
    assert rep.verdict == VIOLATED
    assert rep.closed_bound == pytest.approx(512 / 735, abs=1e-15)
    assert rep.proof_bound == pytest.approx(64 / 49, abs=1e-15)
    assert rep.proof_verdict == SHARP


@pytest.mark.parametrize("tid", list(TheoremId))
def test_argmax_is_admissible_and_reproduces_value(tid):
    rep = maximize(tid, 0.5)
    trip = [complex(*c) for c in rep.argmax["p_coeffs"]]
    assert check_lemma1(trip).ok
    t = Lemma2Triple(rep.argmax["p"], complex(*rep.argmax["x"]), complex(*rep.argmax["z"]))
    assert np.allclose(lemma2_coefficients(t), trip, atol=1e-14)
    assert exact_value(tid.value, *trip) == pytest.approx(rep.max_found, rel=1e-12)
    assert rep.max_found >= rep.coarse_max


@pytest.mark.parametrize("tid", list(TheoremId))
def test_max_dominates_random_admissible_points(tid):
    # Independent lower bound: random (p, x, z) through the oracle determinants.
    rng = np.random.default_rng(31)
    best = 0.0
    for _ in range(3000):
        t = Lemma2Triple(rng.uniform(0, 2), math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform()),
                         math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform()))
        best = max(best, exact_value(tid.value, *lemma2_coefficients(t)))
    assert maximize(tid, 0.5).max_found >= best - 1e-12


def test_t22_refuted_by_explicit_member():
    # p(z) = (1 + z^2)/(1 - z^2) gives (0, 2, 0) and |T_2(2)| = 4/[3]^2.
    value = (2 / B[3]) ** 2
    assert value == Fraction(64, 49) > printed_bounds_exact(HALF)["T22"]
    rep = maximize("T22", 0.5)
    assert rep.verdict == VIOLATED and rep.max_found >= float(value) - 1e-12


def test_auxa_refuted_by_explicit_member():
    # p(z) = (1 + z^3)/(1 - z^3) gives (0, 0, 2) and |a_2 - a_4| = 2/[4]_q.
    for q in (0.3, 0.5, 0.7, 0.9):
        b4 = 1 + q + q * q + q**3
        assert functional_value("AuxA", (0, 0, 2), q) == pytest.approx(2 / b4, abs=1e-15)
        assert 2 / b4 > bound("AuxA", q) + 1e-6


@pytest.mark.parametrize("q", [0.3, 0.5, 0.7, 0.9])
def test_auxb_within_bound(q):
    rep = maximize("AuxB", q)
    assert rep.max_found <= bound("AuxB", q) + 1e-6
    assert rep.verdict == SHARP


def test_determinism_and_worker_independence():
    cfg = SearchConfig(grid=24, refine_iters=200, seed=5)
    r1 = maximize("T32", 0.4, cfg).to_dict()
    r2 = maximize("T32", 0.4, cfg).to_dict()
    r3 = maximize("T32", 0.4, SearchConfig(grid=24, refine_iters=200, seed=5, workers=3)).to_dict()
    for r in (r1, r2, r3):
        r.pop("timestamp")
        r["config"].pop("workers")
    assert json.dumps(r1) == json.dumps(r2) == json.dumps(r3)


def test_mix_mode_determinism():
    cfg = SearchConfig(mode="mix", grid=16, mix_samples=2000, seed=9)
    a = maximize("AuxA", 0.6, cfg).to_dict()
    b = maximize("AuxA", 0.6, cfg).to_dict()
    a.pop("timestamp"), b.pop("timestamp")
    assert a == b


@pytest.mark.parametrize("tid", ["T22", "T23", "T31"])
@pytest.mark.parametrize("q", [0.3, 0.5, 0.7])
def test_mode_agreement_unrestricted(tid, q):
    lem = maximize(tid, q, SearchConfig(restrict_p_real=False))
    mix = maximize(tid, q, SearchConfig(mode="mix", restrict_p_real=False))
    assert abs(lem.max_found - mix.max_found) < 1e-4


def test_mix_mode_restricted_rotation():
    rep = maximize("T31", 0.5, SearchConfig(mode="mix"))
    assert rep.max_found == pytest.approx(113 / 49, abs=1e-6)
    p1 = complex(*rep.argmax["p_coeffs"][0])
    assert abs(p1.imag) < 1e-12 and p1.real >= -1e-12


@pytest.mark.parametrize("tid", ["T32", "AuxA", "AuxB", "T23"])
def test_unit_circle_dominates_interior_z(tid):
    # p_3 is affine in z, so each |functional| is subharmonic in z
    rng = np.random.default_rng(11)
    circle = np.exp(1j * np.linspace(0, 2 * np.pi, 721))
    for _ in range(200):
        p = rng.uniform(0, 2)
        x = math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
        z_in = 0.99 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
        inner = functional_array(TheoremId(tid), *lemma2_map(p, x, z_in), 0.5)
        rim = functional_array(TheoremId(tid), *lemma2_map(p, x, circle), 0.5).max()
        assert inner <= rim + 1e-9
