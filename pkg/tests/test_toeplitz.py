from fractions import Fraction

import numpy as np
import pytest

from oracles import cofactor_det, toeplitz_rows
from qtoeplitz.errors import InvalidArgument
from qtoeplitz.qcore import PowerSeries
from qtoeplitz.toeplitz import (ToeplitzSpec, t22, t23, t31, t32, t32_factored, toeplitz_det,
                                toeplitz_matrix)

F = Fraction


def test_identity_cases():
    assert toeplitz_det(ToeplitzSpec(3, 1), {2: 0, 3: 0}) == 1
    assert toeplitz_det(ToeplitzSpec(3, 2), {2: 1, 3: 0, 4: 0}) == 1


def test_two_by_two_extremal():
    exact = F(4, 3) ** 2 - F(8, 7) ** 2
    assert exact == F(208, 441)
    assert toeplitz_det(ToeplitzSpec(2, 2), {2: 4 / 3, 3: 8 / 7}) == pytest.approx(208 / 441, abs=1e-15)
    assert t22(4 / 3, 8 / 7) == pytest.approx(208 / 441, abs=1e-15)


def test_small_forms():
    assert t22(0, 0) == 0
    assert t23(8 / 7, 0) == pytest.approx(64 / 49, abs=1e-15)
    assert t32(1, 0, 0) == 1
    assert t32(0, 1, 0) == 0
    assert t31(0, 0) == 1
    assert t31(1, 1) == 0


def test_t31_imaginary_a3():
    a3 = 2j * 4 / 7  # p_2 = 2i over [3]_{1/2} = 7/4
    assert t31(0, a3) == pytest.approx(113 / 49, abs=1e-14)


def test_t32_extremal_coefficients_both_forms():
    a2, a3, a4 = F(4, 3), F(8, 7), F(16, 15)
    exact = (a2 - a4) * (a2 * a2 + a2 * a4 - 2 * a3 * a3)
    assert exact == cofactor_det(toeplitz_rows({2: a2, 3: a3, 4: a4}, 2, 3))
    assert t32(4 / 3, 8 / 7, 16 / 15) == pytest.approx(float(exact), abs=1e-14)


def test_t32_detects_inconsistent_factorization(monkeypatch):
    import qtoeplitz.toeplitz as tp
    monkeypatch.setattr(tp, "t32_factored", lambda a2, a3, a4: 0.0)
    with pytest.raises(AssertionError):
        tp.t32(1.0, 0.5, 0.2)


def test_missing_coefficients():
    with pytest.raises(InvalidArgument):
        toeplitz_det(ToeplitzSpec(3, 2), {2: 1, 3: 0})


def test_a1_convention():
    # a_1 is supplied implicitly and must be 1 when given
    assert toeplitz_det(ToeplitzSpec(2, 1), {2: 0.5}) == pytest.approx(0.75)
    with pytest.raises(InvalidArgument):
        toeplitz_det(ToeplitzSpec(2, 1), {1: 2, 2: 0.5})


def test_accessors_agree():
    f = PowerSeries.normalized([0.3, -0.2j, 0.1, 0.05])
    spec = ToeplitzSpec(4, 2)
    seq = list(f.coeffs)
    ref = toeplitz_det(spec, f)
    assert toeplitz_det(spec, seq) == ref
    assert toeplitz_det(spec, dict(enumerate(seq))) == ref
    assert toeplitz_det(spec, lambda k: seq[k]) == ref


@pytest.mark.parametrize("m, n", [(0, 1), (1, 0)])
def test_spec_domain(m, n):
    with pytest.raises(InvalidArgument):
        ToeplitzSpec(m, n)


def test_matrix_symmetric():
    rng = np.random.default_rng(0)
    for m in range(1, 6):
        a = {k: complex(*rng.normal(size=2)) for k in range(2, 2 + m)}
        mat = toeplitz_matrix(ToeplitzSpec(m, 2), a)
        assert np.array_equal(mat, mat.T)


def test_against_cofactor_expansion():
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(1000):
        m = int(rng.integers(1, 6))
        n = int(rng.integers(1, 4))
        a = {k: complex(*rng.uniform(-1, 1, 2)) for k in range(2, n + m)}
        a[1] = 1
        ref = cofactor_det(toeplitz_rows(a, n, m))
        got = toeplitz_det(ToeplitzSpec(m, n), a)
        worst = max(worst, abs(got - ref) / max(abs(ref), 1e-300))
    assert worst < 1e-10


def test_specialized_forms_agree():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        a2, a3, a4 = (complex(*rng.uniform(-2, 2, 2)) for _ in range(3))
        coeffs = {1: 1, 2: a2, 3: a3, 4: a4}
        assert abs(t22(a2, a3) - toeplitz_det(ToeplitzSpec(2, 2), coeffs)) < 1e-12
        assert abs(t23(a3, a4) - toeplitz_det(ToeplitzSpec(2, 3), coeffs)) < 1e-12
        assert abs(t32(a2, a3, a4) - cofactor_det(toeplitz_rows(coeffs, 2, 3))) < 1e-12
        assert abs(t31(a2, a3) - cofactor_det(toeplitz_rows(coeffs, 1, 3))) < 1e-12


def test_vectorized_forms():
    a2 = np.array([1, 0, 4 / 3])
    a3 = np.array([0, 1, 8 / 7])
    a4 = np.array([0, 0, 16 / 15])
    np.testing.assert_allclose(t32(a2, a3, a4), t32_factored(a2, a3, a4), atol=1e-14)
