import numpy as np
import pytest

from ymcm import su2
from ymcm.errors import InvalidArgument
from ymcm.haar import (
    QuadratureSpec,
    euler_grid,
    haar_tensor,
    integrate_class,
    integrate_group,
    integrate_group_with_error,
    projector_closed_form,
    verify_identity,
)
from ymcm.lie import SU2, SU3, character, dominant_weights_below
from ymcm.tensor import singlet_vector


def test_normalization():
    for n in (4, 12, 24):
        _, w = euler_grid(n)
        assert w.sum() == pytest.approx(1.0, abs=1e-12)
    for rs in (SU2, SU3):
        assert integrate_class(lambda q: np.ones(len(q)), rs).real == pytest.approx(1.0, abs=1e-12)


def test_grid_is_unitary():
    g, _ = euler_grid(8)
    assert np.allclose(g @ np.conj(np.swapaxes(g, -1, -2)), np.eye(2), atol=1e-13)
    assert np.allclose(np.linalg.det(g), 1, atol=1e-13)


def test_integrate_group_examples():
    spec = QuadratureSpec("euler", 12)
    assert integrate_group(lambda h: np.ones(len(h)), spec) == pytest.approx(1.0)
    chi1 = lambda h: su2.characters(h, 1)[:, 1]  # noqa: E731
    assert integrate_group(lambda h: chi1(h) * np.conj(chi1(h)), spec) == pytest.approx(1.0, abs=1e-12)
    for n in (4, 8, 16):
        val = integrate_group(lambda h: su2.group_matrix(1, h)[:, 0, 0], QuadratureSpec("euler", n))
        assert abs(val) < 1e-14


def test_integrate_class_orthonormality():
    spec = QuadratureSpec("torus-gauss", 32)
    for m in range(5):
        for mp in range(5):
            val = integrate_class(lambda q: character(SU2, m, q) * np.conj(character(SU2, mp, q)), SU2, spec)
            assert val == pytest.approx(float(m == mp), abs=1e-12)


def test_class_and_group_integration_agree():
    rng = np.random.default_rng(4)
    for _ in range(10):
        c = rng.normal(size=6)
        fq = lambda q: sum(c[m] * character(SU2, m, q) for m in range(6)) ** 2  # noqa: E731
        fg = lambda h: (su2.characters(h, 5) @ c) ** 2  # noqa: E731
        a = integrate_class(fq, SU2)
        b = integrate_group(fg, QuadratureSpec("euler", 16))
        assert a == pytest.approx(b, abs=1e-10)


def test_integrate_group_with_error():
    spec = QuadratureSpec("euler", 20)
    val, err = integrate_group_with_error(lambda h: np.exp(np.real(su2.characters(h, 1)[:, 1])), spec)
    # the coarse-vs-fine estimate must bound the true error up to a safety factor
    fine = integrate_group(lambda h: np.exp(np.real(su2.characters(h, 1)[:, 1])), QuadratureSpec("euler", 40))
    assert abs(val - fine) <= max(err, 1e-14) * 10


def test_nominal_degree():
    # exact for characters of degree below the resolution, not at it
    for n in (4, 6, 8):
        spec = QuadratureSpec("euler", n)
        for m in range(1, n):
            assert abs(integrate_group(lambda h: su2.characters(h, m)[:, m], spec)) < 1e-13
        assert abs(integrate_group(lambda h: su2.characters(h, n)[:, n], spec)) > 0.1


def test_convergence_is_faster_than_geometric():
    f = lambda h: np.exp(np.real(su2.characters(h, 1)[:, 1]))  # noqa: E731
    ref = integrate_group(f, QuadratureSpec("euler", 48))
    errs = [abs(integrate_group(f, QuadratureSpec("euler", n)) - ref) for n in (4, 6, 8, 10)]
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    assert all(r > 10 for r in ratios)
    assert ratios == sorted(ratios)


@pytest.mark.parametrize("lam,mu", [(0, 0), (1, 1), (1, 2), (2, 2), (3, 3)])
def test_integ2(lam, mu):
    assert verify_identity("integ-2", (lam, mu), QuadratureSpec("euler", 24)).residual <= 1e-6


def test_integ2_closed_form_explicit():
    T = haar_tensor([1, 1], QuadratureSpec("euler", 12), inverse_first=True)
    exact = np.zeros((2, 2, 2, 2))
    for i in range(2):
        for j in range(2):
            exact[i, j, j, i] = 0.5
    assert np.allclose(T, exact, atol=1e-12)


def test_integ3_reduces_to_integ2():
    spec = QuadratureSpec("euler", 16)
    T3 = haar_tensor([1, 1, 0], spec, inverse_first=True)
    T2 = haar_tensor([1, 1], spec, inverse_first=True)
    assert np.allclose(T3.reshape(T2.shape), T2, atol=1e-12)
    assert verify_identity("integ-3", (1, 1, 0), spec).residual <= 1e-6
    assert verify_identity("integ-3", (2, 1, 1), spec).residual <= 1e-6


def test_projector_singlet():
    spec = QuadratureSpec("euler", 12)
    T = haar_tensor([1, 1], spec)  # [a1, b1, a2, b2]
    P = np.transpose(T, (0, 2, 1, 3)).reshape(4, 4)
    s = singlet_vector(1)
    assert np.allclose(P, np.outer(s, s.conj()), atol=1e-12)
    assert np.allclose(projector_closed_form([(1, False), (1, False)]), np.outer(s, s.conj()), atol=1e-12)
    assert verify_identity("projector", (1, 1), spec).residual <= 1e-6


def test_verify_identity_errors():
    with pytest.raises(InvalidArgument):
        verify_identity("integ-2", (1,))
    with pytest.raises(InvalidArgument):
        verify_identity("integ-3", (1, 1))
    with pytest.raises(InvalidArgument):
        verify_identity("integ-2", (-1, 1))
    with pytest.raises(InvalidArgument):
        verify_identity("nonsense", (1, 1))
    with pytest.raises(InvalidArgument):
        QuadratureSpec("simpson", 10)


def test_report_shape():
    r = verify_identity("integ-2", (1, 1), QuadratureSpec("euler", 8))
    d = r.to_dict()
    assert set(d) >= {"suite", "check", "config", "step", "residual", "tolerance", "pass"}
    assert d["pass"]


def test_su3_class_quadrature_orthonormal():
    for lam in dominant_weights_below(SU3, 8.0):
        val = integrate_class(lambda q: np.abs(character(SU3, lam, q)) ** 2, SU3)
        assert val.real == pytest.approx(1.0, abs=1e-10)
