import itertools

import numpy as np
import pytest

import oracles
from ymcm import calogero as cm
from ymcm import su2
from ymcm.errors import AdmissibilityError, InvalidArgument, SingularityError
from ymcm.lie import SU2, SU3, character, sample_regular_point
from ymcm.tensor import cg_intertwiner, tensor_decompose


def brute_trace(cfg, theta):
    """Tr over V_{nu_N} of b_1 ... b_N t(theta), contracted right to left as matrices."""
    N = cfg.N
    X = cfg.chain[-1].matrix @ su2.torus_matrix(cfg.sector[-1], theta)
    for i in range(N - 2, -1, -1):
        rest = X.shape[0] // (cfg.sector[i] + 1)
        X = np.kron(cfg.chain[i].matrix, np.eye(rest)) @ X
    d0 = cfg.sector[-1] + 1
    X = X.reshape(d0, -1, d0)
    return np.einsum("asa->s", X)


def test_config_validation():
    with pytest.raises(AdmissibilityError):
        cm.SpinChainConfig((1,), (1,))
    with pytest.raises(InvalidArgument):
        cm.SpinChainConfig((1, 1), (0,))
    cfg = cm.SpinChainConfig((1, 1), (1, 0))
    assert cfg.N == 2 and cfg.dim == 4 and cfg.nu(0) == 0


def test_sector_count_against_tensor_decompose():
    for spins in [(1, 1), (2, 1), (1, 2, 1), (2, 2)]:
        numax = max(m for m in range(20) if cm.c2(m) <= 12.0)
        brute = [
            s
            for s in itertools.product(range(numax + 1), repeat=len(spins))
            if all(tensor_decompose(SU2, s[i - 1], spins[i]).multiplicity(s[i]) for i in range(len(spins)))
        ]
        assert cm.admissible_sectors(spins, 12.0) == brute


def test_trivial_spin_gives_character():
    th = np.linspace(0.2, 2.9, 9)
    for nu in range(5):
        cfg = cm.SpinChainConfig((0,), (nu,))
        assert np.allclose(cm.trace_function(cfg, th)[:, 0], character(SU2, nu, th), atol=1e-12)


@pytest.mark.parametrize("spins,sector", [((1, 1), (1, 0)), ((1, 1), (0, 1)), ((2, 1, 1), (2, 1, 2)), ((1, 2, 1), (1, 1, 2))])
def test_trace_function_brute_force(spins, sector):
    cfg = cm.SpinChainConfig(spins, sector)
    for th in (0.0, 0.4, 2.2):
        assert np.allclose(cm.trace_function(cfg, th), brute_trace(cfg, th), atol=1e-12)


def test_trace_function_group_form_and_gauge_law():
    rng = np.random.default_rng(9)
    cfg = cm.SpinChainConfig((1, 2, 1), (1, 1, 2))
    th = 0.9
    g = cm.torus_point_tuple(3, th)
    assert np.allclose(cm.trace_function_group(cfg, g), cm.trace_function(cfg, th), atol=1e-12)
    gs = su2.random_su2(rng, 3)
    hs = su2.random_su2(rng, 3)
    inv = lambda x: np.conj(np.swapaxes(x, -1, -2))  # noqa: E731
    moved = np.stack([hs[i] @ gs[i] @ inv(hs[(i + 1) % 3]) for i in range(3)])
    act = np.kron(np.kron(su2.group_matrix(1, hs[0]), su2.group_matrix(2, hs[1])), su2.group_matrix(1, hs[2]))
    assert np.allclose(cm.trace_function_group(cfg, moved), act @ cm.trace_function_group(cfg, gs), atol=1e-12)


def test_zero_weight_subspace():
    for cfg in cm.configs((1, 2, 1), 10.0):
        for th in (0.3, 1.7):
            assert cm.zero_weight_leak(cfg.spins, cm.trace_function(cfg, th)) <= 1e-10


def test_normalized_trace():
    th = 0.77
    for nu in range(4):
        cfg = cm.SpinChainConfig((0,), (nu,))
        F = cm.normalized_trace(cfg, th)[0]
        assert F == pytest.approx(np.exp(1j * (nu + 1) * th) - np.exp(-1j * (nu + 1) * th), abs=1e-12)
    with pytest.raises(SingularityError):
        cm.normalized_trace(cfg, 0.0)
    with pytest.raises(SingularityError):
        cm.normalized_trace(cfg, np.pi)


def test_weyl_anti_invariance():
    for cfg in cm.configs((1, 1, 2), 10.0):
        R = cm.weyl_reflection_matrix(cfg.spins)
        th = 0.61
        assert np.allclose(cm.normalized_trace(cfg, -th), -R @ cm.normalized_trace(cfg, th), atol=1e-12)


def test_weyl_numerator_fixes_normalization():
    rng = np.random.default_rng(2)
    for rs in (SU2, SU3):
        q = sample_regular_point(rs, rng, 0.4)
        for lam in [(0,) * rs.rank, (1,) + (0,) * (rs.rank - 1)]:
            assert cm.weyl_numerator_residual(rs, lam, q, 1e-3) <= 1e-5
        # larger weights: the residual is pure truncation error of order 2
        lam = (2,) * rs.rank
        r1 = cm.weyl_numerator_residual(rs, lam, q, 1e-3)
        r2 = cm.weyl_numerator_residual(rs, lam, q, 5e-4)
        assert r1 <= 1e-3 and 3.5 <= r1 / r2 <= 4.5


def test_felder_r_hand_expanded():
    r = cm.felder_r(np.pi / 2, (0, 1), (1, 1)).matrix
    ref = np.array(
        [
            [-0.25, 0, 0, 0],
            [0, 0.25, -0.5, 0],
            [0, -0.5, 0.25, 0],
            [0, 0, 0, -0.25],
        ]
    )
    assert np.allclose(r, ref, atol=1e-14)
    with pytest.raises(SingularityError):
        cm.felder_r(0.0, (0, 1), (1, 1))
    with pytest.raises(InvalidArgument):
        cm.felder_r(0.5, (1, 1), (1, 1))


def test_felder_r_embedding():
    rd = cm.felder_r(0.8, (0, 2), (1, 0, 2))
    assert rd.embedded().shape == (6, 6)
    assert np.allclose(rd.embedded(), cm.embed_r((1, 0, 2), 0, 2, 0.8))


def test_r_matrix_identities():
    rng = np.random.default_rng(17)
    for spins in itertools.product(range(3), repeat=3):
        for _ in range(3):
            th = cm.sample_regular_theta(rng, 0.3)
            res = cm.rmatrix_residuals(spins, th)
            assert set(res) == {"inversion", "casimir", "shift", "cartan_invariance", "yang_baxter"}
            assert max(res.values()) <= 1e-10, (spins, res)


def test_mixed_casimir_against_oracle():
    # Omega on V1 (x) V1 in the unnormalized oracle basis has eigenvalues 1/2 (triplet) and -3/2 (singlet)
    e, f, h = oracles.spin_matrices(1)
    om = 0.5 * np.kron(h, h) + np.kron(e, f) + np.kron(f, e)
    assert np.allclose(sorted(np.linalg.eigvals(om).real), [-1.5, 0.5, 0.5, 0.5])
    assert np.allclose(sorted(np.linalg.eigvalsh(cm.mixed_casimir(1, 1))), [-1.5, 0.5, 0.5, 0.5])


def test_intertwiner_identity():
    rng = np.random.default_rng(8)
    ths = [cm.sample_regular_theta(rng, 0.3) for _ in range(3)]
    for nu, nup, mu in itertools.product(range(4), repeat=3):
        try:
            b = cg_intertwiner(nu, nup, mu)
        except AdmissibilityError:
            continue
        for th in ths:
            assert cm.intertwiner_casimir_identity(b, th) <= 1e-10
    # trivial second factor: the scalar vanishes
    assert cm.intertwiner_casimir_scalar(cg_intertwiner(2, 2, 0)) == 0
    # singlet in V1 (x) V1: r12 + r21 = -Omega acts as +3/2
    assert cm.intertwiner_casimir_scalar(cg_intertwiner(0, 1, 1)) == 1.5


def test_cm_eigenvalue_and_order():
    cfg = cm.SpinChainConfig((2,), (1,))
    th = 1.1
    r1, r2, ratio = cm.convergence_ratio(lambda h: cm.apply_cm_hamiltonian(cfg, th, h), 1e-3)
    assert r1 <= 1e-4
    assert 3.5 <= ratio <= 4.5
    res = cm.apply_cm_hamiltonian(cfg, th, 1e-3)
    assert res.eigenvalue == cm.c2(1)
    assert res.zero_weight_leak <= 1e-10


def test_cm_trivial_spin_is_weyl_numerator():
    for nu in range(4):
        cfg = cm.SpinChainConfig((0,), (nu,))
        res = cm.apply_cm_hamiltonian(cfg, 0.9, 1e-3)
        assert res.residual <= 1e-4


def test_cm_sweep_small():
    rng = np.random.default_rng(0)
    for spins in [(1, 1), (2, 1, 1)]:
        for cfg in cm.configs(spins, 10.0):
            th = cm.sample_regular_theta(rng, 0.3)
            res = cm.apply_cm_hamiltonian(cfg, th, 1e-3)
            assert res.residual <= 1e-4
            assert res.eigenvalue == cm.c2(cfg.sector[-1])


def test_kzb_example_in_our_labels():
    # nu_i here is nu_{i+1} in the labelling where D_i has eigenvalue (c2(nu_{i+1}) - c2(nu_i)) / 2,
    # so that labelling's sector (1, 0) is our (0, 1)
    cfg = cm.SpinChainConfig((1, 1), (0, 1))
    assert cfg.kzb_eigenvalue(1) == -0.75
    for variant in ("normalized", "unnormalized"):
        res = cm.apply_kzb(cfg, 1, 0.9, 1e-3, variant)
        assert res.eigenvalue == -0.75
        assert res.residual <= 1e-4


def test_kzb_trivial_spins():
    cfg = cm.SpinChainConfig((0, 0, 0), (2, 2, 2))
    for i in (1, 2, 3):
        res = cm.apply_kzb(cfg, i, 0.7, 1e-3)
        assert res.eigenvalue == 0
        assert np.linalg.norm(res.value) <= 1e-6 * np.linalg.norm(res.function)


def test_kzb_eigenvalues_telescope():
    for cfg in cm.configs((1, 2, 1), 10.0):
        assert sum(cfg.kzb_eigenvalue(i) for i in range(1, 4)) == pytest.approx(0.0, abs=1e-15)


def test_kzb_unnormalized_needs_d_term():
    cfg = cm.SpinChainConfig((1, 1), (1, 2))
    a = cm.apply_kzb(cfg, 2, 1.2, 1e-3, "normalized")
    b = cm.apply_kzb(cfg, 2, 1.2, 1e-3, "unnormalized")
    assert a.residual <= 1e-4 and b.residual <= 1e-4
    without = b.value - cm.d_term(cfg.spins, 1, 1.2) @ b.function
    assert np.linalg.norm(without - b.eigenvalue * b.function) > 1e-2 * np.linalg.norm(b.function)


def test_regularity_required():
    cfg = cm.SpinChainConfig((1, 1), (1, 0))
    with pytest.raises(SingularityError):
        cm.apply_cm_hamiltonian(cfg, 5e-4, 1e-3)
    with pytest.raises(SingularityError):
        cm.apply_kzb(cfg, 1, np.pi - 1e-3, 1e-3)
    assert cm.apply_kzb(cfg, 1, 0.05, 1e-3).residual <= 1e-3


def test_delta_lemma():
    r1 = cm.delta_lemma_residual(0.9, 1e-3)
    r2 = cm.delta_lemma_residual(0.9, 5e-4)
    assert r1 <= 1e-5
    assert 3.5 <= r1 / r2 <= 4.5
    assert SU2.rho_norm2 == 0.5


def test_orthogonality_small():
    for spins in [(0,), (1, 1), (2, 1)]:
        cs = cm.configs(spins, 12.0)
        for a, b in itertools.product(cs, repeat=2):
            val = cm.trace_orthogonality(a, b)
            assert abs(val - cm.orthogonality_prediction(a, b)) <= 1e-6
            assert abs(val - float(a.sector == b.sector)) <= 1e-6


def test_orthogonality_non_normalized_chain():
    cfg = cm.SpinChainConfig((1, 1), (1, 2))
    scaled = cfg.with_chain([cfg.chain[0].scaled(2.0), cfg.chain[1].scaled(1j)])
    val = cm.trace_orthogonality(cfg, scaled)
    assert val == pytest.approx(2j, abs=1e-10)
    assert cm.orthogonality_prediction(cfg, scaled) == pytest.approx(2j)


def test_propagator_trivial_spin_is_heat_kernel():
    U = cm.Propagator((0,), (0.6,), 40.0)
    th, thp = 0.5, 1.4
    ref = sum(
        np.exp(-0.6 * cm.c2(m)) * character(SU2, m, th) * np.conj(character(SU2, m, thp)) for m in range(10)
    )
    assert U.kernel(th, thp)[0, 0] == pytest.approx(ref, abs=1e-12)


def test_propagator_scales_trace_functions():
    U = cm.Propagator((1, 1), (0.3, 0.5), 40.0)
    for cfg in cm.configs((1, 1), 6.0):
        out = cm.apply_to_trace(U, cfg, 0.8)
        assert np.allclose(out, U.weight(cfg.sector) * cm.trace_function(cfg, 0.8), atol=1e-12)


def test_composition():
    U1 = cm.Propagator((1, 2), (0.3, 0.7), 40.0)
    U2 = cm.Propagator((1, 2), (0.7, 0.3), 40.0)
    U = cm.compose_propagators(U1, U2)
    assert U.areas == (1.0, 1.0)
    lhs = cm.operator_product(U1, U2, 0.4, 1.9)
    assert np.abs(lhs - U.kernel(0.4, 1.9)).max() <= 1e-8
    with pytest.raises(InvalidArgument):
        cm.compose_propagators(U1, cm.Propagator((1, 1), (0.3, 0.7), 40.0))


def test_propagator_rejects_bad_areas():
    from ymcm.errors import DivergentSeriesError

    with pytest.raises(DivergentSeriesError):
        cm.Propagator((1,), (0.0,), 10.0)
    with pytest.raises(InvalidArgument):
        cm.Propagator((1, 1), (0.5,), 10.0)


def test_sample_regular_theta():
    rng = np.random.default_rng(1)
    for _ in range(100):
        th = cm.sample_regular_theta(rng, 0.3)
        assert abs((2 * th + np.pi) % (2 * np.pi) - np.pi) >= 0.3
