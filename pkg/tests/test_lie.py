import itertools

import numpy as np
import pytest

import oracles
from ymcm.errors import InvalidArgument
from ymcm.lie import (
    SU2,
    SU3,
    CartanPoint,
    HighestWeight,
    RootSystem,
    casimir2,
    casimir2_exact,
    character,
    character_weyl_quotient,
    dominant_weights_below,
    inner_exact,
    is_regular,
    sample_regular_point,
    weight_system,
    weyl_act,
    weyl_denominator,
    weyl_dim,
)


def test_root_system_invariants():
    for r in (1, 2, 3, 4):
        rs = RootSystem(r)
        assert len(rs.positive_roots) == r * (r + 1) // 2
        roots = rs.simple_roots
        for i in range(r):
            assert np.dot(roots[i], roots[i]) == pytest.approx(2.0)
            # (rho, alpha_i^vee) = 1
            assert np.dot(rs.fundamental_weights.sum(axis=0), roots[i]) == pytest.approx(1.0)
        B = rs.bilinear_form
        assert np.all(np.linalg.eigvalsh(B) > 0)
        assert np.allclose(B, rs.fundamental_weights @ rs.fundamental_weights.T)
    assert SU2.rho_norm2 == pytest.approx(0.5)


def test_rank_must_be_positive():
    with pytest.raises(InvalidArgument):
        RootSystem(0)


def test_dominant_weights_su2_cutoff_4():
    assert [w.coords for w in dominant_weights_below(SU2, 4.0)] == [(0,), (1,), (2,)]


def test_dominant_weights_brute_force():
    for rs, cutoff in ((SU2, 30.0), (SU3, 12.0)):
        brute = sorted(
            (c for c in itertools.product(range(12), repeat=rs.rank) if casimir2(rs, c) <= cutoff),
            key=lambda c: (casimir2(rs, c), c),
        )
        assert [w.coords for w in dominant_weights_below(rs, cutoff)] == brute


def test_dominant_weights_just_below_first_casimir():
    assert [w.coords for w in dominant_weights_below(SU2, 1.4)] == [(0,)]
    assert [w.coords for w in dominant_weights_below(SU3, 2.6)] == [(0, 0)]


def test_adjoint_appears_once():
    ws = [w.coords for w in dominant_weights_below(SU3, 6.0)]
    assert ws.count((1, 1)) == 1


def test_cutoff_must_be_positive():
    with pytest.raises(InvalidArgument):
        dominant_weights_below(SU2, 0.0)


def test_weyl_dim_examples():
    assert weyl_dim(SU2, 2) == 3
    assert weyl_dim(SU2, 0) == 1
    assert weyl_dim(SU3, (1, 1)) == 8
    assert weyl_dim(SU3, (0, 0)) == 1
    assert weyl_dim(RootSystem(3), (0, 1, 0)) == 6


@pytest.mark.parametrize("m", range(7))
def test_casimir_matches_matrix_oracle_su2(m):
    assert casimir2(SU2, m) == pytest.approx(oracles.su2_casimir_oracle(m), abs=1e-12)


def test_casimir_matches_matrix_oracle_su3():
    assert casimir2(SU3, (1, 0)) == pytest.approx(oracles.sl3_casimir_fundamental(), abs=1e-12)
    assert casimir2(SU3, (1, 1)) == pytest.approx(oracles.sl3_casimir_adjoint(), abs=1e-12)
    assert casimir2(SU3, (1, 1)) == 6.0


def test_casimir_alternative_formula():
    for rs in (SU2, SU3, RootSystem(3)):
        rho = rs.rho.coords
        for lam in dominant_weights_below(rs, 20.0):
            shifted = tuple(c + 1 for c in lam.coords)
            alt = inner_exact(rs, shifted, shifted) - inner_exact(rs, rho, rho)
            assert casimir2_exact(rs, lam) == alt
            assert casimir2(rs, lam) == pytest.approx(float(alt), abs=1e-12)


def test_casimir_zero_only_at_trivial_and_increasing():
    assert casimir2(SU3, (0, 0)) == 0
    for rs in (SU2, SU3):
        for i in range(rs.rank):
            vals = []
            for k in range(6):
                c = [0] * rs.rank
                c[i] = k
                vals.append(casimir2(rs, c))
            assert all(b > a for a, b in zip(vals, vals[1:]))


def test_weight_systems():
    ws = weight_system(SU2, 3)
    assert dict(ws.items()) == {(3,): 1, (1,): 1, (-1,): 1, (-3,): 1}
    assert weight_system(SU3, (1, 1))[(0, 0)] == oracles.sl3_adjoint_zero_weight_multiplicity() == 2
    assert dict(weight_system(SU3, (0, 0)).items()) == {(0, 0): 1}
    assert weight_system(SU3, (2, 1))[(2, 1)] == 1


def test_weight_system_matches_independent_construction():
    for a, b in itertools.product(range(4), repeat=2):
        ref = oracles.su3_character(a, b)
        ws = weight_system(SU3, (a, b))
        # Dynkin labels (p, q) <-> shifted epsilon coordinates (x1 - x3, x2 - x3)
        mine = {(p + q, q): n for (p, q), n in ws.items()}
        assert mine == dict(ref)


def test_freudenthal_total_equals_weyl_dimension():
    for rs, cutoff in ((SU2, 40.0), (SU3, 20.0), (RootSystem(3), 12.0)):
        for lam in dominant_weights_below(rs, cutoff):
            assert weight_system(rs, lam).total() == weyl_dim(rs, lam)


def test_su2_character_geometric_series():
    th = np.linspace(0.1, 3.0, 17)
    for m in range(8):
        assert np.allclose(character(SU2, m, th), np.sin((m + 1) * th) / np.sin(th), atol=1e-12)


def test_character_at_identity_is_dimension():
    for rs in (SU2, SU3):
        zero = np.zeros(rs.rank)
        for lam in dominant_weights_below(rs, 20.0):
            assert character(rs, lam, zero) == weyl_dim(rs, lam)


def test_weight_sum_matches_weyl_quotient():
    rng = np.random.default_rng(7)
    for rs in (SU2, SU3, RootSystem(3)):
        for _ in range(5):
            q = sample_regular_point(rs, rng, margin=0.2)
            for lam in dominant_weights_below(rs, 10.0):
                a = character(rs, lam, q)
                b = character_weyl_quotient(rs, lam, q)
                assert abs(a - b) <= 1e-10 * max(1.0, abs(b))


def test_weyl_denominator():
    th = 0.83
    assert weyl_denominator(SU2, th) == pytest.approx(2j * np.sin(th))
    assert weyl_denominator(SU3, np.zeros(2)) == 0
    assert not is_regular(SU3, np.zeros(2))


def test_weyl_denominator_modulus_brute_force():
    rng = np.random.default_rng(3)
    for rs in (SU2, SU3):
        q = rng.uniform(0, 2 * np.pi, rs.rank)
        amb = np.concatenate([[0.0], q, [0.0]])
        amb = amb[1:] - amb[:-1]
        rho = np.arange(rs.n)[::-1] - (rs.n - 1) / 2
        total = 0
        for p1, s1 in rs.weyl_group:
            for p2, s2 in rs.weyl_group:
                total += s1 * s2 * np.exp(1j * amb @ (rho[list(p1)] - rho[list(p2)]))
        assert abs(weyl_denominator(rs, q)) ** 2 == pytest.approx(total.real, abs=1e-10)


def test_weyl_symmetries():
    rng = np.random.default_rng(11)
    for rs in (SU2, SU3):
        q = sample_regular_point(rs, rng, 0.1).array
        d = weyl_denominator(rs, q)
        for perm, sign in rs.weyl_group:
            wq = weyl_act(rs, perm, q)
            assert abs(weyl_denominator(rs, wq) - sign * d) <= 1e-12
            for lam in dominant_weights_below(rs, 8.0):
                assert abs(character(rs, lam, wq) - character(rs, lam, q)) <= 1e-12 * weyl_dim(rs, lam)


def test_cartan_point_and_weights():
    p = CartanPoint(0.5)
    assert p.angles == (0.5,)
    assert HighestWeight((1, 2)).rank == 2
    with pytest.raises(InvalidArgument):
        HighestWeight((-1,))
