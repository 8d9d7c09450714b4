"""Independent reference computations for the test-suite.

Nothing here imports the package: representation matrices, Casimirs, weight
multisets and Clebsch-Gordan maps are rebuilt from scratch so they can serve
as oracles for the library's own code paths.
"""

from __future__ import annotations

import itertools
from collections import Counter

import numpy as np
from scipy.linalg import null_space


# SU(2) -------------------------------------------------------------------------------

def spin_matrices(m: int):
    """e, f, h for the irrep of highest weight m, basis v_0 (top) .. v_m."""
    d = m + 1
    e = np.zeros((d, d))
    f = np.zeros((d, d))
    h = np.diag([m - 2.0 * k for k in range(d)])
    for k in range(m):
        # f v_k = v_{k+1}, e v_{k+1} = (k+1)(m-k) v_k
        f[k + 1, k] = 1.0
        e[k, k + 1] = (k + 1) * (m - k)
    return e, f, h


def su2_casimir_oracle(m: int) -> float:
    """Eigenvalue of h^2/2 + e f + f e (form with (alpha, alpha) = 2)."""
    e, f, h = spin_matrices(m)
    C = h @ h / 2 + e @ f + f @ e
    ev = np.linalg.eigvals(C)
    assert np.allclose(ev, ev[0])
    return float(ev[0].real)


def su2_cg_nullspace(nu: int, nup: int, mu: int) -> np.ndarray:
    """Basis of equivariant maps V_nu -> V_nup (x) V_mu, as (D, nu+1) matrices."""
    mats = []
    for X in zip(spin_matrices(nup), spin_matrices(mu), spin_matrices(nu)):
        A, B, C = X
        L = np.kron(A, np.eye(mu + 1)) + np.kron(np.eye(nup + 1), B)
        # L M - M C = 0 as a linear system in vec(M) (row-major)
        D = L.shape[0]
        n = nu + 1
        mats.append(np.kron(L, np.eye(n)) - np.kron(np.eye(D), C.T))
    ns = null_space(np.vstack(mats))
    return [ns[:, k].reshape(-1, nu + 1) for k in range(ns.shape[1])]


# SU(3) ------------------------------------------------------------------------------

def _sl3_basis():
    """Traceless basis of sl3 and its dual under tr(XY)."""
    E = lambda i, j: np.eye(3)[:, [i]] @ np.eye(3)[[j], :]  # noqa: E731
    basis = [E(i, j) for i in range(3) for j in range(3) if i != j]
    basis += [E(0, 0) - E(1, 1), E(1, 1) - E(2, 2)]
    G = np.array([[np.trace(X @ Y) for Y in basis] for X in basis])
    Ginv = np.linalg.inv(G)
    dual = [sum(Ginv[a, b] * basis[b] for b in range(8)) for a in range(8)]
    return basis, dual


def sl3_casimir_fundamental() -> float:
    basis, dual = _sl3_basis()
    C = sum(X @ Y for X, Y in zip(basis, dual))
    return float(C[0, 0])


def sl3_casimir_adjoint() -> float:
    basis, dual = _sl3_basis()
    M = np.array([X.ravel() for X in basis]).T  # coordinates of matrices in the basis

    def ad(X):
        return np.column_stack([np.linalg.lstsq(M, (X @ Y - Y @ X).ravel(), rcond=None)[0] for Y in basis])

    C = sum(ad(X) @ ad(Y) for X, Y in zip(basis, dual))
    ev = np.linalg.eigvals(C)
    assert np.allclose(ev, ev[0])
    return float(ev[0].real)


def sl3_adjoint_zero_weight_multiplicity() -> int:
    basis, _ = _sl3_basis()
    H1, H2 = basis[6], basis[7]
    # zero-weight vectors commute with the Cartan subalgebra
    kern = [Y for Y in basis if np.allclose(H1 @ Y, Y @ H1) and np.allclose(H2 @ Y, Y @ H2)]
    return len(kern)


def _sym_weights(a: int, sign: int) -> Counter:
    """Weights of Sym^a(C^3) (sign +1) or Sym^a of the dual (sign -1), in Z^3."""
    out = Counter()
    for combo in itertools.combinations_with_replacement(range(3), a):
        w = [0, 0, 0]
        for i in combo:
            w[i] += sign
        out[tuple(w)] += 1
    return out


def _normalize(w):
    return (w[0] - w[2], w[1] - w[2])


def _product(c1: Counter, c2: Counter) -> Counter:
    out = Counter()
    for w1, n1 in c1.items():
        for w2, n2 in c2.items():
            out[_normalize([x + y for x, y in zip(w1 + (0,), w2 + (0,))])] += n1 * n2
    return out


def su3_character(a: int, b: int) -> Counter:
    """Weights of the irrep with Dynkin labels (a, b), via Sym^a (x) Sym^b* minus the trace part."""

    def sym_pair(a, b):
        if a < 0 or b < 0:
            return Counter()
        s1 = Counter({_normalize(w): n for w, n in _sym_weights(a, 1).items()})
        s2 = Counter({_normalize(w): n for w, n in _sym_weights(b, -1).items()})
        return _product(s1, s2)

    full = sym_pair(a, b)
    full.subtract(sym_pair(a - 1, b - 1))
    return +full


def su3_strip(char: Counter) -> dict:
    """Decompose a weight multiset into irreps by repeatedly removing the top character."""
    char = +Counter(char)
    out = {}
    while char:
        top = max(char)  # lexicographically largest in shifted epsilon coordinates is dominant-maximal
        x1, x2 = top
        lab = (x1 - x2, x2)
        n = char[top]
        out[lab] = out.get(lab, 0) + n
        for w, k in su3_character(*lab).items():
            char[w] -= n * k
        assert all(v >= 0 for v in char.values())
        char = +char
    return out


def su3_tensor_oracle(l1: tuple, l2: tuple) -> dict:
    return su3_strip(_product_norm(su3_character(*l1), su3_character(*l2)))


def _product_norm(c1: Counter, c2: Counter) -> Counter:
    out = Counter()
    for w1, n1 in c1.items():
        for w2, n2 in c2.items():
            out[(w1[0] + w2[0], w1[1] + w2[1])] += n1 * n2
    return out


# frozen values --------------------------------------------------------------------------

# sum_m (m+1)^2 exp(-m(m+2)/2), the SU(2) sphere at area 1 (mpmath, 30 digits)
SPHERE_SU2_A1 = 2.066365251634374
# sum_m exp(-m(m+2)/2), the SU(2) torus at area 1
TORUS_SU2_A1 = 1.2420050527674290
