"""Explicit SU(2) representation matrices.

The irrep with highest weight ``m`` (spin m/2) is realized on Sym^m(C^2) with the
orthonormal basis ``u_k ~ x^(m-k) y^k / sqrt(binom(m, k))``, k = 0..m.  Basis
vector ``u_k`` has h-weight ``m - 2k``, so index 0 is the highest weight vector.
Group and Lie-algebra matrices are both derived from the same substitution
rule, which keeps them consistent (``d/dt pi(exp tX) = pi(X)``).
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np

E = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
F = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
H = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def dim(m: int) -> int:
    return int(m) + 1


def weights(m: int) -> np.ndarray:
    """h-eigenvalues of the basis vectors, in basis order."""
    return np.arange(m, -m - 1, -2)


def _scale(m: int) -> np.ndarray:
    return np.sqrt(np.array([comb(m, k) for k in range(m + 1)], dtype=float))


def algebra_matrix(m: int, X: np.ndarray) -> np.ndarray:
    """Matrix of a 2x2 (complex) Lie algebra element in the irrep ``m``."""
    X = np.asarray(X, dtype=complex)
    M = np.zeros((m + 1, m + 1), dtype=complex)
    # X.x = X11 x + X21 y,  X.y = X12 x + X22 y, extended as a derivation
    for k in range(m + 1):
        a, b = m - k, k
        if a:
            M[k, k] += a * X[0, 0]
            M[k + 1, k] += a * X[1, 0]
        if b:
            M[k - 1, k] += b * X[0, 1]
            M[k, k] += b * X[1, 1]
    s = _scale(m)
    return (M * s[None, :]) / s[:, None]


@lru_cache(maxsize=None)
def generators(m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(e, f, h) in the irrep ``m``; read-only arrays."""
    out = []
    for X in (E, F, H):
        M = algebra_matrix(m, X)
        M.setflags(write=False)
        out.append(M)
    return tuple(out)


def casimir_matrix(m: int) -> np.ndarray:
    """h^2/2 + ef + fe, the Casimir for the form with (alpha, alpha) = 2."""
    e, f, h = generators(m)
    return h @ h / 2 + e @ f + f @ e


def group_matrix(m: int, g: np.ndarray) -> np.ndarray:
    """pi^m(g) for a 2x2 matrix ``g`` or a stack ``(..., 2, 2)``.

    Vectorized over leading axes; cost is O(m^3) array operations.
    """
    g = np.asarray(g, dtype=complex)
    a, c = g[..., 0, 0], g[..., 1, 0]
    b, d = g[..., 0, 1], g[..., 1, 1]
    out = np.zeros(g.shape[:-2] + (m + 1, m + 1), dtype=complex)
    # column k: (a x + c y)^(m-k) (b x + d y)^k, row j = coefficient of x^(m-j) y^j
    pa = [np.ones_like(a)]
    pb = [np.ones_like(a)]
    pc = [np.ones_like(a)]
    pd = [np.ones_like(a)]
    for _ in range(m):
        pa.append(pa[-1] * a)
        pb.append(pb[-1] * b)
        pc.append(pc[-1] * c)
        pd.append(pd[-1] * d)
    for k in range(m + 1):
        n1, n2 = m - k, k
        for s in range(n1 + 1):
            t1 = comb(n1, s) * pa[n1 - s] * pc[s]
            for t in range(n2 + 1):
                out[..., s + t, k] += t1 * (comb(n2, t) * pb[n2 - t] * pd[t])
    sc = _scale(m)
    return out * sc[None, :] / sc[:, None]


def torus_element(theta) -> np.ndarray:
    """diag(e^{i theta}, e^{-i theta}); vectorized over ``theta``."""
    theta = np.asarray(theta, dtype=float)
    out = np.zeros(theta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(1j * theta)
    out[..., 1, 1] = np.exp(-1j * theta)
    return out


def torus_matrix(m: int, theta: float) -> np.ndarray:
    return np.diag(np.exp(1j * weights(m) * theta))


def euler_element(alpha, beta, gamma) -> np.ndarray:
    """R_z(alpha) R_y(beta) R_z(gamma) with R_z(t) = diag(e^{it/2}, e^{-it/2})."""
    alpha, beta, gamma = np.broadcast_arrays(
        np.asarray(alpha, float), np.asarray(beta, float), np.asarray(gamma, float)
    )
    ca, cb = np.cos(beta / 2), np.sin(beta / 2)
    p = np.exp(0.5j * (alpha + gamma))
    q = np.exp(0.5j * (alpha - gamma))
    out = np.empty(alpha.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = p * ca
    out[..., 0, 1] = -q * cb
    out[..., 1, 0] = np.conj(q) * cb
    out[..., 1, 1] = np.conj(p) * ca
    return out


def random_su2(rng: np.random.Generator, size=None) -> np.ndarray:
    """Haar-random SU(2) elements from normalized Gaussian quaternions."""
    shape = () if size is None else tuple(np.atleast_1d(size))
    x = rng.normal(size=shape + (4,))
    x /= np.linalg.norm(x, axis=-1, keepdims=True)
    a = x[..., 0] + 1j * x[..., 1]
    b = x[..., 2] + 1j * x[..., 3]
    out = np.empty(shape + (2, 2), dtype=complex)
    out[..., 0, 0] = a
    out[..., 0, 1] = -np.conj(b)
    out[..., 1, 0] = b
    out[..., 1, 1] = np.conj(a)
    return out


def characters(g: np.ndarray, mmax: int) -> np.ndarray:
    """chi_0..chi_mmax at SU(2) matrices ``g`` (last axis indexes m).

    Chebyshev recursion in x = tr(g)/2, valid at +-1 without 0/0.
    """
    x = np.trace(np.asarray(g), axis1=-2, axis2=-1) / 2
    out = np.empty(np.shape(x) + (mmax + 1,), dtype=complex)
    out[..., 0] = 1.0
    if mmax >= 1:
        out[..., 1] = 2 * x
    for m in range(1, mmax):
        out[..., m + 1] = 2 * x * out[..., m] - out[..., m - 1]
    return out
