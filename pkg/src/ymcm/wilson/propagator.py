"""Cylinder propagators with N Wilson lines: spectral sum and Haar integral.

The integral form is

    U(g, g') = int prod_i Z_{A_i}(g'_i^-1 h_i^-1 g_i h_{i+1}) (x)_i pi^{mu_i}(h_i) dh,

with h_{N+1} = h_1 and Z_A the SU(2) disc kernel.  For SU(2), traces of group
elements are real and tr(X Y) = 2 <q(X), J q(Y)> for the quaternion
coordinates q and J = diag(1, -1, -1, -1), so every kernel factor on the
quadrature grid comes from one real matrix product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import su2
from ..calogero import Propagator
from ..errors import DivergentSeriesError, InvalidArgument
from ..haar import QuadratureSpec, euler_grid
from ..lie import SU2
from ..surface import tail_bound

_J = np.array([1.0, -1.0, -1.0, -1.0])


def cylinder_propagator_spectral(spins, areas, gs, gs_p, casimir_cutoff: float = 40.0) -> np.ndarray:
    """sum over sectors of exp(-sum c2(nu_i) A_i) Psi(g) Psi(g')^dagger as a (D, D) matrix."""
    return Propagator(tuple(spins), tuple(areas), casimir_cutoff).kernel_group(np.asarray(gs), np.asarray(gs_p))


@dataclass
class IntegralResult:
    value: np.ndarray
    error_bound: float
    degree: int
    resolution: int

    @property
    def error_model(self) -> str:
        return (
            f"disc kernels truncated at m <= {self.degree}; the Euler rule integrates the truncated "
            f"integrand exactly, so the error is the discarded tail ({self.error_bound:.1e})"
        )


def quaternion(g: np.ndarray) -> np.ndarray:
    """(Re a, Im a, Re b, Im b) for g = [[a, -conj b], [b, conj a]]."""
    g = np.asarray(g)
    return np.stack([g[..., 0, 0].real, g[..., 0, 0].imag, g[..., 1, 0].real, g[..., 1, 0].imag], axis=-1)


def _kernel_coefficients(A: float, mmax: int) -> np.ndarray:
    m = np.arange(mmax + 1)
    return (m + 1.0) * np.exp(-A * m * (m + 2) / 2)


def _clenshaw(c: np.ndarray, x: np.ndarray) -> np.ndarray:
    """sum_m c_m U_m(x) for Chebyshev polynomials of the second kind."""
    two_x = 2 * x
    b1 = np.full_like(x, c[-1])
    b2 = np.zeros_like(x)
    tmp = np.empty_like(x)
    for ck in c[-2::-1]:
        # b_k = c_k + 2 x b_{k+1} - b_{k+2}, computed in place
        np.multiply(two_x, b1, out=tmp)
        tmp -= b2
        tmp += ck
        b1, b2, tmp = tmp, b1, b2
    return b1


def _degree(areas, spins, resolution: int, tol: float) -> tuple[int, float]:
    """Largest kernel degree the grid integrates exactly, and the tail it leaves."""
    n = int(resolution) + int(resolution) % 2
    mmax = (n - 1 - max(spins)) // 2
    if mmax < 0:
        raise InvalidArgument(f"resolution {resolution} is too coarse for spins {tuple(spins)}")
    # stop early once the tail is negligible
    for m in range(mmax + 1):
        cut = m * (m + 2) / 2
        if all(tail_bound(SU2, A, 2, cut) <= tol for A in areas):
            mmax = m
            break
    cut = mmax * (mmax + 2) / 2
    tails = [tail_bound(SU2, A, 2, cut) for A in areas]
    sups = [float(np.sum(_kernel_coefficients(A, mmax) * (np.arange(mmax + 1) + 1))) for A in areas]
    # |prod Z - prod Z_trunc| <= sum_i tail_i prod_{j != i} (sup_j + tail_j)
    err = 0.0
    for i in range(len(areas)):
        term = tails[i]
        for j in range(len(areas)):
            if j != i:
                term *= sups[j] + tails[j]
        err += term
    return mmax, err


def cylinder_propagator_integral(spins, areas, gs, gs_p, spec: QuadratureSpec | None = None, chunk: int = 128, tol: float = 1e-14) -> IntegralResult:
    """Haar quadrature of the integral form for N = 1 or 2 lines (SU(2)).

    ``gs`` and ``gs_p`` have shape (N, 2, 2).  Returns the (D, D) kernel and
    a bound on its deviation from the exact integral.
    """
    spec = spec or QuadratureSpec("euler", 24)
    if spec.scheme != "euler":
        raise InvalidArgument("the integral propagator uses the euler scheme")
    spins = [int(m) for m in spins]
    areas = [float(a) for a in areas]
    N = len(spins)
    if N not in (1, 2) or len(areas) != N:
        raise InvalidArgument("the integral form is implemented for N = 1 or 2 lines")
    if any(not a > 0 for a in areas):
        raise DivergentSeriesError(f"areas must be positive, got {areas}")
    gs, gs_p = np.asarray(gs, dtype=complex), np.asarray(gs_p, dtype=complex)
    if gs.shape != (N, 2, 2) or gs_p.shape != (N, 2, 2):
        raise InvalidArgument(f"boundary data must have shape ({N}, 2, 2)")
    mmax, err = _degree(areas, spins, spec.resolution, tol)
    coef = [_kernel_coefficients(A, mmax) for A in areas]
    hs, w = euler_grid(spec.resolution)
    M = len(w)
    inv = lambda x: np.conj(np.swapaxes(x, -1, -2))  # noqa: E731
    qh = quaternion(hs) * _J  # J q(h)
    P = [su2.group_matrix(m, hs).reshape(M, -1) for m in spins]
    if N == 1:
        L = inv(gs_p[0]) @ inv(hs) @ gs[0]
        x = np.einsum("mk,mk->m", quaternion(L), qh)  # tr(L h) / 2
        Z = _clenshaw(coef[0], x)
        val = (w * Z) @ P[0]
        d = spins[0] + 1
        return IntegralResult(val.reshape(d, d), err, mmax, spec.resolution)
    L1 = quaternion(inv(gs_p[0]) @ inv(hs) @ gs[0])  # indexed by h1
    L2 = quaternion(inv(gs_p[1]) @ inv(hs) @ gs[1])  # indexed by h2
    acc = np.zeros((P[0].shape[1], P[1].shape[1]), dtype=complex)
    P2r, P2i = P[1].real.copy(), P[1].imag.copy()
    for s in range(0, M, chunk):
        sl = slice(s, s + chunk)
        x1 = L1[sl] @ qh.T  # tr(L1[h1] h2) / 2, shape (chunk, M)
        x2 = (L2 @ qh[sl].T).T  # tr(L2[h2] h1) / 2
        T = _clenshaw(coef[0], x1)
        T *= _clenshaw(coef[1], x2)
        T *= w[None, :]
        T *= w[sl, None]
        TP = (T @ P2r) + 1j * (T @ P2i)
        acc += P[0][sl].T @ TP
    d1, d2 = spins[0] + 1, spins[1] + 1
    # acc[(a b), (c e)] from pi^mu1_ab (x) pi^mu2_ce -> rows (a c), cols (b e)
    val = acc.reshape(d1, d1, d2, d2).transpose(0, 2, 1, 3).reshape(d1 * d2, d1 * d2)
    return IntegralResult(val, err, mmax, spec.resolution)
