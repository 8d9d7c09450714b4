"""Numerical Haar integration over SU(2) and over maximal tori.

The full-group rule parameterizes SU(2) by Euler angles
``g = R_z(alpha) R_y(beta) R_z(gamma)`` with alpha, gamma in [0, 4 pi)
(a double cover, harmless after normalization) and the measure
``sin(beta) d alpha d beta d gamma``.  alpha and gamma use the trapezoid rule,
beta uses Gauss-Legendre in cos(beta).  With an even resolution n the rule is
exact for every polynomial in matrix coefficients of total degree below n.

Class functions are integrated with the Weyl integration formula
``int_G f = (1/|W|) int_T f |delta|^2 dq / (2 pi)^r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import su2
from .errors import InvalidArgument
from .lie import RootSystem, weyl_denominator
from .reports import Record
from .tensor import invariant_basis

SCHEMES = ("euler", "torus-gauss", "torus-trapezoid")


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = "euler"
    resolution: int = 24

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise InvalidArgument(f"unknown quadrature scheme {self.scheme!r}")
        if int(self.resolution) < 2:
            raise InvalidArgument("resolution must be at least 2")

    @property
    def error_model(self) -> str:
        if self.scheme == "euler":
            return "exact for matrix-coefficient polynomials of total degree < resolution; spectral otherwise"
        if self.scheme == "torus-trapezoid":
            return "exact for trigonometric polynomials of degree < resolution per angle"
        return "Gauss-Legendre per angle; spectral convergence for smooth periodic integrands"


@lru_cache(maxsize=16)
def euler_grid(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """SU(2) nodes (M, 2, 2) and normalized weights (M,)."""
    n = int(resolution) + int(resolution) % 2
    ang = 4 * np.pi * np.arange(n) / n
    x, wx = np.polynomial.legendre.leggauss(n)
    beta = np.arccos(x)
    A, Bt, G = np.meshgrid(ang, beta, ang, indexing="ij")
    W = np.broadcast_to(wx[None, :, None], A.shape)
    g = su2.euler_element(A.ravel(), Bt.ravel(), G.ravel())
    w = W.ravel() / W.sum()
    g.setflags(write=False)
    w.setflags(write=False)
    return g, w


def integrate_group(f: Callable[[np.ndarray], np.ndarray], spec: QuadratureSpec | None = None, chunk: int = 4096):
    """Haar integral of ``f`` over SU(2).

    ``f`` receives a stack of matrices (M, 2, 2) and returns an array whose
    first axis has length M.
    """
    spec = spec or QuadratureSpec()
    if spec.scheme != "euler":
        raise InvalidArgument("integrate_group needs the euler scheme")
    g, w = euler_grid(spec.resolution)
    total = None
    for start in range(0, len(w), chunk):
        vals = np.asarray(f(g[start : start + chunk]))
        part = np.tensordot(w[start : start + chunk], vals, axes=(0, 0))
        total = part if total is None else total + part
    return total


def integrate_group_with_error(f, spec: QuadratureSpec | None = None):
    """(estimate, |estimate - estimate at resolution - 2|)."""
    spec = spec or QuadratureSpec()
    fine = integrate_group(f, spec)
    coarse = integrate_group(f, QuadratureSpec(spec.scheme, max(2, spec.resolution - 2)))
    return fine, float(np.max(np.abs(np.asarray(fine) - np.asarray(coarse))))


@lru_cache(maxsize=32)
def torus_grid(rank: int, scheme: str, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (M, rank) in [0, 2 pi)^rank and Weyl-integration weights (M,)."""
    n = int(resolution)
    if scheme == "torus-gauss":
        x, wx = np.polynomial.legendre.leggauss(n)
        t = np.pi * (x + 1)
        wt = np.pi * wx
    elif scheme == "torus-trapezoid":
        t = 2 * np.pi * np.arange(n) / n
        wt = np.full(n, 2 * np.pi / n)
    else:
        raise InvalidArgument(f"{scheme!r} is not a torus scheme")
    mesh = np.meshgrid(*([t] * rank), indexing="ij")
    q = np.stack([m.ravel() for m in mesh], axis=-1)
    wmesh = np.meshgrid(*([wt] * rank), indexing="ij")
    w = np.prod(np.stack([m.ravel() for m in wmesh], axis=-1), axis=-1)
    rs = RootSystem(rank)
    d2 = np.abs(weyl_denominator(rs, q)) ** 2
    w = w * d2 / (rs.weyl_order * (2 * np.pi) ** rank)
    q.setflags(write=False)
    w.setflags(write=False)
    return q, w


def integrate_class(f: Callable[[np.ndarray], np.ndarray], rs: RootSystem, spec: QuadratureSpec | None = None):
    """Haar integral of a class function given on the torus (Weyl integration).

    ``f`` receives angles of shape (M, rank).
    """
    spec = spec or QuadratureSpec("torus-gauss", 64)
    q, w = torus_grid(rs.rank, spec.scheme, spec.resolution)
    vals = np.asarray(f(q))
    return np.tensordot(w, vals, axes=(0, 0))


# closed-form identities ---------------------------------------------------------

def _outer_stack(mats: Sequence[np.ndarray]) -> np.ndarray:
    """Stacked tensor product of per-point matrices, as (M, rows..., cols...)."""
    M = mats[0].shape[0]
    out = np.ones((M,), dtype=complex)
    for X in mats:
        out = out[..., None, None] * X.reshape((M,) + (1,) * (out.ndim - 1) + X.shape[1:])
    return out


def haar_tensor(reps: Sequence[int], spec: QuadratureSpec, inverse_first: bool = False) -> np.ndarray:
    """Quadrature of the entries prod_i pi^{reps_i}(h)_{a_i b_i}, indexed [a_1, b_1, a_2, b_2, ...].

    With ``inverse_first`` the first factor is pi(h^{-1}).
    """
    def f(g):
        mats = []
        for i, m in enumerate(reps):
            X = su2.group_matrix(m, g)
            if i == 0 and inverse_first:
                X = np.conj(np.swapaxes(X, -1, -2))
            mats.append(X)
        return _outer_stack(mats)

    return integrate_group(f, spec)


def projector_closed_form(slots: Sequence[tuple[int, bool]]) -> np.ndarray:
    """Orthogonal projector onto invariants, as a (D, D) matrix."""
    basis = invariant_basis(slots)
    D = int(np.prod([m + 1 for m, _ in slots]))
    vecs = basis.reshape(basis.shape[0], D)
    return vecs.T @ vecs.conj()


def verify_identity(which: str, reps: Sequence[int], spec: QuadratureSpec | None = None, tolerance: float = 1e-6) -> Record:
    """Max-entry residual between a Haar-quadrature tensor and its closed form.

    * ``integ-2``: int pi^l(h^-1)_{ij} pi^m(h)_{kl} = delta_{lm} delta_{il} delta_{jk} / dim
    * ``integ-3``: int pi^{m1}(h^-1)_{ij} pi^{m2}(h)_{kl} pi^{m3}(h)_{st}
      = sum_a a[j,k,s] conj(a[i,l,t]) over an orthonormal basis of
      invariants in V*_{m1} (x) V_{m2} (x) V_{m3}
    * ``projector``: int (x)_i pi^{m_i}(h) = P_0
    """
    spec = spec or QuadratureSpec("euler", 24)
    reps = [int(m) for m in reps]
    if any(m < 0 for m in reps):
        raise InvalidArgument("representation labels must be non-negative")
    if which == "integ-2":
        if len(reps) != 2:
            raise InvalidArgument("integ-2 takes two representations")
        lam, mu = reps
        T = haar_tensor(reps, spec, inverse_first=True)
        exact = np.zeros_like(T)
        if lam == mu:
            d = lam + 1
            for i in range(d):
                for j in range(d):
                    exact[i, j, j, i] = 1.0 / d
    elif which == "integ-3":
        if len(reps) != 3:
            raise InvalidArgument("integ-3 takes three representations")
        T = haar_tensor(reps, spec, inverse_first=True)
        basis = invariant_basis([(reps[0], True), (reps[1], False), (reps[2], False)])
        exact = np.einsum("ajks,ailt->ijklst", basis, basis.conj()) if basis.size else np.zeros_like(T)
    elif which == "projector":
        if not reps:
            raise InvalidArgument("projector needs at least one representation")
        T = haar_tensor(reps, spec)
        m = len(reps)
        # [a1, b1, a2, b2, ...] -> (rows, cols)
        order = list(range(0, 2 * m, 2)) + list(range(1, 2 * m, 2))
        D = int(np.prod([r + 1 for r in reps]))
        T = T.transpose(order).reshape(D, D)
        exact = projector_closed_form([(r, False) for r in reps])
    else:
        raise InvalidArgument(f"unknown identity {which!r}")
    residual = float(np.max(np.abs(T - exact), initial=0.0))
    return Record(
        suite="haar",
        check=which,
        config={"reps": reps, "scheme": spec.scheme, "resolution": spec.resolution},
        residual=residual,
        tolerance=tolerance,
    )
