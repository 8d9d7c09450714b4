"""Tensor-product multiplicities (type A) and explicit SU(2) intertwiners.

Tensor products are ordered so that ``V_a (x) V_b`` has basis index
``i * dim(b) + j``, i.e. ``np.kron`` order.  An intertwiner
``a in Hom(V_nu, V_nu' (x) V_mu)`` is stored as a matrix of shape
``(dim nu' * dim mu, dim nu)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.linalg import null_space

from . import su2
from .errors import AdmissibilityError, InvalidArgument
from .lie import HighestWeight, RootSystem, as_weight, weight_system, weyl_dim


@dataclass(frozen=True)
class DecompositionTable:
    entries: dict = field(compare=True)

    def multiplicity(self, nu) -> int:
        return self.entries.get(as_weight(nu), 0)

    def support(self) -> list[HighestWeight]:
        return sorted(self.entries)

    def __contains__(self, nu) -> bool:
        return self.multiplicity(nu) > 0


def _reflect_to_dominant(rs: RootSystem, beta: list[int]) -> tuple[tuple[int, ...], int] | None:
    """Move a (rho-shifted) weight into the dominant chamber by simple reflections.

    Returns the dominant weight and the sign of the Weyl element, or None if
    the weight lies on a wall.
    """
    C = rs.cartan_matrix
    sign = 1
    beta = list(beta)
    while True:
        for i, b in enumerate(beta):
            if b == 0:
                return None
            if b < 0:
                # s_i(beta) = beta - beta_i alpha_i, alpha_i = row i of the Cartan matrix
                beta = [beta[j] - b * int(C[i, j]) for j in range(rs.rank)]
                sign = -sign
                break
        else:
            return tuple(beta), sign


@lru_cache(maxsize=4096)
def _racah_speiser(rank: int, lam: tuple[int, ...], mu: tuple[int, ...]) -> dict:
    rs = RootSystem(rank)
    out: dict[HighestWeight, int] = {}
    for wt, mult in weight_system(rs, mu).items():
        beta = [l + w + 1 for l, w in zip(lam, wt)]
        hit = _reflect_to_dominant(rs, beta)
        if hit is None:
            continue
        dom, sign = hit
        key = HighestWeight(tuple(d - 1 for d in dom))
        out[key] = out.get(key, 0) + sign * mult
    return {k: v for k, v in sorted(out.items()) if v}


def tensor_decompose(rs: RootSystem, lam, mu) -> DecompositionTable:
    """Multiplicities of V_nu in V_lam (x) V_mu by Racah-Speiser reflection."""
    lam, mu = as_weight(lam, rs.rank), as_weight(mu, rs.rank)
    # iterate over the smaller weight system
    if weyl_dim(rs, mu) > weyl_dim(rs, lam):
        lam, mu = mu, lam
    table = _racah_speiser(rs.rank, lam.coords, mu.coords)
    if any(v < 0 for v in table.values()):
        raise ArithmeticError("negative multiplicity in Racah-Speiser sum")
    return DecompositionTable(dict(table))


def su2_admissible(nu: int, nup: int, mu: int) -> bool:
    """V_nu inside V_nup (x) V_mu for SU(2) highest weights (Clebsch-Gordan series)."""
    return abs(nup - mu) <= nu <= nup + mu and (nu + nup + mu) % 2 == 0


# intertwiners ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Intertwiner:
    """Equivariant map V_source -> V_target[0] (x) V_target[1] (SU(2))."""

    source: HighestWeight
    targets: tuple[HighestWeight, HighestWeight]
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        nu, (nup, mu) = self.source.coords[0], (t.coords[0] for t in self.targets)
        if m.shape != ((nup + 1) * (mu + 1), nu + 1):
            raise InvalidArgument(f"intertwiner matrix has shape {m.shape}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def sector(self) -> tuple[HighestWeight, HighestWeight, HighestWeight]:
        return self.source, self.targets[0], self.targets[1]

    def scaled(self, c: complex) -> "Intertwiner":
        return Intertwiner(self.source, self.targets, c * self.matrix)

    def tensor(self) -> np.ndarray:
        """The matrix reshaped to indices [nu', mu, nu]."""
        nup, mu = (t.coords[0] for t in self.targets)
        return self.matrix.reshape(nup + 1, mu + 1, -1)

    def equivariance_residual(self) -> float:
        nu, nup, mu = (w.coords[0] for w in self.sector())
        worst = 0.0
        for X in (su2.E, su2.F, su2.H):
            L = np.kron(su2.algebra_matrix(nup, X), np.eye(mu + 1)) + np.kron(
                np.eye(nup + 1), su2.algebra_matrix(mu, X)
            )
            R = L @ self.matrix - self.matrix @ su2.algebra_matrix(nu, X)
            worst = max(worst, float(np.max(np.abs(R), initial=0.0)))
        return worst


def equivariant_maps(nu: int, nup: int, mu: int) -> np.ndarray:
    """Orthonormal basis (columns, vectorized row-major) of Hom_su2(V_nu, V_nup (x) V_mu)."""
    blocks = []
    dn, dt = nu + 1, (nup + 1) * (mu + 1)
    for X in (su2.E, su2.F, su2.H):
        L = np.kron(su2.algebra_matrix(nup, X), np.eye(mu + 1)) + np.kron(
            np.eye(nup + 1), su2.algebra_matrix(mu, X)
        )
        C = su2.algebra_matrix(nu, X)
        # vec_row(L a - a C) = (L (x) I - I (x) C^T) vec_row(a)
        blocks.append(np.kron(L, np.eye(dn)) - np.kron(np.eye(dt), C.T))
    return null_space(np.vstack(blocks))


@lru_cache(maxsize=None)
def _cg_matrix(nu: int, nup: int, mu: int) -> np.ndarray:
    ns = equivariant_maps(nu, nup, mu)
    if ns.shape[1] == 0:
        raise AdmissibilityError(f"V_{nu} is not contained in V_{nup} (x) V_{mu}")
    if ns.shape[1] > 1:
        raise AdmissibilityError(f"multiplicity {ns.shape[1]} > 1 for ({nu}, {nup}, {mu})")
    a = ns[:, 0].reshape((nup + 1) * (mu + 1), nu + 1)
    # a^dagger a = (|a|_F^2 / dim nu) id by Schur; normalize to id
    a = a * np.sqrt((nu + 1) / np.vdot(a, a).real)
    k = (nup + mu - nu) // 2
    pivot = a[k, 0]  # row (0, k): highest weight of nu' times weight mu - 2k
    a = a * (abs(pivot) / pivot)
    a.setflags(write=False)
    return a


def cg_intertwiner(nu, nup, mu) -> Intertwiner:
    """Normalized Clebsch-Gordan map V_nu -> V_nup (x) V_mu for SU(2).

    Normalized so that a^dagger a = id; the phase makes the entry sending the
    highest weight vector of V_nu to (highest of V_nup) (x) (weight nu - nup
    of V_mu) real positive.
    """
    ws = [as_weight(x, 1) for x in (nu, nup, mu)]
    n, p, m = (w.coords[0] for w in ws)
    if not su2_admissible(n, p, m):
        raise AdmissibilityError(f"V_{n} is not contained in V_{p} (x) V_{m}")
    return Intertwiner(ws[0], (ws[1], ws[2]), _cg_matrix(n, p, m))


def schur_pairing(a: Intertwiner, b: Intertwiner) -> complex:
    """(b, a), defined by b^dagger a = (b, a) id_{V_nu}.

    Linear in ``a`` and conjugate-linear in ``b``.
    """
    if a.sector() != b.sector():
        raise InvalidArgument("intertwiners live in different sectors")
    M = b.matrix.conj().T @ a.matrix
    return complex(np.trace(M) / M.shape[0])


# invariant vectors -------------------------------------------------------------

def rep_generators(m: int, dual: bool) -> tuple[np.ndarray, ...]:
    """(e, f, h) on V_m, or on its dual V_m^* (X -> -X^T)."""
    gens = su2.generators(m)
    if dual:
        return tuple(-X.T for X in gens)
    return gens


def group_action(m: int, g: np.ndarray, dual: bool) -> np.ndarray:
    """pi_m(g), or the contragredient conj(pi_m(g)) on V_m^* (unitary reps)."""
    M = su2.group_matrix(m, g)
    return M.conj() if dual else M


def invariant_basis(slots: Sequence[tuple[int, bool]]) -> np.ndarray:
    """Orthonormal basis of SU(2)-invariants in a tensor product of slots.

    ``slots`` lists (highest weight, is_dual).  Returns an array of shape
    (k, d_1, ..., d_n) with k the dimension of the invariant space.
    """
    dims = [m + 1 for m, _ in slots]
    total = int(np.prod(dims)) if dims else 1
    if not slots:
        return np.ones((1,), dtype=complex).reshape(1)
    rows = []
    for g in range(3):
        op = np.zeros((total, total), dtype=complex)
        for i, (m, dual) in enumerate(slots):
            X = rep_generators(m, dual)[g]
            left = np.eye(int(np.prod(dims[:i])))
            right = np.eye(int(np.prod(dims[i + 1 :])))
            op += np.kron(np.kron(left, X), right)
        rows.append(op)
    ns = null_space(np.vstack(rows))
    basis = ns.T.reshape((ns.shape[1],) + tuple(dims))
    # deterministic phase: make the largest-magnitude entry real positive
    for k in range(basis.shape[0]):
        flat = basis[k].ravel()
        j = int(np.argmax(np.abs(flat) > np.abs(flat).max() * (1 - 1e-9)))
        basis[k] *= abs(flat[j]) / flat[j]
    return basis


def singlet_vector(m: int) -> np.ndarray:
    """Unit invariant in V_m (x) V_m, read off the normalized CG map V_0 -> V_m (x) V_m."""
    return cg_intertwiner(0, m, m).matrix[:, 0].copy()


__all__ = [
    "DecompositionTable",
    "Intertwiner",
    "cg_intertwiner",
    "equivariant_maps",
    "invariant_basis",
    "schur_pairing",
    "singlet_vector",
    "su2_admissible",
    "tensor_decompose",
]
