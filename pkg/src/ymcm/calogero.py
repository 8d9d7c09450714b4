"""Trace functions, Felder's dynamical r-matrix and radial spin Calogero-Moser operators (SU(2)).

Conventions
-----------
* A configuration has spins mu_1..mu_N and a cyclic sector nu_1..nu_N with
  nu_0 = nu_N, and intertwiners b_i : V_{nu_i} -> V_{nu_{i-1}} (x) V_{mu_i}.
* The trace function at g = (g_1, ..., g_N) is
  ``Psi(g) = Tr(b_1 pi(g_1) b_2 pi(g_2) ... b_N pi(g_N))`` with values in
  V_{mu_1} (x) ... (x) V_{mu_N} (ascending tensor order).  It satisfies
  ``Psi(h_i g_i h_{i+1}^-1) = (x)_i pi(h_i) Psi(g)``.
* On the torus, ``Psi(theta) = Psi(1, ..., 1, diag(e^{i theta}, e^{-i theta}))``.
  The normalized trace function is ``F = delta * Psi`` with
  ``delta = 2 i sin(theta)``.
* The Cartan variable is lambda = i q.  For SU(2):
  ``Delta_lambda = -1/2 d^2/dtheta^2``, ``(h^{(j)}, d/dlambda) = -(i/2) H_j d/dtheta``,
  ``h_alpha = e^{2 i theta}`` and ``coth_alpha = -i cot(theta)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import pi
from typing import Sequence

import numpy as np

from . import su2
from .errors import AdmissibilityError, InvalidArgument, SingularityError
from .lie import SU2, CartanPoint, HighestWeight, RootSystem, as_weight, casimir2, weyl_denominator, weyl_numerator
from .tensor import Intertwiner, cg_intertwiner, schur_pairing, su2_admissible


def c2(m: int) -> float:
    """SU(2) Casimir m(m+2)/2."""
    return casimir2(SU2, m)


def _ints(xs) -> tuple[int, ...]:
    return tuple(as_weight(x, 1).coords[0] for x in xs)


@dataclass(frozen=True)
class SpinChainConfig:
    spins: tuple[int, ...]
    sector: tuple[int, ...]
    chain: tuple[Intertwiner, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        spins, sector = _ints(self.spins), _ints(self.sector)
        if not spins or len(spins) != len(sector):
            raise InvalidArgument("need N >= 1 spins and a sector of the same length")
        object.__setattr__(self, "spins", spins)
        object.__setattr__(self, "sector", sector)
        N = len(spins)
        for i in range(N):
            if not su2_admissible(sector[i], sector[i - 1], spins[i]):
                raise AdmissibilityError(
                    f"V_{sector[i]} is not in V_{sector[i - 1]} (x) V_{spins[i]} (position {i + 1})"
                )
        if self.chain is None:
            chain = tuple(cg_intertwiner(sector[i], sector[i - 1], spins[i]) for i in range(N))
            object.__setattr__(self, "chain", chain)
        else:
            chain = tuple(self.chain)
            if len(chain) != N:
                raise InvalidArgument("chain length differs from N")
            for i, b in enumerate(chain):
                if _ints(b.sector()) != (sector[i], sector[i - 1], spins[i]):
                    raise InvalidArgument(f"intertwiner {i + 1} has the wrong sector")
            object.__setattr__(self, "chain", chain)

    @property
    def N(self) -> int:
        return len(self.spins)

    @property
    def dim(self) -> int:
        return int(np.prod([m + 1 for m in self.spins]))

    def nu(self, i: int) -> int:
        """nu_i with cyclic indexing (nu_0 = nu_N)."""
        return self.sector[(i - 1) % self.N]

    def with_chain(self, chain: Sequence[Intertwiner]) -> "SpinChainConfig":
        return SpinChainConfig(self.spins, self.sector, tuple(chain))

    def kzb_eigenvalue(self, i: int) -> float:
        """(c2(nu_i) - c2(nu_{i-1})) / 2 for 1 <= i <= N."""
        return (c2(self.nu(i)) - c2(self.nu(i - 1))) / 2

    def cm_eigenvalue(self) -> float:
        return c2(self.sector[-1])


def admissible_sectors(spins: Sequence[int], casimir_cutoff: float) -> list[tuple[int, ...]]:
    """All cyclic sectors (nu_1..nu_N) with every c2(nu_i) <= cutoff, lexicographic."""
    spins = _ints(spins)
    numax = 0
    while c2(numax + 1) <= casimir_cutoff + 1e-12:
        numax += 1
    out = []
    for sector in itertools.product(range(numax + 1), repeat=len(spins)):
        if all(su2_admissible(sector[i], sector[i - 1], spins[i]) for i in range(len(spins))):
            out.append(sector)
    return out


def configs(spins: Sequence[int], casimir_cutoff: float) -> list[SpinChainConfig]:
    return [SpinChainConfig(tuple(spins), s) for s in admissible_sectors(spins, casimir_cutoff)]


# trace functions --------------------------------------------------------------------

def chain_tensor(cfg: SpinChainConfig) -> np.ndarray:
    """B[x_0, s_1, ..., s_N, y_N] = (b_1 b_2 ... b_N) as a tensor."""
    B = cfg.chain[0].tensor()
    for b in cfg.chain[1:]:
        B = np.tensordot(B, b.tensor(), axes=([-1], [0]))
    return B


def _diag_chain(cfg: SpinChainConfig) -> np.ndarray:
    B = chain_tensor(cfg)
    d = B.shape[0]
    flat = B.reshape(d, -1, d)
    return np.einsum("asa->as", flat)


def _theta(q) -> np.ndarray:
    if isinstance(q, CartanPoint):
        if len(q.angles) != 1:
            raise InvalidArgument("SU(2) Cartan points have one angle")
        return np.asarray(q.angles[0])
    return np.asarray(q, dtype=float)


def trace_function(cfg: SpinChainConfig, q) -> np.ndarray:
    """Psi(theta) in (x)V_mu; ``q`` may be an array of angles (leading axes kept)."""
    th = _theta(q)
    w = su2.weights(cfg.sector[-1])
    phases = np.exp(1j * th[..., None] * w)
    return phases @ _diag_chain(cfg)


def trace_function_group(cfg: SpinChainConfig, gs: np.ndarray) -> np.ndarray:
    """Psi(g_1, ..., g_N) for SU(2) matrices ``gs`` of shape (..., N, 2, 2)."""
    gs = np.asarray(gs, dtype=complex)
    if gs.shape[-3] != cfg.N:
        raise InvalidArgument(f"expected {cfg.N} group elements")
    lead = gs.shape[:-3]
    b0 = cfg.chain[0].tensor()
    d0 = b0.shape[0]
    # T[..., x0, s, y]
    T = np.broadcast_to(b0.reshape(d0, b0.shape[1], b0.shape[2]), lead + b0.shape).astype(complex)
    for i in range(cfg.N):
        G = su2.group_matrix(cfg.sector[i], gs[..., i, :, :])
        T = np.einsum("...xsy,...yz->...xsz", T, G)
        if i + 1 < cfg.N:
            b = cfg.chain[i + 1].tensor()
            T = np.einsum("...xsy,ytz->...xstz", T, b)
            T = T.reshape(T.shape[:-3] + (T.shape[-3] * T.shape[-2], T.shape[-1]))
    return np.einsum("...xsx->...s", T)


def torus_point_tuple(N: int, theta) -> np.ndarray:
    """(1, ..., 1, t(theta)) as an array (..., N, 2, 2)."""
    th = np.asarray(theta, dtype=float)
    out = np.broadcast_to(np.eye(2, dtype=complex), th.shape + (N, 2, 2)).copy()
    out[..., N - 1, :, :] = su2.torus_element(th)
    return out


def _check_regular(th, margin: float = 0.0):
    th = np.asarray(th, dtype=float)
    dist = np.abs((2 * th + pi) % (2 * pi) - pi)
    if np.any(dist <= margin) or np.any(np.abs(np.sin(th)) < 1e-14):
        raise SingularityError(f"theta = {th} is (within {margin} of) a root hyperplane")


def normalized_trace(cfg: SpinChainConfig, q) -> np.ndarray:
    """F = delta(theta) Psi(theta)."""
    th = _theta(q)
    _check_regular(th)
    return np.asarray(2j * np.sin(th))[..., None] * trace_function(cfg, th)


def zero_weight_mask(spins: Sequence[int]) -> np.ndarray:
    total = np.zeros(1, dtype=int)
    for m in spins:
        total = (total[:, None] + su2.weights(m)[None, :]).ravel()
    return total == 0


def zero_weight_leak(spins: Sequence[int], vec: np.ndarray, scale: float | None = None) -> float:
    """Largest component outside the zero-weight subspace, relative to ``scale`` (default: the norm)."""
    vec = np.asarray(vec)
    mask = zero_weight_mask(spins)
    nrm = np.linalg.norm(vec) if scale is None else scale
    return float(np.max(np.abs(vec[..., ~mask]), initial=0.0) / nrm) if nrm else 0.0


def weyl_reflection_matrix(spins: Sequence[int]) -> np.ndarray:
    """(x)_i pi_i(w) with w = [[0, -1], [1, 0]], which maps t(theta) to t(-theta) by conjugation."""
    w = np.array([[0, -1], [1, 0]], dtype=complex)
    out = np.ones((1, 1), dtype=complex)
    for m in spins:
        out = np.kron(out, su2.group_matrix(m, w))
    return out


# operators on (x) V_mu ------------------------------------------------------------------

@lru_cache(maxsize=256)
def _embedded(spins: tuple[int, ...]) -> tuple:
    """Per-factor (e, f, h) embedded in the full tensor product."""
    dims = [m + 1 for m in spins]
    out = []
    for i, m in enumerate(spins):
        left = np.eye(int(np.prod(dims[:i])))
        right = np.eye(int(np.prod(dims[i + 1 :])))
        out.append(tuple(np.kron(np.kron(left, X), right) for X in su2.generators(m)))
    return tuple(out)


def embed_pair(spins: Sequence[int], i: int, k: int, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """X acting on factor i and Y on factor k (0-based, i != k)."""
    spins = _ints(spins)
    ops = [np.eye(m + 1) for m in spins]
    ops[i] = X
    ops[k] = Y
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def _r_coefficients(theta: float, deriv: bool = False) -> tuple[complex, complex, complex]:
    """Coefficients (c_HH, c_fe, c_ef) of r = c_HH H(x)H + c_fe f(x)e + c_ef e(x)f."""
    h = np.exp(2j * theta)
    if not deriv:
        return -0.25, -1 / (1 - 1 / h), -1 / (1 - h)
    dh = 2j * h
    # d/dtheta of -1/(1 - h^-1) and -1/(1 - h)
    return 0.0, (dh / h**2) / (1 - 1 / h) ** 2, -dh / (1 - h) ** 2


def r_matrix(theta: float, mu1: int, mu2: int, deriv: bool = False) -> np.ndarray:
    """Felder's r(theta) on V_mu1 (x) V_mu2 (or its theta-derivative).

    r = -1/2 sum_j h_j (x) h_j - f (x) e / (1 - h_alpha^-1) - e (x) f / (1 - h_alpha),
    with orthonormal Cartan element h_1 = H / sqrt 2.
    """
    _check_regular(theta)
    e1, f1, H1 = su2.generators(mu1)
    e2, f2, H2 = su2.generators(mu2)
    cHH, cfe, cef = _r_coefficients(float(theta), deriv)
    return cHH * np.kron(H1, H2) + cfe * np.kron(f1, e2) + cef * np.kron(e1, f2)


def mixed_casimir(mu1: int, mu2: int) -> np.ndarray:
    """Omega = 1/2 H(x)H + e(x)f + f(x)e."""
    e1, f1, H1 = su2.generators(mu1)
    e2, f2, H2 = su2.generators(mu2)
    return 0.5 * np.kron(H1, H2) + np.kron(e1, f2) + np.kron(f1, e2)


def flip(M: np.ndarray, d1: int, d2: int) -> np.ndarray:
    """Conjugate an operator on V1 (x) V2 by the swap, giving one on V2 (x) V1."""
    T = M.reshape(d1, d2, d1, d2).transpose(1, 0, 3, 2)
    return T.reshape(d1 * d2, d1 * d2)


@dataclass(frozen=True, eq=False)
class DynamicalR:
    q: CartanPoint
    pair: tuple[int, int]
    spins: tuple[int, ...]
    matrix: np.ndarray

    def embedded(self) -> np.ndarray:
        """r_{ik} acting on the full tensor product (first leg on factor i)."""
        i, k = self.pair
        return embed_r(self.spins, i, k, self.q.angles[0])


def felder_r(q, pair: tuple[int, int], spins: Sequence[int]) -> DynamicalR:
    """r_{ik}(q) for 0-based factor indices (i, k) of ``spins``."""
    spins = _ints(spins)
    th = float(_theta(q))
    i, k = pair
    if i == k or not (0 <= i < len(spins) and 0 <= k < len(spins)):
        raise InvalidArgument(f"bad factor pair {pair}")
    return DynamicalR(CartanPoint((th,)), (i, k), spins, r_matrix(th, spins[i], spins[k]))


def embed_r(spins: Sequence[int], i: int, k: int, theta: float, deriv: bool = False) -> np.ndarray:
    """r_{ik}(theta) with the first leg on factor i and the second on factor k."""
    spins = _ints(spins)
    _check_regular(theta)
    gi, gk = su2.generators(spins[i]), su2.generators(spins[k])
    cHH, cfe, cef = _r_coefficients(float(theta), deriv)
    out = cfe * embed_pair(spins, i, k, gi[1], gk[0]) + cef * embed_pair(spins, i, k, gi[0], gk[1])
    if cHH:
        out = out + cHH * embed_pair(spins, i, k, gi[2], gk[2])
    return out


def rmatrix_residuals(spins: Sequence[int], theta: float) -> dict[str, float]:
    """Max-entry residuals of the r-matrix identities at one point.

    ``spins`` has three entries; two-factor identities use the first two.
    The Yang-Baxter residual uses analytic theta-derivatives.
    """
    m1, m2, m3 = _ints(spins)
    d1, d2 = m1 + 1, m2 + 1
    r = r_matrix(theta, m1, m2)
    r_minus = r_matrix(-theta, m1, m2)
    r21 = flip(r_matrix(theta, m2, m1), d2, d1)  # r^{21}(theta) on V1 (x) V2
    out = {}
    out["inversion"] = np.abs(r_minus - r21).max()
    out["casimir"] = np.abs(r + r_minus + mixed_casimir(m1, m2)).max()
    t2 = np.kron(np.eye(d1), su2.torus_matrix(m2, theta))
    t2i = np.kron(np.eye(d1), su2.torus_matrix(m2, -theta))
    H1, H2 = su2.generators(m1)[2], su2.generators(m2)[2]
    out["shift"] = np.abs(t2i @ r @ t2 - (-0.5 * np.kron(H1, H2) - r21)).max()
    s = 0.37
    tt = np.kron(su2.torus_matrix(m1, s), su2.torus_matrix(m2, s))
    out["cartan_invariance"] = np.abs(tt @ r @ np.conj(tt.T) - r).max()
    sp = (m1, m2, m3)
    r12, r13, r23 = embed_r(sp, 0, 1, theta), embed_r(sp, 0, 2, theta), embed_r(sp, 1, 2, theta)
    d12, d13, d23 = (embed_r(sp, *p, theta, deriv=True) for p in ((0, 1), (0, 2), (1, 2)))
    Hs = [h for (_, _, h) in _embedded(sp)]
    # sum_k h_k^{(j)} d/dlambda_k = -(i/2) H_j d/dtheta
    dyn = -0.5j * (Hs[0] @ d23 - Hs[1] @ d13 + Hs[2] @ d12)
    comm = lambda a, b: a @ b - b @ a
    out["yang_baxter"] = np.abs(dyn + comm(r12, r13) + comm(r12, r23) + comm(r13, r23)).max()
    return {k: float(v) for k, v in out.items()}


def d_term(spins: Sequence[int], i: int, theta: float) -> np.ndarray:
    """d(lambda)_i = 1/2 coth_alpha H_i with coth_alpha = -i cot(theta)."""
    _check_regular(theta)
    return 0.5 * (-1j / np.tan(theta)) * _embedded(_ints(spins))[i][2]


def intertwiner_casimir_scalar(b: Intertwiner) -> float:
    """s with (r_12 + r_21) b = s b, namely (c2(nu') + c2(mu) - c2(nu)) / 2."""
    nu, nup, mu = _ints(b.sector())
    return (c2(nup) + c2(mu) - c2(nu)) / 2


def intertwiner_casimir_identity(b: Intertwiner, q) -> float:
    """Max-entry residual of (r_12 + r_21)(q) b = s b (see :func:`intertwiner_casimir_scalar`)."""
    nu, nup, mu = _ints(b.sector())
    th = float(_theta(q))
    r12 = r_matrix(th, nup, mu)
    r21 = flip(r_matrix(th, mu, nup), mu + 1, nup + 1)
    lhs = (r12 + r21) @ b.matrix
    return float(np.abs(lhs - intertwiner_casimir_scalar(b) * b.matrix).max())


# radial operators ---------------------------------------------------------------------

@dataclass(frozen=True)
class RadialOperatorResult:
    """Operator applied to F; ``residual`` and ``zero_weight_leak`` are relative to |F|."""

    value: np.ndarray
    function: np.ndarray
    eigenvalue: float
    fd_step: float
    residual: float
    zero_weight_leak: float


def _stencil_values(func, th: float, step: float, offsets) -> np.ndarray:
    return func(th + step * np.asarray(offsets, dtype=float))


def _relative(value, eigenvalue, F) -> float:
    nrm = np.linalg.norm(F)
    return float(np.linalg.norm(value - eigenvalue * F) / nrm)


def cm_potential(spins: Sequence[int], theta: float) -> np.ndarray:
    """2 pi(f e) / ((1 - h_alpha)(1 - h_alpha^-1)) with the diagonal action on (x)V_mu."""
    _check_regular(theta)
    emb = _embedded(_ints(spins))
    E = sum(g[0] for g in emb)
    Fm = sum(g[1] for g in emb)
    h = np.exp(2j * theta)
    return 2 * (Fm @ E) / ((1 - h) * (1 - 1 / h))


def apply_cm_hamiltonian(cfg: SpinChainConfig, q, fd_step: float = 1e-3) -> RadialOperatorResult:
    """H F = Delta F + potential F - |rho|^2 F, Laplacian by central differences."""
    th = float(_theta(q))
    # the stencil [th - h, th + h] must not reach a root hyperplane
    _check_regular(th, margin=2 * fd_step)
    vals = _stencil_values(lambda t: normalized_trace(cfg, t), th, fd_step, [-1, 0, 1])
    F = vals[1]
    lap = -0.5 * (vals[0] - 2 * F + vals[2]) / fd_step**2
    HF = lap + cm_potential(cfg.spins, th) @ F - SU2.rho_norm2 * F
    ev = cfg.cm_eigenvalue()
    leak = zero_weight_leak(cfg.spins, HF, np.linalg.norm(F))
    return RadialOperatorResult(HF, F, ev, fd_step, _relative(HF, ev, F), leak)


def kzb_operator_matrix(spins: Sequence[int], i: int, theta: float) -> np.ndarray:
    """-sum_{k<i} r_{ki} + sum_{k>i} r_{ik} for 1-based i."""
    spins = _ints(spins)
    N = len(spins)
    D = int(np.prod([m + 1 for m in spins]))
    out = np.zeros((D, D), dtype=complex)
    for k in range(1, i):
        out -= embed_r(spins, k - 1, i - 1, theta)
    for k in range(i + 1, N + 1):
        out += embed_r(spins, i - 1, k - 1, theta)
    return out


def apply_kzb(cfg: SpinChainConfig, i: int, q, fd_step: float = 1e-3, variant: str = "normalized") -> RadialOperatorResult:
    """D_i applied to F = delta Psi (``normalized``) or to Psi (``unnormalized``).

    D_i = (h^{(i)}, d/dlambda) - sum_{k<i} r_{ki} + sum_{k>i} r_{ik}; the
    unnormalized variant adds d(lambda)_i.  Eigenvalue (c2(nu_i) - c2(nu_{i-1}))/2.
    """
    if not 1 <= i <= cfg.N:
        raise InvalidArgument(f"i must be in 1..{cfg.N}")
    th = float(_theta(q))
    # the stencil [th - h, th + h] must not reach a root hyperplane
    _check_regular(th, margin=2 * fd_step)
    if variant == "normalized":
        func = lambda t: normalized_trace(cfg, t)
    elif variant == "unnormalized":
        func = lambda t: trace_function(cfg, t)
    else:
        raise InvalidArgument(f"unknown variant {variant!r}")
    vals = _stencil_values(func, th, fd_step, [-1, 0, 1])
    F = vals[1]
    dF = (vals[2] - vals[0]) / (2 * fd_step)
    Hi = _embedded(cfg.spins)[i - 1][2]
    out = -0.5j * (Hi @ dF) + kzb_operator_matrix(cfg.spins, i, th) @ F
    if variant == "unnormalized":
        out = out + d_term(cfg.spins, i - 1, th) @ F
    ev = cfg.kzb_eigenvalue(i)
    leak = zero_weight_leak(cfg.spins, out, np.linalg.norm(F))
    return RadialOperatorResult(out, F, ev, fd_step, _relative(out, ev, F), leak)


def convergence_ratio(apply, fd_step: float) -> tuple[float, float, float]:
    """(residual at h, residual at h/2, ratio); order 2 gives a ratio near 4."""
    r1 = apply(fd_step).residual
    r2 = apply(fd_step / 2).residual
    return r1, r2, (r1 / r2 if r2 else float("inf"))


# scalar checks in general rank ---------------------------------------------------------

def _laplacian_fd(rs: RootSystem, func, q: np.ndarray, step: float):
    """Delta_lambda = -sum_ij (omega_i, omega_j) d_i d_j by central differences."""
    B = rs.bilinear_form
    r = rs.rank
    f0 = func(q)
    total = 0
    for i in range(r):
        for j in range(r):
            if B[i, j] == 0:
                continue
            if i == j:
                e = np.zeros(r)
                e[i] = step
                d2 = (func(q + e) - 2 * f0 + func(q - e)) / step**2
            else:
                ei, ej = np.zeros(r), np.zeros(r)
                ei[i], ej[j] = step, step
                d2 = (func(q + ei + ej) - func(q + ei - ej) - func(q - ei + ej) + func(q - ei - ej)) / (4 * step**2)
            total = total - B[i, j] * d2
    return total


def _grad_fd(func, q: np.ndarray, step: float) -> np.ndarray:
    out = []
    for i in range(len(q)):
        e = np.zeros(len(q))
        e[i] = step
        out.append((func(q + e) - func(q - e)) / (2 * step))
    return np.array(out)


def delta_lemma_residual(q, fd_step: float = 1e-3, rs: RootSystem = SU2) -> float:
    """|Delta(1/delta) + (rho,rho)/delta + D(1/delta)| / |1/delta| by finite differences.

    D = sum_{alpha>0} coth_alpha (alpha, d/dlambda), coth_alpha = -i cot((alpha,q)/2),
    (alpha, d/dlambda) = -i sum_k (alpha, omega_k) d/dq_k.
    """
    qa = np.atleast_1d(np.asarray(q.angles if isinstance(q, CartanPoint) else q, dtype=float))
    inv = lambda x: 1 / weyl_denominator(rs, x)
    u = inv(qa)
    if not np.isfinite(u):
        raise SingularityError("singular point")
    lap = _laplacian_fd(rs, inv, qa, fd_step)
    grad = _grad_fd(inv, qa, fd_step)
    D = 0
    for i, j in rs.positive_roots:
        coeff = np.zeros(rs.rank)
        coeff[i:j] = 1.0  # (alpha, omega_k) = 1 for k in [i, j)
        angle = float(coeff @ rs.cartan_matrix @ qa)  # (alpha, q)
        D += (-1j / np.tan(angle / 2)) * (-1j) * (coeff @ grad)
    return float(abs(lap + rs.rho_norm2 * u + D) / abs(u))


def weyl_numerator_residual(rs: RootSystem, lam, q, fd_step: float = 1e-3) -> float:
    """(Delta - |rho|^2) A_{lam+rho} = c2(lam) A_{lam+rho}, relative residual."""
    qa = np.atleast_1d(np.asarray(q.angles if isinstance(q, CartanPoint) else q, dtype=float))
    num = lambda x: weyl_numerator(rs, lam, x)
    A = num(qa)
    lhs = _laplacian_fd(rs, num, qa, fd_step) - rs.rho_norm2 * A
    scale = max(abs(A), 1e-300)
    return float(abs(lhs - casimir2(rs, lam) * A) / scale)


# orthogonality and propagators ------------------------------------------------------------

def torus_rule(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint nodes on [0, 2 pi) with SU(2) Weyl-integration weights |delta|^2 / (2 n)."""
    n = int(resolution)
    th = 2 * np.pi * (np.arange(n) + 0.5) / n
    w = (4 * np.sin(th) ** 2) / (2 * n)
    return th, w


def trace_orthogonality(cfg1: SpinChainConfig, cfg2: SpinChainConfig, resolution: int = 64) -> complex:
    """int_{G^N} (Psi_1(g), Psi_2(g)) dg, reduced to the torus by gauge invariance.

    The pairing is conjugate-linear in the first argument.  The trapezoid rule
    is exact once ``resolution`` exceeds the trigonometric degree of the
    integrand (at most nu_N + nu_N' + 2).
    """
    if cfg1.spins != cfg2.spins:
        raise InvalidArgument("trace functions live in different spin spaces")
    th, w = torus_rule(resolution)
    P1 = trace_function(cfg1, th)
    P2 = trace_function(cfg2, th)
    return complex(np.sum(w * np.einsum("ts,ts->t", P1.conj(), P2)))


def orthogonality_prediction(cfg1: SpinChainConfig, cfg2: SpinChainConfig) -> complex:
    """prod_i delta_{nu_i nu'_i} (b_i, a_i)."""
    if cfg1.sector != cfg2.sector:
        return 0.0
    out = 1.0 + 0j
    for a, b in zip(cfg2.chain, cfg1.chain):
        out *= schur_pairing(a, b)
    return out


@dataclass(frozen=True)
class Propagator:
    """Spectral multi-time propagator sum_nu exp(-sum_i c2(nu_i) A_i) Psi_nu(g) Psi_nu(g')^dagger."""

    spins: tuple[int, ...]
    areas: tuple[float, ...]
    cutoff: float

    def __post_init__(self):
        spins = _ints(self.spins)
        areas = tuple(float(a) for a in self.areas)
        if len(areas) != len(spins):
            raise InvalidArgument("need one area per spin")
        if any(not a > 0 for a in areas):
            from .errors import DivergentSeriesError

            raise DivergentSeriesError(f"areas must be positive, got {areas}")
        object.__setattr__(self, "spins", spins)
        object.__setattr__(self, "areas", areas)

    @property
    def N(self) -> int:
        return len(self.spins)

    @property
    def dim(self) -> int:
        return int(np.prod([m + 1 for m in self.spins]))

    def sectors(self) -> list[tuple[int, ...]]:
        return admissible_sectors(self.spins, self.cutoff)

    def weight(self, sector: Sequence[int]) -> float:
        return float(np.exp(-sum(c2(n) * a for n, a in zip(sector, self.areas))))

    def spectrum(self) -> dict:
        return {s: self.weight(s) for s in self.sectors()}

    def kernel(self, theta, theta_p) -> np.ndarray:
        """U at gauge-fixed boundary points (1, .., 1, t(theta)) and (1, .., 1, t(theta'))."""
        D = self.dim
        th, thp = np.asarray(theta, float), np.asarray(theta_p, float)
        out = np.zeros(th.shape + (D,) + thp.shape + (D,), dtype=complex)
        for s in self.sectors():
            cfg = SpinChainConfig(self.spins, s)
            out = out + self.weight(s) * np.multiply.outer(
                trace_function(cfg, theta), trace_function(cfg, theta_p).conj()
            )
        return out

    def kernel_group(self, gs: np.ndarray, gs_p: np.ndarray) -> np.ndarray:
        """U(g, g') for N-tuples of SU(2) matrices (N, 2, 2)."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for s in self.sectors():
            cfg = SpinChainConfig(self.spins, s)
            out = out + self.weight(s) * np.outer(trace_function_group(cfg, gs), trace_function_group(cfg, gs_p).conj())
        return out


def compose_propagators(U1: Propagator, U2: Propagator) -> Propagator:
    """Spectral composition: areas add sector by sector."""
    if U1.spins != U2.spins:
        raise InvalidArgument("propagators act on different spin spaces")
    if U1.cutoff != U2.cutoff:
        raise InvalidArgument("propagators use different cutoffs")
    return Propagator(U1.spins, tuple(a + b for a, b in zip(U1.areas, U2.areas)), U1.cutoff)


def operator_product(U1: Propagator, U2: Propagator, theta, theta_p, resolution: int = 64) -> np.ndarray:
    """int U1(g, g'') U2(g'', g') dg'' by gauge-fixed torus quadrature."""
    th, w = torus_rule(resolution)
    K1 = U1.kernel(theta, th)  # (D, n, D)
    K2 = U2.kernel(th, theta_p)  # (n, D, D)
    return np.einsum("atb,t,tbc->ac", K1, w, K2)


def apply_to_trace(U: Propagator, cfg: SpinChainConfig, theta, resolution: int = 64) -> np.ndarray:
    """(U Psi)(theta) = int U(theta, g'') Psi(g'') dg''."""
    th, w = torus_rule(resolution)
    K = U.kernel(theta, th)
    return np.einsum("atb,t,tb->a", K, w, trace_function(cfg, th))


def sample_regular_theta(rng: np.random.Generator, margin: float) -> float:
    """Uniform theta in [0, 2 pi) whose root pairing 2 theta stays ``margin`` away from 2 pi Z."""
    while True:
        th = float(rng.uniform(0, 2 * pi))
        if abs((2 * th + pi) % (2 * pi) - pi) >= margin:
            return th
