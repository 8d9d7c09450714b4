"""Root-system data and scalar representation theory for type A_r = su(r+1).

Normalization: the invariant form has (alpha, alpha) = 2 for every root.  Any
rescaling of the Killing form is absorbed into the area parameter of the heat
kernels, so identities downstream are covariant under this choice.

Coordinates
-----------
* Highest weights are stored by Dynkin labels (fundamental-weight basis).
* Internally a weight is also written as an integer vector of length r+1
  (a "partition" vector), defined modulo the all-ones vector.
* A Cartan point ``q`` has coordinates in the simple-coroot basis, so that
  ``(omega_j, q) = q_j`` and ``h_alpha = exp(i (alpha, q))``.  For su(2),
  ``q = theta`` is the torus element diag(e^{i theta}, e^{-i theta}).
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import factorial, pi
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument


@dataclass(frozen=True, order=True)
class HighestWeight:
    coords: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if any(c < 0 for c in coords):
            raise InvalidArgument(f"highest weight must be dominant, got {coords}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, *coords: int) -> "HighestWeight":
        return cls(tuple(coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.coords)) + ")"


@dataclass(frozen=True)
class CartanPoint:
    angles: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(float(a) for a in np.atleast_1d(self.angles)))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.angles)


@dataclass(frozen=True)
class WeightSystem:
    """Weight multiplicities of one irrep, keyed by Dynkin labels."""

    highest: HighestWeight
    entries: dict = field(compare=False)

    def total(self) -> int:
        return sum(self.entries.values())

    def __getitem__(self, weight) -> int:
        return self.entries.get(tuple(weight), 0)

    def items(self):
        return self.entries.items()


def as_weight(x, rank: int | None = None) -> HighestWeight:
    """Coerce an int (rank 1), a sequence, or a HighestWeight."""
    if isinstance(x, HighestWeight):
        w = x
    elif isinstance(x, (int, np.integer)):
        w = HighestWeight((int(x),))
    else:
        w = HighestWeight(tuple(x))
    if rank is not None and w.rank != rank:
        raise InvalidArgument(f"weight {w} has rank {w.rank}, expected {rank}")
    return w


def _angles(q) -> np.ndarray:
    if isinstance(q, CartanPoint):
        return q.array
    return np.asarray(q, dtype=float)


@dataclass(frozen=True)
class RootSystem:
    """Root system of type A_r.  Derived data are computed lazily."""

    rank: int

    def __post_init__(self):
        if int(self.rank) < 1:
            raise InvalidArgument("rank must be positive")

    @classmethod
    def su(cls, n: int) -> "RootSystem":
        return cls(n - 1)

    @property
    def name(self) -> str:
        return f"su{self.rank + 1}"

    @property
    def n(self) -> int:
        return self.rank + 1

    @cached_property
    def cartan_matrix(self) -> np.ndarray:
        r = self.rank
        return 2 * np.eye(r, dtype=int) - np.eye(r, k=1, dtype=int) - np.eye(r, k=-1, dtype=int)

    @cached_property
    def simple_roots(self) -> np.ndarray:
        out = np.zeros((self.rank, self.n))
        for i in range(self.rank):
            out[i, i], out[i, i + 1] = 1.0, -1.0
        return out

    @cached_property
    def fundamental_weights(self) -> np.ndarray:
        out = np.zeros((self.rank, self.n))
        for i in range(self.rank):
            out[i, : i + 1] = 1.0
        return out - out.mean(axis=1, keepdims=True)

    @cached_property
    def positive_roots(self) -> list[tuple[int, int]]:
        """Positive roots e_i - e_j (i < j), as index pairs."""
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)]

    @cached_property
    def _form_exact(self) -> tuple[tuple[Fraction, ...], ...]:
        n = self.n
        return tuple(
            tuple(Fraction(min(i, j) * (n - max(i, j)), n) for j in range(1, n))
            for i in range(1, n)
        )

    @cached_property
    def bilinear_form(self) -> np.ndarray:
        """(omega_i, omega_j), i.e. the form in the fundamental-weight basis."""
        return np.array([[float(x) for x in row] for row in self._form_exact])

    @cached_property
    def rho(self) -> HighestWeight:
        return HighestWeight((1,) * self.rank)

    @cached_property
    def rho_norm2(self) -> float:
        return float(inner_exact(self, self.rho.coords, self.rho.coords))

    @property
    def weyl_order(self) -> int:
        return factorial(self.n)

    @cached_property
    def weyl_group(self) -> list[tuple[tuple[int, ...], int]]:
        """Permutations of the ambient coordinates with their signs."""
        out = []
        for perm in itertools.permutations(range(self.n)):
            out.append((perm, _perm_sign(perm)))
        return out


SU2 = RootSystem(1)
SU3 = RootSystem(2)


def _perm_sign(perm: Sequence[int]) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def inner_exact(rs: RootSystem, x: Sequence[int], y: Sequence[int]) -> Fraction:
    """(x, y) for weights given by Dynkin labels, exactly."""
    B = rs._form_exact
    return sum(
        (B[i][j] * x[i] * y[j] for i in range(rs.rank) for j in range(rs.rank) if x[i] and y[j]),
        Fraction(0),
    )


def to_partition(labels: Sequence[int]) -> tuple[int, ...]:
    """Dynkin labels -> integer ambient vector with last entry 0."""
    out = [0]
    for m in reversed(labels):
        out.append(out[-1] + m)
    return tuple(reversed(out))


def from_partition(vec: Sequence[int]) -> tuple[int, ...]:
    return tuple(vec[i] - vec[i + 1] for i in range(len(vec) - 1))


def casimir2_exact(rs: RootSystem, lam) -> Fraction:
    lam = as_weight(lam, rs.rank)
    x = lam.coords
    two_rho_plus = tuple(c + 2 for c in x)
    return inner_exact(rs, x, two_rho_plus)


@lru_cache(maxsize=4096)
def _casimir2_cached(rank: int, coords: tuple[int, ...]) -> float:
    return float(casimir2_exact(RootSystem(rank), coords))


def casimir2(rs: RootSystem, lam) -> float:
    """Quadratic Casimir c_2(lam) = (lam, lam + 2 rho)."""
    lam = as_weight(lam, rs.rank)
    return _casimir2_cached(rs.rank, lam.coords)


@lru_cache(maxsize=4096)
def _dim_cached(coords: tuple[int, ...]) -> int:
    p = to_partition(coords)
    n = len(p)
    num, den = 1, 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= p[i] - p[j] + j - i
            den *= j - i
    return num // den


def weyl_dim(rs: RootSystem, lam) -> int:
    """Weyl dimension formula prod_{alpha>0} (lam+rho, alpha) / (rho, alpha)."""
    lam = as_weight(lam, rs.rank)
    return _dim_cached(lam.coords)


def dual_weight(rs: RootSystem, lam) -> HighestWeight:
    """lam* = -w0(lam); for type A this reverses the Dynkin labels."""
    lam = as_weight(lam, rs.rank)
    return HighestWeight(tuple(reversed(lam.coords)))


def dominant_weights_below(rs: RootSystem, casimir_cutoff: float) -> list[HighestWeight]:
    """All dominant weights with c_2 <= cutoff, sorted by (c_2, coords)."""
    if not casimir_cutoff > 0:
        raise InvalidArgument(f"casimir cutoff must be positive, got {casimir_cutoff}")
    found = []
    # c_2 is strictly increasing along each coordinate, so prune per axis
    def walk(prefix: list[int]):
        i = len(prefix)
        if i == rs.rank:
            found.append(tuple(prefix))
            return
        k = 0
        while True:
            cand = prefix + [k] + [0] * (rs.rank - i - 1)
            if casimir2(rs, cand) > casimir_cutoff + 1e-12:
                break
            walk(prefix + [k])
            k += 1

    walk([])
    found.sort(key=lambda c: (casimir2(rs, c), c))
    return [HighestWeight(c) for c in found]


# weight systems -------------------------------------------------------------

_ws_lock = threading.Lock()
_ws_cache: dict[tuple[int, tuple[int, ...]], WeightSystem] = {}


def _dominant_below(lam_p: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Partitions of |lam| with n parts dominated by ``lam_p`` (all nonnegative)."""
    n, total = len(lam_p), sum(lam_p)
    out = []

    def rec(prefix, remaining, maxpart, partial):
        k = len(prefix)
        if k == n:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        for part in range(min(maxpart, remaining), -1, -1):
            s = partial + part
            if s > sum(lam_p[: k + 1]):
                continue
            rec(prefix + [part], remaining - part, part, s)

    rec([], total, total, 0)
    return out


def _freudenthal(lam_p: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """Dominant-weight multiplicities by Freudenthal's recursion (exact)."""
    n = len(lam_p)
    rho = tuple(n - 1 - i for i in range(n))
    dom = _dominant_below(lam_p)

    def dot(x, y):
        return sum(a * b for a, b in zip(x, y))

    def norm_shift(x):
        y = tuple(a + b for a, b in zip(x, rho))
        return dot(y, y)

    # the all-ones shift is invisible to su(n); plain dot products suffice
    # because every weight here has the same coordinate sum
    top = norm_shift(lam_p)
    depth = {mu: dot(tuple(a - b for a, b in zip(lam_p, mu)), rho) for mu in dom}
    mult: dict[tuple[int, ...], int] = {lam_p: 1}
    roots = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def lookup(vec):
        if min(vec) < 0:
            return 0
        return mult.get(tuple(sorted(vec, reverse=True)), 0)

    for mu in sorted(dom, key=lambda m: depth[m]):
        if mu == lam_p:
            continue
        acc = 0
        for i, j in roots:
            k = 1
            while True:
                v = list(mu)
                v[i] += k
                v[j] -= k
                if v[j] < 0:
                    break
                m = lookup(v)
                if m:
                    acc += m * (v[i] - v[j])
                k += 1
        denom = top - norm_shift(mu)
        value = Fraction(2 * acc, denom)
        if value.denominator != 1:
            raise ArithmeticError("non-integral Freudenthal multiplicity")
        if value:
            mult[mu] = int(value)
    return mult


def weight_system(rs: RootSystem, lam) -> WeightSystem:
    """All weights of V_lam with multiplicities, keyed by Dynkin labels."""
    lam = as_weight(lam, rs.rank)
    key = (rs.rank, lam.coords)
    with _ws_lock:
        cached = _ws_cache.get(key)
    if cached is not None:
        return cached
    dom = _freudenthal(to_partition(lam.coords))
    entries: dict[tuple[int, ...], int] = {}
    for mu, m in dom.items():
        for perm in set(itertools.permutations(mu)):
            entries[from_partition(perm)] = m
    ws = WeightSystem(lam, entries)
    with _ws_lock:
        _ws_cache[key] = ws
    return ws


# characters -------------------------------------------------------------------

def _weight_arrays(rs: RootSystem, lam) -> tuple[np.ndarray, np.ndarray]:
    ws = weight_system(rs, lam)
    keys = np.array(list(ws.entries.keys()), dtype=float).reshape(-1, rs.rank)
    vals = np.array(list(ws.entries.values()), dtype=float)
    return keys, vals


def _qarray(rs: RootSystem, q) -> np.ndarray:
    """Angles as an array of shape (..., rank).

    For rank 1 a bare scalar or a 1-D array of angles is accepted as well.
    """
    qa = _angles(q)
    if rs.rank == 1 and (qa.ndim == 0 or qa.shape[-1] != 1):
        qa = qa[..., None]
    if qa.shape[-1] != rs.rank:
        raise InvalidArgument(f"Cartan point needs {rs.rank} angles, got shape {qa.shape}")
    return qa


def _squeeze(out):
    return complex(out) if np.ndim(out) == 0 else out


def character(rs: RootSystem, lam, q) -> complex | np.ndarray:
    """chi_lam(q) as the weight-multiplicity sum.

    ``q`` may be a CartanPoint or an array whose last axis has length rank.
    """
    qa = _qarray(rs, q)
    keys, vals = _weight_arrays(rs, lam)
    out = np.exp(1j * (qa @ keys.T)) @ vals
    return _squeeze(out)


def _ambient_angles(rs: RootSystem, q) -> np.ndarray:
    """q in coroot coordinates -> ambient vector (q_k - q_{k-1})."""
    qa = _qarray(rs, q)
    pad = np.zeros(qa.shape[:-1] + (1,))
    full = np.concatenate([pad, qa, pad], axis=-1)
    return full[..., 1:] - full[..., :-1]


def root_pairings(rs: RootSystem, q) -> np.ndarray:
    """(alpha, q) for every positive root, in ``rs.positive_roots`` order."""
    amb = _ambient_angles(rs, q)
    return np.stack([amb[..., i] - amb[..., j] for i, j in rs.positive_roots], axis=-1)


def weyl_denominator(rs: RootSystem, q) -> complex | np.ndarray:
    """delta(q) = prod_{alpha>0} (e^{i(alpha,q)/2} - e^{-i(alpha,q)/2})."""
    a = root_pairings(rs, q)
    return _squeeze(np.prod(2j * np.sin(a / 2), axis=-1))


def weyl_numerator(rs: RootSystem, lam, q) -> complex | np.ndarray:
    """sum_w det(w) e^{i(w(lam+rho), q)}."""
    lam = as_weight(lam, rs.rank)
    amb = _ambient_angles(rs, q)
    shifted = np.array(to_partition(tuple(c + 1 for c in lam.coords)), dtype=float)
    out = 0
    for perm, sign in rs.weyl_group:
        out = out + sign * np.exp(1j * (amb @ shifted[list(perm)]))
    return _squeeze(out)


def character_weyl_quotient(rs: RootSystem, lam, q):
    """Weyl character formula; only valid at regular q."""
    return weyl_numerator(rs, lam, q) / weyl_denominator(rs, q)


def weyl_act(rs: RootSystem, perm: Sequence[int], q) -> np.ndarray:
    """Action of the permutation ``perm`` on a Cartan point (coroot coordinates)."""
    amb = _ambient_angles(rs, q)
    moved = np.empty_like(amb)
    moved[..., list(perm)] = amb
    return np.cumsum(moved, axis=-1)[..., :-1]


def is_regular(rs: RootSystem, q, margin: float = 0.0) -> bool:
    a = np.atleast_1d(root_pairings(rs, q))
    dist = np.abs((a + pi) % (2 * pi) - pi)
    return bool(np.all(dist > margin))


def sample_regular_point(rs: RootSystem, rng: np.random.Generator, margin: float = 1e-2) -> CartanPoint:
    """Uniform torus point whose root pairings stay ``margin`` away from 2 pi Z."""
    for _ in range(10_000):
        q = rng.uniform(0, 2 * pi, size=rs.rank)
        if is_regular(rs, q, margin):
            return CartanPoint(tuple(q))
    raise RuntimeError("could not sample a regular point; margin too large")


def weights_iter(rs: RootSystem, lams: Iterable) -> list[HighestWeight]:
    return [as_weight(x, rs.rank) for x in lams]
