"""Partition functions of surfaces with open Wilson graphs (SU(2)).

The partition function is the integral over internal-edge holonomies of the
product of region kernels ``sum_lam dim^{1-2g} e^{-A c2} chi_lam(hol)`` and the
Wilson-graph function.  Spectrally, every region is colored by an irrep; the
integral over each internal edge then becomes the orthogonal projector onto
invariants of the representations meeting along that edge (the two region
colors and the edge color), which is contracted with the vertex invariants,
the boundary holonomies and the outer legs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from math import exp

import numpy as np

from .. import su2
from ..errors import DivergentSeriesError, InvalidArgument
from ..haar import QuadratureSpec, euler_grid
from ..lie import SU2, casimir2
from ..tensor import invariant_basis
from .coloring import admissible_colorings, search_cutoff
from .graph import OpenGraphSurface, check_structure, vertex_tensor
from .network import contract


class TruncationWarning(UserWarning):
    """The Casimir cutoff excludes every admissible coloring."""


@dataclass
class BoundaryState:
    """Value of a partition function at fixed boundary holonomies.

    ``slots`` lists the outer legs as (edge, color, is_dual) in declaration
    order; ``value`` is indexed by them.  ``terms`` keeps the contribution of
    each region coloring (keys are tuples of (region, color) pairs).
    """

    slots: list
    value: np.ndarray
    terms: dict = field(default_factory=dict)
    cutoff: float = 0.0

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def matrix(self) -> np.ndarray:
        """Legs split into the V part (rows) and the V* part (columns)."""
        rows = [i for i, s in enumerate(self.slots) if not s[2]]
        cols = [i for i, s in enumerate(self.slots) if s[2]]
        d = lambda idx: int(np.prod([self.slots[i][1] + 1 for i in idx]))  # noqa: E731
        return np.transpose(self.value, rows + cols).reshape(d(rows), d(cols))

    def scalar(self) -> complex:
        if self.slots:
            raise InvalidArgument("the state has free legs")
        return complex(self.value)


@lru_cache(maxsize=None)
def _invariants(slots: tuple) -> np.ndarray:
    b = invariant_basis(list(slots))
    b.setflags(write=False)
    return b


def _inverse(g: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(g, -1, -2))


def _prepare(gs: OpenGraphSurface, areas: dict | None) -> OpenGraphSurface:
    if areas:
        gs = gs.with_areas(areas)
    check_structure(gs)
    for r in gs.regions:
        if not r.area > 0:
            raise DivergentSeriesError(f"region {r.name} needs a positive area, got {r.area}")
    return gs


def _holonomy(holonomies: dict, name: str) -> np.ndarray:
    if name not in holonomies:
        raise InvalidArgument(f"no holonomy given for boundary edge {name!r}")
    g = np.asarray(holonomies[name], dtype=complex)
    if g.shape[-2:] != (2, 2):
        raise InvalidArgument(f"holonomy of {name!r} must be a 2x2 matrix")
    return g


def _outer_legs(gs: OpenGraphSurface) -> tuple[list, list]:
    slots, labels = [], []
    for e in gs.outer_edges:
        outgoing = e.source is not None
        slots.append((e.name, e.color, outgoing))
        labels.append(("stub", e.name, outgoing))
    return slots, labels


def _static_network(gs: OpenGraphSurface) -> tuple[list, list]:
    """Vertex invariants with their stub labels (independent of the coloring)."""
    ts, ls = [], []
    for v in gs.vertices:
        if not v.stubs:
            continue
        ts.append(vertex_tensor(gs, v))
        ls.append([("stub", s.edge, s.outgoing) for s in v.stubs])
    return ts, ls


def _corner(region: str, p: int, n: int):
    return ("corner", region, p % n)


def _colored_network(gs: OpenGraphSurface, colors: dict, holonomies: dict) -> tuple[list, list, complex]:
    """Tensors for one region coloring; returns (tensors, labels, scalar factor)."""
    ts, ls = [], []
    scalar = 1.0 + 0j
    occ: dict[str, list] = {}
    for r in gs.regions:
        lam = colors[r.name]
        word = r.boundary_word
        n = len(word)
        if n == 0:
            scalar *= lam + 1  # chi_lam(1)
            continue
        for p, (name, sign) in enumerate(word):
            row, col = _corner(r.name, p, n), _corner(r.name, p + 1, n)
            e = gs.edge(name)
            if e.kind == "boundary":
                g = _holonomy(holonomies, name)
                ts.append(su2.group_matrix(lam, g if sign > 0 else _inverse(g)))
                ls.append([row, col])
            else:
                occ.setdefault(name, []).append((lam, sign, row, col))
    for e in gs.edges_of("internal"):
        slots, rows, cols = [], [], []
        for lam, sign, row, col in occ[e.name]:
            if sign > 0:
                slots.append((lam, False))
                rows.append(row)
                cols.append(col)
            else:
                # pi(h^-1)_{ij} = conj(pi(h))_{ji}
                slots.append((lam, True))
                rows.append(col)
                cols.append(row)
        slots.append((e.color, False))
        rows.append(("stub", e.name, True) if e.source is not None else ("free", e.name, 0))
        cols.append(("stub", e.name, False) if e.target is not None else ("free", e.name, 1))
        basis = _invariants(tuple(slots))
        if basis.shape[0] == 0:
            return [], [], 0.0
        P = np.tensordot(basis, basis.conj(), axes=([0], [0]))  # rows..., cols...
        ts.append(P)
        ls.append(rows + cols)
    return ts, ls, scalar


def region_weight(gs: OpenGraphSurface, colors: dict) -> float:
    w = 1.0
    for r in gs.regions:
        lam = colors[r.name]
        w *= float(lam + 1) ** (1 - 2 * r.genus) * exp(-r.area * casimir2(SU2, lam))
    return w


def evaluate_partition(
    gs: OpenGraphSurface,
    holonomies: dict | None = None,
    casimir_cutoff: float = 40.0,
    areas: dict | None = None,
) -> BoundaryState:
    """Spectral evaluation of the partition function.

    ``holonomies`` maps boundary edges to SU(2) matrices.  Returns the zero
    state when no admissible coloring exists; warns with
    :class:`TruncationWarning` when admissible colorings exist only beyond
    the cutoff.
    """
    gs = _prepare(gs, areas)
    holonomies = holonomies or {}
    out_slots, out_labels = _outer_legs(gs)
    vts, vls = _static_network(gs)
    shape = tuple(m + 1 for _, m, _ in out_slots)
    total = np.zeros(shape, dtype=complex)
    terms = {}
    for colors in admissible_colorings(gs, casimir_cutoff):
        ts, ls, scalar = _colored_network(gs, colors, holonomies)
        if scalar == 0:
            continue
        w = region_weight(gs, colors) * scalar
        val = w * contract(vts + ts, vls + ls, out_labels)
        terms[tuple(sorted(colors.items()))] = val
        total = total + val
    if not terms:
        wider = max(search_cutoff(gs), 4 * casimir_cutoff)
        if wider > casimir_cutoff and next(admissible_colorings(gs, wider), None) is not None:
            warnings.warn(
                f"cutoff {casimir_cutoff} excludes every admissible coloring; the result is truncated to zero",
                TruncationWarning,
                stacklevel=2,
            )
    return BoundaryState(out_slots, total, terms, float(casimir_cutoff))


# quadrature oracle ------------------------------------------------------------------

def _region_series(gs: OpenGraphSurface, casimir_cutoff: float) -> dict:
    out = {}
    for r in gs.regions:
        mmax = 0
        while casimir2(SU2, mmax + 1) <= casimir_cutoff:
            mmax += 1
        m = np.arange(mmax + 1)
        out[r.name] = (m + 1.0) ** (1 - 2 * r.genus) * np.exp(-r.area * m * (m + 2) / 2)
    return out


def evaluate_quadrature(
    gs: OpenGraphSurface,
    holonomies: dict | None = None,
    spec: QuadratureSpec | None = None,
    casimir_cutoff: float = 40.0,
    areas: dict | None = None,
    max_points: int = 2_000_000,
    chunk: int = 2048,
) -> BoundaryState:
    """Direct Haar quadrature of the defining integral over internal holonomies.

    Uses the Euler-angle product rule for every internal edge; the region
    kernels are truncated at the same Casimir cutoff.  Intended as an oracle
    for small graphs (the point count grows like resolution^(3 E)).
    """
    gs = _prepare(gs, areas)
    holonomies = holonomies or {}
    spec = spec or QuadratureSpec("euler", 16)
    hs, w = euler_grid(spec.resolution)
    internal = gs.edges_of("internal")
    E = len(internal)
    M = len(w)
    if M**E > max_points:
        raise InvalidArgument(f"{M}^{E} quadrature points exceed max_points={max_points}")
    series = _region_series(gs, casimir_cutoff)
    out_slots, out_labels = _outer_legs(gs)
    vts, vls = _static_network(gs)
    shape = tuple(m + 1 for _, m, _ in out_slots)
    total = np.zeros(shape, dtype=complex)
    B = ("batch",)
    flat = np.arange(M**E)
    for start in range(0, M**E, chunk):
        idx = np.unravel_index(flat[start : start + chunk], (M,) * E) if E else ()
        n = len(idx[0]) if E else 1
        hol = {e.name: hs[idx[k]] for k, e in enumerate(internal)}
        weight = np.ones(n)
        for k in range(E):
            weight = weight * w[idx[k]]
        for name, g in holonomies.items():
            hol[name] = np.broadcast_to(np.asarray(g, dtype=complex), (n, 2, 2))
        for r in gs.regions:
            prod = np.broadcast_to(np.eye(2, dtype=complex), (n, 2, 2))
            for name, sign in r.boundary_word:
                if name not in hol:
                    raise InvalidArgument(f"no holonomy given for boundary edge {name!r}")
                x = hol[name] if sign > 0 else _inverse(hol[name])
                prod = prod @ x
            coef = series[r.name]
            weight = weight * (su2.characters(prod, len(coef) - 1) @ coef)
        ts, ls = [weight], [list(B)]
        for e in internal:
            if e.color == 0 and e.source is None:
                continue
            ts.append(su2.group_matrix(e.color, hol[e.name]))
            row = ("stub", e.name, True) if e.source is not None else ("free", e.name, 0)
            col = ("stub", e.name, False) if e.target is not None else ("free", e.name, 1)
            ls.append(list(B) + [row, col])
        total = total + contract(vts + ts, vls + ls, out_labels)
    return BoundaryState(out_slots, total, {}, float(casimir_cutoff))
