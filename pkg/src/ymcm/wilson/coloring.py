"""Colorings of Wilson graphs and their validation (SU(2))."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np

from ..lie import SU2, casimir2, dominant_weights_below
from ..tensor import invariant_basis, rep_generators, su2_admissible
from .graph import Issue, OpenGraphSurface, ValidationReport, stub_dims, structural_issues


@dataclass(frozen=True)
class Coloring:
    """Edge colors, vertex invariants and (optionally) region colors.

    ``edges`` and ``vertices`` override the values stored on the surface;
    ``regions`` assigns irreps to the faces of the cell decomposition.
    """

    edges: dict = field(default_factory=dict)
    vertices: dict = field(default_factory=dict)
    regions: dict = field(default_factory=dict)

    def apply(self, gs: OpenGraphSurface) -> OpenGraphSurface:
        edges = tuple(replace(e, color=int(self.edges.get(e.name, e.color))) for e in gs.edges)
        verts = tuple(replace(v, intertwiner=self.vertices.get(v.name, v.intertwiner)) for v in gs.vertices)
        return replace(gs, edges=edges, vertices=verts)


def edge_sides(gs: OpenGraphSurface) -> dict[str, tuple[str, str]]:
    """Internal edge -> (region reading it with +1, region reading it with -1)."""
    plus, minus = {}, {}
    for r in gs.regions:
        for n, s in r.boundary_word:
            (plus if s > 0 else minus)[n] = r.name
    return {e.name: (plus[e.name], minus[e.name]) for e in gs.edges_of("internal") if e.name in plus and e.name in minus}


def edge_admissible(lam: int, lam_minus: int, mu: int) -> bool:
    """Invariants exist in V_lam (x) V*_lam' (x) V_mu, i.e. lam' in lam (x) mu."""
    return su2_admissible(lam_minus, lam, mu)


def _vertex_issues(gs: OpenGraphSurface) -> list[Issue]:
    out = []
    for v in gs.vertices:
        slots = stub_dims(gs, v)
        basis = invariant_basis(slots)
        kind, data = v.intertwiner
        if basis.shape[0] == 0:
            out.append(Issue("vertex", v.name, f"no invariant vector in {_slot_str(slots)}"))
            continue
        if kind == "basis":
            if not 0 <= int(data) < basis.shape[0]:
                out.append(Issue("vertex", v.name, f"basis index {data} out of range (dimension {basis.shape[0]})"))
            continue
        arr = np.asarray(data, dtype=complex)
        dims = [m + 1 for m, _ in slots]
        if arr.size != int(np.prod(dims)):
            out.append(Issue("vertex", v.name, f"vector has {arr.size} entries, expected {int(np.prod(dims))}"))
            continue
        res = invariance_residual(slots, arr.reshape(dims))
        if res > 1e-10 * max(1.0, float(np.abs(arr).max())):
            out.append(Issue("vertex", v.name, f"vector is not invariant (residual {res:.2e})"))
    return out


def _slot_str(slots) -> str:
    return " (x) ".join(f"V{'*' if d else ''}_{m}" for m, d in slots) or "C"


def invariance_residual(slots, vec: np.ndarray) -> float:
    """Max-entry norm of the Lie algebra action on a tensor."""
    worst = 0.0
    for g in range(3):
        total = np.zeros_like(vec)
        for i, (m, dual) in enumerate(slots):
            X = rep_generators(m, dual)[g]
            total += np.moveaxis(np.tensordot(X, vec, axes=([1], [i])), 0, i)
        worst = max(worst, float(np.abs(total).max(initial=0.0)))
    return worst


def region_issues(gs: OpenGraphSurface, regions: dict) -> list[Issue]:
    out = []
    for r in gs.regions:
        if r.name not in regions:
            out.append(Issue("coloring", r.name, "region has no color"))
    for e, (rp, rm) in edge_sides(gs).items():
        if rp in regions and rm in regions:
            lam, lam2, mu = int(regions[rp]), int(regions[rm]), gs.edge(e).color
            if not edge_admissible(lam, lam2, mu):
                out.append(Issue("coloring", e, f"V_{lam2} is not contained in V_{mu} (x) V_{lam} across {rp}|{rm}"))
    return out


def admissible_colorings(gs: OpenGraphSurface, casimir_cutoff: float) -> Iterator[dict]:
    """All region colorings with c2 <= cutoff obeying the Clebsch-Gordan rule at every internal edge.

    Enumerated by depth-first search in region order, so the output order is
    deterministic.
    """
    labels = [lam.coords[0] for lam in dominant_weights_below(SU2, casimir_cutoff)]
    names = [r.name for r in gs.regions]
    sides = edge_sides(gs)
    # constraints checked as soon as both regions of an edge are assigned
    pos = {n: i for i, n in enumerate(names)}
    checks: dict[int, list] = {}
    for e, (rp, rm) in sides.items():
        checks.setdefault(max(pos[rp], pos[rm]), []).append((rp, rm, gs.edge(e).color))

    def rec(i: int, current: dict):
        if i == len(names):
            yield dict(current)
            return
        for m in labels:
            current[names[i]] = m
            if all(edge_admissible(current[a], current[b], mu) for a, b, mu in checks.get(i, [])):
                yield from rec(i + 1, current)
            del current[names[i]]

    yield from rec(0, {})


def search_cutoff(gs: OpenGraphSurface) -> float:
    """A Casimir cutoff large enough to find some admissible coloring if one exists.

    Lowering every color of a connected cluster by 2 preserves all rules while
    the smallest color exceeds the total edge color S, and neighbors differ by
    at most their edge color, so labels up to 2 S + 2 suffice.
    """
    total = 2 * sum(e.color for e in gs.edges_of("internal")) + 2
    return max(casimir2(SU2, total), 1.0)


def validate(gs: OpenGraphSurface, coloring: Coloring | None = None) -> ValidationReport:
    """Every violated structural, vertex-invariance or Clebsch-Gordan condition.

    Never raises for coloring problems; the report is empty iff the input is
    well formed and admits (or, with region colors given, is) an admissible
    coloring.
    """
    if coloring is not None:
        gs = coloring.apply(gs)
    issues = structural_issues(gs)
    if issues:
        return ValidationReport(tuple(issues))
    issues += _vertex_issues(gs)
    if coloring is not None and coloring.regions:
        issues += region_issues(gs, coloring.regions)
    elif next(admissible_colorings(gs, search_cutoff(gs)), None) is None:
        issues.append(Issue("coloring", "surface", "no region coloring satisfies the Clebsch-Gordan rules"))
    return ValidationReport(tuple(issues))
