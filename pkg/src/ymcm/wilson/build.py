"""Standard surfaces with Wilson graphs, and gluing along boundary intervals."""

from __future__ import annotations

from dataclasses import replace
from typing import Sequence

import numpy as np

from ..errors import InvalidArgument
from .graph import Edge, OpenGraphSurface, Region, Stub, Vertex, check_structure, vertex_tensor


def _pairing(m: int) -> tuple:
    """The identity map as an invariant vector in V* (x) V or V (x) V*."""
    return ("vector", np.eye(m + 1, dtype=complex))


def disc(area: float, genus: int = 0) -> OpenGraphSurface:
    """One region bounded by the vertex-free boundary circle ``c``."""
    return OpenGraphSurface(
        "su2",
        (Region("D", float(area), int(genus), (("c", 1),)),),
        (Edge("c", "boundary"),),
        (),
    )


def closed_surface(area: float, genus: int = 0) -> OpenGraphSurface:
    """A closed surface of the given genus as a single region with empty boundary."""
    return OpenGraphSurface("su2", (Region("S", float(area), int(genus), ()),), (), ())


def sphere(area: float) -> OpenGraphSurface:
    return closed_surface(area, 0)


def cylinder(spins: Sequence[int], areas: Sequence[float]) -> OpenGraphSurface:
    """Cylinder with N parallel Wilson lines joining its two boundary circles.

    Line ``l_i`` (color mu_i) runs from vertex ``u_i`` on the first circle to
    ``w_i`` on the second; the circles are cut into intervals
    ``g_i: u_i -> u_{i+1}`` and ``gp_i: w_i -> w_{i+1}``.  Region ``R_i`` of
    area A_i has holonomy ``gp_i^-1 l_i^-1 g_i l_{i+1}``.  The free legs are
    ``o_i`` (V_mu_i, at u_i) followed by ``op_i`` (V*_mu_i, at w_i), so the
    evaluated state is the propagator kernel U(g, g') with rows on the first
    circle.
    """
    spins = [int(m) for m in spins]
    areas = [float(a) for a in areas]
    N = len(spins)
    if N == 0 or len(areas) != N:
        raise InvalidArgument("need N >= 1 spins and one area per spin")
    nxt = lambda i: i % N + 1  # noqa: E731
    edges, regions, verts = [], [], []
    for i in range(1, N + 1):
        edges.append(Edge(f"l{i}", "internal", spins[i - 1], f"u{i}", f"w{i}"))
    for i in range(1, N + 1):
        edges.append(Edge(f"g{i}", "boundary", 0, f"u{i}", f"u{nxt(i)}"))
    for i in range(1, N + 1):
        edges.append(Edge(f"gp{i}", "boundary", 0, f"w{i}", f"w{nxt(i)}"))
    for i in range(1, N + 1):
        edges.append(Edge(f"o{i}", "outer", spins[i - 1], None, f"u{i}"))
    for i in range(1, N + 1):
        edges.append(Edge(f"op{i}", "outer", spins[i - 1], f"w{i}", None))
    for i in range(1, N + 1):
        word = ((f"gp{i}", -1), (f"l{i}", -1), (f"g{i}", 1), (f"l{nxt(i)}", 1))
        regions.append(Region(f"R{i}", areas[i - 1], 0, word))
    for i in range(1, N + 1):
        m = spins[i - 1]
        verts.append(Vertex(f"u{i}", (Stub(f"l{i}", True), Stub(f"o{i}", False)), _pairing(m)))
        verts.append(Vertex(f"w{i}", (Stub(f"l{i}", False), Stub(f"op{i}", True)), _pairing(m)))
    return OpenGraphSurface("su2", tuple(regions), tuple(edges), tuple(verts))


def disc_with_loop(area_inside: float, area_outside: float, color: int) -> OpenGraphSurface:
    """Disc containing a closed Wilson loop ``w`` of the given color.

    The annulus outside the loop is cut open by the uncolored edge ``k`` from
    the boundary vertex ``b`` to the loop vertex ``v``.
    """
    return OpenGraphSurface(
        "su2",
        (
            Region("inside", float(area_inside), 0, (("w", 1),)),
            Region("outside", float(area_outside), 0, (("c", 1), ("k", 1), ("w", -1), ("k", -1))),
        ),
        (
            Edge("w", "internal", int(color), "v", "v"),
            Edge("k", "internal", 0, "b", "v"),
            Edge("c", "boundary", 0, "b", "b"),
        ),
        (
            Vertex("v", (Stub("w", True), Stub("w", False)), _pairing(int(color))),
            Vertex("b", (), ("basis", 0)),
        ),
    )


def strip(spin: int, areas: Sequence[float]) -> OpenGraphSurface:
    """Disc split by one Wilson line ``l`` (u -> w) into regions ``left`` and ``right``.

    The boundary circle is cut at u and w into ``a: u -> w`` and ``b: w -> u``;
    the line's ends leave the surface as outer legs ``o`` (V) and ``op`` (V*).
    """
    m = int(spin)
    A1, A2 = (float(a) for a in areas)
    return OpenGraphSurface(
        "su2",
        (
            Region("left", A1, 0, (("a", 1), ("l", -1))),
            Region("right", A2, 0, (("b", 1), ("l", 1))),
        ),
        (
            Edge("l", "internal", m, "u", "w"),
            Edge("a", "boundary", 0, "u", "w"),
            Edge("b", "boundary", 0, "w", "u"),
            Edge("o", "outer", m, None, "u"),
            Edge("op", "outer", m, "w", None),
        ),
        (
            Vertex("u", (Stub("l", True), Stub("o", False)), _pairing(m)),
            Vertex("w", (Stub("l", False), Stub("op", True)), _pairing(m)),
        ),
    )


# gluing ----------------------------------------------------------------------------

def _prefixed(gs: OpenGraphSurface, p: str) -> OpenGraphSurface:
    f = lambda n: None if n is None else p + n  # noqa: E731
    return OpenGraphSurface(
        gs.group,
        tuple(replace(r, name=f(r.name), boundary_word=tuple((f(n), s) for n, s in r.boundary_word)) for r in gs.regions),
        tuple(replace(e, name=f(e.name), source=f(e.source), target=f(e.target)) for e in gs.edges),
        tuple(
            Vertex(f(v.name), tuple(Stub(f(s.edge), s.outgoing) for s in v.stubs), v.intertwiner) for v in gs.vertices
        ),
    )


def _sign_in_words(gs: OpenGraphSurface, name: str) -> int:
    for r in gs.regions:
        for n, s in r.boundary_word:
            if n == name:
                return s
    raise InvalidArgument(f"{name!r} does not bound any region")


def glue_surfaces(
    s1: OpenGraphSurface,
    edge1: str,
    s2: OpenGraphSurface | None,
    edge2: str,
    sandwich_color: int = 0,
    join: Sequence[tuple[str, str]] = (),
) -> OpenGraphSurface:
    """Identify boundary interval ``edge1`` of ``s1`` with ``edge2`` of ``s2``.

    With ``s2`` None (or ``s2 is s1``) the surface is glued to itself.  When
    gluing two surfaces, names are prefixed with ``a.`` and ``b.``.  The
    identified interval becomes an internal edge named after ``edge1``,
    oriented as ``edge1`` and carrying ``sandwich_color``; a colored sandwich
    line leaves the surface through new outer legs ``<edge1>.src`` (V) and
    ``<edge1>.tgt`` (V*) at its endpoints.  Endpoints of the two intervals are
    merged; a merged vertex carries the tensor product of the invariants.
    ``join`` lists pairs of outer legs, ending at one merged vertex, to be
    contracted with each other.
    """
    if s2 is None or s2 is s1:
        gs = s1
        e1n, e2n = edge1, edge2
    else:
        a, b = _prefixed(s1, "a."), _prefixed(s2, "b.")
        gs = OpenGraphSurface(s1.group, a.regions + b.regions, a.edges + b.edges, a.vertices + b.vertices)
        e1n, e2n = "a." + edge1, "b." + edge2
    check_structure(gs)
    try:
        e1, e2 = gs.edge(e1n), gs.edge(e2n)
    except KeyError as exc:
        raise InvalidArgument(f"unknown edge {exc.args[0]!r}") from None
    if e1.kind != "boundary" or e2.kind != "boundary" or e1n == e2n:
        raise InvalidArgument("gluing needs two distinct boundary edges")
    if (e1.source is None) != (e2.source is None):
        raise InvalidArgument("cannot glue a boundary circle to an interval")
    if sandwich_color and e1.source is None:
        raise InvalidArgument("a sandwich line needs interval endpoints")
    s_1, s_2 = _sign_in_words(gs, e1n), _sign_in_words(gs, e2n)
    # e2 is read as e1^{-s1 s2}
    flip = s_1 == s_2
    pairs = []
    if e1.source is not None:
        if flip:
            pairs = [(e2.source, e1.target), (e2.target, e1.source)]
        else:
            pairs = [(e2.source, e1.source), (e2.target, e1.target)]

    # merge vertices (union-find keeps the first surface's names)
    parent = {v.name: v.name for v in gs.vertices}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for x, y in pairs:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry
    rename = lambda n: None if n is None else find(n)  # noqa: E731

    edges = []
    for e in gs.edges:
        if e.name == e2n:
            continue
        if e.name == e1n:
            edges.append(Edge(e1n, "internal", int(sandwich_color), rename(e.source), rename(e.target)))
        else:
            edges.append(replace(e, source=rename(e.source), target=rename(e.target)))
    regions = []
    for r in gs.regions:
        word = tuple((e1n, -s_1) if n == e2n else (n, s) for n, s in r.boundary_word)
        regions.append(replace(r, boundary_word=word))

    groups: dict[str, list[Vertex]] = {}
    for v in gs.vertices:
        groups.setdefault(find(v.name), []).append(v)
    extra_outer = []
    verts = []
    for root, members in groups.items():
        stubs, tensor = [], np.ones((), dtype=complex)
        for v in members:
            stubs += list(v.stubs)
            tensor = np.multiply.outer(tensor, vertex_tensor(gs, v))
        if sandwich_color:
            m = int(sandwich_color)
            for end, outgoing, leg in ((e1.source, True, ".src"), (e1.target, False, ".tgt")):
                if rename(end) == root:
                    stubs += [Stub(e1n, outgoing), Stub(e1n + leg, not outgoing)]
                    tensor = np.multiply.outer(tensor, np.eye(m + 1))
                    # the leg points into the vertex at the source end, out of it at the target end
                    extra_outer.append(Edge(e1n + leg, "outer", m, None if outgoing else root, root if outgoing else None))
        verts.append([root, stubs, tensor])
    edges += extra_outer

    emap = {e.name: e for e in edges}
    for x, y in join:
        hit = None
        for item in verts:
            names = [s.edge for s in item[1]]
            if x in names and y in names:
                hit = item
        if hit is None:
            raise InvalidArgument(f"outer legs {x!r} and {y!r} do not meet at one vertex")
        ex, ey = emap.get(x), emap.get(y)
        if ex is None or ey is None or ex.kind != "outer" or ey.kind != "outer":
            raise InvalidArgument("join expects outer legs")
        stubs, tensor = hit[1], hit[2]
        i, j = [s.edge for s in stubs].index(x), [s.edge for s in stubs].index(y)
        if ex.color != ey.color or stubs[i].dual == stubs[j].dual:
            raise InvalidArgument(f"cannot contract {x!r} with {y!r}: need V and V* of one color")
        tensor = np.trace(tensor, axis1=i, axis2=j)
        hit[1] = [s for k, s in enumerate(stubs) if k not in (i, j)]
        hit[2] = tensor
        edges = [e for e in edges if e.name not in (x, y)]
    vertices = tuple(Vertex(n, tuple(st), ("vector", t)) for n, st, t in verts)
    out = OpenGraphSurface(gs.group, tuple(regions), tuple(edges), vertices)
    check_structure(out)
    return out
