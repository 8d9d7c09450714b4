"""Surfaces with open Wilson graphs, stored as explicit cell complexes.

Conventions
-----------
* Every edge has a source and a target vertex (``None`` for a boundary circle
  without vertices, and for the free end of an outer edge).
* A region's ``boundary_word`` lists oriented edge occurrences ``(edge, +-1)``.
  Its holonomy is the ordered product ``x_1 x_2 ... x_n`` with ``x = h_e`` for
  ``+1`` and ``h_e^{-1}`` for ``-1``.
* Holonomies transform as ``h_e -> g_source h_e g_target^{-1}``.  Hence a word
  is consistent when the target end of ``x_p`` is the source end of
  ``x_{p+1}`` (cyclically), and a vertex stub of an outgoing edge carries the
  dual space ``V*`` while an incoming stub carries ``V``.
* Internal edges are integrated over; boundary edges are the parts of the
  surface boundary and carry prescribed holonomies; outer edges are free
  tensor legs attached to a vertex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

from ..errors import InvalidArgument, SchemaError, StructureError
from ..tensor import invariant_basis

KINDS = ("internal", "boundary", "outer")


@dataclass(frozen=True)
class Region:
    name: str
    area: float
    genus: int = 0
    boundary_word: tuple[tuple[str, int], ...] = ()


@dataclass(frozen=True)
class Edge:
    name: str
    kind: str
    color: int = 0
    source: str | None = None
    target: str | None = None


@dataclass(frozen=True)
class Stub:
    edge: str
    outgoing: bool

    @property
    def dual(self) -> bool:
        return self.outgoing


@dataclass(frozen=True, eq=False)
class Vertex:
    """A vertex with its totally ordered stubs and invariant-vector choice.

    ``intertwiner`` is either ``("basis", k)`` (k-th orthonormal invariant) or
    ``("vector", array)`` with the array shaped by the stub dimensions.
    """

    name: str
    stubs: tuple[Stub, ...] = ()
    intertwiner: tuple = ("basis", 0)


@dataclass(frozen=True)
class Circle:
    """Inserted circle of an enriched graph: follows one region boundary."""

    region: str
    segments: tuple[tuple[str, int], ...]
    # boundary edges of the surface replaced by segments of this circle
    replaces: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class OpenGraphSurface:
    group: str
    regions: tuple[Region, ...]
    edges: tuple[Edge, ...]
    vertices: tuple[Vertex, ...]
    circles: tuple[Circle, ...] | None = None

    # lookups -----------------------------------------------------------------
    def edge(self, name: str) -> Edge:
        for e in self.edges:
            if e.name == name:
                return e
        raise KeyError(name)

    def vertex(self, name: str) -> Vertex:
        for v in self.vertices:
            if v.name == name:
                return v
        raise KeyError(name)

    def region(self, name: str) -> Region:
        for r in self.regions:
            if r.name == name:
                return r
        raise KeyError(name)

    def edges_of(self, kind: str) -> list[Edge]:
        return [e for e in self.edges if e.kind == kind]

    @property
    def outer_edges(self) -> list[Edge]:
        return self.edges_of("outer")

    @property
    def enriched(self) -> bool:
        return self.circles is not None

    def with_areas(self, areas: dict) -> "OpenGraphSurface":
        unknown = set(areas) - {r.name for r in self.regions}
        if unknown:
            raise InvalidArgument(f"unknown regions {sorted(unknown)}")
        regs = tuple(replace(r, area=float(areas.get(r.name, r.area))) for r in self.regions)
        return replace(self, regions=regs)

    def boundary_components(self) -> list[list[str]]:
        """Boundary edges grouped into connected boundary circles."""
        bnd = self.edges_of("boundary")
        parent = {e.name: e.name for e in bnd}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        by_vertex: dict[str, list[str]] = {}
        for e in bnd:
            for v in (e.source, e.target):
                if v is not None:
                    by_vertex.setdefault(v, []).append(e.name)
        for names in by_vertex.values():
            for n in names[1:]:
                parent[find(n)] = find(names[0])
        groups: dict[str, list[str]] = {}
        for e in bnd:
            groups.setdefault(find(e.name), []).append(e.name)
        return list(groups.values())

    def euler_characteristic(self) -> int:
        V = len(self.vertices)
        E = len(self.edges_of("internal")) + len(self.edges_of("boundary"))
        # a vertex-free boundary circle is a loop edge on one implicit vertex
        V += sum(1 for e in self.edges if e.kind != "outer" and e.source is None)
        F = sum((1 if r.boundary_word else 2) - 2 * r.genus for r in self.regions)
        return V - E + F

    def connected_components(self) -> int:
        parent: dict = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        for r in self.regions:
            find(("r", r.name))
            for n, _ in r.boundary_word:
                union(("r", r.name), ("e", n))
        for e in self.edges:
            if e.kind == "outer":
                continue
            for v in (e.source, e.target):
                if v is not None:
                    union(("e", e.name), ("v", v))
        for v in self.vertices:
            find(("v", v.name))
        return len({find(x) for x in list(parent) if x[0] in "rv"})

    def implied_genus(self) -> float:
        """Total genus (2 c - chi - b) / 2 over the c connected components."""
        b = len(self.boundary_components())
        return (2 * self.connected_components() - self.euler_characteristic() - b) / 2


# endpoints of occurrences ------------------------------------------------------

def occurrence_ends(e: Edge, sign: int) -> tuple[str | None, str | None]:
    """(left, right) vertices of the factor h_e^{sign} in a holonomy product."""
    return (e.source, e.target) if sign > 0 else (e.target, e.source)


def stub_dims(gs: OpenGraphSurface, v: Vertex) -> list[tuple[int, bool]]:
    return [(gs.edge(s.edge).color, s.dual) for s in v.stubs]


def vertex_tensor(gs: OpenGraphSurface, v: Vertex) -> np.ndarray:
    """Invariant vector of ``v`` as an array indexed by its stubs."""
    slots = stub_dims(gs, v)
    kind, data = v.intertwiner
    if kind == "basis":
        basis = invariant_basis(slots)
        if not 0 <= int(data) < basis.shape[0]:
            raise StructureError(f"vertex {v.name}: invariant space has dimension {basis.shape[0]}, no basis vector {data}")
        return basis[int(data)]
    arr = np.asarray(data, dtype=complex).reshape([m + 1 for m, _ in slots])
    return arr


# structural validation -----------------------------------------------------------

@dataclass(frozen=True)
class Issue:
    kind: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"[{self.kind}] {self.where}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues

    def of_kind(self, kind: str) -> list[Issue]:
        return [i for i in self.issues if i.kind == kind]

    def __str__(self) -> str:
        return "valid" if self.ok else "\n".join(map(str, self.issues))


def structural_issues(gs: OpenGraphSurface) -> list[Issue]:
    out: list[Issue] = []
    names = [e.name for e in gs.edges] + [v.name for v in gs.vertices] + [r.name for r in gs.regions]
    seen = set()
    for n in names:
        if n in seen:
            out.append(Issue("structure", n, "duplicate name"))
        seen.add(n)
    if gs.group != "su2":
        out.append(Issue("structure", "group", f"only su2 surfaces are supported, got {gs.group!r}"))
    vnames = {v.name for v in gs.vertices}
    enames = {e.name for e in gs.edges}

    for e in gs.edges:
        if e.kind not in KINDS:
            out.append(Issue("structure", e.name, f"unknown kind {e.kind!r}"))
            continue
        if e.color < 0:
            out.append(Issue("structure", e.name, "negative color"))
        for v in (e.source, e.target):
            if v is not None and v not in vnames:
                out.append(Issue("structure", e.name, f"unknown vertex {v!r}"))
        if e.kind == "internal" and (e.source is None) != (e.target is None):
            out.append(Issue("structure", e.name, "internal edge needs both endpoints or neither"))
        if e.kind == "boundary" and (e.source is None) != (e.target is None):
            out.append(Issue("structure", e.name, "boundary edge needs both endpoints or neither"))
        if e.kind == "boundary" and e.color != 0:
            out.append(Issue("structure", e.name, "boundary edges carry no color"))
        if e.kind == "outer" and (e.source is None) == (e.target is None):
            out.append(Issue("structure", e.name, "outer edge needs exactly one endpoint"))
        if e.kind != "outer" and e.color and e.source is None:
            out.append(Issue("structure", e.name, "a colored edge needs endpoints"))

    # occurrences in region words
    count: dict[str, list[int]] = {n: [] for n in enames}
    for r in gs.regions:
        if r.area < 0 or not np.isfinite(r.area):
            out.append(Issue("structure", r.name, f"area must be non-negative, got {r.area}"))
        if r.genus < 0:
            out.append(Issue("structure", r.name, "negative genus"))
        word = r.boundary_word
        for name, sign in word:
            if name not in enames:
                out.append(Issue("structure", r.name, f"unknown edge {name!r} in boundary word"))
                continue
            if sign not in (1, -1):
                out.append(Issue("structure", r.name, f"orientation of {name!r} must be +1 or -1"))
                continue
            count[name].append(sign)
        if any(n not in enames or s not in (1, -1) for n, s in word):
            continue
        for p in range(len(word)):
            e1, s1 = gs.edge(word[p][0]), word[p][1]
            e2, s2 = gs.edge(word[(p + 1) % len(word)][0]), word[(p + 1) % len(word)][1]
            right = occurrence_ends(e1, s1)[1]
            left = occurrence_ends(e2, s2)[0]
            if right != left:
                out.append(
                    Issue("structure", r.name, f"word breaks between {e1.name} and {e2.name}: {right} != {left}")
                )
    for e in gs.edges:
        occ = count.get(e.name, [])
        if e.kind == "internal" and sorted(occ) != [-1, 1]:
            out.append(Issue("structure", e.name, f"internal edge must occur once with each orientation, found {occ}"))
        if e.kind == "boundary" and len(occ) != 1:
            out.append(Issue("structure", e.name, f"boundary edge must occur in exactly one region word, found {len(occ)}"))
        if e.kind == "outer" and occ:
            out.append(Issue("structure", e.name, "outer edges do not bound regions"))

    # stubs: every colored internal edge end and every outer edge end appears once
    expected: dict[tuple[str, bool], int] = {}
    for e in gs.edges:
        if e.kind == "boundary" or (e.kind == "internal" and e.source is None):
            continue
        if e.source is not None:
            expected[(e.name, True)] = expected.get((e.name, True), 0) + 1
        if e.target is not None:
            expected[(e.name, False)] = expected.get((e.name, False), 0) + 1
    found: dict[tuple[str, bool], int] = {}
    for v in gs.vertices:
        for s in v.stubs:
            if s.edge not in enames:
                out.append(Issue("structure", v.name, f"stub refers to unknown edge {s.edge!r}"))
                continue
            e = gs.edge(s.edge)
            end = e.source if s.outgoing else e.target
            if end != v.name:
                out.append(Issue("structure", v.name, f"stub {s.edge} ({'out' if s.outgoing else 'in'}) does not end here"))
            found[(s.edge, s.outgoing)] = found.get((s.edge, s.outgoing), 0) + 1
    optional = {e.name for e in gs.edges if e.kind == "internal" and e.color == 0}
    for key in sorted(set(expected) | set(found)):
        if key[0] in optional and found.get(key, 0) == 0:
            continue  # uncolored cell edges need no stubs
        if expected.get(key, 0) != found.get(key, 0):
            out.append(Issue("structure", key[0], f"{'source' if key[1] else 'target'} stub listed {found.get(key, 0)} times"))

    g = gs.implied_genus() if not out else 0
    if g < 0 or g != int(g):
        out.append(Issue("structure", "surface", f"Euler characteristic {gs.euler_characteristic()} gives genus {g}"))
    return out


def check_structure(gs: OpenGraphSurface) -> None:
    issues = structural_issues(gs)
    if issues:
        raise StructureError("; ".join(map(str, issues)))


# enrichment --------------------------------------------------------------------------

def enrich(gs: OpenGraphSurface) -> OpenGraphSurface:
    """Insert one oriented circle per region, following its boundary word.

    Segments of the inserted circle that run along the surface boundary take
    the place of the boundary intervals they follow (recorded in
    ``Circle.replaces``).  The circle of a closed region is empty.
    """
    check_structure(gs)
    circles = []
    for r in gs.regions:
        repl = tuple(n for n, _ in r.boundary_word if gs.edge(n).kind == "boundary")
        circles.append(Circle(r.name, tuple(r.boundary_word), repl))
    return replace(gs, circles=tuple(circles))


# JSON --------------------------------------------------------------------------------

_TOP = {"group", "regions", "edges", "vertices"}
_REGION = {"name", "area", "genus", "boundary_word"}
_EDGE = {"name", "kind", "color", "source", "target"}
_VERTEX = {"name", "stubs", "intertwiner"}


def _locate(text: str, needle: str) -> str:
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return f"line {i}"
    return "somewhere"


def _fields(obj, allowed: set, what: str, text: str, required: Iterable[str] = ("name",)):
    if not isinstance(obj, dict):
        raise SchemaError(f"{what}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        key = sorted(unknown)[0]
        raise SchemaError(f"{_locate(text, json.dumps(key))}: unknown field {key!r} in {what}")
    for k in required:
        if k not in obj:
            raise SchemaError(f"{what}: missing field {k!r}")


def _parse_stub(s, vname: str) -> Stub:
    if isinstance(s, str):
        return Stub(s, None)  # direction resolved later
    if isinstance(s, (list, tuple)) and len(s) == 2 and s[1] in ("out", "in"):
        return Stub(str(s[0]), s[1] == "out")
    raise SchemaError(f"vertex {vname}: stub {s!r} must be an edge name or [edge, 'out'|'in']")


def _color(c) -> int:
    if isinstance(c, list):
        if len(c) != 1:
            raise SchemaError(f"su2 colors have one Dynkin label, got {c}")
        c = c[0]
    if not isinstance(c, int) or isinstance(c, bool) or c < 0:
        raise SchemaError(f"color must be a non-negative integer, got {c!r}")
    return c


def from_json(text: str) -> OpenGraphSurface:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    _fields(doc, _TOP, "surface", text, required=("regions",))
    group = str(doc.get("group", "su2")).lower().replace("(", "").replace(")", "")
    try:
        regions = []
        for r in doc.get("regions", []):
            _fields(r, _REGION, "region", text, required=("name", "area"))
            word = tuple((str(n), int(s)) for n, s in r.get("boundary_word", []))
            regions.append(Region(str(r["name"]), float(r["area"]), int(r.get("genus", 0)), word))
        edges = []
        for e in doc.get("edges", []):
            _fields(e, _EDGE, "edge", text, required=("name", "kind"))
            edges.append(Edge(str(e["name"]), str(e["kind"]), _color(e.get("color", 0)), e.get("source"), e.get("target")))
        emap = {e.name: e for e in edges}
        vertices = []
        for v in doc.get("vertices", []):
            _fields(v, _VERTEX, "vertex", text)
            stubs = []
            for s in v.get("stubs", []):
                st = _parse_stub(s, v["name"])
                if st.outgoing is None:
                    e = emap.get(st.edge)
                    if e is None:
                        raise SchemaError(f"vertex {v['name']}: unknown edge {st.edge!r}")
                    if e.source == e.target:
                        raise SchemaError(f"vertex {v['name']}: loop {st.edge!r} needs an explicit direction")
                    st = Stub(st.edge, e.source == v["name"])
                stubs.append(st)
            tw = v.get("intertwiner", {"basis": 0})
            if not isinstance(tw, dict) or len(tw) != 1 or next(iter(tw)) not in ("basis", "vector"):
                raise SchemaError(f"vertex {v['name']}: intertwiner must be {{'basis': k}} or {{'vector': [...]}}")
            if "basis" in tw:
                itw = ("basis", int(tw["basis"]))
            else:
                vec = np.asarray(tw["vector"], dtype=float)
                if vec.ndim >= 1 and vec.shape[-1] == 2 and vec.ndim == 2:
                    vec = vec[:, 0] + 1j * vec[:, 1]
                itw = ("vector", vec)
            vertices.append(Vertex(str(v["name"]), tuple(stubs), itw))
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"malformed surface: {exc}") from None
    return OpenGraphSurface(group, tuple(regions), tuple(edges), tuple(vertices))


def to_json(gs: OpenGraphSurface) -> str:
    def itw(v: Vertex):
        kind, data = v.intertwiner
        if kind == "basis":
            return {"basis": int(data)}
        arr = np.asarray(data, dtype=complex).ravel()
        return {"vector": [[float(z.real), float(z.imag)] for z in arr]}

    doc = {
        "group": gs.group,
        "regions": [
            {"name": r.name, "area": r.area, "genus": r.genus, "boundary_word": [[n, s] for n, s in r.boundary_word]}
            for r in gs.regions
        ],
        "edges": [
            {"name": e.name, "kind": e.kind, "color": e.color, "source": e.source, "target": e.target} for e in gs.edges
        ],
        "vertices": [
            {"name": v.name, "stubs": [[s.edge, "out" if s.outgoing else "in"] for s in v.stubs], "intertwiner": itw(v)}
            for v in gs.vertices
        ],
    }
    return json.dumps(doc, indent=2)
