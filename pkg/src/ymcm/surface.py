"""Heat-kernel class-function series: discs, regions, gluing, point observables.

A :class:`ClassSeries` stores ``Z(g) = sum_lam f_lam chi_lam(g)`` spectrally.
Coefficients are kept in factored form
``f_lam = p_lam * dim(lam)^k * exp(-area * c2(lam))`` so that gluing adds areas
and dimension exponents exactly instead of multiplying rounded numbers; the
observable algebra then holds coefficient by coefficient in floating point.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from math import comb, exp, isfinite

import numpy as np

from . import su2
from .errors import DivergentSeriesError, InvalidArgument, SchemaError
from .lie import (
    HighestWeight,
    RootSystem,
    as_weight,
    casimir2,
    character,
    dominant_weights_below,
    dual_weight,
    weyl_dim,
)


@dataclass(frozen=True)
class PointObservable:
    """Per-irrep multiplier F_lam; equal to ``default`` outside ``values``."""

    values: dict = field(default_factory=dict)
    default: float = 1.0

    def __getitem__(self, lam) -> float:
        return self.values.get(as_weight(lam), self.default)

    def __mul__(self, other: "PointObservable") -> "PointObservable":
        keys = set(self.values) | set(other.values)
        return PointObservable({k: self[k] * other[k] for k in keys}, self.default * other.default)

    def sup_outside(self) -> float:
        return abs(self.default)

    @classmethod
    def orientation(cls, rs: RootSystem, cutoff: float) -> "PointObservable":
        """F_lam = 1 if lam is self-dual, else 0 (symmetrizes over orientations)."""
        vals = {lam: float(dual_weight(rs, lam) == lam) for lam in dominant_weights_below(rs, cutoff)}
        return cls(vals, default=0.0)


@dataclass(frozen=True, eq=False)
class ClassSeries:
    root_system: RootSystem
    prefactors: dict
    area: float
    cutoff: float
    # |p_lam| <= tail_scale * dim(lam)^dim_power beyond the cutoff; None if unknown
    dim_power: float | None = None
    tail_scale: float = 1.0
    # exact power k of dim(lam) factored out of every prefactor
    dim_exponent: int = 0

    def __post_init__(self):
        for lam in self.prefactors:
            if casimir2(self.root_system, lam) > self.cutoff + 1e-9:
                raise InvalidArgument(f"weight {lam} lies beyond the cutoff {self.cutoff}")

    @property
    def coefficients(self) -> dict:
        rs = self.root_system
        return {lam: self.prefactor(lam) * exp(-self.area * casimir2(rs, lam)) for lam in self.prefactors}

    def prefactor(self, lam) -> float:
        """p_lam dim(lam)^k, the coefficient without its exponential."""
        lam = as_weight(lam, self.root_system.rank)
        p = self.prefactors.get(lam, 0.0)
        if not p or not self.dim_exponent:
            return p
        return p * float(weyl_dim(self.root_system, lam)) ** self.dim_exponent

    def coefficient(self, lam) -> float:
        lam = as_weight(lam, self.root_system.rank)
        p = self.prefactor(lam)
        return p * exp(-self.area * casimir2(self.root_system, lam)) if p else 0.0

    def support(self) -> list[HighestWeight]:
        return sorted(self.prefactors, key=lambda w: (casimir2(self.root_system, w), w.coords))

    def tail_bound(self) -> float | None:
        """Bound on sup_g |Z(g) - truncated Z(g)| (uses |chi_lam| <= dim lam)."""
        if self.dim_power is None:
            return None
        if self.area <= 0:
            return float("inf")
        return self.tail_scale * tail_bound(self.root_system, self.area, self.dim_power + 1, self.cutoff)

    def equals(self, other: "ClassSeries", rtol: float = 0.0) -> bool:
        """Coefficient-wise comparison on the shared support."""
        keys = set(self.prefactors) | set(other.prefactors)
        for k in keys:
            a, b = self.coefficient(k), other.coefficient(k)
            if abs(a - b) > rtol * max(abs(a), abs(b)):
                return False
        return True


def _check_area(A: float) -> float:
    A = float(A)
    if not isfinite(A) or A <= 0:
        raise DivergentSeriesError(f"area must be positive, got {A}")
    return A


def region_kernel(rs: RootSystem, A: float, genus: int, cutoff: float) -> ClassSeries:
    """Region of area A and genus g: f_lam = dim^{1-2g} e^{-A c2}."""
    A = _check_area(A)
    if int(genus) != genus or genus < 0:
        raise InvalidArgument(f"genus must be a non-negative integer, got {genus}")
    power = 1 - 2 * int(genus)
    pref = {lam: 1.0 for lam in dominant_weights_below(rs, cutoff)}
    return ClassSeries(rs, pref, A, float(cutoff), dim_power=power, dim_exponent=power)


def disc_kernel(rs: RootSystem, A: float, cutoff: float) -> ClassSeries:
    """Heat kernel on a disc: f_lam = dim(lam) e^{-A c2(lam)}."""
    return region_kernel(rs, A, 0, cutoff)


def unit_series(rs: RootSystem, cutoff: float) -> ClassSeries:
    """Zero-area limit f_lam = dim(lam) (delta function); neutral for :func:`glue`."""
    pref = {lam: 1.0 for lam in dominant_weights_below(rs, cutoff)}
    return ClassSeries(rs, pref, 0.0, float(cutoff), dim_power=1, dim_exponent=1)


def glue(k1: ClassSeries, k2: ClassSeries) -> ClassSeries:
    """Contract two kernels over a shared boundary: c_lam = f_lam g_lam / dim(lam)."""
    if k1.root_system != k2.root_system:
        raise InvalidArgument("cannot glue series over different groups")
    rs = k1.root_system
    cutoff = min(k1.cutoff, k2.cutoff)
    pref = {}
    for lam, p in k1.prefactors.items():
        q = k2.prefactors.get(lam)
        if q is None or casimir2(rs, lam) > cutoff + 1e-9:
            continue
        pref[lam] = p * q
    power = None
    if k1.dim_power is not None and k2.dim_power is not None:
        power = k1.dim_power + k2.dim_power - 1
    exponent = k1.dim_exponent + k2.dim_exponent - 1
    return ClassSeries(rs, pref, k1.area + k2.area, cutoff, power, k1.tail_scale * k2.tail_scale, exponent)


def insert_observable(k: ClassSeries, F: PointObservable) -> ClassSeries:
    """Multiply coefficients by F_lam."""
    pref = {lam: p * F[lam] for lam, p in k.prefactors.items()}
    outside = max([F.sup_outside()] + [abs(v) for lam, v in F.values.items() if casimir2(k.root_system, lam) > k.cutoff])
    return ClassSeries(k.root_system, pref, k.area, k.cutoff, k.dim_power, k.tail_scale * outside, k.dim_exponent)


def observable_kernel(rs: RootSystem, A: float, F: PointObservable, cutoff: float) -> ClassSeries:
    """Disc kernel with a point observable inserted: F_lam dim(lam) e^{-A c2}."""
    return insert_observable(disc_kernel(rs, A, cutoff), F)


def evaluate(k: ClassSeries, q):
    """sum_lam f_lam chi_lam(q); ``q`` may carry leading batch axes."""
    rs = k.root_system
    total = 0
    for lam, f in sorted(k.coefficients.items()):
        total = total + f * character(rs, lam, q)
    if np.ndim(total) == 0:
        return complex(total)
    return total


def evaluate_su2(k: ClassSeries, g: np.ndarray) -> np.ndarray:
    """Evaluate an SU(2) series at group matrices (..., 2, 2) via characters."""
    if k.root_system.rank != 1:
        raise InvalidArgument("evaluate_su2 needs an SU(2) series")
    coeffs = k.coefficients
    if not coeffs:
        return np.zeros(np.shape(g)[:-2], dtype=complex)
    mmax = max(lam.coords[0] for lam in coeffs)
    chars = su2.characters(g, mmax)
    vec = np.zeros(mmax + 1)
    for lam, f in coeffs.items():
        vec[lam.coords[0]] = f
    return chars @ vec


def tail_bound(rs: RootSystem, A: float, power: float, cutoff: float) -> float:
    """Upper bound on sum over lam with c2(lam) > cutoff of dim(lam)^power e^{-A c2(lam)}.

    Group dominant weights by s = sum of Dynkin labels.  There are
    binom(s+r-1, r-1) of them, each with dim <= (1+s)^P (P positive roots) and
    kappa s^2 / r + 2 c s <= c2 <= kappa' s^2 + 2 c' s.
    """
    A = _check_area(A)
    r = rs.rank
    B = rs.bilinear_form
    eig = np.linalg.eigvalsh(B)
    kappa, kappa_hi = float(eig[0]), float(eig[-1])
    rho_pair = B @ np.ones(r)
    c_lo, c_hi = float(rho_pair.min()), float(rho_pair.max())
    P = r * (r + 1) // 2
    total = 0.0
    s = 1
    while True:
        hi = kappa_hi * s * s + 2 * c_hi * s
        if hi > cutoff:
            lo = max(cutoff, kappa * s * s / r + 2 * c_lo * s)
            d = (1 + s) ** (P * power) if power > 0 else 1.0
            term = comb(s + r - 1, r - 1) * d * exp(-A * lo)
            total += term
            if lo > cutoff and term < 1e-18 * max(total, 1e-300):
                # consecutive terms now shrink by at least exp(-A kappa/r) each; bound the rest
                ratio = (
                    exp(-A * (kappa * (2 * s + 1) / r + 2 * c_lo))
                    * ((s + r) / s)
                    * ((s + 2) / (s + 1)) ** (P * max(power, 0))
                )
                if ratio < 0.5:
                    return total + term * ratio / (1 - ratio)
        s += 1
        if s > 10**6:
            raise RuntimeError("tail bound did not converge")


# serialization ----------------------------------------------------------------

def _group_name(rs: RootSystem) -> str:
    return rs.name


def _parse_group(name: str) -> RootSystem:
    name = name.strip().lower().replace("(", "").replace(")", "")
    if not name.startswith("su") or not name[2:].isdigit():
        raise SchemaError(f"unknown group {name!r}")
    return RootSystem.su(int(name[2:]))


def to_csv(k: ClassSeries) -> str:
    """Two columns: space-separated Dynkin labels, coefficient (repr precision)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["weight", "coefficient"])
    for lam in k.support():
        w.writerow([" ".join(map(str, lam.coords)), repr(k.coefficient(lam))])
    return buf.getvalue()


def from_csv(text: str, rs: RootSystem, cutoff: float | None = None) -> ClassSeries:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["weight", "coefficient"]:
        raise SchemaError("expected header 'weight,coefficient'")
    pref = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise SchemaError(f"line {lineno}: expected 2 columns")
        try:
            lam = as_weight(tuple(int(x) for x in row[0].split()), rs.rank)
            pref[lam] = float(row[1])
        except (ValueError, InvalidArgument) as exc:
            raise SchemaError(f"line {lineno}: {exc}") from None
    if cutoff is None:
        cutoff = max([casimir2(rs, lam) for lam in pref] + [0.0]) or 1.0
    return ClassSeries(rs, pref, 0.0, float(cutoff))


def to_json(k: ClassSeries) -> str:
    doc = {
        "group": _group_name(k.root_system),
        "cutoff": k.cutoff,
        "area": k.area,
        "terms": [
            {"weight": list(lam.coords), "prefactor": k.prefactor(lam), "coefficient": k.coefficient(lam)}
            for lam in k.support()
        ],
    }
    return json.dumps(doc, indent=2)


def from_json(text: str) -> ClassSeries:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}: {exc.msg}") from None
    unknown = set(doc) - {"group", "cutoff", "area", "terms"}
    if unknown:
        raise SchemaError(f"unknown fields {sorted(unknown)}")
    rs = _parse_group(doc["group"])
    pref = {as_weight(t["weight"], rs.rank): float(t["prefactor"]) for t in doc["terms"]}
    return ClassSeries(rs, pref, float(doc["area"]), float(doc["cutoff"]))
