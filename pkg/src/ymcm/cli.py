"""Command-line front end.

Subcommands: ``irrep``, ``surface``, ``propagate``, ``observables`` and
``verify``.  Defaults come from a JSON config file (``--config`` or the
``YMCM_CONFIG`` environment variable) with keys ``group``, ``casimir_cutoff``,
``resolution``, ``fd_step``, ``tolerance``, ``format`` and ``seed``; flags
override it.  Output goes to stdout as CSV (default) or JSON and is
byte-identical for identical arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, fields, replace

CONFIG_ENV = "YMCM_CONFIG"
_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    group: str = "su2"
    casimir_cutoff: float = 40.0
    resolution: int = 24
    fd_step: float = 1e-3
    tolerance: float | None = None  # None: each suite's own tolerance
    format: str = "csv"
    seed: int = 2024

    def check(self) -> "RunConfig":
        if not self.casimir_cutoff > 0:
            raise UsageError(f"cutoff must be positive, got {self.casimir_cutoff}")
        if not 0 < self.fd_step <= 0.1:
            raise UsageError(f"fd-step must lie in (0, 0.1], got {self.fd_step}")
        if self.resolution < 8:
            raise UsageError(f"resolution must be at least 8, got {self.resolution}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.format!r}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise UsageError(f"tolerance must be positive, got {self.tolerance}")
        return self


def load_config(path: str | None) -> RunConfig:
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return RunConfig()
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path}, line {exc.lineno}: {exc.msg}") from None
    known = {f.name for f in fields(RunConfig)}
    unknown = set(doc) - known
    if unknown:
        raise UsageError(f"config {path}: unknown keys {sorted(unknown)}")
    return RunConfig(**doc)


# output -------------------------------------------------------------------------------

def _num(x) -> str:
    return repr(float(x))


def emit_rows(rows: list[list], fmt: str, out) -> None:
    """First row is the header."""
    if fmt == "json":
        header = rows[0]
        out.write(json.dumps([dict(zip(header, r)) for r in rows[1:]], indent=2, sort_keys=True) + "\n")
    else:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        out.write(buf.getvalue())


def _matrix_rows(M) -> list[list]:
    rows = [["row", "col", "re", "im"]]
    for i in range(M.shape[0]):
        for j in range(M.shape[1]):
            rows.append([i, j, float(M[i, j].real), float(M[i, j].imag)])
    return rows


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


# subcommands ------------------------------------------------------------------------------

def cmd_irrep(args, cfg: RunConfig, out) -> int:
    """dim / c2 table, optionally with character values at torus angles."""
    import numpy as np

    from .lie import casimir2, character, dominant_weights_below, weyl_dim
    from .surface import _parse_group

    rs = _parse_group(cfg.group)
    points = [_floats(p) for p in args.at]
    for p in points:
        if len(p) != rs.rank:
            raise UsageError(f"--at needs {rs.rank} angle(s), got {len(p)}")
    header = ["m" if rs.rank == 1 else "weight", "dim", "c2"]
    header += [f"chi@{','.join(map(_num, p))}" for p in points]
    rows = [header]
    for lam in dominant_weights_below(rs, cfg.casimir_cutoff):
        label = lam.coords[0] if rs.rank == 1 else " ".join(map(str, lam.coords))
        row = [label, weyl_dim(rs, lam), casimir2(rs, lam)]
        for p in points:
            row.append(float(np.real(character(rs, lam, np.asarray(p)))))
        rows.append(row)
    emit_rows(rows, cfg.format, out)
    return 0


def _parse_holonomies(items: list[str]) -> dict:
    from . import su2

    hol = {}
    for item in items:
        name, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--holonomy expects EDGE=ANGLES, got {item!r}")
        ang = _floats(val)
        if len(ang) == 1:
            hol[name] = su2.torus_element(ang[0])
        elif len(ang) == 3:
            hol[name] = su2.euler_element(*ang)
        else:
            raise UsageError(f"--holonomy {name}: give one torus angle or three Euler angles")
    return hol


def _parse_areas(items: list[str], gs) -> dict:
    areas = {}
    for item in items:
        name, sep, val = item.partition("=")
        if sep:
            areas[name] = _floats(val)[0]
        else:
            a = _floats(item)[0]
            areas.update({r.name: a for r in gs.regions})
    return areas


def cmd_surface(args, cfg: RunConfig, out) -> int:
    from .haar import QuadratureSpec
    from .wilson.coloring import validate
    from .wilson.evaluate import evaluate_partition, evaluate_quadrature
    from .wilson.graph import from_json

    try:
        with open(args.spec) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.spec}: {exc.strerror}") from None
    gs = from_json(text)
    areas = _parse_areas(args.area, gs)
    if areas:
        unknown = set(areas) - {r.name for r in gs.regions}
        if unknown:
            raise UsageError(f"--area names unknown regions {sorted(unknown)}")
        gs = gs.with_areas(areas)
    if args.validate:
        report = validate(gs)
        rows = [["kind", "where", "message"]] + [[i.kind, i.where, i.message] for i in report.issues]
        emit_rows(rows, cfg.format, out)
        return 0 if report.ok else 1
    hol = _parse_holonomies(args.holonomy)
    if args.method == "quadrature":
        st = evaluate_quadrature(gs, hol, QuadratureSpec("euler", cfg.resolution), cfg.casimir_cutoff)
    else:
        st = evaluate_partition(gs, hol, cfg.casimir_cutoff)
    if not st.slots:
        z = complex(st.value)
        emit_rows([["re", "im"], [z.real, z.imag]], cfg.format, out)
    else:
        emit_rows(_matrix_rows(st.matrix()), cfg.format, out)
    return 0


def cmd_propagate(args, cfg: RunConfig, out) -> int:
    import numpy as np

    from . import calogero as cm
    from . import su2
    from .haar import QuadratureSpec
    from .wilson.propagator import cylinder_propagator_integral

    spins = _ints(args.spins)
    areas = _floats(args.areas)
    if len(areas) == 1:
        areas = areas * len(spins)
    U = cm.Propagator(tuple(spins), tuple(areas), cfg.casimir_cutoff)
    if args.spectrum:
        rows = [["sector", "c2_weighted", "weight"]]
        for s, w in sorted(U.spectrum().items()):
            rows.append([" ".join(map(str, s)), sum(cm.c2(n) * a for n, a in zip(s, U.areas)), w])
        emit_rows(rows, cfg.format, out)
        return 0
    if args.method == "integral":
        N = len(spins)
        gs = np.stack([su2.torus_element(0.0)] * (N - 1) + [su2.torus_element(args.theta)])
        gp = np.stack([su2.torus_element(0.0)] * (N - 1) + [su2.torus_element(args.theta_p)])
        res = cylinder_propagator_integral(spins, areas, gs, gp, QuadratureSpec("euler", cfg.resolution))
        M = res.value
    else:
        M = U.kernel(args.theta, args.theta_p)
    emit_rows(_matrix_rows(M), cfg.format, out)
    return 0


def cmd_observables(args, cfg: RunConfig, out) -> int:
    import numpy as np

    from .lie import SU2
    from .surface import glue, observable_kernel
    from .verify import random_observable

    rng = np.random.default_rng(cfg.seed)
    A, B = _floats(args.areas)
    F, G = random_observable(rng, args.support), random_observable(rng, args.support)
    lhs = glue(observable_kernel(SU2, A, F, cfg.casimir_cutoff), observable_kernel(SU2, B, G, cfg.casimir_cutoff))
    rhs = observable_kernel(SU2, A + B, F * G, cfg.casimir_cutoff)
    rows = [["m", "F", "G", "glued", "product", "difference"]]
    for lam in rhs.support():
        a, b = lhs.coefficient(lam), rhs.coefficient(lam)
        rows.append([lam.coords[0], F[lam], G[lam], a, b, a - b])
    emit_rows(rows, cfg.format, out)
    return 0


def cmd_verify(args, cfg: RunConfig, out) -> int:
    from .reports import csv_rows, dump_json
    from .verify import VerifyConfig, run_suite

    vc = VerifyConfig(seed=cfg.seed, fd_step=cfg.fd_step, resolution=cfg.resolution, cutoff=cfg.casimir_cutoff)
    if cfg.tolerance is not None:
        t = cfg.tolerance
        vc = replace(vc, tolerance=t, identity_tolerance=t, quadrature_tolerance=t)
    records = run_suite(args.suite, vc)
    if cfg.tolerance is not None:
        # one threshold for every check
        records = [replace(r, tolerance=cfg.tolerance) for r in records]
    if cfg.format == "json":
        out.write(dump_json(records) + "\n")
    else:
        emit_rows(csv_rows(records), "csv", out)
    failed = sum(not r.passed for r in records)
    print(f"{len(records) - failed}/{len(records)} checks passed", file=sys.stderr)
    return 1 if failed else 0


# parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"JSON config with defaults (else ${CONFIG_ENV})")
    common.add_argument("--group", help="su2, su3, ... (default su2)")
    common.add_argument("--cutoff", type=float, dest="casimir_cutoff", help="Casimir cutoff for spectral sums")
    common.add_argument("--resolution", type=int, help="quadrature points per dimension")
    common.add_argument("--fd-step", type=float, dest="fd_step", help="finite-difference step")
    common.add_argument("--tolerance", type=float, help="override every check's tolerance")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int, help="seed for all random sampling")
    common.add_argument("--threads", type=int, help="BLAS threads for the numerical kernels")

    p = argparse.ArgumentParser(prog="ymcm", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("irrep", parents=[common], help="dimension, Casimir and character table")
    s.add_argument("--at", action="append", default=[], metavar="ANGLES", help="torus angles for character columns")
    s.set_defaults(func=cmd_irrep)

    s = sub.add_parser("surface", parents=[common], help="partition function of a surface spec file")
    s.add_argument("spec", help="surface JSON file (schema in docs/surface_schema.json)")
    s.add_argument("--area", action="append", default=[], metavar="[REGION=]A", help="area override")
    s.add_argument("--holonomy", action="append", default=[], metavar="EDGE=ANGLES", help="boundary holonomy")
    s.add_argument("--method", choices=("spectral", "quadrature"), default="spectral")
    s.add_argument("--validate", action="store_true", help="list structural and coloring issues instead")
    s.set_defaults(func=cmd_surface)

    s = sub.add_parser("propagate", parents=[common], help="spin CM multi-time propagator kernel")
    s.add_argument("--spins", required=True, help="comma-separated Wilson-line spins (2j)")
    s.add_argument("--areas", required=True, help="comma-separated areas (one value: all equal)")
    s.add_argument("--theta", type=float, default=0.7)
    s.add_argument("--theta-p", type=float, dest="theta_p", default=1.3)
    s.add_argument("--method", choices=("spectral", "integral"), default="spectral")
    s.add_argument("--spectrum", action="store_true", help="list sectors and weights instead")
    s.set_defaults(func=cmd_propagate)

    s = sub.add_parser("observables", parents=[common], help="point-observable convolution demo")
    s.add_argument("--areas", default="0.3,0.7", help="areas A,B")
    s.add_argument("--support", type=int, default=5, help="F, G are supported on spins below this")
    s.set_defaults(func=cmd_observables)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=("rmatrix", "eigen", "kzb", "haar", "gluing", "orthogonality", "all"))
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.threads is not None:
        if args.threads < 1:
            print("ymcm: error: --threads must be positive", file=sys.stderr)
            return 2
        for var in _THREAD_VARS:
            os.environ[var] = str(args.threads)
    from .errors import YMError

    try:
        cfg = load_config(args.config)
        overrides = {k: getattr(args, k) for k in asdict(cfg) if getattr(args, k, None) is not None}
        cfg = replace(cfg, **overrides).check()
        return args.func(args, cfg, out)
    except UsageError as exc:
        print(f"ymcm: error: {exc}", file=sys.stderr)
        return 2
    except YMError as exc:
        print(f"ymcm: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
