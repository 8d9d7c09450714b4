import json
from pathlib import Path

import jsonschema
import pytest

from ymcm import verify
from ymcm.reports import csv_rows, dump_json
from ymcm.verify import SUITES, VerifyConfig, run_suite

DOCS = Path(__file__).resolve().parents[1] / "docs"


def test_unknown_suite():
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite("nope")


def test_records_are_reproducible_and_serializable():
    a = run_suite("orthogonality")
    b = run_suite("orthogonality")
    assert dump_json(a) == dump_json(b)
    rows = csv_rows(a)
    assert rows[0] == ["suite", "check", "config", "step", "residual", "tolerance", "pass"]
    assert len(rows) == len(a) + 1
    assert all(r.passed for r in a)


def test_margin_tracks_fd_step():
    assert VerifyConfig().margin == 0.3
    assert VerifyConfig(fd_step=0.05).margin == pytest.approx(0.5)


def test_order_check_rejects_wrong_convergence():
    cfg = VerifyConfig()

    class Fake:
        def __init__(self, r):
            self.residual = r
            self.zero_weight_leak = 0.0

    # first-order decay has ratio 2 and must fail even though the residual is small
    rec = verify._eigen_record("eigen", "fake", {}, lambda h: Fake(h * 1e-2), cfg)
    assert not rec.passed
    rec = verify._eigen_record("eigen", "fake", {}, lambda h: Fake(h * h * 10), cfg)
    assert rec.passed and rec.extra["ratio"] == pytest.approx(4.0)
    # residuals at roundoff level are not ratio-checked
    rec = verify._eigen_record("eigen", "fake", {}, lambda h: Fake(1e-12), cfg)
    assert rec.passed and not rec.extra["order_checked"]


def test_suite_names():
    assert SUITES == ("rmatrix", "eigen", "kzb", "haar", "gluing", "orthogonality")


def test_surface_examples_match_schema():
    schema = json.loads((DOCS / "surface_schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    for path in sorted((DOCS / "surfaces").glob("*.json")):
        jsonschema.validate(json.loads(path.read_text()), schema)


def test_reports_match_schema():
    import math

    from ymcm.reports import Record

    schema = json.loads((DOCS / "report_schema.json").read_text())
    records = run_suite("orthogonality")[:5] + [Record("eigen", "diverged", {}, math.inf, 1e-4, step=1e-3)]
    doc = json.loads(dump_json(records))
    jsonschema.validate(doc, schema)
    assert doc[-1]["residual"] == "inf" and doc[-1]["pass"] is False


def test_cli_json_report_matches_schema():
    import io

    from ymcm.cli import main

    schema = json.loads((DOCS / "report_schema.json").read_text())
    buf = io.StringIO()
    assert main(["verify", "rmatrix", "--format", "json"], out=buf) == 0
    jsonschema.validate(json.loads(buf.getvalue()), schema)
