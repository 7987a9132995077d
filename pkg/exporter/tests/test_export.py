"""Exporter acceptance: emitted files are schema-valid and the decision
engine's verdicts on them match the published tables.

The decision engine is exercised only through its public surface (the
case-file schema and the `iwadec` CLI)."""

import json
import subprocess
import sys

import pytest

from pariexport import (CasUnavailable, ExportError, ExportJob,
                        FixtureSession, GpSession, bundled_fixture_dir,
                        export_case)
from pariexport.cli import main as cli_main


@pytest.fixture(scope="module")
def session():
    return FixtureSession(bundled_fixture_dir())


def analyze_verdict(path):
    proc = subprocess.run(
        [sys.executable, "-m", "iwadec.cli", "--json-report",
         "analyze", str(path)],
        capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)["verdict"]


@pytest.mark.parametrize("d", [2437, 12394])
def test_emitted_file_is_valid_and_verdict_matches(tmp_path, session, d):
    out = tmp_path / f"{d}.json"
    raw = export_case(ExportJob(p=3, d=d, out=str(out)), session)
    assert raw["schema_version"] == "1"
    verdict = analyze_verdict(out)
    assert verdict["cyclic"] == "Cyclic"


def test_export_is_deterministic(tmp_path, session):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    export_case(ExportJob(p=3, d=2437, out=str(a)), session)
    export_case(ExportJob(p=3, d=2437, out=str(b)), session)
    assert a.read_bytes() == b.read_bytes()


def test_split_prime_is_refused(session):
    with pytest.raises(ExportError, match="splits"):
        export_case(ExportJob(p=3, d=11), session)


def test_non_squarefree_is_refused(session):
    with pytest.raises(ExportError):
        export_case(ExportJob(p=3, d=12), session)


def test_unrecorded_job_reports_cas_unavailable(session):
    with pytest.raises(CasUnavailable):
        export_case(ExportJob(p=3, d=5703), session)


def test_missing_gp_binary():
    with pytest.raises(CasUnavailable):
        GpSession("definitely-not-a-gp-binary")


class TestCli:
    def test_export_ok(self, tmp_path, capsys):
        out = tmp_path / "case.json"
        with pytest.raises(SystemExit) as exc:
            cli_main(["export", "--p", "3", "--d", "12394",
                      "--backend", "fixtures", "--out", str(out)])
        assert exc.value.code == 0
        assert json.loads(out.read_text())["d"] == 12394

    def test_refusal_exit_code(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            cli_main(["export", "--p", "3", "--d", "11",
                      "--backend", "fixtures",
                      "--out", str(tmp_path / "x.json")])
        assert exc.value.code == 3
