"""Computer-algebra sessions.

A session answers named queries, each carried by a GP script.  The live
session pipes the script through a `gp` subprocess; the fixture session
replays the recorded output of an earlier run of the same script, so
the rest of the exporter is identical either way.
"""

import json
import os
import shutil
import subprocess


class CasUnavailable(Exception):
    """The CAS (or a recorded answer for this query) is not available."""


class CasFailure(Exception):
    """The CAS ran but did not produce a usable answer."""


class GpSession:
    """One `gp -q` subprocess per query; no state is shared between
    queries, so jobs are reproducible and trivially parallel."""

    def __init__(self, gp_bin="gp", timeout=120):
        self.gp_bin = gp_bin
        self.timeout = timeout
        if shutil.which(gp_bin) is None:
            raise CasUnavailable(f"{gp_bin!r} not found on PATH")

    def run(self, name, args, script):
        try:
            proc = subprocess.run(
                [self.gp_bin, "-q", "-f"], input=script, text=True,
                capture_output=True, timeout=self.timeout, check=False)
        except subprocess.TimeoutExpired as exc:
            raise CasFailure(f"query {name}: gp timed out") from exc
        if proc.returncode != 0:
            raise CasFailure(f"query {name}: gp exited "
                             f"{proc.returncode}: {proc.stderr.strip()}")
        out = proc.stdout.strip()
        if not out:
            raise CasFailure(f"query {name}: empty gp output")
        return out


class FixtureSession:
    """Replay of recorded GP sessions.

    A fixture file holds a list of entries {name, args, script, output};
    the script is recorded for provenance and the lookup key is
    (name, canonical args).  Unrecorded queries raise CasUnavailable,
    exactly like a host without the CAS.
    """

    def __init__(self, path):
        self.entries = {}
        paths = ([os.path.join(path, f) for f in sorted(os.listdir(path))
                  if f.endswith(".json")]
                 if os.path.isdir(path) else [path])
        for fp in paths:
            with open(fp, encoding="utf-8") as fh:
                for entry in json.load(fh)["entries"]:
                    key = (entry["name"],
                           json.dumps(entry["args"], sort_keys=True))
                    self.entries[key] = entry["output"]

    def run(self, name, args, script):
        key = (name, json.dumps(args, sort_keys=True))
        if key not in self.entries:
            raise CasUnavailable(f"no recorded output for query {name} "
                                 f"with args {args}")
        return self.entries[key]


def bundled_fixture_dir():
    return os.path.join(os.path.dirname(__file__), "fixtures")
