"""Export validated case files from a PARI/GP session (live or
recorded) for the iwadec decision engine."""

from .export import ANTICYCLO_POLYS, ExportError, ExportJob, export_case
from .session import (CasFailure, CasUnavailable, FixtureSession, GpSession,
                      bundled_fixture_dir)

__version__ = "0.1.0"
__all__ = ["ANTICYCLO_POLYS", "ExportError", "ExportJob", "export_case",
           "CasFailure", "CasUnavailable", "FixtureSession", "GpSession",
           "bundled_fixture_dir"]
