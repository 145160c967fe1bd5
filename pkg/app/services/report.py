import csv
import logging
from pathlib import Path
from typing import Literal, Sequence, Union

import matplotlib
import numpy as np
from matplotlib.figure import Figure
from pydantic import BaseModel

from app.core.errors import ExportError
from app.schema.report import AnalysisReport
from app.schema.trace import CurvatureTrace, Family
from app.schema.umbilic import IndexReport

logger = logging.getLogger(__name__)

TRACE_FIELDS = ["trace_id", "family", "u", "v", "x1", "x2", "x3"]
REPORT_FIELDS = ["section", "surface", "edge", "u", "v", "kind", "order", "index", "method", "s", "beta"]

_FAMILY_COLORS = {Family.FIRST: "#1f77b4", Family.SECOND: "#d62728"}
_VIEW = np.array([1.0, -1.0, 1.0]) / np.sqrt(3.0)
_SCREEN_X = np.array([1.0, 1.0, 0.0]) / np.sqrt(2.0)
_SCREEN_Y = np.cross(_VIEW, _SCREEN_X)
# fixed salt and no date keep repeated exports byte-identical
_SVG_RC = {"svg.hashsalt": "spacelike-cmc", "svg.fonttype": "none"}


def _number(x) -> str:
    return repr(float(x))


class _ReportService:
    def to_json(self, report: BaseModel, timings: bool = False) -> str:
        exclude = None if timings or not isinstance(report, AnalysisReport) else {"timings"}
        return report.model_dump_json(indent=2, exclude=exclude)

    def write_report(
        self,
        report: Union[AnalysisReport, IndexReport],
        path: Union[str, Path],
        format: Literal["json", "csv"] = "json",
        timings: bool = False,
    ) -> Path:
        """
        Write a report as JSON, or as CSV rows of umbilic records and beta samples.

        Raises:
            ExportError: If the file cannot be written.
        """
        path = Path(path)
        try:
            if format == "json":
                path.write_text(self.to_json(report, timings) + "\n", encoding="utf-8")
            elif format == "csv":
                with path.open("w", newline="", encoding="utf-8") as f:
                    writer = csv.DictWriter(f, fieldnames=REPORT_FIELDS, lineterminator="\n")
                    writer.writeheader()
                    writer.writerows(self._report_rows(report))
            else:
                raise ExportError(f"unknown report format {format!r}")
        except OSError as e:
            raise ExportError(f"cannot write {path}: {e}") from e
        logger.info("wrote %s report to %s", format, path)
        return path

    @staticmethod
    def _report_rows(report: Union[AnalysisReport, IndexReport]):
        surface = report.surface
        records = report.umbilics if isinstance(report, AnalysisReport) else report.records
        for r in records:
            yield {
                "section": "umbilic",
                "surface": surface,
                "u": _number(r.u),
                "v": _number(r.v),
                "kind": r.kind.value,
                "order": r.order,
                "index": _number(r.index),
                "method": r.method.value,
            }
        if isinstance(report, AnalysisReport):
            for cap in report.capillary:
                for sample in cap.beta_profile:
                    yield {
                        "section": "beta",
                        "surface": surface,
                        "edge": cap.edge,
                        "s": _number(sample.s),
                        "beta": _number(sample.beta),
                    }

    def export_traces(
        self,
        traces: Sequence[CurvatureTrace],
        path: Union[str, Path],
        format: Literal["svg", "csv"] = "svg",
    ) -> Path:
        """
        Write traces as CSV (one row per point) or as a two-panel SVG: the
        parameter plane and an orthographic view of L^3 along (1, -1, 1).

        Raises:
            ExportError: On empty input (no file is created) or an unwritable path.
        """
        if not traces:
            raise ExportError("no traces to export")
        path = Path(path)
        try:
            if format == "csv":
                self._traces_csv(traces, path)
            elif format == "svg":
                self._traces_svg(traces, path)
            else:
                raise ExportError(f"unknown trace format {format!r}")
        except OSError as e:
            raise ExportError(f"cannot write {path}: {e}") from e
        logger.info("exported %d traces to %s", len(traces), path)
        return path

    @staticmethod
    def _traces_csv(traces: Sequence[CurvatureTrace], path: Path) -> None:
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(TRACE_FIELDS)
            for i, trace in enumerate(traces):
                for (u, v), x in zip(trace.points_param, trace.points_ambient):
                    writer.writerow([i, trace.family.value, *map(_number, (u, v, x.x1, x.x2, x.x3))])

    @staticmethod
    def _traces_svg(traces: Sequence[CurvatureTrace], path: Path) -> None:
        with matplotlib.rc_context(_SVG_RC):
            fig = Figure(figsize=(10, 5))
            param_ax, ambient_ax = fig.subplots(1, 2)
            for i, trace in enumerate(traces):
                color = _FAMILY_COLORS[trace.family]
                uv = np.array(trace.points_param)
                param_ax.plot(uv[:, 0], uv[:, 1], color=color, linewidth=0.8, gid=f"trace-{i}-parameter")
                xyz = np.array([x.to_array() for x in trace.points_ambient])
                ambient_ax.plot(
                    xyz @ _SCREEN_X, xyz @ _SCREEN_Y, color=color, linewidth=0.8, gid=f"trace-{i}-ambient"
                )
            param_ax.set_title("parameter plane")
            param_ax.set_xlabel("u")
            param_ax.set_ylabel("v")
            ambient_ax.set_title("ambient view")
            ambient_ax.set_aspect("equal", adjustable="datalim")
            fig.savefig(path, format="svg", metadata={"Date": None})


ReportService = _ReportService()
