import json
import math
import time

from app.cli import EXIT_ERROR, EXIT_OK, EXIT_VERDICT, cli_main
from app.schema.capillary import CapillaryReport, Verdict
from app.schema.umbilic import IndexReport
from app.services.catalog import CatalogService


def test_catalog_list(capsys):
    assert cli_main(["catalog", "list"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == CatalogService.names()


def test_catalog_build(capsys):
    assert cli_main(["catalog", "build", "hyperbolic-cap", "--param", "c=2"]) == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["params"]["c"] == 2.0


def test_usage_errors(capsys):
    assert cli_main([]) == EXIT_ERROR
    assert cli_main(["catalog", "build"]) == EXIT_ERROR
    assert cli_main(["catalog", "build", "hyperbolic-cap", "--param", "c"]) == EXIT_ERROR
    assert cli_main(["analyze", "torus"]) == EXIT_ERROR
    assert cli_main(["analyze", "planar-disk", "--grid", "3"]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_analyze_planar_disk(tmp_path):
    out = tmp_path / "report.json"
    assert cli_main(["analyze", "planar-disk", "--grid", "17", "-o", str(out)]) == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["everywhere_umbilic"] is True
    assert "timings" not in report


def test_analyze_with_spec_file(tmp_path, capsys):
    spec = tmp_path / "disk.spec"
    spec.write_text("name = planar-disk\nparams.radius = 2\ngrid = 17\n", encoding="utf-8")
    assert cli_main(["analyze", str(spec), "--timings"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["params"]["radius"] == 2.0
    assert "geometry" in report["timings"]


def _capillary(verdict):
    return CapillaryReport(
        edge="left",
        support="SpacelikePlane(normal=(0.3, 0, 1), offset=0.6)",
        beta_profile=[],
        beta_mean=0.5,
        beta_spread=0.1,
        joachimsthal_max=0.7,
        membership_max=0.0,
        verdict=verdict,
    )


def test_capillary_verdicts(mocker, capsys):
    mock_analysis_service = mocker.patch("app.cli.AnalysisService")
    mock_analysis_service.prepare.return_value = (None, None)
    mock_analysis_service.capillary.return_value = [_capillary(Verdict.CAPILLARY)]
    assert cli_main(["capillary", "hyperbolic-cap"]) == EXIT_OK
    mock_analysis_service.capillary.return_value = [_capillary(Verdict.NOT_CONSTANT_ANGLE)]
    assert cli_main(["capillary", "tilted-cut-negative"]) == EXIT_VERDICT
    assert '"NotConstantAngle"' in capsys.readouterr().out


def test_index_verdicts(mocker):
    mock_analysis_service = mocker.patch("app.cli.AnalysisService")
    mock_analysis_service.prepare.return_value = (None, None)
    mock_analysis_service.index.return_value = IndexReport(surface="s", euler_characteristic=1, consistent=True)
    assert cli_main(["index", "truncated-catenoid"]) == EXIT_OK
    mock_analysis_service.index.return_value = IndexReport(surface="s", euler_characteristic=1, consistent=False)
    assert cli_main(["index", "catenoid-conformal"]) == EXIT_VERDICT
    mock_analysis_service.index.return_value = IndexReport(
        surface="s", euler_characteristic=1, everywhere_umbilic=True
    )
    assert cli_main(["index", "planar-disk"]) == EXIT_OK


def test_trace_exports(tmp_path, capsys):
    svg, csv = tmp_path / "lines.svg", tmp_path / "lines.csv"
    args = ["trace", "lorentzian-catenoid", "--family", "Second", "--starts", "1.0,0.3;0.8,2.0"]
    assert cli_main(args + ["--svg", str(svg), "--csv", str(csv)]) == EXIT_OK
    traces = json.loads(capsys.readouterr().out)
    assert [t["stop_reason"] for t in traces] == ["Boundary", "Boundary"]
    assert svg.exists()
    assert csv.read_text(encoding="utf-8").startswith("trace_id,family,u,v,x1,x2,x3")


def test_trace_bad_starts():
    assert cli_main(["trace", "planar-disk", "--starts", "a,b"]) == EXIT_ERROR


def test_index_truncated_catenoid_at_default_grid(tmp_path):
    out = tmp_path / "index.json"
    started = time.perf_counter()
    assert cli_main(["index", "truncated-catenoid", "-o", str(out)]) == EXIT_OK
    assert time.perf_counter() - started < 30
    report = json.loads(out.read_text(encoding="utf-8"))
    assert [r["kind"] for r in report["records"]] == ["VertexAcute"] * 4
    for record in report["records"]:
        assert abs(record["angle"] - math.pi / 2) <= 0.01
        assert abs(record["index"] - 0.25) <= 0.05
    assert abs(report["index_sum"] - 1.0) <= 0.05
    assert report["consistent"] is True
