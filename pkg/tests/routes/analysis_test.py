from unittest.mock import MagicMock, patch
from fastapi.testclient import TestClient
from app.core.errors import DomainError, SingularityError, UnknownSurfaceError
from app.main import app


client = TestClient(app)

REPORT = {
    "surface": "planar-disk",
    "params": {"radius": 1.0},
    "grid": 17,
    "derivative_mode": "Analytic",
    "spacelike_min": 1.0,
    "spacelike": True,
    "isothermal_residual": 0.0,
    "isothermal": True,
    "cr_residual": 0.0,
    "everywhere_umbilic": True,
    "umbilics": [],
    "index_sum": None,
    "euler_char": 1,
    "index_consistent": None,
    "skipped": [],
    "capillary": [],
    "expectations": [],
    "timings": {"geometry": 0.01},
}


@patch("app.api.routes.analysis.AnalysisService")
def test_analyze(mock_analysis_service):
    mock_analysis_service.prepare.return_value = (MagicMock(), MagicMock())
    mock_analysis_service.analyze.return_value = REPORT
    response = client.get("/analysis/planar-disk?grid=17")
    assert response.status_code == 200
    body = response.json()
    assert "timings" not in body
    assert body["everywhere_umbilic"] is True
    assert mock_analysis_service.prepare.call_args.kwargs == {"grid": 17}


@patch("app.api.routes.analysis.AnalysisService")
def test_analyze_unknown_surface(mock_analysis_service):
    mock_analysis_service.prepare.side_effect = UnknownSurfaceError("unknown surface 'torus'")
    response = client.get("/analysis/torus")
    assert response.status_code == 404


@patch("app.api.routes.analysis.AnalysisService")
def test_analyze_bad_grid(mock_analysis_service):
    mock_analysis_service.prepare.side_effect = DomainError("GRID must be at least 5")
    response = client.get("/analysis/planar-disk?grid=2")
    assert response.status_code == 422
    assert response.json() == {"detail": "GRID must be at least 5"}


@patch("app.api.routes.analysis.AnalysisService")
def test_index_failure(mock_analysis_service):
    mock_analysis_service.prepare.return_value = (MagicMock(), MagicMock())
    mock_analysis_service.index.side_effect = SingularityError("loop passes an umbilic")
    response = client.get("/analysis/umbilic-test-graph/index")
    assert response.status_code == 422


@patch("app.api.routes.analysis.AnalysisService")
def test_umbilics(mock_analysis_service):
    mock_analysis_service.prepare.return_value = (MagicMock(), MagicMock())
    mock_analysis_service.umbilics.return_value = {"surface": "hyperbolic-cap", "everywhere_umbilic": True}
    response = client.get("/analysis/hyperbolic-cap/umbilics")
    assert response.status_code == 200
    assert response.json() == {"surface": "hyperbolic-cap", "points": [], "everywhere_umbilic": True}


@patch("app.api.routes.analysis.AnalysisService")
def test_capillary(mock_analysis_service):
    mock_analysis_service.prepare.return_value = (MagicMock(), MagicMock())
    mock_analysis_service.capillary.return_value = []
    response = client.get("/analysis/planar-disk/capillary")
    assert response.status_code == 200
    assert response.json() == []
