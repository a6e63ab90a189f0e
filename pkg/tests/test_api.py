import math

from fastapi.testclient import TestClient

from anti_orbits.api.app import app, service

client = TestClient(app)


def test_healthz() -> None:
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


def test_standard_shadow_shape(monkeypatch) -> None:
    async def fake_shadow(multiples: list[int], **kwargs) -> dict:
        return {
            "status": "ok",
            "orbit": {"points": [[0.0] for _ in multiples], "local_residual": [0.0 for _ in multiples]},
            "meta": {"stages": ["shadow", "verify"], "coupling": kwargs["coupling"]},
        }

    monkeypatch.setattr(service, "shadow_standard", fake_shadow)

    resp = client.post("/standard/shadow", json={"multiples": [0, 0, 0], "coupling": 12.0})
    assert resp.status_code == 200
    data = resp.json()
    assert data["status"] == "ok"
    assert len(data["orbit"]["points"]) == 3
    assert data["meta"]["stages"] == ["shadow", "verify"]
    assert data["meta"]["coupling"] == 12.0


def test_standard_shadow_forwards_options(monkeypatch) -> None:
    captured: dict = {}

    async def fake_shadow(multiples: list[int], **kwargs) -> dict:
        captured.update(kwargs, multiples=multiples)
        return {"status": "ok", "orbit": None, "meta": {}}

    monkeypatch.setattr(service, "shadow_standard", fake_shadow)

    resp = client.post(
        "/standard/shadow",
        json={"multiples": [0, 1], "coupling": 20.0, "sigma": 0.5, "winding": 1, "verify": False},
    )
    assert resp.status_code == 200
    assert captured["multiples"] == [0, 1]
    assert captured["sigma"] == 0.5
    assert captured["winding"] == 1
    assert captured["verify"] is False
    assert captured["bound"] is None


def test_standard_shadow_rejects_empty_code() -> None:
    resp = client.post("/standard/shadow", json={"multiples": [], "coupling": 12.0})
    assert resp.status_code == 422


def test_standard_shadow_period_two() -> None:
    resp = client.post("/standard/shadow", json={"multiples": [0, 1], "coupling": 20.0})
    assert resp.status_code == 200
    data = resp.json()
    assert data["status"] == "ok"
    u = math.asin(2 * math.pi / 20)
    assert abs(data["orbit"]["points"][0][0] - u) <= 1e-9
    assert data["meta"]["stages"] == ["shadow", "verify"]
    assert data["meta"]["cones"]["pass"] is True


def test_standard_shadow_below_threshold_reports_failure() -> None:
    resp = client.post("/standard/shadow", json={"multiples": [0, 1], "coupling": 2.0})
    assert resp.status_code == 200
    data = resp.json()
    assert data["status"] == "certification_failed"
    assert data["orbit"] is None
    assert data["meta"]["error"]["category"] == "contraction failure"
    assert data["meta"]["error"]["hint"]


def test_standard_entropy() -> None:
    resp = client.post("/standard/entropy", json={"coupling": 20.0})
    assert resp.status_code == 200
    data = resp.json()
    assert data["status"] == "ok"
    assert data["entropy"]["q"] == 7
    assert abs(data["entropy"]["bound_nats"] - math.log(7)) <= 1e-12


def test_standard_entropy_below_threshold() -> None:
    data = client.post("/standard/entropy", json={"coupling": 5.0}).json()
    assert data["status"] == "certification_failed"
    assert data["entropy"] is None
    assert data["meta"]["error"]["category"] == "threshold failure"
