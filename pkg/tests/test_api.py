import math

import pytest
from fastapi.testclient import TestClient

from app.main import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_scan(client):
    response = client.get("/scan", params={"m": 3, "alpha_steps": 4})
    assert response.status_code == 200
    rows = response.json()
    assert len(rows) == 4
    assert rows[2]["class"] == "Loxodromic"
    assert rows[2]["tau_re"] == pytest.approx(-5)


def test_scan_validation(client):
    assert client.get("/scan", params={"m": 1}).status_code == 422


def test_windows(client):
    response = client.get("/windows", params={"m": 10})
    assert response.status_code == 200
    windows = response.json()
    assert len(windows) == 2
    assert windows[0]["lo"] + windows[1]["hi"] == pytest.approx(2 * math.pi, abs=1e-5)


def test_certify(client, m10_alpha):
    response = client.post("/certify", json={"m": 10, "alpha": m10_alpha, "n_max": 12})
    assert response.status_code == 200
    body = response.json()
    assert body["verdict"] == "NonDiscreteOrNonFaithful"
    assert body["params"]["p3"] == "inf"


def test_certify_needs_alpha(client):
    response = client.post("/certify", json={"m": 10})
    assert response.status_code == 400


def test_certify_bad_turns(client):
    response = client.post("/certify", json={"m": 10, "alpha_turns": "x"})
    assert response.status_code == 400


def test_search(client):
    response = client.post("/search", json={"m": 4, "n_max": 10})
    assert response.status_code == 200
    assert response.json()["survivor_count"] == 0


@pytest.mark.parametrize(
    "path,body",
    [
        ("/search", {"m": 4, "n_max": 1000}),
        ("/certify", {"m": 10, "alpha_turns": "1/8", "n_max": 1000}),
        ("/certify", {"m": 10, "alpha_turns": "1/8", "precision_bits": 100000}),
        ("/certify", {"m": 10, "alpha_turns": "1/8", "precision_bits": 32}),
    ],
)
def test_request_bounds(client, path, body):
    assert client.post(path, json=body).status_code == 422


@pytest.mark.parametrize(
    "path,value",
    [("/nt/phi/12", 4), ("/nt/moebius/30", -1), ("/nt/cyclopoly/12", "x^4 - x^2 + 1")],
)
def test_number_theory(client, path, value):
    response = client.get(path)
    assert response.status_code == 200
    assert response.json()["value"] == value


def test_number_theory_validation(client):
    assert client.get("/nt/phi/0").status_code == 422
    assert client.get("/nt/sigma/3").status_code == 422
