"""HTTP API tests through the FastAPI test client."""
import pytest
from fastapi.testclient import TestClient

from conftest import ESCAPE_TEXT
from main import app
from services.game import parse_game, serialize_game
from services.generators import gen_bigmec, gen_mulmec

client = TestClient(app)


def test_root_and_health():
    assert client.get("/").json()["status"] == "running"
    assert client.get("/health").json() == {"status": "healthy"}


def test_solve_endpoint():
    response = client.post("/api/games/solve", json={"game_text": ESCAPE_TEXT, "model": "escape"})
    assert response.status_code == 200
    body = response.json()
    assert body["model"] == "escape"
    assert body["initial_value"] == pytest.approx(0.5, abs=1e-6)
    assert body["statistics"]["deflations"] > 0


def test_solve_endpoint_exact():
    response = client.post("/api/games/solve", json={
        "game_text": ESCAPE_TEXT,
        "algorithm": "si",
        "options": {"exact_rational": True},
    })
    assert response.status_code == 200
    assert response.json()["exact_values"] == ["1/2", "1/2", "1", "0"]


def test_solve_endpoint_rejects_bad_game():
    response = client.post("/api/games/solve", json={"game_text": "states two\n"})
    assert response.status_code == 400
    assert "line 1" in response.json()["detail"]


def test_solve_endpoint_budget():
    response = client.post("/api/games/solve", json={
        "game_text": serialize_game(gen_mulmec(10)),
        "algorithm": "oracle",
    })
    assert response.status_code == 409


def test_solve_endpoint_validates_algorithm():
    response = client.post("/api/games/solve", json={"game_text": ESCAPE_TEXT, "algorithm": "magic"})
    assert response.status_code == 422


def test_summary_endpoint():
    response = client.post("/api/games/summary", json={"game_text": ESCAPE_TEXT})
    assert response.status_code == 200
    assert response.json() == {
        "states": 4,
        "max_actions": 2,
        "avg_actions": 1.25,
        "mecs": 1,
        "targets": [2],
        "sinks": [3],
        "initial": 0,
    }


def test_encode_endpoint():
    response = client.post("/api/programs/encode", json={
        "game_text": ESCAPE_TEXT,
        "form": "qp",
        "format": "lp-style",
    })
    assert response.status_code == 200
    body = response.json()
    assert body["binaries"] == 4
    assert body["max_degree"] == 2
    assert "b_1_1" in body["program"]


def test_encode_endpoint_infeasible():
    response = client.post("/api/programs/encode", json={"game_text": serialize_game(gen_bigmec(30))})
    assert response.status_code == 409


def test_encode_endpoint_normal_form_error():
    text = ESCAPE_TEXT + "action 1 z (3:1)\n"
    response = client.post("/api/programs/encode", json={"game_text": text, "form": "qp"})
    assert response.status_code == 400
    assert "transform_2act" in response.json()["detail"]


def test_verify_endpoint():
    program = client.post("/api/programs/encode", json={"game_text": ESCAPE_TEXT}).json()["program"]
    passed = client.post("/api/programs/verify", json={"program_text": program, "values": [0.5, 0.5, 1, 0]})
    assert passed.status_code == 200
    assert passed.json()["passed"]
    failed = client.post("/api/programs/verify", json={"program_text": program, "values": [1, 1, 1, 0]})
    assert not failed.json()["passed"]
    short = client.post("/api/programs/verify", json={"program_text": program, "values": [0.5]})
    assert short.status_code == 400


def test_generator_endpoint():
    response = client.post("/api/generators/mulmec", params={"size": 3})
    assert response.status_code == 200
    body = response.json()
    assert body["states"] == 11
    assert parse_game(body["game_text"], exact=True) == gen_mulmec(3)


def test_generator_endpoint_random():
    response = client.post("/api/generators/random", json={"seed": 2, "n_states": 5})
    assert response.status_code == 200
    assert response.json()["states"] == 5


def test_generator_endpoint_unknown_family():
    assert client.post("/api/generators/prison").status_code == 400
