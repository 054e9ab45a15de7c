import numpy as np
import pytest
from fastapi.testclient import TestClient

from cn_duality.service.app import app

Q_REF = 0.5 * np.log(1.0 + np.sqrt(2.0))


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def simulate_payload(**overrides):
    payload = {
        "model": "rsvd",
        "n": 1,
        "g": 1.0,
        "g2": 1.0,
        "initial_state": [1.0, 0.0],
        "t_end": 2.0,
        "samples": 5,
        "solver": "spectral",
        "seed": 0,
    }
    payload.update(overrides)
    return payload


class TestHealth:
    def test_ok(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json()["status"] == "ok"


class TestSimulate:
    def test_reference_run(self, client):
        resp = client.post("/simulate", json=simulate_payload())
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "ok"
        run = body["runs"][0]
        assert run["rows"] == 5
        lines = run["csv"].strip().split("\n")
        assert lines[0] == "t,lambda_1,theta_1,energy,action_1"
        lam_column = [float(line.split(",")[1]) for line in lines[1:]]
        expected = [np.sqrt(1 + t * t) for t in (0.0, 0.5, 1.0, 1.5, 2.0)]
        assert np.allclose(lam_column, expected, atol=1e-10)
        assert run["energy_drift"] <= 1e-10

    def test_deterministic_csv(self, client):
        a = client.post("/simulate", json=simulate_payload()).json()
        b = client.post("/simulate", json=simulate_payload()).json()
        assert a["runs"][0]["csv"] == b["runs"][0]["csv"]

    def test_both_solvers_deviation(self, client):
        resp = client.post("/simulate", json=simulate_payload(solver="both", t_end=1.0, samples=3))
        body = resp.json()
        assert {run["solver"] for run in body["runs"]} == {"spectral", "rk4"}
        assert body["deviation"] <= 1e-5

    def test_sutherland_header(self, client):
        resp = client.post(
            "/simulate",
            json=simulate_payload(model="sutherland", initial_state=[Q_REF, 0.0], t_end=1.0, samples=3),
        )
        csv = resp.json()["runs"][0]["csv"]
        assert csv.split("\n")[0] == "t,q_1,p_1,energy,action_1"

    def test_chamber_violation_400(self, client):
        resp = client.post(
            "/simulate",
            json=simulate_payload(model="sutherland", n=2, initial_state=[0.5, 1.0, 0.0, 0.0]),
        )
        assert resp.status_code == 400
        assert "decreasing" in resp.json()["detail"]

    def test_wrong_state_length_400(self, client):
        resp = client.post("/simulate", json=simulate_payload(n=2))
        assert resp.status_code == 400

    def test_zero_t_end_400(self, client):
        resp = client.post("/simulate", json=simulate_payload(t_end=0.0))
        assert resp.status_code == 400

    def test_bad_samples_422(self, client):
        resp = client.post("/simulate", json=simulate_payload(samples=1))
        assert resp.status_code == 422

    def test_unknown_solver_422(self, client):
        resp = client.post("/simulate", json=simulate_payload(solver="euler"))
        assert resp.status_code == 422

    def test_zero_coupling_400(self, client):
        resp = client.post("/simulate", json=simulate_payload(g=0.0))
        assert resp.status_code == 400

    def test_near_degenerate_initial_aborts(self, client):
        # Tiny couplings with equal momenta give a Lax spectrum whose pair
        # gap is below the regularity tolerance: aborted at the first sample.
        resp = client.post(
            "/simulate",
            json=simulate_payload(
                model="sutherland",
                n=2,
                g=1e-5,
                g2=1e-5,
                initial_state=[6.0, 2.0, 1.0, 1.0],
                t_end=1.0,
                samples=3,
            ),
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "aborted"
        assert body["runs"][0]["aborted"] is True


class TestDualize:
    def test_forward_reference(self, client):
        resp = client.post(
            "/dualize",
            json={"direction": "s2r", "n": 1, "g": 1.0, "g2": 1.0, "state": [Q_REF, 0.0]},
        )
        body = resp.json()
        assert resp.status_code == 200
        assert body["mapped_state"][0] == pytest.approx(1.0, abs=1e-10)
        assert body["mapped_state"][1] == pytest.approx(0.0, abs=1e-10)
        assert body["roundtrip_residual"] <= 1e-10

    def test_backward_reference(self, client):
        resp = client.post(
            "/dualize",
            json={"direction": "r2s", "n": 1, "g": 1.0, "g2": 1.0, "state": [1.0, 0.0]},
        )
        body = resp.json()
        assert body["mapped_state"][0] == pytest.approx(Q_REF, abs=1e-10)
        assert body["roundtrip_residual"] <= 1e-10

    def test_invalid_direction_422(self, client):
        resp = client.post(
            "/dualize",
            json={"direction": "up", "n": 1, "g": 1.0, "g2": 1.0, "state": [1.0, 0.0]},
        )
        assert resp.status_code == 422


class TestVerify:
    def test_small_run_passes(self, client):
        resp = client.post("/verify", json={"seed": 2, "n_max": 2, "draws": 5})
        body = resp.json()
        assert resp.status_code == 200
        assert body["overall_pass"] is True
        assert len(body["checks"]) >= 18
        names = [c["name"] for c in body["checks"]]
        assert names == sorted(names)

    def test_deterministic_report(self, client):
        a = client.post("/verify", json={"seed": 3, "n_max": 2, "draws": 4}).json()
        b = client.post("/verify", json={"seed": 3, "n_max": 2, "draws": 4}).json()
        assert a == b

    def test_tolerance_override_can_fail(self, client):
        resp = client.post(
            "/verify",
            json={"seed": 2, "n_max": 1, "draws": 3, "tolerances": {"duality_roundtrip": 1e-30}},
        )
        body = resp.json()
        assert body["overall_pass"] is False
        failing = [c for c in body["checks"] if not c["passed"]]
        assert [c["name"] for c in failing] == ["duality_roundtrip"]

    def test_unknown_override_400(self, client):
        resp = client.post(
            "/verify", json={"seed": 0, "n_max": 1, "draws": 1, "tolerances": {"nope": 1.0}}
        )
        assert resp.status_code == 400
