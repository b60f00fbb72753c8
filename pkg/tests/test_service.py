"""Tests for the HTTP service endpoints."""

import pytest
from fastapi.testclient import TestClient

from gkesim.service import create_app


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


@pytest.fixture(scope="module")
def toy_record(client):
    response = client.post(
        "/setup", json={"n": 8, "params": "toy", "seed": 11, "ids": "sequential"}
    )
    assert response.status_code == 200
    return response.json()["community"]


def run_honest(client, record, group=("2", "4", "5"), initiator="1", **kw):
    body = {
        "community": record,
        "group_ids": list(group),
        "initiator_id": initiator,
        **kw,
    }
    return client.post("/run/honest", json=body)


@pytest.fixture(scope="module")
def honest_events(client, toy_record):
    return run_honest(client, toy_record).json()["events"]


class TestSetup:
    def test_deterministic(self, client):
        body = {"n": 4, "params": "toy", "seed": 9}
        a = client.post("/setup", json=body).json()
        b = client.post("/setup", json=body).json()
        assert a == b

    def test_seed_changes_community(self, client):
        a = client.post("/setup", json={"n": 4, "params": "toy", "seed": 1}).json()
        b = client.post("/setup", json={"n": 4, "params": "toy", "seed": 2}).json()
        assert a != b

    def test_record_shape(self, toy_record):
        assert set(toy_record) == {"params", "ca", "members"}
        assert len(toy_record["members"]) == 8

    def test_bad_n_rejected(self, client):
        response = client.post("/setup", json={"n": 0, "params": "toy"})
        assert response.status_code == 422

    def test_unknown_params_rejected(self, client):
        response = client.post("/setup", json={"n": 4, "params": "huge"})
        assert response.status_code == 422

    def test_n_exceeding_group_order(self, client):
        response = client.post("/setup", json={"n": 30, "params": "toy"})
        assert response.status_code == 400


class TestRun:
    def test_honest(self, client, toy_record):
        response = run_honest(client, toy_record)
        assert response.status_code == 200
        body = response.json()
        assert body["ok"] is True
        assert body["summary"] == "3/3 accepted, keys equal"
        assert body["events"][0]["type"] == "setup"

    def test_honest_deterministic(self, client, toy_record):
        a = run_honest(client, toy_record, seed=4).json()
        b = run_honest(client, toy_record, seed=4).json()
        assert a == b

    def test_unknown_initiator_rejected(self, client, toy_record):
        response = run_honest(client, toy_record, initiator="ff")
        assert response.status_code == 400
        assert "detail" in response.json()

    def test_paper_literal(self, client):
        record = client.post(
            "/setup", json={"n": 6, "params": "std", "seed": 6}
        ).json()["community"]
        ids = sorted(m["id"] for m in record["members"])
        body = {
            "community": record,
            "group_ids": ids[:3],
            "initiator_id": ids[0],
        }
        response = client.post("/run/paper-literal", json=body)
        assert response.status_code == 200
        payload = response.json()
        assert payload["ok"] is True
        assert payload["summary"] == (
            "3/3 members accepted; 3/3 non-members rejected (commitment_mismatch)"
        )


class TestAttacks:
    def test_replay(self, client, honest_events):
        response = client.post(
            "/attack/replay", json={"events": honest_events, "leak_key": True}
        )
        assert response.status_code == 200
        body = response.json()
        assert body["ok"] is True
        assert body["summary"] == "3/3 accepted forged replay"

    def test_replay_without_leak_rejected(self, client, honest_events):
        response = client.post("/attack/replay", json={"events": honest_events})
        assert response.status_code == 400

    def test_insider(self, client, honest_events):
        response = client.post(
            "/attack/insider", json={"events": honest_events, "insider_id": "4"}
        )
        assert response.status_code == 200
        assert response.json()["summary"] == "3/3 accepted K*"

    def test_insider_fixed_key(self, client, honest_events):
        response = client.post(
            "/attack/insider",
            json={"events": honest_events, "insider_id": "4", "new_key": "9"},
        )
        assert response.status_code == 200
        assert response.json()["ok"] is True

    def test_insider_bad_key_hex(self, client, honest_events):
        response = client.post(
            "/attack/insider",
            json={"events": honest_events, "insider_id": "4", "new_key": "zz"},
        )
        assert response.status_code == 400

    def test_insider_outside_group(self, client, honest_events):
        response = client.post(
            "/attack/insider", json={"events": honest_events, "insider_id": "3"}
        )
        assert response.status_code == 400

    def test_dlog(self, client, honest_events):
        response = client.post(
            "/attack/dlog", json={"events": honest_events, "victim_id": "5"}
        )
        assert response.status_code == 200
        assert response.json()["summary"] == "recovered key matches ground truth"

    def test_dlog_refused_at_large_params(self, client):
        record = client.post(
            "/setup", json={"n": 4, "params": "std", "seed": 1, "ids": "sequential"}
        ).json()["community"]
        events = run_honest(
            client, record, group=("2", "3"), initiator="1"
        ).json()["events"]
        response = client.post(
            "/attack/dlog", json={"events": events, "victim_id": "2"}
        )
        assert response.status_code == 400
        assert "detail" in response.json()

    def test_attack_preserves_honest_prefix(self, client, honest_events):
        response = client.post(
            "/attack/dlog", json={"events": honest_events, "victim_id": "5"}
        )
        extended = response.json()["events"]
        assert extended[: len(honest_events) - 1] == honest_events[:-1]
