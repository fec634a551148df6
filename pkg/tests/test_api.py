from fastapi.testclient import TestClient

from main import app

client = TestClient(app)


def test_health():
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok"}


def test_chain():
    r = client.get("/wahl/chain/2/1")
    assert r.status_code == 200
    body = r.json()
    assert body["chain"] == [4]
    assert body["dual"] == [2, 2, 2]


def test_eval():
    r = client.post("/wahl/eval", json={"chain": [3, 2, 2, 7, 2]})
    assert r.status_code == 200
    assert r.json()["value"] == "81/35"


def test_canonical_markings():
    r = client.get("/wahl/canonical/29/22")
    assert r.status_code == 200
    assert len(r.json()) == 2


def test_marking_census():
    assert len(client.get("/wahl/markings/29/22").json()) == 18
    assert len(client.get("/wahl/markings/29/22", params={"formal": False}).json()) == 15


def test_bad_pair_is_a_client_error():
    r = client.get("/wahl/chain/4/2")
    assert r.status_code == 400


def test_bad_slide_direction_is_rejected():
    r = client.post("/wahl/slide", json={"chain": [4], "index": 1, "direction": "up"})
    assert r.status_code == 422
