"""Endpoint tests through the HTTP layer (in-process ASGI test client)."""
import math

import numpy as np
import pytest
from fastapi.testclient import TestClient

from toponet.service.app import app

client = TestClient(app)


def k3_payload(a=0.2, b=0.3, c=0.4):
    return {"weights": [[0.0, a, b], [a, 0.0, c], [b, c, 0.0]],
            "convention": "similarity"}


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_betti_endpoint():
    resp = client.post("/betti", json={"network": k3_payload(), "dim": 0})
    assert resp.status_code == 200
    body = resp.json()
    assert body["breakpoints"] == [0.3, 0.4]
    assert body["values"] == [1, 2, 3]


def test_pd_endpoint():
    resp = client.post("/pd", json={"network": k3_payload()})
    body = resp.json()
    assert body["births0"] == [0.3, 0.4]
    assert body["deaths1"] == [0.2]
    assert body["p"] == 3 and body["n_components"] == 1


def test_morse_endpoint():
    resp = client.post("/morse", json={"samples": [1, 0, 2, -1, 3]})
    assert sorted(map(tuple, resp.json()["points"])) == [(-1.0, 3.0), (0.0, 2.0)]


def test_summary_endpoints():
    barcode = {"dim": 0, "points": [[0, 2], [1, 3], [2, 4]]}
    resp = client.post("/summary/entropy", json={"barcode": barcode})
    assert resp.json()["value"] == pytest.approx(math.log(3))
    resp = client.post("/summary/apf", json={"barcode": barcode, "t": 1.5})
    assert resp.json()["value"] == pytest.approx(2.0)
    resp = client.post("/summary/landscape",
                       json={"barcode": barcode, "k": 1, "eps": 1.0})
    assert resp.json()["values"] == [1.0]
    resp = client.post("/summary/image", json={
        "diagram": {"dim": 0, "points": [[0.5, 1.5]]},
        "grid": {"xmin": 0.2, "xmax": 0.8, "nx": 1, "ymin": 1.2, "ymax": 1.8, "ny": 1},
        "sigma": 0.05,
    })
    assert resp.json()["pixels"][0][0] == pytest.approx(1.0, abs=1e-6)


def test_distance_endpoint_network_methods():
    payload = {"method": "ks", "dim": 0,
               "networks": [k3_payload(), k3_payload()]}
    assert client.post("/distance", json=payload).json()["value"] == 0.0
    payload = {"method": "lp", "order": 2.0,
               "networks": [k3_payload(), k3_payload(0.2, 0.3, 0.5)]}
    assert client.post("/distance", json=payload).json()["value"] == pytest.approx(0.1)


def test_distance_endpoint_diagrams():
    payload = {"method": "bottleneck",
               "diagrams": [{"dim": 0, "points": [[0, 1]]},
                            {"dim": 0, "points": []}]}
    assert client.post("/distance", json=payload).json()["value"] == pytest.approx(0.5)


def test_ks_inference_endpoint():
    resp = client.post("/inference/ks", json={"dq": 8.0, "q": 8})
    assert resp.json()["value"] == pytest.approx(0.0006709252557796953, abs=1e-12)


def test_permutation_endpoint_deterministic():
    rng = np.random.default_rng(0)

    def random_payload(seed):
        r = np.random.default_rng(seed)
        w = np.zeros((4, 4))
        iu = np.triu_indices(4, 1)
        w[iu] = r.uniform(0.1, 1.0, 6)
        w = w + w.T
        return {"weights": w.tolist(), "convention": "similarity"}

    body = {"group1": [random_payload(s) for s in range(3)],
            "group2": [random_payload(s + 50) for s in range(3)],
            "method": "ks", "dim": 0, "n_perm": 99, "seed": 11}
    r1 = client.post("/inference/permutation", json=body).json()
    r2 = client.post("/inference/permutation", json=body).json()
    assert r1 == r2
    assert 0.0 < r1["p"] <= 1.0
    assert set(r1["null_quantiles"]) == {"0.05", "0.25", "0.5", "0.75", "0.95"}


def test_loss_endpoints():
    resp = client.post("/loss/top", json={"network1": k3_payload(0.1, 0.2, 0.3),
                                          "network2": k3_payload(0.2, 0.3, 0.5)})
    assert resp.json()["value"] == pytest.approx(0.06)
    resp = client.post("/loss/pdreg", json={
        "diagram": {"dim": 0, "points": [[0, 3], [0, 1]]},
        "p": 2.0, "q": 0.0, "i0": 2})
    assert resp.json()["value"] == pytest.approx(1.0)


def test_regress_endpoint():
    obs = [k3_payload(0.2, 0.3, 0.4), k3_payload(0.4, 0.5, 0.6)]
    resp = client.post("/regress", json={"observations": obs,
                                         "prior": k3_payload(0.3, 0.4, 0.5),
                                         "lam": 0.0})
    body = resp.json()
    assert body["converged"] is True
    assert body["weights"][0][1] == pytest.approx(0.3)


def test_rips_endpoint():
    resp = client.post("/complex/rips", json={
        "points": [[0.0, 0.0], [1.0, 0.0], [0.5, 0.9]],
        "eps": 1.2, "max_dim": 2})
    body = resp.json()
    dims = [s["dim"] for s in body["simplices"]]
    assert dims.count(2) == 1
    assert body["betti"][0] == 1 and body["betti"][1] == 0


def test_witness_endpoint():
    angles = np.linspace(0, 2 * math.pi, 60, endpoint=False)
    pts = np.column_stack([np.cos(angles), np.sin(angles)])
    resp = client.post("/complex/witness", json={
        "points": pts.tolist(), "eps": 0.0, "max_dim": 2,
        "landmarks": [0, 14, 31, 46]})
    body = resp.json()
    assert body["betti"][1] == 1


def test_data_error_maps_to_422():
    bad = {"weights": [[0.0, 1.0], [2.0, 0.0]]}
    resp = client.post("/betti", json={"network": bad, "dim": 0})
    assert resp.status_code == 422
    assert "asymmetric" in resp.json()["detail"]


def test_validation_error_is_422():
    resp = client.post("/betti", json={"network": k3_payload(), "dim": 5})
    assert resp.status_code == 422


def test_corr_to_weight_endpoint():
    resp = client.post("/network/from-correlation",
                       json={"corr": [[1.0, 0.0], [0.0, 1.0]]})
    body = resp.json()
    assert body["convention"] == "dissimilarity"
    assert body["weights"][0][1] == 1.0
    bad = client.post("/network/from-correlation",
                      json={"corr": [[0.0, 0.0], [0.0, 0.0]]})
    assert bad.status_code == 422
