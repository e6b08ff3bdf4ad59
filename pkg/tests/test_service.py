import math

import pytest
from fastapi.testclient import TestClient

from triosc.service import (
    create_app,
    handle_purity,
    handle_spectrum,
    handle_sweep,
    handle_verify,
)
from triosc.schemas import (
    CouplingsIn,
    PurityRequest,
    SpectrumRequest,
    SweepRequest,
    SystemIn,
    VerifyRequest,
)
from triosc.fixtures import (
    MIXED_GROUND_ENERGY,
    MIXED_PURITY_QUAD,
    SWEEP_FIXTURE,
    SWEEP_PURITY,
)


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def mixed_payload():
    return {
        "masses": [1, 2, 3],
        "frequencies": [1, 1.5, 2],
        "couplings": {"d12": 0.4, "d13": 0.3, "d23": 0.2},
    }


def mixed_in():
    return SystemIn(
        masses=[1, 2, 3],
        frequencies=[1, 1.5, 2],
        couplings=CouplingsIn(d12=0.4, d13=0.3, d23=0.2),
    )


def unit_in(**couplings):
    return SystemIn(
        masses=[1, 1, 1], frequencies=[1, 1, 1], couplings=CouplingsIn(**couplings)
    )


def test_decouple_endpoint(client):
    r = client.post("/decouple", json={"system": mixed_payload()})
    assert r.status_code == 200
    body = r.json()
    assert body["residual"] < 1e-10
    assert body["degenerate"] is False
    assert sorted(body["sigma"]) == body["sigma"]  # returned in stable order
    assert sum(body["log_diffs"]) == pytest.approx(0.0, abs=1e-14)


def test_spectrum_endpoint_sorted(client):
    r = client.post("/spectrum", json={"system": mixed_payload(), "n_max": 2})
    assert r.status_code == 200
    rows = r.json()["levels"]
    assert (rows[0]["n1"], rows[0]["n2"], rows[0]["n3"]) == (0, 0, 0)
    assert rows[0]["energy"] == pytest.approx(MIXED_GROUND_ENERGY, rel=1e-12)
    energies = [row["energy"] for row in rows]
    assert energies == sorted(energies)
    assert len(rows) == 10  # C(2+3,3) states with n1+n2+n3 <= 2


def test_wavefunction_endpoint_shape(client):
    r = client.post(
        "/wavefunction",
        json={"system": mixed_payload(), "n": [0, 0, 0], "points": 5, "extent": 3.0},
    )
    assert r.status_code == 200
    body = r.json()
    assert body["columns"] == ["x1", "x2", "x3", "psi"]
    assert len(body["rows"]) == 5**3
    peak = max(abs(row[3]) for row in body["rows"])
    assert peak > 0


def test_purity_endpoint_with_oracle(client):
    r = client.post("/purity", json={"system": mixed_payload(), "kept": 2, "oracle": True})
    assert r.status_code == 200
    body = r.json()
    assert body["kept"] == 2
    assert body["purity"] == pytest.approx(MIXED_PURITY_QUAD[2], abs=1e-8)
    assert body["discrepancy"] < 1e-6
    assert body["entropy"] == pytest.approx(1 - body["purity"], abs=1e-12)


def test_unstable_system_maps_to_400(client):
    payload = {
        "masses": [1, 1, 1],
        "frequencies": [1, 1, 1],
        "couplings": {"d12": 2.5, "d13": 0, "d23": 0},
    }
    r = client.post("/purity", json={"system": payload})
    assert r.status_code == 400
    detail = r.json()["detail"]
    assert detail["code"] == "instability"


def test_malformed_request_is_422(client):
    r = client.post("/decouple", json={"system": {"masses": [1, 1]}})
    assert r.status_code == 422


def test_sweep_threads_do_not_change_rows(client):
    base = {
        "system": {"masses": [1, 1, 1], "frequencies": [1, 1, 1], "couplings": {}},
        "parameter": "couplings.d12",
        "start": 0.0,
        "stop": 2.2,
        "steps": 12,
    }
    r1 = client.post("/sweep", json=dict(base, threads=1))
    r8 = client.post("/sweep", json=dict(base, threads=8))
    assert r1.status_code == r8.status_code == 200
    assert r1.json() == r8.json()
    rows = r1.json()["rows"]
    assert r1.json()["columns"] == ["couplings.d12", "purity", "entropy"]
    assert rows[-1][1] == "unstable"
    assert rows[0][1] == 1.0


def test_sweep_fixture_regression():
    resp = handle_sweep(
        SweepRequest(system=unit_in(), threads=2, **SWEEP_FIXTURE)
    )
    purities = [row[1] for row in resp.rows]
    assert purities == pytest.approx(list(SWEEP_PURITY), abs=1e-13)
    assert all(b < a for a, b in zip(purities, purities[1:]))


def test_sweep_two_parameters_row_major():
    resp = handle_sweep(
        SweepRequest(
            system=unit_in(),
            parameter="couplings.d12",
            start=0.0,
            stop=1.0,
            steps=2,
            parameter2="couplings.d23",
            start2=0.0,
            stop2=1.0,
            steps2=3,
            threads=1,
        )
    )
    assert resp.columns == ["couplings.d12", "couplings.d23", "purity", "entropy"]
    firsts = [row[0] for row in resp.rows]
    seconds = [row[1] for row in resp.rows]
    assert firsts == [0.0, 0.0, 0.0, 1.0, 1.0, 1.0]  # slow axis
    assert seconds == [0.0, 0.5, 1.0, 0.0, 0.5, 1.0]  # fast axis


def test_sweep_validation():
    with pytest.raises(Exception, match="steps"):
        handle_sweep(
            SweepRequest(
                system=unit_in(), parameter="couplings.d12",
                start=0.0, stop=1.0, steps=1,
            )
        )
    with pytest.raises(Exception, match="start"):
        handle_sweep(
            SweepRequest(
                system=unit_in(), parameter="couplings.d12",
                start=1.0, stop=0.0, steps=3,
            )
        )
    with pytest.raises(Exception, match="unknown sweep parameter"):
        handle_sweep(
            SweepRequest(
                system=unit_in(), parameter="couplings.d14",
                start=0.0, stop=1.0, steps=3,
            )
        )


def test_verify_endpoint_passes(client):
    r = client.post("/verify", json={})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    assert all(check["passed"] for check in body["checks"])
    names = {check["name"] for check in body["checks"]}
    assert "su3-commutators" in names
    assert "pair-limit" in names


def test_verify_expected_values_check():
    res = handle_verify(
        VerifyRequest(
            system=mixed_in(),
            expected={"purity": MIXED_PURITY_QUAD[1]},
        )
    )
    assert res.passed
    bad = handle_verify(
        VerifyRequest(system=mixed_in(), expected={"purity": 0.5})
    )
    assert not bad.passed
    failing = [c for c in bad.checks if not c.passed]
    assert failing and failing[0].name == "expected-purity"
