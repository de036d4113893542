import hashlib
import json
import os
from pathlib import Path

import numpy as np
import pytest

import smqc

CIRCUITS = Path(os.environ.get("SMQC_CIRCUITS_DIR", Path(__file__).resolve().parents[2] / "circuits"))

PLUS = np.array([1, 1]) / np.sqrt(2)
ZERO = np.array([1, 0])


def overlap(a, b):
    return abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b))


def cnot_product(control, target):
    cx = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    return cx @ np.kron(control, target)


def random_qubit(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def test_states_and_gates():
    np.testing.assert_allclose(smqc.gate("h"), np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(smqc.bell_state(0, 0), [2**-0.5, 0, 0, 2**-0.5], atol=1e-15)
    chi = smqc.chi_state()
    assert chi.shape == (16,)
    assert np.count_nonzero(np.abs(chi) > 1e-12) == 4
    np.testing.assert_allclose(smqc.parse_state("|0+>"), np.kron(ZERO, PLUS), atol=1e-15)
    assert smqc.is_clifford("s") and not smqc.is_clifford("t")


def test_nl_cnot_branches():
    rng = np.random.default_rng(1)
    phi, varphi = random_qubit(rng), random_qubit(rng)
    branches = smqc.nl_cnot(phi, varphi)
    assert len(branches) == 16
    assert sum(b["probability"] for b in branches) == pytest.approx(1)
    expected = cnot_product(phi, varphi)
    for b in branches:
        assert overlap(b["output"], expected) > 1 - 1e-10


def test_run_circuit_both_backends():
    circuit = smqc.Circuit.load(str(CIRCUITS / "two_party_cnot.circ"))
    assert circuit.num_qubits == 2 and circuit.party_count == 2
    assert "1 NL-CNOT round" in circuit.schedule()
    for backend in ("peer", "ttp"):
        branches = smqc.run(circuit, inputs={0: PLUS, 1: ZERO}, backend=backend)
        assert len(branches) == (16 if backend == "peer" else 1)
        for b in branches:
            assert overlap(b["output"], cnot_product(PLUS, ZERO)) > 1 - 1e-10
    sampled = smqc.run(circuit, inputs={0: PLUS}, seed=7)
    assert len(sampled) == 1
    assert sampled[0]["transcript"] == smqc.run(circuit, inputs={0: PLUS}, seed=7)[0]["transcript"]
    assert json.loads(sampled[0]["transcript"])


def test_bit_flip_strategy_through_run():
    circuit = smqc.Circuit.parse("parties 2\nqubits 2\nowner 0 0\nowner 1 1\ncnot 0 1\n")
    x = np.array([[0, 1], [1, 0]])
    for b in smqc.run(circuit, inputs={0: PLUS, 1: ZERO}, strategies={0: "bitflip"}):
        assert overlap(b["output"], cnot_product(PLUS, x @ ZERO)) > 1 - 1e-10


def test_invalid_circuits():
    with pytest.raises(smqc.ParseError):
        smqc.Circuit.parse("parties 1\nqubits 1\nowner 0 0\nfoo 0\n")
    bad = smqc.Circuit.load(str(CIRCUITS / "cross_owner_measure.circ"))
    assert bad.rejections() == ["nonlocal measurement rejected: qubits span P0 and P1"]
    with pytest.raises(smqc.InvalidCircuit):
        bad.schedule()


def test_attacks():
    rng = np.random.default_rng(2)
    phi, varphi = random_qubit(rng), random_qubit(rng)
    for side in ("alice", "bob"):
        assert smqc.rotated_basis_attack("h", phi, varphi, side)["verdict"]
        assert smqc.bit_flip_attack(phi, varphi, side)["verdict"]
    report = smqc.chi_corruption("h", 3, phi, varphi)
    assert report["verdict"] and report["params"]["undetected"] == "true"
    with pytest.raises(ValueError, match="not Clifford"):
        smqc.chi_corruption("t", 3, phi, varphi)


def test_prop1_and_u1():
    minus = np.array([1, -1]) / np.sqrt(2)
    assert smqc.prop1_distance(ZERO, np.array([0, 1]), PLUS) < 1e-12
    assert smqc.prop1_distance(ZERO, np.array([0, 1]), ZERO) == pytest.approx(1)
    u1, ov = smqc.recover_u1(ZERO, PLUS, 1)
    assert ov == pytest.approx(1)
    assert overlap(u1 @ ZERO, PLUS) == pytest.approx(1)
    u1, ov = smqc.recover_u1(PLUS, minus, -1)
    assert ov == pytest.approx(1)


def test_commit_matches_hashlib():
    nonce = bytes(range(16))
    for bit in (0, 1):
        assert smqc.commit(bit, nonce) == hashlib.sha256(bytes([bit]) + nonce).digest()
    with pytest.raises(ValueError):
        smqc.commit(0, b"short")


def test_key_update():
    assert smqc.cnot_key_update((1, 1), (1, 1)) == ((1, 0), (0, 1))


def test_verify_report():
    report = json.loads(smqc.verify(seed=3))
    assert report == json.loads(smqc.verify(seed=3))
    assert report["verdict"] == "PASS"
    assert all(s["verdict"] == "PASS" for s in report["suites"])
    broken = json.loads(smqc.verify(seed=3, disable_corrections=True))
    assert broken["verdict"] == "FAIL"
