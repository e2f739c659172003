from fractions import Fraction

import pytest
from pydantic import ValidationError

from ndcomm.errors import MalformedProof, ParameterError
from ndcomm.heq_models import HeqInput, HeqParams
from ndcomm.heqfun import delta_pattern, enumerate_instances
from ndcomm.protocol_models import Branch, MessageKind, Party, Proof
from ndcomm.protocols import (
    accepting_proof,
    proof_space,
    run_classical_nd_heq,
    run_strong_nd_neq,
    run_weak_nd_heq,
)

BRANCH_II = Proof(branch=Branch.all_zero)
BRANCH_I3 = Proof(branch=Branch.non_codeword, j=3)


def make(*entries: int, kprime: int = 1) -> HeqInput:
    return HeqInput(k=2, kprime=kprime, entries=entries)


def test_proof_space():
    assert [str(p) for p in proof_space(HeqParams(k=2, kprime=1))] == ["II", "I(3)"]
    assert len(proof_space(HeqParams(k=3, kprime=3))) == 5
    assert proof_space(HeqParams(k=1, kprime=2)) == [BRANCH_II]


def test_malformed_proofs():
    with pytest.raises(ValidationError):
        Proof(branch=Branch.non_codeword)
    with pytest.raises(ValidationError):
        Proof(branch=Branch.all_zero, j=3)
    a = make(0, 0, 0)
    with pytest.raises(MalformedProof):
        run_weak_nd_heq(a, a, Proof(branch=Branch.non_codeword, j=2))
    with pytest.raises(MalformedProof):
        run_weak_nd_heq(a, a, Proof(branch=Branch.all_zero, bob_part="1"))
    with pytest.raises(ParameterError):
        run_weak_nd_heq(a, make(0, 0, 0, kprime=2), BRANCH_II)


def test_quantum_branch_ii_on_equal_inputs():
    a = make(1, 0, 1)
    t = run_weak_nd_heq(a, a, BRANCH_II)
    assert t.accept_probability == 1
    assert t.output == 1
    assert t.output_party == Party.alice
    assert [m.kind for m in t.messages] == [
        MessageKind.classical,
        MessageKind.quantum,
        MessageKind.quantum,
    ]
    # Branch tag plus the register sent both ways
    assert t.total_cost == 1 + 2 * (2 + 1)


def test_quantum_zero_instance():
    a, b = make(0, 0, 0), make(1, 0, 1)
    for proof in (BRANCH_II, BRANCH_I3):
        t = run_weak_nd_heq(a, b, proof)
        assert t.accept_is_zero
        assert t.output == 0


def test_quantum_non_codeword_instance():
    a, b = make(0, 0, 0), make(1, 0, 0)
    t = run_weak_nd_heq(a, b, BRANCH_II)
    assert t.accept_probability == Fraction(1, 4)
    assert t.output is None
    assert not t.accepts_surely
    t = run_weak_nd_heq(a, b, BRANCH_I3)
    assert t.accepts_surely
    assert t.total_cost == 1 + 2 + 3
    assert accepting_proof(run_weak_nd_heq, a, b) == BRANCH_I3


def test_branch_i_payload():
    """Branch bit, j in k bits, then a_j, a_[j], a_(j-[j])"""
    t = run_weak_nd_heq(make(1, 2, 3, kprime=2), make(1, 2, 3, kprime=2), BRANCH_I3)
    assert t.messages[0].payload == "0" + "11" + "11" + "10" + "01"
    assert t.output == 0


def test_classical_protocol():
    a = make(1, 0, 1)
    t = run_classical_nd_heq(a, a, BRANCH_II)
    assert t.accepts_surely
    assert t.messages[0].payload == "1" + "1" + "0"
    assert t.total_cost == 1 + 2 * 1
    t = run_classical_nd_heq(a, make(0, 0, 1), BRANCH_II)
    assert t.accept_is_zero


def test_no_accepting_proof_on_zero_instance():
    assert accepting_proof(run_classical_nd_heq, make(0, 0, 0), make(1, 0, 1)) is None


def test_neq_protocol():
    t = run_strong_nd_neq(5, 5, 3)
    assert t.accept_is_zero
    assert t.accept_probability == 0
    assert t.total_cost == 1
    # A half turn gives probability exactly 1
    t = run_strong_nd_neq(1, 5, 3)
    assert t.accept_probability == 1
    t = run_strong_nd_neq(1, 2, 3)
    assert t.accept_probability is None
    assert not t.accept_is_zero
    assert t.accept_float > 0


def test_transcript_json():
    a, b = make(0, 0, 0), make(1, 0, 0)
    dumped = run_weak_nd_heq(a, b, BRANCH_II).model_dump(mode="json")
    assert dumped["accept_probability"] == "1/4"
    assert dumped["messages"][0]["payload"] == "1"
    assert dumped["messages"][1]["payload"]["scale"] == 2


def test_branch_i_decisions_agree():
    """Both protocols run the same local test on branch I"""
    pairs = list(enumerate_instances(HeqParams(k=2, kprime=2)))
    pairs += list(
        enumerate_instances(HeqParams(k=3, kprime=1), "sample", count=150, seed=3)
    )
    for a, b in pairs:
        for proof in proof_space(a.params)[1:]:
            quantum = run_weak_nd_heq(a, b, proof)
            classical = run_classical_nd_heq(a, b, proof)
            assert quantum.output == classical.output
            assert quantum.output in (0, 1)
            assert quantum.messages[0].payload == classical.messages[0].payload


def test_branch_ii_matches_closed_form():
    params = HeqParams(k=2, kprime=2)
    for a, b in enumerate_instances(params, start=0, stop=300):
        signs = sum((-1) ** d for d in delta_pattern(a, b))
        expected = Fraction(signs, 4) ** 2
        assert run_weak_nd_heq(a, b, BRANCH_II).accept_probability == expected
