import math
from fractions import Fraction

import pytest

from ndcomm.errors import BudgetExceeded
from ndcomm.hadamard import violated_index
from ndcomm.heq_models import HeqInput, HeqParams
from ndcomm.heqfun import delta_pattern, enumerate_instances, heq
from ndcomm.protocol_models import (
    Branch,
    Message,
    MessageKind,
    Party,
    Proof,
    Transcript,
)
from ndcomm.protocol_verify import (
    neq_probability_floor,
    verify_strong_nondeterminism,
    verify_weak_nondeterminism,
)
from ndcomm.protocols import (
    accepting_proof,
    proof_space,
    run_classical_nd_heq,
    run_weak_nd_heq,
)


def sweep(protocol, k: int, kprime: int, threads: int = 1, **kwargs):
    params = HeqParams(k=k, kprime=kprime)
    instances = enumerate_instances(params, **kwargs)
    return verify_weak_nondeterminism(
        protocol, heq, instances, proof_space(params), threads=threads
    )


def accept_everything(a: HeqInput, b: HeqInput, proof: Proof) -> Transcript:
    msg = Message(sender=Party.alice, kind=MessageKind.classical, payload="1", size=1)
    return Transcript(
        messages=[msg],
        output=1,
        output_party=Party.bob,
        accept_probability=Fraction(1),
        accept_float=1.0,
        accept_is_zero=False,
    )


def test_quantum_exhaustive_small():
    report = sweep(run_weak_nd_heq, 2, 1)
    assert report.passed
    assert report.instances_checked == 64
    assert report.zero_instances == 24
    assert report.one_instances == 40
    assert report.max_cost == 7
    assert sum(report.witnesses.values()) == 40


def test_quantum_exhaustive_k2_kprime2():
    report = sweep(run_weak_nd_heq, 2, 2)
    assert report.passed
    assert report.instances_checked == 4096
    # 64 inputs x 3 codewords x 3^2 ways to differ on the support
    assert report.zero_instances == 1728


def test_quantum_sampled_k3():
    report = sweep(run_weak_nd_heq, 3, 3, mode="sample", count=300, seed=1)
    assert report.passed
    assert report.max_cost == 13
    assert report.max_cost < 3 * (3 + 3)


def test_classical_exhaustive():
    report = sweep(run_classical_nd_heq, 2, 2)
    assert report.passed
    assert report.max_cost == 1 + max(2 + 3 * 2, 2 * 2)


def test_broken_protocol_is_caught():
    report = sweep(accept_everything, 2, 1)
    assert not report.passed
    # Every proof fails on every 0-instance
    assert len(report.failures) == 24 * 2
    keys = [c.sort_key for c in report.failures]
    assert keys == sorted(keys)


def test_parallel_matches_sequential():
    sequential = sweep(run_weak_nd_heq, 2, 1)
    parallel = sweep(run_weak_nd_heq, 2, 1, threads=2)
    assert parallel.model_dump() == sequential.model_dump()


def test_neq_strong_nondeterminism():
    report = verify_strong_nondeterminism(4)
    assert report.passed
    assert report.instances_checked == 256
    assert report.zero_instances == 16
    assert report.max_cost == 1
    assert report.min_nonzero_probability == pytest.approx(neq_probability_floor(4))
    assert neq_probability_floor(2) == pytest.approx(0.5)


def test_neq_budget():
    with pytest.raises(BudgetExceeded):
        verify_strong_nondeterminism(5, max_n=4)


def test_probability_floor():
    assert neq_probability_floor(3) == pytest.approx(math.sin(math.pi / 8) ** 2)


def test_degenerate_k1_sweeps():
    """With k = 1 the only proof is branch II and HEQ is equality"""
    for kprime in range(1, 4):
        values = 2**kprime
        quantum = sweep(run_weak_nd_heq, 1, kprime)
        classical = sweep(run_classical_nd_heq, 1, kprime)
        for report in (quantum, classical):
            assert report.passed
            assert report.instances_checked == values**2
            assert report.one_instances == values
            assert report.zero_instances == values * (values - 1)
            assert report.witnesses == {"II": values, "I": 0}
        assert quantum.max_cost == 1 + 2 * (1 + kprime)
        assert classical.max_cost == 1 + kprime


def test_witnesses_are_constructive():
    """Branch II when a = b, otherwise branch I at the first violated index"""
    for kprime in (1, 2):
        params = HeqParams(k=2, kprime=kprime)
        for a, b in enumerate_instances(params):
            if heq(a, b) == 0:
                continue
            if a == b:
                expected = Proof(branch=Branch.all_zero)
            else:
                j = violated_index(delta_pattern(a, b))
                expected = Proof(branch=Branch.non_codeword, j=j)
            assert accepting_proof(run_weak_nd_heq, a, b) == expected
