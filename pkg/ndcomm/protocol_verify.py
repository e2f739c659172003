"""Check protocols against the definitions of weak and strong nondeterminism.

Weak: on a 1-instance some proof is accepted with probability exactly 1,
on a 0-instance every proof is accepted with probability exactly 0.
Strong: acceptance has positive probability iff the function value is 1.
"""

import logging
import math
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from itertools import batched

from .config import NEQ_MAX_N
from .errors import check_budget
from .heq_models import HeqInput, HeqInstance
from .protocol_models import Branch, Counterexample, Proof, VerificationReport
from .protocols import HeqProtocol, run_strong_nd_neq

log = logging.getLogger(__name__)

HeqOracle = Callable[[HeqInput, HeqInput], int]

CHUNK_SIZE = 2048


def _check_instance(
    protocol: HeqProtocol,
    f: HeqOracle,
    a: HeqInput,
    b: HeqInput,
    proofs: Sequence[Proof],
    report: VerificationReport,
):
    instance = HeqInstance.from_pair(a, b).model_dump(mode="json")
    value = f(a, b)
    runs = [(proof, protocol(a, b, proof)) for proof in proofs]
    report.instances_checked += 1
    report.max_cost = max([report.max_cost, *(t.total_cost for _, t in runs)])

    for proof, t in runs:
        if proof.branch == Branch.non_codeword and t.accept_probability not in (0, 1):
            reason = f"branch I acceptance {t.accept_probability} is not 0 or 1"
            report.failures.append(
                Counterexample(instance=instance, reason=reason, proof=str(proof))
            )

    if value == 1:
        report.one_instances += 1
        witness = next((p for p, t in runs if t.accepts_surely), None)
        if witness is None:
            reason = "1-instance with no proof accepted with probability 1"
            report.failures.append(Counterexample(instance=instance, reason=reason))
        else:
            report.witnesses[witness.branch.value] += 1
    else:
        report.zero_instances += 1
        for proof, t in runs:
            if not t.accept_is_zero:
                reason = f"0-instance accepted with probability {t.accept_probability}"
                report.failures.append(
                    Counterexample(instance=instance, reason=reason, proof=str(proof))
                )


def _verify_chunk(
    protocol: HeqProtocol,
    f: HeqOracle,
    chunk: Sequence[tuple[HeqInput, HeqInput]],
    proofs: Sequence[Proof],
    name: str,
    params: dict[str, int],
) -> VerificationReport:
    report = VerificationReport(protocol=name, params=params)
    for a, b in chunk:
        _check_instance(protocol, f, a, b, proofs, report)
    return report


def verify_weak_nondeterminism(
    protocol: HeqProtocol,
    f: HeqOracle,
    instances: Iterable[tuple[HeqInput, HeqInput]],
    proofs: Sequence[Proof],
    name: str = "",
    params: dict[str, int] | None = None,
    threads: int = 1,
) -> VerificationReport:
    """Run every proof on every instance; failures are collected, not raised"""
    params = params or {}
    name = name or protocol.__name__
    merged = VerificationReport(protocol=name, params=params)
    chunks = batched(instances, CHUNK_SIZE)
    if threads <= 1:
        for chunk in chunks:
            merged = merged.merge(
                _verify_chunk(protocol, f, chunk, proofs, name, params)
            )
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_verify_chunk, protocol, f, chunk, proofs, name, params)
                for chunk in chunks
            ]
            for future in futures:
                merged = merged.merge(future.result())
    log.info(
        f"Verified {name} on {merged.instances_checked} instances, "
        f"{len(merged.failures)} failures, max cost {merged.max_cost}"
    )
    return merged


def neq_probability_floor(n: int) -> float:
    """sin^2(pi / 2^n), the smallest acceptance probability when x != y"""
    return math.sin(math.pi / 2**n) ** 2


def verify_strong_nondeterminism(n: int, max_n: int = NEQ_MAX_N) -> VerificationReport:
    check_budget("NEQ input bits", n, max_n)
    report = VerificationReport(protocol="neq", params={"n": n}, witnesses={})
    floor = neq_probability_floor(n)
    for x in range(2**n):
        for y in range(2**n):
            t = run_strong_nd_neq(x, y, n)
            instance = {"n": n, "x": x, "y": y}
            report.instances_checked += 1
            report.max_cost = max(report.max_cost, t.total_cost)
            if x == y:
                report.zero_instances += 1
            else:
                report.one_instances += 1
                p = t.accept_float
                if report.min_nonzero_probability is None:
                    report.min_nonzero_probability = p
                else:
                    report.min_nonzero_probability = min(
                        report.min_nonzero_probability, p
                    )
                if p < floor * (1 - 1e-9):
                    reason = f"acceptance {p} below sin^2(pi/2^n) = {floor}"
                    report.failures.append(
                        Counterexample(instance=instance, reason=reason)
                    )
            if t.accept_is_zero != (x == y):
                reason = f"exact-zero flag {t.accept_is_zero} disagrees with x == y"
                report.failures.append(Counterexample(instance=instance, reason=reason))
            if t.total_cost != 1:
                reason = f"cost {t.total_cost} qubits, expected 1"
                report.failures.append(Counterexample(instance=instance, reason=reason))
    log.info(f"Verified NEQ_{n} on {report.instances_checked} pairs")
    return report
