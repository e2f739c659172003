"""Two-party protocols for HEQ and NEQ with exact communication accounting.

Messages are real payloads: classical messages are bit strings that the
receiver parses back, quantum messages carry the register state.
"""

from collections.abc import Callable
from fractions import Fraction

from .errors import MalformedProof, ParameterError
from .hadamard import sk_indices, top_power
from .heq_models import HeqInput, HeqParams
from .heqfun import check_neq_inputs, delta
from .protocol_models import (
    Branch,
    Message,
    MessageKind,
    Party,
    Proof,
    Transcript,
)
from .qsim import (
    RotationState,
    hadamard_first_register,
    outcome_probability,
    phase_flip,
    prepare_indexed_superposition,
    xor_second_register,
)

HeqProtocol = Callable[[HeqInput, HeqInput, Proof], Transcript]

BRANCH_BITS = {Branch.non_codeword: "0", Branch.all_zero: "1"}


def _bits(value: int, width: int) -> str:
    return f"{value:0{width}b}"


def _read_ints(text: str, width: int) -> list[int]:
    return [int(text[i : i + width], 2) for i in range(0, len(text), width)]


def proof_space(params: HeqParams) -> list[Proof]:
    """Branch II, then branch I with every j in S_k"""
    proofs = [Proof(branch=Branch.all_zero)]
    proofs += [Proof(branch=Branch.non_codeword, j=j) for j in sk_indices(params.k)]
    return proofs


def check_proof(proof: Proof, k: int):
    if proof.branch == Branch.non_codeword and proof.j not in sk_indices(k):
        raise MalformedProof(f"index {proof.j} is not in S_{k}")
    if proof.bob_part:
        raise MalformedProof("Bob's part of the proof must be empty")


def _decided(messages: list[Message], output: int, party: Party) -> Transcript:
    return Transcript(
        messages=messages,
        output=output,
        output_party=party,
        accept_probability=Fraction(output),
        accept_float=float(output),
        accept_is_zero=output == 0,
    )


def _from_probability(messages: list[Message], p: Fraction, party: Party) -> Transcript:
    output = 1 if p == 1 else 0 if p == 0 else None
    return Transcript(
        messages=messages,
        output=output,
        output_party=party,
        accept_probability=p,
        accept_float=float(p),
        accept_is_zero=p == 0,
    )


def _check_inputs(a: HeqInput, b: HeqInput, proof: Proof):
    if (a.k, a.kprime) != (b.k, b.kprime):
        raise ParameterError("inputs do not share parameters")
    check_proof(proof, a.k)


def _non_codeword_branch(a: HeqInput, b: HeqInput, proof: Proof) -> Transcript:
    """Alice sends j, a_j, a_[j], a_(j-[j]); Bob checks the local test at j"""
    k, kp = a.k, a.kprime
    j = proof.j
    p = top_power(j)
    payload = BRANCH_BITS[Branch.non_codeword] + _bits(j, k)
    payload += "".join(_bits(a[i], kp) for i in (j, p, j - p))
    msg = Message(
        sender=Party.alice,
        kind=MessageKind.classical,
        payload=payload,
        size=len(payload),
    )

    received = msg.payload[1:]
    jb = int(received[:k], 2)
    pb = top_power(jb)
    aj, ap, ar = _read_ints(received[k:], kp)
    test_fails = delta(aj, b[jb]) != delta(ap, b[pb]) ^ delta(ar, b[jb - pb])
    return _decided([msg], int(test_fails), Party.bob)


def run_weak_nd_heq(a: HeqInput, b: HeqInput, proof: Proof) -> Transcript:
    """Quantum weakly nondeterministic protocol for HEQ"""
    _check_inputs(a, b, proof)
    if proof.branch == Branch.non_codeword:
        return _non_codeword_branch(a, b, proof)

    tag = Message(
        sender=Party.alice,
        kind=MessageKind.classical,
        payload=BRANCH_BITS[Branch.all_zero],
        size=1,
    )
    state = prepare_indexed_superposition(a)
    to_bob = Message(
        sender=Party.alice, kind=MessageKind.quantum, payload=state, size=state.qubits
    )
    returned = phase_flip(to_bob.payload, b)
    to_alice = Message(
        sender=Party.bob,
        kind=MessageKind.quantum,
        payload=returned,
        size=returned.qubits,
    )
    final = hadamard_first_register(xor_second_register(to_alice.payload, a))
    p = outcome_probability(final, 0)
    return _from_probability([tag, to_bob, to_alice], p, Party.alice)


def run_classical_nd_heq(a: HeqInput, b: HeqInput, proof: Proof) -> Transcript:
    """Classical nondeterministic protocol for HEQ"""
    _check_inputs(a, b, proof)
    if proof.branch == Branch.non_codeword:
        return _non_codeword_branch(a, b, proof)

    k, kp = a.k, a.kprime
    payload = BRANCH_BITS[Branch.all_zero]
    payload += "".join(_bits(a[2**s], kp) for s in range(k))
    msg = Message(
        sender=Party.alice,
        kind=MessageKind.classical,
        payload=payload,
        size=len(payload),
    )
    values = _read_ints(msg.payload[1:], kp)
    all_equal = all(delta(v, b[2**s]) == 0 for s, v in enumerate(values))
    return _decided([msg], int(all_equal), Party.bob)


def run_strong_nd_neq(x: int, y: int, n: int) -> Transcript:
    """One-qubit strongly nondeterministic protocol for NEQ_n"""
    check_neq_inputs(x, y, n)
    state = RotationState(numerator=x, n=n)
    msg = Message(sender=Party.alice, kind=MessageKind.quantum, payload=state, size=1)
    final = msg.payload.rotate(-y)
    period = 2**n
    if final.one_is_impossible():
        exact = Fraction(0)
    elif final.numerator % period == period // 2:
        exact = Fraction(1)
    else:
        exact = None
    return Transcript(
        messages=[msg],
        output=None if exact is None else int(exact),
        output_party=Party.bob,
        accept_probability=exact,
        accept_float=final.one_probability(),
        accept_is_zero=final.one_is_impossible(),
    )


def accepting_proof(
    protocol: HeqProtocol, a: HeqInput, b: HeqInput, proofs: list[Proof] | None = None
) -> Proof | None:
    """First proof accepted with probability exactly 1"""
    for proof in proofs or proof_space(a.params):
        if protocol(a, b, proof).accepts_surely:
            return proof
    return None


PROTOCOLS: dict[str, HeqProtocol] = {
    "quantum-heq": run_weak_nd_heq,
    "classical-heq": run_classical_nd_heq,
}
