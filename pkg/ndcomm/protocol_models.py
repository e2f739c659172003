import json
from enum import StrEnum
from fractions import Fraction
from typing import Any

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_serializer,
    model_validator,
)

from .qsim import DyadicState, RotationState


class Branch(StrEnum):
    """Alice's guess: (i) the pattern is not a codeword, (ii) it is all zero"""

    non_codeword = "I"
    all_zero = "II"


class Party(StrEnum):
    alice = "Alice"
    bob = "Bob"


class MessageKind(StrEnum):
    classical = "classical"
    quantum = "quantum"


class Proof(BaseModel):
    model_config = ConfigDict(frozen=True)

    branch: Branch
    j: int | None = None
    bob_part: str = ""

    @model_validator(mode="after")
    def check_index(self):
        if self.branch == Branch.non_codeword and self.j is None:
            raise ValueError("branch I proofs carry an index j")
        if self.branch == Branch.all_zero and self.j is not None:
            raise ValueError("branch II proofs carry no index")
        return self

    def __str__(self) -> str:
        if self.branch == Branch.all_zero:
            return "II"
        return f"I({self.j})"


class Message(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sender: Party
    kind: MessageKind
    payload: str | DyadicState | RotationState
    size: int = Field(ge=1)

    @model_validator(mode="after")
    def check_size(self):
        payload = self.payload
        if self.kind == MessageKind.classical:
            if not isinstance(payload, str) or set(payload) - {"0", "1"}:
                raise ValueError("classical payloads are bit strings")
            expected = len(payload)
        elif isinstance(payload, DyadicState):
            expected = payload.qubits
        elif isinstance(payload, RotationState):
            expected = 1
        else:
            raise ValueError("quantum payloads are register states")
        if self.size != expected:
            raise ValueError(f"message size {self.size} != payload size {expected}")
        return self

    @field_serializer("payload")
    def dump_payload(self, payload: Any) -> Any:
        if isinstance(payload, BaseModel):
            return payload.model_dump(mode="json")
        return payload


class Transcript(BaseModel):
    """Messages exchanged on one run, with the exact acceptance probability.

    accept_probability is None only when the protocol's probability is not
    rational; accept_is_zero is always decided exactly.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    messages: list[Message]
    output: int | None
    output_party: Party
    accept_probability: Fraction | None
    accept_float: float
    accept_is_zero: bool

    @model_validator(mode="after")
    def check_probability(self):
        p = self.accept_probability
        if p is not None and not 0 <= p <= 1:
            raise ValueError(f"acceptance probability {p} outside [0, 1]")
        return self

    @field_serializer("accept_probability")
    def dump_probability(self, p: Fraction | None) -> str | None:
        return None if p is None else str(p)

    @property
    def total_cost(self) -> int:
        return sum(m.size for m in self.messages)

    @property
    def accepts_surely(self) -> bool:
        return self.accept_probability == 1


class Counterexample(BaseModel):
    model_config = ConfigDict(frozen=True)

    instance: dict[str, Any]
    reason: str
    proof: str | None = None

    @property
    def sort_key(self) -> tuple[str, str, str]:
        instance = json.dumps(self.instance, sort_keys=True)
        return instance, self.proof or "", self.reason


def _no_witnesses() -> dict[str, int]:
    return {Branch.all_zero.value: 0, Branch.non_codeword.value: 0}


class VerificationReport(BaseModel):
    protocol: str
    params: dict[str, int]
    instances_checked: int = 0
    one_instances: int = 0
    zero_instances: int = 0
    witnesses: dict[str, int] = Field(default_factory=_no_witnesses)
    max_cost: int = 0
    min_nonzero_probability: float | None = None
    failures: list[Counterexample] = []

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        """Combine partial reports; failures are sorted by instance encoding"""
        probs = [
            p
            for p in (self.min_nonzero_probability, other.min_nonzero_probability)
            if p is not None
        ]
        return VerificationReport(
            protocol=self.protocol,
            params=self.params,
            instances_checked=self.instances_checked + other.instances_checked,
            one_instances=self.one_instances + other.one_instances,
            zero_instances=self.zero_instances + other.zero_instances,
            witnesses={
                key: self.witnesses.get(key, 0) + other.witnesses.get(key, 0)
                for key in self.witnesses | other.witnesses
            },
            max_cost=max(self.max_cost, other.max_cost),
            min_nonzero_probability=min(probs) if probs else None,
            failures=sorted(
                [*self.failures, *other.failures], key=lambda c: c.sort_key
            ),
        )
