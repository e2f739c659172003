"""Hadamard code construction, membership, local testability and decoding.

Index i of a codeword is read little-endian, i = sum of i_s 2^s, and
h(w)_i = w . i (mod 2).
"""

from collections.abc import Sequence
from functools import lru_cache
from itertools import product

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import ParameterError, PromiseViolation


class Codeword(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int = Field(ge=1)
    bits: tuple[int, ...]

    @model_validator(mode="after")
    def check_length(self):
        if len(self.bits) != 2**self.k:
            raise ValueError(f"codeword length must be 2^{self.k}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("codeword bits must be 0 or 1")
        return self

    def to_string(self) -> str:
        return "".join(str(b) for b in self.bits)


def codeword_from_string(text: str) -> Codeword:
    """Parse a '0'/'1' string, index 0 leftmost"""
    k = code_order(len(text))
    return Codeword(k=k, bits=tuple(int(c) for c in text))


def code_order(length: int) -> int:
    """k such that length = 2^k"""
    if length < 2 or length & (length - 1):
        raise ParameterError(f"length {length} is not a power of two >= 2")
    return length.bit_length() - 1


def top_power(i: int) -> int:
    """[i], the largest power of two <= i"""
    if i < 1:
        raise ParameterError(f"[i] is defined for i >= 1, got {i}")
    return 1 << (i.bit_length() - 1)


@lru_cache
def sk_indices(k: int) -> tuple[int, ...]:
    """Indices in [1, 2^k - 1] that are not powers of two"""
    return tuple(i for i in range(1, 2**k) if i & (i - 1))


def inner(w: Sequence[int], i: int) -> int:
    return sum(ws for s, ws in enumerate(w) if (i >> s) & 1) % 2


def encode(w: Sequence[int]) -> Codeword:
    k = len(w)
    if k == 0:
        raise ParameterError("cannot encode an empty message")
    return Codeword(k=k, bits=tuple(inner(w, i) for i in range(2**k)))


@lru_cache
def all_codewords(k: int) -> frozenset[tuple[int, ...]]:
    return frozenset(encode(w).bits for w in product((0, 1), repeat=k))


def is_codeword(x: Sequence[int]) -> bool:
    """Membership by comparison against all 2^k codewords"""
    k = code_order(len(x))
    return tuple(x) in all_codewords(k)


def violated_index(x: Sequence[int]) -> int | None:
    """Smallest j in S_k with x_j != x_[j] xor x_(j-[j]), if any"""
    k = code_order(len(x))
    if x[0] != 0:
        raise PromiseViolation("local test requires x_0 = 0")
    for i in sk_indices(k):
        p = top_power(i)
        if x[i] != x[p] ^ x[i - p]:
            return i
    return None


def local_test(x: Sequence[int]) -> bool:
    return violated_index(x) is None


def promise_decode(x: Sequence[int]) -> tuple[int, ...]:
    if not is_codeword(x):
        raise PromiseViolation("input is not a Hadamard codeword")
    k = code_order(len(x))
    return tuple(x[1 << s] for s in range(k))


def hamming_weight(x: Sequence[int]) -> int:
    return sum(x)


def count_local_test_solutions(k: int) -> int:
    """Count x with x_0 = 0 passing the local test, by exhaustion"""
    total = 0
    for tail in product((0, 1), repeat=2**k - 1):
        if local_test((0, *tail)):
            total += 1
    return total
