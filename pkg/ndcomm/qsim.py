"""Exact simulation of the protocol registers.

A DyadicState holds integer amplitudes z(m, r) over a common scale s, the
amplitude of |m>|r> being z(m, r) / sqrt(2^s). State preparation, +-1 phases,
the XOR permutation and Hadamard layers keep this form, so measurement
probabilities come out as exact rationals.
"""

import math
from fractions import Fraction
from functools import lru_cache
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator

from .errors import ParameterError
from .heq_models import HeqInput
from .heqfun import check_neq_inputs


class DyadicState(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: int = Field(ge=1)
    kprime: int = Field(ge=1)
    amps: np.ndarray
    scale: int = Field(ge=0)

    @model_validator(mode="after")
    def check_shape(self):
        if self.amps.shape != (2**self.k, 2**self.kprime):
            raise ValueError(f"amplitude table must be 2^{self.k} x 2^{self.kprime}")
        if not np.issubdtype(self.amps.dtype, np.integer):
            raise ValueError("amplitudes must be integers")
        return self

    @field_serializer("amps")
    def dump_amps(self, amps: np.ndarray) -> list[list[int]]:
        return amps.tolist()

    @property
    def qubits(self) -> int:
        return self.k + self.kprime

    def norm_squared(self) -> int:
        return sum(int(z) ** 2 for z in self.amps.flat)

    def is_normalized(self) -> bool:
        return self.norm_squared() == 2**self.scale

    def amplitude(self, m: int, r: int) -> float:
        return int(self.amps[m, r]) / math.sqrt(2**self.scale)


def _with_origin(a: HeqInput) -> np.ndarray:
    """(a_0, a_1, ..., a_{2^k-1}) with the convention a_0 = 0"""
    return np.array((0, *a.entries), dtype=np.int64)


def _check_dims(state: DyadicState, a: HeqInput):
    if (state.k, state.kprime) != (a.k, a.kprime):
        raise ParameterError(
            f"state has k={state.k},k'={state.kprime}; "
            f"input has k={a.k},k'={a.kprime}"
        )


def prepare_indexed_superposition(a: HeqInput) -> DyadicState:
    """1/sqrt(2^k) sum_m |m>|a_m>"""
    amps = np.zeros((2**a.k, 2**a.kprime), dtype=np.int64)
    amps[np.arange(2**a.k), _with_origin(a)] = 1
    return DyadicState(k=a.k, kprime=a.kprime, amps=amps, scale=a.k)


def phase_flip(state: DyadicState, b: HeqInput) -> DyadicState:
    """|m>|r> -> (-1)^delta(r, b_m) |m>|r>"""
    _check_dims(state, b)
    r = np.arange(2**state.kprime)
    signs = np.where(r[None, :] == _with_origin(b)[:, None], 1, -1)
    return state.model_copy(update={"amps": state.amps * signs})


def xor_second_register(state: DyadicState, a: HeqInput) -> DyadicState:
    """|m>|r> -> |m>|r xor a_m>"""
    _check_dims(state, a)
    r = np.arange(2**state.kprime)
    # new[m, t] = old[m, t xor a_m]
    source = r[None, :] ^ _with_origin(a)[:, None]
    amps = np.take_along_axis(state.amps, source, axis=1)
    return state.model_copy(update={"amps": amps})


@lru_cache
def sylvester(k: int) -> np.ndarray:
    """Unnormalized Walsh-Hadamard matrix, entry (c, m) = (-1)^(m.c)"""
    h = np.array([[1]], dtype=np.int64)
    h1 = np.array([[1, 1], [1, -1]], dtype=np.int64)
    for _ in range(k):
        h = np.kron(h1, h)
    h.setflags(write=False)
    return h


def hadamard_first_register(state: DyadicState) -> DyadicState:
    amps = sylvester(state.k) @ state.amps
    return state.model_copy(update={"amps": amps, "scale": state.scale + state.k})


def outcome_probability(state: DyadicState, c: int) -> Fraction:
    """Probability that measuring the first register gives c"""
    if not 0 <= c < 2**state.k:
        raise ParameterError(f"outcome {c} outside [0, 2^{state.k})")
    weight = sum(int(z) ** 2 for z in state.amps[c])
    return Fraction(weight, 2**state.scale)


def dump_state(state: DyadicState) -> dict[str, Any]:
    return {"z": state.amps.tolist(), "s": state.scale}


class RotationState(BaseModel):
    """cos(theta)|0> + sin(theta)|1> with theta = numerator * pi / 2^n"""

    model_config = ConfigDict(frozen=True)

    numerator: int
    n: int = Field(ge=1)

    @property
    def angle(self) -> float:
        return self.numerator * math.pi / 2**self.n

    def rotate(self, numerator: int) -> "RotationState":
        """Rotate by numerator * pi / 2^n"""
        return RotationState(numerator=self.numerator + numerator, n=self.n)

    def one_is_impossible(self) -> bool:
        # sin(x pi / 2^n) = 0 iff 2^n divides x
        return self.numerator % 2**self.n == 0

    def one_probability(self) -> float:
        if self.one_is_impossible():
            return 0.0
        return math.sin(self.angle) ** 2


def neq_accept_probability(x: int, y: int, n: int) -> tuple[bool, float]:
    """(exact-zero flag, probability of measuring 1)"""
    check_neq_inputs(x, y, n)
    state = RotationState(numerator=x, n=n).rotate(-y)
    return state.one_is_impossible(), state.one_probability()
