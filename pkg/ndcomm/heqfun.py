"""Reference oracles for HEQ and NEQ, and instance enumeration"""

import logging
from collections.abc import Iterator, Sequence
from enum import StrEnum
from itertools import islice, product

import numpy as np

from .config import INSTANCE_BUDGET
from .errors import ParameterError, check_budget
from .hadamard import encode, is_codeword
from .heq_models import HeqInput, HeqParams

log = logging.getLogger(__name__)


class InstanceMode(StrEnum):
    exhaustive = "exhaustive"
    diagonal = "diagonal"
    sample = "sample"


def delta(a: int, b: int) -> int:
    return 0 if a == b else 1


def _check_same_params(a: HeqInput, b: HeqInput):
    if (a.k, a.kprime) != (b.k, b.kprime):
        raise ParameterError(
            f"mismatched inputs: k={a.k},k'={a.kprime} vs k={b.k},k'={b.kprime}"
        )


def delta_pattern(a: HeqInput, b: HeqInput) -> tuple[int, ...]:
    """(0, delta(a_1, b_1), ..., delta(a_{2^k-1}, b_{2^k-1}))"""
    _check_same_params(a, b)
    return (0, *(delta(x, y) for x, y in zip(a.entries, b.entries, strict=True)))


def heq(a: HeqInput, b: HeqInput) -> int:
    """0 iff the delta pattern is a nonzero Hadamard codeword"""
    pattern = delta_pattern(a, b)
    if any(pattern) and is_codeword(pattern):
        return 0
    return 1


def check_neq_inputs(x: int, y: int, n: int):
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    for v in (x, y):
        if not 0 <= v < 2**n:
            raise ParameterError(f"{v} is not an {n}-bit integer")


def neq(x: int, y: int, n: int) -> int:
    check_neq_inputs(x, y, n)
    return 1 if x != y else 0


def all_inputs(params: HeqParams) -> Iterator[HeqInput]:
    """Every input of the parameters, in lexicographic order"""
    for entries in product(range(params.alphabet), repeat=params.length):
        yield HeqInput(k=params.k, kprime=params.kprime, entries=entries)


def planted_zero_instance(
    a: HeqInput, w: Sequence[int], offsets: Sequence[int]
) -> tuple[HeqInput, HeqInput]:
    """Shift a on the support of h(w); nonzero offsets give pattern h(w)"""
    pattern = encode(w).bits
    entries = tuple(
        v ^ off if pattern[i] else v
        for i, (v, off) in enumerate(zip(a.entries, offsets, strict=True), start=1)
    )
    return a, HeqInput(k=a.k, kprime=a.kprime, entries=entries)


def _sample_pairs(
    params: HeqParams, count: int, seed: int
) -> Iterator[tuple[HeqInput, HeqInput]]:
    # Round robin: uniform, diagonal, planted codeword shift
    rng = np.random.default_rng(seed)
    k, kp, size = params.k, params.kprime, params.length
    for t in range(count):
        a = HeqInput(
            k=k, kprime=kp, entries=rng.integers(0, params.alphabet, size).tolist()
        )
        kind = t % 3
        if kind == 0:
            entries = rng.integers(0, params.alphabet, size).tolist()
            yield a, HeqInput(k=k, kprime=kp, entries=entries)
        elif kind == 1:
            yield a, a
        else:
            w_int = int(rng.integers(1, 2**k))
            w = [(w_int >> s) & 1 for s in range(k)]
            offsets = rng.integers(1, params.alphabet, size).tolist()
            yield planted_zero_instance(a, w, offsets)


def enumerate_instances(
    params: HeqParams,
    mode: InstanceMode | str = InstanceMode.exhaustive,
    count: int | None = None,
    seed: int | None = None,
    budget: int = INSTANCE_BUDGET,
    start: int = 0,
    stop: int | None = None,
) -> Iterator[tuple[HeqInput, HeqInput]]:
    """Stream (Alice, Bob) input pairs; start/stop select an index range"""
    mode = InstanceMode(mode)
    if mode == InstanceMode.exhaustive:
        check_budget("instance pairs", params.pair_count, budget)
        inputs = list(all_inputs(params))
        stream = ((a, b) for a in inputs for b in inputs)
    elif mode == InstanceMode.diagonal:
        check_budget("instance pairs", params.input_count, budget)
        stream = ((a, a) for a in all_inputs(params))
    else:
        if count is None or seed is None:
            raise ParameterError("sample mode needs both a count and a seed")
        if count < 0:
            raise ParameterError(f"sample count must be nonnegative, got {count}")
        stream = _sample_pairs(params, count, seed)
    log.debug(f"Enumerating {mode} instances for k={params.k}, k'={params.kprime}")
    yield from islice(stream, start, stop)
