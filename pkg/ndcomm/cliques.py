"""Largest sets of inputs whose pairwise delta patterns avoid the Hadamard code.

Two distinct inputs are adjacent in the condition graph iff their delta
pattern is not a codeword, so codeword-free sets are exactly its cliques.
"""

import logging
import time
from collections.abc import Iterator, Sequence
from enum import StrEnum

import networkx as nx
import numpy as np
from pydantic import BaseModel

from .config import CLIQUE_BUDGET, SET_BUDGET
from .covers import theorem_applies, theorem_set_bound_exponent
from .errors import NdcommError, ParameterError, check_budget
from .hadamard import is_codeword
from .heq_models import HeqInput, HeqParams
from .heqfun import all_inputs, delta_pattern

log = logging.getLogger(__name__)


class CliqueMode(StrEnum):
    exact = "exact"
    heuristic = "heuristic"


class ConditionGraph(BaseModel):
    vertices: list[HeqInput]
    adjacency: list[int]

    def neighbours(self, v: int) -> list[int]:
        mask = self.adjacency[v]
        return [u for u in range(len(self.vertices)) if mask >> u & 1]


class CliqueResult(BaseModel):
    k: int
    kprime: int
    mode: CliqueMode
    size: int
    witness: list[HeqInput]
    iterations: int | None = None
    theorem_bound_exponent: int | None = None


def compatible(a: HeqInput, b: HeqInput) -> bool:
    """Codeword-free condition for a pair; equal inputs give the zero pattern"""
    if a == b:
        return True
    return not is_codeword(delta_pattern(a, b))


def condition_graph(params: HeqParams, budget: int = CLIQUE_BUDGET) -> ConditionGraph:
    check_budget("clique vertices", params.input_count, budget)
    vertices = list(all_inputs(params))
    adjacency = [0] * len(vertices)
    for i, a in enumerate(vertices):
        for j in range(i + 1, len(vertices)):
            if compatible(a, vertices[j]):
                adjacency[i] |= 1 << j
                adjacency[j] |= 1 << i
    return ConditionGraph(vertices=vertices, adjacency=adjacency)


def verify_condition_set(inputs: Sequence[HeqInput]) -> list[str]:
    """Check the codeword-free condition pair by pair, without the graph"""
    problems = []
    for i, a in enumerate(inputs):
        for b in inputs[i + 1 :]:
            if a == b:
                problems.append(f"{a} appears twice")
            elif is_codeword(delta_pattern(a, b)):
                problems.append(f"{a} and {b} have a codeword delta pattern")
    return problems


def _colour_order(cands: int, adjacency: Sequence[int]) -> tuple[list[int], list[int]]:
    """Greedy sequential colouring; colours[i] bounds cliques within order[:i+1]"""
    order, colours = [], []
    uncoloured = cands
    colour = 0
    while uncoloured:
        colour += 1
        q = uncoloured
        while q:
            v = (q & -q).bit_length() - 1
            q &= ~adjacency[v] & ~(1 << v)
            uncoloured &= ~(1 << v)
            order.append(v)
            colours.append(colour)
    return order, colours


def exact_max_clique(adjacency: Sequence[int]) -> list[int]:
    """Bitset branch and bound with a greedy colouring bound"""
    best: list[int] = []
    nodes = 0

    def expand(clique: list[int], cands: int):
        nonlocal best, nodes
        nodes += 1
        order, colours = _colour_order(cands, adjacency)
        for idx in range(len(order) - 1, -1, -1):
            if len(clique) + colours[idx] <= len(best):
                return
            v = order[idx]
            clique.append(v)
            new = cands & adjacency[v]
            if new:
                expand(clique, new)
            elif len(clique) > len(best):
                best = sorted(clique)
            clique.pop()
            cands &= ~(1 << v)

    n = len(adjacency)
    if n:
        expand([], (1 << n) - 1)
    log.debug(f"Clique search expanded {nodes} nodes")
    return best


def _heuristic_set(
    params: HeqParams, seed: int, iterations: int, time_budget: float, patience: int
) -> tuple[list[HeqInput], int]:
    rng = np.random.default_rng(seed)
    deadline = time.monotonic() + time_budget
    best: list[HeqInput] = []
    current: list[HeqInput] = []
    misses = 0
    ran = 0
    for _ in range(iterations):
        if time.monotonic() > deadline:
            log.warning(f"Heuristic stopped by the time budget after {ran} draws")
            break
        ran += 1
        entries = rng.integers(0, params.alphabet, params.length).tolist()
        cand = HeqInput(k=params.k, kprime=params.kprime, entries=entries)
        if cand not in current and all(compatible(cand, m) for m in current):
            current.append(cand)
            misses = 0
        else:
            misses += 1
        if misses >= patience:
            if len(current) > len(best):
                best = current
            current, misses = [], 0
    if len(current) > len(best):
        best = current
    return best, ran


def max_condition_set(
    params: HeqParams,
    mode: CliqueMode | str = CliqueMode.exact,
    seed: int | None = None,
    iterations: int = 20_000,
    time_budget: float = 60.0,
    patience: int = 500,
    budget: int = CLIQUE_BUDGET,
) -> CliqueResult:
    mode = CliqueMode(mode)
    ran = None
    if mode == CliqueMode.exact:
        graph = condition_graph(params, budget)
        witness = [graph.vertices[v] for v in exact_max_clique(graph.adjacency)]
    else:
        if seed is None:
            raise ParameterError("heuristic mode needs a seed")
        witness, ran = _heuristic_set(params, seed, iterations, time_budget, patience)

    problems = verify_condition_set(witness)
    if problems:
        raise NdcommError(f"solver returned an invalid set: {problems[0]}")

    exponent = None
    if theorem_applies(params.k, params.kprime):
        exponent = theorem_set_bound_exponent(params.k, params.kprime)
        if len(witness) > 2**exponent:
            log.warning(f"Set of size {len(witness)} exceeds 2^{exponent}")
    log.info(
        f"{mode} condition set for k={params.k}, k'={params.kprime}: {len(witness)}"
    )
    return CliqueResult(
        k=params.k,
        kprime=params.kprime,
        mode=mode,
        size=len(witness),
        witness=witness,
        iterations=ran,
        theorem_bound_exponent=exponent,
    )


def reference_max_condition_set(
    params: HeqParams, budget: int = CLIQUE_BUDGET
) -> CliqueResult:
    """Maximum by networkx maximal-clique enumeration, for cross-checking"""
    graph = condition_graph(params, budget)
    g = nx.Graph()
    g.add_nodes_from(range(len(graph.vertices)))
    g.add_edges_from((v, u) for v in g.nodes for u in graph.neighbours(v) if u > v)
    # Largest clique, ties to the lexicographically smallest vertex list
    cliques = [sorted(c) for c in nx.find_cliques(g)]
    best = min(cliques, key=lambda c: (-len(c), c))
    witness = [graph.vertices[v] for v in best]
    return CliqueResult(
        k=params.k,
        kprime=params.kprime,
        mode=CliqueMode.exact,
        size=len(witness),
        witness=witness,
    )


def iter_condition_sets(
    params: HeqParams, budget: int = CLIQUE_BUDGET, max_sets: int = SET_BUDGET
) -> Iterator[list[HeqInput]]:
    """Every nonempty codeword-free set, each listed once in index order.

    Raises BudgetExceeded once more than max_sets sets have been produced.
    """
    graph = condition_graph(params, budget)
    produced = 0

    def extend(clique: list[int], cands: int) -> Iterator[list[int]]:
        yield clique
        while cands:
            v = (cands & -cands).bit_length() - 1
            cands &= ~(1 << v)
            yield from extend([*clique, v], cands & graph.adjacency[v])

    for v in range(len(graph.vertices)):
        higher = graph.adjacency[v] & ~((1 << (v + 1)) - 1)
        for clique in extend([v], higher):
            produced += 1
            check_budget("condition sets", produced, max_sets)
            yield [graph.vertices[u] for u in clique]
