"""Exact big-integer checks of the binomial sums behind the set bound,
and the table of lower and upper bounds on the communication cost."""

import logging
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor
from math import comb

from pydantic import BaseModel

from .covers import theorem_applies, theorem_cover_exponent, theorem_set_bound_exponent
from .errors import check_budget
from .polymethod import monomial_count_bound

log = logging.getLogger(__name__)

MAX_K = 10
MAX_KPRIME = 16

LOWER_FORM = "(2^k')^(2^k-k) * C(2^k,k) <= sum and C(2^k,k) * k^k >= 2^(k^2)"


class Violation(BaseModel):
    k: int
    kprime: int
    check: str
    lhs: str
    rhs: str


class CountingRow(BaseModel):
    k: int
    kprime: int
    applicable: bool
    monomial_bound_bits: int
    binomial_sum_bits: int
    set_bound_exponent: int | None = None
    checks: dict[str, bool] = {}


class CountingReport(BaseModel):
    rows: list[CountingRow]
    lower_bound_form: str = LOWER_FORM
    violations: list[Violation] = []

    @property
    def passed(self) -> bool:
        return not self.violations


class BoundRow(BaseModel):
    k: int
    kprime: int
    classical_lower_bound: int | None
    lower_bound_formula: int | None
    quantum_upper_bound: int
    quantum_cost: int
    classical_cost: int
    quadratic_separation: bool


def binomial_sum(k: int, kprime: int) -> int:
    """Sum over i <= 2^k - k of (2^k')^i C(2^k, i)"""
    n = 2**k
    return sum(2 ** (kprime * i) * comb(n, i) for i in range(n - k + 1))


def h(k: int, kprime: int, j: int) -> int:
    return 2 ** (kprime * j) * comb(2**k, j)


def _nondecreasing(k: int, kprime: int) -> bool:
    values = [h(k, kprime, j) for j in range(2**k + 1)]
    return all(x <= y for x, y in zip(values, values[1:], strict=False))


def check_cell(k: int, kprime: int) -> tuple[CountingRow, list[Violation]]:
    monomials = monomial_count_bound(k, kprime)
    total = binomial_sum(k, kprime)
    row = CountingRow(
        k=k,
        kprime=kprime,
        applicable=theorem_applies(k, kprime),
        monomial_bound_bits=monomials.bit_length(),
        binomial_sum_bits=total.bit_length(),
    )
    if not row.applicable:
        return row, []

    n = 2**k
    exponent = theorem_set_bound_exponent(k, kprime)
    middle = comb(n, k)
    top_term = 2 ** (kprime * (n - k)) * middle
    # (name, lhs, rhs) asserting lhs <= rhs
    comparisons = [
        ("monomials <= sum", monomials, total),
        ("sum <= 2^k * top term", total, n * top_term),
        ("C(2^k,k) <= 2^(k^2)", middle, 2 ** (k * k)),
        ("sum <= set bound", total, 2**exponent),
        ("top term <= sum", top_term, total),
        ("2^(k^2) <= C(2^k,k) * k^k", 2 ** (k * k), middle * k**k),
    ]
    violations = []
    checks = {}
    for name, lhs, rhs in comparisons:
        checks[name] = lhs <= rhs
        if not checks[name]:
            violations.append(
                Violation(k=k, kprime=kprime, check=name, lhs=str(lhs), rhs=str(rhs))
            )
    checks["h nondecreasing"] = _nondecreasing(k, kprime)
    if not checks["h nondecreasing"]:
        violations.append(
            Violation(
                k=k, kprime=kprime, check="h nondecreasing", lhs="h(j)", rhs="h(j+1)"
            )
        )
    row = row.model_copy(update={"set_bound_exponent": exponent, "checks": checks})
    return row, violations


def _check_cell_pair(cell: tuple[int, int]) -> tuple[CountingRow, list[Violation]]:
    return check_cell(*cell)


def check_counting_inequalities(
    cells: Iterable[tuple[int, int]], threads: int = 1
) -> CountingReport:
    """Check every (k, k') cell; cells outside k >= 3, k' >= k are data only"""
    cells = list(cells)
    for k, kprime in cells:
        check_budget("counting k", k, MAX_K)
        check_budget("counting k'", kprime, MAX_KPRIME)
    if threads <= 1:
        results = [check_cell(k, kprime) for k, kprime in cells]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_check_cell_pair, cells))
    rows = [row for row, _ in results]
    violations = [v for _, found in results for v in found]
    skipped = sum(1 for row in rows if not row.applicable)
    if skipped:
        log.warning(f"{skipped} cells are outside k >= 3, k' >= k and were not checked")
    log.info(f"Checked {len(rows) - skipped} cells, {len(violations)} violations")
    return CountingReport(rows=rows, violations=violations)


def classical_cost(k: int, kprime: int) -> int:
    if k < 2:
        return 1 + k * kprime
    return 1 + max(k + 3 * kprime, k * kprime)


def quantum_cost(k: int, kprime: int) -> int:
    if k < 2:
        return 1 + 2 * (k + kprime)
    return 1 + max(2 * (k + kprime), k + 3 * kprime)


def bound_table(cells: Iterable[tuple[int, int]]) -> list[BoundRow]:
    rows = []
    for k, kprime in cells:
        lower = formula = None
        if theorem_applies(k, kprime):
            formula = theorem_cover_exponent(k, kprime)
            # The formula goes negative for k' close to k
            lower = max(0, formula)
        rows.append(
            BoundRow(
                k=k,
                kprime=kprime,
                classical_lower_bound=lower,
                lower_bound_formula=formula,
                quantum_upper_bound=3 * (k + kprime),
                quantum_cost=quantum_cost(k, kprime),
                classical_cost=classical_cost(k, kprime),
                quadratic_separation=kprime == 2 * k,
            )
        )
    return rows


def separation_table(ks: Iterable[int]) -> list[BoundRow]:
    """Rows with k' = 2k, where the lower bound is k^2 - 3k against 9k"""
    return bound_table((k, 2 * k) for k in ks)
