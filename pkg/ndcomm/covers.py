"""Exact 1-covers by monochromatic rectangles, and the counting bounds on them.

Only maximal 1-monochromatic rectangles are needed in a minimum cover, so
they are enumerated first (the column sets are exactly the nonempty
intersections of row supports) and a best-first branch and bound then
solves the set cover over the target cells.
"""

import csv
import heapq
import io
import logging
from collections.abc import Callable, Hashable, Sequence
from enum import StrEnum
from typing import Any

from pydantic import BaseModel

from .config import COVER_BUDGET, RECTANGLE_BUDGET
from .errors import ParameterError, check_budget
from .heq_models import HeqParams
from .heqfun import all_inputs, heq, neq

log = logging.getLogger(__name__)

Oracle = Callable[[Any, Any], int]


class CoverTarget(StrEnum):
    all_ones = "all-ones"
    diagonal = "diagonal"


class Rectangle(BaseModel):
    rows: list[int]
    cols: list[int]
    row_labels: list[str]
    col_labels: list[str]


class RectCover(BaseModel):
    function: str
    target: CoverTarget
    target_size: int
    rectangles: list[Rectangle]

    @property
    def size(self) -> int:
        return len(self.rectangles)


def _mask_bits(mask: int) -> list[int]:
    bits = []
    while mask:
        low = mask & -mask
        bits.append(low.bit_length() - 1)
        mask ^= low
    return bits


def _row_supports(f: Oracle, xs: Sequence, ys: Sequence) -> list[int]:
    rows = []
    for x in xs:
        mask = 0
        for j, y in enumerate(ys):
            if f(x, y) == 1:
                mask |= 1 << j
        rows.append(mask)
    return rows


def maximal_rectangles(
    rows: Sequence[int], budget: int = RECTANGLE_BUDGET
) -> list[tuple[int, int]]:
    """(row mask, column mask) of every maximal 1-monochromatic rectangle"""
    family = set()
    stack = [r for r in rows if r]
    while stack:
        cols = stack.pop()
        if cols in family:
            continue
        family.add(cols)
        check_budget("maximal rectangles", len(family), budget)
        for r in rows:
            inter = cols & r
            if inter and inter not in family:
                stack.append(inter)
    rects = []
    for cols in sorted(family):
        row_mask = 0
        for i, r in enumerate(rows):
            if r & cols == cols:
                row_mask |= 1 << i
        rects.append((row_mask, cols))
    return rects


def _target_cells(
    rows: Sequence[int], xs: Sequence, ys: Sequence, target: CoverTarget
) -> list[tuple[int, int]]:
    if target == CoverTarget.diagonal:
        if list(xs) != list(ys):
            raise ParameterError("a diagonal target needs equal row and column sets")
        return [(i, i) for i in range(len(xs)) if rows[i] >> i & 1]
    return [(i, j) for i, r in enumerate(rows) for j in _mask_bits(r)]


def _greedy_cover(masks: Sequence[int], full: int) -> tuple[int, ...]:
    chosen = []
    covered = 0
    while covered != full:
        best = max(
            range(len(masks)), key=lambda r: ((masks[r] & ~covered).bit_count(), -r)
        )
        chosen.append(best)
        covered |= masks[best]
    return tuple(sorted(chosen))


def exact_set_cover(masks: Sequence[int], full: int) -> tuple[int, ...]:
    """Indices of a minimum family of masks whose union is full"""
    if full == 0:
        return ()
    best = _greedy_cover(masks, full)
    largest = max(m.bit_count() for m in masks)
    holders: dict[int, list[int]] = {}
    for r, m in enumerate(masks):
        for e in _mask_bits(m):
            holders.setdefault(e, []).append(r)

    def bound(depth: int, covered: int) -> int:
        left = (full & ~covered).bit_count()
        return depth + -(-left // largest)

    # Best-first: smallest bound, then deepest, then lexicographic indices
    heap = [(bound(0, 0), 0, (), 0)]
    expanded = 0
    while heap:
        lb, neg_depth, chosen, covered = heapq.heappop(heap)
        if covered == full:
            best = tuple(sorted(chosen))
            break
        if lb >= len(best):
            continue
        expanded += 1
        uncovered = full & ~covered
        pivot = min(_mask_bits(uncovered), key=lambda e: (len(holders[e]), e))
        options = sorted(
            holders[pivot], key=lambda r: (-(masks[r] & uncovered).bit_count(), r)
        )
        for r in options:
            new = covered | masks[r]
            nlb = bound(len(chosen) + 1, new)
            if nlb < len(best):
                heapq.heappush(heap, (nlb, neg_depth - 1, (*chosen, r), new))
    log.debug(f"Set cover: {expanded} nodes expanded, optimum {len(best)}")
    return best


def _prune_dominated(masks: Sequence[int]) -> list[int]:
    """Index of the first occurrence of every nonzero mask that no other
    mask strictly contains, largest masks first"""
    first: dict[int, int] = {}
    for i, m in enumerate(masks):
        if m and m not in first:
            first[m] = i
    kept: list[int] = []
    # A strict superset has more bits, so it is kept before its subsets
    for m in sorted(first, key=lambda m: (-m.bit_count(), m)):
        if not any(m & other == m for other in kept):
            kept.append(m)
    return [first[m] for m in kept]


def _cell_masks(
    rects: Sequence[tuple[int, int]], cells: Sequence[tuple[int, int]]
) -> list[int]:
    by_row: dict[int, list[tuple[int, int]]] = {}
    for t, (i, j) in enumerate(cells):
        by_row.setdefault(i, []).append((j, t))
    masks = []
    for row_mask, col_mask in rects:
        m = 0
        for i in _mask_bits(row_mask):
            for j, t in by_row.get(i, ()):
                if col_mask >> j & 1:
                    m |= 1 << t
        masks.append(m)
    return masks


def min_one_cover(
    f: Oracle,
    xs: Sequence[Hashable],
    ys: Sequence[Hashable],
    target: CoverTarget | str = CoverTarget.all_ones,
    budget: int = COVER_BUDGET,
    name: str = "",
    rect_budget: int = RECTANGLE_BUDGET,
) -> tuple[int, RectCover]:
    """Minimum number of 1-monochromatic rectangles covering the target"""
    target = CoverTarget(target)
    check_budget("cover domain", len(xs) * len(ys), budget)
    rows = _row_supports(f, xs, ys)
    cells = _target_cells(rows, xs, ys, target)
    rects = maximal_rectangles(rows, rect_budget)
    cell_masks = _cell_masks(rects, cells)
    useful = _prune_dominated(cell_masks)
    log.info(
        f"{len(rects)} maximal rectangles, {len(useful)} undominated, "
        f"{len(cells)} target cells"
    )
    chosen = exact_set_cover([cell_masks[r] for r in useful], (1 << len(cells)) - 1)

    rectangles = []
    for r in chosen:
        row_mask, col_mask = rects[useful[r]]
        rows_idx, cols_idx = _mask_bits(row_mask), _mask_bits(col_mask)
        rectangles.append(
            Rectangle(
                rows=rows_idx,
                cols=cols_idx,
                row_labels=[str(xs[i]) for i in rows_idx],
                col_labels=[str(ys[j]) for j in cols_idx],
            )
        )
    cover = RectCover(
        function=name or getattr(f, "__name__", "f"),
        target=target,
        target_size=len(cells),
        rectangles=rectangles,
    )
    return cover.size, cover


def verify_cover(
    f: Oracle, xs: Sequence, ys: Sequence, cover: RectCover
) -> list[str]:
    """Problems found when re-checking a cover against the oracle"""
    problems = []
    covered = set()
    for n, rect in enumerate(cover.rectangles):
        for i in rect.rows:
            for j in rect.cols:
                if f(xs[i], ys[j]) != 1:
                    problems.append(f"rectangle {n} contains 0-cell ({i}, {j})")
                covered.add((i, j))
    rows = _row_supports(f, xs, ys)
    for cell in _target_cells(rows, xs, ys, cover.target):
        if cell not in covered:
            problems.append(f"target cell {cell} is not covered")
    return problems


def cover_to_csv(cover: RectCover) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["rectangle_id", "a_members", "b_members"])
    for n, rect in enumerate(cover.rectangles):
        writer.writerow([n, " ".join(rect.row_labels), " ".join(rect.col_labels)])
    return out.getvalue()


def heq_cover(
    params: HeqParams,
    target: CoverTarget | str = CoverTarget.diagonal,
    budget: int = COVER_BUDGET,
    rect_budget: int = RECTANGLE_BUDGET,
) -> tuple[int, RectCover]:
    check_budget("cover domain", params.pair_count, budget)
    inputs = list(all_inputs(params))
    name = f"HEQ_{params.k},{params.kprime}"
    return min_one_cover(
        heq, inputs, inputs, target, budget, name=name, rect_budget=rect_budget
    )


def neq_cover(
    n: int,
    target: CoverTarget | str = CoverTarget.all_ones,
    budget: int = COVER_BUDGET,
    rect_budget: int = RECTANGLE_BUDGET,
) -> tuple[int, RectCover]:
    check_budget("cover domain", 4**n, budget)
    values = list(range(2**n))

    def neq_n(x: int, y: int) -> int:
        return neq(x, y, n)

    return min_one_cover(
        neq_n, values, values, target, budget, name=f"NEQ_{n}", rect_budget=rect_budget
    )


def communication_lower_bound(rectangles: int) -> int:
    """ceil(log2(rectangles)), the nondeterministic complexity of a cover size"""
    if rectangles <= 1:
        return 0
    return (rectangles - 1).bit_length()


def diagonal_cover_lower_bound(params: HeqParams, max_a: int) -> int:
    """ceil(#inputs / max_a) rectangles are needed to cover the diagonal"""
    if max_a < 1:
        raise ParameterError(f"maxA must be at least 1, got {max_a}")
    return -(-params.input_count // max_a)


def theorem_applies(k: int, kprime: int) -> bool:
    return k >= 3 and kprime >= k


def _check_theorem_range(k: int, kprime: int):
    if not theorem_applies(k, kprime):
        raise ParameterError(f"the set bound needs k >= 3, k' >= k; got {k}, {kprime}")


def theorem_set_bound_exponent(k: int, kprime: int) -> int:
    """log2 of the largest possible codeword-free set, k'2^k - k(k'-k-1)"""
    _check_theorem_range(k, kprime)
    return kprime * 2**k - k * (kprime - k - 1)


def theorem_cover_exponent(k: int, kprime: int) -> int:
    """k(k'-k) - (k+k'), the resulting lower bound on N(HEQ)"""
    _check_theorem_range(k, kprime)
    return k * (kprime - k) - (k + kprime)
