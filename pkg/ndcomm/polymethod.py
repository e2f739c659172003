"""Polynomial certificate that a codeword-free set is small.

Each input a gets a polynomial f_a over the indeterminates X_1..X_{2^k-1}
with f_a(b) odd iff a = b on a codeword-free set. After reducing every
exponent below 2^k', the polynomials f'_a are linearly independent over the
rationals and lie in a space whose dimension bounds the size of the set.
"""

import logging
from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache
from math import comb

import sympy as sp
from pydantic import BaseModel
from sympy.polys.polyfuncs import interpolate

from .cliques import verify_condition_set
from .config import MONOMIAL_BUDGET
from .errors import ParameterError, check_budget
from .hadamard import sk_indices, top_power
from .heq_models import HeqInput
from .heqfun import delta

log = logging.getLogger(__name__)

X = sp.Symbol("X")


class IndependenceCertificate(BaseModel):
    k: int
    kprime: int
    size: int
    rank: int
    monomials: int
    parity_identity: bool
    max_monomial_variables: int
    variable_cap: int
    monomial_bound: int
    failures: list[str] = []

    @property
    def passed(self) -> bool:
        return not self.failures


def variables(k: int) -> tuple[sp.Symbol, ...]:
    """X_1, ..., X_{2^k-1}"""
    return sp.symbols(f"X1:{2**k}")


@lru_cache
def epsilon_poly(a: int, kprime: int, x: sp.Symbol = X) -> sp.Poly:
    """Degree 2^k'-1 polynomial equal to delta(a, b) on 0 <= b < 2^k'"""
    size = 2**kprime
    if not 0 <= a < size:
        raise ParameterError(f"{a} is not below 2^{kprime}")
    points = [(b, delta(a, b)) for b in range(size)]
    return sp.Poly(interpolate(points, x), x, domain=sp.QQ)


def _lift(p: sp.Poly, gens: Sequence[sp.Symbol]) -> sp.Poly:
    return sp.Poly(p.as_expr(), *gens, domain=sp.QQ)


def build_fa(a: HeqInput) -> sp.Poly:
    """Product over S_k of 1 - eps(X_i) - eps(X_[i]) - eps(X_(i-[i]))"""
    gens = variables(a.k)
    one = sp.Poly(1, *gens, domain=sp.QQ)
    fa = one
    for i in sk_indices(a.k):
        p = top_power(i)
        factor = one
        for idx in (i, p, i - p):
            factor -= _lift(epsilon_poly(a[idx], a.kprime, gens[idx - 1]), gens)
        fa *= factor
    return fa


@lru_cache
def _reduced_power(x: sp.Symbol, e: int, kprime: int) -> sp.Expr:
    """x^e modulo x(x-1)...(x-(2^k'-1))"""
    size = 2**kprime
    if e < size:
        return x**e
    vanishing = sp.prod(x - c for c in range(size))
    return sp.rem(x**e, vanishing, x)


def reduce_poly(p: sp.Poly, kprime: int) -> sp.Poly:
    """Exponents below 2^k', same values on the grid [0, 2^k')^n"""
    gens = p.gens
    reduced = sp.Poly(0, *gens, domain=sp.QQ)
    for monom, coeff in p.terms():
        term = sp.Poly(coeff, *gens, domain=sp.QQ)
        for x, e in zip(gens, monom, strict=True):
            if e:
                term *= sp.Poly(_reduced_power(x, e, kprime), *gens, domain=sp.QQ)
        reduced += term
    return reduced


def evaluate(p: sp.Poly, point: Sequence[int]) -> Fraction:
    value = sp.Rational(p(*point))
    return Fraction(int(value.p), int(value.q))


def max_monomial_variables(p: sp.Poly) -> int:
    return max(sum(1 for e in monom if e) for monom in p.monoms())


def monomial_count_bound(k: int, kprime: int) -> int:
    """Reduced monomials with at most 2^k-k-1 of the 2^k-1 variables"""
    if k < 1 or kprime < 1:
        raise ParameterError(f"k and k' must be positive, got {k}, {kprime}")
    return sum((2**kprime - 1) ** i * comb(2**k - 1, i) for i in range(2**k - k))


def _parity_failures(inputs: Sequence[HeqInput], polys: Sequence[sp.Poly]) -> list[str]:
    failures = []
    for a, fa in zip(inputs, polys, strict=True):
        for b in inputs:
            value = evaluate(fa, b.entries)
            if value.denominator != 1:
                failures.append(f"f'_{a}({b}) = {value} is not an integer")
                continue
            expected = 1 if a == b else 0
            if value.numerator % 2 != expected:
                failures.append(f"f'_{a}({b}) = {value}, expected parity {expected}")
    return failures


def certify_independence(
    inputs: Sequence[HeqInput], budget: int = MONOMIAL_BUDGET
) -> IndependenceCertificate:
    """Build f'_a for every a and check parity, rank and the size bound"""
    if not inputs:
        raise ParameterError("cannot certify an empty set")
    k, kprime = inputs[0].k, inputs[0].kprime
    if any((a.k, a.kprime) != (k, kprime) for a in inputs):
        raise ParameterError("inputs do not share parameters")
    bound = monomial_count_bound(k, kprime)
    check_budget("monomial basis", bound, budget)

    failures = verify_condition_set(inputs)
    polys = [reduce_poly(build_fa(a), kprime) for a in inputs]
    parity = _parity_failures(inputs, polys)
    failures += parity

    basis = sorted({m for p in polys for m in p.monoms()})
    column = {m: c for c, m in enumerate(basis)}
    rows = []
    for p in polys:
        row = [0] * len(basis)
        for monom, coeff in p.terms():
            row[column[monom]] = coeff
        rows.append(row)
    rank = sp.Matrix(rows).rank()
    if rank != len(inputs):
        failures.append(f"rank {rank} over the rationals, expected {len(inputs)}")

    cap = 2**k - k - 1
    widest = max(max_monomial_variables(p) for p in polys)
    if widest > cap:
        failures.append(f"a monomial has {widest} variables, cap is {cap}")
    if len(inputs) > bound:
        failures.append(f"set size {len(inputs)} exceeds the monomial bound {bound}")

    log.debug(f"Certified {len(inputs)} inputs over {len(basis)} monomials")
    return IndependenceCertificate(
        k=k,
        kprime=kprime,
        size=len(inputs),
        rank=rank,
        monomials=len(basis),
        parity_identity=not parity,
        max_monomial_variables=widest,
        variable_cap=cap,
        monomial_bound=bound,
        failures=failures,
    )
