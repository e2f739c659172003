from itertools import product

import pytest
import sympy as sp

from ndcomm.cliques import iter_condition_sets, max_condition_set
from ndcomm.errors import BudgetExceeded, ParameterError
from ndcomm.heq_models import HeqInput, HeqParams
from ndcomm.heqfun import delta
from ndcomm.polymethod import (
    X,
    build_fa,
    certify_independence,
    epsilon_poly,
    evaluate,
    max_monomial_variables,
    monomial_count_bound,
    reduce_poly,
    variables,
)


def make(*entries: int) -> HeqInput:
    return HeqInput(k=2, kprime=1, entries=entries)


def test_epsilon_poly():
    assert epsilon_poly(0, 1).as_expr() == X
    assert epsilon_poly(1, 1).as_expr() == 1 - X
    assert epsilon_poly(2, 2).degree() == 3
    with pytest.raises(ParameterError):
        epsilon_poly(2, 1)


def test_epsilon_grid():
    for kprime in range(1, 4):
        for a in range(2**kprime):
            eps = epsilon_poly(a, kprime)
            for b in range(2**kprime):
                assert evaluate(eps, [b]) == delta(a, b)


def test_build_fa():
    x1, x2, x3 = variables(2)
    assert build_fa(make(0, 0, 0)).as_expr() == 1 - x1 - x2 - x3
    assert build_fa(make(1, 0, 0)).as_expr() == x1 - x2 - x3
    single = HeqInput(k=1, kprime=1, entries=(0,))
    assert build_fa(single).as_expr() == 1


def test_fa_variable_cap():
    a = HeqInput(k=3, kprime=1, entries=(1, 0, 1, 1, 0, 0, 1))
    fa = build_fa(a)
    assert max_monomial_variables(fa) <= 2**3 - 3 - 1
    assert max_monomial_variables(reduce_poly(fa, 1)) <= 4


def test_reduce_poly():
    x1, x2 = variables(2)[:2]
    square = sp.Poly(x1**2, x1, domain=sp.QQ)
    assert reduce_poly(square, 1).as_expr() == x1
    reduced = sp.Poly(x1 * x2 + 3, x1, x2, domain=sp.QQ)
    assert reduce_poly(reduced, 1) == reduced


def test_reduce_poly_grid():
    x1, x2 = variables(2)[:2]
    p = sp.Poly(x1**5 * x2**2 + 2 * x1 - x2**4 + 7, x1, x2, domain=sp.QQ)
    q = reduce_poly(p, 2)
    assert max(max(m) for m in q.monoms()) < 4
    for point in product(range(4), repeat=2):
        assert evaluate(p, point) == evaluate(q, point)


def test_monomial_count_bound():
    assert monomial_count_bound(1, 1) == 1
    assert monomial_count_bound(2, 1) == 4
    assert monomial_count_bound(2, 2) == 10
    for k in range(1, 4):
        values = [monomial_count_bound(k, kp) for kp in range(1, 6)]
        assert values == sorted(values)


def test_certificate_pair():
    cert = certify_independence([make(0, 0, 0), make(1, 0, 0)])
    assert cert.passed
    assert cert.rank == 2
    assert cert.parity_identity
    assert cert.max_monomial_variables <= cert.variable_cap == 1
    assert cert.monomial_bound == 4


def test_certificate_singleton():
    cert = certify_independence([make(1, 1, 0)])
    assert cert.passed
    assert cert.rank == 1


def test_every_condition_set_certifies():
    for inputs in iter_condition_sets(HeqParams(k=2, kprime=1)):
        assert certify_independence(inputs).passed


def test_solver_witness_certifies():
    witness = max_condition_set(HeqParams(k=2, kprime=2)).witness
    cert = certify_independence(witness)
    assert cert.passed
    assert cert.size <= cert.monomial_bound


def test_codeword_pair_fails():
    cert = certify_independence([make(0, 0, 0), make(1, 0, 1)])
    assert not cert.passed
    assert not cert.parity_identity


def test_certificate_errors():
    with pytest.raises(ParameterError):
        certify_independence([])
    with pytest.raises(BudgetExceeded):
        certify_independence([make(0, 0, 0)], budget=3)
