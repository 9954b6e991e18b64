import math

import pytest

from hopf_cohomology.exceptions import ContextMismatch, DivisionByZero, OutOfRange, ZeroInput
from hopf_cohomology.field import (
    FieldContext,
    cyclotomic_coeffs,
    lcm,
    multiplicative_order,
    q_binomial,
    q_integer,
    scalar_arith,
)


def test_zeta3_satisfies_its_cyclotomic_relation():
    ctx = FieldContext.cyclotomic(3)
    z = ctx.zeta()
    assert z**3 == 1
    assert 1 + z + z**2 == 0
    assert z != 1


def test_parse_sums_of_terms():
    ctx = FieldContext.cyclotomic(4)
    value = ctx.parse("2*zeta4-1/2")
    assert value == 2 * ctx.zeta() - ctx.one / 2
    assert ctx.parse("zeta4^2") == -1
    assert str(ctx.parse("-1/2")) == "-1/2"


def test_for_texts_picks_the_lcm_order():
    assert FieldContext.for_texts("zeta3", "zeta4").ell == 12
    assert FieldContext.for_texts("zeta4", "zeta6").ell == 12
    assert FieldContext.for_texts("zeta6", "zeta2", "zeta3").ell == 6
    assert FieldContext.for_texts("-1", "1/2").kind == "rational"


def test_rational_roots_of_unity():
    q = FieldContext.rational()
    assert q.zeta(2) == -1
    with pytest.raises(ContextMismatch):
        q.zeta(3)


def test_mixing_fields_is_refused():
    with pytest.raises(ContextMismatch):
        FieldContext.rational().one + FieldContext.cyclotomic(3).one
    with pytest.raises(ContextMismatch):
        scalar_arith("add", FieldContext.rational().one, FieldContext.cyclotomic(5).one)


def test_exact_division_by_zero():
    ctx = FieldContext.cyclotomic(5)
    with pytest.raises(DivisionByZero):
        ctx.one / ctx.zero
    with pytest.raises(DivisionByZero):
        ctx.zero.inv()


def test_inverse_in_cyclotomic_field():
    ctx = FieldContext.cyclotomic(5)
    x = ctx.parse("1+zeta5")
    assert x * x.inv() == 1


def test_cyclotomic_order_is_bounded():
    assert cyclotomic_coeffs(4) == (1, 0, 1)
    with pytest.raises(OutOfRange):
        cyclotomic_coeffs(65)


def test_multiplicative_order():
    q = FieldContext.rational()
    assert multiplicative_order(q(-1)) == 2
    assert multiplicative_order(q(2)) == math.inf
    assert multiplicative_order(FieldContext.cyclotomic(9).zeta(9, 3)) == 3
    with pytest.raises(ZeroInput):
        multiplicative_order(q.zero)


def test_q_integers_vanish_at_the_order():
    z = FieldContext.cyclotomic(3).zeta()
    assert q_integer(3, z) == 0
    assert q_integer(2, z) == 1 + z


def test_q_binomial_at_roots_of_unity():
    q = FieldContext.rational()(-1)
    assert q_binomial(4, 2, q) == 2
    assert q_binomial(3, 1, q) == 1
    z = FieldContext.cyclotomic(3).zeta()
    assert q_binomial(3, 1, z) == 0
    with pytest.raises(OutOfRange):
        q_binomial(2, 3, q)


def test_scalar_json_is_readable_back():
    ctx = FieldContext.cyclotomic(7)
    x = ctx.parse("3/2*zeta7^3-zeta7")
    assert ctx.from_json(x.to_json()) == x
    with pytest.raises(ContextMismatch):
        FieldContext.cyclotomic(5).from_json(x.to_json())


def _binomial_at(n, k, q):
    return q_binomial(n, k, q) if 0 <= k <= n else q.ctx.zero


@pytest.mark.parametrize("ell", [2, 3, 4, 5, 6])
def test_q_pascal_rule_at_roots_of_unity(ell):
    q = FieldContext.rational()(-1) if ell == 2 else FieldContext.cyclotomic(ell).zeta()
    for n in range(1, 13):
        for k in range(n + 1):
            assert q_binomial(n, k, q) == _binomial_at(n - 1, k - 1, q) + q**k * _binomial_at(n - 1, k, q)


def test_lcm():
    assert lcm(4, 6) == 12
    assert lcm(3, 4) == 12
    assert lcm(1, 9) == 9
    assert lcm(6, 6) == 6


def _pascal_table(q, size):
    rows = [[q.ctx.one]]
    for n in range(1, size + 1):
        prev = rows[-1]
        rows.append([q.ctx.one] + [prev[k - 1] + q**k * prev[k] for k in range(1, n)] + [q.ctx.one])
    return rows


@pytest.mark.parametrize("ell", [2, 3, 4, 6])
def test_q_binomial_splits_at_the_order(ell):
    q = FieldContext.rational()(-1) if ell == 2 else FieldContext.cyclotomic(ell).zeta()
    table = _pascal_table(q, 12)
    for n in range(13):
        for m in range(n + 1):
            r_n, q_n = divmod(n, ell)[::-1]
            r_m, q_m = divmod(m, ell)[::-1]
            low = table[r_n][r_m] if r_n >= r_m else q.ctx.zero
            assert table[n][m] == low * math.comb(q_n, q_m)
            assert q_binomial(n, m, q) == table[n][m]


@pytest.mark.parametrize("value", [1, 2])
def test_q_binomial_never_vanishes_off_roots_of_unity(value):
    q = FieldContext.rational()(value)
    table = _pascal_table(q, 12)
    for n in range(13):
        for m in range(n + 1):
            got = q_binomial(n, m, q)
            assert got != 0
            assert got == table[n][m]
            if value == 1:
                assert got == math.comb(n, m)
