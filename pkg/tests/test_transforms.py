import pytest

from sphmod.coeff import ONE, U, CaseConfig
from sphmod.hecke import TranslationOperator, WrongCase
from sphmod.transforms import a_poly, b_poly, factorization_check, recursion_check, step_factors, x_squared

uH, A = CaseConfig("uH"), CaseConfig("A")
T = TranslationOperator.t


def test_rank_one_polynomials():
    assert b_poly(uH, 1) == T((0,)) - T((1,), 1)
    assert a_poly(uH, 1) == T((0,)) - T((2,), 1)
    assert b_poly(A, 1) == T((0,)) - T((1,), 1)


def test_rank_one_factorization_uh():
    b = b_poly(uH, 1)
    both = b * b.subs_x(-ONE)
    assert both == T((0,)) - T((2,), 2)
    assert x_squared(a_poly(uH, 1)) == both


@pytest.mark.parametrize("cfg", [uH, A], ids=str)
@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_identities(cfg, r):
    f = factorization_check(cfg, r)
    g = recursion_check(cfg, r)
    assert f.ok, f.results
    assert g.ok, g.results
    assert set(g.results) == {"A recursion", "B recursion", "factor identity"}


@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_factor_identity_a_explicit(r):
    n = r + 1
    q = U ** 2
    t1 = lambda c: TranslationOperator.t_i(n, n, 1, 1, c)
    t2 = lambda c: TranslationOperator.t_i(n, n, 2, 2, c)
    one = TranslationOperator.identity(n)
    lhs = (one - t1(U ** (-2 * r + 1))) * (one - t1(U ** (-2 * r - 1)))
    rhs = t2(q ** (-2 * r)) - t1(q ** -r * (U + U ** -1)) + one
    assert lhs == rhs == step_factors(A, r)["A"]


@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_factor_identity_uh_needs_x_squared(r):
    n = r + 1
    t1 = lambda c: TranslationOperator.t_i(n, n, 1, 1, c)
    one = TranslationOperator.identity(n)
    lhs = (one + t1(U ** -r)) * (one - t1(U ** -r))
    in_x_squared = one - TranslationOperator.t_i(n, n, 2, 2, U ** (-2 * r))
    in_x = one - TranslationOperator.t_i(n, n, 2, 1, U ** (-2 * r))
    assert lhs == in_x_squared
    assert lhs != in_x


def test_wrong_case():
    with pytest.raises(WrongCase):
        a_poly(CaseConfig("S", 1), 2)
    with pytest.raises(WrongCase):
        factorization_check(CaseConfig("S", -1), 1)


def test_failure_is_detected():
    rep = factorization_check(uH, 2)
    rep.record("perturbed", a_poly(uH, 2), a_poly(uH, 2) + T((0, 0), 1))
    assert not rep.ok
