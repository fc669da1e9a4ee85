import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphmod.coeff import CaseConfig
from sphmod.hecke import orbits_in_window, t_star_direct
from sphmod.oracles.fields import gaussian_binomial
from sphmod.oracles.padic import (
    GramLattice,
    PrecisionLoss,
    TruncatedRing,
    case_config_for,
    congruent,
    enumerate_sublattices,
    jordan_split,
    lattice_of_orbit,
    parse_padic_gram,
    specialise,
    verify_main_lemma,
)
from sphmod.typmon import OrbitType


def lattice(case, p, text, N=8):
    cfg = case_config_for(case, p)
    R = TruncatedRing(p, N, 2 if case == "uH" else 1)
    return GramLattice(cfg, R, parse_padic_gram(text, R))


def test_ring_arithmetic():
    R = TruncatedRing(3, 6, 2)
    x, y = R.elem(4, 7), R.elem(9, 2)
    assert R.mul(x, y) == R.mul(y, x)
    assert R.conj(R.conj(x)) == x
    assert R.conj(R.mul(x, y)) == R.mul(R.conj(x), R.conj(y))
    assert R.mul(x, R.unit_inv(x)) == R.one
    assert R.val(R.elem(18, 9)) == 2
    assert R.val(R.zero) == 6
    with pytest.raises(ZeroDivisionError):
        R.unit_inv(R.elem(3, 3))
    with pytest.raises(ValueError):
        TruncatedRing(2, 4, 2)


def test_jordan_examples():
    assert jordan_split(lattice("S", 3, "1,0;0,3")) == OrbitType({0: 1, 1: 1}, {0: 1, 1: 1})
    assert jordan_split(lattice("S", 3, "2,0;0,1")) == OrbitType({0: 2}, {0: -1})
    assert jordan_split(lattice("A", 3, "0,3;-3,0")) == OrbitType({1: 1})
    # minimal valuation off the diagonal
    assert jordan_split(lattice("S", 3, "0,1;1,0")) == OrbitType({0: 2}, {0: -1})
    assert jordan_split(lattice("uH", 3, "0,x;-x,0")) == OrbitType({0: 2})


def test_symmetry_is_validated():
    with pytest.raises(ValueError):
        lattice("S", 3, "1,1;0,1")
    with pytest.raises(ValueError):
        lattice("A", 3, "0,1;1,0")
    with pytest.raises(ValueError):
        lattice("uH", 3, "1,x;x,1")


def test_precision_guard():
    with pytest.raises(PrecisionLoss):
        jordan_split(lattice("S", 3, "1,0;0,729", N=8))
    assert jordan_split(lattice("S", 3, "1,0;0,243", N=10)) == OrbitType({0: 1, 5: 1})


def test_sublattice_examples():
    gl = lattice("S", 3, "1,0;0,1")
    hist = enumerate_sublattices(gl, 1)
    assert sum(hist.values()) == 4
    expected = specialise(t_star_direct(jordan_split(gl), 1, gl.cfg), gl.cfg, 3)
    assert dict(hist) == {o: c for o, c in expected.items() if c}
    for case, text in [("S", "1,0;0,3"), ("A", "0,1;-1,0"), ("uH", "1")]:
        gl = lattice(case, 3, text)
        assert dict(enumerate_sublattices(gl, 0)) == {jordan_split(gl): 1}
    gl = lattice("uH", 3, "1")
    assert dict(enumerate_sublattices(gl, 1)) == {OrbitType({2: 1}): 1}


@pytest.mark.parametrize(
    "case,text",
    [("S", "1,0,0;0,3,0;0,0,9"), ("A", "0,1,0,0;-1,0,0,0;0,0,0,3;0,0,-3,0"), ("uH", "1,0;0,3")],
)
def test_main_lemma_examples(case, text):
    rep = verify_main_lemma(lattice(case, 3, text))
    assert rep.ok, (rep.mismatches[:2], rep.count_mismatches[:2])


@pytest.mark.parametrize("case,p", [("S", 3), ("S", 5), ("A", 3), ("uH", 3)])
def test_histogram_totals_are_gaussian_binomials(case, p):
    cfg = case_config_for(case, p)
    o = next(iter(orbits_in_window(cfg, 2, 0, 1)))
    gl = lattice_of_orbit(o, cfg, p)
    for k in range(gl.n + 1):
        assert sum(enumerate_sublattices(gl, k).values()) == gaussian_binomial(gl.n, k, gl.ring.F.q)


@pytest.mark.parametrize("case,p", [("S", 3), ("S", 5), ("A", 3), ("uH", 3)])
def test_orbit_lattices_round_trip(case, p):
    cfg = case_config_for(case, p)
    for r in (1, 2, 3):
        for o in orbits_in_window(cfg, r, 0, 3):
            assert jordan_split(lattice_of_orbit(o, cfg, p)) == o


def _random_unimodular(R, n, rng):
    """A product of elementary row operations and unit rescalings."""
    B = [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i = rng.randrange(n)
        if n > 1:
            j = rng.choice([x for x in range(n) if x != i])
            c = R.elem(rng.randrange(R.mod), rng.randrange(R.mod) if R.d == 2 else 0)
            B[i] = [R.add(a, R.mul(c, b)) for a, b in zip(B[i], B[j])]
        unit = R.elem(rng.choice([1, 2]) + R.p * rng.randrange(5))
        B[i] = [R.mul(unit, a) for a in B[i]]
    return B


@given(st.sampled_from([("S", 3), ("S", 5), ("uH", 3), ("A", 3)]), st.integers(0, 10 ** 6))
def test_type_is_a_congruence_invariant(point, seed):
    case, p = point
    cfg = case_config_for(case, p)
    rng = random.Random(seed)
    orbs = list(orbits_in_window(cfg, 2, 0, 2))
    o = rng.choice(orbs)
    gl = lattice_of_orbit(o, cfg, p)
    B = _random_unimodular(gl.ring, gl.n, rng)
    gl2 = GramLattice(cfg, gl.ring, congruent(gl, B))
    assert jordan_split(gl2) == o
