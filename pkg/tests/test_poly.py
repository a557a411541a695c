"""Polynomial ring tests: frozen oracles first, then randomized ring laws.

Oracle values in this file were computed by hand from the definitions and
are asserted as literals; the seeded batteries then exercise the same
operations on random inputs against independently computed references.
"""

import random
from fractions import Fraction

import pytest

from confal.poly import (
    AUX1,
    DEL,
    LAM,
    MU,
    MissingVariableError,
    Poly,
    ScheduleExhaustedError,
    Var,
    divmod_in_var,
    pit_points,
    pit_verify,
)


def rand_poly(rng, max_degree=3, nvars=3, max_num=6, max_den=4):
    """Random polynomial in the first ``nvars`` registry variables."""
    out = Poly.zero()
    gens = [DEL, LAM, MU, AUX1][:nvars]
    for _ in range(rng.randint(1, 6)):
        c = Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))
        term = Poly.const(c)
        for g in gens:
            term = term * g ** rng.randint(0, max_degree)
        out = out + term
    return out


# -- frozen oracles ---------------------------------------------------------


def test_constant_arithmetic_oracle():
    assert Poly.const(2) + Poly.const(3) == Poly.const(5)
    assert Poly.const(Fraction(1, 2)) * Poly.const(Fraction(2, 3)) == Poly.const(
        Fraction(1, 3)
    )
    assert Poly.const(7) - 7 == Poly.zero()
    assert Poly.zero().is_zero()
    assert not Poly.one().is_zero()


def test_binomial_square_oracle():
    # (D + x)^2 = D^2 + 2 D x + x^2, checked term by term.
    sq = (DEL + LAM) ** 2
    assert sq == DEL**2 + 2 * DEL * LAM + LAM**2
    assert sq.degree_in(Var.PARTIAL) == 2
    assert sq.degree_in(Var.MU) == 0
    assert sq.total_degree() == 2


def test_zero_polynomial_degrees():
    assert Poly.zero().degree_in(Var.PARTIAL) == -1
    assert Poly.zero().total_degree() == -1
    assert Poly.zero().constant() == 0


def test_canonical_string_rendering():
    assert str(Poly.zero()) == "0"
    assert str(DEL**2 - 2 * LAM + Poly.const(Fraction(1, 2))) == "D^2 - 2*x + 1/2"
    assert str(-DEL) == "-D"
    assert str(3 * DEL * LAM**2) == "3*D*x^2"
    assert str(Poly.const(Fraction(-3, 4))) == "-3/4"


def test_term_order_graded_lex():
    # total degree first, then D-heaviest: x^2 before D, D before x.
    p = LAM**2 + DEL + LAM
    exps = [exp for exp, _ in p.terms()]
    assert exps == [(0, 2, 0, 0, 0), (1, 0, 0, 0, 0), (0, 1, 0, 0, 0)]


def test_substitute_shift_oracle():
    # D -> D + x applied to D^2 gives D^2 + 2 D x + x^2.
    p = DEL**2
    assert p.substitute(Var.PARTIAL, DEL + LAM) == DEL**2 + 2 * DEL * LAM + LAM**2
    # substituting a variable that does not occur is the identity.
    assert p.substitute(Var.MU, Poly.const(99)) == p


def test_substitute_negation_oracle():
    # the skew-symmetry substitution x -> -x - D on (D + 2x).
    p = DEL + 2 * LAM
    assert p.substitute(Var.LAMBDA, -LAM - DEL) == -DEL - 2 * LAM


def test_coeff_in_is_factorial_scaled():
    # coefficient extraction bakes in k! (divided powers convention).
    p = 5 * LAM**3 * DEL + LAM * MU
    assert p.coeff_in(Var.LAMBDA, 3) == 30 * DEL
    assert p.coeff_in(Var.LAMBDA, 1) == MU
    assert p.coeff_in(Var.LAMBDA, 0) == Poly.zero()


def test_evaluate_oracle_and_missing_variable():
    p = DEL**2 - 2 * LAM + Poly.const(1)
    assert p.evaluate({Var.PARTIAL: 3, Var.LAMBDA: Fraction(1, 2)}) == 9
    with pytest.raises(MissingVariableError):
        p.evaluate({Var.PARTIAL: 3})


def test_as_constant_rejects_nonconstant():
    with pytest.raises(ValueError):
        (DEL + 1).as_constant()
    assert Poly.const(Fraction(3, 7)).as_constant() == Fraction(3, 7)


def test_pow_rejects_bad_exponents():
    with pytest.raises(ValueError):
        DEL ** (-1)
    with pytest.raises(ValueError):
        DEL ** Fraction(1, 2)  # type: ignore[operator]


def test_divmod_oracle():
    # (D^2 + 3D + 2) / (D + 1) = (D + 2, 0)
    f = DEL**2 + 3 * DEL + 2
    g = DEL + 1
    q, r = divmod_in_var(f, g, Var.PARTIAL)
    assert q == DEL + 2
    assert r.is_zero()
    # nontrivial remainder: D^2 / (D + 1) = (D - 1, 1)
    q, r = divmod_in_var(DEL**2, g, Var.PARTIAL)
    assert q == DEL - 1
    assert r == Poly.one()


def test_divmod_by_zero():
    with pytest.raises(ZeroDivisionError):
        divmod_in_var(DEL, Poly.zero(), Var.PARTIAL)


# -- seeded batteries --------------------------------------------------------


def test_ring_laws_random_battery():
    rng = random.Random(101)
    for _ in range(60):
        a = rand_poly(rng)
        b = rand_poly(rng)
        c = rand_poly(rng)
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + Poly.zero() == a
        assert a * Poly.one() == a
        assert a - a == Poly.zero()


def test_evaluation_is_ring_homomorphism():
    rng = random.Random(202)
    for _ in range(40):
        a = rand_poly(rng)
        b = rand_poly(rng)
        point = {
            Var.PARTIAL: Fraction(rng.randint(-5, 5), rng.randint(1, 3)),
            Var.LAMBDA: Fraction(rng.randint(-5, 5), rng.randint(1, 3)),
            Var.MU: Fraction(rng.randint(-5, 5), rng.randint(1, 3)),
        }
        assert (a + b).evaluate(point) == a.evaluate(point) + b.evaluate(point)
        assert (a * b).evaluate(point) == a.evaluate(point) * b.evaluate(point)


def test_substitution_commutes_with_evaluation():
    rng = random.Random(303)
    for _ in range(40):
        a = rand_poly(rng)
        rep = rand_poly(rng, max_degree=2)
        point = {
            Var.PARTIAL: Fraction(rng.randint(-4, 4)),
            Var.LAMBDA: Fraction(rng.randint(-4, 4)),
            Var.MU: Fraction(rng.randint(-4, 4)),
        }
        direct = a.substitute(Var.LAMBDA, rep).evaluate(point)
        shifted = dict(point)
        shifted[Var.LAMBDA] = rep.evaluate(point)
        assert direct == a.evaluate(shifted)


def test_divmod_reconstructs_dividend():
    rng = random.Random(404)
    for _ in range(40):
        f = rand_poly(rng)
        # divisor with constant leading coefficient in D.
        g = DEL ** rng.randint(1, 3) * rng.randint(1, 5) + rand_poly(
            rng, max_degree=0
        )
        if g.is_zero() or g.degree_in(Var.PARTIAL) < 1:
            continue
        q, r = divmod_in_var(f, g, Var.PARTIAL)
        assert q * g + r == f
        assert r.degree_in(Var.PARTIAL) < g.degree_in(Var.PARTIAL)


def test_hash_consistent_with_eq():
    rng = random.Random(505)
    for _ in range(30):
        a = rand_poly(rng)
        b = a + Poly.zero()
        assert a == b and hash(a) == hash(b)


# -- identity-testing schedule ------------------------------------------------


def test_pit_points_prefix_is_frozen():
    assert pit_points(4) == [
        Fraction(1),
        Fraction(-1),
        Fraction(2),
        Fraction(-2),
    ]
    assert pit_points(6)[4:] == [Fraction(1, 2), Fraction(-1, 2)]


def test_pit_points_exclusion_and_exhaustion():
    pts = pit_points(3, exclude={Fraction(1), Fraction(-2)})
    assert pts == [Fraction(-1), Fraction(2), Fraction(1, 2)]
    with pytest.raises(ScheduleExhaustedError):
        pit_points(1000)


def test_pit_verify_decides_correctly():
    # degree-2 family with roots off the schedule head: caught anyway,
    # because vanishing at 3 points would force the zero polynomial.
    assert not pit_verify(lambda t: (t - 7) * (t - 11), degree_bound=2)
    assert pit_verify(lambda t: Fraction(0), degree_bound=2)
    assert pit_verify(lambda t: (t - t) * LAM, degree_bound=1)
    with pytest.raises(ValueError):
        pit_verify(lambda t: Fraction(0), degree_bound=-1)


def test_pit_verify_random_nonzero_families():
    # any nonzero polynomial family of bounded degree must be detected.
    rng = random.Random(606)
    for _ in range(30):
        degree = rng.randint(0, 3)
        coeffs = [Fraction(rng.randint(-5, 5)) for _ in range(degree + 1)]
        if not any(coeffs):
            coeffs[0] = Fraction(1)

        def family(t, cs=tuple(coeffs)):
            return sum((c * t**i for i, c in enumerate(cs)), Fraction(0))

        assert not pit_verify(family, degree_bound=degree)
