"""Tests for mode expansion, finite windows, subquotients, and their structure.

The mode-bracket oracles below were computed by hand from the expansion
formula before the builder existed.  The builder also cross-checks itself:
route one (k-th products fed through the general mode formula) must agree
with route two (the closed form) on every pair, or construction aborts.
"""

import random
from fractions import Fraction

import pytest

from confal.annihilation import (
    IDEAL_CORNER_HOOK,
    IDEAL_SCALING_COMPLEMENT,
    IDEAL_TOP_INDEX_SLICE,
    IDEAL_TOP_MODE_SLICE,
    T_LABEL,
    FiniteLieAlgebra,
    ResonanceCase,
    annihilation_subquotient,
    build_annihilation,
    characters,
    check_central,
    check_lie,
    ideal_and_nilpotency,
    k_products,
    label_J,
    label_L,
    lie_bracket,
    make_block_pq_window,
    resonance_analysis,
    trace_certificate,
)
from confal.conformal import TruncationPolicy, UnsupportedAlgebraError, make_block, make_bn
from confal.linalg import RatMatrix
from confal.poly import DEL, Poly, pit_points

TRUNC = TruncationPolicy.TRUNCATE_TO_ZERO


def window(p, idx=4, mode=4, extended=False):
    return build_annihilation(make_block(p, idx, TRUNC), idx, mode, extended)


# -- k-th products ----------------------------------------------------------------


def test_k_products_oracle():
    # [L_1 L_1] = (2D + 4x) L_2 at p = 1: 0th product 2D L_2, 1st product 4 L_2.
    alg = make_block(1, 3, TRUNC)
    assert k_products(alg, 1, 1) == [(0, {2: 2 * DEL}), (1, {2: Poly.const(4)})]
    assert k_products(alg, 3, 3) == []  # truncated to zero


# -- mode expansion oracles ---------------------------------------------------------


def test_mode_bracket_closed_form_oracle():
    # [L(i,m), L(j,n)] = ((j+p)(m+1) - (i+p)(n+1)) L(i+j, m+n), frozen at p=1.
    ann = window(1)
    assert ann.bracket_basis(label_L(1, 0), label_L(0, 0)) == {
        label_L(1, 0): Fraction(-1)
    }
    assert ann.bracket_basis(label_L(0, -1), label_L(0, 1)) == {
        label_L(0, 0): Fraction(-2)
    }
    assert ann.bracket_basis(label_L(1, 1), label_L(1, 1)) == {}
    assert ann.bracket_basis(label_L(0, 2), label_L(1, 0)) == {
        label_L(1, 2): Fraction(5)
    }


def test_mode_bracket_oracle_fractional_parameter():
    ann = window(Fraction(1, 2))
    # ((0 + 1/2)(1) - (1 + 1/2)(1)) = -1 at (i,m,j,n) = (1,0,0,0).
    assert ann.bracket_basis(label_L(1, 0), label_L(0, 0)) == {
        label_L(1, 0): Fraction(-1)
    }
    # ((1 + 1/2)(0) - (0 + 1/2)(2)) = -1 at (0,-1,1,1).
    assert ann.bracket_basis(label_L(0, -1), label_L(1, 1)) == {
        label_L(1, 0): Fraction(-1)
    }


def test_dual_route_agreement_across_schedule():
    # construction raises on any route disagreement, so building is the test.
    for p in pit_points(4) + [Fraction(3, 7)]:
        for idx, mode in ((2, 2), (4, 4), (6, 6)):
            ann = build_annihilation(make_block(p, idx, TRUNC), idx, mode)
            assert len(ann.basis) == (idx + 1) * (mode + 2)


def test_bn_window_expansion():
    ann = build_annihilation(make_bn(3), 3, 2)
    assert ann.param_p == Fraction(-3)
    assert check_lie(ann).ok


def test_window_validation():
    alg = make_block(1, 2, TRUNC)
    with pytest.raises(ValueError):
        build_annihilation(alg, 3, 3)  # index window exceeds the algebra window
    from confal.conformal import make_virasoro

    with pytest.raises(UnsupportedAlgebraError):
        build_annihilation(make_virasoro(), 0, 2)


def test_truncated_pairs_are_recorded():
    ann = window(1, idx=2, mode=2)
    truncated = ann.meta["truncated_pairs"]
    # the top corner pair escapes in both index and mode.
    assert (label_L(2, 2), label_L(2, 2)) in truncated or not ann.bracket_basis(
        label_L(2, 2), label_L(2, 2)
    )
    # the pair whose product would land at mode 3 was dropped and recorded.
    assert (label_L(0, 1), label_L(0, 2)) in truncated


# -- Lie axioms on windows -----------------------------------------------------------


def test_window_lie_axioms_with_boundary_exclusion():
    for p in pit_points(4) + [Fraction(3, 7)]:
        rep = check_lie(window(p))
        assert rep.ok, f"p={p}: {rep.jacobi_failures[:1]}"
        assert not rep.antisymmetry_failures  # truncation keeps antisymmetry
        assert rep.triples_excluded > 0  # boundary honesty, not silence
        assert rep.triples_checked > 0


def test_subquotient_lie_axioms_fully_checked():
    for p, k, N in ((Fraction(1), 2, 3), (Fraction(1, 2), 2, 4),
                    (Fraction(-1), 2, 2), (Fraction(3, 7), 2, 4),
                    (Fraction(2), 4, 4)):
        rep = check_lie(annihilation_subquotient(p, k, N))
        assert rep.ok
        assert rep.triples_excluded == 0
        b = (k + 1) * (N + 1)
        assert rep.triples_checked == b * (b + 1) * (b + 2) // 6


def test_sign_flip_is_caught_and_reported():
    G = annihilation_subquotient(1, 2, 3)
    table = dict(G.table)
    key = (label_J(0, 0), label_J(0, 1))
    table[key] = {t: -c for t, c in table[key].items()}
    bad = FiniteLieAlgebra(
        name="tampered", basis=G.basis, table=table, param_p=G.param_p, meta=G.meta
    )
    rep = check_lie(bad)
    assert not rep.ok
    assert any(
        {x, y} == {label_J(0, 0), label_J(0, 1)}
        for x, y, _ in rep.antisymmetry_failures
    )
    assert rep.jacobi_failures  # the triple-level check also names witnesses


# -- extended algebra and centrality ---------------------------------------------------


def test_extended_mode_lowering_oracle():
    ext = window(1, extended=True)
    # [T, L(2,1)] = -(1+1) L(2,0) = -2 L(2,0)
    assert ext.bracket_basis(T_LABEL, label_L(2, 1)) == {label_L(2, 0): Fraction(-2)}
    assert ext.bracket_basis(label_L(2, 1), T_LABEL) == {label_L(2, 0): Fraction(2)}
    # mode -1 elements are killed: -(m+1) vanishes at m = -1.
    assert ext.bracket_basis(T_LABEL, label_L(0, -1)) == {}


def test_centrality_of_adjusted_translation():
    for p in (Fraction(1), Fraction(-1), Fraction(-2)):
        ext = window(p, extended=True)
        rep = check_central(ext)
        assert rep.ok
        assert rep.excluded == []
        assert rep.checked == len(ext.basis)
        assert rep.failures == []


def test_centrality_requires_extended():
    with pytest.raises(UnsupportedAlgebraError):
        check_central(window(1))


def test_extended_window_lie_axioms():
    rep = check_lie(window(1, extended=True))
    assert rep.ok


# -- two-parameter window family ---------------------------------------------------------


def test_pq_window_at_q_one_matches_mode_expansion():
    p = Fraction(2)
    ann = window(p, idx=3, mode=3)
    pq = make_block_pq_window(p, 1, (0, 3), (-1, 3))
    assert set(pq.basis) == set(ann.basis)
    for x in pq.basis:
        for y in pq.basis:
            assert pq.bracket_basis(x, y) == ann.bracket_basis(x, y), (x, y)


def test_pq_window_general_q_oracle():
    # [L(0,0), L(0,1)] = ((0+p)(0+q) - (0+p)(1+q)) = -p at any q.
    pq = make_block_pq_window(Fraction(3), Fraction(5), (0, 1), (0, 2))
    assert pq.bracket_basis(label_L(0, 0), label_L(0, 1)) == {
        label_L(0, 1): Fraction(-3)
    }
    with pytest.raises(ValueError):
        make_block_pq_window(1, 1, (2, 1), (0, 1))


# -- subquotient resonance taxonomy --------------------------------------------------------


def test_resonance_case_assignments():
    expected = {
        (Fraction(1), 2, 3): (
            ResonanceCase.RESONANCE_BELOW_MODE_CAP,
            IDEAL_TOP_MODE_SLICE,
            [(1, 1), (2, 2)],
        ),
        (Fraction(1, 2), 2, 4): (
            ResonanceCase.RESONANCE_AT_CORNER,
            IDEAL_CORNER_HOOK,
            [(1, 2), (2, 4)],
        ),
        (Fraction(-1), 2, 2): (
            ResonanceCase.P_NOT_POSITIVE_RATIONAL,
            IDEAL_SCALING_COMPLEMENT,
            [],
        ),
        (Fraction(3, 7), 2, 4): (
            ResonanceCase.NO_RESONANCE,
            IDEAL_SCALING_COMPLEMENT,
            [],
        ),
        (Fraction(2), 3, 1): (
            ResonanceCase.RESONANCE_BELOW_INDEX_CAP,
            IDEAL_TOP_INDEX_SLICE,
            [(2, 1)],
        ),
    }
    for (p, k, N), (case, ideal_name, resonances) in expected.items():
        rr = resonance_analysis(annihilation_subquotient(p, k, N))
        assert rr.case is case, (p, k, N)
        assert rr.ideal_name == ideal_name
        assert rr.resonances == resonances


def test_scaling_eigenvalues_tablewise():
    # ad J(0,0) acts on J(i,m) with eigenvalue i - p m, read off the table.
    for p in (Fraction(1), Fraction(1, 2), Fraction(-1)):
        G = annihilation_subquotient(p, 2, 3)
        j00 = label_J(0, 0)
        for lab, (i, m) in G.meta["coords"].items():
            value = G.bracket_basis(j00, lab)
            eig = Fraction(i) - p * m
            if lab == j00 or eig == 0:
                assert value == {}
            else:
                assert value == {lab: eig}


def test_corner_case_details():
    rr = resonance_analysis(annihilation_subquotient(Fraction(1, 2), 2, 4))
    assert rr.top_resonance == (2, 4)
    assert rr.corner_coefficient == Fraction(-12)
    assert rr.corner_coefficient < 0
    # the hook minus the corner has exactly one nonzero internal bracket,
    # landing on the corner itself.
    assert len(rr.corner_internal_brackets) == 1
    x, y, value = rr.corner_internal_brackets[0]
    assert {x, y} == {label_J(2, 0), label_J(0, 4)}
    assert value == {label_J(2, 4): Fraction(-12)}


def test_resonance_needs_subquotient():
    with pytest.raises(UnsupportedAlgebraError):
        resonance_analysis(window(1))


# -- ideal structure ---------------------------------------------------------------


def test_distinguished_ideals_have_advertised_structure():
    # top slices are abelian ideals; the scaling complement and the corner
    # hook are nilpotent, the hook of class exactly two.
    rr = resonance_analysis(annihilation_subquotient(Fraction(1), 2, 3))
    rep = ideal_and_nilpotency(annihilation_subquotient(Fraction(1), 2, 3), rr.ideal)
    assert rep.is_ideal and rep.abelian

    rr = resonance_analysis(annihilation_subquotient(Fraction(2), 3, 1))
    rep = ideal_and_nilpotency(annihilation_subquotient(Fraction(2), 3, 1), rr.ideal)
    assert rep.is_ideal and rep.abelian

    G = annihilation_subquotient(Fraction(1, 2), 2, 4)
    rr = resonance_analysis(G)
    rep = ideal_and_nilpotency(G, rr.ideal)
    assert rep.is_ideal and rep.nilpotent and not rep.abelian
    assert rep.nilpotency_class == 2
    assert rep.series_dims == [7, 1]

    for p, k, N in ((Fraction(-1), 2, 2), (Fraction(3, 7), 2, 4)):
        G = annihilation_subquotient(p, k, N)
        rr = resonance_analysis(G)
        rep = ideal_and_nilpotency(G, rr.ideal)
        assert rep.is_ideal and rep.nilpotent


def test_non_ideal_span_reports_witness():
    G = annihilation_subquotient(1, 2, 3)
    rep = ideal_and_nilpotency(G, [label_J(0, 0)])
    assert not rep.is_ideal
    assert rep.ideal_witness is not None
    g, s, value = rep.ideal_witness
    assert s == label_J(0, 0)
    assert any(target != label_J(0, 0) for target in value)


def test_empty_span_and_unknown_labels():
    G = annihilation_subquotient(1, 1, 1)
    rep = ideal_and_nilpotency(G, [])
    assert rep.is_ideal and rep.abelian and rep.nilpotency_class == 0
    with pytest.raises(ValueError):
        ideal_and_nilpotency(G, ["J(9,9)"])


# -- trace certificates ------------------------------------------------------------


def test_trace_certificate_forces_zero():
    rng = random.Random(808)

    def rand_mat(n):
        return RatMatrix.from_rows(
            [
                [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)]
                for _ in range(n)
            ]
        )

    for n in (2, 3):
        for _ in range(10):
            A, B = rand_mat(n), rand_mat(n)
            verdict = trace_certificate(A, B, Fraction(-3), Fraction(2))
            assert verdict.commutator_trace == 0
            assert verdict.forced_zero
            ok = trace_certificate(A, B, Fraction(-3), Fraction(0))
            assert ok.consistent and not ok.forced_zero


def test_trace_certificate_validation():
    A = RatMatrix.identity(2)
    with pytest.raises(ValueError):
        trace_certificate(A, A, 0, 1)
    with pytest.raises(ValueError):
        trace_certificate(A, RatMatrix.identity(3), 1, 1)


# -- characters ---------------------------------------------------------------------


def test_characters_of_smallest_subquotient():
    ch = characters(annihilation_subquotient(1, 1, 1))
    assert ch.character_dim == 1
    assert ch.verified
    assert ch.dimension == 4
    assert ch.dimension == ch.derived_rank + ch.character_dim


def test_characters_vanish_on_brackets():
    G = annihilation_subquotient(Fraction(1, 2), 2, 2)
    ch = characters(G)
    assert ch.verified
    for phi in ch.characters:
        for x in G.basis:
            for y in G.basis:
                value = G.bracket_basis(x, y)
                assert sum(
                    (phi.get(lab, Fraction(0)) * c for lab, c in value.items()),
                    Fraction(0),
                ) == 0


def test_lie_bracket_is_bilinear():
    rng = random.Random(909)
    G = annihilation_subquotient(1, 2, 2)
    labs = list(G.basis)
    for _ in range(20):
        u = {labs[rng.randrange(len(labs))]: Fraction(rng.randint(-4, 4)) for _ in range(2)}
        v = {labs[rng.randrange(len(labs))]: Fraction(rng.randint(-4, 4)) for _ in range(2)}
        w = {labs[rng.randrange(len(labs))]: Fraction(rng.randint(-4, 4)) for _ in range(2)}
        from confal.annihilation import comb_add

        left = lie_bracket(G, comb_add(u, v), w)
        right = comb_add(lie_bracket(G, u, w), lie_bracket(G, v, w))
        assert left == right
