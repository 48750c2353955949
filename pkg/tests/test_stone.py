"""Tests for Stone spectra, the limit of spectra, the Boolean reflection,
and Kochen-Specker detection."""

from __future__ import annotations

import pytest

from pbalg.core import (
    block_hypergraph,
    boolean_algebra,
    check_morphism,
    compose,
    enumerate_morphisms,
    from_orthomodular,
    is_isomorphic,
    mo_lattice,
    paste_blocks,
    trivial_algebra,
)
from pbalg.errors import DomainError
from pbalg.poset import boolean_subalgebras
from pbalg.stone import (
    boolean_reflection,
    coproduct_stays_kochen_specker,
    is_kochen_specker,
    limit_action,
    restriction_map,
    stone_limit,
    stone_limit_poset_oracle,
    stone_spectrum,
    two_valued_morphisms,
)


@pytest.fixture(scope="module")
def mo2():
    return from_orthomodular(mo_lattice(2))


@pytest.fixture(scope="module")
def ks18():
    from pbalg.corpus import cabello18_algebra
    return cabello18_algebra()


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------

def test_spectrum_point_counts():
    b1, b2, b3 = boolean_algebra(1), boolean_algebra(2), boolean_algebra(3)
    assert len(stone_spectrum(b1, frozenset({0, 1})).points) == 1
    assert len(stone_spectrum(b2, frozenset(range(4))).points) == 2
    assert len(stone_spectrum(b3, frozenset(range(8))).points) == 3


def test_spectrum_evaluation():
    b2 = boolean_algebra(2)
    sp = stone_spectrum(b2, frozenset(range(4)))
    for p in sp.points:
        assert sp.evaluate(b2, p, b2.one) == 1
        assert sp.evaluate(b2, p, b2.zero) == 0
        assert sp.evaluate(b2, p, p) == 1


def test_spectrum_rejects_non_boolean(mo2):
    with pytest.raises(DomainError):
        stone_spectrum(mo2, frozenset(range(6)))
    with pytest.raises(DomainError):
        stone_spectrum(mo2, frozenset({0, 1, 2}))


def test_restriction_merges_points():
    b3 = boolean_algebra(3)
    sub = frozenset({0, 0b001, 0b110, 0b111})
    rho = restriction_map(b3, sub, frozenset(range(8)))
    # atoms 2 and 4 both restrict to the coatom 110, atom 1 to 001
    assert rho[1] == 0b001
    assert rho[2] == rho[4] == 0b110


def test_restriction_functorial():
    b3 = boolean_algebra(3)
    top = frozenset(range(8))
    mid = frozenset({0, 0b001, 0b110, 0b111})
    bot = frozenset({0, 0b111})
    r_tm = restriction_map(b3, mid, top)
    r_mb = restriction_map(b3, bot, mid)
    r_tb = restriction_map(b3, bot, top)
    for q in r_tm:
        assert r_tb[q] == r_mb[r_tm[q]]


# ---------------------------------------------------------------------------
# the limit of spectra
# ---------------------------------------------------------------------------

def test_limit_of_boolean_is_spectrum():
    for k in (1, 2, 3, 4):
        A = boolean_algebra(k)
        fams = stone_limit(A)
        points = stone_spectrum(A, frozenset(range(A.n))).points
        assert len(fams) == len(points) == k
        # the family choice at the top member is exactly its atom, and the
        # valuation agrees with atom evaluation
        top = frozenset(range(A.n))
        chosen = {fam.point_at(top) for fam in fams}
        assert chosen == set(points)
        for fam in fams:
            p = fam.point_at(top)
            assert all(fam.valuation[x] == (1 if A.meet[p][x] == p else 0)
                       for x in A.elements())


def test_limit_of_paper_algebra_has_four_points(mo2):
    fams = stone_limit(mo2)
    assert len(fams) == 4


def test_limit_matches_two_valued_morphisms(mo2):
    for A in [mo2, boolean_algebra(2), boolean_algebra(3),
              from_orthomodular(mo_lattice(3)),
              paste_blocks(block_hypergraph([["a", "b", "c"], ["c", "d", "e"]]))]:
        fams = stone_limit(A)
        homs = enumerate_morphisms(A, boolean_algebra(1))
        assert sorted(f.valuation for f in fams) == sorted(h.map for h in homs)
        wrapped = two_valued_morphisms(A)
        assert all(check_morphism(w).ok for w in wrapped)
        assert sorted(w.map for w in wrapped) == sorted(h.map for h in homs)


def test_limit_matches_poset_oracle(mo2):
    for A in [mo2, boolean_algebra(3),
              paste_blocks(block_hypergraph([["a", "b", "c"], ["c", "d", "e"]]))]:
        fams = stone_limit(A)
        oracle = stone_limit_poset_oracle(A)
        assert len(fams) == len(oracle)
        as_sets = {fam.choice for fam in fams}
        oracle_sets = {tuple(sorted(ch, key=lambda kv: tuple(sorted(kv[0]))))
                       for ch in oracle}
        normalized = {tuple(sorted(ch, key=lambda kv: tuple(sorted(kv[0]))))
                      for ch in as_sets}
        assert normalized == oracle_sets


def test_limit_families_are_restriction_compatible(mo2):
    P = boolean_subalgebras(mo2)
    for fam in stone_limit(mo2):
        for s in P.members:
            for t in P.members:
                if s < t:
                    rho = restriction_map(mo2, s, t)
                    assert rho[fam.point_at(t)] == fam.point_at(s)


def test_limit_of_terminal_is_empty():
    assert stone_limit(trivial_algebra()) == ()


# ---------------------------------------------------------------------------
# Boolean reflection
# ---------------------------------------------------------------------------

def test_reflection_of_boolean_is_isomorphism():
    for k in (1, 2, 3):
        A = boolean_algebra(k)
        refl = boolean_reflection(A)
        assert is_isomorphic(refl.reflection, A)
        assert sorted(refl.eta.map) == sorted(range(A.n))  # bijective unit


def test_reflection_of_paper_algebra_is_sixteen(mo2):
    refl = boolean_reflection(mo2)
    assert refl.reflection.n == 16
    assert check_morphism(refl.eta).ok
    # eta is injective: the paper algebra embeds into a Boolean algebra
    assert len(set(refl.eta.map)) == mo2.n


def test_reflection_couniversal(mo2):
    # every morphism into a small Boolean algebra factors uniquely through eta
    refl = boolean_reflection(mo2)
    L, eta = refl.reflection, refl.eta
    for B in [boolean_algebra(1), boolean_algebra(2)]:
        homs_L = enumerate_morphisms(L, B)
        for f in enumerate_morphisms(mo2, B):
            factoring = [g for g in homs_L if compose(g, eta).map == f.map]
            assert len(factoring) == 1


def test_reflection_of_kochen_specker_is_terminal(ks18):
    refl = boolean_reflection(ks18)
    assert refl.reflection.n == 1


# ---------------------------------------------------------------------------
# Kochen-Specker detection
# ---------------------------------------------------------------------------

def test_paper_algebra_not_kochen_specker(mo2):
    assert not is_kochen_specker(mo2)


def test_boolean_never_kochen_specker():
    for k in (1, 2, 3, 4):
        assert not is_kochen_specker(boolean_algebra(k))


def test_cabello_algebra_is_kochen_specker(ks18):
    assert is_kochen_specker(ks18)
    assert stone_limit(ks18) == ()


def test_terminal_is_kochen_specker_degenerate():
    # the one-element carrier has no two-valued states either
    assert is_kochen_specker(trivial_algebra())


def test_coproduct_ideal(mo2, ks18):
    assert coproduct_stays_kochen_specker(ks18, boolean_algebra(2))
    assert coproduct_stays_kochen_specker(ks18, mo2)
    with pytest.raises(DomainError):
        coproduct_stays_kochen_specker(mo2, boolean_algebra(2))


# ---------------------------------------------------------------------------
# contravariant functoriality
# ---------------------------------------------------------------------------

def test_limit_action_identity(mo2):
    from pbalg.core import identity_morphism
    act = limit_action(identity_morphism(mo2))
    assert all(k == v for k, v in act.items())


def test_limit_action_contravariant_composition(mo2):
    b2 = boolean_algebra(2)
    two = boolean_algebra(1)
    f = enumerate_morphisms(mo2, b2)[1]
    g = enumerate_morphisms(b2, two)[0]
    act_f = limit_action(f)        # K(b2) -> K(mo2)
    act_g = limit_action(g)        # K(two) -> K(b2)
    act_gf = limit_action(compose(g, f))
    for k_val in act_gf:
        assert act_gf[k_val] == act_f[act_g[k_val]]
