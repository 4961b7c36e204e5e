from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_effects.errors import (
    BrokenTransitivity,
    GroundSetTooLarge,
    MissingReflexive,
    NotAntisymmetric,
    NotMonotone,
    PropositionViolation,
    SpaceTooLarge,
)
from lattice_effects.order import (
    FinitePreorder,
    MonotoneMap,
    PowersetLattice,
    antichain,
    chain,
    hasse_cover,
    is_finitely_cocomplete,
    join,
    map_space,
    meet,
    poset_from_generators,
    powerset_lattice,
    preorder_from_generators,
    reflexive_transitive_closure_of_covers,
    validate_poset,
    validate_preorder,
)
from lattice_effects.sampling import random_lattice, random_poset

from .oracles import brute_covers, brute_join, brute_meet, leq_matrix


def bowtie(with_bottom=False):
    elems = ["a", "b", "c", "d"] + (["0"] if with_bottom else [])
    pairs = [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]
    if with_bottom:
        pairs += [("0", "a"), ("0", "b")]
    return poset_from_generators(elems, pairs)


class TestValidation:
    def test_two_chain_is_valid(self):
        p = validate_poset([0, 1], [(0, 0), (1, 1), (0, 1)])
        assert p.leq(0, 1) and not p.leq(1, 0)

    def test_missing_transitive_pair_is_reported(self):
        pairs = [(i, i) for i in range(3)] + [(0, 1), (1, 2)]
        with pytest.raises(BrokenTransitivity) as exc:
            validate_preorder([0, 1, 2], pairs)
        assert exc.value.broken_transitivity == [(0, 1, 2)]

    def test_missing_reflexive_lists_every_element(self):
        with pytest.raises(MissingReflexive) as exc:
            validate_preorder(["x", "y", "z"], [("x", "x")])
        assert exc.value.missing_reflexive == [1, 2]

    def test_diamond_inclusion_is_valid(self):
        subs = [(), ("A",), ("B",), ("A", "B")]
        pairs = [(s, t) for s in subs for t in subs if set(s) <= set(t)]
        p = validate_poset(subs, pairs)
        assert p.n == 4 and p.is_lattice()

    def test_matrix_input(self):
        p = validate_preorder(["a", "b"], matrix=[[1, 1], [0, 1]])
        assert p.leq(0, 1)

    def test_cycle_accepted_as_preorder_but_not_poset(self):
        p = preorder_from_generators(["a", "b"], [("a", "b"), ("b", "a")])
        assert isinstance(p, FinitePreorder)
        with pytest.raises(NotAntisymmetric):
            p.as_poset()


class TestJoinMeet:
    def test_powerset_join_meet(self):
        p = powerset_lattice("AB")
        a, b = p.index(["A"]), p.index(["B"])
        assert p.label(join(p, a, b)) == ("A", "B")
        assert p.label(meet(p, a, b)) == ()

    def test_antichain_has_no_join_or_meet(self):
        p = antichain(2)
        assert join(p, 0, 1) is None and meet(p, 0, 1) is None

    def test_bowtie_join_absent(self):
        p = bowtie()
        assert join(p, p.index("a"), p.index("b")) is None

    def test_diamond_meet_of_comparable_pair(self):
        p = powerset_lattice("AB")
        assert meet(p, p.index(["A"]), p.index(["A", "B"])) == p.index(["A"])

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32), st.integers(1, 9))
    def test_join_meet_match_brute_force(self, seed, n):
        p = random_poset(seed, n)
        m = leq_matrix(p)
        for x in range(n):
            for y in range(n):
                assert p.join(x, y) == brute_join(m, x, y)
                assert p.meet(x, y) == brute_meet(m, x, y)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32))
    def test_join_laws(self, seed):
        p = random_lattice(seed)
        for x in range(p.n):
            assert p.join(x, x) == x
            for y in range(p.n):
                assert p.join(x, y) == p.join(y, x)
                assert (p.join(x, y) == y) == p.leq(x, y)
                for z in range(p.n):
                    assert p.join(p.join(x, y), z) == p.join(x, p.join(y, z))


class TestCocompleteness:
    def test_powerset(self):
        assert is_finitely_cocomplete(powerset_lattice("ABC"))

    def test_antichain(self):
        assert not is_finitely_cocomplete(antichain(2))

    def test_bowtie_with_bottom(self):
        assert not is_finitely_cocomplete(bowtie(with_bottom=True))

    def test_cocomplete_preorder_must_be_antisymmetric(self):
        # two mutually related tops above a bottom would be cocomplete only if merged
        p = preorder_from_generators(["0", "a", "b"], [("0", "a"), ("a", "b"), ("b", "a")])
        assert not p.is_antisymmetric()
        try:
            result = p.is_finitely_cocomplete()
        except PropositionViolation:
            pytest.fail("join uniqueness should fail before antisymmetry is asserted")
        assert result is False

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32), st.integers(1, 8))
    def test_cocomplete_implies_antisymmetric(self, seed, n):
        p = random_poset(seed, n)
        if p.is_finitely_cocomplete():
            assert p.is_antisymmetric()


class TestPowerset:
    def test_sizes(self):
        assert powerset_lattice("A").n == 2
        assert powerset_lattice("AB").n == 4
        assert len(hasse_cover(powerset_lattice("ABC"))) == 12

    def test_cap(self):
        with pytest.raises(GroundSetTooLarge):
            PowersetLattice(range(21))

    def test_dual_swaps_join_and_meet(self):
        d = powerset_lattice("ABC").dual()
        assert d.join(0b011, 0b101) == 0b001
        assert d.bottom() == 0b111


class TestHasse:
    def test_chain(self):
        assert hasse_cover(chain(3)) == [(0, 1), (1, 2)]

    def test_diamond(self):
        assert len(hasse_cover(powerset_lattice("AB"))) == 4

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32), st.integers(1, 9))
    def test_matches_brute_force_and_rebuilds_order(self, seed, n):
        p = random_poset(seed, n)
        covers = hasse_cover(p)
        assert covers == brute_covers(leq_matrix(p))
        rows = reflexive_transitive_closure_of_covers(n, covers)
        assert all(rows[i] == p.up(i) for i in range(n))


class TestMapSpace:
    def test_chain_to_chain(self):
        ms = map_space(chain(2), chain(2))
        assert ms.n == 3
        assert hasse_cover(ms.as_poset()) == [(0, 1), (1, 2)]

    def test_point_to_p(self):
        p = powerset_lattice("AB")
        ms = map_space(chain(1), p)
        assert ms.n == 4
        assert len(hasse_cover(ms.as_poset())) == 4

    def test_antichain_to_chain_is_diamond(self):
        ms = map_space(antichain(2), chain(2))
        assert ms.n == 4
        assert len(hasse_cover(ms.as_poset())) == 4
        assert ms.as_poset().is_lattice()

    def test_cap(self, monkeypatch):
        monkeypatch.setenv("LATTICE_EFFECTS_BUDGET", "10")
        with pytest.raises(SpaceTooLarge):
            map_space(chain(3), chain(3))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32), st.integers(1, 4), st.integers(1, 4))
    def test_relation_is_a_preorder_and_maps_are_all_monotone(self, seed, n, m):
        dom, cod = random_poset(seed, n), random_poset(seed + 1, m)
        ms = map_space(dom, cod)
        rows = [ms.up(i) for i in range(ms.n)]
        validate_preorder(range(ms.n), matrix=[[rows[i] >> j & 1 for j in range(ms.n)] for i in range(ms.n)])
        expected = sum(
            all(cod.leq(a[x], a[y]) for x in range(n) for y in range(n) if dom.leq(x, y))
            for a in product(range(m), repeat=n)
        )
        assert ms.n == expected


class TestMonotoneMap:
    def test_rejects_order_reversal(self):
        with pytest.raises(NotMonotone):
            MonotoneMap(chain(2), chain(2), [1, 0])

    def test_compose(self):
        f = MonotoneMap(chain(2), chain(3), [0, 2])
        g = MonotoneMap(chain(3), chain(2), [0, 0, 1])
        assert g.compose(f).assignment == (0, 1)
