import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_effects.errors import NotInjective, NotSurjective
from lattice_effects.galois import (
    check_veil,
    detect_effects,
    exists_projection_map,
    forall_relation_veil,
    transitive_closure_veil,
)
from lattice_effects.lifts import (
    Filter,
    FilterLattice,
    congruence_of,
    enumerate_antichains,
    factor,
    g_is_veil,
    image_semilattice,
    injective_criterion,
    is_filter,
    lift_map,
    lift_preserves_effects,
    principal_filter,
    quotient,
    surjective_criterion,
    upward_closure,
)
from lattice_effects.order import MonotoneMap, PowersetLattice, antichain, chain
from lattice_effects.sampling import random_lattice, random_monotone_map, random_poset

from .oracles import brute_congruent, brute_filters

P2 = PowersetLattice("AB")


def contains_a():
    return MonotoneMap(P2, chain(2), [s & 1 for s in range(4)])


def random_map(seed):
    dom = random_lattice(seed)
    cod = random_lattice(seed + 1000)
    return random_monotone_map(seed, dom, cod)


class TestCongruence:
    def test_contains_a(self):
        c = congruence_of(contains_a())
        groups = sorted(sorted(P2.label(p) for p in cls) for cls in c.classes)
        assert groups == [[(), ("B",)], [("A",), ("A", "B")]]

    def test_injective_gives_singletons(self):
        c = congruence_of(MonotoneMap(P2, P2, range(4)))
        assert all(len(cls) == 1 for cls in c.classes)

    def test_constant_gives_one_class(self):
        c = congruence_of(MonotoneMap(P2, chain(1), [0] * 4))
        assert len(c.classes) == 1 and c.closure(0) == 3

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32))
    def test_laws(self, seed):
        f = random_map(seed)
        p, a = f.domain, f.assignment
        c = congruence_of(f)
        n = p.n
        for x in range(n):
            for y in range(n):
                assert c.related(x, y) == brute_congruent(p, a, x, y)
        for x in range(n):
            assert c.related(x, c.closure(x)) and p.leq(x, c.closure(x))
            for y in range(n):
                if c.related(x, y):
                    # absorption
                    assert c.related(y, p.join(x, y))
                    for z in range(n):
                        if p.leq(x, z) and p.leq(z, y):
                            assert c.related(z, y)
                    for x2 in range(n):
                        for y2 in range(n):
                            if c.related(x2, y2):
                                assert c.related(p.join(x, x2), p.join(y, y2))


class TestQuotientAndImage:
    def test_contains_a_quotient_is_two_chain(self):
        q, pi = quotient(congruence_of(contains_a()))
        assert q.n == 2 and q.leq(0, 1) and not q.leq(1, 0)
        assert pi.is_surjective()

    def test_identity_quotient(self):
        q, pi = quotient(congruence_of(MonotoneMap(P2, P2, range(4))))
        assert q.n == 4 and pi.assignment == (0, 1, 2, 3)

    def test_constant_quotient(self):
        q, _ = quotient(congruence_of(MonotoneMap(P2, chain(1), [0] * 4)))
        assert q.n == 1

    def test_image_of_onto_map(self):
        q_hat, _ = image_semilattice(contains_a())
        assert q_hat.n == 2

    def test_image_adds_missing_join(self):
        f = MonotoneMap(chain(1), P2, [1]).compose(MonotoneMap(chain(1), chain(1), [0]))
        assert image_semilattice(f)[0].n == 1
        g = MonotoneMap(antichain(2), P2, [0b01, 0b10])
        q_hat, iota = image_semilattice(g)
        assert sorted(q_hat.labels) == [("A",), ("A", "B"), ("B",)]
        assert iota.is_injective()

    def test_image_already_closed(self):
        f = MonotoneMap(chain(3), P2, [0, 1, 3])
        assert image_semilattice(f)[0].n == 3

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32))
    def test_projection_and_inclusion_preserve_joins(self, seed):
        f = random_map(seed)
        fac = factor(f)
        d, q = f.domain, fac.quotient
        for x in range(d.n):
            for y in range(d.n):
                assert fac.pi(d.join(x, y)) == q.join(fac.pi(x), fac.pi(y))
        im = fac.image
        for x in range(im.n):
            for y in range(im.n):
                assert fac.iota(im.join(x, y)) == f.codomain.join(fac.iota(x), fac.iota(y))


class TestFactor:
    def test_contains_a_gives_isomorphism(self):
        fac = factor(contains_a())
        assert fac.g.is_injective() and fac.g.is_surjective() and g_is_veil(fac)

    def test_veil_with_singleton_classes(self):
        v = transitive_closure_veil("ab")
        fac = factor(v.phi)
        assert all(len(c) == 1 for c in fac.congruence.classes)
        for p in range(v.system.n):
            assert fac.image.embedding[fac.g(fac.pi(p))] == v(p)

    def test_exists_projection_fails_only_in_the_quotient(self):
        # unions are preserved, so relations with equal shadows are congruent
        f = exists_projection_map("ab", "xy")
        fac = factor(f)
        assert fac.quotient.n == 4 and fac.g.is_injective() and fac.g.is_surjective()
        assert g_is_veil(fac) and surjective_criterion(f)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32))
    def test_commutes_uniquely_and_mirrors_effects(self, seed):
        f = random_map(seed)
        fac = factor(f)
        d = f.domain
        for p in range(d.n):
            assert fac.iota(fac.g(fac.pi(p))) == f(p)
        # g is forced: π is onto and ι is injective
        for k, cls in enumerate(fac.congruence.classes):
            values = {fac.image.position(f(p)) for p in cls}
            assert values == {fac.g(k)}
        for a in range(d.n):
            for b in range(d.n):
                lhs, rhs = fac.effect_pair(a, b)
                assert lhs == rhs


class TestCriteria:
    def test_transitive_inclusion_reflects_order(self):
        assert injective_criterion(transitive_closure_veil("abc").phi)

    def test_antichain_into_chain(self):
        assert not injective_criterion(MonotoneMap(antichain(2), chain(2), [0, 1]))

    def test_identity(self):
        ident = MonotoneMap(P2, P2, range(4))
        assert injective_criterion(ident) and surjective_criterion(ident)

    def test_contains_a_surjective(self):
        assert surjective_criterion(contains_a())

    def test_lost_meet(self):
        f = MonotoneMap(P2, chain(3), [0, 1, 1, 2])
        assert not surjective_criterion(f)
        assert not g_is_veil(factor(f))

    def test_wrong_kind(self):
        with pytest.raises(NotInjective):
            injective_criterion(contains_a())
        with pytest.raises(NotSurjective):
            surjective_criterion(MonotoneMap(chain(2), chain(3), [0, 2]))

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32))
    def test_criteria_match_direct_check(self, seed):
        f = random_map(seed)
        fac = factor(f)
        if f.is_injective():
            assert injective_criterion(f) == g_is_veil(fac)
        if f.is_surjective():
            assert surjective_criterion(f) == g_is_veil(fac)


class TestFilters:
    @pytest.mark.parametrize("host,size", [(chain(2), 3), (chain(1), 2), (antichain(2), 4)])
    def test_sizes(self, host, size):
        assert FilterLattice(host).n == size

    def test_two_chain_is_a_chain(self):
        jl = FilterLattice(chain(2))
        assert all(jl.leq(a, b) or jl.leq(b, a) for a in range(3) for b in range(3))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32), st.integers(1, 8))
    def test_enumeration_matches_brute_force(self, seed, n):
        p = random_poset(seed, n)
        jl = FilterLattice(p)
        got = {frozenset(i for i in range(n) if e >> i & 1) for e in jl.extents}
        assert got == set(brute_filters(p))
        assert len(enumerate_antichains(p)) == jl.n

    def test_principal(self):
        top, bottom = P2.top(), P2.bottom()
        assert principal_filter(P2, top).extent == 1 << top
        assert principal_filter(P2, bottom).extent == 0b1111
        a = P2.index(["A"])
        assert {P2.label(i) for i in range(4) if i in principal_filter(P2, a)} == {("A",), ("A", "B")}

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32))
    def test_principal_turns_joins_into_intersections(self, seed):
        p = random_lattice(seed)
        for x in range(p.n):
            for y in range(p.n):
                assert p.up(p.join(x, y)) == p.up(x) & p.up(y)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32), st.integers(0, 2**8 - 1))
    def test_filter_iff_closed_under_joining(self, seed, bits):
        p = random_lattice(seed)
        mask = bits & ((1 << p.n) - 1)
        closed = all(mask >> p.join(x, j) & 1 for j in range(p.n) if mask >> j & 1 for x in range(p.n))
        assert is_filter(p, mask) == closed

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32), st.integers(1, 6))
    def test_joins_are_intersections_and_distributive(self, seed, n):
        jl = FilterLattice(random_poset(seed, n))
        ex = jl.extents
        rng = random.Random(seed)
        for _ in range(50):
            a, b, c = (rng.randrange(jl.n) for _ in range(3))
            assert ex[jl.join(a, b)] == ex[a] & ex[b]
            assert ex[jl.meet(a, b)] == ex[a] | ex[b]
            assert jl.meet(a, jl.join(b, c)) == jl.join(jl.meet(a, b), jl.meet(a, c))

    def test_generators_round_trip(self):
        p = random_poset(4, 7)
        for e in FilterLattice(p).extents:
            f = Filter.from_extent(p, e)
            assert f.extent == e and upward_closure(p, e) == e


class TestLift:
    def test_identity(self):
        v = lift_map(MonotoneMap(P2, P2, range(4)))
        assert v.phi.assignment == tuple(range(v.system.n))

    def test_repairs_exists_projection(self):
        v = lift_map(exists_projection_map("ab", "xy"))
        assert v.system.n == 168

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32), st.integers(1, 8), st.integers(1, 8))
    def test_random_maps_lift_to_veils(self, seed, n, m):
        dom, cod = random_poset(seed, n), random_poset(seed + 1, m)
        lift_map(random_monotone_map(seed, dom, cod))

    def test_forall_relation_effects(self):
        v = forall_relation_veil([1, 2], [1, 2])
        found = {(w.s, w.s_prime) for w in detect_effects(v)}
        assert found
        n = v.system.n
        for p in range(n):
            for q in range(n):
                map_effect, lift_effect = lift_preserves_effects(v.phi, p, q)
                assert map_effect == ((p, q) in found or (q, p) in found)

    def test_same_argument(self):
        f = exists_projection_map("ab", "xy")
        for p in range(f.domain.n):
            assert lift_preserves_effects(f, p, p) == (False, False)

    def test_join_preserving_map_has_no_effects(self):
        f = MonotoneMap(P2, P2, [s | 1 for s in range(4)])
        for p in range(4):
            for q in range(4):
                assert lift_preserves_effects(f, p, q) == (False, False)

    def test_lift_of_veil_still_a_veil(self):
        check_veil(lift_map(transitive_closure_veil("ab").phi).phi)
