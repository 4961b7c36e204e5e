import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_effects.contagion import interpret, phenome_veil, threshold_description
from lattice_effects.errors import (
    CarrierMismatch,
    MeetNotPreserved,
    NoMinimumExplanation,
    NotCocomplete,
)
from lattice_effects.galois import (
    behavior_projection_veil,
    check_veil,
    compose,
    derived_closure,
    derived_kernel,
    detect_effects,
    dual_veil,
    exists_projection_map,
    exists_relation_veil,
    factorize,
    forall_relation_veil,
    identity_veil,
    interdependence_veil,
    meet_witness_phenome,
    minimal_explanations,
    relation_closure,
    terminal_veil,
    transitive_closure_veil,
    veil_by_meets,
    verify_galois,
)
from lattice_effects.order import MonotoneMap, PowersetLattice, antichain, chain
from lattice_effects.sampling import random_lattice, random_monotone_map

from .oracles import brute_left_adjoint, leq_matrix


def rel(v, pairs):
    return v.system.index(sorted(pairs))


class TestCheckVeil:
    def test_contagion_left_adjoint_adds_the_phenome(self):
        v = phenome_veil("AB")
        for p in range(4):
            f = v.operators[v.left_adjoint(p)]
            assert f.table == tuple(s | p for s in range(4))

    def test_identity(self):
        v = identity_veil(PowersetLattice("AB"))
        assert v.left == (0, 1, 2, 3)

    def test_forward_exists_projection_has_two_minimal_explanations(self):
        with pytest.raises(NoMinimumExplanation) as exc:
            check_veil(exists_projection_map("a", "xy"))
        assert exc.value.phenome == ("a",)
        assert exc.value.minimal == [(("a", "x"),), (("a", "y"),)]

    def test_non_cocomplete_rejected(self):
        with pytest.raises(NotCocomplete):
            check_veil(MonotoneMap(antichain(2), chain(1), [0, 0]))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32))
    def test_left_adjoint_matches_brute_force(self, seed):
        dom, cod = random_lattice(seed), random_lattice(seed + 7)
        phi = random_monotone_map(seed, dom, cod)
        sm, pm = leq_matrix(dom), leq_matrix(cod)
        expected = [brute_left_adjoint(sm, pm, phi.assignment, p) for p in range(cod.n)]
        if None in expected:
            with pytest.raises(NoMinimumExplanation):
                check_veil(phi)
        else:
            assert check_veil(phi).left == tuple(expected)


class TestDerivedOperators:
    def test_contagion_kernel_adds_least_fixed_point(self):
        v = phenome_veil("AB")
        k = derived_kernel(v)
        for s, op in enumerate(v.operators):
            assert v.operators[k(s)].table == tuple(t | op.table[0] for t in range(4))

    def test_identity(self):
        v = identity_veil(PowersetLattice("AB"))
        assert derived_kernel(v).table == derived_closure(v).table == (0, 1, 2, 3)

    def test_forall_closure_is_identity(self):
        v = forall_relation_veil([1, 2], [1, 2])
        assert derived_closure(v).table == tuple(range(4))


class TestEffects:
    def test_flagship_pair(self):
        s1 = threshold_description("AB", [("A", "B")], {"A": 2, "B": 1})
        s2 = threshold_description("AB", [("A", "B")], {"A": 0, "B": 2})
        v = phenome_veil("AB", {"S1": s1, "S2": s2})
        found = {(w.s, w.s_prime): w for w in detect_effects(v)}
        w = found[(v.index_of(s1), v.index_of(s2))]
        assert w.to_record(v) == {"s": "S1", "s_prime": "S2", "lhs": ("A", "B"), "rhs": ("A",)}

    def test_identity_and_terminal_have_none(self):
        p = PowersetLattice("ABC")
        assert detect_effects(identity_veil(p)) == []
        assert detect_effects(terminal_veil(p)) == []

    def test_witness_order_invariant(self):
        v = transitive_closure_veil("abc")
        for w in detect_effects(v):
            assert w.lhs != w.rhs and v.phenome.leq(w.rhs, w.lhs)

    def test_sampled_is_deterministic_subset(self):
        v = phenome_veil("ABC")
        a = detect_effects(v, "sampled", samples=300, seed=11)
        b = detect_effects(v, "sampled", samples=300, seed=11)
        assert a == b and set(a) <= set(detect_effects(v))


class TestComposeFactorize:
    def test_compose_with_identity(self):
        v = phenome_veil("AB")
        assert compose(identity_veil(v.phenome), v) == v

    def test_compose_checks_carriers(self):
        v = forall_relation_veil("ab", "xy")
        with pytest.raises(CarrierMismatch):
            compose(v, v)

    def test_no_component_effects_means_none_composite(self):
        z = identity_veil(PowersetLattice("AB"))
        t = terminal_veil(z.phenome)
        assert detect_effects(compose(t, z)) == []

    def test_contagion_factorization_is_onto(self):
        pi, iota = factorize(phenome_veil("AB"))
        assert pi.phenome.n == 4
        assert iota.phi.assignment == (0, 1, 2, 3)

    def test_terminal_factorization(self):
        pi, iota = factorize(terminal_veil(PowersetLattice("AB")))
        assert pi.phenome.n == 1 and iota.phi.is_injective()

    def test_injective_veil_pi_is_isomorphism(self):
        v = transitive_closure_veil("ab")
        pi, _ = factorize(v)
        assert pi.phi.is_injective() and pi.phi.is_surjective()


class TestMeets:
    def test_contagion_preserves_meets(self):
        veil_by_meets(phenome_veil("ABC").phi)

    def test_identity(self):
        veil_by_meets(identity_veil(PowersetLattice("AB")).phi)

    def test_forward_exists_projection_loses_a_meet(self):
        phi = exists_projection_map("ab", "xy")
        with pytest.raises(MeetNotPreserved) as exc:
            veil_by_meets(phi)
        target = meet_witness_phenome(phi, exc.value.witness)
        minimum, minimal = minimal_explanations(phi, target)
        assert minimum is None and len(minimal) >= 2


class TestStockVeils:
    def test_forall_examples(self):
        v = forall_relation_veil([1, 2], [1, 2])
        assert v.phenome.label(v(rel(v, [(1, 1), (1, 2)]))) == (1,)
        assert v.phenome.label(v(v.system.top())) == (1, 2)
        r, r2 = rel(v, [(1, 1)]), rel(v, [(1, 2)])
        assert v.phenome.label(v(v.system.join(r, r2))) == (1,)
        assert v.phenome.label(v.phenome.join(v(r), v(r2))) == ()

    def test_exists_examples(self):
        v = exists_relation_veil([1, 2], [1, 2])
        r, r2 = rel(v, [(1, 1)]), rel(v, [(1, 2)])
        assert v.phenome.label(v(r)) == (1,)
        assert v.phenome.label(v(rel(v, []))) == ()
        # system join is intersection under reverse inclusion
        assert v.phenome.label(v(v.system.join(r, r2))) == ()
        assert v.phenome.label(v.phenome.join(v(r), v(r2))) == (1,)

    def test_behavior_projection(self):
        v = behavior_projection_veil([0, 1], [0, 1])
        assert v.phenome.label(v(rel(v, [(0, 0)]))) == (0,)

    def test_interdependence(self):
        v = interdependence_veil([0, 1], [0, 1])
        b, b2 = rel(v, [(0, 0), (1, 1)]), rel(v, [(0, 1), (1, 0)])
        full = v.phenome.index([("left", 0), ("left", 1), ("right", 0), ("right", 1)])
        assert v(b) == full and v(b2) == full
        assert v(v.system.join(b, b2)) == v.phenome.index([])
        assert v.phenome.join(v(b), v(b2)) == full

    def test_transitive_closure(self):
        v = transitive_closure_veil("abc")
        ph = v.phenome
        r = v.system.index([("a", "b")])
        r2 = v.system.index([("b", "c")])
        joined = v(v.system.join(r, r2))
        assert sorted(ph.label(joined)) == [("a", "b"), ("a", "c"), ("b", "c")]
        assert joined != ph.join(v(r), v(r2))

    def test_transitive_pair_with_empty_has_no_effect(self):
        v = transitive_closure_veil("abc")
        r = v.system.index([("a", "b"), ("a", "c"), ("b", "c")])
        bottom = v.system.index([])
        assert v(v.system.join(r, bottom)) == v.phenome.join(v(r), v(bottom))

    def test_relation_closure_of_chain(self):
        n = 4
        chain_rel = sum(1 << (i * n + i + 1) for i in range(n - 1))
        closed = relation_closure(chain_rel, n)
        assert closed == sum(1 << (i * n + j) for i in range(n) for j in range(i + 1, n))


STOCK = [
    lambda: phenome_veil("AB"),
    lambda: forall_relation_veil("ab", "xyz"),
    lambda: exists_relation_veil("abc", "xy"),
    lambda: behavior_projection_veil([0, 1], [0, 1]),
    lambda: interdependence_veil([0, 1], [0, 1]),
    lambda: transitive_closure_veil("abc"),
    lambda: identity_veil(PowersetLattice("AB")),
    lambda: terminal_veil(PowersetLattice("AB")),
]


@pytest.mark.parametrize("make", STOCK)
def test_galois_properties_hold(make):
    v = make()
    assert all(x is None for x in verify_galois(v).values())


@pytest.mark.parametrize("make", STOCK)
def test_dual_veil_is_valid(make):
    v = make()
    d = dual_veil(v)
    assert d.left == v.phi.assignment


def test_interpret_is_on_the_system_lattice():
    v = phenome_veil("AB")
    f = interpret(threshold_description("AB", [("A", "B")], {"A": 1, "B": 1}))
    assert v(v.index_of(f)) == 0
