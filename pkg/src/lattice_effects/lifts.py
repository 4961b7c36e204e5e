"""Repairing maps that are not veils: congruence quotients, image semilattices, filter lifts."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._config import MAX_ANTICHAINS
from .errors import (
    NoMinimumExplanation,
    NotCocomplete,
    NotInjective,
    NotSurjective,
    PosetTooLarge,
    PropositionViolation,
)
from .galois import check_veil
from .order import FinitePoset, MonotoneMap, iter_bits, mask_of


def _require_cocomplete(p, role):
    if not p.is_finitely_cocomplete():
        raise NotCocomplete(f"{role} is not finitely cocomplete")


# -- congruence quotient ---------------------------------------------------------------


@dataclass(frozen=True)
class Congruence:
    """Partition of the domain of ``f`` by ``p ~ q iff f(p ∨ x) = f(q ∨ x)`` for all ``x``.

    Classes are listed in order of their maxima.
    """

    f: MonotoneMap
    classes: tuple
    class_of: tuple
    class_max: tuple

    @property
    def carrier(self):
        return self.f.domain

    def related(self, p, q):
        return self.class_of[p] == self.class_of[q]

    def closure(self, p):
        """Largest element congruent to ``p``."""
        return self.class_max[self.class_of[p]]


def congruence_of(f):
    dom = f.domain
    _require_cocomplete(dom, "domain")
    a = f.assignment
    sig = {}
    for p in range(dom.n):
        key = tuple(a[dom.join(p, x)] for x in range(dom.n))
        sig.setdefault(key, []).append(p)
    groups = []
    for members in sig.values():
        top = dom.join_all(members)
        if top not in members:
            raise PropositionViolation("a congruence class lacks its own join")
        groups.append((top, tuple(members)))
    groups.sort()
    class_of = [0] * dom.n
    for k, (_, members) in enumerate(groups):
        for p in members:
            class_of[p] = k
    return Congruence(
        f, tuple(m for _, m in groups), tuple(class_of), tuple(t for t, _ in groups)
    )


def quotient(c):
    """The join-semilattice of classes and the surjection ``π`` onto it."""
    dom = c.carrier
    maxima = c.class_max
    ups = [mask_of(j for j, b in enumerate(maxima) if dom.leq(a, b)) for a in maxima]
    q = FinitePoset([dom.label(m) for m in maxima], ups)
    pi = MonotoneMap(dom, q, c.class_of, check=False)
    bad = pi.monotonicity_violation()
    if bad is not None:
        raise PropositionViolation("projection onto the quotient is not order-preserving")
    for x in range(dom.n):
        for y in range(x + 1, dom.n):
            if c.class_of[dom.join(x, y)] != q.join(c.class_of[x], c.class_of[y]):
                raise PropositionViolation("projection onto the quotient does not preserve joins")
    return q, pi


def image_semilattice(f):
    """Close ``f(P)`` under binary joins in the codomain; return it with its inclusion."""
    cod = f.codomain
    _require_cocomplete(cod, "codomain")
    members = set(f.assignment)
    frontier = list(members)
    while frontier:
        fresh = []
        for a in frontier:
            for b in list(members):
                j = cod.join(a, b)
                if j not in members:
                    members.add(j)
                    fresh.append(j)
        frontier = fresh
    q_hat = cod.induced(sorted(members))
    iota = MonotoneMap(q_hat, cod, q_hat.embedding, check=False)
    return q_hat, iota


@dataclass(frozen=True)
class Factorization:
    """``f = ι ∘ g ∘ π`` through the quotient and the image semilattice."""

    f: MonotoneMap
    congruence: Congruence
    quotient: FinitePoset
    pi: MonotoneMap
    image: FinitePoset
    iota: MonotoneMap
    g: MonotoneMap

    def effect_pair(self, a, b):
        """``(f has an effect at (a, b), g has an effect at (πa, πb))``."""
        dom, cod, fa = self.f.domain, self.f.codomain, self.f.assignment
        lhs = fa[dom.join(a, b)] != cod.join(fa[a], fa[b])
        pa, pb = self.pi(a), self.pi(b)
        ga = self.g.assignment
        rhs = ga[self.quotient.join(pa, pb)] != self.image.join(ga[pa], ga[pb])
        return lhs, rhs


def factor(f):
    c = congruence_of(f)
    q, pi = quotient(c)
    q_hat, iota = image_semilattice(f)
    table = [q_hat.position(f.assignment[m]) for m in c.class_max]
    try:
        g = MonotoneMap(q, q_hat, table)
    except Exception as exc:
        raise PropositionViolation("the induced map between quotient and image is not monotone") from exc
    for p in range(f.domain.n):
        if iota(g(pi(p))) != f(p):
            raise PropositionViolation("ι∘g∘π does not recompose the map")
    return Factorization(f, c, q, pi, q_hat, iota, g)


def injective_criterion(f):
    """For injective ``f``: the factor ``g`` is a veil exactly when ``f`` reflects order."""
    if not f.is_injective():
        raise NotInjective("map is not injective")
    dom, cod, a = f.domain, f.codomain, f.assignment
    return all(
        dom.leq(p, q) for p in range(dom.n) for q in range(dom.n) if cod.leq(a[p], a[q])
    )


def surjective_criterion(f):
    """For surjective ``f``: ``g`` is a veil exactly when ``f`` preserves meets of class maxima.

    Class maxima are the fixed points of a closure operator, hence closed
    under meets, so the top and pairwise meets suffice.
    """
    if not f.is_surjective():
        raise NotSurjective("map is not surjective")
    dom, cod, a = f.domain, f.codomain, f.assignment
    _require_cocomplete(dom, "domain")
    _require_cocomplete(cod, "codomain")
    if a[dom.top()] != cod.top():
        return False
    maxima = congruence_of(f).class_max
    for i, x in enumerate(maxima):
        for y in maxima[i + 1:]:
            if a[dom.meet(x, y)] != cod.meet(a[x], a[y]):
                return False
    return True


def g_is_veil(fac):
    try:
        check_veil(fac.g)
    except NoMinimumExplanation:
        return False
    return True


# -- filters ---------------------------------------------------------------------------------


class Filter:
    """Upward-closed subset of ``host`` given by its antichain of minimal elements."""

    def __init__(self, host, generators):
        gens = set(generators)
        self.host = host
        self.generators = tuple(sorted(host.minimal_elements(mask_of(gens)))) if gens else ()
        if set(self.generators) != gens:
            raise PropositionViolation("filter generators are not an antichain")

    @classmethod
    def from_extent(cls, host, extent):
        return cls(host, host.minimal_elements(extent))

    @cached_property
    def extent(self):
        out = 0
        for g in self.generators:
            out |= self.host.up(g)
        return out

    def __contains__(self, p):
        return bool(self.extent >> p & 1)

    def __eq__(self, other):
        if not isinstance(other, Filter):
            return NotImplemented
        return self.generators == other.generators and self.host.same_order(other.host)

    def __hash__(self):
        return hash(self.generators)

    def labels(self):
        return [self.host.label(g) for g in self.generators]

    def __repr__(self):
        return f"Filter({self.labels()!r})"


def principal_filter(host, p):
    return Filter(host, (p,))


def upward_closure(host, mask):
    out = 0
    for p in iter_bits(mask):
        out |= host.up(p)
    return out


def is_filter(host, mask):
    return upward_closure(host, mask) == mask


def enumerate_antichains(host, limit=MAX_ANTICHAINS):
    """All antichains as index tuples, including the empty one."""
    n = host.n
    comparable = [host.up(i) | host.down(i) for i in range(n)]
    out = []

    def extend(start, chosen, blocked):
        out.append(tuple(chosen))
        if len(out) > limit:
            raise PosetTooLarge(f"more than {limit} antichains; the filter lattice is too large")
        for i in range(start, n):
            if not blocked >> i & 1:
                chosen.append(i)
                extend(i + 1, chosen, blocked | comparable[i])
                chosen.pop()

    extend(0, [], 0)
    return out


def _bits_to_int(row):
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


class FilterLattice(FinitePoset):
    """Every filter of ``host`` ordered by reverse inclusion.

    Joins are intersections and meets are unions. Filters are listed by
    increasing extent mask.
    """

    def __init__(self, host, limit=MAX_ANTICHAINS):
        self.host = host
        extents = sorted({upward_closure(host, mask_of(a)) for a in enumerate_antichains(host, limit)})
        self.filters = [Filter.from_extent(host, e) for e in extents]
        self.extents = extents
        self._index = {e: k for k, e in enumerate(extents)}
        if host.n <= 62:
            arr = np.array(extents, dtype=np.int64)
            ups = [_bits_to_int((arr & ~e) == 0) for e in extents]
        else:
            ups = [mask_of(k for k, f in enumerate(extents) if f & ~e == 0) for e in extents]
        super().__init__([tuple(f.labels()) for f in self.filters], ups)

    def index_of_extent(self, extent):
        return self._index[extent]

    def index_of(self, flt):
        return self._index[flt.extent]

    def principal(self, p):
        return self._index[self.host.up(p)]


def filter_lattice(host):
    return FilterLattice(host)


def lift_apply(f, extent):
    """``J(f)`` on one filter extent: the upward closure of its image."""
    return upward_closure(f.codomain, mask_of(f.assignment[p] for p in iter_bits(extent)))


def lift_left_adjoint(f, extent):
    """Left adjoint of ``J(f)`` on one filter extent: the preimage."""
    return mask_of(p for p, v in enumerate(f.assignment) if extent >> v & 1)


def lift_map(f):
    """``J(f)`` between filter lattices, validated as a veil."""
    jp, jq = FilterLattice(f.domain), FilterLattice(f.codomain)
    table = [jq.index_of_extent(lift_apply(f, e)) for e in jp.extents]
    try:
        v = check_veil(MonotoneMap(jp, jq, table, check=False))
    except NoMinimumExplanation as exc:
        raise PropositionViolation("the filter lift is not a veil") from exc
    expected = tuple(jp.index_of_extent(lift_left_adjoint(f, e)) for e in jq.extents)
    if v.left != expected:
        raise PropositionViolation("left adjoint of the filter lift is not the preimage")
    for p in range(f.domain.n):
        if table[jp.principal(p)] != jq.principal(f(p)):
            raise PropositionViolation("the lift of a principal filter is not principal")
    return v


def lift_preserves_effects(f, p, q):
    """``(f(p∨q) != f(p)∨f(q), J(f)(⟨p⟩∩⟨q⟩) != J(f)⟨p⟩ ∩ J(f)⟨q⟩)``; the two always agree."""
    dom, cod, a = f.domain, f.codomain, f.assignment
    _require_cocomplete(dom, "domain")
    _require_cocomplete(cod, "codomain")
    map_effect = a[dom.join(p, q)] != cod.join(a[p], a[q])
    joint = lift_apply(f, dom.up(p) & dom.up(q))
    separate = lift_apply(f, dom.up(p)) & lift_apply(f, dom.up(q))
    lift_effect = joint != separate
    if map_effect != lift_effect:
        raise PropositionViolation(
            f"effect at ({dom.label(p)!r}, {dom.label(q)!r}) is not mirrored by the lift"
        )
    return map_effect, lift_effect


__all__ = [
    "Congruence",
    "Factorization",
    "Filter",
    "FilterLattice",
    "congruence_of",
    "quotient",
    "image_semilattice",
    "factor",
    "injective_criterion",
    "surjective_criterion",
    "g_is_veil",
    "principal_filter",
    "upward_closure",
    "is_filter",
    "enumerate_antichains",
    "filter_lattice",
    "lift_apply",
    "lift_left_adjoint",
    "lift_map",
    "lift_preserves_effects",
]
