"""Closure and kernel operators, their fixed points, and Moore families."""

from itertools import combinations

import numpy as np

from .errors import AxiomViolation, CarrierMismatch, NotMooreFamily, PropositionViolation, SchemaError
from .order import FinitePoset, MonotoneMap, PowersetLattice, hasse_cover, iter_bits

CLOSURE_AXIOMS = ("C.1", "C.2", "C.3")
KERNEL_AXIOMS = ("K.1", "K.2", "K.3")


class SelfMap:
    """A self-map on a finite poset, compared extensionally."""

    def __init__(self, carrier, table):
        self.carrier = carrier
        self.table = tuple(int(v) for v in table)

    def __call__(self, p):
        return self.table[p]

    def __eq__(self, other):
        if not isinstance(other, SelfMap):
            return NotImplemented
        return self.table == other.table and self.carrier.same_order(other.carrier)

    def __hash__(self):
        return hash(self.table)

    def __le__(self, other):
        _same_carrier(self, other)
        leq = self.carrier.leq
        return all(leq(a, b) for a, b in zip(self.table, other.table))

    def __ge__(self, other):
        return other <= self

    def fixed_point_indices(self):
        return [p for p, v in enumerate(self.table) if v == p]

    def then(self, other):
        """``other ∘ self`` as a raw table."""
        return tuple(other.table[v] for v in self.table)

    def as_monotone_map(self):
        return MonotoneMap(self.carrier, self.carrier, self.table, check=False)

    def __repr__(self):
        return f"{type(self).__name__}(carrier={self.carrier!r})"


class ClosureOperator(SelfMap):
    """Inflationary, monotone, idempotent self-map."""


class KernelOperator(SelfMap):
    """Deflationary, monotone, idempotent self-map."""


def _same_carrier(f, g):
    if not f.carrier.same_order(g.carrier):
        raise CarrierMismatch("operators live on different carriers")


def _as_table(carrier, assignment):
    if isinstance(assignment, MonotoneMap):
        if not (assignment.domain.same_order(carrier) and assignment.codomain.same_order(carrier)):
            raise CarrierMismatch("map is not a self-map on the given carrier")
        table = assignment.assignment
    elif callable(assignment):
        table = tuple(assignment(p) for p in range(carrier.n))
    else:
        table = tuple(int(v) for v in assignment)
    if len(table) != carrier.n:
        raise SchemaError(f"self-map has {len(table)} entries, carrier has {carrier.n}")
    for v in table:
        if not 0 <= v < carrier.n:
            raise SchemaError(f"self-map value {v} outside carrier")
    return table


# -- axiom checks --------------------------------------------------------------


def _powerset_violations(carrier, table, inflationary, axioms):
    t = np.asarray(table, dtype=np.int64)
    idx = np.arange(carrier.n, dtype=np.int64)
    out = {}
    first, second, third = axioms
    if first:
        bad = np.nonzero(idx & ~t)[0] if inflationary else np.nonzero(t & ~idx)[0]
        if bad.size:
            out[first] = (int(bad[0]),)
    if second:
        for b in range(carrier.k):
            lo = idx[((idx >> b) & 1) == 0]
            hi = lo | (1 << b)
            bad = np.nonzero(t[lo] & ~t[hi])[0]
            if bad.size:
                out[second] = (int(lo[bad[0]]), int(hi[bad[0]]))
                break
    if third:
        bad = np.nonzero(t[t] != t)[0]
        if bad.size:
            out[third] = (int(bad[0]),)
    return out


def _generic_violations(carrier, table, inflationary, axioms):
    out = {}
    first, second, third = axioms
    leq = carrier.leq
    if first:
        for p, v in enumerate(table):
            if not (leq(p, v) if inflationary else leq(v, p)):
                out[first] = (p,)
                break
    if second:
        pairs = hasse_cover(carrier) if isinstance(carrier, FinitePoset) else carrier.pairs()
        for x, y in pairs:
            if not leq(table[x], table[y]):
                out[second] = (x, y)
                break
    if third:
        for p, v in enumerate(table):
            if table[v] != v:
                out[third] = (p,)
                break
    return out


def _violations(carrier, table, inflationary, axioms):
    if isinstance(carrier, PowersetLattice):
        return _powerset_violations(carrier, table, inflationary, axioms)
    return _generic_violations(carrier, table, inflationary, axioms)


def _select(names, wanted):
    return tuple(a if (wanted is None or a in wanted) else None for a in names)


def closure_violations(carrier, assignment, axioms=None):
    """Map axiom name to the first witness, for each of C.1-C.3 that fails."""
    table = _as_table(carrier, assignment)
    return _violations(carrier, table, True, _select(CLOSURE_AXIOMS, axioms))


def kernel_violations(carrier, assignment, axioms=None):
    table = _as_table(carrier, assignment)
    return _violations(carrier, table, False, _select(KERNEL_AXIOMS, axioms))


def check_closure(carrier, assignment):
    """Validate a self-map against C.1-C.3 and wrap it."""
    table = _as_table(carrier, assignment)
    bad = _violations(carrier, table, True, CLOSURE_AXIOMS)
    if bad:
        raise AxiomViolation(f"not a closure operator: violates {', '.join(sorted(bad))}", bad)
    return ClosureOperator(carrier, table)


def check_kernel(carrier, assignment):
    table = _as_table(carrier, assignment)
    bad = _violations(carrier, table, False, KERNEL_AXIOMS)
    if bad:
        raise AxiomViolation(f"not a kernel operator: violates {', '.join(sorted(bad))}", bad)
    return KernelOperator(carrier, table)


def identity_operator(carrier):
    return ClosureOperator(carrier, range(carrier.n))


# -- fixed points and joins ------------------------------------------------------


def fixed_points(c):
    """Sub-poset of fixed points of a closure operator; it is always a complete lattice."""
    fix = c.fixed_point_indices()
    sub = c.carrier.induced(fix)
    if not sub.is_lattice():
        raise PropositionViolation("fixed points of a closure operator do not form a lattice")
    if isinstance(c.carrier, PowersetLattice):
        members = set(fix)
        if c.carrier.full not in members:
            raise PropositionViolation("fixed points miss the full set")
        for a, b in combinations(fix, 2):
            if a & b not in members:
                raise PropositionViolation("fixed points not closed under intersection")
    return sub


def closure_join(f, g):
    """Least closure operator above both ``f`` and ``g``.

    Iterates ``f∘g`` pointwise to a fixed point. The number of rounds must stay
    within the carrier height (``n`` for a powerset of ``n`` points).
    """
    _same_carrier(f, g)
    carrier = f.carrier
    bound = carrier.height
    if isinstance(carrier, PowersetLattice):
        ft = np.asarray(f.table, dtype=np.int64)
        gt = np.asarray(g.table, dtype=np.int64)
        x = np.arange(carrier.n, dtype=np.int64)
        rounds = 0
        while True:
            y = ft[gt[x]]
            if np.array_equal(y, x):
                break
            x = y
            rounds += 1
            if rounds > bound:
                raise PropositionViolation(f"(fg)^n not idempotent after {bound} rounds")
        table = x.tolist()
    else:
        table = []
        for p in range(carrier.n):
            x = p
            rounds = 0
            while True:
                y = f.table[g.table[x]]
                if y == x:
                    break
                x = y
                rounds += 1
                if rounds > bound:
                    raise PropositionViolation(f"(fg)^n not idempotent after {bound} rounds")
            table.append(x)
    bad = closure_violations(carrier, table)
    if bad:
        raise PropositionViolation(f"join of closure operators violates {sorted(bad)}")
    return ClosureOperator(carrier, table)


# -- Moore families ----------------------------------------------------------------


class MooreFamily:
    """Intersection-closed family of subsets of ``ground`` containing ``ground``.

    Members are stored as bit masks over ``ground``.
    """

    def __init__(self, ground, members):
        self.carrier = ground if isinstance(ground, PowersetLattice) else PowersetLattice(ground)
        self.ground = self.carrier.ground
        ms = set()
        for m in members:
            ms.add(int(m) if isinstance(m, (int, np.integer)) else self.carrier.subset_mask(m))
        self.members = frozenset(ms)
        if self.carrier.full not in self.members:
            raise NotMooreFamily("family does not contain the full ground set")
        for a, b in combinations(sorted(self.members), 2):
            if a & b not in self.members:
                raise NotMooreFamily(
                    f"intersection of {self.carrier.label(a)} and "
                    f"{self.carrier.label(b)} is missing"
                )

    def __eq__(self, other):
        if not isinstance(other, MooreFamily):
            return NotImplemented
        return self.ground == other.ground and self.members == other.members

    def __hash__(self):
        return hash((self.ground, self.members))

    def __le__(self, other):
        """Order of the lattice of Moore families: reverse inclusion."""
        return self.members >= other.members

    def sets(self):
        return sorted(self.carrier.label(m) for m in self.members)

    def __repr__(self):
        return f"MooreFamily({list(self.ground)!r}, {self.sets()!r})"


def _require_powerset(c):
    if not isinstance(c.carrier, PowersetLattice):
        raise SchemaError("operation needs a powerset carrier")


def to_moore_family(c):
    _require_powerset(c)
    return MooreFamily(c.carrier, c.fixed_point_indices())


def from_moore_family(m):
    """Closure ``S -> ∩{M in family : S ⊆ M}``."""
    carrier = m.carrier
    idx = np.arange(carrier.n, dtype=np.int64)
    t = np.full(carrier.n, carrier.full, dtype=np.int64)
    for member in m.members:
        sel = (idx & ~member) == 0
        t[sel] &= member
    return ClosureOperator(carrier, t.tolist())


def intersection_closure(carrier, members):
    """Smallest Moore family containing ``members``."""
    fam = {carrier.full} | {int(x) for x in members}
    frontier = list(fam)
    while frontier:
        new = []
        for a in frontier:
            for b in list(fam):
                c = a & b
                if c not in fam:
                    fam.add(c)
                    new.append(c)
        frontier = new
    return MooreFamily(carrier, fam)


def join_via_moore_oracle(f, g):
    """Join computed by intersecting fixed-point families."""
    _same_carrier(f, g)
    _require_powerset(f)
    fam = set(f.fixed_point_indices()) & set(g.fixed_point_indices())
    return from_moore_family(MooreFamily(f.carrier, fam))


def closure_meet(f, g):
    """Greatest closure operator below both: close the union of fixed-point families."""
    _same_carrier(f, g)
    _require_powerset(f)
    fam = set(f.fixed_point_indices()) | set(g.fixed_point_indices())
    return from_moore_family(intersection_closure(f.carrier, fam))


def enumerate_moore_families(carrier):
    """Every Moore family on a (small) powerset carrier, in a deterministic order."""
    if carrier.k > 4:
        raise SchemaError("Moore families are enumerated only for ground sets of at most 4")
    others = list(range(carrier.full))
    out = []
    for bits in range(1 << len(others)):
        fam = [carrier.full] + [others[i] for i in iter_bits(bits)]
        members = set(fam)
        if all(a & b in members for a, b in combinations(fam, 2)):
            out.append(MooreFamily(carrier, members))
    return out


def enumerate_closure_operators(ground):
    carrier = ground if isinstance(ground, PowersetLattice) else PowersetLattice(ground)
    return [from_moore_family(m) for m in enumerate_moore_families(carrier)]
