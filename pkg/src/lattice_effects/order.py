"""Finite preordered sets, posets and order-preserving maps.

Elements are identified by their index ``0..n-1``; labels are for display
and I/O only. Relations are stored row-wise as Python ``int`` bit masks:
bit ``j`` of ``up(i)`` is set iff ``i <= j``.
"""

from functools import cached_property

from ._config import MAX_EXPLICIT_ELEMENTS, MAX_POWERSET_GROUND, enumeration_budget
from .errors import (
    BrokenTransitivity,
    CarrierMismatch,
    GroundSetTooLarge,
    MissingReflexive,
    NotAntisymmetric,
    NotMonotone,
    PropositionViolation,
    SchemaError,
    SpaceTooLarge,
)


def iter_bits(mask):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices):
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def transitive_closure(rows):
    """Warshall closure of a relation given as bit-mask rows (in place copy)."""
    rows = list(rows)
    n = len(rows)
    for k in range(n):
        bk = 1 << k
        rk = rows[k]
        for i in range(n):
            if rows[i] & bk:
                rows[i] |= rk
    return rows


class FinitePreorder:
    """A finite set with a reflexive and transitive relation.

    Use :func:`validate_preorder` or :func:`preorder_from_generators` to
    build one from raw data; the constructor trusts its input.
    """

    def __init__(self, labels, up):
        self._labels = tuple(labels)
        self._up = tuple(up)
        if len(self._labels) != len(self._up):
            raise ValueError("labels and relation rows differ in length")

    # -- basic access ---------------------------------------------------

    @property
    def n(self):
        return len(self._up)

    def __len__(self):
        return self.n

    @property
    def labels(self):
        return self._labels

    def label(self, i):
        return self._labels[i]

    @cached_property
    def _index(self):
        idx = {}
        for i, lab in enumerate(self.labels):
            if lab in idx:
                raise SchemaError(f"duplicate element label {lab!r}")
            idx[lab] = i
        return idx

    def index(self, label):
        try:
            return self._index[_hashable(label)]
        except KeyError:
            raise SchemaError(f"unknown element {label!r}") from None

    def leq(self, i, j):
        return bool((self.up(i) >> j) & 1)

    def lt(self, i, j):
        return i != j and self.leq(i, j) and not self.leq(j, i)

    def up(self, i):
        return self._up[i]

    def down(self, i):
        return self._down[i]

    @cached_property
    def _down(self):
        down = [0] * self.n
        for i in range(self.n):
            bi = 1 << i
            for j in iter_bits(self.up(i)):
                down[j] |= bi
        return tuple(down)

    @property
    def full_mask(self):
        return (1 << self.n) - 1

    def leq_matrix(self):
        return [[self.leq(i, j) for j in range(self.n)] for i in range(self.n)]

    def pairs(self):
        """All related pairs ``(i, j)`` with ``i <= j``."""
        return [(i, j) for i in range(self.n) for j in iter_bits(self.up(i))]

    # -- structure --------------------------------------------------------

    def antisymmetry_violations(self):
        out = []
        for i in range(self.n):
            for j in iter_bits(self.up(i) & self.down(i)):
                if i < j:
                    out.append((i, j))
        return out

    def is_antisymmetric(self):
        return not self.antisymmetry_violations()

    def as_poset(self):
        if isinstance(self, FinitePoset):
            return self
        bad = self.antisymmetry_violations()
        if bad:
            raise NotAntisymmetric(
                f"relation has {len(bad)} non-trivial cycle(s), e.g. {bad[0]}", bad
            )
        return FinitePoset(self._labels, self._up)

    @cached_property
    def linear_extension(self):
        """Indices sorted so that every strict predecessor comes first."""
        return tuple(sorted(range(self.n), key=lambda i: (self.down(i).bit_count(), i)))

    @cached_property
    def _lin(self):
        order = self.linear_extension
        pos = [0] * self.n
        for p, i in enumerate(order):
            pos[i] = p

        def relabel(mask):
            out = 0
            for j in iter_bits(mask):
                out |= 1 << pos[j]
            return out

        uplin = [relabel(self.up(i)) for i in order]
        downlin = [relabel(self.down(i)) for i in order]
        return order, pos, uplin, downlin

    def minimal_elements(self, mask):
        """Elements of ``mask`` with nothing strictly below them in ``mask``."""
        out = []
        for m in iter_bits(mask):
            below = self.down(m) & mask & ~(1 << m)
            if not below or all(self.leq(m, b) for b in iter_bits(below)):
                out.append(m)
        return out

    def maximal_elements(self, mask):
        out = []
        for m in iter_bits(mask):
            above = self.up(m) & mask & ~(1 << m)
            if not above or all(self.leq(a, m) for a in iter_bits(above)):
                out.append(m)
        return out

    def minimum(self, mask):
        """The unique least element of ``mask``, or ``None``."""
        found = None
        for m in iter_bits(mask):
            if mask & ~self.up(m) == 0:
                if found is not None:
                    return None
                found = m
        return found

    def maximum(self, mask):
        found = None
        for m in iter_bits(mask):
            if mask & ~self.down(m) == 0:
                if found is not None:
                    return None
                found = m
        return found

    def join(self, x, y):
        """Least upper bound of ``x`` and ``y``, or ``None`` when absent."""
        order, pos, uplin, downlin = self._lin
        u = uplin[pos[x]] & uplin[pos[y]]
        if not u:
            return None
        c = (u & -u).bit_length() - 1
        if uplin[c] & u != u or downlin[c] & u != 1 << c:
            return None
        return order[c]

    def meet(self, x, y):
        order, pos, uplin, downlin = self._lin
        d = downlin[pos[x]] & downlin[pos[y]]
        if not d:
            return None
        c = d.bit_length() - 1
        if downlin[c] & d != d or uplin[c] & d != 1 << c:
            return None
        return order[c]

    def bottom(self):
        return self.minimum(self.full_mask)

    def top(self):
        return self.maximum(self.full_mask)

    def join_all(self, elements):
        """Join of a finite family; the empty join is the bottom."""
        acc = None
        for e in elements:
            acc = e if acc is None else self.join(acc, e)
            if acc is None:
                return None
        return self.bottom() if acc is None else acc

    def meet_all(self, elements):
        acc = None
        for e in elements:
            acc = e if acc is None else self.meet(acc, e)
            if acc is None:
                return None
        return self.top() if acc is None else acc

    @cached_property
    def _cocomplete(self):
        if self.n == 0 or self.bottom() is None:
            return False
        for x in range(self.n):
            for y in range(x + 1, self.n):
                if self.join(x, y) is None:
                    return False
        if not self.is_antisymmetric():
            raise PropositionViolation("finitely cocomplete preorder is not antisymmetric")
        return True

    def is_finitely_cocomplete(self):
        return self._cocomplete

    @cached_property
    def _complete_meets(self):
        if self.n == 0 or self.top() is None:
            return False
        return all(
            self.meet(x, y) is not None for x in range(self.n) for y in range(x + 1, self.n)
        )

    def is_lattice(self):
        """True iff every finite subset (including the empty one) has a join and a meet."""
        return self.is_finitely_cocomplete() and self._complete_meets

    def dual(self):
        return FinitePreorder(self._labels, self._down)

    def induced(self, indices):
        return SubPoset(self, indices)

    # -- comparison -----------------------------------------------------

    def same_order(self, other):
        if self is other:
            return True
        if not isinstance(other, FinitePreorder) or self.n != other.n:
            return False
        if tuple(self.labels) != tuple(other.labels):
            return False
        return all(self.up(i) == other.up(i) for i in range(self.n))

    def __eq__(self, other):
        if not isinstance(other, FinitePreorder):
            return NotImplemented
        return self.same_order(other)

    def __hash__(self):
        return hash((self.n, tuple(self.labels[:8])))

    def __repr__(self):
        kind = type(self).__name__
        shown = ", ".join(repr(self.label(i)) for i in range(min(self.n, 6)))
        more = ", ..." if self.n > 6 else ""
        return f"{kind}(n={self.n}, [{shown}{more}])"


class FinitePoset(FinitePreorder):
    """A finite preorder whose relation is also antisymmetric."""

    def antisymmetry_violations(self):
        return []

    def dual(self):
        return DualPoset(self)

    @cached_property
    def height(self):
        """Number of edges in a longest chain."""
        h = [0] * self.n
        for x in self.linear_extension:
            below = self.down(x) & ~(1 << x)
            if below:
                h[x] = 1 + max(h[y] for y in iter_bits(below))
        return max(h, default=0)


class SubPoset(FinitePoset):
    """The order induced on a subset of a parent poset."""

    def __init__(self, parent, indices):
        emb = tuple(indices)
        if len(set(emb)) != len(emb):
            raise ValueError("duplicate indices in sub-poset")
        ups = []
        for a in emb:
            ua = parent.up(a)
            ups.append(mask_of(k for k, b in enumerate(emb) if (ua >> b) & 1))
        super().__init__([parent.label(a) for a in emb], ups)
        self.parent = parent
        self.embedding = emb
        self._position = {a: k for k, a in enumerate(emb)}

    def position(self, parent_index):
        """Index in this sub-poset of a parent element (``KeyError`` if absent)."""
        return self._position[parent_index]


class DualPoset(FinitePoset):
    """The order-dual of a poset, sharing its labels."""

    def __init__(self, base):
        self.base = base

    @property
    def n(self):
        return self.base.n

    @property
    def labels(self):
        return self.base.labels

    def label(self, i):
        return self.base.label(i)

    def index(self, label):
        return self.base.index(label)

    def leq(self, i, j):
        return self.base.leq(j, i)

    def up(self, i):
        return self.base.down(i)

    def down(self, i):
        return self.base.up(i)

    def join(self, x, y):
        return self.base.meet(x, y)

    def meet(self, x, y):
        return self.base.join(x, y)

    def bottom(self):
        return self.base.top()

    def top(self):
        return self.base.bottom()

    def is_finitely_cocomplete(self):
        if isinstance(self.base, PowersetLattice):
            return True
        return self.n > 0 and self.bottom() is not None and all(
            self.join(x, y) is not None for x in range(self.n) for y in range(x + 1, self.n)
        )

    def dual(self):
        return self.base

    def same_order(self, other):
        if isinstance(other, DualPoset):
            return self.base.same_order(other.base)
        return super().same_order(other)

    def __hash__(self):
        return hash(("dual", hash(self.base)))

    @cached_property
    def linear_extension(self):
        return tuple(reversed(self.base.linear_extension))

    def __repr__(self):
        return f"DualPoset({self.base!r})"


class PowersetLattice(FinitePoset):
    """Subsets of a ground set ordered by inclusion.

    Element ``i`` is the subset whose bit mask is ``i`` (bit ``k`` = ground
    element ``k``). Labels are sorted tuples of ground labels.
    """

    def __init__(self, ground):
        ground = tuple(ground)
        if len(set(ground)) != len(ground):
            raise SchemaError("ground set has duplicate labels")
        if len(ground) > MAX_POWERSET_GROUND:
            raise GroundSetTooLarge(
                f"ground set of {len(ground)} exceeds the cap of {MAX_POWERSET_GROUND}"
            )
        self.ground = ground
        self._gindex = {_hashable(g): k for k, g in enumerate(ground)}

    @property
    def k(self):
        return len(self.ground)

    @property
    def n(self):
        return 1 << len(self.ground)

    @property
    def full(self):
        return self.n - 1

    @property
    def labels(self):
        return tuple(self.label(i) for i in range(self.n))

    def label(self, i):
        return tuple(self.ground[b] for b in iter_bits(i))

    def subset_mask(self, members):
        m = 0
        for g in members:
            try:
                m |= 1 << self._gindex[_hashable(g)]
            except KeyError:
                raise SchemaError(f"{g!r} is not in the ground set") from None
        return m

    def index(self, label):
        if isinstance(label, (str, bytes)):
            raise SchemaError(f"powerset element must be a collection, got {label!r}")
        return self.subset_mask(label)

    def leq(self, i, j):
        return i & ~j == 0

    def lt(self, i, j):
        return i != j and i & ~j == 0

    def up(self, i):
        free = self.full & ~i
        out = 0
        sub = free
        while True:
            out |= 1 << (i | sub)
            if sub == 0:
                break
            sub = (sub - 1) & free
        return out

    def down(self, i):
        out = 0
        sub = i
        while True:
            out |= 1 << sub
            if sub == 0:
                break
            sub = (sub - 1) & i
        return out

    def join(self, x, y):
        return x | y

    def meet(self, x, y):
        return x & y

    def bottom(self):
        return 0

    def top(self):
        return self.full

    def is_finitely_cocomplete(self):
        return True

    def is_lattice(self):
        return True

    def is_antisymmetric(self):
        return True

    def antisymmetry_violations(self):
        return []

    @property
    def height(self):
        return self.k

    @cached_property
    def linear_extension(self):
        return tuple(sorted(range(self.n), key=lambda i: (i.bit_count(), i)))

    def covers(self):
        return [(i, i | (1 << b)) for i in range(self.n) for b in range(self.k) if not i >> b & 1]

    def same_order(self, other):
        if isinstance(other, PowersetLattice):
            return self.ground == other.ground
        return super().same_order(other)

    def __hash__(self):
        return hash(("powerset", self.ground))

    def __repr__(self):
        return f"PowersetLattice({list(self.ground)!r})"


def _hashable(label):
    if isinstance(label, list):
        return tuple(_hashable(x) for x in label)
    return label


# -- construction and validation ------------------------------------------


def _rows_from_pairs(labels, pairs):
    index = {}
    for i, lab in enumerate(labels):
        lab = _hashable(lab)
        if lab in index:
            raise SchemaError(f"duplicate element label {lab!r}")
        index[lab] = i
    rows = [0] * len(labels)
    for pair in pairs:
        try:
            a, b = pair
        except (TypeError, ValueError):
            raise SchemaError(f"relation entry {pair!r} is not a pair") from None
        try:
            rows[index[_hashable(a)]] |= 1 << index[_hashable(b)]
        except KeyError as exc:
            raise SchemaError(f"relation mentions unknown element {exc.args[0]!r}") from None
    return rows


def _rows_from_matrix(n, matrix):
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise SchemaError(f"relation matrix must be {n}x{n}")
    return [mask_of(j for j in range(n) if matrix[i][j]) for i in range(n)]


def validate_preorder(elements, pairs=None, *, matrix=None):
    """Check reflexivity and transitivity of a relation taken as given.

    The relation is supplied either as label ``pairs`` or as an ``n x n``
    boolean ``matrix``. Every violation is collected before raising.
    """
    labels = tuple(_hashable(e) for e in elements)
    n = len(labels)
    if n == 0:
        raise SchemaError("a preorder needs at least one element")
    if n > MAX_EXPLICIT_ELEMENTS:
        raise SpaceTooLarge(f"{n} elements exceeds the cap of {MAX_EXPLICIT_ELEMENTS}")
    if (pairs is None) == (matrix is None):
        raise SchemaError("give exactly one of pairs or matrix")
    rows = _rows_from_pairs(labels, pairs) if matrix is None else _rows_from_matrix(n, matrix)

    missing = [i for i in range(n) if not rows[i] >> i & 1]
    broken = []
    for x in range(n):
        for y in iter_bits(rows[x]):
            for z in iter_bits(rows[y] & ~rows[x]):
                broken.append((x, y, z))
    if missing:
        raise MissingReflexive(
            f"missing reflexive pair at element(s) {missing}", missing, broken
        )
    if broken:
        raise BrokenTransitivity(
            f"{len(broken)} transitivity violation(s), first {broken[0]}", missing, broken
        )
    return FinitePreorder(labels, rows)


def validate_poset(elements, pairs=None, *, matrix=None):
    return validate_preorder(elements, pairs, matrix=matrix).as_poset()


def preorder_from_generators(elements, pairs):
    """Reflexive-transitive closure of generating pairs, then validation."""
    labels = tuple(_hashable(e) for e in elements)
    if not labels:
        raise SchemaError("a preorder needs at least one element")
    if len(labels) > MAX_EXPLICIT_ELEMENTS:
        raise SpaceTooLarge(
            f"{len(labels)} elements exceeds the cap of {MAX_EXPLICIT_ELEMENTS}"
        )
    rows = _rows_from_pairs(labels, pairs)
    rows = [r | (1 << i) for i, r in enumerate(rows)]
    rows = transitive_closure(rows)
    return FinitePreorder(labels, rows)


def poset_from_generators(elements, pairs):
    return preorder_from_generators(elements, pairs).as_poset()


def chain(n, labels=None):
    labels = labels if labels is not None else list(range(n))
    return FinitePoset(labels, [mask_of(range(i, n)) for i in range(n)])


def antichain(n, labels=None):
    labels = labels if labels is not None else list(range(n))
    return FinitePoset(labels, [1 << i for i in range(n)])


def powerset_lattice(ground):
    return PowersetLattice(ground)


def explicit(p):
    """Tabulated copy of any poset (materializes up-sets)."""
    if p.n > MAX_EXPLICIT_ELEMENTS:
        raise SpaceTooLarge(f"{p.n} elements exceeds the cap of {MAX_EXPLICIT_ELEMENTS}")
    return FinitePoset(p.labels, [p.up(i) for i in range(p.n)])


# -- module-level operations --------------------------------------------------


def join(p, x, y):
    return p.join(x, y)


def meet(p, x, y):
    return p.meet(x, y)


def is_finitely_cocomplete(p):
    return p.is_finitely_cocomplete()


def hasse_cover(p):
    """Cover pairs ``(x, y)``: ``x < y`` with nothing strictly between."""
    if isinstance(p, PowersetLattice):
        return sorted(p.covers())
    if not isinstance(p, FinitePoset):
        p = p.as_poset()
    out = []
    for x in range(p.n):
        strict = p.up(x) & ~(1 << x)
        for y in p.minimal_elements(strict):
            out.append((x, y))
    return sorted(out)


def reflexive_transitive_closure_of_covers(n, covers):
    rows = [1 << i for i in range(n)]
    for x, y in covers:
        rows[x] |= 1 << y
    return transitive_closure(rows)


class MapSpace(FinitePreorder):
    """Order-preserving maps ``domain -> codomain`` under the pointwise order."""

    def __init__(self, domain, codomain, assignments):
        self.domain = domain
        self.codomain = codomain
        self.assignments = tuple(tuple(a) for a in assignments)
        ups = []
        for f in self.assignments:
            row = 0
            for k, g in enumerate(self.assignments):
                if all(codomain.leq(f[t], g[t]) for t in range(domain.n)):
                    row |= 1 << k
            ups.append(row)
        labels = [tuple(codomain.label(v) for v in f) for f in self.assignments]
        super().__init__(labels, ups)

    def monotone_map(self, i):
        return MonotoneMap(self.domain, self.codomain, self.assignments[i], check=False)


def enumerate_monotone_maps(domain, codomain):
    """All order-preserving assignments, in lexicographic order of values."""
    order = domain.linear_extension
    values = [None] * domain.n
    out = []

    def backtrack(k):
        if k == len(order):
            out.append(tuple(values))
            return
        x = order[k]
        placed = [y for y in order[:k]]
        for v in range(codomain.n):
            ok = True
            for y in placed:
                if domain.leq(y, x) and not codomain.leq(values[y], v):
                    ok = False
                    break
                if domain.leq(x, y) and not codomain.leq(v, values[y]):
                    ok = False
                    break
            if ok:
                values[x] = v
                backtrack(k + 1)
        values[x] = None

    backtrack(0)
    return sorted(out)


def map_space(domain, codomain):
    if codomain.n ** domain.n > enumeration_budget():
        raise SpaceTooLarge(
            f"{codomain.n}^{domain.n} candidate maps exceeds the enumeration budget"
        )
    return MapSpace(domain, codomain, enumerate_monotone_maps(domain, codomain))


# -- monotone maps -----------------------------------------------------------


class MonotoneMap:
    """An order-preserving map between finite preorders, tabulated by index."""

    def __init__(self, domain, codomain, assignment, check=True):
        assignment = tuple(int(v) for v in assignment)
        if len(assignment) != domain.n:
            raise SchemaError(
                f"assignment has {len(assignment)} entries, domain has {domain.n}"
            )
        for v in assignment:
            if not 0 <= v < codomain.n:
                raise SchemaError(f"assignment value {v} outside codomain")
        self.domain = domain
        self.codomain = codomain
        self.assignment = assignment
        if check:
            bad = self.monotonicity_violation()
            if bad is not None:
                x, y = bad
                raise NotMonotone(
                    f"{domain.label(x)!r} <= {domain.label(y)!r} but images are not ordered",
                    bad,
                )

    @classmethod
    def from_function(cls, domain, codomain, fn, check=True):
        return cls(domain, codomain, [fn(i) for i in range(domain.n)], check=check)

    def __call__(self, i):
        return self.assignment[i]

    def monotonicity_violation(self):
        a = self.assignment
        cod = self.codomain
        if isinstance(self.domain, FinitePoset):
            pairs = hasse_cover(self.domain)
        else:
            pairs = self.domain.pairs()
        for x, y in pairs:
            if not cod.leq(a[x], a[y]):
                return (x, y)
        return None

    def image_mask(self):
        return mask_of(self.assignment)

    def is_injective(self):
        return len(set(self.assignment)) == len(self.assignment)

    def is_surjective(self):
        return len(set(self.assignment)) == self.codomain.n

    def compose(self, inner):
        """``self ∘ inner``."""
        if not inner.codomain.same_order(self.domain):
            raise CarrierMismatch("inner codomain differs from outer domain")
        return MonotoneMap(
            inner.domain, self.codomain, [self.assignment[v] for v in inner.assignment], check=False
        )

    def join_defect(self, x, y):
        """``(f(x∨y), f(x)∨f(y))`` or ``None`` if a join is missing."""
        j = self.domain.join(x, y)
        if j is None:
            return None
        rhs = self.codomain.join(self.assignment[x], self.assignment[y])
        if rhs is None:
            return None
        return self.assignment[j], rhs

    def as_dict(self):
        return {self.domain.label(i): self.codomain.label(v) for i, v in enumerate(self.assignment)}

    def __eq__(self, other):
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return (
            self.assignment == other.assignment
            and self.domain.same_order(other.domain)
            and self.codomain.same_order(other.codomain)
        )

    def __hash__(self):
        return hash(self.assignment)

    def __repr__(self):
        return f"MonotoneMap({self.domain!r} -> {self.codomain!r})"


def identity_map(p):
    return MonotoneMap(p, p, range(p.n), check=False)
