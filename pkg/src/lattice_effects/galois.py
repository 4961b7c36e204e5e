"""Veils (right adjoints between finite lattices), generative effects, and stock veils."""

import random
from dataclasses import dataclass

from ._config import enumeration_budget
from .errors import (
    AxiomViolation,
    BudgetExceeded,
    CarrierMismatch,
    MeetNotPreserved,
    NoMinimumExplanation,
    NotCocomplete,
    NotMonotone,
    PropositionViolation,
    SchemaError,
)
from .operators import check_closure, check_kernel
from .order import MonotoneMap, PowersetLattice, chain, identity_map, mask_of


class Veil:
    """A validated veil ``phi: system -> phenome`` with its tabulated left adjoint.

    Build one with :func:`check_veil`.
    """

    def __init__(self, phi, left):
        self.phi = phi
        self.left = tuple(left)

    @property
    def system(self):
        return self.phi.domain

    @property
    def phenome(self):
        return self.phi.codomain

    def __call__(self, s):
        return self.phi.assignment[s]

    def left_adjoint(self, p):
        return self.left[p]

    def __eq__(self, other):
        if not isinstance(other, Veil):
            return NotImplemented
        return self.phi == other.phi

    def __hash__(self):
        return hash(self.phi)

    def __repr__(self):
        return f"Veil({self.system!r} -> {self.phenome!r})"


@dataclass(frozen=True, order=True)
class EffectWitness:
    """A pair of systems whose joint phenome exceeds the join of their phenomes."""

    s: int
    s_prime: int
    lhs: int  # phi(s ∨ s')
    rhs: int  # phi(s) ∨ phi(s')

    def to_record(self, veil):
        sys_, phen = veil.system, veil.phenome
        return {
            "s": sys_.label(self.s),
            "s_prime": sys_.label(self.s_prime),
            "lhs": phen.label(self.lhs),
            "rhs": phen.label(self.rhs),
        }


def _require_cocomplete(p, role):
    if not p.is_finitely_cocomplete():
        raise NotCocomplete(f"{role} is not finitely cocomplete")


def _preimages(phi):
    pre = {}
    for s, v in enumerate(phi.assignment):
        pre[v] = pre.get(v, 0) | (1 << s)
    return pre


def explaining_set(phi, p, _pre=None):
    """Bit mask of the systems ``s`` with ``p <= phi(s)``."""
    pre = _pre if _pre is not None else _preimages(phi)
    cod = phi.codomain
    mask = 0
    for v, m in pre.items():
        if cod.leq(p, v):
            mask |= m
    return mask


def minimal_explanations(phi, p):
    """``(minimum or None, minimal elements)`` of the systems explaining ``p``."""
    mask = explaining_set(phi, p)
    dom = phi.domain
    return dom.minimum(mask), dom.minimal_elements(mask)


def check_veil(phi):
    """Validate V.1 and V.2 for an order-preserving map and tabulate its left adjoint."""
    if not isinstance(phi, MonotoneMap):
        raise SchemaError("check_veil expects a MonotoneMap")
    bad = phi.monotonicity_violation()
    if bad is not None:
        raise NotMonotone("map is not order-preserving", bad)
    sys_, phen = phi.domain, phi.codomain
    _require_cocomplete(sys_, "system space")
    _require_cocomplete(phen, "phenome space")
    if sys_.n * phen.n > enumeration_budget():
        raise BudgetExceeded(
            f"veil check needs {sys_.n}x{phen.n} comparisons, over the enumeration budget"
        )
    pre = _preimages(phi)
    left = []
    for p in range(phen.n):
        mask = explaining_set(phi, p, pre)
        m = sys_.minimum(mask)
        if m is None:
            minimal = sys_.minimal_elements(mask)
            err = NoMinimumExplanation(
                f"phenome {phen.label(p)!r} has {len(minimal)} minimal explanations",
                phen.label(p),
                [sys_.label(s) for s in minimal],
            )
            err.phenome_index = p
            err.minimal_indices = minimal
            raise err
        left.append(m)
    return Veil(phi, left)


def left_adjoint(v, p):
    return v.left[p]


def derived_kernel(v):
    """``F∘Φ`` on the system space."""
    table = [v.left[v.phi.assignment[s]] for s in range(v.system.n)]
    try:
        return check_kernel(v.system, table)
    except AxiomViolation as exc:
        raise PropositionViolation(f"F∘Φ is not a kernel operator: {exc}") from exc


def derived_closure(v):
    """``Φ∘F`` on the phenome space."""
    table = [v.phi.assignment[v.left[p]] for p in range(v.phenome.n)]
    try:
        return check_closure(v.phenome, table)
    except AxiomViolation as exc:
        raise PropositionViolation(f"Φ∘F is not a closure operator: {exc}") from exc


def _witness(v, i, j):
    sys_, phen, a = v.system, v.phenome, v.phi.assignment
    lhs = a[sys_.join(i, j)]
    rhs = phen.join(a[i], a[j])
    if lhs == rhs:
        return None
    if not phen.leq(rhs, lhs):
        raise PropositionViolation("phenome join exceeds the phenome of the system join")
    return EffectWitness(i, j, lhs, rhs)


def detect_effects(v, mode="exhaustive", samples=1000, seed=0):
    """Pairs ``(s, s')`` with ``Φ(s ∨ s') != Φ(s) ∨ Φ(s')``, sorted by index.

    ``mode="exhaustive"`` visits every unordered pair (``s == s'`` included), so an
    empty result certifies the veil sustains no effects. ``mode="sampled"`` draws
    ``samples`` pairs from a generator seeded with ``seed``.
    """
    n = v.system.n
    out = []
    if mode == "exhaustive":
        if n * (n + 1) // 2 > enumeration_budget():
            raise BudgetExceeded(f"{n * (n + 1) // 2} pairs exceeds the enumeration budget")
        for i in range(n):
            for j in range(i, n):
                w = _witness(v, i, j)
                if w is not None:
                    out.append(w)
        return out
    if mode != "sampled":
        raise SchemaError(f"unknown detection mode {mode!r}")
    rng = random.Random(seed)
    seen = set()
    for _ in range(samples):
        i, j = sorted((rng.randrange(n), rng.randrange(n)))
        if (i, j) in seen:
            continue
        seen.add((i, j))
        w = _witness(v, i, j)
        if w is not None:
            out.append(w)
    return sorted(out)


def compose(v2, v1):
    """The veil ``v2 ∘ v1``; its left adjoint is ``F1 ∘ F2``."""
    if not v1.phenome.same_order(v2.system):
        raise CarrierMismatch("phenome space of the inner veil is not the system space of the outer")
    phi = MonotoneMap(
        v1.system, v2.phenome, [v2.phi.assignment[x] for x in v1.phi.assignment], check=False
    )
    try:
        out = check_veil(phi)
    except NoMinimumExplanation as exc:
        raise PropositionViolation("composite of two veils is not a veil") from exc
    expected = tuple(v1.left[q] for q in v2.left)
    if out.left != expected:
        raise PropositionViolation("left adjoint of the composite is not F1∘F2")
    return out


def factorize(v):
    """Split ``v`` as ``ι∘π`` through its image ``Q`` (surjective then injective)."""
    sys_, phen, a = v.system, v.phenome, v.phi.assignment
    image = sorted(set(a))
    q = phen.induced(image)
    pi_map = MonotoneMap(sys_, q, [q.position(x) for x in a], check=False)
    iota_map = MonotoneMap(q, phen, q.embedding, check=False)
    try:
        pi = check_veil(pi_map)
        iota = check_veil(iota_map)
    except NoMinimumExplanation as exc:
        raise PropositionViolation("a factor of a veil failed the veil check") from exc
    if tuple(iota_map.assignment[x] for x in pi_map.assignment) != a:
        raise PropositionViolation("ι∘π does not recompose the veil")
    return pi, iota


def veil_by_meets(phi):
    """Build a veil by checking order preservation plus preservation of all meets.

    On finite lattices the empty meet (top) and binary meets generate all meets.
    """
    sys_, phen, a = phi.domain, phi.codomain, phi.assignment
    for space, role in ((sys_, "system space"), (phen, "phenome space")):
        if not space.is_lattice():
            raise NotCocomplete(f"{role} does not admit all meets")
    bad = phi.monotonicity_violation()
    if bad is not None:
        raise NotMonotone("map is not order-preserving", bad)
    if a[sys_.top()] != phen.top():
        raise MeetNotPreserved("top (empty meet) is not preserved", ())
    for x in range(sys_.n):
        for y in range(x + 1, sys_.n):
            if a[sys_.meet(x, y)] != phen.meet(a[x], a[y]):
                raise MeetNotPreserved(
                    f"meet of {sys_.label(x)!r} and {sys_.label(y)!r} is not preserved", (x, y)
                )
    try:
        return check_veil(phi)
    except NoMinimumExplanation as exc:
        raise PropositionViolation("meet-preserving map failed the veil check") from exc


def meet_witness_phenome(phi, witness):
    """Phenome that a meet-preservation witness leaves without a least explanation."""
    phen = phi.codomain
    if not witness:
        return phen.top()
    x, y = witness
    return phen.meet(phi(x), phi(y))


def dual_veil(v):
    """The left adjoint seen as a veil between the order-dual spaces."""
    f = MonotoneMap(v.phenome.dual(), v.system.dual(), v.left, check=False)
    return check_veil(f)


def verify_galois(v):
    """Exhaustively test the Galois-connection properties of a veil.

    Returns a dict mapping property name to the first counterexample, or
    ``None`` when the property holds.
    """
    sys_, phen, a, F = v.system, v.phenome, v.phi.assignment, v.left
    report = {}

    report["adjunction"] = None
    for p in range(phen.n):
        fp = F[p]
        for s in range(sys_.n):
            if sys_.leq(fp, s) != phen.leq(p, a[s]):
                report["adjunction"] = (p, s)
                break
        if report["adjunction"] is not None:
            break

    report["kernel"] = None
    try:
        derived_kernel(v)
    except PropositionViolation as exc:
        report["kernel"] = str(exc)
    report["closure"] = None
    try:
        derived_closure(v)
    except PropositionViolation as exc:
        report["closure"] = str(exc)

    report["phi_is_max"] = None
    for s in range(sys_.n):
        below = mask_of(p for p in range(phen.n) if sys_.leq(F[p], s))
        if phen.maximum(below) != a[s]:
            report["phi_is_max"] = (s,)
            break

    report["left_preserves_joins"] = None
    for p in range(phen.n):
        for q in range(p, phen.n):
            if F[phen.join(p, q)] != sys_.join(F[p], F[q]):
                report["left_preserves_joins"] = (p, q)
                break
        if report["left_preserves_joins"] is not None:
            break
    return report


# -- stock veils ------------------------------------------------------------------


def identity_veil(p):
    return check_veil(identity_map(p))


def terminal_veil(p):
    """The veil to the one-point space; it hides everything."""
    return check_veil(MonotoneMap(p, chain(1, ["*"]), [0] * p.n, check=False))


def _relation_ground(a_set, b_set):
    return [(a, b) for a in a_set for b in b_set]


def _rows(na, nb):
    width = (1 << nb) - 1
    return [width << (i * nb) for i in range(na)]


def _table(n, fn):
    return [fn(x) for x in range(n)]


def forall_relation_veil(a_set, b_set):
    """``R ↦ {a : (a, b) ∈ R for all b}`` on relations ordered by inclusion."""
    a_set, b_set = list(a_set), list(b_set)
    system = PowersetLattice(_relation_ground(a_set, b_set))
    phenome = PowersetLattice(a_set)
    rows = _rows(len(a_set), len(b_set))
    table = _table(
        system.n, lambda r: mask_of(i for i, row in enumerate(rows) if r & row == row)
    )
    return check_veil(MonotoneMap(system, phenome, table, check=False))


def exists_relation_veil(a_set, b_set):
    """``R ↦ {a : (a, b) ∈ R for some b}`` on relations ordered by reverse inclusion."""
    a_set, b_set = list(a_set), list(b_set)
    system = PowersetLattice(_relation_ground(a_set, b_set)).dual()
    phenome = PowersetLattice(a_set).dual()
    rows = _rows(len(a_set), len(b_set))
    table = _table(system.n, lambda r: mask_of(i for i, row in enumerate(rows) if r & row))
    return check_veil(MonotoneMap(system, phenome, table, check=False))


def exists_projection_map(a_set, b_set):
    """The direct-image projection under forward inclusion; not a veil."""
    a_set, b_set = list(a_set), list(b_set)
    system = PowersetLattice(_relation_ground(a_set, b_set))
    phenome = PowersetLattice(a_set)
    rows = _rows(len(a_set), len(b_set))
    table = _table(system.n, lambda r: mask_of(i for i, row in enumerate(rows) if r & row))
    return MonotoneMap(system, phenome, table)


def behavior_projection_veil(s_set, s2_set):
    """Behaviors in ``S x S'`` (reverse inclusion) projected onto ``S``."""
    s_set, s2_set = list(s_set), list(s2_set)
    system = PowersetLattice(_relation_ground(s_set, s2_set)).dual()
    phenome = PowersetLattice(s_set).dual()
    rows = _rows(len(s_set), len(s2_set))
    table = _table(system.n, lambda b: mask_of(i for i, row in enumerate(rows) if b & row))
    return check_veil(MonotoneMap(system, phenome, table, check=False))


def interdependence_veil(s_set, s2_set):
    """Behaviors projected onto both factors at once.

    The phenome ``(S, S')`` is encoded as a subset of the tagged disjoint union
    ``{("left", s)} ∪ {("right", s')}``, ordered by reverse inclusion.
    """
    s_set, s2_set = list(s_set), list(s2_set)
    na, nb = len(s_set), len(s2_set)
    system = PowersetLattice(_relation_ground(s_set, s2_set)).dual()
    phenome = PowersetLattice([("left", s) for s in s_set] + [("right", t) for t in s2_set]).dual()
    rows = _rows(na, nb)
    cols = [mask_of(i * nb + j for i in range(na)) for j in range(nb)]

    def project(b):
        left = mask_of(i for i, row in enumerate(rows) if b & row)
        right = mask_of(j for j, col in enumerate(cols) if b & col)
        return left | (right << na)

    return check_veil(MonotoneMap(system, phenome, _table(system.n, project), check=False))


def relation_closure(mask, n):
    """Transitive closure of a relation on ``n`` points encoded as an ``n*n``-bit mask."""
    full = (1 << n) - 1
    rows = [(mask >> (i * n)) & full for i in range(n)]
    for k in range(n):
        bk = 1 << k
        for i in range(n):
            if rows[i] & bk:
                rows[i] |= rows[k]
    return sum(r << (i * n) for i, r in enumerate(rows))


def transitive_closure_veil(ground):
    """Inclusion of transitive relations (join = closure of union) into all relations."""
    ground = list(ground)
    n = len(ground)
    phenome = PowersetLattice([(x, y) for x in ground for y in ground])
    if phenome.n > enumeration_budget():
        raise BudgetExceeded(f"2^{n * n} relations exceeds the enumeration budget")
    transitive = [r for r in range(phenome.n) if relation_closure(r, n) == r]
    system = phenome.induced(transitive)
    return check_veil(MonotoneMap(system, phenome, transitive, check=False))


__all__ = [
    "Veil",
    "EffectWitness",
    "check_veil",
    "left_adjoint",
    "derived_kernel",
    "derived_closure",
    "detect_effects",
    "compose",
    "factorize",
    "veil_by_meets",
    "meet_witness_phenome",
    "dual_veil",
    "verify_galois",
    "explaining_set",
    "minimal_explanations",
    "identity_veil",
    "terminal_veil",
    "forall_relation_veil",
    "exists_relation_veil",
    "exists_projection_map",
    "behavior_projection_veil",
    "interdependence_veil",
    "relation_closure",
    "transitive_closure_veil",
]
