"""Deterministic contagion: rule descriptions, cascades, interconnection, and the phenome veil."""

import random
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ._config import MAX_SYSTEM_LATTICE_GROUND
from .errors import (
    AxiomViolation,
    GroundMismatch,
    GroundSetTooLarge,
    PropositionViolation,
    SchemaError,
)
from .galois import Veil, check_veil
from .operators import ClosureOperator, check_closure, enumerate_closure_operators
from .order import FinitePoset, MonotoneMap, PowersetLattice, _hashable, mask_of


class Description:
    """Per-node neighborhood rules over a ground set of nodes.

    Node ``i`` becomes infected once every node of one of its rule subsets is
    infected. Rules are stored as bit masks over ``ground``, deduplicated and
    sorted per node.
    """

    def __init__(self, ground, rules=None):
        self.ground = tuple(_hashable(g) for g in ground)
        self.carrier = PowersetLattice(self.ground)
        rules = rules or {}
        per_node = [set() for _ in self.ground]
        for node, subsets in rules.items():
            i = self._node_index(node)
            for subset in subsets:
                per_node[i].add(
                    int(subset) if isinstance(subset, (int, np.integer)) else self.carrier.subset_mask(subset)
                )
        for masks in per_node:
            for m in masks:
                if not 0 <= m <= self.carrier.full:
                    raise SchemaError(f"rule mask {m} outside the ground set")
        self.rules = tuple(tuple(sorted(m)) for m in per_node)

    @classmethod
    def from_masks(cls, ground, masks):
        return cls(ground, {g: ms for g, ms in zip(ground, masks)})

    def _node_index(self, node):
        try:
            return self.ground.index(_hashable(node))
        except ValueError:
            raise SchemaError(f"rule for unknown node {node!r}") from None

    @property
    def n(self):
        return len(self.ground)

    def mask(self, members):
        return self.carrier.subset_mask(members)

    def subset(self, mask):
        return self.carrier.label(mask)

    def rule_sets(self):
        """Rules as ``{node: [sorted label tuples]}``."""
        return {
            g: [self.subset(m) for m in ms] for g, ms in zip(self.ground, self.rules)
        }

    def __eq__(self, other):
        if not isinstance(other, Description):
            return NotImplemented
        return self.ground == other.ground and self.rules == other.rules

    def __hash__(self):
        return hash((self.ground, self.rules))

    def __repr__(self):
        return f"Description({list(self.ground)!r}, {self.rule_sets()!r})"


def normalize(d):
    """Drop rule subsets that strictly contain another rule of the same node."""
    kept = []
    for ms in d.rules:
        kept.append([m for m in ms if not any(o != m and o & ~m == 0 for o in ms)])
    return Description.from_masks(d.ground, kept)


def _step(d, state):
    nxt = state
    for i, ms in enumerate(d.rules):
        bit = 1 << i
        if not state & bit:
            for m in ms:
                if m & ~state == 0:
                    nxt |= bit
                    break
    return nxt


@dataclass(frozen=True)
class CascadeTrace:
    """States ``A_0 ⊆ A_1 ⊆ ...`` of a synchronous cascade.

    ``states[converged_at] == states[converged_at + 1]`` and that state is final.
    """

    description: Description
    states: tuple
    converged_at: int

    @property
    def final(self):
        return self.states[-1]

    def labels(self):
        return [self.description.subset(s) for s in self.states]


def _initial_mask(d, initial):
    if initial is None:
        return 0
    if isinstance(initial, (int, np.integer)):
        if not 0 <= initial <= d.carrier.full:
            raise SchemaError(f"initial mask {initial} outside the ground set")
        return int(initial)
    return d.mask(initial)


def cascade_trace(d, initial=None):
    """Synchronous rounds from ``initial`` until two consecutive states agree."""
    state = _initial_mask(d, initial)
    states = [state]
    while True:
        nxt = _step(d, state)
        states.append(nxt)
        if nxt == state:
            break
        state = nxt
    return CascadeTrace(d, tuple(states), len(states) - 2)


def asynchronous_cascade(d, initial=None, seed=0):
    """Fire one eligible node at a time, in an order drawn from ``seed``."""
    rng = random.Random(seed)
    state = _initial_mask(d, initial)
    while True:
        eligible = [
            i
            for i, ms in enumerate(d.rules)
            if not state >> i & 1 and any(m & ~state == 0 for m in ms)
        ]
        if not eligible:
            return state
        state |= 1 << rng.choice(eligible)


def phenome_of(d):
    """Final infected set from the empty start, without building any system lattice."""
    return cascade_trace(d).final


def _interpret_table(d):
    x = np.arange(d.carrier.n, dtype=np.int64)
    for _ in range(d.n + 1):
        y = x.copy()
        for i, ms in enumerate(d.rules):
            if not ms:
                continue
            fired = np.zeros(x.shape, dtype=bool)
            for m in ms:
                fired |= (x & m) == m
            y[fired] |= 1 << i
        if np.array_equal(y, x):
            return x.tolist()
        x = y
    raise PropositionViolation("cascade did not stabilize within |Σ| rounds")


def interpret(d):
    """The closure operator ``S ↦ final infected set from S`` on subsets of the ground set."""
    table = _interpret_table(d)
    try:
        return check_closure(d.carrier, table)
    except AxiomViolation as exc:
        raise PropositionViolation(f"interpreted description is not a closure operator: {exc}") from exc


def merge(d1, d2):
    """Interconnect two systems by taking per-node unions of their rules."""
    if d1.ground != d2.ground:
        raise GroundMismatch(f"ground sets differ: {list(d1.ground)} vs {list(d2.ground)}")
    return Description.from_masks(
        d1.ground, [set(a) | set(b) for a, b in zip(d1.rules, d2.rules)]
    )


def empty_description(ground):
    return Description(ground)


def threshold_description(nodes, edges, thresholds):
    """Threshold model: node ``i`` fires once ``k_i`` of its neighbors are infected."""
    nodes = [_hashable(v) for v in nodes]
    nbrs = {v: set() for v in nodes}
    for e in edges:
        try:
            a, b = (_hashable(x) for x in e)
        except (TypeError, ValueError):
            raise SchemaError(f"edge {e!r} is not a pair") from None
        if a not in nbrs or b not in nbrs:
            raise SchemaError(f"edge {e!r} mentions an unknown node")
        if a != b:
            nbrs[a].add(b)
            nbrs[b].add(a)
    rules = {}
    for v in nodes:
        if isinstance(thresholds, dict) and v not in thresholds:
            raise SchemaError(f"no threshold given for node {v!r}")
        k = thresholds[v] if isinstance(thresholds, dict) else thresholds
        if not isinstance(k, int) or isinstance(k, bool) or k < 0:
            raise SchemaError(f"threshold of {v!r} must be a non-negative integer")
        ordered = [u for u in nodes if u in nbrs[v]]
        rules[v] = [list(c) for c in combinations(ordered, k)] if k <= len(ordered) else []
    return Description(nodes, rules)


def chain_description(n, prefix="x"):
    """Directed path ``x0 -> x1 -> ...``: node ``k+1`` fires once node ``k`` has."""
    ground = [f"{prefix}{k}" for k in range(n)]
    return Description(ground, {ground[k + 1]: [[ground[k]]] for k in range(n - 1)})


# -- veils ------------------------------------------------------------------------


class PhenomeVeil(Veil):
    """Least-fixed-point veil from the lattice of closure operators on ``2^Σ``.

    ``operators[i]`` is the closure operator at system index ``i``.
    """

    def __init__(self, veil, operators):
        super().__init__(veil.phi, veil.left)
        self.operators = tuple(operators)
        self._by_table = {op.table: i for i, op in enumerate(self.operators)}

    def index_of(self, system):
        """System index of a closure operator or a description."""
        if isinstance(system, Description):
            system = interpret(system)
        return self._by_table[system.table]


def _system_label(op):
    return tuple(op.carrier.label(m) for m in sorted(op.fixed_point_indices()))


def phenome_veil(ground, named=None):
    """Materialize every closure operator on ``2^Σ`` and validate ``f ↦ f(∅)``.

    ``named`` maps names to descriptions or closure operators. Named systems
    are placed first (in the given order) and labeled by name; the rest are
    labeled by their sorted families of fixed points.
    """
    ground = tuple(ground)
    if len(ground) > MAX_SYSTEM_LATTICE_GROUND:
        raise GroundSetTooLarge(
            f"the system lattice is materialized only for at most {MAX_SYSTEM_LATTICE_GROUND} nodes"
        )
    carrier = PowersetLattice(ground)
    ops = enumerate_closure_operators(carrier)
    labels = [None] * len(ops)
    order = []
    if named:
        by_table = {op.table: k for k, op in enumerate(ops)}
        for name, system in named.items():
            if isinstance(system, Description):
                if system.ground != carrier.ground:
                    raise GroundMismatch(f"system {name!r} lives on a different ground set")
                system = interpret(system)
            k = by_table[tuple(system.table)]
            if labels[k] is None:
                labels[k] = name
                order.append(k)
    order += [k for k in range(len(ops)) if k not in set(order)]
    ops = [ops[k] for k in order]
    labels = [labels[k] if labels[k] is not None else _system_label(ops[k]) for k in order]

    tables = np.array([op.table for op in ops], dtype=np.int64)
    ups = []
    for t in tables:
        above = np.all((t & ~tables) == 0, axis=1)
        ups.append(mask_of(np.nonzero(above)[0].tolist()))
    system = FinitePoset(labels, ups)
    phi = MonotoneMap(system, carrier, [op.table[0] for op in ops])
    return PhenomeVeil(check_veil(phi), ops)


def zoom_in_veil(f):
    """Inclusion of the fixed points of one system into ``2^Σ``; its left adjoint is ``f``."""
    if not isinstance(f, ClosureOperator):
        f = interpret(f) if isinstance(f, Description) else f
    fix = sorted(f.fixed_point_indices())
    system = f.carrier.induced(fix)
    v = check_veil(MonotoneMap(system, f.carrier, fix, check=False))
    if tuple(fix[k] for k in v.left) != f.table:
        raise PropositionViolation("left adjoint of the zoom-in veil differs from the system")
    return v


__all__ = [
    "Description",
    "CascadeTrace",
    "PhenomeVeil",
    "normalize",
    "cascade_trace",
    "asynchronous_cascade",
    "phenome_of",
    "interpret",
    "merge",
    "empty_description",
    "threshold_description",
    "chain_description",
    "phenome_veil",
    "zoom_in_veil",
]
