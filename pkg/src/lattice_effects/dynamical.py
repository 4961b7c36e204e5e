"""Timed contagion over a finite horizon: trajectories, projections, colimits, aggregation."""

from dataclasses import dataclass
from itertools import product

import numpy as np

from ._config import MAX_EXPLICIT_ELEMENTS
from .contagion import Description, interpret, phenome_of
from .errors import HorizonTooShort, PropositionViolation, SchemaError, SpaceTooLarge
from .galois import check_veil
from .order import FinitePoset, MonotoneMap, PowersetLattice, _hashable


class TimedDescription:
    """Rules ``(S, d)`` per node: once ``S`` is infected at time ``m``, the node is infected at ``m + d``."""

    def __init__(self, ground, rules=None, d_max=None):
        self.ground = tuple(_hashable(g) for g in ground)
        self.carrier = PowersetLattice(self.ground)
        per_node = [set() for _ in self.ground]
        for node, pairs in (rules or {}).items():
            try:
                i = self.ground.index(_hashable(node))
            except ValueError:
                raise SchemaError(f"rule for unknown node {node!r}") from None
            for subset, delay in pairs:
                if not isinstance(delay, int) or isinstance(delay, bool) or delay < 0:
                    raise SchemaError(f"delay {delay!r} must be a non-negative integer")
                m = int(subset) if isinstance(subset, (int, np.integer)) else self.carrier.subset_mask(subset)
                per_node[i].add((m, delay))
        self.rules = tuple(tuple(sorted(r)) for r in per_node)
        largest = max((d for r in self.rules for _, d in r), default=0)
        if d_max is None:
            d_max = largest
        elif largest > d_max:
            raise SchemaError(f"a rule delay of {largest} exceeds the declared d_max {d_max}")
        self.d_max = int(d_max)

    @property
    def n(self):
        return len(self.ground)

    def default_horizon(self):
        """``|Σ|·(d_max+1)``: enough steps to reach and certify the final state."""
        return self.n * (self.d_max + 1)

    def __eq__(self, other):
        if not isinstance(other, TimedDescription):
            return NotImplemented
        return (self.ground, self.rules, self.d_max) == (other.ground, other.rules, other.d_max)

    def __hash__(self):
        return hash((self.ground, self.rules, self.d_max))

    def __repr__(self):
        return f"TimedDescription({list(self.ground)!r}, d_max={self.d_max})"


def strip_delays(td):
    """Untimed description with every ``(S, d)`` replaced by ``S``."""
    return Description.from_masks(td.ground, [{m for m, _ in r} for r in td.rules])


# -- trajectories ---------------------------------------------------------------


@dataclass(frozen=True)
class Trajectory:
    """Subsets ``X_0 ⊆ X_1 ⊆ ... ⊆ X_T`` stored as bit masks."""

    states: tuple

    def __post_init__(self):
        s = self.states
        if not s:
            raise SchemaError("a trajectory needs at least one state")
        for a, b in zip(s, s[1:]):
            if a & ~b:
                raise SchemaError("trajectory is not monotone in time")

    @property
    def horizon(self):
        return len(self.states) - 1

    def __getitem__(self, t):
        return self.states[t]

    def join(self, other):
        return Trajectory(tuple(a | b for a, b in zip(self.states, other.states)))

    def meet(self, other):
        return Trajectory(tuple(a & b for a, b in zip(self.states, other.states)))

    def __le__(self, other):
        return all(a & ~b == 0 for a, b in zip(self.states, other.states))


def constant_trajectory(mask, horizon):
    return Trajectory((mask,) * (horizon + 1))


def empty_trajectory(horizon):
    return constant_trajectory(0, horizon)


def colim(traj):
    """Union over all time steps."""
    out = 0
    for s in traj.states:
        out |= s
    return out


def _close_instant(td, state):
    changed = True
    while changed:
        changed = False
        for i, rules in enumerate(td.rules):
            if state >> i & 1:
                continue
            if any(d == 0 and m & ~state == 0 for m, d in rules):
                state |= 1 << i
                changed = True
    return state


class TimedSystem:
    """The self-map on trajectories induced by a timed description.

    ``apply(a)`` is the least monotone trajectory ``X ≥ a`` closed under every
    rule: ``S ⊆ X_m`` implies ``i ∈ X_{m+d}``.
    """

    def __init__(self, td, horizon):
        if horizon < 0:
            raise SchemaError("horizon must be non-negative")
        self.td = td
        self.horizon = horizon

    def apply(self, a):
        if a.horizon != self.horizon:
            raise SchemaError(f"trajectory horizon {a.horizon} differs from {self.horizon}")
        td = self.td
        xs = []
        for t in range(self.horizon + 1):
            state = a[t] | (xs[t - 1] if t else 0)
            for i, rules in enumerate(td.rules):
                if state >> i & 1:
                    continue
                for m, d in rules:
                    if 1 <= d <= t and m & ~xs[t - d] == 0:
                        state |= 1 << i
                        break
            xs.append(_close_instant(td, state))
        return Trajectory(tuple(xs))

    __call__ = apply

    def eval(self):
        """Least fixed trajectory, checked to have stabilized by the horizon."""
        x = self.apply(empty_trajectory(self.horizon))
        full = self.td.carrier.full
        T, d = self.horizon, self.td.d_max
        if x[T] != full and (T < d or any(x[t] != x[T] for t in range(T - d, T))):
            raise HorizonTooShort(
                f"trajectory still changing within the last {d + 1} steps of horizon {T}"
            )
        return x


def timed_interpret(td, horizon=None):
    return TimedSystem(td, td.default_horizon() if horizon is None else horizon)


def timed_eval(td, horizon=None):
    return timed_interpret(td, horizon).eval()


def agg(td):
    """Collapse time: the untimed closure operator of the delay-free rules."""
    return interpret(strip_delays(td))


def agg_semantic(td, horizon=None):
    """``a ↦ colim f(constant a)`` tabulated over all subsets."""
    f = timed_interpret(td, horizon)
    table = [colim(f(constant_trajectory(a, f.horizon))) for a in range(td.carrier.n)]
    return table


@dataclass(frozen=True)
class SquareReport:
    passed: bool
    lhs: int  # colim(eval(td))
    rhs: int  # eval(agg(td))
    horizon: int


def commuting_square_check(td, horizon=None):
    """Compare the union over time of the timed outcome with the untimed outcome."""
    f = timed_interpret(td, horizon)
    lhs = colim(f.eval())
    rhs = phenome_of(strip_delays(td))
    return SquareReport(lhs == rhs, lhs, rhs, f.horizon)


# -- trajectory lattice and projections ----------------------------------------------


class TrajectoryLattice(FinitePoset):
    """All monotone trajectories on ``2^Σ`` over ``{0..T}``, ordered pointwise.

    A trajectory is indexed by its entry-time vector ``e`` (``e_i = T+1`` means
    node ``i`` never enters), enumerated in lexicographic order.
    """

    def __init__(self, ground, horizon):
        self.ground_set = PowersetLattice(ground)
        k, T = self.ground_set.k, horizon
        count = (T + 2) ** k
        if count > MAX_EXPLICIT_ELEMENTS:
            raise SpaceTooLarge(f"{count} trajectories exceeds the cap of {MAX_EXPLICIT_ELEMENTS}")
        entries = np.array(list(product(range(T + 2), repeat=k)), dtype=np.int64).reshape(count, k)
        self.horizon = T
        self.entries = entries
        self.trajectories = [
            Trajectory(tuple(sum(1 << i for i in range(k) if e[i] <= t) for t in range(T + 1)))
            for e in entries.tolist()
        ]
        self._index = {tr.states: n for n, tr in enumerate(self.trajectories)}
        ups = []
        for e in entries:
            above = np.all(entries <= e, axis=1)
            ups.append(sum(1 << int(j) for j in np.nonzero(above)[0]))
        labels = [
            tuple(self.ground_set.label(s) for s in tr.states) for tr in self.trajectories
        ]
        super().__init__(labels, ups)

    def index_of(self, traj):
        return self._index[tuple(traj.states)]


def project_at(ground, horizon, i):
    """The veil ``X ↦ X_i`` from trajectories to subsets."""
    lat = ground if isinstance(ground, TrajectoryLattice) else TrajectoryLattice(ground, horizon)
    if not 0 <= i <= lat.horizon:
        raise SchemaError(f"time index {i} outside 0..{lat.horizon}")
    phi = MonotoneMap(lat, lat.ground_set, [tr[i] for tr in lat.trajectories], check=False)
    v = check_veil(phi)
    for p in range(lat.ground_set.n):
        expected = Trajectory(tuple(p if t >= i else 0 for t in range(lat.horizon + 1)))
        if lat.trajectories[v.left[p]] != expected:
            raise PropositionViolation("left adjoint of a projection is not the delayed constant")
    return v


def timed_self_map(td, lattice):
    """Tabulate the timed system on a materialized trajectory lattice."""
    f = TimedSystem(td, lattice.horizon)
    return [lattice.index_of(f(tr)) for tr in lattice.trajectories]


# -- filtrations of behaviors ------------------------------------------------------


def filtration(behavior, universes):
    """``F_i B = p_i^{-1}(p_i B)`` for each coordinate ``i`` (0-based).

    ``behavior`` is a set of tuples in the product of ``universes``.
    """
    universes = [tuple(u) for u in universes]
    if len(universes) > 4:
        raise SchemaError("filtrations are computed for at most 4 coordinates")
    full = set(product(*universes))
    behavior = {tuple(b) for b in behavior}
    if not behavior <= full:
        raise SchemaError("behavior contains tuples outside the product universe")
    out = []
    for i in range(len(universes)):
        shadow = {b[i] for b in behavior}
        out.append(frozenset(u for u in full if u[i] in shadow))
    return out


def filtration_meet(behavior, universes):
    """Intersection of all ``F_i B``; it always contains ``B``."""
    stages = filtration(behavior, universes)
    out = set(product(*[tuple(u) for u in universes]))
    for s in stages:
        out &= s
    return frozenset(out)


__all__ = [
    "TimedDescription",
    "Trajectory",
    "TimedSystem",
    "TrajectoryLattice",
    "SquareReport",
    "strip_delays",
    "constant_trajectory",
    "empty_trajectory",
    "colim",
    "timed_interpret",
    "timed_eval",
    "agg",
    "agg_semantic",
    "commuting_square_check",
    "project_at",
    "timed_self_map",
    "filtration",
    "filtration_meet",
]
