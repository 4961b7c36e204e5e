"""Seeded random generators for posets, lattices, maps and descriptions."""

import random
import string

from .contagion import Description
from .dynamical import TimedDescription
from .operators import intersection_closure
from .order import FinitePoset, MonotoneMap, PowersetLattice, mask_of, transitive_closure


def rng_from(seed, stream=""):
    """A generator for ``seed``; each ``stream`` name gets an independent sequence."""
    if isinstance(seed, random.Random):
        return seed
    return random.Random(f"{stream}:{seed}")


def node_names(n):
    return list(string.ascii_uppercase[:n]) if n <= 26 else [f"n{i}" for i in range(n)]


def random_description(seed, n, max_rules=3, p_member=0.4):
    """Each node gets up to ``max_rules`` random rule subsets of the other nodes."""
    rng = rng_from(seed, "description")
    ground = node_names(n)
    masks = []
    for i in range(n):
        ms = set()
        for _ in range(rng.randint(0, max_rules)):
            ms.add(mask_of(j for j in range(n) if j != i and rng.random() < p_member))
        masks.append(ms)
    return Description.from_masks(ground, masks)


def random_timed_description(seed, n, d_max, max_rules=3, p_member=0.4):
    rng = rng_from(seed, "timed")
    base = random_description(rng, n, max_rules, p_member)
    rules = {
        g: [(m, rng.randint(0, d_max)) for m in ms] for g, ms in zip(base.ground, base.rules)
    }
    return TimedDescription(base.ground, rules, d_max=d_max)


def random_poset(seed, n, p_edge=0.3):
    """Random order on ``0..n-1`` compatible with the natural order."""
    rng = rng_from(seed, "poset")
    rows = [1 << i for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p_edge:
                rows[i] |= 1 << j
    return FinitePoset([str(i) for i in range(n)], transitive_closure(rows))


def random_lattice(seed, max_elements=8, ground=3):
    """Random Moore family on a small ground set, ordered by inclusion.

    Any such family is a complete lattice.
    """
    rng = rng_from(seed, "lattice")
    carrier = PowersetLattice(node_names(ground))
    while True:
        picks = [rng.randrange(carrier.n) for _ in range(rng.randint(1, max_elements))]
        fam = intersection_closure(carrier, picks)
        if min(2, max_elements) <= len(fam.members) <= max_elements:
            return carrier.induced(sorted(fam.members))


def random_monotone_map(seed, domain, codomain, attempts=20):
    """Assign values along a linear extension, respecting every lower bound seen so far.

    When the codomain has joins, each element instead gets the join of random
    values drawn for everything below it, which never runs into a dead end.
    Otherwise falls back to a constant map after ``attempts`` dead ends.
    """
    rng = rng_from(seed, "map")
    if codomain.is_finitely_cocomplete():
        raw = [rng.randrange(codomain.n) for _ in range(domain.n)]
        table = [
            codomain.join_all([raw[y] for y in range(domain.n) if domain.leq(y, x)])
            for x in range(domain.n)
        ]
        return MonotoneMap(domain, codomain, table)
    order = domain.linear_extension
    for _ in range(attempts):
        a = [None] * domain.n
        ok = True
        for x in order:
            below = [a[y] for y in range(domain.n) if y != x and domain.leq(y, x)]
            allowed = [q for q in range(codomain.n) if all(codomain.leq(b, q) for b in below)]
            if not allowed:
                ok = False
                break
            a[x] = rng.choice(allowed)
        if ok:
            return MonotoneMap(domain, codomain, a)
    return MonotoneMap(domain, codomain, [rng.randrange(codomain.n)] * domain.n)


__all__ = [
    "rng_from",
    "node_names",
    "random_description",
    "random_timed_description",
    "random_poset",
    "random_lattice",
    "random_monotone_map",
]
