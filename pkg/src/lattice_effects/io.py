"""JSON ingestion and emission, plus Graphviz DOT export."""

import json

from .contagion import Description, chain_description, interpret, phenome_veil, threshold_description, zoom_in_veil
from .dynamical import TimedDescription, project_at
from .errors import ParseError, SchemaError
from .galois import (
    behavior_projection_veil,
    check_veil,
    exists_relation_veil,
    forall_relation_veil,
    identity_veil,
    interdependence_veil,
    terminal_veil,
    transitive_closure_veil,
)
from .operators import check_closure, check_kernel
from .order import (
    DualPoset,
    MonotoneMap,
    PowersetLattice,
    _hashable,
    hasse_cover,
    preorder_from_generators,
    validate_preorder,
)

# -- primitives --------------------------------------------------------------------


def loads(text, source="<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_path(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return loads(text, path)


def dumps(obj):
    return json.dumps(to_jsonable(obj), indent=2, ensure_ascii=False)


def to_jsonable(x):
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, frozenset, set)):
        items = [to_jsonable(v) for v in x]
        return sorted(items, key=json.dumps) if isinstance(x, (set, frozenset)) else items
    return x


def _require(obj, key, kind, where):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected a JSON object")
    if key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"{where}: {key!r} must be {_kind_name(kind)}")
    return value


def _kind_name(kind):
    names = {list: "an array", dict: "an object", int: "an integer", str: "a string"}
    return names.get(kind, getattr(kind, "__name__", str(kind)))


def _label_list(values, where):
    if not isinstance(values, list):
        raise SchemaError(f"{where}: expected an array of labels")
    for v in values:
        if isinstance(v, (dict, bool)) or v is None:
            raise SchemaError(f"{where}: label {v!r} must be a string, number or array")
    return [_hashable(v) for v in values]


def format_label(label):
    """Human-readable label: subsets print as ``{A,B}`` and ``∅``."""
    if isinstance(label, tuple):
        if not label:
            return "∅"
        return "{" + ",".join(format_label(x) for x in label) + "}"
    return str(label)


# -- posets ----------------------------------------------------------------------------


def parse_preorder(obj, where="poset"):
    """Read ``{"elements", "leq"}`` or ``{"powerset", "order"}``.

    ``leq`` pairs generate the order by reflexive-transitive closure unless
    ``"closed": true`` is given, in which case they must already form a preorder.
    """
    if isinstance(obj, dict) and "powerset" in obj:
        ground = _label_list(obj["powerset"], f"{where}.powerset")
        order = obj.get("order", "subset")
        p = PowersetLattice(ground)
        if order == "subset":
            return p
        if order == "superset":
            return p.dual()
        raise SchemaError(f"{where}.order must be 'subset' or 'superset'")
    elements = _label_list(_require(obj, "elements", list, where), f"{where}.elements")
    pairs = _require(obj, "leq", list, where)
    if obj.get("closed", False):
        return validate_preorder(elements, pairs)
    return preorder_from_generators(elements, pairs)


def parse_poset(obj, where="poset"):
    p = parse_preorder(obj, where)
    return p if isinstance(p, (PowersetLattice, DualPoset)) else p.as_poset()


def poset_to_json(p):
    if isinstance(p, PowersetLattice):
        return {"powerset": list(p.ground), "order": "subset"}
    if isinstance(p, DualPoset) and isinstance(p.base, PowersetLattice):
        return {"powerset": list(p.base.ground), "order": "superset"}
    return {
        "elements": list(p.labels),
        "leq": [[p.label(x), p.label(y)] for x, y in hasse_cover(p)],
    }


# -- maps -------------------------------------------------------------------------------


def parse_map(obj, where="map", check=True):
    dom = parse_poset(_require(obj, "domain", None, where), f"{where}.domain")
    cod = parse_poset(_require(obj, "codomain", None, where), f"{where}.codomain")
    entries = _require(obj, "map", list, where)
    table = [None] * dom.n
    for entry in entries:
        if not isinstance(entry, list) or len(entry) != 2:
            raise SchemaError(f"{where}.map: entry {entry!r} is not a [from, to] pair")
        x, y = dom.index(_hashable(entry[0])), cod.index(_hashable(entry[1]))
        if table[x] is not None and table[x] != y:
            raise SchemaError(f"{where}.map: {entry[0]!r} is assigned twice")
        table[x] = y
    missing = [dom.label(i) for i, v in enumerate(table) if v is None]
    if missing:
        raise SchemaError(f"{where}.map: no image for {missing[:5]!r}")
    return MonotoneMap(dom, cod, table, check=check)


def map_to_json(f):
    return {
        "domain": poset_to_json(f.domain),
        "codomain": poset_to_json(f.codomain),
        "map": [[f.domain.label(i), f.codomain.label(v)] for i, v in enumerate(f.assignment)],
    }


def parse_operator(obj, where="operator", kind="closure"):
    """Read ``{"carrier", "map"}`` and validate it as a closure or kernel operator."""
    carrier = parse_poset(_require(obj, "carrier", None, where), f"{where}.carrier")
    f = parse_map({"domain": obj["carrier"], "codomain": obj["carrier"], "map": obj.get("map")}, where, check=False)
    check = check_closure if kind == "closure" else check_kernel
    return check(carrier, f.assignment)


def operator_to_json(op):
    c = op.carrier
    return {
        "carrier": poset_to_json(c),
        "map": [[c.label(i), c.label(v)] for i, v in enumerate(op.table)],
    }


# -- descriptions ----------------------------------------------------------------------


def parse_description(obj, where="description"):
    nodes = _label_list(_require(obj, "nodes", list, where), f"{where}.nodes")
    if "thresholds" in obj:
        edges = _require(obj, "edges", list, where)
        thresholds = _require(obj, "thresholds", dict, where)
        return threshold_description(nodes, edges, {_hashable(k): v for k, v in thresholds.items()})
    rules = obj.get("rules", {})
    if not isinstance(rules, dict):
        raise SchemaError(f"{where}.rules must be an object")
    for node, subsets in rules.items():
        if not isinstance(subsets, list) or not all(isinstance(s, list) for s in subsets):
            raise SchemaError(f"{where}.rules[{node!r}] must be an array of arrays")
    return Description(nodes, rules)


def description_to_json(d):
    return {
        "nodes": list(d.ground),
        "rules": {g: [list(s) for s in subs] for g, subs in d.rule_sets().items()},
    }


def parse_timed(obj, where="timed description"):
    nodes = _label_list(_require(obj, "nodes", list, where), f"{where}.nodes")
    rules_in = obj.get("rules", {})
    if not isinstance(rules_in, dict):
        raise SchemaError(f"{where}.rules must be an object")
    rules = {}
    for node, entries in rules_in.items():
        if not isinstance(entries, list):
            raise SchemaError(f"{where}.rules[{node!r}] must be an array")
        pairs = []
        for e in entries:
            subset = _require(e, "set", list, f"{where}.rules[{node!r}]")
            delay = _require(e, "delay", int, f"{where}.rules[{node!r}]")
            pairs.append((subset, delay))
        rules[node] = pairs
    d_max = obj.get("d_max")
    if d_max is not None and (not isinstance(d_max, int) or d_max < 0):
        raise SchemaError(f"{where}.d_max must be a non-negative integer")
    return TimedDescription(nodes, rules, d_max=d_max)


def timed_to_json(td):
    return {
        "nodes": list(td.ground),
        "rules": {
            g: [{"set": list(td.carrier.label(m)), "delay": d} for m, d in r]
            for g, r in zip(td.ground, td.rules)
        },
        "d_max": td.d_max,
    }


# -- veils -----------------------------------------------------------------------------------


def _stock_veil(obj):
    kind = obj["stock"]
    where = f"stock veil {kind!r}"
    if kind == "identity":
        return identity_veil(parse_poset(_require(obj, "poset", None, where)))
    if kind == "terminal":
        return terminal_veil(parse_poset(_require(obj, "poset", None, where)))
    if kind in ("forall_relation", "exists_relation"):
        a = _label_list(_require(obj, "A", list, where), where)
        b = _label_list(_require(obj, "B", list, where), where)
        return (forall_relation_veil if kind == "forall_relation" else exists_relation_veil)(a, b)
    if kind in ("behavior_projection", "interdependence"):
        s = _label_list(_require(obj, "S", list, where), where)
        t = _label_list(_require(obj, "S_prime", list, where), where)
        return (behavior_projection_veil if kind == "behavior_projection" else interdependence_veil)(s, t)
    if kind == "transitive_closure":
        return transitive_closure_veil(_label_list(_require(obj, "ground", list, where), where))
    if kind == "contagion":
        nodes = _label_list(_require(obj, "nodes", list, where), where)
        systems = obj.get("systems", {})
        if not isinstance(systems, dict):
            raise SchemaError(f"{where}.systems must be an object")
        named = {name: parse_description(d, f"{where}.systems[{name!r}]") for name, d in systems.items()}
        return phenome_veil(nodes, named)
    if kind == "zoom_in":
        if "chain" in obj:
            length = _require(obj, "chain", int, where)
            return zoom_in_veil(interpret(chain_description(length)))
        return zoom_in_veil(interpret(parse_description(_require(obj, "description", dict, where))))
    if kind == "project_at":
        nodes = _label_list(_require(obj, "nodes", list, where), where)
        horizon = _require(obj, "horizon", int, where)
        return project_at(nodes, horizon, _require(obj, "time", int, where))
    raise SchemaError(f"unknown stock veil {kind!r}")


STOCK_VEILS = (
    "identity",
    "terminal",
    "forall_relation",
    "exists_relation",
    "behavior_projection",
    "interdependence",
    "transitive_closure",
    "contagion",
    "zoom_in",
    "project_at",
)


def parse_veil(obj, where="veil"):
    """A stock veil ``{"stock": name, ...}`` or a map document checked as a veil."""
    if isinstance(obj, dict) and "stock" in obj:
        return _stock_veil(obj)
    return check_veil(parse_map(obj, where))


# -- DOT ------------------------------------------------------------------------------


def _dot_quote(text):
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def poset_to_dot(p, name="poset"):
    """One node per element, one edge per cover pair, drawn bottom to top."""
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for i in range(p.n):
        lines.append(f"  n{i} [label={_dot_quote(format_label(p.label(i)))}];")
    for x, y in hasse_cover(p):
        lines.append(f"  n{x} -> n{y};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def trace_to_dot(trace, name="cascade"):
    """One layer per distinct cascade state, left to right in time."""
    d = trace.description
    states = trace.states[: trace.converged_at + 1]
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for t, s in enumerate(states):
        lines.append(f"  t{t} [label={_dot_quote(f't={t}: ' + format_label(d.subset(s)))}];")
    for t in range(len(states) - 1):
        lines.append(f"  t{t} -> t{t + 1};")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "loads",
    "load_path",
    "dumps",
    "to_jsonable",
    "format_label",
    "parse_preorder",
    "parse_poset",
    "poset_to_json",
    "parse_map",
    "map_to_json",
    "parse_operator",
    "operator_to_json",
    "parse_description",
    "description_to_json",
    "parse_timed",
    "timed_to_json",
    "parse_veil",
    "STOCK_VEILS",
    "poset_to_dot",
    "trace_to_dot",
]
