"""Finite structures over a signature, arithmetic expansion, enumeration
and JSON (de)serialization."""

import itertools
import json
from dataclasses import dataclass, field

from .errors import CapExceeded, StructureError, WeakfoError, structure_cap
from .syntax import (ARITHMETIC_RELATIONS, Signature, Succ, Term, Var, Zero)


@dataclass(frozen=True)
class Structure:
    """A finite interpretation: universe {0..size-1}, relation tables and
    constant values.  Arithmetic relations are derived, never stored."""

    sig: Signature
    size: int
    relations: dict  # name -> frozenset of tuples
    constants: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "relations",
            {name: frozenset(tuple(t) for t in table)
             for name, table in self.relations.items()})
        problems = validate(self)
        if problems:
            raise StructureError("; ".join(problems))

    def table(self, name: str) -> frozenset:
        return self.relations.get(name, frozenset())

    def has_tuple(self, name: str, tup: tuple) -> bool:
        n = self.size
        if self.sig.arithmetic:
            if name == "<":
                return tup[0] < tup[1]
            if name == "add":
                return tup[0] + tup[1] == tup[2]
            if name == "mult":
                return tup[0] * tup[1] == tup[2]
        return tup in self.table(name)


@dataclass(frozen=True)
class Assignment:
    values: dict

    def get(self, name):
        return self.values[name]


_UNSET = object()


def eval_term(struct: Structure, t: Term, asg: dict) -> int:
    """Value of a term; succ clamps at the maximum element."""
    if type(t) is Var:  # hot path
        v = asg.get(t.name, _UNSET)
        if v is _UNSET:
            raise WeakfoError(f"unassigned variable {t.name.render()}")
        return v
    k = 0
    while isinstance(t, Succ):
        k += 1
        t = t.inner
    if isinstance(t, Zero):
        base = 0
    elif isinstance(t, Var):
        if t.name not in asg:
            raise WeakfoError(f"unassigned variable {t.name.render()}")
        base = asg[t.name]
    else:
        raise WeakfoError(f"bad term {t!r}")
    return min(base + k, struct.size - 1)


def validate(struct: Structure) -> list:
    """All invariant violations, as human-readable strings (empty = ok)."""
    problems = []
    if struct.size < 1:
        problems.append("universe must have size >= 1")
    for name, table in struct.relations.items():
        arity = struct.sig.relations.get(name)
        if arity is None:
            if struct.sig.arithmetic and name in ARITHMETIC_RELATIONS:
                problems.append(f"derived relation {name!r} must not be stored")
            else:
                problems.append(f"relation {name!r} not in signature")
            continue
        for tup in table:
            if len(tup) != arity:
                problems.append(f"tuple {tup} has wrong arity for {name!r}")
            elif any(not (0 <= v < struct.size) for v in tup):
                problems.append(f"tuple {tup} of {name!r} out of range")
    for name in struct.sig.relations:
        pass  # absent table means empty relation
    for name, value in struct.constants.items():
        if name not in struct.sig.constants:
            problems.append(f"constant {name!r} not in signature")
        elif not (0 <= value < struct.size):
            problems.append(f"constant {name!r} out of range")
    for name in struct.sig.constants:
        if name not in struct.constants:
            problems.append(f"constant {name!r} not interpreted")
    return problems


def all_tuples(n: int, arity: int):
    return list(itertools.product(range(n), repeat=arity))


def count_structures(sig: Signature, n: int) -> int:
    total = 1
    for arity in sig.relations.values():
        total *= 2 ** (n ** arity)
    total *= n ** len(sig.constants)
    return total


def enumerate_structures(sig: Signature, n: int, cap: int = None):
    """Yield every structure of size n over sig exactly once.

    Order: lexicographic over relation tuple bitmasks (relations in
    sorted name order, first relation most significant), then constant
    values (sorted name order, odometer).
    """
    if n < 1:
        raise WeakfoError("size must be >= 1")
    cap = cap if cap is not None else structure_cap()
    total = count_structures(sig, n)
    if total > cap:
        raise CapExceeded(f"{total} structures of size {n} exceed the cap {cap}")
    rel_names = sorted(sig.relations)
    tuple_space = {name: all_tuples(n, sig.relations[name]) for name in rel_names}
    const_names = sorted(sig.constants)

    mask_ranges = [range(2 ** len(tuple_space[name])) for name in rel_names]
    const_ranges = [range(n) for _ in const_names]
    for masks in itertools.product(*mask_ranges):
        tables = {}
        for name, mask in zip(rel_names, masks):
            tuples = tuple_space[name]
            chosen = frozenset(tuples[i] for i in range(len(tuples)) if mask >> i & 1)
            tables[name] = chosen
        for values in itertools.product(*const_ranges):
            constants = dict(zip(const_names, values))
            yield Structure(sig, n, tables, constants)


def induced(struct: Structure, subset) -> Structure:
    """Substructure induced on the given elements, re-indexed to
    {0..len(subset)-1} preserving the original order."""
    subset = list(subset)
    if len(set(subset)) != len(subset):
        raise StructureError("duplicate element in induced subset")
    if any(not (0 <= v < struct.size) for v in subset):
        raise StructureError("element out of range in induced subset")
    if not subset:
        raise StructureError("induced substructure must be nonempty")
    subset = sorted(subset)
    index = {v: i for i, v in enumerate(subset)}
    keep = set(subset)
    tables = {}
    for name, table in struct.relations.items():
        tables[name] = frozenset(
            tuple(index[v] for v in tup) for tup in table if all(v in keep for v in tup))
    constants = {}
    for name, value in struct.constants.items():
        if value not in keep:
            raise StructureError(f"constant {name!r} not in induced subset")
        constants[name] = index[value]
    return Structure(struct.sig, len(subset), tables, constants)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def signature_to_obj(sig: Signature) -> dict:
    return {
        "relations": {name: sig.relations[name] for name in sorted(sig.relations)},
        "constants": sorted(sig.constants),
        "arithmetic": sig.arithmetic,
    }


def signature_from_obj(obj: dict) -> Signature:
    return Signature(dict(obj["relations"]), frozenset(obj.get("constants", ())),
                     bool(obj.get("arithmetic", False)))


def json_encode(struct: Structure) -> str:
    obj = {
        "signature": signature_to_obj(struct.sig),
        "size": struct.size,
        "relations": {name: sorted([list(t) for t in struct.relations.get(name, ())])
                      for name in sorted(struct.sig.relations)},
        "constants": {name: struct.constants[name] for name in sorted(struct.constants)},
    }
    return json.dumps(obj, sort_keys=True)


def json_decode(text: str, sig: Signature = None) -> Structure:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise StructureError(f"malformed JSON: {e}")
    if sig is None:
        sig = signature_from_obj(obj["signature"])
    if "size" not in obj or "relations" not in obj:
        raise StructureError("missing 'size' or 'relations' key")
    tables = {}
    for name, rows in obj["relations"].items():
        tables[name] = frozenset(tuple(r) for r in rows)
    for name in sig.relations:
        if name not in obj["relations"]:
            raise StructureError(f"missing relation key {name!r}")
    constants = {name: v for name, v in obj.get("constants", {}).items()}
    return Structure(sig, obj["size"], tables, constants)
