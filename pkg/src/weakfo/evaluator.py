"""Brute-force model checking.

The evaluator implements plain Tarski semantics by complete backtracking
search: quantifier blocks are solved by assigning variables one at a
time, checking every conjunct as soon as its variables are known, and
using literals with a single unknown variable to propose candidate
values.  No algebraic shortcuts are taken; the result is always the one
exhaustive enumeration would produce, it just prunes dead branches
early.  A deliberately naive second evaluator lives in the test suite
and cross-checks this one.
"""

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import CapExceeded, WeakfoError, eval_budget, structure_cap
from .structures import Structure, enumerate_structures, eval_term
from .syntax import (And, Atom, BigOr, Eq, Exists, Forall, Formula, Neq, Not,
                     Or, Signature, Succ, Var, VarName, Zero, free_vars,
                     to_nnf)

_MISSING = object()


class _TooManySolutions(Exception):
    """Internal: a child enumeration exceeded its solution budget."""



def color_names(k: int):
    return [f"C{i}" for i in range(1, k + 1)]


class _Plan:
    """Static solving plan for one quantifier block: variable/conjunct
    incidence, used to keep per-branch work proportional to the touched
    conjuncts instead of the block size."""

    __slots__ = ("names", "conjuncts", "free_sets", "relevant", "relevant_tuple",
                 "var_to_cjs", "base_counts", "entry_ground", "literal_idx",
                 "composite_idx", "literal_names")

    def __init__(self, names, matrix, free_of):
        self.names = names
        names_set = set(names)
        raw = list(matrix.children) if isinstance(matrix, And) else [matrix]
        # tautological pins v = v carry no information for the search
        self.conjuncts = [c for c in raw
                          if not (isinstance(c, Eq) and c.left == c.right)]
        self.free_sets = [free_of(c) for c in self.conjuncts]
        self.relevant = [fs & names_set for fs in self.free_sets]
        self.relevant_tuple = [tuple(rel) for rel in self.relevant]
        self.var_to_cjs = {nm: [] for nm in names}
        for i, rel in enumerate(self.relevant):
            for nm in rel:
                self.var_to_cjs[nm].append(i)
        self.base_counts = [len(rel) for rel in self.relevant]
        self.entry_ground = [i for i, c in enumerate(self.base_counts) if c == 0]
        self.literal_idx = set()
        composite = []
        for i, c in enumerate(self.conjuncts):
            if isinstance(c, (Atom, Eq, Neq)) or (isinstance(c, Not) and isinstance(c.body, (Atom, Eq, Neq))):
                self.literal_idx.add(i)
            elif isinstance(c, (Exists, Forall, And)):
                composite.append(i)
        self.composite_idx = tuple(composite)
        self.literal_names = set()
        for i in self.literal_idx:
            self.literal_names |= self.relevant[i]


class _LimitedSet(set):
    __slots__ = ("limit",)

    def __init__(self, limit):
        super().__init__()
        self.limit = limit

    def add(self, item):
        super().add(item)
        if len(self) > self.limit:
            raise _TooManySolutions()


class _SearchState:
    """Mutable per-run search state with O(degree) bind/undo."""

    __slots__ = ("plan", "order", "unassigned", "counts", "watched",
                 "unit_deg", "unit_total", "trail")

    def __init__(self, plan, order):
        self.plan = plan
        self.order = order
        self.unassigned = set(order)
        self.counts = list(plan.base_counts)
        self.watched = [None] * len(plan.conjuncts)
        self.unit_deg = {}
        self.unit_total = 0
        self.trail = []
        for i, c in enumerate(self.counts):
            if c == 1 and i in plan.literal_idx:
                nm = plan.relevant_tuple[i][0]
                self.watched[i] = nm
                self.unit_deg[nm] = self.unit_deg.get(nm, 0) + 1
                self.unit_total += 1

    def bind(self, bindings, skip, env):
        plan = self.plan
        counts = self.counts
        watched = self.watched
        ground = []
        trail = []
        for name, val in bindings:
            env[name] = val
            self.unassigned.discard(name)
            for i in plan.var_to_cjs[name]:
                c = counts[i] - 1
                counts[i] = c
                if c == 0:
                    w = watched[i]
                    if w is not None:
                        self.unit_deg[w] -= 1
                        self.unit_total -= 1
                        watched[i] = None
                        trail.append((i, w))
                    if i != skip:
                        ground.append(i)
                elif c == 1 and i in plan.literal_idx:
                    for nm in plan.relevant_tuple[i]:
                        if nm in self.unassigned:
                            watched[i] = nm
                            self.unit_deg[nm] = self.unit_deg.get(nm, 0) + 1
                            self.unit_total += 1
                            trail.append((i, None))
                            break
        self.trail.append(trail)
        return ground

    def undo(self, bindings, env):
        plan = self.plan
        counts = self.counts
        watched = self.watched
        for i, old in reversed(self.trail.pop()):
            cur = watched[i]
            if cur is not None:
                self.unit_deg[cur] -= 1
                self.unit_total -= 1
            watched[i] = old
            if old is not None:
                self.unit_deg[old] = self.unit_deg.get(old, 0) + 1
                self.unit_total += 1
        for name, _ in bindings:
            env.pop(name, None)
            self.unassigned.add(name)
            for i in plan.var_to_cjs[name]:
                counts[i] += 1


# Formula-side caches are structure independent, so they are shared by
# every evaluator (values keep the node alive, making id() keys stable).
_FREE_CACHE = {}
_NEG_CACHE = {}
_PLAN_CACHE = {}
_BLOCK_CACHE = {}
_HAS_BIGOR_CACHE = {}


def _contains_bigor(f) -> bool:
    hit = _HAS_BIGOR_CACHE.get(id(f))
    if hit is not None:
        return hit[1]
    from .syntax import BigOr as _B, children_of as _ch
    if isinstance(f, _B):
        result = True
    else:
        result = any(_contains_bigor(c) for c in _ch(f))
    _HAS_BIGOR_CACHE[id(f)] = (f, result)
    return result


class Evaluator:
    """Model checker for one structure; truth memoization is per
    instance, formula-shape caches are shared globally."""

    def __init__(self, struct: Structure, budget: Optional[int] = None):
        self.struct = struct
        self.n = struct.size
        self.budget = budget if budget is not None else eval_budget()
        self.steps = 0
        self._free = _FREE_CACHE
        self._neg = _NEG_CACHE
        self._memo = {}   # (id(node), env items) -> (node, bool)
        self._plans = _PLAN_CACHE

    # -- bookkeeping -------------------------------------------------------

    def _tick(self, weight=1):
        self.steps += weight
        if self.steps > self.budget:
            raise CapExceeded(f"evaluation budget of {self.budget} steps exhausted")

    def _free_of(self, f: Formula) -> frozenset:
        entry = self._free.get(id(f))
        if entry is None:
            fv = free_vars(f)
            self._free[id(f)] = (f, fv)
            return fv
        return entry[1]

    def _negation_of(self, f: Formula) -> Formula:
        entry = self._neg.get(id(f))
        if entry is None:
            neg = to_nnf(Not(f))
            self._neg[id(f)] = (f, neg)
            return neg
        return entry[1]

    # -- public ------------------------------------------------------------

    def sat(self, f: Formula, env: dict) -> bool:
        self._tick()
        if isinstance(f, Atom):
            tup = tuple(eval_term(self.struct, t, env) for t in f.terms)
            return self.struct.has_tuple(f.relation, tup)
        if isinstance(f, Eq):
            return eval_term(self.struct, f.left, env) == eval_term(self.struct, f.right, env)
        if isinstance(f, Neq):
            return eval_term(self.struct, f.left, env) != eval_term(self.struct, f.right, env)
        if isinstance(f, Not):
            return not self.sat(f.body, env)
        if isinstance(f, (And, Or)):
            key = self._memo_key(f, env)
            if key is not None:
                hit = self._memo.get(key)
                if hit is not None:
                    return hit[1]
            if isinstance(f, And):
                result = all(self.sat(c, env) for c in f.children)
            else:
                result = any(self.sat(c, env) for c in f.children)
            if key is not None:
                self._memo[key] = (f, result)
            return result
        if isinstance(f, BigOr):
            for i in f.family:
                self._tick()
                if self.sat(f.gen(i), env):
                    return True
            return False
        if isinstance(f, (Exists, Forall)):
            return self._block(f, env)
        raise WeakfoError(f"cannot evaluate {f!r}")

    def solutions(self, f: Formula, env: dict, targets) -> list:
        """All assignments to `targets` (unassigned variables free in f)
        that make f true, as sorted value tuples."""
        targets = tuple(targets)
        if not targets:
            return [()] if self.sat(f, env) else []
        return sorted(self._solutions(f, env, targets))

    # -- quantifier blocks ---------------------------------------------------

    def _collect_block(self, f: Formula):
        hit = _BLOCK_CACHE.get(id(f))
        if hit is not None:
            return hit[1], hit[2]
        kind = type(f)
        names = []
        body = f
        while isinstance(body, kind):
            if body.name in names:
                names.remove(body.name)  # outer binding is shadowed
            names.append(body.name)
            body = body.body
        _BLOCK_CACHE[id(f)] = (f, names, body)
        return names, body

    def _block(self, f: Formula, env: dict) -> bool:
        key = self._memo_key(f, env)
        if key is not None:
            hit = self._memo.get(key)
            if hit is not None:
                return hit[1]
        names, body = self._collect_block(f)
        if isinstance(f, Forall):
            if _contains_bigor(body):
                result = self._forall_scan(names, body, env)
            else:
                matrix = self._negation_of(body)
                result = not self._exists(names, matrix, env, first_only=True,
                                          project=())
        else:
            result = bool(self._exists(names, body, env, first_only=True,
                                       project=()))
        if key is not None:
            self._memo[key] = (f, result)
        return result

    def _forall_scan(self, names, body, env):
        """Plain product scan for universal blocks whose body holds a
        symbolic disjunction (those cannot be negated lazily)."""
        shadowed = [(nm, env.pop(nm)) for nm in names if nm in env]
        try:
            for combo in itertools.product(range(self.n), repeat=len(names)):
                self._tick()
                for nm, v in zip(names, combo):
                    env[nm] = v
                try:
                    if not self.sat(body, env):
                        return False
                finally:
                    for nm in names:
                        env.pop(nm, None)
            return True
        finally:
            for nm, val in shadowed:
                env[nm] = val

    def _memo_key(self, f, env):
        fv = self._free_of(f)
        if len(fv) > 4:
            return None
        try:
            items = tuple(sorted((v.base, v.serial, env[v]) for v in fv))
        except KeyError:
            return None
        return (id(f), items)

    def _plan_for(self, names, matrix) -> _Plan:
        key = frozenset(names)
        entry = self._plans.get(id(matrix))
        if entry is not None and entry[2] == key:
            return entry[1]
        plan = _Plan(tuple(names), matrix, self._free_of)
        self._plans[id(matrix)] = (matrix, plan, key)
        return plan

    def _exists(self, names, matrix, env, first_only, project, limit=None):
        plan = self._plan_for(names, matrix)
        shadowed = [(nm, env.pop(nm)) for nm in names if nm in env]
        found = _LimitedSet(limit) if limit is not None else set()
        try:
            for i in plan.entry_ground:
                if not self.sat(plan.conjuncts[i], env):
                    return False if first_only else found
            state = _SearchState(plan, list(names))
            ok = self._plan_search(plan, state, 0, env, first_only, project,
                                   found)
        finally:
            for nm, val in shadowed:
                env[nm] = val
        return ok if first_only else found

    def _plan_search(self, plan, state, lo, env, first_only, project,
                     found) -> bool:
        self._tick()
        unassigned = state.unassigned
        if not unassigned:
            if first_only:
                return True
            found.add(tuple(env[v] for v in project))
            return False
        order = state.order
        while lo < len(order) and order[lo] not in unassigned:
            lo += 1

        # Generate the earliest unassigned variable (in binder order) that
        # some live unit literal constrains.  Binder order follows the
        # data flow of generated formulas, which keeps failures local.
        name = None
        cand_best = None
        if state.unit_total:
            pos = lo
            unit_deg = state.unit_deg
            while pos < len(order):
                nm = order[pos]
                if nm in unassigned and unit_deg.get(nm, 0) > 0:
                    name = nm
                    break
                pos += 1
        if name is not None:
            counts = state.counts
            watched = state.watched
            for i in plan.var_to_cjs[name]:
                if counts[i] == 1 and watched[i] is not None:
                    cand = self._literal_candidates(plan.conjuncts[i], env, name)
                    if cand is not None and (cand_best is None or len(cand[2]) < len(cand_best)):
                        cand_best = cand[2]
                        if len(cand_best) <= 1:
                            break
        if cand_best is not None and len(cand_best) <= 2:
            return self._bind_and_recurse(plan, state, lo, env, first_only,
                                          project, found, name, cand_best)

        # child-driven enumeration through a composite conjunct; preferred
        # over wide unit ranges because children usually constrain tightly
        counts = state.counts
        target = None
        for i in plan.composite_idx:
            if 0 < counts[i]:
                if target is None or counts[i] < counts[target]:
                    target = i
        if target is not None and counts[target] <= 6:
            child = plan.conjuncts[target]
            rel = plan.relevant[target]
            sub = tuple(v for v in order if v in rel and v in unassigned)
            try:
                sols = self._child_solutions(child, env, sub,
                                             limit=max(64, 4 * self.n))
            except _TooManySolutions:
                sols = None
            if sols is not None:
                return self._bind_tuple_and_recurse(plan, state, lo, env,
                                                    first_only, project, found,
                                                    sub, sols, skip=target)

        if cand_best is not None:
            return self._bind_and_recurse(plan, state, lo, env, first_only,
                                          project, found, name, cand_best)

        # plain scan, preferring variables that some literal mentions:
        # purely composite-constrained ones (e.g. hash parameters) are
        # cheapest to enumerate last
        name = None
        for pos in range(lo, len(order)):
            nm = order[pos]
            if nm in unassigned and nm in plan.literal_names:
                name = nm
                break
        if name is None:
            name = order[lo]
        return self._bind_and_recurse(plan, state, lo, env, first_only, project,
                                      found, name, range(self.n))

    def _bind_and_recurse(self, plan, state, lo, env, first_only, project,
                          found, name, candidates):
        for val in candidates:
            self._tick()
            if self._bind_one(plan, state, lo, env, first_only, project, found,
                              ((name, val),), None):
                return True
        return False

    def _bind_tuple_and_recurse(self, plan, state, lo, env, first_only, project,
                                found, sub, sols, skip):
        for sol in sols:
            self._tick()
            if self._bind_one(plan, state, lo, env, first_only, project, found,
                              tuple(zip(sub, sol)), skip):
                return True
        return False

    def _bind_one(self, plan, state, lo, env, first_only, project, found,
                  bindings, skip) -> bool:
        ground = state.bind(bindings, skip, env)
        try:
            for i in ground:
                if not self.sat(plan.conjuncts[i], env):
                    return False
            return self._plan_search(plan, state, lo, env, first_only, project,
                                     found)
        finally:
            state.undo(bindings, env)

    def _child_solutions(self, child, env, targets, limit=None):
        if isinstance(child, Forall):
            if limit is not None and self.n ** len(targets) > 16 * limit:
                raise _TooManySolutions()
            # universal conjuncts are checked, not inverted: plain scan
            out = []
            prevs = [(nm, env.get(nm, _MISSING)) for nm in targets]
            for combo in itertools.product(range(self.n), repeat=len(targets)):
                self._tick()
                for nm, v in zip(targets, combo):
                    env[nm] = v
                if self.sat(child, env):
                    out.append(combo)
            for nm, prev in prevs:
                if prev is _MISSING:
                    env.pop(nm, None)
                else:
                    env[nm] = prev
            return out
        return self._solutions(child, env, targets, limit)

    # -- literal inversion ---------------------------------------------------

    def _literal_candidates(self, c, env, name):
        """Candidate values for `name` from a literal with one unknown.
        Returns (name, literal, sorted list) or None when not solvable."""
        if isinstance(c, Eq):
            vals = self._eq_candidates(c.left, c.right, env, name)
            if vals is not None:
                return (name, c, vals)
            return (name, c, self._scan(c, env, name))
        if isinstance(c, Atom):
            vals = self._atom_invert(c, env, name)
            if vals is not None:
                return (name, c, vals)
            return (name, c, self._scan(c, env, name))
        if isinstance(c, (Neq, Not)):
            return (name, c, self._scan(c, env, name))
        return None

    def _scan(self, c, env, name):
        out = []
        prev = env.get(name, _MISSING)
        for val in range(self.n):
            self._tick()
            env[name] = val
            if self.sat(c, env):
                out.append(val)
        if prev is _MISSING:
            env.pop(name, None)
        else:
            env[name] = prev
        return out

    def _term_shape(self, t, name):
        """succ depth when t is succ^depth(name), else None."""
        depth = 0
        while isinstance(t, Succ):
            depth += 1
            t = t.inner
        if isinstance(t, Var) and t.name == name:
            return depth
        return None

    def _invert_succ(self, value, depth):
        n = self.n
        if value == n - 1:
            return list(range(max(0, n - 1 - depth), n))
        v = value - depth
        return [v] if 0 <= v < n else []

    def _eq_candidates(self, left, right, env, name):
        for a, b in ((left, right), (right, left)):
            depth = self._term_shape(a, name)
            if depth is None:
                continue
            try:
                val = eval_term(self.struct, b, env)
            except WeakfoError:
                return None
            return self._invert_succ(val, depth)
        return None

    def _atom_invert(self, c, env, name):
        rel = c.relation
        struct = self.struct
        if struct.sig.arithmetic and rel in ("add", "mult", "<"):
            # fast path: all arguments are plain variables
            vals = []
            pos = -1
            plain = True
            for j, t in enumerate(c.terms):
                if type(t) is not Var:
                    plain = False
                    break
                if t.name == name:
                    if pos >= 0:
                        plain = False
                        break
                    pos = j
                    vals.append(None)
                else:
                    v = env.get(t.name)
                    if v is None:
                        return None
                    vals.append(v)
            if plain and pos >= 0:
                n = self.n
                if rel == "add":
                    a, b, cv = vals
                    if pos == 2:
                        sm = a + b
                        return [sm] if sm < n else []
                    dd = cv - (b if pos == 0 else a)
                    return [dd] if 0 <= dd < n else []
                if rel == "mult":
                    a, b, cv = vals
                    if pos == 2:
                        sm = a * b
                        return [sm] if sm < n else []
                    other = b if pos == 0 else a
                    if other == 0:
                        return range(n) if cv == 0 else []
                    return [cv // other] if cv % other == 0 and cv // other < n else []
                a, b = vals
                if pos == 0:
                    return range(0, b)
                return range(a + 1, n)
        shapes = [self._term_shape(t, name) for t in c.terms]
        known = []
        for t, s in zip(c.terms, shapes):
            if s is None:
                try:
                    known.append(eval_term(struct, t, env))
                except WeakfoError:
                    return None
            else:
                known.append(None)
        unknown_positions = [i for i, s in enumerate(shapes) if s is not None]
        if struct.sig.arithmetic and rel in ("add", "mult", "<"):
            if len(unknown_positions) != 1 or shapes[unknown_positions[0]] != 0:
                return None  # repeated or succ-wrapped: the scan handles it
            i = unknown_positions[0]
            n = self.n
            if rel == "add":
                a, b, cv = known
                if i == 2:
                    s = a + b
                    return [s] if s < n else []
                d = cv - (b if i == 0 else a)
                return [d] if 0 <= d < n else []
            if rel == "mult":
                a, b, cv = known
                if i == 2:
                    s = a * b
                    return [s] if s < n else []
                other = b if i == 0 else a
                if other == 0:
                    return list(range(n)) if cv == 0 else []
                return [cv // other] if cv % other == 0 and cv // other < n else []
            a, b = known  # rel == "<"
            if i == 0:
                return list(range(0, b))
            return list(range(a + 1, n))
        table = struct.relations.get(rel)
        if table is None:
            return None
        out = set()
        for row in table:
            self._tick()
            cands = None
            ok = True
            for val, g, s in zip(row, known, shapes):
                if s is None:
                    if val != g:
                        ok = False
                        break
                else:
                    options = set(self._invert_succ(val, s))
                    cands = options if cands is None else (cands & options)
                    if not cands:
                        ok = False
                        break
            if ok and cands:
                out |= cands
        return sorted(out)

    # -- solution enumeration -------------------------------------------------

    def _solutions(self, f, env, targets, limit=None) -> set:
        targets = tuple(targets)
        self._tick()
        if isinstance(f, Exists):
            names, body = self._collect_block(f)
            inner = [nm for nm in names if nm not in targets]
            # targets last: the block's own data flow resolves first and
            # the projection variables usually fall out functionally
            return self._exists(inner + list(targets), body, env,
                                first_only=False, project=targets, limit=limit)
        if isinstance(f, And):
            return self._exists(list(targets), f, env, first_only=False,
                                project=targets, limit=limit)
        if isinstance(f, (Or, BigOr)):
            out = set()
            children = f.children if isinstance(f, Or) else (
                f.gen(i) for i in f.family)
            for c in children:
                self._tick()
                out |= self._partial_solutions(c, env, targets, limit)
                if limit is not None and len(out) > limit:
                    raise _TooManySolutions()
            return out
        return self._exists(list(targets), f, env, first_only=False,
                            project=targets, limit=limit)

    def _partial_solutions(self, c, env, targets, limit=None) -> set:
        """Solutions over `targets` where c need not mention all of them;
        unmentioned targets range over the whole universe."""
        mentioned = tuple(v for v in targets if v in self._free_of(c))
        if mentioned:
            base = self._solutions(c, env, mentioned, limit)
        else:
            base = {()} if self.sat(c, env) else set()
        if len(mentioned) == len(targets):
            return base
        missing = [v for v in targets if v not in mentioned]
        out = set()
        for sol in base:
            sol_map = dict(zip(mentioned, sol))
            for extra in itertools.product(range(self.n), repeat=len(missing)):
                self._tick()
                extra_map = dict(zip(missing, extra))
                out.add(tuple(sol_map.get(v, extra_map.get(v)) for v in targets))
                if limit is not None and len(out) > limit:
                    raise _TooManySolutions()
        return out


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def evaluate(struct: Structure, f: Formula, asg: Optional[dict] = None,
             budget: Optional[int] = None) -> bool:
    """Does the structure satisfy f under the assignment?"""
    env = dict(asg) if asg else {}
    missing = free_vars(f) - set(env)
    if missing:
        names = ", ".join(sorted(v.render() for v in missing))
        raise WeakfoError(f"unassigned free variables: {names}")
    _check_relations(struct, f)
    return Evaluator(struct, budget).sat(f, env)


def _check_relations(struct: Structure, f: Formula):
    from .syntax import subformulas
    for g in subformulas(f):
        if isinstance(g, Atom) and struct.sig.arity(g.relation) is None:
            raise WeakfoError(f"unknown relation {g.relation!r}")


def expand_with_coloring(struct: Structure, coloring, k: int) -> Structure:
    """Expand a structure with unary color predicates C1..Ck given a map
    element -> color in {1..k}."""
    names = color_names(k)
    sig = struct.sig.with_relations({name: 1 for name in names})
    tables = dict(struct.relations)
    for i, name in enumerate(names, start=1):
        tables[name] = frozenset((v,) for v in range(struct.size) if coloring[v] == i)
    return Structure(sig, struct.size, tables, struct.constants)


def exists_coloring(struct: Structure, f: Formula, k: int,
                    cap: Optional[int] = None) -> bool:
    """Is there a partition of the universe into C1..Ck (empty classes
    allowed) satisfying f?  Brute force over all k^n colorings."""
    cap = cap if cap is not None else structure_cap()
    if k ** struct.size > cap:
        raise CapExceeded(f"{k ** struct.size} colorings exceed the cap {cap}")
    for name in color_names(k):
        if name in struct.sig.relations:
            raise WeakfoError(f"color predicate {name!r} already present")
    for combo in itertools.product(range(1, k + 1), repeat=struct.size):
        expanded = expand_with_coloring(struct, combo, k)
        if evaluate(expanded, f):
            return True
    return False


def count_satisfying(struct: Structure, f: Formula) -> int:
    fv = free_vars(f)
    if len(fv) != 1:
        raise WeakfoError(f"expected exactly one free variable, got {len(fv)}")
    x = next(iter(fv))
    ev = Evaluator(struct)
    return sum(1 for a in range(struct.size) if ev.sat(f, {x: a}))


@dataclass(frozen=True)
class Counterexample:
    structure: Structure
    size: int
    left_value: bool
    right_value: bool


def equivalent_upto(f: Formula, g: Formula, sig: Signature, n_max: int,
                    min_size: int = 1, cap: Optional[int] = None,
                    budget: Optional[int] = None) -> Optional[Counterexample]:
    """Check A |= f iff A |= g over every structure with min_size <= n <=
    n_max; returns the first counterexample in enumeration order."""
    for n in range(min_size, n_max + 1):
        for struct in enumerate_structures(sig, n, cap=cap):
            lv = evaluate(struct, f, budget=budget)
            rv = evaluate(struct, g, budget=budget)
            if lv != rv:
                return Counterexample(struct, n, lv, rv)
    return None
