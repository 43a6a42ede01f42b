"""weakfo: first-order formulas over finite arithmetic structures.

Parsing, printing and rewriting of first-order formulas; weak/strong
quantifier analysis; hash-based replacement of color predicates; the
weak-quantifier elimination pipeline; macro expansions; formula-family
generators with brute-force oracles; first-order queries and bounded
rank reductions — all verified by exhaustive model checking on small
structures.
"""

import sys

# Generated formulas nest a few hundred quantifiers (weak-variable blocks);
# the recursive tree walkers need room beyond CPython's default.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))

from .errors import (ArityError, CapExceeded, CaptureError,
                     DuplicateBindersError, NotNNFError, ParseError,
                     RenderLimitError, SignatureError, StructureError,
                     TransformError, WeakfoError)
from .syntax import (And, Atom, BigOr, Eq, Exists, Forall, Formula,
                     IndexFamily, Neq, Not, Or, Signature, Succ, Term, Var,
                     VarName, Zero, ZERO, bound_vars, flatten, free_vars,
                     is_nnf, mk_and, mk_or, num_term, quantifier_rank,
                     rename_bound_fresh, substitute, to_nnf, var)
from .parser import parse_formula, render_formula
from .structures import (Structure, enumerate_structures, eval_term, induced,
                         json_decode, json_encode, validate)
from .evaluator import (Counterexample, Evaluator, count_satisfying,
                        equivalent_upto, evaluate, exists_coloring)

__all__ = [name for name in dir() if not name.startswith("_")]
