"""The arithmetic hash formula.

build_rho() produces one fixed FO[+,x] formula rho(k,p,q,x,y) that holds
in a structure of size n exactly when (q*x mod p) mod k^2 = y, for all
argument values with 1 <= p < n, q < n, x < n and k^2 < n.

The relational add/mult tables only contain in-range triples, so the
product q*x cannot be touched directly.  Instead the formula guesses the
quotient d and remainder r of (q*(x mod p)) / p and verifies the integer
identity  q*b = d*p + r  in schoolbook fashion over base Z, where Z is
defined inside the formula as the least element whose square is not
representable (so (Z-1)^2 < n <= Z^2 and every digit product fits).
Every partial sum is reduced eagerly, keeping all intermediate values
below n.  The degenerate universes without such a Z (n <= 2) only admit
p = 1, which a separate disjunct handles.
"""

from dataclasses import dataclass, field
from functools import lru_cache

from .syntax import (And, Atom, Eq, Exists, Forall, Formula, Neq, Not, Or,
                     Succ, Var, VarName, Zero, ZERO, free_vars, mk_and,
                     taut_eq)

RHO_K = VarName("k")
RHO_P = VarName("p")
RHO_Q = VarName("q")
RHO_X = VarName("x")
RHO_Y = VarName("y")
RHO_FREE = (RHO_K, RHO_P, RHO_Q, RHO_X, RHO_Y)


def _v(name):
    return Var(name) if isinstance(name, VarName) else name


def _lt(a, b):
    return Atom("<", (_v(a), _v(b)))


def _add(a, b, c):
    return Atom("add", (_v(a), _v(b), _v(c)))


def _mult(a, b, c):
    return Atom("mult", (_v(a), _v(b), _v(c)))


@dataclass
class _Builder:
    serial: int
    names: list = field(default_factory=list)
    conjuncts: list = field(default_factory=list)

    def fresh(self) -> VarName:
        self.serial += 1
        name = VarName("hv", self.serial)
        self.names.append(name)
        return name

    def local(self) -> VarName:
        # bound inside a nested quantifier, not part of the prefix
        self.serial += 1
        return VarName("hv", self.serial)

    def emit(self, *fs):
        self.conjuncts.extend(fs)

    def digits(self, value, z) -> tuple:
        """hi, lo with value = hi*Z + lo and lo < Z."""
        hi, lo, w = self.fresh(), self.fresh(), self.fresh()
        self.emit(_lt(lo, z), _mult(hi, z, w), _add(w, lo, value))
        return hi, lo

    def reduce(self, value, z) -> tuple:
        """carry, digit with value = carry*Z + digit and digit < Z."""
        return self.digits(value, z)

    def column(self, big_items, small_items, carries_in, z):
        """One schoolbook column: reduce the oversized items, then fold
        everything pairwise with eager carry extraction.  Returns the
        column digit and the carries flowing into the next column."""
        inflow = []
        carries_out = []
        for item in big_items:
            c, lo = self.reduce(item, z)
            carries_out.append(c)
            inflow.append(lo)
        inflow = inflow + list(small_items) + list(carries_in)
        acc = inflow[0]
        for item in inflow[1:]:
            s = self.fresh()
            self.emit(_add(acc, item, s))
            c, acc = self.reduce(s, z)
            carries_out.append(c)
        return acc, carries_out

    def product_columns(self, factor_cols, extra_small, z, compare_to=None):
        """Digits of a 2x2-digit schoolbook product plus extras.

        `factor_cols(col)` is called right before column `col` is built
        and returns the (lo, hi) digit pairs whose product lands there;
        allocating guessed digits inside the callback puts them directly
        before the column that validates them, which keeps the search
        from enumerating independent guesses in advance.  When
        `compare_to` is given, each column digit is pinned to it on the
        spot."""
        digits = []
        carries = []
        for col in range(4):
            big = []
            for a, bfac in factor_cols(col):
                pvar = self.fresh()
                self.emit(_mult(a, bfac, pvar))
                big.append(pvar)
            small = list(extra_small[col]) if col < len(extra_small) else []
            digit, carries = self.column(big, small, carries, z)
            digits.append(digit)
            if compare_to is not None:
                self.emit(Eq(_v(digit), _v(compare_to[col])))
        for c in carries:
            self.emit(Eq(_v(c), ZERO))
        return digits


@lru_cache(maxsize=None)
def build_rho(serial_floor: int = 0) -> Formula:
    """The hash formula; `serial_floor` shifts all internal serials above
    a caller-chosen level so the instance can be spliced into any host
    formula without name collisions."""
    k, p, q, x, y = (Var(v) for v in RHO_FREE)
    b = _Builder(serial_floor)

    b.emit(_lt(ZERO, p))
    cap_k = b.fresh()
    b.emit(_mult(RHO_K, RHO_K, cap_k), _lt(RHO_Y, cap_k))

    z = b.fresh()
    w_sq = VarName("hv", serial_floor + 9001)
    z_probe = VarName("hv", serial_floor + 9002)
    w_probe = VarName("hv", serial_floor + 9003)
    b.emit(Forall(w_sq, Not(_mult(z, z, w_sq))))
    b.emit(Forall(z_probe, Or((Not(_lt(z_probe, z)),
                               Exists(w_probe, _mult(z_probe, z_probe, w_probe))))))

    # b = x mod p
    bm, a1, w1 = b.fresh(), b.fresh(), b.fresh()
    b.emit(_lt(bm, p), _mult(a1, p, w1), _add(w1, bm, x))

    # digits of the known quantities, then the left-hand side q*b
    q_hi, q_lo = b.digits(RHO_Q, z)
    b_hi, b_lo = b.digits(bm, z)
    p_hi, p_lo = b.digits(RHO_P, z)

    def lhs_cols(col):
        return {0: [(q_lo, b_lo)], 1: [(q_lo, b_hi), (q_hi, b_lo)],
                2: [(q_hi, b_hi)], 3: []}[col]

    lhs = b.product_columns(lhs_cols, [[], [], [], []], z)

    # quotient/remainder digits are guessed immediately before the column
    # that validates them against the left-hand side
    guessed = {}

    def guess(name_key):
        v = b.fresh()
        b.emit(_lt(v, z))
        guessed[name_key] = v
        return v

    extra = [[], [], [], []]

    def rhs_cols(col):
        if col == 0:
            d_lo = guess("d_lo")
            r_lo = guess("r_lo")
            extra[0].append(r_lo)
            return [(d_lo, p_lo)]
        if col == 1:
            d_hi = guess("d_hi")
            r_hi = guess("r_hi")
            extra[1].append(r_hi)
            return [(guessed["d_lo"], p_hi), (d_hi, p_lo)]
        if col == 2:
            return [(guessed["d_hi"], p_hi)]
        return []

    b.product_columns(rhs_cols, extra, z, compare_to=lhs)
    d_hi, d_lo = guessed["d_hi"], guessed["d_lo"]
    r_hi, r_lo = guessed["r_hi"], guessed["r_lo"]

    # recompose d and r from their digits; r < p makes them unique
    d = b.fresh()
    wd = b.fresh()
    b.emit(_mult(d_hi, z, wd), _add(wd, d_lo, d))
    r = b.fresh()
    wr = b.fresh()
    b.emit(_mult(r_hi, z, wr), _add(wr, r_lo, r), _lt(r, p))

    # y = r mod k^2, via r = a2*k^2 + y
    a2, w2 = b.fresh(), b.fresh()
    b.emit(_lt(a2, p), _mult(a2, cap_k, w2), _add(w2, RHO_Y, r))

    # Pin a second occurrence for variables that only appear once, so the
    # construction introduces no new weak quantifiers.
    counts = {}
    for c in b.conjuncts:
        for name in free_vars(c):
            counts[name] = counts.get(name, 0) + 1
    for name in b.names:
        if counts.get(name, 0) <= 1:
            b.emit(taut_eq(name))

    matrix = mk_and(b.conjuncts)
    body = matrix
    for name in reversed(b.names):
        body = Exists(name, body)
    general = body

    degenerate = And((Eq(p, Succ(ZERO)), Eq(y, ZERO)))
    return Or((degenerate, general))


def rho_quantifier_rank() -> int:
    from .syntax import quantifier_rank
    return quantifier_rank(build_rho())


def rho_bound_count() -> int:
    from .syntax import bound_vars
    return len(bound_vars(build_rho()))
