"""Exact sparse arithmetic in the group algebra of the weight lattice.

A ``LaurentPoly`` stores a finite map from exponent vectors to nonzero
Python integers, so all arithmetic is exact and coefficients may grow
without bound.  One-block values model the representation ring of the
torus; two-block values model its tensor square, with the exponent
vector the concatenation of the two blocks.

Values are treated as immutable; every operation returns a fresh value.
"""

from __future__ import annotations

from math import gcd

from .errors import BlockMismatch, ExactDivisionError, ZeroCharacter

# ---------------------------------------------------------------------------
# raw term-dict arithmetic (hot paths; exponents are int tuples)


def dict_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def dict_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) - c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def dict_neg(a: dict) -> dict:
    return {e: -c for e, c in a.items()}


def dict_scale(a: dict, k: int) -> dict:
    if k == 0:
        return {}
    return {e: k * c for e, c in a.items()}


def _mul_arity2(a, b, out):
    get = out.get
    for (a0, a1), ca in a.items():
        for (b0, b1), cb in b.items():
            e = (a0 + b0, a1 + b1)
            s = get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                del out[e]


def _mul_arity4(a, b, out):
    get = out.get
    for (a0, a1, a2, a3), ca in a.items():
        for (b0, b1, b2, b3), cb in b.items():
            e = (a0 + b0, a1 + b1, a2 + b2, a3 + b3)
            s = get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                del out[e]


def _mul_generic(a, b, out):
    get = out.get
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            s = get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                del out[e]


def dict_mul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    n = len(next(iter(b)))
    if n == 2:
        _mul_arity2(a, b, out)
    elif n == 4:
        _mul_arity4(a, b, out)
    else:
        _mul_generic(a, b, out)
    return out


def _lex_max(terms: dict) -> tuple:
    return max(terms)


def dict_exact_div(num: dict, den: dict):
    """Quotient of an exact division, or None if den does not divide num.

    Long division by lexicographically leading terms.  The quotient of an
    exact division has all exponents inside the coordinate box spanned by
    the extreme exponents of numerator and denominator, which bounds the
    search and guarantees termination on inexact input.
    """
    if not den:
        raise ExactDivisionError("division by zero")
    if not num:
        return {}
    n = len(next(iter(den)))
    den_lead = _lex_max(den)
    den_c = den[den_lead]
    lo = []
    hi = []
    for i in range(n):
        fmin = min(e[i] for e in num)
        fmax = max(e[i] for e in num)
        gmin = min(e[i] for e in den)
        gmax = max(e[i] for e in den)
        lo.append(fmin - gmax)
        hi.append(fmax - gmin)
    rem = dict(num)
    quot = {}
    den_items = list(den.items())
    get = rem.get
    while rem:
        rl = _lex_max(rem)
        q, r = divmod(rem[rl], den_c)
        if r:
            return None
        t = tuple(x - y for x, y in zip(rl, den_lead))
        if any(t[i] < lo[i] or t[i] > hi[i] for i in range(n)):
            return None
        quot[t] = q
        if n == 2:
            t0, t1 = t
            for (b0, b1), cb in den_items:
                e = (t0 + b0, t1 + b1)
                s = get(e, 0) - q * cb
                if s:
                    rem[e] = s
                else:
                    del rem[e]
        elif n == 4:
            t0, t1, t2, t3 = t
            for (b0, b1, b2, b3), cb in den_items:
                e = (t0 + b0, t1 + b1, t2 + b2, t3 + b3)
                s = get(e, 0) - q * cb
                if s:
                    rem[e] = s
                else:
                    del rem[e]
        else:
            for eb, cb in den_items:
                e = tuple(x + y for x, y in zip(t, eb))
                s = get(e, 0) - q * cb
                if s:
                    rem[e] = s
                else:
                    del rem[e]
    return quot


# ---------------------------------------------------------------------------


class LaurentPoly:
    """Element of the group algebra (one block) or its tensor square."""

    __slots__ = ("terms", "rank", "blocks")

    def __init__(self, terms: dict, rank: int, blocks: int = 1):
        self.terms = terms
        self.rank = rank
        self.blocks = blocks

    # -- constructors

    @classmethod
    def zero(cls, rank: int, blocks: int = 1) -> "LaurentPoly":
        return cls({}, rank, blocks)

    @classmethod
    def one(cls, rank: int, blocks: int = 1) -> "LaurentPoly":
        return cls({(0,) * (rank * blocks): 1}, rank, blocks)

    @classmethod
    def monomial(cls, exp, coef: int = 1, blocks: int = 1) -> "LaurentPoly":
        exp = tuple(int(x) for x in exp)
        rank, r = divmod(len(exp), blocks)
        if r:
            raise BlockMismatch(f"exponent length {len(exp)} not a multiple of {blocks}")
        if coef == 0:
            return cls({}, rank, blocks)
        return cls({exp: int(coef)}, rank, blocks)

    @classmethod
    def from_terms(cls, items, rank: int, blocks: int = 1) -> "LaurentPoly":
        terms = {}
        for exp, coef in items:
            exp = tuple(int(x) for x in exp)
            if len(exp) != rank * blocks:
                raise BlockMismatch("exponent length mismatch")
            s = terms.get(exp, 0) + int(coef)
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        return cls(terms, rank, blocks)

    # -- ring operations

    def _check(self, other):
        if self.rank != other.rank or self.blocks != other.blocks:
            raise BlockMismatch("mixed rank or block count")

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.one(self.rank, self.blocks) * other
        self._check(other)
        return LaurentPoly(dict_add(self.terms, other.terms), self.rank, self.blocks)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.one(self.rank, self.blocks) * other
        self._check(other)
        return LaurentPoly(dict_sub(self.terms, other.terms), self.rank, self.blocks)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return LaurentPoly(dict_neg(self.terms), self.rank, self.blocks)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly(dict_scale(self.terms, other), self.rank, self.blocks)
        self._check(other)
        return LaurentPoly(dict_mul(self.terms, other.terms), self.rank, self.blocks)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined for sums")
        out = LaurentPoly.one(self.rank, self.blocks)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, LaurentPoly)
            and self.rank == other.rank
            and self.blocks == other.blocks
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.rank, self.blocks, tuple(sorted(self.terms.items()))))

    @property
    def is_zero(self):
        return not self.terms

    def items_sorted(self):
        return sorted(self.terms.items())

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def __repr__(self):
        if not self.terms:
            return "LaurentPoly(0)"
        bits = []
        for e, c in self.items_sorted():
            bits.append(f"{c}*e{list(e)}")
        return "LaurentPoly(" + " + ".join(bits) + ")"


# ---------------------------------------------------------------------------
# Weyl action and invariance


_BLOCKS = ("first", "second", "diagonal")


def _act_exponent(matrix, exp, rank, blocks, block):
    if blocks == 1:
        return tuple(sum(row[k] * exp[k] for k in range(rank)) for row in matrix)
    a, b = exp[:rank], exp[rank:]
    if block in ("first", "diagonal"):
        a = tuple(sum(row[k] * a[k] for k in range(rank)) for row in matrix)
    if block in ("second", "diagonal"):
        b = tuple(sum(row[k] * b[k] for k in range(rank)) for row in matrix)
    return a + b


def weyl_act(w, f: LaurentPoly, block: str = "first") -> LaurentPoly:
    """Apply a Weyl element to the chosen exponent block, term by term."""
    if block not in _BLOCKS:
        raise BlockMismatch(f"unknown block {block!r}")
    if f.blocks == 1 and block == "second":
        raise BlockMismatch("one-block value has no second block")
    matrix = w.matrix if hasattr(w, "matrix") else w
    out = {}
    for e, c in f.terms.items():
        out[_act_exponent(matrix, e, f.rank, f.blocks, block)] = c
    return LaurentPoly(out, f.rank, f.blocks)


def is_invariant(f: LaurentPoly, gens, block: str = "first") -> bool:
    return all(weyl_act(g, f, block).terms == f.terms for g in gens)


def augmentation(f: LaurentPoly) -> int:
    return f.augmentation()


def tensor(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Bilinear pairing of two one-block values into the two-block ring."""
    if f.blocks != 1 or g.blocks != 1 or f.rank != g.rank:
        raise BlockMismatch("tensor expects two one-block values of equal rank")
    out = {}
    for ea, ca in f.terms.items():
        for eb, cb in g.terms.items():
            out[ea + eb] = ca * cb
    return LaurentPoly(out, f.rank, 2)


def embed_block(f: LaurentPoly, block: str) -> LaurentPoly:
    """View a one-block value inside the two-block ring."""
    if f.blocks != 1:
        raise BlockMismatch("embed_block expects a one-block value")
    zero = (0,) * f.rank
    if block == "first":
        terms = {e + zero: c for e, c in f.terms.items()}
    elif block == "second":
        terms = {zero + e: c for e, c in f.terms.items()}
    else:
        raise BlockMismatch(f"unknown block {block!r}")
    return LaurentPoly(terms, f.rank, 2)


def collapse_second_block(f: LaurentPoly) -> LaurentPoly:
    """Sum the second block away (augmentation applied to block two)."""
    if f.blocks != 2:
        raise BlockMismatch("collapse_second_block expects a two-block value")
    out = {}
    r = f.rank
    for e, c in f.terms.items():
        a = e[:r]
        s = out.get(a, 0) + c
        if s:
            out[a] = s
        else:
            del out[a]
    return LaurentPoly(out, r, 1)


# ---------------------------------------------------------------------------
# divisibility modulo (1 - e^{-chi})


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


_UNIMODULAR_CACHE: dict = {}


def _unimodular_to_first(prim: tuple) -> tuple:
    """Rows of an integer matrix U with det +-1 and U @ prim = e_1."""
    cached = _UNIMODULAR_CACHE.get(prim)
    if cached is not None:
        return cached
    n = len(prim)
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    v = list(prim)
    for i in range(1, n):
        if v[i] == 0:
            continue
        g, x, y = _xgcd(v[0], v[i])
        r0 = [x * rows[0][k] + y * rows[i][k] for k in range(n)]
        ri = [-(v[i] // g) * rows[0][k] + (v[0] // g) * rows[i][k] for k in range(n)]
        rows[0], rows[i] = r0, ri
        v[0], v[i] = g, 0
    if v[0] == -1:
        rows[0] = [-x for x in rows[0]]
        v[0] = 1
    if v[0] != 1:
        raise ExactDivisionError("character direction is not primitive")
    out = tuple(tuple(r) for r in rows)
    _UNIMODULAR_CACHE[prim] = out
    return out


def _embed_character(chi, rank: int, blocks: int, block: str) -> tuple:
    chi = tuple(int(x) for x in chi)
    if blocks == 1:
        if len(chi) != rank:
            raise BlockMismatch("character length mismatch")
        return chi
    if len(chi) == 2 * rank and block is None:
        return chi
    if len(chi) != rank:
        raise BlockMismatch("character length mismatch")
    zero = (0,) * rank
    if block == "first":
        return chi + zero
    if block == "second":
        return zero + chi
    if block == "diagonal":
        return chi + chi
    raise BlockMismatch(f"unknown block {block!r}")


def congruent_mod_character(f: LaurentPoly, g: LaurentPoly, chi, block: str = "first") -> bool:
    """Whether f - g lies in the ideal generated by 1 - e^{-chi}.

    The character direction is rewritten to the first coordinate of a
    unimodular basis; the difference is then divisible exactly when, for
    every fixed value of the complementary exponents, the one-variable
    piece leaves no remainder under division by t^m - 1 (m the content
    of chi).  Note 1 - e^{-chi} and 1 - e^{chi} generate the same ideal.
    """
    f._check(g)
    chi_full = _embed_character(chi, f.rank, f.blocks, block)
    m = 0
    for x in chi_full:
        m = gcd(m, x)
    if m == 0:
        raise ZeroCharacter("congruence character must be nonzero")
    prim = tuple(x // m for x in chi_full)
    diff = dict_sub(f.terms, g.terms)
    if not diff:
        return True
    rows = _unimodular_to_first(prim)
    n = len(prim)
    groups: dict = {}
    for e, c in diff.items():
        new = tuple(sum(rows[i][k] * e[k] for k in range(n)) for i in range(n))
        key = new[1:]
        grp = groups.setdefault(key, {})
        grp[new[0]] = grp.get(new[0], 0) + c
    for grp in groups.values():
        # remainder of long division by t^m - 1: fold exponents mod m
        rem: dict = {}
        for e0, c in grp.items():
            k = e0 % m
            rem[k] = rem.get(k, 0) + c
        if any(rem.values()):
            return False
    return True


def divides(den: LaurentPoly, num: LaurentPoly) -> bool:
    den._check(num)
    return dict_exact_div(num.terms, den.terms) is not None


def exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    num._check(den)
    q = dict_exact_div(num.terms, den.terms)
    if q is None:
        raise ExactDivisionError("division is not exact")
    return LaurentPoly(q, num.rank, num.blocks)


def try_exact_div(num: LaurentPoly, den: LaurentPoly):
    num._check(den)
    q = dict_exact_div(num.terms, den.terms)
    if q is None:
        return None
    return LaurentPoly(q, num.rank, num.blocks)


# ---------------------------------------------------------------------------
# JSON forms: coefficients as decimal strings to survive 64-bit parsers


def poly_to_json(f: LaurentPoly) -> dict:
    return {
        "terms": [
            {"exp": list(e), "coef": str(c)} for e, c in f.items_sorted()
        ]
    }


def poly_from_json(obj: dict, rank: int, blocks: int = 1) -> LaurentPoly:
    items = [(tuple(t["exp"]), int(t["coef"])) for t in obj.get("terms", [])]
    return LaurentPoly.from_terms(items, rank, blocks)
