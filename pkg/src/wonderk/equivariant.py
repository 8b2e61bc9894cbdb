"""Membership, fixed-point data and decompositions of the equivariant K-ring.

Two-block values here use the split coordinates of the product torus:
the first block carries the characters of the left factor (the u
variables) and the second block the characters of the diagonal (the v
variables).  Plain product-of-factors coordinates are reached through
the exponent shear (a, b) -> (a, b - a); line-bundle classes then read
e^{lam} (x) e^{-lam} in plain form and e^{lam} (x) 1 in split form.
All congruence conditions below are stated and tested on split values.
"""

from __future__ import annotations

from itertools import combinations

from .errors import (
    InternalError,
    MissingCone,
    NotInSubring,
    NotInvariant,
    NotMember,
    SupportViolation,
)
from .fantoric import Fan, SRElement, cone_stabilizer
from .laurent import (
    LaurentPoly,
    congruent_mod_character,
    dict_add,
    embed_block,
    is_invariant,
    try_exact_div,
    weyl_act,
)
from .rootweyl import RootSystem, WeylElement, mat_vec, subset_indices, weyl_group
from .steinberg import steinberg_basis


# ---------------------------------------------------------------------------
# coordinate shears and the pair action


def to_plain(f: LaurentPoly) -> LaurentPoly:
    """Split coordinates to plain product coordinates."""
    r = f.rank
    out = {}
    for e, c in f.terms.items():
        a, b = e[:r], e[r:]
        out[a + tuple(x - y for x, y in zip(b, a))] = c
    return LaurentPoly(out, r, 2)


def to_split(f: LaurentPoly) -> LaurentPoly:
    """Plain product coordinates to split coordinates."""
    r = f.rank
    out = {}
    for e, c in f.terms.items():
        m, n = e[:r], e[r:]
        out[m + tuple(x + y for x, y in zip(n, m))] = c
    return LaurentPoly(out, r, 2)


def act_pair(u: WeylElement, v: WeylElement, f: LaurentPoly) -> LaurentPoly:
    """Action of a pair of group elements on a split two-block value."""
    plain = to_plain(f)
    plain = weyl_act(u, plain, "first")
    plain = weyl_act(v, plain, "second")
    return to_split(plain)


# ---------------------------------------------------------------------------
# piecewise classes and the congruence membership test


class PiecewiseClass:
    """Family of split two-block values indexed by the maximal cones of a
    positive-chamber subdivision."""

    def __init__(self, fan_plus: Fan, values: dict):
        self.fan_plus = fan_plus
        self.values = {int(k): val for k, val in values.items()}

    def value(self, idx: int) -> LaurentPoly:
        try:
            return self.values[idx]
        except KeyError:
            raise MissingCone(f"no value for maximal cone {idx}")


def wall_facet_roots(fan_plus: Fan, cone) -> tuple:
    """Simple-root indices whose wall contains a facet of the cone."""
    idx = sorted(fan_plus.resolve(cone))
    r = fan_plus.rs.rank
    out = []
    for i in range(r):
        for facet in combinations(idx, len(idx) - 1):
            if all(fan_plus.rays[j][i] == 0 for j in facet):
                out.append(i)
                break
    return tuple(out)


def membership_check(pc: PiecewiseClass, rs: RootSystem) -> bool:
    """Congruence criterion for a family to come from an equivariant class.

    For each maximal cone with a facet on the wall of a simple root a,
    twisting the second block by the reflection must not move the value
    modulo 1 - e^{-a} in the first block; across each shared facet the
    two values must agree modulo 1 - e^{-chi} in the first block, chi
    the facet character.
    """
    grp = weyl_group(rs)
    for idx in range(len(pc.fan_plus.maximal)):
        pc.value(idx)
    for idx, cone in enumerate(pc.fan_plus.maximal):
        f = pc.value(idx)
        for i in wall_facet_roots(pc.fan_plus, cone):
            moved = weyl_act(grp.simple[i], f, "second")
            if not congruent_mod_character(moved, f, rs.simple_roots[i], "first"):
                return False
    for a, b, _facet, chi in pc.fan_plus.adjacency():
        if not congruent_mod_character(pc.value(a), pc.value(b), chi, "first"):
            return False
    return True


def fixed_point_expansion(pc: PiecewiseClass, rs: RootSystem) -> dict:
    """Restrictions of a member family to every fixed point, as split
    values keyed by (maximal cone index, u, v); the curve congruences of
    the expanded family are re-verified on the way out."""
    if not membership_check(pc, rs):
        raise NotMember("family fails the membership congruences")
    grp = weyl_group(rs)
    plain = {idx: to_plain(pc.value(idx)) for idx in range(len(pc.fan_plus.maximal))}
    expanded_plain = {}
    out = {}
    for idx in plain:
        for u in grp.elements:
            for v in grp.elements:
                g = weyl_act(v, weyl_act(u, plain[idx], "first"), "second")
                expanded_plain[(idx, u, v)] = g
                out[(idx, u, v)] = to_split(g)
    # re-verify the congruences on the expanded data
    for idx, cone in enumerate(pc.fan_plus.maximal):
        walls = wall_facet_roots(pc.fan_plus, cone)
        for u in grp.elements:
            for v in grp.elements:
                for i in walls:
                    s = grp.simple[i]
                    alpha = rs.simple_roots[i]
                    chi = grp.act(u, alpha) + tuple(-x for x in grp.act(v, alpha))
                    lhs = expanded_plain[(idx, grp.mul(u, s), grp.mul(v, s))]
                    rhs = expanded_plain[(idx, u, v)]
                    if not congruent_mod_character(lhs, rhs, chi, None):
                        raise InternalError("reflection congruence failed on expansion")
    for a, b, _facet, chi in pc.fan_plus.adjacency():
        for u in grp.elements:
            for v in grp.elements:
                full = grp.act(u, chi) + tuple(-x for x in grp.act(v, chi))
                if not congruent_mod_character(
                    expanded_plain[(a, u, v)], expanded_plain[(b, u, v)], full, None
                ):
                    raise InternalError("facet congruence failed on expansion")
    return out


# ---------------------------------------------------------------------------
# wonderful case: free-module decomposition and multiplication


_LAMBDA_CACHE: dict = {}


def lambda_poly(rs: RootSystem, mask: int) -> LaurentPoly:
    """Product of 1 - e^{-a} over the simple roots a in the subset."""
    key = (rs.label, mask)
    out = _LAMBDA_CACHE.get(key)
    if out is None:
        out = LaurentPoly.one(rs.rank)
        for i in range(rs.rank):
            if mask >> i & 1:
                neg = tuple(-c for c in rs.simple_roots[i])
                out = out * (LaurentPoly.one(rs.rank) - LaurentPoly.monomial(neg))
        _LAMBDA_CACHE[key] = out
    return out


class WonderfulDecomposition:
    """Coordinates of an equivariant class over the free basis.

    ``coords`` maps a group element v to the full two-block coefficient
    of the second-block basis element attached to v; for v in the cell
    indexed by I this coefficient is divisible by the first-block
    product of 1 - e^{-a} over a in I, and the quotient is exposed
    separately.
    """

    def __init__(self, rs: RootSystem, coords: dict, quotients: dict):
        self.rs = rs
        self.basis = steinberg_basis(rs)
        self.coords = coords
        self.quotients = quotients

    def components(self) -> dict:
        out: dict = {}
        for v, g in self.coords.items():
            out.setdefault(self.basis.cell_of(v), {})[v] = g
        return out

    def quotient(self, v: WeylElement) -> LaurentPoly:
        return self.quotients[v]

    def assemble(self) -> LaurentPoly:
        total = LaurentPoly.zero(self.rs.rank, 2)
        for v, g in self.coords.items():
            total = total + g * embed_block(self.basis.basis_poly(v), "second")
        return total

    def __eq__(self, other):
        return (
            isinstance(other, WonderfulDecomposition)
            and self.rs == other.rs
            and self.coords == other.coords
        )

    def masks(self) -> set:
        return {self.basis.cell_of(v) for v in self.coords}


def wonderful_decompose(rs: RootSystem, f: LaurentPoly) -> WonderfulDecomposition:
    """Split a two-block value over the free basis of the wonderful case.

    The second block is expanded over the orbit-sum basis; for the cell
    of each index element the coefficient must be divisible in the first
    block by the matching product of 1 - e^{-a}, otherwise the value
    lies outside the subring and NotInSubring is raised.
    """
    basis = steinberg_basis(rs)
    coords = basis.expand(f)
    quotients = {}
    for v, g in coords.items():
        mask = basis.cell_of(v)
        if mask:
            divisor = embed_block(lambda_poly(rs, mask), "first")
            q = try_exact_div(g, divisor)
            if q is None:
                raise NotInSubring(
                    f"coefficient at cell {subset_indices(mask)} lacks the "
                    "required first-block divisibility"
                )
            quotients[v] = q
        else:
            quotients[v] = g
    return WonderfulDecomposition(rs, coords, quotients)


def basis_class(rs: RootSystem, v: WeylElement) -> LaurentPoly:
    """The free-module generator attached to v, as a split value."""
    basis = steinberg_basis(rs)
    lam = lambda_poly(rs, basis.cell_of(v))
    return embed_block(lam, "first") * embed_block(basis.basis_poly(v), "second")


def rank_generators(rs: RootSystem) -> tuple:
    """The |W| free-module generators of the wonderful equivariant ring."""
    basis = steinberg_basis(rs)
    return tuple(
        (basis.cell_of(v), v, basis_class(rs, v)) for v in basis.group.elements
    )


def multiply_wonderful(
    a: WonderfulDecomposition, b: WonderfulDecomposition
) -> WonderfulDecomposition:
    """Product of two decomposed classes: multiply and re-decompose, then
    check the index-support bound of the product."""
    rs = a.rs
    try:
        out = wonderful_decompose(rs, a.assemble() * b.assemble())
    except NotInSubring as exc:
        raise SupportViolation(f"product left the subring: {exc}")
    allowed_pairs = {ma | mb for ma in a.masks() for mb in b.masks()}
    for v in out.coords:
        cell = out.basis.cell_of(v)
        if not any(cell & ~pair == 0 for pair in allowed_pairs):
            raise SupportViolation(
                f"product coordinate in cell {subset_indices(cell)} escapes "
                "the union bound"
            )
    return out


def product_formula(rs: RootSystem, v: WeylElement, vp: WeylElement) -> dict:
    """Componentwise product rule on normalized coordinates.

    Returns, for each basis index w, the coefficient of the normalized
    generator 1 (x) f_w in the product of the normalized generators at v
    and vp.  The full coefficient of the decomposition differs by the
    first-block factor attached to the cell of w.
    """
    basis = steinberg_basis(rs)
    mi = basis.cell_of(v)
    mj = basis.cell_of(vp)
    union = mi | mj
    inter = mi & mj
    consts = basis.structure_constants(v, vp)
    out = {}
    for w, aw in consts.items():
        mw = basis.cell_of(w)
        first = lambda_poly(rs, inter) * lambda_poly(rs, union & ~mw)
        out[w] = embed_block(first, "first") * embed_block(aw, "second")
    return out


# ---------------------------------------------------------------------------
# general regular case: cone-indexed decomposition


class RegularDecomposition:
    """Components of a diagonal-invariant class over the positive cones.

    ``comps`` maps each positive cone (ray index set in the full fan) to
    a map from Stanley-Reisner exponents over the cone's rays to
    one-block coefficients invariant under the cone's stabilizer.
    """

    def __init__(self, fan: Fan, comps: dict, flagged=()):
        self.fan = fan
        self.comps = {c: t for c, t in comps.items() if t}
        self.flagged = tuple(flagged)

    def cones(self):
        return sorted(self.comps, key=lambda c: tuple(sorted(c)))

    def __eq__(self, other):
        return (
            isinstance(other, RegularDecomposition)
            and self.fan is other.fan
            and self.comps == other.comps
        )

    @property
    def is_zero(self):
        return not self.comps


def positive_cones(fan: Fan) -> tuple:
    """Cones of a Weyl-stable fan lying in the positive chamber."""
    out = [
        c
        for c in fan.cones
        if all(x >= 0 for j in c for x in fan.rays[j])
    ]
    return tuple(sorted(out, key=lambda c: tuple(sorted(c))))


def _canonical_tensor(element) -> dict:
    """Normal form of a sum of (SRElement, one-block value) tensors:
    keys (cone, exponent) with one-block coefficients."""
    acc: dict = {}
    for sr, p in element:
        for cone, t in sr.comps.items():
            for e, c in t.items():
                key = (cone, e)
                cur = acc.get(key)
                add = p * c
                acc[key] = add if cur is None else cur + add
    return {k: v for k, v in acc.items() if not v.is_zero}


def regular_decompose(fan: Fan, fan_plus, element) -> RegularDecomposition:
    """Split a diagonal-invariant element over the positive cones.

    ``element`` is an iterable of (SRElement over the full fan, one-block
    value) pairs.  Invariance under the simultaneous action on both
    factors is required; the components over the positive cones then
    determine the whole class, and each coefficient is checked against
    the setwise stabilizer of its cone.
    """
    rs = fan.rs
    grp = weyl_group(rs)
    element = list(element)
    acc = _canonical_tensor(element)
    for s in grp.simple:
        moved = _canonical_tensor((sr.act(s), weyl_act(s, p)) for sr, p in element)
        if moved != acc:
            raise NotInvariant("element is not invariant under the diagonal action")
    pos = positive_cones(fan)
    pos_set = set(pos)
    comps: dict = {}
    for (cone, e), p in acc.items():
        if cone in pos_set:
            comps.setdefault(cone, {})[e] = p
    # orbit bookkeeping: everything is the image of a positive component
    for (cone, e), p in acc.items():
        if not any(
            fan.act_cone(w, cone) in pos_set for w in grp.elements
        ):
            raise InternalError("component not reachable from the positive cones")
    flagged = []
    for cone, t in comps.items():
        stab, pointwise = cone_stabilizer(fan, cone)
        if not pointwise:
            flagged.append(cone)
        for w in stab:
            perm = fan.ray_permutation(w)
            pos_sorted = sorted(cone)
            slot = {j: k for k, j in enumerate(pos_sorted)}
            reorder = [slot[perm[j]] for j in pos_sorted]
            moved = {}
            for e, p in t.items():
                full = [0] * len(pos_sorted)
                for k, x in zip(reorder, e):
                    full[k] = x
                moved[tuple(full)] = weyl_act(w, p)
            if moved != t:
                raise NotInvariant(
                    f"coefficient at cone {sorted(cone)} is not stabilizer-invariant"
                )
    return RegularDecomposition(fan, comps, flagged)


def multiply_regular(
    a: RegularDecomposition, b: RegularDecomposition
) -> RegularDecomposition:
    """Componentwise product: two cones contribute through the cone they
    span inside the positive chamber, and kill each other otherwise."""
    fan = a.fan
    pos_set = set(positive_cones(fan))
    comps: dict = {}
    for ca, ta in a.comps.items():
        for cb, tb in b.comps.items():
            union = ca | cb
            if union not in fan.cones or union not in pos_set:
                continue
            pos_sorted = sorted(union)
            place = {j: k for k, j in enumerate(pos_sorted)}
            arity = len(pos_sorted)

            def embed(t, cone):
                idx = [place[j] for j in sorted(cone)]
                out = {}
                for e, c in t.items():
                    full = [0] * arity
                    for p, x in zip(idx, e):
                        full[p] = x
                    out[tuple(full)] = c
                return out

            ea = embed(ta, ca)
            eb = embed(tb, cb)
            inter_factor = {(0,) * arity: 1}
            for j in ca & cb:
                inter_factor = _sr_mul_unit(inter_factor, place[j], arity)
            target = comps.setdefault(union, {})
            for e1, p1 in ea.items():
                for e2, p2 in eb.items():
                    coef = p1 * p2
                    for e3, c3 in inter_factor.items():
                        e = tuple(x + y + z for x, y, z in zip(e1, e2, e3))
                        prev = target.get(e)
                        add = coef * c3
                        target[e] = add if prev is None else prev + add
    cleaned = {
        c: {e: p for e, p in t.items() if not p.is_zero} for c, t in comps.items()
    }
    return RegularDecomposition(fan, cleaned)


def _sr_mul_unit(factor: dict, k: int, arity: int) -> dict:
    """Multiply an integer exponent dict by (1 - X_k)."""
    out = dict(factor)
    for e, c in factor.items():
        shifted = tuple(x + (1 if i == k else 0) for i, x in enumerate(e))
        s = out.get(shifted, 0) - c
        if s:
            out[shifted] = s
        else:
            del out[shifted]
    return out


def filtration(dec: RegularDecomposition, cone) -> RegularDecomposition:
    """Partial sum over the cones having the given cone as a face."""
    idx = dec.fan.resolve(cone)
    if any(x < 0 for j in idx for x in dec.fan.rays[j]):
        raise InternalError("filtration expects a positive cone")
    comps = {c: t for c, t in dec.comps.items() if idx <= c}
    return RegularDecomposition(dec.fan, comps, dec.flagged)
