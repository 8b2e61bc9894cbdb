"""Ordinary K-ring of the wonderful compactification.

The flag-variety K-ring is modeled by integer coordinate vectors over
the images of the orbit-sum basis elements under the quotient by the
augmentation ideal of invariants; the compactification K-ring is a free
module over it with one generator per group element.  Products push the
equivariant structure constants down through the augmentation.
"""

from __future__ import annotations

import random

from .errors import RankBoundExceeded, SupportViolation
from .laurent import LaurentPoly, collapse_second_block
from .rootweyl import RootSystem, WeylElement, word_str
from .steinberg import TABLE_GATE, steinberg_basis
from .equivariant import lambda_poly


class KGBElement:
    """Integer coordinates over the pushed-down basis; the identity
    element of the group indexes the ring unit."""

    __slots__ = ("rs", "coords")

    def __init__(self, rs: RootSystem, coords: dict):
        self.rs = rs
        self.coords = {v: int(c) for v, c in coords.items() if c}

    @classmethod
    def zero(cls, rs: RootSystem) -> "KGBElement":
        return cls(rs, {})

    @classmethod
    def unit(cls, rs: RootSystem) -> "KGBElement":
        grp = steinberg_basis(rs).group
        return cls(rs, {grp.identity: 1})

    def __add__(self, other):
        coords = dict(self.coords)
        for v, c in other.coords.items():
            s = coords.get(v, 0) + c
            if s:
                coords[v] = s
            else:
                del coords[v]
        return KGBElement(self.rs, coords)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return KGBElement(self.rs, {v: -c for v, c in self.coords.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return KGBElement(self.rs, {v: other * c for v, c in self.coords.items()})
        return kgb_multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, KGBElement)
            and self.rs == other.rs
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash(tuple(sorted(((v.key(), c) for v, c in self.coords.items()))))

    @property
    def is_zero(self):
        return not self.coords

    def lift(self) -> LaurentPoly:
        """Tautological lift through the basis elements."""
        basis = steinberg_basis(self.rs)
        out = LaurentPoly.zero(self.rs.rank)
        for v, c in self.coords.items():
            out = out + basis.basis_poly(v) * c
        return out

    def __repr__(self):
        if not self.coords:
            return "KGB(0)"
        bits = [
            f"{c}*[{word_str(v)}]"
            for v, c in sorted(self.coords.items(), key=lambda kv: kv[0].key())
        ]
        return "KGB(" + " + ".join(bits) + ")"


def kgb_rank(rs: RootSystem) -> int:
    return steinberg_basis(rs).group.order


def characteristic_map(rs: RootSystem, g: LaurentPoly) -> KGBElement:
    """Quotient map from the torus representation ring: expand over the
    basis and apply the augmentation to every invariant coefficient."""
    basis = steinberg_basis(rs)
    coords = basis.expand(g)
    return KGBElement(rs, {v: c.augmentation() for v, c in coords.items()})


def kgb_multiply(a: KGBElement, b: KGBElement) -> KGBElement:
    """Multiply by lifting both factors, multiplying in the torus ring
    and pushing back down; the kernel of the pushdown is an ideal, so
    the answer does not depend on the chosen lifts."""
    rs = a.rs
    return characteristic_map(rs, a.lift() * b.lift())


def lambda_class_image(rs: RootSystem, subset) -> KGBElement:
    """Pushdown of the product of 1 - e^{-a} over a subset of the simple
    roots; nilpotent whenever the subset is nonempty."""
    from .rootweyl import subset_mask

    mask = subset_mask(subset, rs.rank)
    return characteristic_map(rs, lambda_poly(rs, mask))


def nilpotency_degree(x: KGBElement, bound: int) -> int:
    """Least n <= bound with x^n = 0, or 0 if none is found."""
    power = KGBElement.unit(x.rs)
    for n in range(1, bound + 1):
        power = kgb_multiply(power, x)
        if power.is_zero:
            return n
    return 0


# ---------------------------------------------------------------------------
# the compactification ring


class KXElement:
    """Free-module element: one ring coordinate per group element."""

    __slots__ = ("rs", "coords")

    def __init__(self, rs: RootSystem, coords: dict):
        self.rs = rs
        self.coords = {v: c for v, c in coords.items() if not c.is_zero}

    @classmethod
    def zero(cls, rs: RootSystem) -> "KXElement":
        return cls(rs, {})

    @classmethod
    def generator(cls, rs: RootSystem, v: WeylElement) -> "KXElement":
        return cls(rs, {v: KGBElement.unit(rs)})

    def __add__(self, other):
        coords = dict(self.coords)
        for v, c in other.coords.items():
            cur = coords.get(v)
            s = c if cur is None else cur + c
            if s.is_zero:
                coords.pop(v, None)
            else:
                coords[v] = s
        return KXElement(self.rs, coords)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "KXElement":
        if isinstance(c, int):
            c = KGBElement.unit(self.rs) * c
        return KXElement(self.rs, {v: c * x for v, x in self.coords.items()})

    def __mul__(self, other):
        return kx_multiply(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, KXElement)
            and self.rs == other.rs
            and self.coords == other.coords
        )

    @property
    def is_zero(self):
        return not self.coords

    def __repr__(self):
        bits = [
            f"({c!r})*g[{word_str(v)}]"
            for v, c in sorted(self.coords.items(), key=lambda kv: kv[0].key())
        ]
        return "KX(" + (" + ".join(bits) if bits else "0") + ")"


_KX_BASIS_CACHE: dict = {}


def _augmented_constants(rs: RootSystem, v: WeylElement, vp: WeylElement) -> dict:
    basis = steinberg_basis(rs)
    return {
        w: c.augmentation() for w, c in basis.structure_constants(v, vp).items()
    }


def kx_basis_product(rs: RootSystem, v: WeylElement, vp: WeylElement) -> KXElement:
    """Product of two module generators, by the pushed-down rule: each
    target index w contributes the product of the two nilpotent classes
    attached to the overlapping index sets with the augmented structure
    constant."""
    key = (rs.label, v, vp)
    cached = _KX_BASIS_CACHE.get(key)
    if cached is not None:
        return cached
    basis = steinberg_basis(rs)
    mi = basis.cell_of(v)
    mj = basis.cell_of(vp)
    union = mi | mj
    inter = mi & mj
    abar = _augmented_constants(rs, v, vp)
    coords = {}
    for w, a in abar.items():
        mw = basis.cell_of(w)
        if mw & ~union:
            raise SupportViolation("pushed-down product escaped the index bound")
        coef = lambda_class_image(rs, inter) * lambda_class_image(rs, union & ~mw)
        coef = coef * a
        if not coef.is_zero:
            coords[w] = coef
    out = KXElement(rs, coords)
    _KX_BASIS_CACHE[key] = out
    _KX_BASIS_CACHE[(rs.label, vp, v)] = out
    return out


def kx_multiply(x: KXElement, y: KXElement) -> KXElement:
    """Bilinear extension of the generator product rule."""
    rs = x.rs
    out = KXElement.zero(rs)
    for v, a in x.coords.items():
        for vp, b in y.coords.items():
            out = out + kx_basis_product(rs, v, vp).scale(a * b)
    return out


def kx_table(rs: RootSystem, rng_seed: int = 0) -> dict:
    """All generator products, with symmetry checked and associativity
    verified on every triple for small groups and on a random sample
    otherwise."""
    basis = steinberg_basis(rs)
    grp = basis.group
    if grp.order > TABLE_GATE:
        raise RankBoundExceeded(
            f"group order {grp.order} exceeds the table gate {TABLE_GATE}"
        )
    table = {}
    for v in grp.elements:
        for vp in grp.elements:
            table[(v, vp)] = kx_basis_product(rs, v, vp)
    for v in grp.elements:
        for vp in grp.elements:
            if table[(v, vp)] != table[(vp, v)]:
                raise SupportViolation("product table is not symmetric")
    if grp.order <= 6:
        triples = [
            (a, b, c)
            for a in grp.elements
            for b in grp.elements
            for c in grp.elements
        ]
    else:
        rng = random.Random(rng_seed)
        triples = [
            (
                grp.elements[rng.randrange(grp.order)],
                grp.elements[rng.randrange(grp.order)],
                grp.elements[rng.randrange(grp.order)],
            )
            for _ in range(40)
        ]
    for a, b, c in triples:
        left = kx_multiply(table[(a, b)], KXElement.generator(rs, c))
        right = kx_multiply(KXElement.generator(rs, a), table[(b, c)])
        if left != right:
            raise SupportViolation(
                f"associativity failed at ({word_str(a)},{word_str(b)},{word_str(c)})"
            )
    return table


def pushdown(rs: RootSystem, two_block: LaurentPoly) -> KGBElement:
    """Collapse the second block by augmentation, then push the first
    block down the characteristic map."""
    return characteristic_map(rs, collapse_second_block(two_block))
