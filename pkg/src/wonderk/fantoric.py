"""Fans in coweight space and the Stanley-Reisner model of the toric K-ring.

Coweights are written in fundamental-coweight coordinates, so the
positive chamber is the nonnegative orthant and pairing a root-lattice
vector in simple-root coordinates against a coweight is a dot product.

A Stanley-Reisner element is stored by its canonical split over the
cones of the fan: the component attached to a cone is the product of
(1 - X_j) over the cone's rays times a Laurent polynomial in those same
variables, and ray sets spanning no cone are dropped.  This makes ideal
membership decidable by construction and the additive split first-class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import (
    ConeNotInFan,
    MissingCone,
    NotFaceClosed,
    NotSmooth,
    SupportMismatch,
)
from .laurent import LaurentPoly, congruent_mod_character, dict_add, dict_mul
from .rootweyl import RootSystem, WeylElement, mat_vec, weyl_group


def _primitive(vec):
    vec = tuple(int(x) for x in vec)
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g == 0:
        raise NotSmooth("zero vector cannot be a ray")
    if g > 1:
        vec = tuple(x // g for x in vec)
    return vec


def _int_det(rows) -> int:
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def _minor_gcd(rows, k) -> int:
    """Gcd of all k x k minors of a k x n integer matrix."""
    n = len(rows[0]) if rows else 0
    g = 0
    for cols in combinations(range(n), k):
        sub = [[row[c] for c in cols] for row in rows]
        g = gcd(g, abs(_int_det(sub)))
    return g


def _kernel_direction(rows, n):
    """Primitive generator of the annihilator of n-1 independent rows."""
    if len(rows) != n - 1:
        raise ValueError("kernel direction needs exactly n-1 rows")
    z = []
    for i in range(n):
        cols = [c for c in range(n) if c != i]
        sub = [[row[c] for c in cols] for row in rows]
        z.append((-1) ** i * _int_det(sub))
    return _primitive(z)


def _inverse_rows(rows):
    """Exact inverse of a unimodular integer matrix, as rows."""
    n = len(rows)
    det = _int_det(rows)
    if det not in (1, -1):
        raise NotSmooth("matrix is not unimodular")
    inv = []
    for i in range(n):
        row = []
        for j in range(n):
            cols = [c for c in range(n) if c != i]
            rws = [r for r in range(n) if r != j]
            sub = [[rows[r][c] for c in cols] for r in rws]
            row.append((-1) ** (i + j) * _int_det(sub) * det)
        inv.append(tuple(row))
    return tuple(inv)


@dataclass(frozen=True)
class Cone:
    rays: frozenset

    def __post_init__(self):
        rays = frozenset(_primitive(r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        if rays:
            mat = [list(r) for r in sorted(rays)]
            if _minor_gcd(mat, len(mat)) == 0:
                raise NotSmooth("cone rays are linearly dependent")

    @property
    def dim(self):
        return len(self.rays)


class Fan:
    """Face-closed set of smooth simplicial cones, given by ray index sets."""

    def __init__(self, rs: RootSystem, rays, cones):
        self.rs = rs
        self.rays = tuple(tuple(int(x) for x in r) for r in rays)
        self.ray_index = {r: i for i, r in enumerate(self.rays)}
        if len(self.ray_index) != len(self.rays):
            raise SupportMismatch("duplicate rays")
        cones = {frozenset(c) for c in cones}
        cones.add(frozenset())
        for c in cones:
            for k in range(1, len(c)):
                for sub in combinations(sorted(c), k):
                    if frozenset(sub) not in cones:
                        raise NotFaceClosed(
                            f"face {list(sub)} of cone {sorted(c)} is missing"
                        )
        self.cones = frozenset(cones)
        self.max_dim = max((len(c) for c in self.cones), default=0)
        maximal = [c for c in self.cones if not any(c < d for d in self.cones)]
        self.maximal = tuple(sorted(maximal, key=lambda c: tuple(sorted(c))))
        self._adjacency = None

    # -- basic queries

    def cone_obj(self, idxset) -> Cone:
        return Cone(frozenset(self.rays[j] for j in idxset))

    def resolve(self, cone) -> frozenset:
        """Accept a Cone, an iterable of ray indices, or a frozenset."""
        if isinstance(cone, Cone):
            try:
                idx = frozenset(self.ray_index[r] for r in cone.rays)
            except KeyError:
                raise ConeNotInFan("cone uses rays outside this fan")
        else:
            idx = frozenset(int(j) for j in cone)
        if idx not in self.cones:
            raise ConeNotInFan(f"{sorted(idx)} is not a cone of this fan")
        return idx

    def cones_of_dim(self, k):
        return tuple(sorted((c for c in self.cones if len(c) == k),
                            key=lambda c: tuple(sorted(c))))

    # -- adjacency of maximal cones through shared facets

    def adjacency(self):
        """Pairs of maximal cones sharing a facet, with the facet character
        in weight coordinates (sign: nonnegative on the earlier cone)."""
        if self._adjacency is not None:
            return self._adjacency
        r = self.rs.rank
        out = []
        for a in range(len(self.maximal)):
            for b in range(a + 1, len(self.maximal)):
                sa, sb = self.maximal[a], self.maximal[b]
                facet = sa & sb
                if len(facet) != len(sa) - 1 or len(sa) != len(sb):
                    continue
                if len(sa) != r:
                    continue
                rows = [self.rays[j] for j in sorted(facet)]
                z = _kernel_direction(rows, r)
                extra_a = next(iter(sa - facet))
                pairing = sum(x * y for x, y in zip(z, self.rays[extra_a]))
                if pairing < 0:
                    z = tuple(-x for x in z)
                chi = mat_vec(self.rs.cartan, z)
                out.append((a, b, facet, chi))
        self._adjacency = tuple(out)
        return self._adjacency

    # -- Weyl action (only meaningful for Weyl-stable fans)

    def ray_permutation(self, w: WeylElement):
        grp = weyl_group(self.rs)
        m = grp.coweight_matrix(w)
        perm = []
        for ray in self.rays:
            img = mat_vec(m, ray)
            j = self.ray_index.get(img)
            if j is None:
                raise ConeNotInFan("fan is not stable under this element")
            perm.append(j)
        return tuple(perm)

    def act_cone(self, w: WeylElement, cone) -> frozenset:
        idx = self.resolve(cone)
        perm = self.ray_permutation(w)
        out = frozenset(perm[j] for j in idx)
        if out not in self.cones:
            raise ConeNotInFan("image cone is missing; fan not stable")
        return out


def chamber_fan(rs: RootSystem):
    """The Weyl-chamber fan, its positive part and the action on cones."""
    r = rs.rank
    grp = weyl_group(rs)
    units = [tuple(1 if k == i else 0 for k in range(r)) for i in range(r)]
    pos_cones = [frozenset(S) for k in range(r + 1) for S in combinations(range(r), k)]
    fan_plus = Fan(rs, units, pos_cones)

    rays = []
    ray_index = {}
    for w in grp.elements:
        m = grp.coweight_matrix(w)
        for u in units:
            img = mat_vec(m, u)
            if img not in ray_index:
                ray_index[img] = len(rays)
                rays.append(img)
    cones = set()
    for w in grp.elements:
        m = grp.coweight_matrix(w)
        for k in range(r + 1):
            for S in combinations(range(r), k):
                cones.add(frozenset(ray_index[mat_vec(m, units[i])] for i in S))
    fan = Fan(rs, rays, cones)

    def action(w: WeylElement, cone):
        return fan.cone_obj(fan.act_cone(w, cone))

    return fan, fan_plus, action


def _find_interior_multiplicity(fan: Fan, point) -> int:
    """Number of maximal cones containing an interior rational point."""
    count = 0
    r = fan.rs.rank
    for c in fan.maximal:
        rows = [fan.rays[j] for j in sorted(c)]
        # solve point = sum lambda_i * ray_i exactly
        mat = [[Fraction(rows[i][k]) for i in range(r)] for k in range(r)]
        vec = [Fraction(p) for p in point]
        # gaussian elimination
        for col in range(r):
            piv = next((i for i in range(col, r) if mat[i][col] != 0), None)
            if piv is None:
                break
            mat[col], mat[piv] = mat[piv], mat[col]
            vec[col], vec[piv] = vec[piv], vec[col]
            for i in range(r):
                if i != col and mat[i][col] != 0:
                    f = mat[i][col] / mat[col][col]
                    for k in range(col, r):
                        mat[i][k] -= f * mat[col][k]
                    vec[i] -= f * vec[col]
        else:
            lams = [vec[i] / mat[i][i] for i in range(r)]
            if all(l > 0 for l in lams):
                count += 1
            elif any(l == 0 for l in lams) and all(l >= 0 for l in lams):
                return -1  # point on a boundary; caller retries
    return count


def subdivided_positive_fan(rs: RootSystem, rays, cones) -> Fan:
    """Validate a user-supplied smooth subdivision of the positive chamber."""
    r = rs.rank
    rays = [tuple(int(x) for x in ray) for ray in rays]
    for ray in rays:
        if _primitive(ray) != ray:
            raise NotSmooth(f"ray {ray} is not primitive")
        if any(x < 0 for x in ray):
            raise SupportMismatch(f"ray {ray} leaves the positive chamber")
    cone_sets = {frozenset(int(j) for j in c) for c in cones}
    cone_sets.discard(frozenset())
    used = set().union(*cone_sets) if cone_sets else set()
    if used - set(range(len(rays))):
        raise NotFaceClosed("cone refers to an unknown ray index")
    if set(range(len(rays))) - used:
        raise SupportMismatch("unused ray")
    for c in cone_sets:
        for k in range(1, len(c)):
            for sub in combinations(sorted(c), k):
                if frozenset(sub) not in cone_sets:
                    raise NotFaceClosed(
                        f"face {list(sub)} of cone {sorted(c)} is missing"
                    )
    for c in cone_sets:
        mat = [list(rays[j]) for j in sorted(c)]
        if _minor_gcd(mat, len(mat)) != 1:
            raise NotSmooth(f"cone {sorted(c)} is not smooth")
    fan = Fan(rs, rays, cone_sets)
    if not fan.maximal or any(len(c) != r for c in fan.maximal):
        raise SupportMismatch("subdivision is not pure of full dimension")
    # every facet is either on a chamber wall or shared by exactly two
    # maximal cones sitting on opposite sides
    facet_owners: dict = {}
    for ci, c in enumerate(fan.maximal):
        for drop in sorted(c):
            facet = frozenset(c - {drop})
            facet_owners.setdefault(facet, []).append((ci, drop))
    for facet, owners in facet_owners.items():
        on_wall = any(
            all(fan.rays[j][i] == 0 for j in facet) for i in range(r)
        )
        if len(owners) == 1:
            if not on_wall:
                raise SupportMismatch(
                    f"facet {sorted(facet)} is unmatched and not on a wall"
                )
            continue
        if len(owners) > 2:
            raise SupportMismatch(f"facet {sorted(facet)} shared by >2 cones")
        z = _kernel_direction([fan.rays[j] for j in sorted(facet)], r)
        (ca, da), (cb, db) = owners
        pa = sum(x * y for x, y in zip(z, fan.rays[da]))
        pb = sum(x * y for x, y in zip(z, fan.rays[db]))
        if pa * pb >= 0:
            raise SupportMismatch(
                f"cones around facet {sorted(facet)} overlap or leave a gap"
            )
    # exact interior point count as an overlap/gap cross-check
    for trial in ((2, 3, 5, 7), (3, 7, 13, 23), (5, 11, 29, 31)):
        mult = _find_interior_multiplicity(fan, trial[:r])
        if mult == -1:
            continue
        if mult != 1:
            raise SupportMismatch(
                "subdivision does not cover the chamber exactly once"
            )
        break
    return fan


# ---------------------------------------------------------------------------
# Stanley-Reisner elements


def _restrict_exponents(terms, positions):
    out = {}
    for e, c in terms.items():
        out[tuple(e[p] for p in positions)] = c
    return out


class SRElement:
    """Element of the Stanley-Reisner quotient in canonical split form.

    ``comps`` maps a cone (frozenset of ray indices) to the quotient by
    the cone's product of (1 - X_j); exponents run over the cone's rays
    in increasing index order.
    """

    __slots__ = ("fan", "comps")

    def __init__(self, fan: Fan, comps: dict):
        self.fan = fan
        self.comps = {c: t for c, t in comps.items() if t}

    # -- constructors

    @classmethod
    def zero(cls, fan: Fan) -> "SRElement":
        return cls(fan, {})

    @classmethod
    def one(cls, fan: Fan) -> "SRElement":
        return cls(fan, {frozenset(): {(): 1}})

    @classmethod
    def variable(cls, fan: Fan, j: int, power: int = 1) -> "SRElement":
        if frozenset((j,)) not in fan.cones:
            raise ConeNotInFan(f"ray {j} is not in the fan")
        d = len(fan.rays)
        exp = tuple(power if k == j else 0 for k in range(d))
        return cls.from_laurent(fan, {exp: 1})

    @classmethod
    def from_laurent(cls, fan: Fan, terms: dict) -> "SRElement":
        """Split a raw Laurent polynomial in the ray variables over the
        cones, peeling one (1 - X_j) factor per variable, and drop the
        pieces indexed by non-cones."""
        d = len(fan.rays)
        comps: dict = {}

        def peel(cur: dict, fixed: frozenset, vars_left):
            if not cur:
                return
            if fixed not in fan.cones:
                # faces are closed, so no extension of fixed is a cone
                return
            j = next((v for v in vars_left if any(e[v] for e in cur)), None)
            if j is None:
                if fixed in fan.cones:
                    pos = sorted(fixed)
                    add = _restrict_exponents(cur, pos)
                    comps[fixed] = dict_add(comps.get(fixed, {}), add)
                return
            rest = [v for v in vars_left if v != j]
            # substitute X_j = 1
            collapsed: dict = {}
            for e, c in cur.items():
                key = e[:j] + (0,) + e[j + 1:]
                s = collapsed.get(key, 0) + c
                if s:
                    collapsed[key] = s
                else:
                    del collapsed[key]
            peel(collapsed, fixed, rest)
            # exact quotient (cur - collapsed) / (1 - X_j), variable by fiber
            groups: dict = {}
            for e, c in cur.items():
                groups.setdefault(e[:j] + (0,) + e[j + 1:], {})[e[j]] = c
            for e, c in collapsed.items():
                grp = groups.setdefault(e, {})
                grp[0] = grp.get(0, 0) - c
            quot: dict = {}
            for base, fiber in groups.items():
                if not any(fiber.values()):
                    continue
                ks = sorted(fiber)
                lo, hi = ks[0], ks[-1]
                acc = 0
                for k in range(lo, hi):
                    acc += fiber.get(k, 0)
                    if acc:
                        quot[base[:j] + (k,) + base[j + 1:]] = acc
                # the full coefficient sum vanishes, so division is exact
            peel(quot, fixed | {j}, rest)

        clean = {tuple(e): int(c) for e, c in terms.items() if c}
        peel(clean, frozenset(), list(range(d)))
        return cls(fan, comps)

    # -- ring structure

    def _check(self, other):
        if self.fan is not other.fan:
            raise ConeNotInFan("elements belong to different fans")

    def __add__(self, other):
        self._check(other)
        comps = dict(self.comps)
        for c, t in other.comps.items():
            comps[c] = dict_add(comps.get(c, {}), t)
        return SRElement(self.fan, comps)

    def __neg__(self):
        return SRElement(self.fan, {c: {e: -x for e, x in t.items()} for c, t in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return SRElement.zero(self.fan)
            return SRElement(
                self.fan,
                {c: {e: other * x for e, x in t.items()} for c, t in self.comps.items()},
            )
        self._check(other)
        comps: dict = {}
        for ca, ta in self.comps.items():
            for cb, tb in other.comps.items():
                union = ca | cb
                if union not in self.fan.cones:
                    continue
                pos = sorted(union)
                place = {j: k for k, j in enumerate(pos)}
                arity = len(pos)

                def embed(t, cone):
                    idx = [place[j] for j in sorted(cone)]
                    out = {}
                    for e, c in t.items():
                        full = [0] * arity
                        for p, x in zip(idx, e):
                            full[p] = x
                        out[tuple(full)] = c
                    return out

                prod = dict_mul(embed(ta, ca), embed(tb, cb))
                for j in ca & cb:
                    k = place[j]
                    unit = {(0,) * arity: 1}
                    xj = {tuple(1 if i == k else 0 for i in range(arity)): -1}
                    prod = dict_mul(prod, dict_add(unit, xj))
                if prod:
                    comps[union] = dict_add(comps.get(union, {}), prod)
        return SRElement(self.fan, comps)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, SRElement)
            and self.fan is other.fan
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash(tuple(sorted((tuple(sorted(c)), tuple(sorted(t.items())))
                                 for c, t in self.comps.items())))

    @property
    def is_zero(self):
        return not self.comps

    def to_laurent(self) -> dict:
        """Raw representative in the full ray-variable Laurent ring."""
        d = len(self.fan.rays)
        total: dict = {}
        for cone, t in self.comps.items():
            pos = sorted(cone)
            expanded = {}
            for e, c in t.items():
                full = [0] * d
                for p, x in zip(pos, e):
                    full[p] = x
                expanded[tuple(full)] = c
            for j in pos:
                unit = {(0,) * d: 1}
                xj = {tuple(1 if i == j else 0 for i in range(d)): -1}
                expanded = dict_mul(expanded, dict_add(unit, xj))
            total = dict_add(total, expanded)
        return total

    def component(self, cone) -> "SRElement":
        idx = self.fan.resolve(cone)
        t = self.comps.get(idx)
        return SRElement(self.fan, {idx: dict(t)} if t else {})

    def act(self, w: WeylElement) -> "SRElement":
        perm = self.fan.ray_permutation(w)
        comps = {}
        for cone, t in self.comps.items():
            new_cone = frozenset(perm[j] for j in cone)
            old_pos = sorted(cone)
            new_pos = sorted(new_cone)
            slot = {j: k for k, j in enumerate(new_pos)}
            reorder = [slot[perm[j]] for j in old_pos]
            out = {}
            for e, c in t.items():
                full = [0] * len(new_pos)
                for p, x in zip(reorder, e):
                    full[p] = x
                out[tuple(full)] = c
            comps[new_cone] = dict_add(comps.get(new_cone, {}), out)
        return SRElement(self.fan, comps)

    def __repr__(self):
        bits = []
        for cone in sorted(self.comps, key=lambda c: tuple(sorted(c))):
            bits.append(f"{sorted(cone)}:{len(self.comps[cone])}t")
        return "SRElement(" + ", ".join(bits) + ")"


def sr_normal_form(e: SRElement) -> SRElement:
    """Recompute the canonical split from a raw representative."""
    return SRElement.from_laurent(e.fan, e.to_laurent())


def c_tau_decompose(e: SRElement) -> dict:
    """The additive split of an element, one piece per cone of the fan."""
    return {
        e.fan.cone_obj(cone): SRElement(e.fan, {cone: dict(t)})
        for cone, t in e.comps.items()
    }


def cone_stabilizer(fan: Fan, cone):
    """Setwise stabilizer of a cone in the Weyl group, plus whether that
    stabilizer fixes the cone ray by ray."""
    idx = fan.resolve(cone)
    ray_vecs = [fan.rays[j] for j in sorted(idx)]
    ray_set = set(ray_vecs)
    grp = weyl_group(fan.rs)
    setwise = []
    pointwise = True
    for w in grp.elements:
        m = grp.coweight_matrix(w)
        images = [mat_vec(m, v) for v in ray_vecs]
        if set(images) == ray_set:
            setwise.append(w)
            if any(img != v for img, v in zip(images, ray_vecs)):
                pointwise = False
    return tuple(setwise), pointwise


def restrict_to_maximal_cone(e: SRElement, cone) -> LaurentPoly:
    """Value of an element at the distinguished point of a maximal cone.

    Each ray variable of the cone evaluates to the exponential of the
    weight dual to that ray; variables outside the cone evaluate to 1.
    """
    fan = e.fan
    idx = fan.resolve(cone)
    r = fan.rs.rank
    if len(idx) != r:
        raise ConeNotInFan("restriction needs a maximal cone")
    pos = sorted(idx)
    rows = [fan.rays[j] for j in pos]
    inv = _inverse_rows(rows)
    # column k of the inverse pairs to 1 with ray k and to 0 with the rest
    dual = [tuple(inv[i][k] for i in range(r)) for k in range(r)]
    chis = {j: mat_vec(fan.rs.cartan, dual[k]) for k, j in enumerate(pos)}
    out: dict = {}
    for full, c in e.to_laurent().items():
        weight = [0] * r
        for j in pos:
            if full[j]:
                chi = chis[j]
                for i in range(r):
                    weight[i] += full[j] * chi[i]
        key = tuple(weight)
        s = out.get(key, 0) + c
        if s:
            out[key] = s
        else:
            del out[key]
    return LaurentPoly(out, r, 1)


def localization_check(fan_plus: Fan, family: dict) -> bool:
    """Whether a family of values on the maximal cones satisfies the
    facet congruences of the localization description."""
    values = {}
    for key, val in family.items():
        values[int(key)] = val
    for i in range(len(fan_plus.maximal)):
        if i not in values:
            raise MissingCone(f"family misses maximal cone {i}")
    for a, b, _facet, chi in fan_plus.adjacency():
        if not congruent_mod_character(values[a], values[b], chi):
            return False
    return True


def fan_to_json(fan: Fan) -> dict:
    return {
        "rays": [list(r) for r in fan.rays],
        "cones": sorted(
            [sorted(c) for c in fan.cones if c],
        ),
        "maximal": [sorted(c) for c in fan.maximal],
    }


def fan_from_json(rs: RootSystem, obj: dict) -> Fan:
    return subdivided_positive_fan(rs, obj["rays"], obj["cones"])
