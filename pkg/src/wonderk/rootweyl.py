"""Root systems and Weyl group combinatorics.

Weights live in the fundamental-weight basis: a weight is a tuple of r
integers, and the j-th simple root is the j-th column of the Cartan
matrix.  Coweights are expressed in the dual basis of fundamental
coweights, so the pairing of a root-lattice vector (alpha-coordinates z)
with a coweight (coordinates y) is the plain dot product z.y.

All values are immutable after construction and every operation is pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import InvalidCartanLabel, NotMinimalRep, RankBoundExceeded

DEFAULT_RANK_BOUND = 4

_ADMISSIBLE_MIN = {"A": 1, "B": 2, "C": 3, "D": 4}
_ADMISSIBLE_EXACT = {"E": (6, 7, 8), "F": (4,), "G": (2,)}

_LABEL_RE = re.compile(r"^([A-G])\s*(\d+)$")


@dataclass(frozen=True)
class CartanLabel:
    family: str
    rank: int

    def __post_init__(self):
        fam, rank = self.family, self.rank
        ok = False
        if fam in _ADMISSIBLE_MIN:
            ok = rank >= _ADMISSIBLE_MIN[fam]
        elif fam in _ADMISSIBLE_EXACT:
            ok = rank in _ADMISSIBLE_EXACT[fam]
        if not ok:
            raise InvalidCartanLabel(f"no simple root system of type {fam}{rank}")

    @classmethod
    def parse(cls, text: str) -> "CartanLabel":
        m = _LABEL_RE.match(text.strip())
        if not m:
            raise InvalidCartanLabel(f"cannot parse Cartan label {text!r}")
        return cls(m.group(1), int(m.group(2)))

    def __str__(self):
        return f"{self.family}{self.rank}"


def _chain_edges(rank):
    return [(i, i + 1) for i in range(rank - 1)]


def _cartan_rows(label: CartanLabel):
    fam, r = label.family, label.rank
    rows = [[2 if i == j else 0 for j in range(r)] for i in range(r)]
    if fam in ("A", "B", "C"):
        edges = _chain_edges(r)
    elif fam == "D":
        edges = _chain_edges(r - 1) + [(r - 3, r - 1)]
    elif fam == "E":
        edges = [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]
        if r >= 7:
            edges.append((5, 6))
        if r == 8:
            edges.append((6, 7))
    elif fam == "F":
        edges = _chain_edges(4)
    else:  # G
        edges = [(0, 1)]
    for i, j in edges:
        rows[i][j] = rows[j][i] = -1
    # asymmetric entries for the non simply laced families
    if fam == "B":
        rows[r - 1][r - 2] = -2
    elif fam == "C":
        rows[r - 2][r - 1] = -2
    elif fam == "F":
        rows[2][1] = -2
    elif fam == "G":
        rows[1][0] = -3
    return tuple(tuple(row) for row in rows)


def mat_vec(m, v):
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in m)


def mat_mul(a, b):
    n = len(a)
    cols = list(zip(*b))
    return tuple(tuple(sum(a[i][k] * col[k] for k in range(n)) for col in cols) for i in range(n))


def identity_matrix(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


class RootSystem:
    """Simple roots, positive roots and Cartan matrix of one Cartan type."""

    def __init__(self, label: CartanLabel):
        self.label = label
        self.rank = label.rank
        self.cartan = _cartan_rows(label)
        r = self.rank
        # closure of the simple roots under the simple reflections, in
        # alpha-coordinates: s_i(z) subtracts (Cz)_i from coordinate i
        seen = set()
        frontier = [tuple(1 if k == i else 0 for k in range(r)) for i in range(r)]
        seen.update(frontier)
        while frontier:
            nxt = []
            for z in frontier:
                cz = mat_vec(self.cartan, z)
                for i in range(r):
                    w = list(z)
                    w[i] -= cz[i]
                    w = tuple(w)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        pos_alpha = sorted(z for z in seen if all(c >= 0 for c in z))
        self.positive_roots_alpha = tuple(pos_alpha)
        self.positive_roots = tuple(mat_vec(self.cartan, z) for z in pos_alpha)
        self._pos_set = frozenset(self.positive_roots)
        # simple roots in the fundamental-weight basis: Cartan matrix columns
        self.simple_roots = tuple(tuple(self.cartan[i][j] for i in range(r)) for j in range(r))

    def is_positive(self, weight) -> bool:
        return weight in self._pos_set

    def is_negative(self, weight) -> bool:
        return tuple(-c for c in weight) in self._pos_set

    def __eq__(self, other):
        return isinstance(other, RootSystem) and self.label == other.label

    def __hash__(self):
        return hash(self.label)

    def __repr__(self):
        return f"RootSystem({self.label})"


def build_root_system(label) -> RootSystem:
    if isinstance(label, str):
        label = CartanLabel.parse(label)
    return RootSystem(label)


class WeylElement:
    """Group element with its canonical reduced word and lattice actions.

    ``matrix`` acts on weights in the fundamental-weight basis,
    ``alpha_matrix`` on the root lattice in simple-root coordinates.
    Words use 1-based generator indices and multiply left to right.
    """

    __slots__ = ("word", "matrix", "alpha_matrix")

    def __init__(self, word, matrix, alpha_matrix):
        self.word = word
        self.matrix = matrix
        self.alpha_matrix = alpha_matrix

    @property
    def length(self):
        return len(self.word)

    def key(self):
        return (len(self.word), self.word)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"<{word_str(self)}>"


def word_str(w: WeylElement) -> str:
    if not w.word:
        return "1"
    return ".".join(f"s{i}" for i in w.word)


def subset_mask(indices, rank) -> int:
    """Bitmask from 1-based simple-root indices (ints pass through)."""
    if isinstance(indices, int):
        mask = indices
    else:
        mask = 0
        for i in indices:
            mask |= 1 << (int(i) - 1)
    if mask < 0 or mask >= (1 << rank):
        raise InvalidCartanLabel(f"subset {indices!r} out of range for rank {rank}")
    return mask


def subset_indices(mask: int) -> tuple:
    """Sorted 1-based indices of a subset bitmask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class WeylGroup:
    """Complete enumeration of W with canonical (length, word) order."""

    def __init__(self, rs: RootSystem, max_rank: int = DEFAULT_RANK_BOUND):
        if rs.rank > max_rank:
            raise RankBoundExceeded(
                f"rank {rs.rank} exceeds the enumeration bound {max_rank}"
            )
        self.rs = rs
        r = rs.rank
        cartan = rs.cartan
        ident = identity_matrix(r)

        gen_w = []
        gen_a = []
        for i in range(r):
            m = [list(row) for row in ident]
            for k in range(r):
                m[k][i] -= cartan[k][i]
            gen_w.append(tuple(tuple(row) for row in m))
            a = [list(row) for row in ident]
            for j in range(r):
                a[i][j] -= cartan[i][j]
            gen_a.append(tuple(tuple(row) for row in a))
        self._gen_w = tuple(gen_w)
        self._gen_a = tuple(gen_a)

        # breadth first search by length; keep the lex-least reduced word
        elems = {ident: ((), ident)}
        level = [((), ident, ident)]
        while level:
            found = {}
            for word, mw, ma in level:
                for i in range(r):
                    nw = mat_mul(mw, gen_w[i])
                    if nw in elems:
                        continue
                    cand = word + (i + 1,)
                    prev = found.get(nw)
                    if prev is None or cand < prev[0]:
                        found[nw] = (cand, mat_mul(ma, gen_a[i]))
            level = []
            for nw, (cand, na) in found.items():
                elems[nw] = (cand, na)
                level.append((cand, nw, na))

        order = sorted(elems.items(), key=lambda kv: (len(kv[1][0]), kv[1][0]))
        self.elements = tuple(
            WeylElement(word, m, am) for m, (word, am) in order
        )
        self._by_matrix = {w.matrix: w for w in self.elements}
        self.identity = self.elements[0]
        self.simple = tuple(self._by_matrix[gen_w[i]] for i in range(r))
        self._inv = {}
        for w in self.elements:
            m = ident
            for i in reversed(w.word):
                m = mat_mul(m, gen_w[i - 1])
            self._inv[w] = self._by_matrix[m]
        self._descents = {w: self._descent_mask(w) for w in self.elements}
        self.longest = max(self.elements, key=lambda w: len(w.word))
        self._coweight = {}

    @property
    def order(self):
        return len(self.elements)

    def element(self, matrix) -> WeylElement:
        return self._by_matrix[matrix]

    def mul(self, a: WeylElement, b: WeylElement) -> WeylElement:
        return self._by_matrix[mat_mul(a.matrix, b.matrix)]

    def inv(self, a: WeylElement) -> WeylElement:
        return self._inv[a]

    def act(self, w: WeylElement, weight) -> tuple:
        return mat_vec(w.matrix, weight)

    def from_word(self, word) -> WeylElement:
        m = identity_matrix(self.rs.rank)
        for i in word:
            m = mat_mul(m, self._gen_w[i - 1])
        return self._by_matrix[m]

    def parse(self, text: str) -> WeylElement:
        text = text.strip()
        if text == "1":
            return self.identity
        word = []
        for part in text.split("."):
            if not part.startswith("s"):
                raise InvalidCartanLabel(f"bad Weyl word {text!r}")
            word.append(int(part[1:]))
        return self.from_word(word)

    def _descent_mask(self, w: WeylElement) -> int:
        # i is a (right) descent iff w(alpha_i) < 0
        mask = 0
        for i, alpha in enumerate(self.rs.simple_roots):
            if self.rs.is_negative(mat_vec(w.matrix, alpha)):
                mask |= 1 << i
        return mask

    def descent_mask(self, w: WeylElement) -> int:
        return self._descents[w]

    def inversions(self, w: WeylElement) -> int:
        return sum(
            1 for a in self.rs.positive_roots if self.rs.is_negative(mat_vec(w.matrix, a))
        )

    def parabolic(self, mask: int) -> tuple:
        """Elements of the standard parabolic subgroup W_I."""
        allowed = {i + 1 for i in range(self.rs.rank) if mask >> i & 1}
        return tuple(w for w in self.elements if set(w.word) <= allowed)

    def minimal_coset_reps(self, mask: int) -> tuple:
        """W^I: elements whose every right descent avoids I."""
        return tuple(w for w in self.elements if self._descents[w] & mask == 0)

    def c_cell(self, w: WeylElement) -> int:
        """The unique I with w in C^I; equals the right descent set."""
        return self._descents[w]

    def c_sets(self) -> dict:
        out = {mask: [] for mask in range(1 << self.rs.rank)}
        for w in self.elements:
            out[self._descents[w]].append(w)
        return {mask: tuple(ws) for mask, ws in out.items()}

    def steinberg_weight(self, v: WeylElement) -> tuple:
        """Exponent of the monomial obtained by pulling p_v back through v."""
        r = self.rs.rank
        vinv = self._inv[v]
        exp = [0] * r
        for i, alpha in enumerate(self.rs.simple_roots):
            if self.rs.is_negative(mat_vec(vinv.matrix, alpha)):
                exp[i] = 1
        return mat_vec(vinv.matrix, tuple(exp))

    def p_weight(self, v: WeylElement) -> tuple:
        r = self.rs.rank
        vinv = self._inv[v]
        exp = [0] * r
        for i, alpha in enumerate(self.rs.simple_roots):
            if self.rs.is_negative(mat_vec(vinv.matrix, alpha)):
                exp[i] = 1
        return tuple(exp)

    def stabilizer_and_reps(self, v: WeylElement, mask: int):
        """Stabilizer of the pulled-back monomial in W_I and the shortest
        element of each of its right cosets in W_I."""
        if self._descents[v] & mask:
            raise NotMinimalRep(f"{word_str(v)} is not a minimal representative")
        mu = self.steinberg_weight(v)
        members = self.parabolic(mask)
        stab = tuple(x for x in members if mat_vec(x.matrix, mu) == mu)
        cosets = {}
        for x in members:
            key = mat_vec(self._inv[x].matrix, mu)
            best = cosets.get(key)
            if best is None or x.key() < best.key():
                cosets[key] = x
        reps = tuple(sorted(cosets.values(), key=WeylElement.key))
        return stab, reps

    def coweight_matrix(self, w: WeylElement) -> tuple:
        """Action on coweights in fundamental-coweight coordinates."""
        m = self._coweight.get(w)
        if m is None:
            inv_a = self._inv[w].alpha_matrix
            m = tuple(zip(*inv_a))
            self._coweight[w] = m
        return m


_GROUPS: dict = {}


def weyl_group(rs: RootSystem, max_rank: int = DEFAULT_RANK_BOUND) -> WeylGroup:
    if rs.rank > max_rank:
        raise RankBoundExceeded(
            f"rank {rs.rank} exceeds the enumeration bound {max_rank}"
        )
    grp = _GROUPS.get(rs.label)
    if grp is None:
        grp = WeylGroup(rs, max_rank=max_rank)
        _GROUPS[rs.label] = grp
    return grp


def enumerate_weyl(rs: RootSystem, max_rank: int = DEFAULT_RANK_BOUND) -> tuple:
    return weyl_group(rs, max_rank).elements


def minimal_coset_reps(rs: RootSystem, subset) -> tuple:
    grp = weyl_group(rs)
    return grp.minimal_coset_reps(subset_mask(subset, rs.rank))


def c_sets(rs: RootSystem) -> dict:
    return weyl_group(rs).c_sets()


def stabilizer_and_reps(rs: RootSystem, v: WeylElement, subset):
    grp = weyl_group(rs)
    return grp.stabilizer_and_reps(v, subset_mask(subset, rs.rank))
