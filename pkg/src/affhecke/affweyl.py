"""The (extended) affine Weyl group of a root system.

Elements of W~ = W_0 x| P are stored translation-first, t_lambda * u,
as (finite part, translation coordinates).  Length is the number of
arrangement hyperplanes separating the fundamental alcove from its
image, counted exactly; reduced words come from a deterministic alcove
walk (lowest generator index first).  The module also provides the
length-zero subgroup G with its type-rotating diagram automorphisms,
the duality automorphism, minimal double-coset representatives
w_lambda, parabolic and double-coset enumeration, Poincare polynomials
and the parameter-class partition of the generators.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Optional

from .coeff import LaurentPoly, ParamRing, StructureError
from .rootdata import (
    Coords,
    RootSystem,
    Vec,
    WeylElement,
    dot,
    vadd,
    vscale,
)

_ENUM_CAP = 1152


class AffineElement:
    """t_lambda * u in W~: the affine map x -> u(x) + lambda."""

    __slots__ = ("weyl", "trans", "_hash")

    def __init__(self, weyl: WeylElement, trans: Coords):
        self.weyl = weyl
        self.trans = trans
        self._hash = hash((trans, weyl.perm))

    @property
    def rs(self) -> RootSystem:
        return self.weyl.rs

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, AffineElement):
            return NotImplemented
        return self.trans == other.trans and self.weyl.perm == other.weyl.perm

    def __hash__(self):
        return self._hash

    def apply(self, vec: Vec) -> Vec:
        return vadd(self.weyl.apply(vec), self.rs.point_of(self.trans))

    def apply_coords(self, coords: Coords) -> Coords:
        return tuple(
            a + b for a, b in zip(self.weyl.apply_coords(coords), self.trans)
        )

    def compose(self, other: "AffineElement") -> "AffineElement":
        """(t_a u)(t_b v) = t_{a + u b} (u v)."""
        if self.rs is not other.rs:
            raise StructureError("cannot compose over different root systems")
        shift = self.weyl.apply_coords(other.trans)
        return AffineElement(
            self.weyl.compose(other.weyl),
            tuple(a + b for a, b in zip(self.trans, shift)),
        )

    def inverse(self) -> "AffineElement":
        uinv = self.weyl.inverse()
        return AffineElement(
            uinv, tuple(-c for c in uinv.apply_coords(self.trans))
        )

    def is_identity(self) -> bool:
        return self.weyl.is_identity() and not any(self.trans)

    def is_translation(self) -> bool:
        return self.weyl.is_identity()

    def __repr__(self):
        return format_element(self)


def format_element(w: AffineElement) -> str:
    """Descriptor form 't[1,0]*s1*s2' (identity prints 'e')."""
    parts = []
    if any(w.trans):
        parts.append("t[" + ",".join(map(str, w.trans)) + "]")
    word = w.rs.coxeter_word(w.weyl)
    parts.extend(f"s{i}" for i in word)
    return "*".join(parts) if parts else "e"


class CoxeterGraph:
    """Affine Coxeter matrix with optional type-rotating automorphisms.

    m[i][j] is the bond order (None for infinity).  Extended-mode class
    computations need the type-rotating automorphisms, which depend on
    the root system, not just on the graph; plain-matrix graphs support
    W-conjugacy mode only.
    """

    def __init__(self, matrix, type_rotating: Optional[tuple] = None):
        self.matrix = tuple(tuple(row) for row in matrix)
        self.size = len(self.matrix)
        self.type_rotating = type_rotating
        for i in range(self.size):
            if self.matrix[i][i] != 1:
                raise StructureError("Coxeter matrix needs m[i][i] = 1")
            for j in range(self.size):
                m = self.matrix[i][j]
                if m != self.matrix[j][i] or (i != j and m is not None and m < 2):
                    raise StructureError("invalid Coxeter matrix")

    def edges(self):
        return [
            (i, j, self.matrix[i][j])
            for i in range(self.size)
            for j in range(i + 1, self.size)
            if self.matrix[i][j] is None or self.matrix[i][j] >= 3
        ]


def parameter_classes(graph: CoxeterGraph, mode: str = "W") -> tuple:
    """Partition of the generator indices forced to share one parameter.

    mode 'W': connected components under odd finite bonds.  mode
    'Wtilde': additionally merged along the type-rotating orbits.
    Returned as a tuple of sorted tuples, ordered by smallest member.
    """
    parent = list(range(graph.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for i in range(graph.size):
        for j in range(i + 1, graph.size):
            m = graph.matrix[i][j]
            if m is not None and m % 2 == 1 and m >= 3:
                union(i, j)
    if mode == "Wtilde":
        if graph.type_rotating is None:
            raise StructureError(
                "extended-mode classes need the type-rotating automorphisms"
            )
        for sigma in graph.type_rotating:
            for i, si in enumerate(sigma):
                union(i, si)
    elif mode != "W":
        raise StructureError(f"unknown mode {mode!r}")
    groups: dict = {}
    for i in range(graph.size):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(sorted(g)) for g in sorted(groups.values()))


class AffineWeyl:
    """Context object: one extended affine Weyl group with its caches."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        n = rs.rank
        self.index_set = tuple(range(n + 1))  # 0 = affine node

        self.identity = AffineElement(rs.identity, rs.zero_coweight())
        gens = [None] * (n + 1)
        for i in range(1, n + 1):
            gens[i] = AffineElement(
                rs.simple_reflections[i - 1], rs.zero_coweight()
            )
        theta = rs.highest_root
        gens[0] = AffineElement(
            rs.reflection(theta), rs.coords_of(rs.coroot(theta))
        )
        self.generators = tuple(gens)

        # fundamental alcove geometry: vertices {0} u {lambda_i / m_i}
        zero = tuple(Fraction(0) for _ in range(rs.dim))
        self.alcove_vertices = (zero,) + tuple(
            vscale(Fraction(1, rs.marks[i - 1]), rs.coweights[i - 1])
            for i in range(1, n + 1)
        )
        bary = zero
        for v in self.alcove_vertices:
            bary = vadd(bary, v)
        self.barycenter = vscale(Fraction(1, n + 1), bary)

        # wall data: positive indivisible directions with their level step
        rootset = set(rs.all_roots)
        self.wall_directions = tuple(
            (alpha, Fraction(1, 2) if vscale(2, alpha) in rootset else Fraction(1))
            for alpha in rs.positive_indivisible
        )
        # walls of the fundamental alcove, as (direction vector, level)
        walls = [(theta, Fraction(1))]
        walls += [(a, Fraction(0)) for a in rs.simple_roots]
        self.fundamental_walls = tuple(walls)

        self._len_cache: dict = {}
        self._word_cache: dict = {}
        self._qexp_cache: dict = {}
        self._parabolic_cache: dict = {}
        self._wlambda_cache: dict = {}

        self.coxeter_graph = CoxeterGraph(self._coxeter_matrix())
        self._build_length_zero_group()
        self.coxeter_graph = CoxeterGraph(
            self.coxeter_graph.matrix,
            tuple(self.sigma[j] for j in self.rs.good_types),
        )
        self.classes = parameter_classes(self.coxeter_graph, "Wtilde")
        self.ring = ParamRing(tuple(f"q{c[0]}" for c in self.classes))
        self.class_index = {}
        for pos, cls in enumerate(self.classes):
            for i in cls:
                self.class_index[i] = pos
        self._build_sigma_star()

    # -- group basics --------------------------------------------------

    def from_weyl(self, w: WeylElement) -> AffineElement:
        return AffineElement(w, self.rs.zero_coweight())

    def translation(self, coords: Coords) -> AffineElement:
        return AffineElement(self.rs.identity, tuple(coords))

    def compose(self, *elements: AffineElement) -> AffineElement:
        out = self.identity
        for e in elements:
            out = out.compose(e)
        return out

    def element_from_word(self, word: Iterable[int], g_index: int = 0) -> AffineElement:
        out = self.identity
        for i in word:
            out = out.compose(self.generators[i])
        if g_index:
            out = out.compose(self.g_elements[g_index])
        return out

    def in_unextended(self, w: AffineElement) -> bool:
        """True iff w lies in W = W_0 x| Q (translation part in Q)."""
        return self.rs.in_coroot_lattice(w.trans)

    # -- length and words ------------------------------------------------

    def length(self, w: AffineElement) -> int:
        """Number of hyperplanes separating C_0 from w^{-1} C_0."""
        cached = self._len_cache.get(w)
        if cached is not None:
            return cached
        p = self.barycenter
        q = w.inverse().apply(p)
        total = 0
        for alpha, step in self.wall_directions:
            a = dot(p, alpha) / step
            b = dot(q, alpha) / step
            if a > b:
                a, b = b, a
            total += (b.numerator // b.denominator) - (a.numerator // a.denominator)
        self._len_cache[w] = total
        return total

    def split_length_zero(self, w: AffineElement):
        """Unique factorization w = v * g with v in W, g in G.

        Returns (v, j) with g = g_j.
        """
        for j in self.rs.good_types:
            v = w.compose(self.g_inverses[j])
            if self.in_unextended(v):
                return v, j
        raise StructureError("no length-zero factor found (broken element)")

    def _walk(self, w: AffineElement, rng: Optional[random.Random]) -> tuple:
        target = w.apply(self.barycenter)
        cur = self.identity
        cur_bary = self.barycenter
        word = []
        while cur != w:
            separating = []
            for i in self.index_set:
                alpha, level = self.fundamental_walls[i]
                # image of the wall under cur = t_mu u: direction u(alpha),
                # level k + <mu, u(alpha)>
                direction = cur.weyl.apply(alpha)
                lvl = level + dot(self.rs.point_of(cur.trans), direction)
                sa = dot(cur_bary, direction) - lvl
                sb = dot(target, direction) - lvl
                if (sa < 0) != (sb < 0):
                    separating.append(i)
            if not separating:
                raise StructureError("alcove walk stalled (broken element)")
            i = separating[0] if rng is None else rng.choice(separating)
            word.append(i)
            cur = cur.compose(self.generators[i])
            cur_bary = cur.apply(self.barycenter)
        return tuple(word)

    def word(self, w: AffineElement) -> tuple:
        """Deterministic reduced word for w in W (error on W~ \\ W)."""
        cached = self._word_cache.get(w)
        if cached is not None:
            return cached
        if not self.in_unextended(w):
            raise StructureError(
                "reduced words are defined for W; strip the length-zero part first"
            )
        word = self._walk(w, None)
        assert len(word) == self.length(w)
        self._word_cache[w] = word
        return word

    def word_randomized(self, w: AffineElement, rng: random.Random) -> tuple:
        """A reduced word with random tie-breaks (still length-minimal)."""
        word = self._walk(w, rng)
        assert len(word) == self.length(w)
        return word

    def extended_word(self, w: AffineElement):
        """(reduced word of the W part, index j of the G part)."""
        v, j = self.split_length_zero(w)
        return self.word(v), j

    # -- parameter monomials ----------------------------------------------

    def class_counts(self, w: AffineElement) -> tuple:
        """Per-class letter counts of a reduced word of w (G part free)."""
        cached = self._qexp_cache.get(w)
        if cached is not None:
            return cached
        word, _ = self.extended_word(w)
        counts = [0] * len(self.classes)
        for i in word:
            counts[self.class_index[i]] += 1
        counts = tuple(counts)
        self._qexp_cache[w] = counts
        return counts

    def q_monomial(self, w: AffineElement) -> LaurentPoly:
        """q_w = prod of q over a reduced word (well defined)."""
        return self.ring.q_monomial(self.class_counts(w))

    def q_sqrt_monomial(self, w: AffineElement) -> LaurentPoly:
        """q_w^{1/2} as a u-monomial."""
        return self.ring.u_monomial(self.class_counts(w))

    def q_letter(self, i: int) -> LaurentPoly:
        """q_{s_i} for a generator index."""
        counts = [0] * len(self.classes)
        counts[self.class_index[i]] = 1
        return self.ring.q_monomial(counts)

    def poincare_polynomial(self, elements: Iterable[AffineElement]) -> LaurentPoly:
        """U(q) = sum of q_w over a finite subset of W~."""
        total = self.ring.zero
        for w in elements:
            total = total + self.q_monomial(w)
        return total

    # -- length-zero subgroup and diagram automorphisms --------------------

    def _build_length_zero_group(self):
        rs = self.rs
        g = {0: self.identity}
        for i in rs.good_types:
            if i == 0:
                continue
            lam = rs.fundamental_coweight(i)
            stab, _ = rs.stabilizer_subgroup(lam)
            w0lam = max(stab, key=rs.weyl_length)
            gi = self.compose(
                self.translation(lam),
                self.from_weyl(w0lam),
                self.from_weyl(rs.longest_element()),
            )
            if self.length(gi) != 0:
                raise StructureError("g_i does not have length zero (broken data)")
            g[i] = gi
        self.g_elements = g
        self.g_inverses = {i: gi.inverse() for i, gi in g.items()}
        # sigma_i: conjugation by g_i permutes the generators
        sigma = {}
        for i, gi in g.items():
            gi_inv = self.g_inverses[i]
            perm = []
            for k in self.index_set:
                conj = self.compose(gi, self.generators[k], gi_inv)
                for m, s in enumerate(self.generators):
                    if conj == s:
                        perm.append(m)
                        break
                else:
                    raise StructureError("conjugation left the generator set")
            sigma[i] = tuple(perm)
        self.sigma = sigma

    def _build_sigma_star(self):
        rs = self.rs
        w0 = rs.longest_element()
        star = [0] * (rs.rank + 1)
        for i in range(1, rs.rank + 1):
            image = w0.apply(vscale(-1, self.alcove_vertices[i]))
            for j in range(1, rs.rank + 1):
                if image == self.alcove_vertices[j]:
                    star[i] = j
                    break
            else:
                raise StructureError("duality map does not permute the vertices")
        self.sigma_star = tuple(star)

    def apply_sigma(self, sigma: tuple, w: AffineElement) -> AffineElement:
        """Image of w in W under a diagram automorphism (word relabelling)."""
        word = self.word(w)
        return self.element_from_word(sigma[i] for i in word)

    def sigma_inverse(self, sigma: tuple) -> tuple:
        inv = [0] * len(sigma)
        for i, s in enumerate(sigma):
            inv[s] = i
        return tuple(inv)

    # -- Coxeter matrix ------------------------------------------------------

    def _coxeter_matrix(self):
        n1 = len(self.index_set)
        mat = [[1] * n1 for _ in range(n1)]
        for i in range(n1):
            for j in range(n1):
                if i == j:
                    continue
                prod = self.generators[i].compose(self.generators[j])
                power = prod
                order = None
                for m in range(1, 7):
                    if power.is_identity():
                        order = m
                        break
                    power = power.compose(prod)
                mat[i][j] = order
        return mat

    # -- coweight types and w_lambda -------------------------------------------

    def coweight_type(self, lam: Coords) -> int:
        """tau(lambda): the good type of the vertex lambda."""
        _, j = self.split_length_zero(self.translation(lam))
        return j

    def w_lambda(self, lam: Coords):
        """(w_lam, t'_lam, g_l, l) for dominant lam.

        w_lam = t_lam w_{0lam} w_0 g_l^{-1} is the minimal length
        element of the double coset W_0 t'_lam W_l, where t_lam =
        t'_lam g_l and l = tau(lambda).
        """
        key = tuple(lam)
        cached = self._wlambda_cache.get(key)
        if cached is not None:
            return cached
        rs = self.rs
        if not rs.is_dominant(lam):
            raise StructureError(f"w_lambda requires a dominant coweight, got {lam}")
        t = self.translation(lam)
        v, l = self.split_length_zero(t)
        stab, _ = rs.stabilizer_subgroup(lam)
        w0lam = max(stab, key=rs.weyl_length)
        wl = self.compose(
            t,
            self.from_weyl(w0lam),
            self.from_weyl(rs.longest_element()),
            self.g_inverses[l],
        )
        out = (wl, v, self.g_elements[l], l)
        self._wlambda_cache[key] = out
        return out

    # -- parabolic subgroups and double cosets -----------------------------------

    def parabolic(self, J) -> tuple:
        """The finite standard parabolic W_J, J a proper subset of I."""
        J = tuple(sorted(set(J)))
        if len(J) >= len(self.index_set):
            raise StructureError("W_I is infinite; parabolic needs a proper subset")
        cached = self._parabolic_cache.get(J)
        if cached is not None:
            return cached
        if self.rs.weyl_order > _ENUM_CAP:
            raise StructureError(
                f"parabolic enumeration refused for {self.rs.descriptor()} "
                f"(|W0| = {self.rs.weyl_order} exceeds {_ENUM_CAP})"
            )
        gens = [self.generators[j] for j in J]
        elements = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for w in frontier:
                for s in gens:
                    ws = w.compose(s)
                    if ws not in elements:
                        elements.add(ws)
                        nxt.append(ws)
            frontier = nxt
        out = tuple(
            sorted(elements, key=lambda w: (self.length(w), w.trans, w.weyl.perm))
        )
        self._parabolic_cache[J] = out
        return out

    def complement_parabolic(self, i: int) -> tuple:
        """W_i = W_{I minus {i}}."""
        return self.parabolic(tuple(j for j in self.index_set if j != i))

    def double_coset(self, J, w: AffineElement, K):
        """(elements, minimal element) of the finite double coset W_J w W_K."""
        J = tuple(sorted(set(J)))
        K = tuple(sorted(set(K)))
        if len(J) >= len(self.index_set) or len(K) >= len(self.index_set):
            raise StructureError("double coset with J or K = I is infinite")
        seen = {w}
        frontier = [w]
        while frontier:
            nxt = []
            for v in frontier:
                for j in J:
                    u = self.generators[j].compose(v)
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
                for k in K:
                    u = v.compose(self.generators[k])
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
        elements = tuple(
            sorted(seen, key=lambda v: (self.length(v), v.trans, v.weyl.perm))
        )
        minimum = elements[0]
        return elements, minimum

    def coset_min_reps(self, lam: Coords) -> tuple:
        """Minimal length representatives of W_0 / W_{0,lambda} (as W elements)."""
        best: dict = {}
        for w in self.rs.weyl_elements():
            key = w.apply_coords(lam)
            aff = self.from_weyl(w)
            cur = best.get(key)
            if cur is None or self.length(aff) < self.length(cur):
                best[key] = aff
        return tuple(
            sorted(best.values(), key=lambda v: (self.length(v), v.weyl.perm))
        )

    def finite_weyl(self) -> tuple:
        """W_0 as affine elements (translation part zero)."""
        return tuple(self.from_weyl(w) for w in self.rs.weyl_elements())


_AW_CACHE: dict = {}


def affine_weyl(rs: RootSystem) -> AffineWeyl:
    key = (rs.type_label, rs.rank)
    if key not in _AW_CACHE:
        _AW_CACHE[key] = AffineWeyl(rs)
    return _AW_CACHE[key]


def parse_element(aw: AffineWeyl, text: str) -> AffineElement:
    """Parse the CLI descriptor 't[1,0]*s1*s2' / 's0' / 'e'."""
    s = text.strip().replace(" ", "")
    if s in ("e", "1", ""):
        return aw.identity
    out = aw.identity
    for part in s.split("*"):
        if part.startswith("t[") and part.endswith("]"):
            coords = tuple(int(c) for c in part[2:-1].split(","))
            if len(coords) != aw.rs.rank:
                raise StructureError(f"translation arity mismatch in {text!r}")
            out = out.compose(aw.translation(coords))
        elif part.startswith("s") and part[1:].isdigit():
            i = int(part[1:])
            if i not in aw.index_set:
                raise StructureError(f"no generator s{i}")
            out = out.compose(aw.generators[i])
        else:
            raise StructureError(f"bad element descriptor {text!r}")
    return out


def parse_word(text: str) -> tuple:
    """Word I/O format: comma-separated generator indices '0,1,2,1'."""
    s = text.strip()
    if not s:
        return ()
    return tuple(int(p) for p in s.split(","))


def format_word(word) -> str:
    return ",".join(str(i) for i in word)
