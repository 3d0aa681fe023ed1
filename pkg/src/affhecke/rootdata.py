"""Irreducible root systems with exact rational arithmetic.

Standard realizations (reduced types A--G plus the non-reduced BC_n),
their coweight/coroot lattices, finite Weyl groups as exact orthogonal
maps, and the derived data used downstream: marks m_i, good types I_P,
the star involution, dominance order and stabilizers.

Coweights are plain integer tuples: the coordinates of a lattice point
in the basis of fundamental coweights (so membership in P is exact and
dominance means componentwise >= 0).  ``RootSystem`` converts between
coordinates and ambient rational vectors and caches the conversions.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Optional

from .coeff import StructureError

Vec = tuple  # tuple of Fractions
Coords = tuple  # tuple of ints, coordinates in the fundamental coweights

_WEYL_CAP = 1152  # largest group we enumerate eagerly (F4)


def dot(x: Vec, y: Vec) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def vadd(x: Vec, y: Vec) -> Vec:
    return tuple(a + b for a, b in zip(x, y))


def vsub(x: Vec, y: Vec) -> Vec:
    return tuple(a - b for a, b in zip(x, y))


def vscale(c, x: Vec) -> Vec:
    c = Fraction(c)
    return tuple(c * a for a in x)


def _frac_vec(entries) -> Vec:
    return tuple(Fraction(e) for e in entries)


def _solve(matrix, rhs):
    """Solve matrix @ x = rhs exactly (square, invertible)."""
    n = len(matrix)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return tuple(aug[r][n] for r in range(n))


class WeylElement:
    """An element of the finite Weyl group W_0, as an exact linear map.

    Identity/equality go through the induced permutation of the root
    list (faithful since the action on roots determines the map); the
    matrix is kept for acting on arbitrary vectors.
    """

    __slots__ = ("rs", "matrix", "perm", "_hash", "word")

    def __init__(self, rs: "RootSystem", matrix, perm, word: Optional[tuple] = None):
        self.rs = rs
        self.matrix = matrix
        self.perm = perm
        self.word = word
        self._hash = hash(perm)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.perm == other.perm

    def __hash__(self):
        return self._hash

    def apply(self, vec: Vec) -> Vec:
        return tuple(dot(row, vec) for row in self.matrix)

    def apply_coords(self, coords: Coords) -> Coords:
        return self.rs.coords_of(self.apply(self.rs.point_of(coords)))

    def compose(self, other: "WeylElement") -> "WeylElement":
        """self o other as maps."""
        return self.rs.weyl_from_matrix(_mat_mul(self.matrix, other.matrix))

    def inverse(self) -> "WeylElement":
        n = len(self.matrix)
        # orthogonal: inverse = transpose
        mat = tuple(
            tuple(self.matrix[r][c] for r in range(n)) for c in range(n)
        )
        return self.rs.weyl_from_matrix(mat)

    def is_identity(self) -> bool:
        return all(p == i for i, p in enumerate(self.perm))

    def __repr__(self):
        w = self.rs.coxeter_word(self)
        return "W0<" + ",".join(map(str, w)) + ">"


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum((a[r][k] * b[k][c] for k in range(n)), Fraction(0)) for c in range(n))
        for r in range(n)
    )


def _identity_matrix(n):
    return tuple(
        tuple(Fraction(1) if r == c else Fraction(0) for c in range(n))
        for r in range(n)
    )


_SUPPORTED = (
    "A_n (n>=1), B_n (n>=3), C_n (n>=2), D_n (n>=4), "
    "E6, E7, E8, F4, G2, BC_n (n>=1)"
)


def _weyl_order(type_label: str, n: int) -> int:
    if type_label == "A":
        return factorial(n + 1)
    if type_label in ("B", "C", "BC"):
        return 2**n * factorial(n)
    if type_label == "D":
        return 2 ** (n - 1) * factorial(n)
    if type_label == "G":
        return 12
    if type_label == "F":
        return 1152
    return {6: 51840, 7: 2903040, 8: 696729600}[n]


def _e8_roots():
    roots = set()
    for i in range(8):
        for j in range(i + 1, 8):
            for si in (1, -1):
                for sj in (1, -1):
                    v = [Fraction(0)] * 8
                    v[i], v[j] = Fraction(si), Fraction(sj)
                    roots.add(tuple(v))
    for signs in range(256):
        v = [Fraction(1, 2) * (1 if signs >> k & 1 == 0 else -1) for k in range(8)]
        if sum(signs >> k & 1 for k in range(8)) % 2 == 0:
            roots.add(tuple(v))
    return roots


def _build_vectors(type_label: str, n: int):
    """Simple roots and the full root set for the supported table."""
    e = lambda i, dim: tuple(Fraction(1 if k == i else 0) for k in range(dim))

    if type_label == "A":
        dim = n + 1
        simple = [vsub(e(i, dim), e(i + 1, dim)) for i in range(n)]
        roots = {
            vsub(e(i, dim), e(j, dim))
            for i in range(dim)
            for j in range(dim)
            if i != j
        }
    elif type_label in ("B", "C", "D", "BC"):
        dim = n
        simple = [vsub(e(i, dim), e(i + 1, dim)) for i in range(n - 1)]
        roots = set()
        for i in range(n):
            for j in range(i + 1, n):
                for sj in (1, -1):
                    v = vadd(e(i, dim), vscale(sj, e(j, dim)))
                    roots.add(v)
                    roots.add(vscale(-1, v))
        if type_label in ("B", "BC"):
            simple.append(e(n - 1, dim))
            for i in range(n):
                roots.add(e(i, dim))
                roots.add(vscale(-1, e(i, dim)))
        if type_label in ("C", "BC"):
            if type_label == "C":
                simple.append(vscale(2, e(n - 1, dim)))
            for i in range(n):
                roots.add(vscale(2, e(i, dim)))
                roots.add(vscale(-2, e(i, dim)))
        if type_label == "D":
            simple.append(vadd(e(n - 2, dim), e(n - 1, dim)))
    elif type_label == "G":
        dim = 3
        simple = [
            vsub(e(0, dim), e(1, dim)),
            _frac_vec((-2, 1, 1)),
        ]
        roots = set()
        for i in range(3):
            for j in range(3):
                if i != j:
                    roots.add(vsub(e(i, dim), e(j, dim)))
        for i in range(3):
            v = [Fraction(-1)] * 3
            v[i] = Fraction(2)
            roots.add(tuple(v))
            roots.add(vscale(-1, tuple(v)))
    elif type_label == "F":
        dim = 4
        simple = [
            vsub(e(1, dim), e(2, dim)),
            vsub(e(2, dim), e(3, dim)),
            e(3, dim),
            _frac_vec((Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 2), Fraction(-1, 2))),
        ]
        roots = set()
        for i in range(4):
            roots.add(e(i, dim))
            roots.add(vscale(-1, e(i, dim)))
            for j in range(i + 1, 4):
                for si in (1, -1):
                    for sj in (1, -1):
                        v = vadd(vscale(si, e(i, dim)), vscale(sj, e(j, dim)))
                        roots.add(v)
        for signs in range(16):
            v = tuple(
                Fraction(1, 2) * (1 if signs >> k & 1 == 0 else -1)
                for k in range(4)
            )
            roots.add(v)
    elif type_label == "E":
        dim = 8
        half = Fraction(1, 2)
        a1 = tuple(half if k in (0, 7) else -half for k in range(8))
        simple_full = [
            a1,
            vadd(e(0, dim), e(1, dim)),
            vsub(e(1, dim), e(0, dim)),
            vsub(e(2, dim), e(1, dim)),
            vsub(e(3, dim), e(2, dim)),
            vsub(e(4, dim), e(3, dim)),
            vsub(e(5, dim), e(4, dim)),
            vsub(e(6, dim), e(5, dim)),
        ]
        simple = simple_full[:n]
        all_e8 = _e8_roots()
        gram = [[dot(a, b) for b in simple] for a in simple]
        roots = set()
        for r in all_e8:
            rhs = [dot(r, a) for a in simple]
            coeffs = _solve(gram, rhs)
            if vadd(
                tuple(-x for x in r),
                tuple(
                    sum((c * a[k] for c, a in zip(coeffs, simple)), Fraction(0))
                    for k in range(dim)
                ),
            ) == (Fraction(0),) * dim:
                roots.add(r)
    else:
        raise StructureError(
            f"unsupported root system {type_label}{n}; supported: {_SUPPORTED}"
        )
    return simple, sorted(roots)


class RootSystem:
    """One irreducible root system instance with all derived exact data."""

    def __init__(self, type_label: str, rank: int):
        self.type_label = type_label
        self.rank = rank
        simple, roots = _build_vectors(type_label, rank)
        self.simple_roots = tuple(simple)
        self.all_roots = tuple(roots)
        self.dim = len(roots[0])
        self.root_index = {r: i for i, r in enumerate(self.all_roots)}

        gram = [[dot(a, b) for b in simple] for a in simple]
        self._gram = gram
        # fundamental coweights: <lambda_i, alpha_j> = delta_ij, in the root span
        self.coweights = []
        for i in range(rank):
            rhs = [Fraction(1 if j == i else 0) for j in range(rank)]
            coeffs = _solve(gram, rhs)
            self.coweights.append(
                tuple(
                    sum((c * a[k] for c, a in zip(coeffs, simple)), Fraction(0))
                    for k in range(self.dim)
                )
            )
        self.coweights = tuple(self.coweights)

        # simple-root coefficients of every root (exact Gram solve)
        self._simple_coeffs = {}
        for r in self.all_roots:
            rhs = [dot(r, a) for a in simple]
            self._simple_coeffs[r] = _solve(gram, rhs)
        self.positive_roots = tuple(
            r for r in self.all_roots if all(c >= 0 for c in self._simple_coeffs[r])
        )

        # highest root and the marks m_i (m_0 = 1 by convention)
        self.highest_root = max(
            self.positive_roots, key=lambda r: sum(self._simple_coeffs[r])
        )
        marks = self._simple_coeffs[self.highest_root]
        if any(m.denominator != 1 for m in marks):
            raise StructureError("highest root marks are not integers")
        self.marks = tuple(int(m) for m in marks)  # indexed by 1..n internally 0..n-1
        self.good_types = (0,) + tuple(
            i + 1 for i, m in enumerate(self.marks) if m == 1
        )

        # non-reduced bookkeeping: R1 = indivisible-above, R2 = indivisible
        rootset = set(self.all_roots)
        self.R1 = frozenset(r for r in rootset if vscale(2, r) not in rootset)
        self.R2 = frozenset(
            r for r in rootset if vscale(Fraction(1, 2), r) not in rootset
        )
        self.R3 = self.R1 & self.R2
        self.positive_indivisible = tuple(
            r for r in self.positive_roots if r in self.R2
        )

        # coroots of simple roots, and the coroot-lattice solver.  The
        # coroot lattice/cone is generated by all coroots; for BC_n the
        # coroot of 2*alpha_n (= e_n) replaces alpha_n^vee = 2 e_n as a
        # generator (Q = P and the dominance cone is the B_n-style one).
        self.simple_coroots = tuple(self.coroot(a) for a in self.simple_roots)
        basis = list(self.simple_coroots)
        if type_label == "BC":
            basis[-1] = self.coroot(vscale(2, self.simple_roots[-1]))
        self.coroot_basis = tuple(basis)
        m = [
            [dot(self.coroot_basis[i], self.simple_roots[j]) for i in range(rank)]
            for j in range(rank)
        ]
        self._coroot_matrix = m

        self._weyl_cache: dict = {}
        self._point_cache: dict = {}
        self._weyl_list: Optional[tuple] = None
        self._longest: Optional[WeylElement] = None
        self.weyl_order = _weyl_order(type_label, rank)
        self.identity = self.weyl_from_matrix(_identity_matrix(self.dim))
        self.simple_reflections = tuple(
            self.reflection(a) for a in self.simple_roots
        )

    # -- basics ---------------------------------------------------------

    def __repr__(self):
        return f"RootSystem({self.descriptor()})"

    def descriptor(self) -> str:
        return f"{self.type_label}{self.rank}"

    def coroot(self, alpha: Vec) -> Vec:
        return vscale(Fraction(2) / dot(alpha, alpha), alpha)

    def reflection(self, alpha: Vec) -> WeylElement:
        av = self.coroot(alpha)
        n = self.dim
        mat = tuple(
            tuple(
                (Fraction(1) if r == c else Fraction(0)) - alpha[c] * av[r]
                for c in range(n)
            )
            for r in range(n)
        )
        return self.weyl_from_matrix(mat)

    def weyl_from_matrix(self, matrix) -> WeylElement:
        perm = tuple(
            self.root_index[tuple(dot(row, r) for row in matrix)]
            for r in self.all_roots
        )
        w = self._weyl_cache.get(perm)
        if w is None:
            w = WeylElement(self, matrix, perm)
            self._weyl_cache[perm] = w
        return w

    # -- lattice conversions ---------------------------------------------

    def point_of(self, coords: Coords) -> Vec:
        """Ambient vector of a coweight given in fundamental coordinates."""
        pt = self._point_cache.get(coords)
        if pt is None:
            pt = tuple(
                sum((Fraction(c) * lam[k] for c, lam in zip(coords, self.coweights)),
                    Fraction(0))
                for k in range(self.dim)
            )
            self._point_cache[coords] = pt
        return pt

    def coords_of(self, vec: Vec) -> Coords:
        out = []
        for a in self.simple_roots:
            v = dot(vec, a)
            if v.denominator != 1:
                raise StructureError(f"vector {vec} is not in the coweight lattice")
        return tuple(int(dot(vec, a)) for a in self.simple_roots)

    def zero_coweight(self) -> Coords:
        return (0,) * self.rank

    def fundamental_coweight(self, i: int) -> Coords:
        """Coordinates of lambda_i (1-based index)."""
        return tuple(1 if k == i - 1 else 0 for k in range(self.rank))

    def is_dominant(self, coords: Coords) -> bool:
        return all(c >= 0 for c in coords)

    def coroot_coordinates(self, coords: Coords):
        """Exact coordinates of a lattice point in the coroot basis."""
        return _solve(self._coroot_matrix, [Fraction(c) for c in coords])

    def in_coroot_lattice(self, coords: Coords) -> bool:
        return all(c.denominator == 1 for c in self.coroot_coordinates(coords))

    def dominance_leq(self, mu: Coords, lam: Coords) -> bool:
        """mu <= lam iff lam - mu is a nonnegative integer coroot sum."""
        diff = tuple(a - b for a, b in zip(lam, mu))
        return all(
            c.denominator == 1 and c >= 0 for c in self.coroot_coordinates(diff)
        )

    # -- Weyl group -------------------------------------------------------

    def weyl_elements(self) -> tuple:
        """The full W_0, eagerly enumerated (refused above order 1152)."""
        if self._weyl_list is None:
            if self.weyl_order > _WEYL_CAP:
                raise StructureError(
                    f"|W0({self.descriptor()})| = {self.weyl_order} exceeds the "
                    f"eager enumeration bound {_WEYL_CAP}"
                )
            self._weyl_list = tuple(self.weyl_bfs())
            assert len(self._weyl_list) == self.weyl_order
        return self._weyl_list

    def weyl_bfs(self):
        """Yield W_0 in breadth-first order (s_1 < s_2 < ... tie-break)."""
        seen = {self.identity}
        frontier = [self.identity]
        yield self.identity
        while frontier:
            nxt = []
            for w in frontier:
                for s in self.simple_reflections:
                    ws = w.compose(s)
                    if ws not in seen:
                        seen.add(ws)
                        nxt.append(ws)
                        yield ws
            frontier = nxt

    def coxeter_word(self, w: WeylElement) -> tuple:
        """A reduced word for w in the simple reflections (1-based letters)."""
        if w.word is not None:
            return w.word
        word = []
        cur = w
        while not cur.is_identity():
            for i, a in enumerate(self.simple_roots):
                if any(
                    c < 0 for c in self._simple_coeffs[self.all_roots[cur.perm[self.root_index[a]]]]
                ):
                    # cur maps alpha_i to a negative root: s_i is a right descent
                    cur = cur.compose(self.simple_reflections[i])
                    word.append(i + 1)
                    break
            else:
                raise StructureError("no descent found (broken element)")
        word = tuple(reversed(word))
        w.word = word
        return word

    def weyl_length(self, w: WeylElement) -> int:
        """Coxeter length = number of positive indivisible roots sent negative."""
        count = 0
        for r in self.positive_indivisible:
            img = self.all_roots[w.perm[self.root_index[r]]]
            if all(c <= 0 for c in self._simple_coeffs[img]):
                count += 1
        return count

    def longest_element(self) -> WeylElement:
        if self._longest is None:
            strict = tuple(1 for _ in range(self.rank))
            _, w = self.dominant_rep(tuple(-c for c in strict))
            self._longest = w
        return self._longest

    # -- orbit machinery ----------------------------------------------------

    def orbit(self, coords: Coords) -> set:
        """The W_0-orbit of a coweight, as a set of coordinate tuples."""
        seen = {coords}
        frontier = [coords]
        while frontier:
            nxt = []
            for c in frontier:
                for s in self.simple_reflections:
                    sc = s.apply_coords(c)
                    if sc not in seen:
                        seen.add(sc)
                        nxt.append(sc)
            frontier = nxt
        return seen

    def dominant_rep(self, mu: Coords):
        """(lam, w) with lam dominant, w·mu = lam, w of minimal length.

        Deterministic: breadth-first over W_0 with generator order
        s_1 < s_2 < ..., first hit wins.
        """
        for w in self.weyl_bfs():
            lam = w.apply_coords(mu)
            if self.is_dominant(lam):
                return lam, w
        raise StructureError("orbit contains no dominant element (impossible)")

    def star(self, lam: Coords) -> Coords:
        """The duality involution lam* = w_0(-lam) on dominant coweights."""
        if not self.is_dominant(lam):
            raise StructureError(f"star requires a dominant coweight, got {lam}")
        w0 = self.longest_element()
        return w0.apply_coords(tuple(-c for c in lam))

    def stabilizer_subgroup(self, lam: Coords):
        """(elements, generator indices) of W_{0,lam} for dominant lam.

        Generated by the simple reflections fixing lam; for dominant lam
        this is the whole point stabilizer.
        """
        if not self.is_dominant(lam):
            raise StructureError("stabilizer_subgroup requires a dominant coweight")
        gens = tuple(
            i + 1
            for i, s in enumerate(self.simple_reflections)
            if s.apply_coords(lam) == lam
        )
        elements = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for w in frontier:
                for i in gens:
                    ws = w.compose(self.simple_reflections[i - 1])
                    if ws not in elements:
                        elements.add(ws)
                        nxt.append(ws)
            frontier = nxt
        return tuple(sorted(elements, key=lambda w: (self.weyl_length(w), w.perm))), gens

    # -- tau classification ---------------------------------------------------

    def root_subset(self, alpha: Vec) -> str:
        """'R3', 'R1minusR3' or 'R2minusR3' (disjoint union of R)."""
        if alpha in self.R3:
            return "R3"
        if alpha in self.R1:
            return "R1minusR3"
        if alpha in self.R2:
            return "R2minusR3"
        raise StructureError(f"{alpha} is not a root")

    def simple_class_of_root(self, alpha: Vec) -> int:
        """Index i (1-based) with alpha in the W_0-orbit of alpha_i.

        Only defined for indivisible roots; within R2 the orbits of an
        irreducible system are distinguished by length.
        """
        if alpha not in self.R2:
            raise StructureError("q_alpha is only defined for alpha in R2")
        norm = dot(alpha, alpha)
        for i, a in enumerate(self.simple_roots):
            if dot(a, a) == norm:
                return i + 1
        raise StructureError("no simple root of matching length")

    # -- export ---------------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "system": self.descriptor(),
            "rank": self.rank,
            "ambient_dim": self.dim,
            "simple_roots": [[str(c) for c in a] for a in self.simple_roots],
            "positive_roots": [[str(c) for c in a] for a in self.positive_roots],
            "fundamental_coweights": [[str(c) for c in v] for v in self.coweights],
            "highest_root": [str(c) for c in self.highest_root],
            "marks": list(self.marks),
            "good_types": list(self.good_types),
            "weyl_order": self.weyl_order,
        }


_CACHE: dict = {}


def build_root_system(type_label: str, rank: int) -> RootSystem:
    """Construct (and cache) a supported root system.

    Supported: A_n (n>=1), B_n (n>=3), C_n (n>=2), D_n (n>=4), E6-E8
    (data only), F4, G2, BC_n (n>=1).
    """
    key = (type_label, rank)
    if key in _CACHE:
        return _CACHE[key]
    ok = (
        (type_label == "A" and rank >= 1)
        or (type_label == "B" and rank >= 3)
        or (type_label == "C" and rank >= 2)
        or (type_label == "D" and rank >= 4)
        or (type_label == "E" and rank in (6, 7, 8))
        or (type_label == "F" and rank == 4)
        or (type_label == "G" and rank == 2)
        or (type_label == "BC" and rank >= 1)
    )
    if not ok:
        raise StructureError(
            f"unsupported root system {type_label}{rank}; supported: {_SUPPORTED}"
        )
    rs = RootSystem(type_label, rank)
    _CACHE[key] = rs
    return rs


def parse_descriptor(text: str) -> RootSystem:
    """Parse a descriptor like 'C2', 'BC3', 'A1' (tilde marks ignored)."""
    s = text.strip().replace("~", "")
    i = 0
    while i < len(s) and s[i].isalpha():
        i += 1
    label, digits = s[:i].upper(), s[i:]
    if not label or not digits.isdigit():
        raise StructureError(f"bad root system descriptor {text!r}")
    return build_root_system(label, int(digits))


def marks_and_good_types(rs: RootSystem):
    """(marks, I_P) with I_P = {0} + the i >= 1 with m_i = 1."""
    return rs.marks, set(rs.good_types)
