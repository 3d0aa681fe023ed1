"""Explicit regular buildings where everything is enumerable.

Two families, which together exercise every parameter regime the
symbolic pipeline supports:

* ``ThinBuilding`` -- the Coxeter complex of any supported affine type
  (all q_s = 1): chambers are the alcoves w C_0 with l(w) <= radius,
  W-distance is delta(u, v) = u^{-1} v, and the vertex sets V_lam(x)
  are realized through the exact W~-action (x + W_0 lam), so vertex
  queries do not depend on the chamber ball; the radius bounds chamber
  enumeration only.

* ``TreeBuilding`` -- a semi-homogeneous tree with parameters
  (q_0, q_1): type-0 vertices have valency 1 + q_1, type-1 vertices
  1 + q_0, chambers are the edges, and two edges are s_0-adjacent when
  they share their type-1 vertex (s_1-adjacent at a type-0 vertex).
  Good vertices are the type-0 vertices; V_{k lam_1}(x) is the set of
  good vertices at tree distance 2k.

Chamber sets C_w(a) are enumerated by walking galleries of the reduced
type of w (the one-letter recursion C_{ws}(a) = union of C_s over
C_w(a), which is disjoint for reduced words).  Counting queries refuse
to run when their reach exceeds the safe interior margin instead of
silently truncating at the boundary.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .affweyl import AffineElement, AffineWeyl, affine_weyl
from .coeff import StructureError
from .rootdata import Coords, build_root_system, parse_descriptor


class MarginError(ValueError):
    """A counting query would touch chambers outside the safe interior."""


class ThinBuilding:
    """The Coxeter complex of an affine type, with all q_s = 1."""

    def __init__(self, aw: AffineWeyl, radius: int):
        if radius < 2:
            raise StructureError("thin building needs radius >= 2")
        self.aw = aw
        self.rs = aw.rs
        self.radius = radius
        self.base = aw.identity
        self.chambers = self._ball()
        self.index = {w: i for i, w in enumerate(self.chambers)}
        # right-multiplication tables on the ball (None off the ball)
        self.tables = []
        for s in aw.generators:
            self.tables.append(
                tuple(self.index.get(w.compose(s)) for w in self.chambers)
            )

    def _ball(self):
        aw = self.aw
        seen = {aw.identity}
        frontier = [aw.identity]
        while frontier:
            nxt = []
            for w in frontier:
                for s in aw.generators:
                    ws = w.compose(s)
                    if ws not in seen and aw.length(ws) <= self.radius:
                        seen.add(ws)
                        nxt.append(ws)
            frontier = nxt
        return tuple(
            sorted(seen, key=lambda v: (aw.length(v), v.trans, v.weyl.perm))
        )

    # -- chamber queries ---------------------------------------------------

    def w_distance(self, a: AffineElement, b: AffineElement) -> AffineElement:
        """delta(a, b) = a^{-1} b."""
        return a.inverse().compose(b)

    def _margin(self, a: AffineElement) -> int:
        return self.radius - self.aw.length(a)

    def _walk(self, w: AffineElement, a: AffineElement) -> Optional[int]:
        """Index of a.w reached through the ball, None if it leaves."""
        idx = self.index.get(a)
        if idx is None:
            raise StructureError("chamber is not in the ball")
        for i in self.aw.word(w):
            idx = self.tables[i][idx]
            if idx is None:
                return None
        return idx

    def chamber_set(self, w: AffineElement, a: AffineElement) -> list:
        """C_w(a) = {a.w}, walked along a reduced word of w."""
        if self.aw.length(w) > self._margin(a):
            raise MarginError("chamber query exceeds the safe interior; increase radius")
        idx = self._walk(w, a)
        if idx is None:
            raise MarginError("gallery left the ball; increase radius")
        return [self.chambers[idx]]

    def chamber_count(
        self,
        w1: AffineElement,
        w2: AffineElement,
        a: AffineElement,
        c: AffineElement,
    ) -> int:
        """|C_{w1}(a) n C_{w2^{-1}}(c)| (0 or 1 in the thin case)."""
        aw = self.aw
        if aw.length(w1) > self._margin(a) or aw.length(w2) > self._margin(c):
            raise MarginError("chamber query exceeds the safe interior; increase radius")
        b1 = self._walk(w1, a)
        b2 = self._walk(w2.inverse(), c)
        if b1 is None or b2 is None:
            raise MarginError("gallery left the ball; increase radius")
        return int(b1 == b2)

    # -- vertices -------------------------------------------------------------

    def good_vertices(self) -> list:
        """Coordinates of the good vertices carried by ball chambers."""
        out = set()
        rs = self.rs
        for w in self.chambers:
            for i in rs.good_types:
                v = w.apply(self.aw.alcove_vertices[i])
                out.add(rs.coords_of(v))
        return sorted(out)

    def interior_good_vertices(self, margin: int) -> list:
        """Good vertices whose supporting chamber sits margin-deep."""
        out = set()
        for w in self.chambers:
            if self.aw.length(w) + margin > self.radius:
                continue
            for i in self.rs.good_types:
                out.add(self.rs.coords_of(w.apply(self.aw.alcove_vertices[i])))
        return sorted(out)

    def vertex_set(self, x: Coords, lam: Coords) -> set:
        """V_lam(x) = x + W_0 lam, as coweight coordinates."""
        if not self.rs.is_dominant(lam):
            raise StructureError("vertex sets are indexed by dominant coweights")
        return {
            tuple(a + b for a, b in zip(x, w))
            for w in self.rs.orbit(tuple(lam))
        }

    def vertex_set_via_chambers(self, x: Coords, lam: Coords) -> set:
        """V_lam(x) through the double-coset chamber description.

        Projects the chambers of the union over W_i sigma_i(w_lam) W_j
        of C_w(a) to their type-j vertices; cross-validates vertex_set.
        """
        aw, rs = self.aw, self.rs
        i = aw.coweight_type(x)
        l_type = aw.coweight_type(lam)
        j = aw.sigma[i][l_type]
        w_lam = aw.w_lambda(tuple(lam))[0]
        sig_w = aw.apply_sigma(aw.sigma[i], w_lam)
        Ji = tuple(k for k in aw.index_set if k != i)
        Jj = tuple(k for k in aw.index_set if k != j)
        coset, _ = aw.double_coset(Ji, sig_w, Jj)
        # a chamber with its type-i vertex at x
        a = aw.translation(x).compose(aw.g_inverses[i])
        out = set()
        for w in coset:
            b = a.compose(w)
            out.add(rs.coords_of(b.apply(aw.alcove_vertices[j])))
        return out

    def empirical_constants(
        self, lam: Coords, mu: Coords, nu: Coords, witness: Optional[Coords] = None
    ) -> Fraction:
        """a_{lam,mu;nu} = N_nu/(N_lam N_mu) |V_lam(u) n V_{mu*}(v)|."""
        rs = self.rs
        zero = rs.zero_coweight()
        if witness is None:
            witness = tuple(nu)
        if witness not in self.vertex_set(zero, nu):
            raise StructureError("witness is not at distance nu")
        mu_star = rs.star(tuple(mu))
        inter = self.vertex_set(zero, lam) & self.vertex_set(witness, mu_star)
        n_lam = len(rs.orbit(tuple(lam)))
        n_mu = len(rs.orbit(tuple(mu)))
        n_nu = len(rs.orbit(tuple(nu)))
        return Fraction(n_nu * len(inter), n_lam * n_mu)

    def regularity_check(self, depth: int, samples: int = 50, seed: int = 0) -> dict:
        """Thin-case regularity report (all counts are 0 or 1)."""
        aw = self.aw
        rng = random.Random(seed)
        interior = [w for w in self.chambers if aw.length(w) + depth <= self.radius]
        report = {"violations": [], "family": "thin"}
        # (i) |C_s(a)| = 1 for every generator and interior chamber
        for a in interior:
            for i in aw.index_set:
                n = len(self.chamber_set(aw.generators[i], a))
                if n != 1:
                    report["violations"].append(("local-count", i, n))
        # (ii) pair counts depend only on delta(a, c)
        small = [w for w in self.chambers if aw.length(w) <= depth]
        for _ in range(samples):
            w1, w2 = rng.choice(small), rng.choice(small)
            a = rng.choice(interior)
            d = rng.choice(small)
            counts = set()
            for aa in (self.base, a):
                cc = aa.compose(d)
                if aw.length(cc) + depth > self.radius:
                    continue
                counts.add(self.chamber_count(w1, w2, aa, cc))
            if len(counts) > 1:
                report["violations"].append(("chamber-regularity", counts))
        report["ok"] = not report["violations"]
        return report


class TreeBuilding:
    """Semi-homogeneous tree: the rank-1 non-reduced affine building."""

    def __init__(self, q0: int, q1: int, radius: int):
        if q0 < 1 or q1 < 1 or radius < 2:
            raise StructureError("tree needs q0, q1 >= 1 and radius >= 2")
        self.q0 = q0
        self.q1 = q1
        self.radius = radius
        self.aw = affine_weyl(build_root_system("BC", 1))
        self.types = [0]
        self.parent = [-1]
        self.depth = [0]
        self.adj = [[]]
        frontier = [0]
        for _ in range(radius):
            nxt = []
            for v in frontier:
                fan = (1 + self.q1 if self.types[v] == 0 else 1 + self.q0) - (
                    0 if v == 0 else 1
                )
                for _ in range(fan):
                    u = len(self.types)
                    self.types.append(1 - self.types[v])
                    self.parent.append(v)
                    self.depth.append(self.depth[v] + 1)
                    self.adj.append([v])
                    self.adj[v].append(u)
                    nxt.append(u)
            frontier = nxt
        # chambers are edges (parent, child); edge index = child vertex id
        self.edges = tuple(
            (self.parent[u], u) for u in range(1, len(self.types))
        )
        self.base_chamber = self.edges[0]
        self._elt_cache: dict = {}

    # -- vertex helpers -----------------------------------------------------

    def vertex_count(self) -> int:
        return len(self.types)

    def _path(self, u: int, v: int) -> list:
        """The unique vertex path from u to v."""
        pu, pv = [u], [v]
        a, b = u, v
        while self.depth[a] > self.depth[b]:
            a = self.parent[a]
            pu.append(a)
        while self.depth[b] > self.depth[a]:
            b = self.parent[b]
            pv.append(b)
        while a != b:
            a, b = self.parent[a], self.parent[b]
            pu.append(a)
            pv.append(b)
        return pu + pv[-2::-1]

    def distance(self, u: int, v: int) -> int:
        a, b, d = u, v, 0
        while self.depth[a] > self.depth[b]:
            a = self.parent[a]
            d += 1
        while self.depth[b] > self.depth[a]:
            b = self.parent[b]
            d += 1
        while a != b:
            a, b = self.parent[a], self.parent[b]
            d += 2
        return d

    def ball_vertices(self, x: int, r: int) -> dict:
        """{vertex: distance} for the tree ball of radius r around x."""
        out = {x: 0}
        frontier = [x]
        for d in range(1, r + 1):
            nxt = []
            for v in frontier:
                for u in self.adj[v]:
                    if u not in out:
                        out[u] = d
                        nxt.append(u)
            frontier = nxt
        return out

    # -- chambers (edges) -----------------------------------------------------

    def _edge_depth(self, e) -> int:
        return max(self.depth[e[0]], self.depth[e[1]])

    def _word_element(self, word: tuple) -> AffineElement:
        got = self._elt_cache.get(word)
        if got is None:
            got = self.aw.element_from_word(word)
            self._elt_cache[word] = got
        return got

    def w_distance(self, a, b) -> AffineElement:
        """delta(a, b): the alternating word read off the edge gallery.

        Pivot through a type-1 vertex is an s_0 step, through a type-0
        vertex an s_1 step.
        """
        if a == b:
            return self.aw.identity
        sa, sb = set(a), set(b)
        common = sa & sb
        if common:
            pivots = [next(iter(common))]
        else:
            best = None
            for x in a:
                for y in b:
                    d = self.distance(x, y)
                    if best is None or d < best[0]:
                        best = (d, x, y)
            _, x, y = best
            pivots = self._path(x, y)
        return self._word_element(
            tuple(1 - self.types[p] for p in pivots)
        )

    def _pivot(self, e, letter: int) -> int:
        """The vertex through which an s_letter step leaves edge e."""
        want = 1 - letter  # s_0 pivots at the type-1 vertex
        return e[0] if self.types[e[0]] == want else e[1]

    def chamber_set(self, w: AffineElement, a) -> list:
        """C_w(a) by walking galleries of the reduced type of w."""
        lw = self.aw.length(w)
        if self._edge_depth(a) + lw > self.radius:
            raise MarginError("chamber query exceeds the safe interior; increase radius")
        current = {a}
        for letter in self.aw.word(w):
            nxt = set()
            for e in current:
                p = self._pivot(e, letter)
                for u in self.adj[p]:
                    f = (p, u) if self.parent[u] == p else (u, p)
                    if f != e:
                        nxt.add(f)
            current = nxt
        return sorted(current)

    def chamber_count(self, w1: AffineElement, w2: AffineElement, a, c) -> int:
        """|C_{w1}(a) n C_{w2^{-1}}(c)| by gallery walks from both ends."""
        aw = self.aw
        if (
            self._edge_depth(a) + aw.length(w1) > self.radius
            or self._edge_depth(c) + aw.length(w2) > self.radius
        ):
            raise MarginError("chamber query exceeds the safe interior; increase radius")
        s1 = set(self.chamber_set(w1, a))
        s2 = set(self.chamber_set(w2.inverse(), c))
        return len(s1 & s2)

    # -- vertex sets ------------------------------------------------------------

    def good_vertices(self) -> list:
        return [v for v in range(len(self.types)) if self.types[v] == 0]

    def vertex_set(self, x: int, lam: Coords) -> set:
        """V_{k lam_1}(x): good vertices at tree distance 2k."""
        (k,) = lam
        if k < 0:
            raise StructureError("vertex sets are indexed by dominant coweights")
        if self.depth[x] + 2 * k > self.radius:
            raise MarginError("vertex query exceeds the safe interior; increase radius")
        if k == 0:
            return {x}
        return {
            v for v, d in self.ball_vertices(x, 2 * k).items() if d == 2 * k
        }

    def vertex_set_via_chambers(self, x: int, lam: Coords) -> set:
        """V_lam(x) through the chamber double-coset description."""
        aw = self.aw
        w_lam = aw.w_lambda(tuple(lam))[0]
        J = (1,)  # W_0 = W_{I minus {0}} = {1, s_1}
        coset, _ = aw.double_coset(J, w_lam, J)
        a = next(e for e in self.edges if x in e)
        out = set()
        for w in coset:
            for b in self.chamber_set(w, a):
                out.add(b[0] if self.types[b[0]] == 0 else b[1])
        return out

    def empirical_constants(
        self, lam: Coords, mu: Coords, nu: Coords, witness: Optional[int] = None
    ) -> Fraction:
        """a_{lam,mu;nu} from direct intersection counts at the root."""
        x = 0
        vs_nu = self.vertex_set(x, nu)
        if not vs_nu:
            raise MarginError("no witness in ball; increase radius")
        v = witness if witness is not None else min(vs_nu)
        if v not in vs_nu:
            raise StructureError("witness is not at distance nu")
        (k_mu,) = mu  # mu* = mu in the non-reduced case
        inter = [
            z for z in self.vertex_set(x, lam) if self.distance(v, z) == 2 * k_mu
        ]
        n_lam = len(self.vertex_set(x, lam))
        n_mu_ct = len(self.vertex_set(x, mu))
        n_nu_ct = len(vs_nu)
        return Fraction(n_nu_ct * len(inter), n_lam * n_mu_ct)

    def regularity_check(self, depth: int, samples: int = 100, seed: int = 0) -> dict:
        """Regularity, chamber regularity and (strong) vertex regularity."""
        aw = self.aw
        rng = random.Random(seed)
        report = {"violations": [], "family": "tree"}
        interior_edges = [
            e for e in self.edges if self._edge_depth(e) + depth <= self.radius
        ]
        # (i) regularity: |C_{s_0}(a)| = q0 and |C_{s_1}(a)| = q1
        for e in rng.sample(interior_edges, min(len(interior_edges), samples)):
            n0 = len(self.chamber_set(aw.generators[0], e))
            n1 = len(self.chamber_set(aw.generators[1], e))
            if n0 != self.q0 or n1 != self.q1:
                report["violations"].append(("local-count", e, n0, n1))
        # (ii) chamber regularity on sampled pairs grouped by delta
        words = [aw.identity, aw.generators[0], aw.generators[1]]
        words.append(aw.generators[0].compose(aw.generators[1]))
        words.append(aw.generators[1].compose(aw.generators[0]))
        by_delta: dict = {}
        for _ in range(samples):
            a = rng.choice(interior_edges)
            c = rng.choice(interior_edges)
            d = self.w_distance(a, c)
            if aw.length(d) > depth:
                continue
            for w1 in words:
                for w2 in words:
                    try:
                        n = self.chamber_count(w1, w2, a, c)
                    except MarginError:
                        continue
                    key = (d, w1, w2)
                    if key in by_delta and by_delta[key] != n:
                        report["violations"].append(("chamber-regularity", key))
                    by_delta[key] = n
        # (iii) vertex regularity, including the starred strong form
        # (the star involution is trivial here)
        good_interior = [
            v
            for v in self.good_vertices()
            if self.depth[v] + 2 * depth <= self.radius
        ]
        by_nu: dict = {}
        for _ in range(samples):
            x = rng.choice(good_interior)
            y = rng.choice(good_interior)
            k_nu = self.distance(x, y) // 2
            for k_lam in range(depth):
                for k_mu in range(depth):
                    try:
                        inter = len(
                            [
                                z
                                for z in self.vertex_set(x, (k_lam,))
                                if self.distance(y, z) == 2 * k_mu
                            ]
                        )
                    except MarginError:
                        continue
                    key = (k_nu, k_lam, k_mu)
                    if key in by_nu and by_nu[key] != inter:
                        report["violations"].append(("vertex-regularity", key))
                    by_nu[key] = inter
                    # strong form: swap lambda and mu across the pair
                    mirror = (k_nu, k_mu, k_lam)
                    if mirror in by_nu and by_nu[mirror] != inter:
                        report["violations"].append(("strong-vertex-regularity", key))
        report["ok"] = not report["violations"]
        return report


def parse_building(descriptor: str):
    """'tree:q0=2,q1=3,r=6' or 'thin:C2,r=8'."""
    s = descriptor.strip()
    if s.startswith("tree:"):
        params = dict(p.split("=") for p in s[5:].split(","))
        return TreeBuilding(
            q0=int(params["q0"]), q1=int(params["q1"]), radius=int(params["r"])
        )
    if s.startswith("thin:"):
        body = s[5:].split(",")
        rs = parse_descriptor(body[0])
        params = dict(p.split("=") for p in body[1:])
        return ThinBuilding(affine_weyl(rs), radius=int(params["r"]))
    raise StructureError(f"bad building descriptor {descriptor!r}")


def build(descriptor: str, radius: Optional[int] = None):
    """Spec-level constructor; radius overrides the descriptor's."""
    b = parse_building(descriptor)
    if radius is not None and radius != b.radius:
        b = parse_building(
            descriptor.rsplit("r=", 1)[0] + f"r={radius}"
            if "r=" in descriptor
            else descriptor + f",r={radius}"
        )
    return b
