"""The multi-parameter affine Hecke algebra in the T-basis.

Coefficients are Laurent polynomials (or exact fractions of them) in
the parameter square roots u_c.  Products reduce every right factor to
a chain of generator steps

    T_v T_{s_i} = T_{v s_i}                              (length up)
    T_v T_{s_i} = q_i^{-1} T_{v s_i} + (1 - q_i^{-1}) T_v  (length down)

with the per-(v, i) expansions memoized on the algebra instance.  The
same engine is the chamber-operator algebra of a regular building: the
operator B_w corresponds to T_w with the parameters of the building, so
the d-constants computed here double as the b-constants.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from .affweyl import AffineElement, AffineWeyl, affine_weyl, format_word
from .coeff import (
    LaurentFraction,
    LaurentPoly,
    ShiftedPoly,
    StructureError,
    to_shifted_basis,
)
from .rootdata import Coords, RootSystem, vscale


def _is_zero(c) -> bool:
    if isinstance(c, (LaurentPoly, LaurentFraction)):
        return c.is_zero()
    return not c


def _acc(d: dict, k, c):
    cur = d.get(k)
    if cur is None:
        if not _is_zero(c):
            d[k] = c
    else:
        cur = cur + c
        if _is_zero(cur):
            del d[k]
        else:
            d[k] = cur


class HeckeElement:
    """A finite sum of T_w with polynomial or fractional coefficients."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: "HeckeAlgebra", terms: dict):
        self.alg = alg
        self.terms = terms

    def __add__(self, other):
        if isinstance(other, HeckeElement):
            self._check(other)
            out = dict(self.terms)
            for k, c in other.terms.items():
                _acc(out, k, c)
            return HeckeElement(self.alg, out)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, HeckeElement):
            self._check(other)
            out = dict(self.terms)
            for k, c in other.terms.items():
                _acc(out, k, -c)
            return HeckeElement(self.alg, out)
        return NotImplemented

    def __neg__(self):
        return HeckeElement(self.alg, {k: -c for k, c in self.terms.items()})

    def scaled(self, c) -> "HeckeElement":
        if _is_zero(c):
            return HeckeElement(self.alg, {})
        return HeckeElement(self.alg, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return self.alg.t_multiply(self, other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        self._check(other)
        diff = self - other
        return not diff.terms

    def __hash__(self):
        raise TypeError("HeckeElement is unhashable")

    def _check(self, other: "HeckeElement"):
        if self.alg is not other.alg:
            raise StructureError("elements belong to different algebras")

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, w: AffineElement):
        c = self.terms.get(w)
        if c is None:
            return self.alg.aw.ring.zero
        return c

    def support(self):
        return set(self.terms)

    def map_coefficients(self, fn) -> "HeckeElement":
        out = {}
        for k, c in self.terms.items():
            v = fn(c)
            if not _is_zero(v):
                out[k] = v
        return HeckeElement(self.alg, out)

    def __repr__(self):
        return format_hecke(self)


class HeckeAlgebra:
    """One algebra instance: group context + memoized generator steps."""

    def __init__(self, aw: AffineWeyl):
        self.aw = aw
        self.ring = aw.ring
        self._step: dict = {}
        self._descent: dict = {}
        self._inv_q = {
            i: aw.q_letter(i).monomial_inverse() for i in aw.index_set
        }
        self._parabolic_sums: dict = {}
        self._idempotents: dict = {}
        self._x_cache: dict = {}
        self._tinv_cache: dict = {}

    # -- constructors ---------------------------------------------------

    def zero(self) -> HeckeElement:
        return HeckeElement(self, {})

    def one(self) -> HeckeElement:
        return HeckeElement(self, {self.aw.identity: self.ring.one})

    def t_basis(self, w: AffineElement) -> HeckeElement:
        return HeckeElement(self, {w: self.ring.one})

    def from_terms(self, terms: dict) -> HeckeElement:
        out = {}
        for k, c in terms.items():
            _acc(out, k, c)
        return HeckeElement(self, out)

    # -- generator steps --------------------------------------------------

    def _right_descent(self, u: AffineElement) -> Optional[int]:
        d = self._descent.get(u)
        if d is not None:
            return d if d >= 0 else None
        aw = self.aw
        lu = aw.length(u)
        for i in aw.index_set:
            if aw.length(u.compose(aw.generators[i])) < lu:
                self._descent[u] = i
                return i
        self._descent[u] = -1
        return None

    def _gen_step(self, v: AffineElement, i: int):
        key = (v, i)
        out = self._step.get(key)
        if out is None:
            aw = self.aw
            vs = v.compose(aw.generators[i])
            if aw.length(vs) > aw.length(v):
                out = ((vs, self.ring.one),)
            else:
                invq = self._inv_q[i]
                out = ((vs, invq), (v, self.ring.one - invq))
            self._step[key] = out
        return out

    def _rmul_gen(self, terms: dict, i: int) -> dict:
        out: dict = {}
        for v, c in terms.items():
            for w, p in self._gen_step(v, i):
                _acc(out, w, c * p)
        return out

    def _rmul_g(self, terms: dict, g: AffineElement) -> dict:
        return {v.compose(g): c for v, c in terms.items()}

    # -- products ----------------------------------------------------------

    def t_multiply(self, a: HeckeElement, b: HeckeElement) -> HeckeElement:
        """Exact product; the right factor is expanded along reduced words."""
        a._check(b)
        aw = self.aw
        memo: dict = {aw.identity: a.terms}

        def with_basis(u: AffineElement) -> dict:
            got = memo.get(u)
            if got is not None:
                return got
            i = self._right_descent(u)
            if i is None:
                res = self._rmul_g(a.terms, u)
            else:
                res = self._rmul_gen(with_basis(u.compose(aw.generators[i])), i)
            memo[u] = res
            return res

        out: dict = {}
        for u, c in b.terms.items():
            for w, p in with_basis(u).items():
                _acc(out, w, p * c)
        return HeckeElement(self, out)

    def t_inverse(self, w: AffineElement) -> HeckeElement:
        """Inverse of a basis element T_w."""
        got = self._tinv_cache.get(w)
        if got is not None:
            return got
        aw = self.aw
        word, j = aw.extended_word(w)
        out = self.t_basis(aw.g_inverses[j])
        for i in reversed(word):
            # T_{s_i}^{-1} = q_i T_{s_i} - (q_i - 1) T_1
            qi = aw.q_letter(i)
            shifted = HeckeElement(self, self._rmul_gen(out.terms, i))
            out = shifted.scaled(qi) - out.scaled(qi - self.ring.one)
        self._tinv_cache[w] = out
        return out

    # -- structure constants -------------------------------------------------

    def structure_d(self, w1: AffineElement, w2: AffineElement) -> dict:
        """T_{w1} T_{w2} = sum_w3 d_{w1,w2;w3} T_{w3}, as {w3: LaurentPoly}."""
        return self.t_multiply(self.t_basis(w1), self.t_basis(w2)).terms

    def structure_d_prime(self, w1: AffineElement, w2: AffineElement) -> dict:
        """The renormalized constants d' = q_{w1} q_{w2} q_{w3}^{-1} d.

        Values are returned in the shifted basis t_c = q_c - 1; every
        one an honest polynomial with (testably) nonnegative integer
        coefficients.
        """
        aw = self.aw
        if not (aw.in_unextended(w1) and aw.in_unextended(w2)):
            raise StructureError("d' constants are indexed by W, not W~")
        q12 = aw.q_monomial(w1) * aw.q_monomial(w2)
        out = {}
        for w3, d in self.structure_d(w1, w2).items():
            poly = q12 * aw.q_monomial(w3).monomial_inverse() * d
            out[w3] = to_shifted_basis(poly)
        return out

    # -- distinguished elements ------------------------------------------------

    def parabolic_sum(self, J) -> HeckeElement:
        """sum of q_w T_w over the finite parabolic W_J (polynomial coeffs)."""
        J = tuple(sorted(set(J)))
        got = self._parabolic_sums.get(J)
        if got is None:
            aw = self.aw
            got = self.from_terms(
                {w: aw.q_monomial(w) for w in aw.parabolic(J)}
            )
            self._parabolic_sums[J] = got
        return got

    def coset_sum(self, J, w: AffineElement, K) -> HeckeElement:
        """sum of q_w T_w over the double coset W_J w W_K."""
        elements, _ = self.aw.double_coset(J, w, K)
        return self.from_terms({v: self.aw.q_monomial(v) for v in elements})

    def idempotent(self, i: int) -> HeckeElement:
        """1_i = W_i(q)^{-1} sum_{w in W_i} q_w T_w."""
        got = self._idempotents.get(i)
        if got is None:
            aw = self.aw
            J = tuple(j for j in aw.index_set if j != i)
            s = self.parabolic_sum(J)
            wq = aw.poincare_polynomial(aw.parabolic(J))
            got = s.map_coefficients(
                lambda c: LaurentFraction(c, (wq,))
            )
            self._idempotents[i] = got
        return got

    def x_lambda(self, lam: Coords) -> HeckeElement:
        """x^lam: q_{t_lam}^{1/2} T_{t_lam} for dominant lam, extended to
        all of P through a dominant difference lam = mu - nu."""
        lam = tuple(lam)
        got = self._x_cache.get(lam)
        if got is not None:
            return got
        aw = self.aw
        if aw.rs.is_dominant(lam):
            t = aw.translation(lam)
            out = HeckeElement(self, {t: aw.q_sqrt_monomial(t)})
        else:
            mu = tuple(max(c, 0) for c in lam)
            nu = tuple(max(-c, 0) for c in lam)
            out = self.x_lambda_pair(mu, nu)
        self._x_cache[lam] = out
        return out

    def x_lambda_pair(self, mu: Coords, nu: Coords) -> HeckeElement:
        """x^{mu - nu} = x^mu (x^nu)^{-1} for dominant mu, nu."""
        aw = self.aw
        if not (aw.rs.is_dominant(mu) and aw.rs.is_dominant(nu)):
            raise StructureError("decomposition must use dominant coweights")
        tm, tn = aw.translation(mu), aw.translation(nu)
        head = HeckeElement(self, {tm: aw.q_sqrt_monomial(tm)})
        tail = self.t_inverse(tn).scaled(
            aw.q_sqrt_monomial(tn).monomial_inverse()
        )
        return self.t_multiply(head, tail)

    def group_algebra_image(self, terms: dict) -> HeckeElement:
        """Map sum c_mu x^mu (terms: {coords: coeff}) into the algebra."""
        out = self.zero()
        for mu, c in terms.items():
            out = out + self.x_lambda(mu).scaled(c)
        return out

    # -- the commutation relations ----------------------------------------------

    def bernstein_residual(self, lam: Coords, i: int) -> HeckeElement:
        """x^lam T_{s_i} - T_{s_i} x^{s_i lam} minus its closed form.

        The closed form is (1 - q_i^{-1}) (x^lam - x^{s_i lam}) /
        (1 - x^{-alpha_i^vee}) with the fraction expanded as the finite
        telescoping sum; in the non-reduced case at the last node the
        bracket acquires the extra q_n^{-1/2}(q_0^{1/2} - q_0^{-1/2})
        x^{-(2 alpha_n)^vee} term and the series steps by
        2(2 alpha_n)^vee.  Must be exactly zero.
        """
        aw = self.aw
        rs = aw.rs
        if i not in aw.index_set or i == 0:
            raise StructureError("Bernstein relations are indexed by I_0")
        ring = self.ring
        s_i = rs.simple_reflections[i - 1]
        slam = s_i.apply_coords(lam)
        k = lam[i - 1]

        gen = self.t_basis(aw.generators[i])
        lhs = self.t_multiply(self.x_lambda(lam), gen) - self.t_multiply(
            gen, self.x_lambda(slam)
        )

        bc_case = rs.type_label == "BC" and i == rs.rank
        alpha = rs.simple_roots[i - 1]
        if bc_case:
            step = rs.coords_of(rs.coroot(vscale(2, alpha)))
            step = tuple(2 * c for c in step)  # 2 (2 alpha_n)^vee
        else:
            step = rs.coords_of(rs.coroot(alpha))

        series: dict = {}
        if k > 0:
            base, count, sign = lam, k, 1
        elif k < 0:
            base, count, sign = slam, -k, -1
        else:
            base, count, sign = lam, 0, 1
        for j in range(count):
            mu = tuple(b - j * s for b, s in zip(base, step))
            _acc(series, mu, ring.const(sign))

        invq = self._inv_q[i]
        bracket: dict = {(0,) * rs.rank: ring.one - invq}
        if bc_case:
            c0 = aw.class_index[0]
            cn = aw.class_index[i]
            exps = [0] * len(ring.names)
            exps[cn] -= 1
            exps[c0] += 1
            plus = ring.u_monomial(tuple(exps))
            exps[c0] -= 2
            minus = ring.u_monomial(tuple(exps))
            halfstep = rs.coords_of(rs.coroot(vscale(2, alpha)))
            _acc(bracket, tuple(-c for c in halfstep), plus - minus)

        rhs_terms: dict = {}
        for mu, cm in series.items():
            for nu, cn_ in bracket.items():
                _acc(rhs_terms, tuple(a + b for a, b in zip(mu, nu)), cm * cn_)
        return lhs - self.group_algebra_image(rhs_terms)

    def satake_product(self, lam: Coords) -> HeckeElement:
        """1_0 T_{t_lam} 1_0 for dominant lam."""
        aw = self.aw
        if not aw.rs.is_dominant(lam):
            raise StructureError("satake_product requires a dominant coweight")
        J = tuple(j for j in aw.index_set if j != 0)
        s = self.parabolic_sum(J)
        wq = aw.poincare_polynomial(aw.parabolic(J))
        core = self.t_multiply(
            self.t_multiply(s, self.t_basis(aw.translation(lam))), s
        )
        return core.map_coefficients(lambda c: LaurentFraction(c, (wq, wq)))

    def commutes_with_generators(self, z: HeckeElement) -> bool:
        for i in self.aw.index_set:
            g = self.t_basis(self.aw.generators[i])
            if self.t_multiply(z, g) != self.t_multiply(g, z):
                return False
        return True


_ALG_CACHE: dict = {}


def hecke_algebra(rs_or_aw) -> HeckeAlgebra:
    if isinstance(rs_or_aw, AffineWeyl):
        aw = rs_or_aw
    else:
        aw = affine_weyl(rs_or_aw)
    key = (aw.rs.type_label, aw.rs.rank)
    if key not in _ALG_CACHE:
        _ALG_CACHE[key] = HeckeAlgebra(aw)
    return _ALG_CACHE[key]


def format_hecke(e: HeckeElement) -> str:
    """Text form 'T[0,1] + (q0-1)*T[1]' (length-zero parts as *G[j])."""
    if not e.terms:
        return "0"
    aw = e.alg.aw
    bits = []
    keys = sorted(e.terms, key=lambda w: (aw.length(w), w.trans, w.weyl.perm))
    for w in keys:
        word, j = aw.extended_word(w)
        t = "T[" + format_word(word) + "]"
        if j:
            t += f"*G[{j}]"
        c = e.terms[w]
        if isinstance(c, LaurentPoly) and c.is_one():
            bits.append(t)
        else:
            bits.append(f"({c})*{t}")
    return " + ".join(bits)


def parse_hecke(alg: HeckeAlgebra, text: str) -> HeckeElement:
    """Parse the text form emitted by format_hecke."""
    from .affweyl import parse_word
    from .coeff import parse_poly

    aw = alg.aw
    out = alg.zero()
    for chunk in text.split(" + "):
        chunk = chunk.strip()
        if chunk == "0" or not chunk:
            continue
        coeff = alg.ring.one
        if chunk.startswith("("):
            depth = 0
            pos = 0
            while pos < len(chunk):
                depth += chunk[pos] == "("
                depth -= chunk[pos] == ")"
                if not depth and chunk[pos] == ")" and chunk[pos + 1 : pos + 2] == "*":
                    break
                pos += 1
            body = chunk[1:pos]
            rest = chunk[pos + 1 :]
            split = body.find(")/(")
            if body.startswith("(") and split >= 0 and body.endswith(")"):
                coeff = LaurentFraction(
                    parse_poly(body[1:split], alg.ring.names),
                    (parse_poly(body[split + 3 : -1], alg.ring.names),),
                )
            else:
                coeff = parse_poly(body, alg.ring.names)
            if not rest.startswith("*"):
                raise StructureError(f"bad term {chunk!r}")
            chunk = rest[1:]
        if not chunk.startswith("T[") or "]" not in chunk:
            raise StructureError(f"bad term {chunk!r}")
        close = chunk.index("]")
        word = parse_word(chunk[2:close])
        g = 0
        tail = chunk[close + 1 :]
        if tail.startswith("*G[") and tail.endswith("]"):
            g = int(tail[3:-1])
        elif tail:
            raise StructureError(f"bad term {chunk!r}")
        w = aw.element_from_word(word, g)
        out = out + alg.t_basis(w).scaled(coeff)
    return out
