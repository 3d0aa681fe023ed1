"""Exact coefficient arithmetic over the parameter classes.

Everything runs over Q.  One square-root variable u_c per parameter
class, with q_c = u_c^2, so every half-integral power of the parameters
(q_w^{1/2} and the tau-monomials) is an honest Laurent monomial.

Layers:

* ``Rational`` -- stdlib Fraction (always reduced, denominator > 0).
* ``LaurentPoly`` -- sparse exact Laurent polynomial in the u_c.
* ``ShiftedPoly`` -- ordinary polynomial in the shifted variables
  t_c = q_c - 1 (the positivity statements live here).
* ``LaurentFraction`` -- exact quotient of Laurent polynomials with the
  denominator kept as an unexpanded factor list; quantities such as the
  spherical structure constants have genuine polynomial denominators.

>>> ring = ParamRing(("q0", "q1"))
>>> p = ring.parse("q0*q1 + q0")
>>> lp_eval(p, {"q0": 2, "q1": 3})
Fraction(8, 1)
>>> str(to_shifted_basis(ring.parse("q0*q1")))
't0*t1 + t0 + t1 + 1'
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Union

from .termops import tadd, taxpy, tmul, tscale, tsub

Rational = Fraction
Numeric = Union[int, Fraction]

__all__ = [
    "Rational",
    "StructureError",
    "HalfPowerError",
    "InexactDivisionError",
    "LaurentPoly",
    "ShiftedPoly",
    "LaurentFraction",
    "ParamRing",
    "lp_arith",
    "lp_eval",
    "to_shifted_basis",
    "assert_nonneg_integer_coeffs",
]


class StructureError(ValueError):
    """Mismatched variable lists / malformed structural input."""


class HalfPowerError(ValueError):
    """Numeric specialization would need an irrational square root."""


class InexactDivisionError(ArithmeticError):
    """An exact polynomial division left a remainder."""


def _norm(c) -> Numeric:
    """Collapse Fraction(n, 1) to int n."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _as_numeric(c) -> Numeric:
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return _norm(c)
    raise StructureError(f"not a rational coefficient: {c!r}")


def _exact_sqrt(q: Fraction):
    """The positive rational square root of q, or None."""
    from math import isqrt

    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


# division step cap; exact divisions terminate far below this, inexact
# ones would otherwise descend forever in the Laurent lattice
_DIV_CAP = 500_000


class LaurentPoly:
    """Sparse exact Laurent polynomial in the variables u_c.

    ``terms`` maps exponent tuples (arity = number of variables, entries
    may be negative) to nonzero int/Fraction coefficients.  Instances
    are treated as immutable; all arithmetic returns fresh objects.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple, terms: dict):
        self.vars = vars
        self.terms = terms

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, vars: tuple, c) -> "LaurentPoly":
        c = _as_numeric(c)
        if not c:
            return cls(vars, {})
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def monomial(cls, vars: tuple, exps: tuple, c=1) -> "LaurentPoly":
        c = _as_numeric(c)
        if not c:
            return cls(vars, {})
        if len(exps) != len(vars):
            raise StructureError("exponent arity != variable count")
        return cls(vars, {tuple(exps): c})

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        z = (0,) * len(self.vars)
        return len(self.terms) == 1 and self.terms.get(z) == 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_q_pure(self) -> bool:
        """True iff every exponent of every u_c is even."""
        return all(e % 2 == 0 for k in self.terms for e in k)

    def has_negative_exponents(self) -> bool:
        return any(e < 0 for k in self.terms for e in k)

    def constant_value(self) -> Numeric:
        """The value if this is a constant; StructureError otherwise."""
        if not self.terms:
            return 0
        z = (0,) * len(self.vars)
        if len(self.terms) == 1 and z in self.terms:
            return self.terms[z]
        raise StructureError("not a constant polynomial")

    # -- ring operations ----------------------------------------------

    def _check(self, other: "LaurentPoly"):
        if self.vars != other.vars:
            raise StructureError(
                f"variable lists differ: {self.vars} vs {other.vars}"
            )

    def __add__(self, other):
        if isinstance(other, LaurentPoly):
            self._check(other)
            return LaurentPoly(self.vars, tadd(self.terms, other.terms))
        if isinstance(other, (int, Fraction)):
            return self + LaurentPoly.const(self.vars, other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, LaurentPoly):
            self._check(other)
            return LaurentPoly(self.vars, tsub(self.terms, other.terms))
        if isinstance(other, (int, Fraction)):
            return self - LaurentPoly.const(self.vars, other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return LaurentPoly(self.vars, {k: -v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            self._check(other)
            return LaurentPoly(self.vars, tmul(self.terms, other.terms))
        if isinstance(other, (int, Fraction)):
            return LaurentPoly(self.vars, tscale(self.terms, _as_numeric(other), None))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            inv = self.monomial_inverse()
            return inv ** (-n)
        out = LaurentPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.const(self.vars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def monomial_inverse(self) -> "LaurentPoly":
        """Inverse, defined only for monomials (the Laurent units)."""
        if len(self.terms) != 1:
            raise StructureError("only monomials are invertible")
        ((k, v),) = self.terms.items()
        return LaurentPoly(
            self.vars, {tuple(-e for e in k): _norm(Fraction(1) / Fraction(v))}
        )

    # -- evaluation ---------------------------------------------------

    def eval_q(self, assignment: dict) -> Fraction:
        """Exact value with q_c := assignment[c] (positive rationals).

        Odd powers of u_c need an exact rational square root of the
        assigned value; otherwise the evaluation is rejected
        ("needs-half-powers").  q-pure polynomials always evaluate.
        """
        values = []
        for name in self.vars:
            if name not in assignment:
                raise StructureError(f"missing value for parameter {name}")
            v = Fraction(assignment[name])
            if v <= 0:
                raise StructureError(f"parameter {name} must be positive")
            values.append(v)
        roots: dict = {}
        total = Fraction(0)
        for k, c in self.terms.items():
            val = Fraction(c)
            for i, (e, q) in enumerate(zip(k, values)):
                if e % 2:
                    r = roots.get(i)
                    if r is None:
                        r = _exact_sqrt(q)
                        if r is None:
                            raise HalfPowerError("needs-half-powers")
                        roots[i] = r
                    val *= r ** e
                elif e:
                    val *= q ** (e // 2)
            total += val
        return total

    # -- exact division -----------------------------------------------

    def min_exponents(self) -> tuple:
        return tuple(
            min(k[i] for k in self.terms) for i in range(len(self.vars))
        )

    def divide_exact(self, g: "LaurentPoly"):
        """Return self / g if the division is exact, else None."""
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return self
        fshift = self.min_exponents()
        gshift = g.min_exponents()
        fd = tscale(self.terms, 1, tuple(-e for e in fshift))
        gd = tscale(g.terms, 1, tuple(-e for e in gshift))
        glead = max(gd)
        glc = Fraction(gd[glead])
        quotient = {}
        work = dict(fd)
        steps = 0
        cap = min(_DIV_CAP, 64 + 32 * (len(fd) + 2) * (len(gd) + 2))
        while work:
            steps += 1
            if steps > cap:
                return None
            t = max(work)
            qt = tuple(a - b for a, b in zip(t, glead))
            c = _norm(Fraction(work[t]) / glc)
            quotient[qt] = c
            taxpy(work, gd, -c, qt)
        shift = tuple(a - b for a, b in zip(fshift, gshift))
        return LaurentPoly(self.vars, tscale(quotient, 1, shift))

    # -- printing -----------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)!r})"


class ShiftedPoly:
    """Ordinary polynomial in the shifted variables t_c = q_c - 1."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple, terms: dict):
        self.vars = vars
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def has_nonneg_integer_coeffs(self) -> bool:
        return all(
            isinstance(c, int) and c >= 0 for c in self.terms.values()
        )

    def to_laurent(self) -> LaurentPoly:
        """Substitute t_c = q_c - 1 back; inverse of to_shifted_basis."""
        n = len(self.vars)
        out: dict = {}
        for k, c in self.terms.items():
            expansion = {(0,) * n: c}
            for i, m in enumerate(k):
                if not m:
                    continue
                factor = {}
                for j in range(m + 1):
                    e = [0] * n
                    e[i] = 2 * j  # q_c = u_c^2
                    factor[tuple(e)] = comb(m, j) * (-1) ** (m - j)
                expansion = tmul(expansion, factor)
            for kk, vv in expansion.items():
                taxpy(out, {kk: vv}, 1, None)
        return LaurentPoly(self.vars, out)

    def __eq__(self, other):
        if isinstance(other, ShiftedPoly):
            return self.vars == other.vars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __str__(self):
        return _format_terms(self.terms, ["t" + v[1:] for v in self.vars], fold=False)

    def __repr__(self):
        return f"ShiftedPoly({str(self)!r})"


# size guard: skip speculative reductions on very large fractions
_REDUCE_CAP = 100_000


class LaurentFraction:
    """Exact quotient num / prod(den) of Laurent polynomials.

    The denominator is an unexpanded tuple of factors so that the
    frequent cancellations (Poincare polynomials, leading coefficients)
    can be removed one cheap exact division at a time.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: Iterable[LaurentPoly] = ()):
        factors = []
        for f in den:
            if f.is_zero():
                raise ZeroDivisionError("zero denominator factor")
            if f.is_one():
                continue
            if f.is_monomial():
                num = num * f.monomial_inverse()
                continue
            factors.append(f)
        if num.is_zero():
            factors = []
        else:
            kept = []
            for f in factors:
                if len(num.terms) * len(f.terms) <= _REDUCE_CAP:
                    q = num.divide_exact(f)
                    if q is not None:
                        num = q
                        continue
                kept.append(f)
            factors = kept
        self.num = num
        self.den = tuple(factors)

    # -- helpers ------------------------------------------------------

    @property
    def vars(self):
        return self.num.vars

    def _coerce(self, other):
        if isinstance(other, LaurentFraction):
            return other
        if isinstance(other, LaurentPoly):
            return LaurentFraction(other)
        if isinstance(other, (int, Fraction)):
            return LaurentFraction(LaurentPoly.const(self.vars, other))
        return None

    def den_poly(self) -> LaurentPoly:
        out = LaurentPoly.const(self.vars, 1)
        for f in self.den:
            out = out * f
        return out

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self.den

    def as_laurent(self) -> LaurentPoly:
        """The value as a LaurentPoly; raises if a denominator remains."""
        if not self.den:
            return self.num
        num = self.num
        for f in self.den:
            q = num.divide_exact(f)
            if q is None:
                raise InexactDivisionError(
                    f"({format_poly(self.num)}) not divisible by ({format_poly(f)})"
                )
            num = q
        return num

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return LaurentFraction(self.num + o.num, self.den)
        return LaurentFraction(
            self.num * o.den_poly() + o.num * self.den_poly(),
            self.den + o.den,
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        out = object.__new__(LaurentFraction)
        out.num = -self.num
        out.den = self.den
        return out

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LaurentFraction(self.num * o.num, self.den + o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero")
        return LaurentFraction(self.num * o.den_poly(), self.den + (o.num,))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return self.num == o.num
        return self.num * o.den_poly() == o.num * self.den_poly()

    def __hash__(self):
        raise TypeError("LaurentFraction is unhashable")

    def eval_q(self, assignment: dict) -> Fraction:
        val = self.num.eval_q(assignment)
        for f in self.den:
            d = f.eval_q(assignment)
            if d == 0:
                raise ZeroDivisionError("denominator vanishes at assignment")
            val /= d
        return val

    def __str__(self):
        if not self.den:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den_poly())})"

    def __repr__(self):
        return f"LaurentFraction({str(self)!r})"


class ParamRing:
    """The coefficient ring for a fixed tuple of parameter-class names."""

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        n = len(self.names)
        self.zero = LaurentPoly(self.names, {})
        self.one = LaurentPoly(self.names, {(0,) * n: 1})
        self._index = {name: i for i, name in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    def const(self, c) -> LaurentPoly:
        return LaurentPoly.const(self.names, c)

    def u_monomial(self, exps, c=1) -> LaurentPoly:
        return LaurentPoly.monomial(self.names, tuple(exps), c)

    def q_monomial(self, qexps, c=1) -> LaurentPoly:
        return LaurentPoly.monomial(self.names, tuple(2 * e for e in qexps), c)

    def qvar(self, i: int) -> LaurentPoly:
        e = [0] * len(self.names)
        e[i] = 2
        return LaurentPoly.monomial(self.names, tuple(e), 1)

    def uvar(self, i: int) -> LaurentPoly:
        e = [0] * len(self.names)
        e[i] = 1
        return LaurentPoly.monomial(self.names, tuple(e), 1)

    def parse(self, text: str) -> LaurentPoly:
        return parse_poly(text, self.names)

    def fraction(self, num, den=()) -> LaurentFraction:
        if isinstance(num, (int, Fraction)):
            num = self.const(num)
        return LaurentFraction(num, den)


# -- spec-level operation wrappers -------------------------------------


def lp_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    """add | sub | mul of two polynomials over the same variable list."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise StructureError(f"unknown op {op!r}")


def lp_eval(p, assignment: dict) -> Fraction:
    """Exact rational value of a q-pure polynomial (or fraction)."""
    return p.eval_q(assignment)


def to_shifted_basis(p: LaurentPoly) -> ShiftedPoly:
    """Rewrite a polynomial in the q_c in the variables t_c = q_c - 1.

    Requires a q-pure input without negative exponents; round-tripping
    through ShiftedPoly.to_laurent reproduces the input exactly.
    """
    if not p.is_q_pure():
        raise HalfPowerError("needs-half-powers")
    if p.has_negative_exponents():
        raise StructureError("Laurent input: negative exponents")
    n = len(p.vars)
    out: dict = {}
    for k, c in p.terms.items():
        ms = tuple(e // 2 for e in k)
        expansion = {(0,) * n: c}
        for i, m in enumerate(ms):
            if not m:
                continue
            factor = {}
            for j in range(m + 1):
                e = [0] * n
                e[i] = j  # (t_c + 1)^m
                factor[tuple(e)] = comb(m, j)
            expansion = tmul(expansion, factor)
        for kk, vv in expansion.items():
            taxpy(out, {kk: vv}, 1, None)
    return ShiftedPoly(p.vars, out)


def assert_nonneg_integer_coeffs(p: ShiftedPoly) -> bool:
    """True iff every stored coefficient is a nonnegative integer."""
    return p.has_nonneg_integer_coeffs()


# -- canonical string form ----------------------------------------------
#
# poly   := term (("+" | "-") term)*
# term   := coeff | [coeff "*"] factor ("*" factor)*
# factor := var ("^" int)?
# var    := ("q" | "u") digits     -- q folds to u^2
# coeff  := ["-"] digits ["/" digits]
#
# Writer: terms sorted by exponent vector, lexicographically descending;
# q-notation whenever the whole polynomial is q-pure.


def _format_coeff(c) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def _format_terms(terms: dict, names, fold: bool) -> str:
    if not terms:
        return "0"
    pieces = []
    for k in sorted(terms, reverse=True):
        c = terms[k]
        factors = []
        for name, e in zip(names, k):
            if not e:
                continue
            if fold:
                name = "q" + name[1:]
                e = e // 2
            elif name[0] != "t":
                name = "u" + name[1:]
            factors.append(name if e == 1 else f"{name}^{e}")
        neg = c < 0
        c = -c if neg else c
        body = _format_coeff(c)
        if factors:
            body = "*".join(factors) if c == 1 else body + "*" + "*".join(factors)
        if not pieces:
            pieces.append("-" + body if neg else body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)


def format_poly(p: LaurentPoly) -> str:
    return _format_terms(p.terms, p.vars, fold=p.is_q_pure())


def parse_poly(text: str, names: tuple) -> LaurentPoly:
    """Parse the canonical polynomial grammar (q- or u-notation)."""
    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    s = text.replace(" ", "")
    if not s:
        raise StructureError("empty polynomial string")
    terms: dict = {}
    i = 0
    sign = 1
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = 1
    while i <= len(s):
        j = i
        while j < len(s) and not (s[j] in "+-" and s[j - 1] != "^"):
            j += 1
        chunk = s[i:j]
        if not chunk:
            raise StructureError(f"malformed polynomial string: {text!r}")
        coeff: Numeric = 1
        exps = [0] * n
        for part in chunk.split("*"):
            if not part:
                raise StructureError(f"malformed term {chunk!r}")
            if part[0] in "qu":
                if "^" in part:
                    var, _, pw = part.partition("^")
                    power = int(pw)
                else:
                    var, power = part, 1
                kind, idx = var[0], var[1:]
                qname = "q" + idx
                if qname not in index:
                    raise StructureError(f"unknown variable {var!r}")
                exps[index[qname]] += 2 * power if kind == "q" else power
            else:
                if "/" in part:
                    a, _, b = part.partition("/")
                    coeff = coeff * Fraction(int(a), int(b))
                else:
                    coeff = coeff * int(part)
        k = tuple(exps)
        taxpy(terms, {k: _norm(sign * coeff)}, 1, None)
        if j >= len(s):
            break
        sign = -1 if s[j] == "-" else 1
        i = j + 1
    return LaurentPoly(names, terms)
