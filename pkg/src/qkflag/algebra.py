"""Exact sparse arithmetic kernel.

Three layers, all over arbitrary-precision integers with no floating point:

* :class:`LaurentPolynomial` -- sparse multivariate Laurent polynomials in
  the torus characters ``T1..Tn``, stored as a map from integer exponent
  vectors to nonzero coefficients.
* :class:`RationalFunction` -- the fraction field, kept in a canonical form
  so structural equality is sound.
* :class:`QSeries` -- power series in the quantum parameters ``q1..qk``
  truncated componentwise at a bound D, with rational-function coefficients.

Values are immutable after construction and every operation is pure.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _grlex_key(exp: tuple[int, ...]) -> tuple:
    return (sum(exp), exp)


def _vec_add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _vec_sub(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


class LaurentPolynomial:
    """Sparse Laurent polynomial: map exponent vector -> nonzero int."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict[tuple[int, ...], int] | None = None):
        self.nvars = nvars
        clean: dict[tuple[int, ...], int] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[e] = c
        self.terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "LaurentPolynomial":
        return LaurentPolynomial(nvars)

    @staticmethod
    def constant(nvars: int, c: int) -> "LaurentPolynomial":
        return LaurentPolynomial(nvars, {(0,) * nvars: c})

    @staticmethod
    def one(nvars: int) -> "LaurentPolynomial":
        return LaurentPolynomial.constant(nvars, 1)

    @staticmethod
    def variable(nvars: int, i: int, power: int = 1) -> "LaurentPolynomial":
        """The monomial T_i^power with 1-based variable index i."""
        if not 1 <= i <= nvars:
            raise ValueError(f"variable index {i} out of range 1..{nvars}")
        e = [0] * nvars
        e[i - 1] = power
        return LaurentPolynomial(nvars, {tuple(e): 1})

    @staticmethod
    def monomial(nvars: int, exp: tuple[int, ...], coeff: int = 1) -> "LaurentPolynomial":
        return LaurentPolynomial(nvars, {tuple(exp): coeff})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(0,) * self.nvars: 1}

    def is_constant(self) -> bool:
        return not self.terms or self.terms.keys() == {(0,) * self.nvars}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> int:
        if not self.terms:
            return 0
        return self.terms[(0,) * self.nvars]

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, int):
            return LaurentPolynomial.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        r = LaurentPolynomial(self.nvars)
        r.terms = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = LaurentPolynomial(self.nvars)
        r.terms = {e: -c for e, c in self.terms.items()}
        return r

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        r = LaurentPolynomial(self.nvars)
        r.terms = out
        return r

    __rmul__ = __mul__

    def inverse_unit(self) -> "LaurentPolynomial":
        """Inverse of a unit (+- monomial with coefficient +-1)."""
        if self.is_monomial():
            (e, c), = self.terms.items()
            if c in (1, -1):
                return LaurentPolynomial.monomial(self.nvars, tuple(-x for x in e), c)
        raise ValueError("not a unit in the Laurent ring")

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse_unit() ** (-k)
        result = LaurentPolynomial.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == LaurentPolynomial.constant(self.nvars, other).terms
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"LaurentPolynomial({render_laurent(self)})"

    # -- structure ---------------------------------------------------------

    def leading(self) -> tuple[tuple[int, ...], int]:
        """Leading term under graded lex (total degree, then lex on exponents)."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def min_exponents(self) -> tuple[int, ...]:
        """Componentwise minimum exponent over all terms (zero poly -> zeros)."""
        if not self.terms:
            return (0,) * self.nvars
        mins = [min(e[i] for e in self.terms) for i in range(self.nvars)]
        return tuple(mins)

    def shift(self, delta: tuple[int, ...]) -> "LaurentPolynomial":
        r = LaurentPolynomial(self.nvars)
        r.terms = {tuple(x + d for x, d in zip(e, delta)): c for e, c in self.terms.items()}
        return r

    def content(self) -> int:
        """Positive integer gcd of all coefficients (0 for the zero poly)."""
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
            if g == 1:
                return 1
        return g

    def degree_in(self, i: int) -> int:
        """Max exponent of 1-based variable i (0 for the zero poly)."""
        if not self.terms:
            return 0
        return max(e[i - 1] for e in self.terms)

    def evaluate(self, values: list[Fraction]) -> Fraction:
        """Exact evaluation at nonzero rational points."""
        total = Fraction(0)
        for e, c in self.terms.items():
            v = Fraction(c)
            for x, k in zip(values, e):
                v *= Fraction(x) ** k
            total += v
        return total


def divexact(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    """Exact quotient a/b in the Laurent ring; raises if b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero():
        return LaurentPolynomial.zero(a.nvars)
    if b.is_monomial():
        (eb, cb), = b.terms.items()
        out = {}
        for e, c in a.terms.items():
            if c % cb:
                raise ValueError("not divisible")
            out[_vec_sub(e, eb)] = c // cb
        r = LaurentPolynomial(a.nvars)
        r.terms = out
        return r
    sa, sb = a.min_exponents(), b.min_exponents()
    A = a.shift(tuple(-x for x in sa)).terms
    B = b.shift(tuple(-x for x in sb))
    eb, cb = B.leading()
    bterms = B.terms
    quot: dict[tuple[int, ...], int] = {}
    rem = dict(A)
    while rem:
        er = max(rem, key=_grlex_key)
        cr = rem[er]
        eq = _vec_sub(er, eb)
        if any(x < 0 for x in eq) or cr % cb:
            raise ValueError("not divisible")
        cq = cr // cb
        quot[eq] = cq
        for e2, c2 in bterms.items():
            e = _vec_add(eq, e2)
            s = rem.get(e, 0) - cq * c2
            if s:
                rem[e] = s
            elif e in rem:
                del rem[e]
    r = LaurentPolynomial(a.nvars)
    r.terms = {_vec_add(e, _vec_sub(sa, sb)): c for e, c in quot.items()}
    return r


# -- multivariate gcd -------------------------------------------------------
#
# Canonical fractions need a genuine multivariate gcd; that is delegated to
# sympy's sparse polynomial rings, which use modular and heuristic
# algorithms that stay fast where a naive remainder sequence blows up.
# Only the integer-polynomial kernel is delegated; the Laurent-unit
# bookkeeping stays here.

_ZZ_RINGS: dict[int, object] = {}


def _zz_ring(nvars: int):
    R = _ZZ_RINGS.get(nvars)
    if R is None:
        from sympy.polys.domains import ZZ
        from sympy.polys.rings import ring

        R = ring([f"x{i}" for i in range(nvars)], ZZ)[0]
        _ZZ_RINGS[nvars] = R
    return R


def _normalize_gcd(g: LaurentPolynomial) -> LaurentPolynomial:
    if g.is_zero():
        return g
    g = g.shift(tuple(-x for x in g.min_exponents()))
    if g.leading()[1] < 0:
        g = -g
    return g


def poly_gcd(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    """GCD in the Laurent ring, normalized: min exponent 0 in every variable
    and positive graded-lex leading coefficient.  Up to that choice of unit
    the result is the usual UFD gcd."""
    if a.is_zero():
        return _normalize_gcd(b)
    if b.is_zero():
        return _normalize_gcd(a)
    if a.is_monomial() or b.is_monomial():
        # monomials are units times an integer, only contents survive
        return LaurentPolynomial.constant(a.nvars, math.gcd(a.content(), b.content()))
    n = a.nvars
    A = a.shift(tuple(-x for x in a.min_exponents()))
    B = b.shift(tuple(-x for x in b.min_exponents()))
    R = _zz_ring(n)
    g = R.from_dict(A.terms).gcd(R.from_dict(B.terms))
    return _normalize_gcd(LaurentPolynomial(n, {tuple(e): int(c) for e, c in g.items()}))


class RationalFunction:
    """Quotient of Laurent polynomials in canonical form.

    Canonical means: gcd(num, den) is a unit, the denominator is an honest
    polynomial not divisible by any variable, and its graded-lex leading
    coefficient is positive.  Monomial units are absorbed into the numerator,
    so den == 1 exactly when the value is a Laurent polynomial.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPolynomial, den: LaurentPolynomial | None = None):
        if den is None:
            den = LaurentPolynomial.one(num.nvars)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num = num
            self.den = LaurentPolynomial.one(num.nvars)
            return
        if den.is_monomial():
            (e, c), = den.terms.items()
            shifted = num.shift(tuple(-x for x in e))
            if c in (1, -1):
                self.num = shifted if c == 1 else -shifted
                self.den = LaurentPolynomial.one(num.nvars)
                return
            g = math.gcd(abs(c), shifted.content())
            self.num = divexact(shifted, LaurentPolynomial.constant(num.nvars, g if c > 0 else -g))
            self.den = LaurentPolynomial.constant(num.nvars, abs(c) // g)
            return
        g = poly_gcd(num, den)
        num = divexact(num, g)
        den = divexact(den, g)
        sd = den.min_exponents()
        den = den.shift(tuple(-x for x in sd))
        num = num.shift(tuple(-x for x in sd))
        if den.leading()[1] < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    # -- helpers -----------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @staticmethod
    def of(x, nvars: int | None = None) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, LaurentPolynomial):
            return RationalFunction(x)
        if isinstance(x, int):
            if nvars is None:
                raise ValueError("nvars needed to promote an integer")
            return RationalFunction(LaurentPolynomial.constant(nvars, x))
        raise TypeError(f"cannot promote {type(x).__name__}")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def as_laurent(self) -> LaurentPolynomial:
        if not self.den.is_one():
            raise ValueError("denominator did not cancel")
        return self.num

    # -- field operations --------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, (LaurentPolynomial, int)):
            return RationalFunction.of(other, self.nvars)
        if isinstance(other, RationalFunction):
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        r = RationalFunction.__new__(RationalFunction)
        r.num = -self.num
        r.den = self.den
        return r

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RationalFunction.of(other, self.nvars) / self

    def __eq__(self, other):
        if isinstance(other, (int, LaurentPolynomial)):
            other = RationalFunction.of(other, self.nvars)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({render_rational(self)})"


class QSeries:
    """Power series in q1..qk truncated at componentwise degree <= bound.

    Coefficients are rational functions in the torus variables.  Working at
    bound D means computing in the quotient by the ideal (q_1^{D+1}, ...,
    q_k^{D+1}), so every identity asserted here is an identity of all
    coefficients up to that degree.
    """

    __slots__ = ("k", "nvars", "bound", "coeffs")

    def __init__(self, k: int, nvars: int, bound: int,
                 coeffs: dict[tuple[int, ...], RationalFunction] | None = None):
        self.k = k
        self.nvars = nvars
        self.bound = bound
        clean: dict[tuple[int, ...], RationalFunction] = {}
        if coeffs:
            for d, c in coeffs.items():
                if any(x < 0 for x in d):
                    raise ValueError("negative q exponent")
                if all(x <= bound for x in d) and not c.is_zero():
                    clean[d] = c
        self.coeffs = clean

    @staticmethod
    def zero(k: int, nvars: int, bound: int) -> "QSeries":
        return QSeries(k, nvars, bound)

    @staticmethod
    def one(k: int, nvars: int, bound: int) -> "QSeries":
        return QSeries(k, nvars, bound, {(0,) * k: RationalFunction.of(1, nvars)})

    @staticmethod
    def q(k: int, nvars: int, bound: int, j: int, power: int = 1) -> "QSeries":
        """The monomial q_j^power with 1-based index j."""
        e = [0] * k
        e[j - 1] = power
        return QSeries(k, nvars, bound, {tuple(e): RationalFunction.of(1, nvars)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_term(self) -> RationalFunction:
        return self.coeffs.get((0,) * self.k, RationalFunction.of(0, self.nvars))

    def _check(self, other: "QSeries"):
        if self.k != other.k or self.bound != other.bound or self.nvars != other.nvars:
            raise ValueError("mismatched q-series shapes (variables or truncation bound)")

    def _coerce(self, other):
        if isinstance(other, QSeries):
            self._check(other)
            return other
        if isinstance(other, (int, LaurentPolynomial, RationalFunction)):
            c = RationalFunction.of(other, self.nvars)
            return QSeries(self.k, self.nvars, self.bound, {(0,) * self.k: c})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            s = out.get(d)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(d, None)
            else:
                out[d] = s
        r = QSeries(self.k, self.nvars, self.bound)
        r.coeffs = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = QSeries(self.k, self.nvars, self.bound)
        r.coeffs = {d: -c for d, c in self.coeffs.items()}
        return r

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        bound = self.bound
        out: dict[tuple[int, ...], RationalFunction] = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = _vec_add(d1, d2)
                if any(x > bound for x in d):
                    continue
                p = c1 * c2
                s = out.get(d)
                s = p if s is None else s + p
                if s.is_zero():
                    out.pop(d, None)
                else:
                    out[d] = s
        r = QSeries(self.k, self.nvars, self.bound)
        r.coeffs = out
        return r

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, LaurentPolynomial, RationalFunction)):
            other = self._coerce(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.k, self.nvars, self.bound) == (other.k, other.nvars, other.bound) \
            and self.coeffs == other.coeffs

    def __repr__(self):
        return f"QSeries({render_qseries(self)})"


# -- operations ------------------------------------------------------------


def elem_sym(vars: list, ell: int):
    """Elementary symmetric polynomial e_ell of the inputs.

    e_0 = 1 (empty product), e_ell = 0 for ell > len(vars).  Inputs may be
    Laurent polynomials or rational functions; the result follows suit.
    """
    if ell < 0:
        raise ValueError("negative degree")
    if not vars:
        return 1 if ell == 0 else 0
    first = vars[0]
    nvars = first.nvars
    if isinstance(first, RationalFunction):
        one = RationalFunction.of(1, nvars)
        zero = RationalFunction.of(0, nvars)
    else:
        one = LaurentPolynomial.one(nvars)
        zero = LaurentPolynomial.zero(nvars)
    e = [one] + [zero] * ell
    for v in vars:
        for j in range(min(ell, len(vars)), 0, -1):
            e[j] = e[j] + v * e[j - 1]
    return e[ell]


def rf_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    """Field arithmetic on rational functions: op in add|sub|mul|div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise ZeroDivisionError("division by zero")
        return a / b
    raise ValueError(f"unknown op {op!r}")


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    """Truncated Cauchy product; shapes must agree."""
    if not isinstance(b, QSeries):
        raise TypeError("qs_mul expects two q-series")
    a._check(b)
    return a * b


def qs_inverse(a: QSeries) -> QSeries:
    """Two-sided inverse within the truncation; needs a nonzero constant term."""
    c = a.constant_term()
    if c.is_zero():
        raise ValueError("not a unit")
    cinv = RationalFunction.of(1, a.nvars) / c
    # a = c (1 - x) with x of positive q-order; invert by geometric series
    x = QSeries.one(a.k, a.nvars, a.bound) - a * cinv
    acc = QSeries.one(a.k, a.nvars, a.bound)
    for _ in range(a.k * a.bound):
        acc = QSeries.one(a.k, a.nvars, a.bound) + x * acc
    return acc * cinv


# -- text grammar ----------------------------------------------------------


def default_names(nvars: int) -> list[str]:
    return [f"T{i}" for i in range(1, nvars + 1)]


def _render_monomial(e: tuple[int, ...], names: list[str]) -> str:
    parts = []
    for x, name in zip(e, names):
        if x == 0:
            continue
        parts.append(name if x == 1 else f"{name}^{x}")
    return "*".join(parts)


def render_laurent(p: LaurentPolynomial, names: list[str] | None = None) -> str:
    """Stable text form: terms in decreasing graded-lex order."""
    if names is None:
        names = default_names(p.nvars)
    if not p.terms:
        return "0"
    pieces = []
    for e in sorted(p.terms, key=_grlex_key, reverse=True):
        c = p.terms[e]
        mono = _render_monomial(e, names)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        pieces.append(("-" if c < 0 else "+", body))
    sign, body = pieces[0]
    out = body if sign == "+" else f"-{body}"
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def render_rational(r: RationalFunction, names: list[str] | None = None) -> str:
    if names is None:
        names = default_names(r.nvars)
    if r.den.is_one():
        return render_laurent(r.num, names)
    return f"({render_laurent(r.num, names)})/({render_laurent(r.den, names)})"


def render_qseries(s: QSeries, tnames: list[str] | None = None,
                   qnames: list[str] | None = None) -> str:
    if tnames is None:
        tnames = default_names(s.nvars)
    if qnames is None:
        qnames = [f"q{i}" for i in range(1, s.k + 1)]
    if not s.coeffs:
        return "0"
    pieces = []
    for d in sorted(s.coeffs, key=_grlex_key):
        c = s.coeffs[d]
        qmono = _render_monomial(d, qnames)
        body = render_rational(c, tnames)
        if qmono:
            body = f"({body})*{qmono}" if (" " in body or "/" in body) else (
                qmono if body == "1" else f"-{qmono}" if body == "-1" else f"{body}*{qmono}")
        pieces.append(body)
    return " + ".join(pieces)


class _Parser:
    """Recursive-descent parser for the polynomial grammar.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-'* atom ('^' int)?
    atom   := integer | name | '(' expr ')'
    """

    def __init__(self, text: str, names: list[str]):
        self.text = text
        self.pos = 0
        self.names = {name: i for i, name in enumerate(names)}
        self.nvars = len(names)

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expect(self, ch: str):
        if self._peek() != ch:
            raise ValueError(f"expected {ch!r} at position {self.pos} in {self.text!r}")
        self.pos += 1

    def parse(self) -> RationalFunction:
        v = self._expr()
        self._skip()
        if self.pos != len(self.text):
            raise ValueError(f"trailing input at position {self.pos} in {self.text!r}")
        return v

    def _expr(self) -> RationalFunction:
        v = self._term()
        while True:
            ch = self._peek()
            if ch == "+":
                self.pos += 1
                v = v + self._term()
            elif ch == "-":
                self.pos += 1
                v = v - self._term()
            else:
                return v

    def _term(self) -> RationalFunction:
        v = self._factor()
        while True:
            ch = self._peek()
            if ch == "*":
                self.pos += 1
                v = v * self._factor()
            elif ch == "/":
                self.pos += 1
                v = v / self._factor()
            else:
                return v

    def _factor(self) -> RationalFunction:
        sign = 1
        while self._peek() == "-":
            sign = -sign
            self.pos += 1
        v = self._atom()
        if self._peek() == "^":
            self.pos += 1
            k = self._int()
            if k >= 0:
                v = self._rf_pow(v, k)
            else:
                v = RationalFunction.of(1, self.nvars) / self._rf_pow(v, -k)
        return v if sign == 1 else -v

    @staticmethod
    def _rf_pow(v: RationalFunction, k: int) -> RationalFunction:
        out = RationalFunction.of(1, v.nvars)
        for _ in range(k):
            out = out * v
        return out

    def _int(self) -> int:
        self._skip()
        start = self.pos
        if self._peek() == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            raise ValueError(f"expected integer at position {start} in {self.text!r}")
        return int(self.text[start:self.pos])

    def _atom(self) -> RationalFunction:
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            v = self._expr()
            self._expect(")")
            return v
        if ch.isdigit():
            return RationalFunction.of(self._int(), self.nvars)
        if ch.isalpha():
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            name = self.text[start:self.pos]
            if name not in self.names:
                raise ValueError(f"unknown variable {name!r}")
            return RationalFunction(LaurentPolynomial.variable(self.nvars, self.names[name] + 1))
        raise ValueError(f"unexpected character {ch!r} at position {self.pos} in {self.text!r}")


def parse_rational(text: str, names: list[str]) -> RationalFunction:
    """Parse the stable text grammar back into a rational function."""
    return _Parser(text, names).parse()


def parse_laurent(text: str, names: list[str]) -> LaurentPolynomial:
    return parse_rational(text, names).as_laurent()
