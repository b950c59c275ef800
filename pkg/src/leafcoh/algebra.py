"""Exact coefficient arithmetic: Gaussian rationals and truncated power series.

Every number in this package is a Gaussian rational (a + b*i with exact
rational a, b); no floating point is used anywhere, so algebraic identities
such as d**2 = 0 hold on the nose and ranks are meaningful.

Smooth functions are modelled by sparse multivariate polynomials in the
leafwise variables z_1..z_m, their formal conjugates zb_1..zb_m and the
transverse variables x_1..x_n, together with a total-degree *budget*: the
maximal degree a Series is allowed to store.  The budget is bookkeeping, not
part of equality; two Series are equal iff their term maps agree.  Truncation
only ever happens where an operation takes an explicit ``out_budget``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator


class GaussianRational:
    """An exact complex number a + b*i with rational a, b.

    Immutable by convention; all operations return new values.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    # -- ring structure -----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        d = self.re * self.re + self.im * self.im
        if d == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / d, -self.im / d)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # -- comparisons and hashing -------------------------------------------

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_scalar(self)


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    return None


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_scalar(c: GaussianRational) -> str:
    """Render a Gaussian rational in the series text grammar.

    Pure values print bare ("3/2", "-2i", "i"); mixed values are
    parenthesised ("(1+2i)") so they survive a round trip through the parser.
    """
    if not c.im:
        return _frac_str(c.re)
    if c.im == 1:
        im = "i"
    elif c.im == -1:
        im = "-i"
    else:
        im = _frac_str(c.im) + "i"
    if not c.re:
        return im
    sign = "+" if c.im > 0 else ""
    return f"({_frac_str(c.re)}{sign}{im})"


# ---------------------------------------------------------------------------
# Series
# ---------------------------------------------------------------------------

Expo = tuple  # (alpha: tuple[int], beta: tuple[int], gamma: tuple[int])


def expo_degree(key: Expo) -> int:
    alpha, beta, gamma = key
    return sum(alpha) + sum(beta) + sum(gamma)


def grlex_key(key: Expo):
    """Graded-lexicographic sort key on an exponent triple."""
    return (expo_degree(key), key[0] + key[1] + key[2])


def _compositions(total: int, parts: int) -> Iterator[tuple]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def monomials_upto(m: int, n: int, budget: int) -> list:
    """All exponent triples of total degree <= budget, in graded-lex order."""
    out = []
    nvars = 2 * m + n
    for deg in range(budget + 1):
        block = sorted(_compositions(deg, nvars))
        for flat in block:
            out.append((flat[:m], flat[m : 2 * m], flat[2 * m :]))
    return out


class SeriesError(ValueError):
    pass


class Series:
    """A sparse polynomial over the Gaussian rationals with a degree budget.

    ``terms`` maps exponent triples (alpha, beta, gamma) to nonzero
    coefficients; alpha/beta index z/zb powers, gamma indexes x powers.
    """

    __slots__ = ("m", "n", "budget", "terms")

    def __init__(self, m: int, n: int, budget: int, terms=None):
        if m < 0 or n < 0 or budget < 0:
            raise SeriesError("m, n and budget must be nonnegative")
        self.m = m
        self.n = n
        self.budget = budget
        clean = {}
        for key, coeff in (terms or {}).items():
            alpha, beta, gamma = key
            if len(alpha) != m or len(beta) != m or len(gamma) != n:
                raise SeriesError(f"exponent triple {key} does not match (m={m}, n={n})")
            if not isinstance(coeff, GaussianRational):
                coeff = GaussianRational(coeff)
            if not coeff:
                continue
            if expo_degree(key) > budget:
                raise SeriesError(
                    f"term of degree {expo_degree(key)} exceeds budget {budget}"
                )
            clean[(tuple(alpha), tuple(beta), tuple(gamma))] = coeff
        self.terms = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, m, n, budget=0):
        return cls(m, n, budget)

    @classmethod
    def constant(cls, m, n, value, budget=0):
        key = ((0,) * m, (0,) * m, (0,) * n)
        return cls(m, n, budget, {key: value})

    @classmethod
    def one(cls, m, n, budget=0):
        return cls.constant(m, n, ONE, budget)

    @classmethod
    def variable(cls, m, n, kind: str, index: int, budget=1):
        """The coordinate function z<k>, zb<k> or x<k> (1-based index)."""
        limit = {"z": m, "zb": m, "x": n}.get(kind)
        if limit is None:
            raise SeriesError(f"unknown variable kind {kind!r}")
        if not 1 <= index <= limit:
            raise SeriesError(f"variable {kind}{index} out of range (max {limit})")
        alpha = [0] * m
        beta = [0] * m
        gamma = [0] * n
        if kind == "z":
            alpha[index - 1] = 1
        elif kind == "zb":
            beta[index - 1] = 1
        else:
            gamma[index - 1] = 1
        return cls(m, n, budget, {(tuple(alpha), tuple(beta), tuple(gamma)): ONE})

    # -- structure -----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Largest total degree among stored terms (0 for the zero series)."""
        if not self.terms:
            return 0
        return max(expo_degree(k) for k in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def constant_term(self) -> GaussianRational:
        key = ((0,) * self.m, (0,) * self.m, (0,) * self.n)
        return self.terms.get(key, ZERO)

    @property
    def is_unit(self) -> bool:
        return bool(self.constant_term)

    def with_budget(self, budget: int) -> "Series":
        """Same series under a new budget cap; terms must already fit."""
        if budget == self.budget:
            return self
        return Series(self.m, self.n, budget, self.terms)

    def _same_space(self, other: "Series"):
        if self.m != other.m or self.n != other.n:
            raise SeriesError(
                f"variable mismatch: ({self.m},{self.n}) vs ({other.m},{other.n})"
            )

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Series") -> "Series":
        self._same_space(other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            acc = terms.get(key, ZERO) + coeff
            if acc:
                terms[key] = acc
            else:
                terms.pop(key, None)
        return Series(self.m, self.n, max(self.budget, other.budget), terms)

    def __neg__(self):
        return Series(
            self.m, self.n, self.budget, {k: -c for k, c in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Series":
        c = _coerce(c)
        if c is None:
            raise SeriesError("scale expects a scalar")
        if not c:
            return Series(self.m, self.n, self.budget)
        return Series(
            self.m, self.n, self.budget, {k: v * c for k, v in self.terms.items()}
        )

    def mul(self, other: "Series", out_budget: int | None = None) -> "Series":
        """Product, discarding terms of total degree > out_budget.

        With the default ``out_budget=None`` the product is exact and the
        result budget is the sum of the factor budgets.
        """
        self._same_space(other)
        if out_budget is None:
            out_budget = self.budget + other.budget
        acc: dict = {}
        for (a1, b1, g1), c1 in self.terms.items():
            d1 = sum(a1) + sum(b1) + sum(g1)
            for (a2, b2, g2), c2 in other.terms.items():
                if d1 + sum(a2) + sum(b2) + sum(g2) > out_budget:
                    continue
                key = (
                    tuple(x + y for x, y in zip(a1, a2)),
                    tuple(x + y for x, y in zip(b1, b2)),
                    tuple(x + y for x, y in zip(g1, g2)),
                )
                v = acc.get(key, ZERO) + c1 * c2
                if v:
                    acc[key] = v
                else:
                    acc.pop(key, None)
        return Series(self.m, self.n, out_budget, acc)

    def __mul__(self, other):
        if isinstance(other, Series):
            return self.mul(other)
        c = _coerce(other)
        if c is None:
            return NotImplemented
        return self.scale(c)

    def __rmul__(self, other):
        c = _coerce(other)
        if c is None:
            return NotImplemented
        return self.scale(c)

    def power(self, k: int, out_budget: int | None = None) -> "Series":
        if k < 0:
            raise SeriesError("negative power; invert first")
        result = Series.one(self.m, self.n)
        for _ in range(k):
            result = result.mul(self, out_budget=out_budget)
        return result

    def deriv(self, kind: str, index: int) -> "Series":
        """Formal partial derivative; keeps the input budget."""
        limit = {"z": self.m, "zb": self.m, "x": self.n}.get(kind)
        if limit is None:
            raise SeriesError(f"unknown variable kind {kind!r}")
        if not 1 <= index <= limit:
            raise SeriesError(f"variable {kind}{index} out of range (max {limit})")
        slot = {"z": 0, "zb": 1, "x": 2}[kind]
        i = index - 1
        terms = {}
        for key, coeff in self.terms.items():
            e = key[slot][i]
            if e == 0:
                continue
            vec = list(key[slot])
            vec[i] = e - 1
            new = list(key)
            new[slot] = tuple(vec)
            terms[tuple(new)] = coeff * e
        return Series(self.m, self.n, self.budget, terms)

    def conj(self) -> "Series":
        """Formal conjugation: swap z/zb exponents, conjugate coefficients."""
        return Series(
            self.m,
            self.n,
            self.budget,
            {(b, a, g): c.conjugate() for (a, b, g), c in self.terms.items()},
        )

    def invert(self, out_budget: int | None = None) -> "Series":
        """Multiplicative inverse up to out_budget, by Neumann expansion.

        Requires a nonzero constant term; otherwise the function vanishes at
        the origin and no rescaling is available.
        """
        c0 = self.constant_term
        if not c0:
            raise SeriesError("series is not a unit: function vanishes, cannot invert")
        if out_budget is None:
            out_budget = self.budget
        inv0 = c0.inverse()
        # h = c0 (1 - u), u with zero constant term; 1/h = (1/c0) sum u^k.
        u = Series.one(self.m, self.n) - self.scale(inv0)
        acc = Series.one(self.m, self.n, out_budget)
        pw = Series.one(self.m, self.n)
        for _ in range(out_budget):
            pw = pw.mul(u, out_budget=out_budget)
            if pw.is_zero:
                break
            acc = acc + pw
        return acc.scale(inv0).with_budget(out_budget)

    def truncated(self, out_budget: int) -> "Series":
        """Drop all terms of total degree > out_budget."""
        return Series(
            self.m,
            self.n,
            out_budget,
            {k: c for k, c in self.terms.items() if expo_degree(k) <= out_budget},
        )

    # -- comparison / io -----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.m, self.n) == (other.m, other.n) and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, self.n, frozenset(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return f"Series({self.m},{self.n},{self.budget}; {format_series(self)})"

    @classmethod
    def parse(cls, text: str, m: int, n: int, budget: int) -> "Series":
        return parse_series(text, m, n, budget)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def _format_monomial(key: Expo) -> str:
    alpha, beta, gamma = key
    parts = []
    for name, vec in (("z", alpha), ("zb", beta), ("x", gamma)):
        for i, e in enumerate(vec):
            if e == 0:
                continue
            parts.append(f"{name}{i + 1}" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts)


def format_series(s: Series) -> str:
    if s.is_zero:
        return "0"
    chunks = []
    for key, coeff in s.sorted_terms():
        mono = _format_monomial(key)
        cstr = format_scalar(coeff)
        if mono:
            if cstr == "1":
                body = mono
            elif cstr == "-1":
                body = "-" + mono
            else:
                body = f"{cstr}*{mono}"
        else:
            body = cstr
        if not chunks:
            chunks.append(body)
        elif body.startswith("-"):
            chunks.append(" - " + body[1:])
        else:
            chunks.append(" + " + body)
    return "".join(chunks)


class SeriesParseError(SeriesError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text: str):
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()/":
            toks.append(_Tok(ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(_Tok("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum()):
                j += 1
            toks.append(_Tok("name", text[i:j], i))
            i = j
            continue
        raise SeriesParseError(f"unexpected character {ch!r}", i)
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    """Recursive-descent parser for the series text grammar.

    grammar:  series  := [sign] term (('+'|'-') term)*
              term    := factor ('*' factor)*
              factor  := number ['i'] | 'i' | '(' series ')' | var ['^' int]
              number  := int ['/' int]
              var     := z<k> | zb<k> | x<k>
    """

    def __init__(self, text, m, n, budget):
        self.toks = _tokenize(text)
        self.k = 0
        self.m = m
        self.n = n
        self.budget = budget

    def peek(self):
        return self.toks[self.k]

    def take(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def parse(self) -> Series:
        s = self.series()
        t = self.peek()
        if t.kind != "end":
            raise SeriesParseError(f"unexpected {t.text!r}", t.pos)
        for key in s.terms:
            if expo_degree(key) > self.budget:
                raise SeriesError(
                    f"term {_format_monomial(key)} of degree {expo_degree(key)} "
                    f"exceeds budget {self.budget}"
                )
        return s

    def series(self) -> Series:
        sign = 1
        if self.peek().kind in "+-":
            sign = -1 if self.take().kind == "-" else 1
        acc = self.term().scale(sign)
        while self.peek().kind in "+-":
            op = self.take().kind
            t = self.term()
            acc = acc + (t.scale(-1) if op == "-" else t)
        return acc

    def term(self) -> Series:
        acc = self.factor()
        while True:
            if self.peek().kind == "*":
                self.take()
                acc = acc.mul(self.factor())
            elif self.peek().kind in ("name", "int", "("):
                # juxtaposition such as "2i" is handled inside factor; explicit
                # adjacency without '*' is rejected for clarity
                t = self.peek()
                raise SeriesParseError(f"expected operator before {t.text!r}", t.pos)
            else:
                return acc

    def factor(self) -> Series:
        t = self.peek()
        if t.kind == "(":
            self.take()
            inner = self.series()
            closing = self.take()
            if closing.kind != ")":
                raise SeriesParseError("expected ')'", closing.pos)
            return inner
        if t.kind == "int":
            num = self.number()
            if self.peek().kind == "name" and self.peek().text == "i":
                self.take()
                return Series.constant(self.m, self.n, GaussianRational(0, num))
            return Series.constant(self.m, self.n, GaussianRational(num))
        if t.kind == "name":
            if t.text == "i":
                self.take()
                return Series.constant(self.m, self.n, I)
            return self.variable()
        raise SeriesParseError(f"expected a coefficient or variable, got {t.text!r}", t.pos)

    def number(self) -> Fraction:
        t = self.take()
        num = int(t.text)
        if self.peek().kind == "/":
            self.take()
            d = self.take()
            if d.kind != "int":
                raise SeriesParseError("expected denominator", d.pos)
            return Fraction(num, int(d.text))
        return Fraction(num)

    def variable(self) -> Series:
        t = self.take()
        name = t.text
        for kind in ("zb", "z", "x"):
            if name.startswith(kind) and name[len(kind) :].isdigit():
                index = int(name[len(kind) :])
                try:
                    base = Series.variable(self.m, self.n, kind, index, budget=1)
                except SeriesError:
                    raise SeriesParseError(f"unknown variable {name!r}", t.pos) from None
                break
        else:
            raise SeriesParseError(f"unknown variable {name!r}", t.pos)
        if self.peek().kind == "^":
            self.take()
            e = self.take()
            if e.kind != "int":
                raise SeriesParseError("expected integer exponent", e.pos)
            return base.power(int(e.text))
        return base


def parse_series(text: str, m: int, n: int, budget: int) -> Series:
    """Parse the series text grammar; raises SeriesParseError with a position."""
    s = _Parser(text, m, n, budget).parse()
    return Series(m, n, budget, s.terms)
