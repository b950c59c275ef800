"""Foliated (p,q)-forms over a polynomial foliation model.

A scene is a FoliationModel: m leafwise complex variables, n transverse real
variables, a base degree budget D and a twist function f.  A FoliatedForm of
bidegree (p,q) stores, for each pair of strictly increasing index tuples
(A, B) with |A| = p and |B| = q, a Series coefficient; it represents

    sum_{A,B}  c_{A,B}(z, zb, x) dz^A ^ dzb^B.

Only increasing tuples are stored; any other arrangement of generators is
normalised at the boundary with the sign of the sorting permutation.
"""

from __future__ import annotations

import math
from itertools import combinations

from .algebra import GaussianRational, Series, SeriesError, monomials_upto

MultiIndex = tuple  # strictly increasing tuple of 1-based variable indices


class FormError(ValueError):
    pass


class FoliationModel:
    """Dimensions (m, n), base degree budget and the twist function f."""

    __slots__ = ("m", "n", "budget", "f")

    def __init__(self, m: int, n: int, budget: int, f: Series):
        if m < 1:
            raise FormError("need at least one leafwise variable")
        if n < 0 or budget < 0:
            raise FormError("n and budget must be nonnegative")
        if f.m != m or f.n != n:
            raise FormError("twist function does not match (m, n)")
        self.m = m
        self.n = n
        self.budget = budget
        self.f = f

    @classmethod
    def untwisted(cls, m, n, budget):
        return cls(m, n, budget, Series.one(m, n))

    def with_twist(self, f: Series) -> "FoliationModel":
        return FoliationModel(self.m, self.n, self.budget, f)

    @property
    def twist_gap(self) -> int:
        """Budget growth per twisted-operator application: max(deg f - 1, 0)."""
        return max(self.f.degree - 1, 0)

    def series(self, text: str, budget: int | None = None) -> Series:
        return Series.parse(text, self.m, self.n, self.budget if budget is None else budget)

    def __eq__(self, other):
        if not isinstance(other, FoliationModel):
            return NotImplemented
        return (self.m, self.n, self.budget, self.f) == (
            other.m,
            other.n,
            other.budget,
            other.f,
        )

    def __repr__(self):
        return f"FoliationModel(m={self.m}, n={self.n}, budget={self.budget}, f={self.f})"


def merge_indices(u: MultiIndex, v: MultiIndex):
    """Merge two strictly increasing tuples; return (sign, merged) or (0, None).

    The sign is the parity of the permutation sorting the concatenation u+v;
    a shared index yields (0, None).
    """
    sign = 1
    merged = []
    i = j = 0
    while i < len(u) and j < len(v):
        if u[i] == v[j]:
            return 0, None
        if u[i] < v[j]:
            merged.append(u[i])
            i += 1
        else:
            # v[j] jumps past the remaining entries of u
            if (len(u) - i) % 2 == 1:
                sign = -sign
            merged.append(v[j])
            j += 1
    merged.extend(u[i:])
    merged.extend(v[j:])
    return sign, tuple(merged)


def insert_index(a: int, v: MultiIndex):
    """Merge the single index a into v; (sign, merged) or (0, None)."""
    return merge_indices((a,), v)


class FoliatedForm:
    """A (p,q)-form with Series coefficients on increasing (A, B) pairs.

    The form carries an explicit coefficient budget; twisted operators enlarge
    it, and truncation only happens where an out_budget is requested.
    """

    __slots__ = ("model", "p", "q", "budget", "coeffs")

    def __init__(self, model: FoliationModel, p: int, q: int, coeffs=None, budget=None):
        if p < 0 or q < 0:
            raise FormError("negative bidegree")
        self.model = model
        self.p = p
        self.q = q
        self.budget = model.budget if budget is None else budget
        clean = {}
        out_of_range = p > model.m or q > model.m
        for (A, B), series in (coeffs or {}).items():
            A = tuple(A)
            B = tuple(B)
            if out_of_range:
                raise FormError("nonzero coefficients beyond top degree")
            _check_multi_index(A, p, model.m)
            _check_multi_index(B, q, model.m)
            if series.m != model.m or series.n != model.n:
                raise FormError("coefficient series does not match the model")
            if series.is_zero:
                continue
            clean[(A, B)] = series.with_budget(self.budget)
        self.coeffs = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, model, p, q, budget=None):
        return cls(model, p, q, {}, budget)

    @classmethod
    def from_series(cls, model, series: Series, budget=None):
        b = series.budget if budget is None else budget
        return cls(model, 0, 0, {((), ()): series}, b)

    @classmethod
    def generator(cls, model, A, B, coeff: Series | None = None, budget=None):
        """The form c * dz^A ^ dzb^B (c defaults to 1)."""
        if coeff is None:
            coeff = Series.one(model.m, model.n)
        b = coeff.budget if budget is None else budget
        return cls(model, len(A), len(B), {(tuple(A), tuple(B)): coeff}, b)

    # -- structure -----------------------------------------------------------

    @property
    def deg(self) -> int:
        """Total generator degree p + q (the weight in the twisted operators)."""
        return self.p + self.q

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, A, B) -> Series:
        return self.coeffs.get(
            (tuple(A), tuple(B)), Series.zero(self.model.m, self.model.n, self.budget)
        )

    def with_budget(self, budget: int) -> "FoliatedForm":
        return FoliatedForm(self.model, self.p, self.q, self.coeffs, budget)

    def bumped(self, extra: int) -> "FoliatedForm":
        return self.with_budget(self.budget + extra)

    def truncated(self, out_budget: int) -> "FoliatedForm":
        coeffs = {k: s.truncated(out_budget) for k, s in self.coeffs.items()}
        return FoliatedForm(self.model, self.p, self.q, coeffs, out_budget)

    # -- linear structure ----------------------------------------------------

    def _same_shape(self, other: "FoliatedForm"):
        if self.model.m != other.model.m or self.model.n != other.model.n:
            raise FormError("model mismatch")
        if not self.is_zero and not other.is_zero and (self.p, self.q) != (other.p, other.q):
            raise FormError(
                f"bidegree mismatch: ({self.p},{self.q}) vs ({other.p},{other.q})"
            )

    def __add__(self, other: "FoliatedForm") -> "FoliatedForm":
        self._same_shape(other)
        if self.is_zero and not other.is_zero:
            return other.with_budget(max(self.budget, other.budget))
        coeffs = dict(self.coeffs)
        for key, series in other.coeffs.items():
            acc = coeffs.get(key)
            acc = series if acc is None else acc + series
            if acc.is_zero:
                coeffs.pop(key, None)
            else:
                coeffs[key] = acc
        return FoliatedForm(self.model, self.p, self.q, coeffs, max(self.budget, other.budget))

    def __neg__(self):
        return FoliatedForm(
            self.model, self.p, self.q, {k: -s for k, s in self.coeffs.items()}, self.budget
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FoliatedForm":
        return FoliatedForm(
            self.model,
            self.p,
            self.q,
            {k: s.scale(c) for k, s in self.coeffs.items()},
            self.budget,
        )

    def mul_series(self, s: Series, out_budget: int | None = None) -> "FoliatedForm":
        """Multiply every coefficient by s (exact unless out_budget is given)."""
        b = self.budget + s.degree if out_budget is None else out_budget
        coeffs = {k: c.mul(s, out_budget=b) for k, c in self.coeffs.items()}
        return FoliatedForm(self.model, self.p, self.q, coeffs, b)

    # -- wedge product ---------------------------------------------------------

    def wedge(self, other: "FoliatedForm", out_budget: int | None = None) -> "FoliatedForm":
        if self.model.m != other.model.m or self.model.n != other.model.n:
            raise FormError("model mismatch")
        p, q = self.p + other.p, self.q + other.q
        budget = self.budget + other.budget if out_budget is None else out_budget
        if p > self.model.m or q > self.model.m:
            return FoliatedForm.zero(self.model, p, q, budget)
        # sign: move other's dz block (p2 generators) left past our dzb block
        # (q1 generators), then merge the A and B tuples.
        block = -1 if (other.p * self.q) % 2 else 1
        acc: dict = {}
        for (A1, B1), c1 in self.coeffs.items():
            for (A2, B2), c2 in other.coeffs.items():
                sa, A = merge_indices(A1, A2)
                if sa == 0:
                    continue
                sb, B = merge_indices(B1, B2)
                if sb == 0:
                    continue
                c = c1.mul(c2, out_budget=budget)
                if c.is_zero:
                    continue
                sign = block * sa * sb
                if sign < 0:
                    c = -c
                prev = acc.get((A, B))
                c = c if prev is None else prev + c
                if c.is_zero:
                    acc.pop((A, B), None)
                else:
                    acc[(A, B)] = c
        return FoliatedForm(self.model, p, q, acc, budget)

    # -- comparison / io -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FoliatedForm):
            return NotImplemented
        if self.is_zero and other.is_zero:
            return True
        return (self.p, self.q) == (other.p, other.q) and self.coeffs == other.coeffs

    def sorted_coeffs(self):
        return sorted(self.coeffs.items(), key=lambda kv: kv[0])

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for (A, B), series in self.sorted_coeffs():
            gens = [f"dz{a}" for a in A] + [f"dzb{b}" for b in B]
            gen = "^".join(gens)
            parts.append(f"({series})" + (" " + gen if gen else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"FoliatedForm(p={self.p}, q={self.q}, budget={self.budget}; {self})"

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "budget": self.budget,
            "terms": [
                {"A": list(A), "B": list(B), "coeff": str(series)}
                for (A, B), series in self.sorted_coeffs()
            ],
        }

    @classmethod
    def from_dict(cls, model: FoliationModel, data: dict) -> "FoliatedForm":
        budget = data.get("budget", model.budget)
        coeffs = {}
        for term in data.get("terms", []):
            A = tuple(term["A"])
            B = tuple(term["B"])
            series = Series.parse(term["coeff"], model.m, model.n, budget)
            prev = coeffs.get((A, B))
            coeffs[(A, B)] = series if prev is None else prev + series
        return cls(model, data["p"], data["q"], coeffs, budget)


def _check_multi_index(t: MultiIndex, length: int, m: int):
    if len(t) != length:
        raise FormError(f"multi-index {t} has length {len(t)}, expected {length}")
    for i, a in enumerate(t):
        if not 1 <= a <= m:
            raise FormError(f"index {a} out of range 1..{m}")
        if i and t[i - 1] >= a:
            raise FormError(f"multi-index {t} is not strictly increasing")


# ---------------------------------------------------------------------------
# Rescaling and bases
# ---------------------------------------------------------------------------


def rescale_power(phi: FoliatedForm, h: Series, out_budget: int | None = None) -> FoliatedForm:
    """Divide phi by h^(p+q), truncating at out_budget (default: phi.budget).

    Realises the comparison map between the twists f*h and f; h must be a
    unit.  Degree-(0,0) forms are returned unchanged.
    """
    if not h.is_unit:
        raise SeriesError("rescaling requires a non-vanishing (unit) function")
    w = phi.deg
    if w == 0:
        return phi
    b = phi.budget if out_budget is None else out_budget
    g = h.invert(out_budget=b).power(w, out_budget=b)
    coeffs = {k: c.mul(g, out_budget=b) for k, c in phi.coeffs.items()}
    return FoliatedForm(phi.model, phi.p, phi.q, coeffs, b)


def count_monomials(m: int, n: int, budget: int) -> int:
    """Monomials of total degree <= budget in 2m + n variables."""
    if budget < 0:
        return 0
    v = 2 * m + n
    return math.comb(budget + v, v)


def basis_dimension(model: FoliationModel, p: int, q: int, budget: int) -> int:
    if p < 0 or q < 0 or p > model.m or q > model.m or budget < 0:
        return 0
    return (
        math.comb(model.m, p)
        * math.comb(model.m, q)
        * count_monomials(model.m, model.n, budget)
    )


def enumerate_basis(model: FoliationModel, p: int, q: int, budget: int | None = None):
    """Ordered basis of the (p,q) space at the given budget.

    Elements are (A, B, expo) triples ordered lexicographically by (A, B) and
    graded-lexicographically on the monomial; the ordering is the contract all
    matrix assembly relies on.
    """
    if budget is None:
        budget = model.budget
    if p < 0 or q < 0 or p > model.m or q > model.m or budget < 0:
        return []
    monos = monomials_upto(model.m, model.n, budget)
    out = []
    for A in combinations(range(1, model.m + 1), p):
        for B in combinations(range(1, model.m + 1), q):
            for e in monos:
                out.append((A, B, e))
    return out


def basis_form(model: FoliationModel, element, budget: int) -> FoliatedForm:
    """The FoliatedForm corresponding to one basis element."""
    A, B, expo = element
    series = Series(model.m, model.n, budget, {expo: GaussianRational(1)})
    return FoliatedForm(model, len(A), len(B), {(A, B): series}, budget)
