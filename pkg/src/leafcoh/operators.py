"""Leafwise Cauchy-Riemann operators, their twisted variants, and pullbacks.

The twisted antiholomorphic operator on a (p,q)-form phi is

    dbar_f(phi) = f * dbar(phi) - (p+q) * dbar(f) ^ phi

and mirrors to partial_f; the generalised variant replaces the weight p+q by
p+q-k.  All of these square to zero exactly on polynomial coefficients; each
application enlarges the coefficient budget by max(deg f - 1, 0), which the
returned form records explicitly.

Morphisms between models substitute leafwise-holomorphic components for z,
transverse components for x, and map generators through the leafwise Jacobian
(dx-components of the ambient pullback do not exist in this calculus).
"""

from __future__ import annotations

from .algebra import Series
from .forms import FoliatedForm, FoliationModel, FormError, insert_index


def twist_gap(f: Series) -> int:
    """Budget growth of one application of an operator twisted by f."""
    return max(f.degree - 1, 0)


def dbar(phi: FoliatedForm) -> FoliatedForm:
    """Antiholomorphic leafwise exterior derivative: (p,q) -> (p,q+1).

    The fresh dzb^a is written in front and merged into place, so moving it
    past the p dz-generators contributes (-1)^p.
    """
    model = phi.model
    acc: dict = {}
    for (A, B), c in phi.coeffs.items():
        front = -1 if phi.p % 2 else 1
        for a in range(1, model.m + 1):
            dc = c.deriv("zb", a)
            if dc.is_zero:
                continue
            s, B2 = insert_index(a, B)
            if s == 0:
                continue
            _accumulate(acc, (A, B2), dc if front * s > 0 else -dc)
    return FoliatedForm(model, phi.p, phi.q + 1, acc, phi.budget)


def partial(phi: FoliatedForm) -> FoliatedForm:
    """Holomorphic leafwise exterior derivative: (p,q) -> (p+1,q)."""
    model = phi.model
    acc: dict = {}
    for (A, B), c in phi.coeffs.items():
        for a in range(1, model.m + 1):
            dc = c.deriv("z", a)
            if dc.is_zero:
                continue
            s, A2 = insert_index(a, A)
            if s == 0:
                continue
            _accumulate(acc, (A2, B), dc if s > 0 else -dc)
    return FoliatedForm(model, phi.p + 1, phi.q, acc, phi.budget)


def _accumulate(acc: dict, key, series: Series):
    prev = acc.get(key)
    series = series if prev is None else prev + series
    if series.is_zero:
        acc.pop(key, None)
    else:
        acc[key] = series


def _twisted(phi: FoliatedForm, f: Series, weight: int, raw) -> FoliatedForm:
    out_budget = phi.budget + twist_gap(f)
    first = raw(phi).mul_series(f, out_budget=out_budget)
    if weight == 0:
        return first.with_budget(out_budget)
    df = raw(FoliatedForm.from_series(phi.model, f))
    second = df.wedge(phi).scale(weight)
    return (first - second).with_budget(out_budget)


def dbar_f(phi: FoliatedForm, f: Series | None = None) -> FoliatedForm:
    """Twisted antiholomorphic operator; f defaults to the model twist."""
    f = phi.model.f if f is None else f
    return _twisted(phi, f, phi.deg, dbar)


def partial_f(phi: FoliatedForm, f: Series | None = None) -> FoliatedForm:
    """Twisted holomorphic operator; f defaults to the model twist."""
    f = phi.model.f if f is None else f
    return _twisted(phi, f, phi.deg, partial)


def dbar_f_k(phi: FoliatedForm, k: int, f: Series | None = None) -> FoliatedForm:
    """Generalised twisted operator with weight p + q - k."""
    f = phi.model.f if f is None else f
    return _twisted(phi, f, phi.deg - k, dbar)


# ---------------------------------------------------------------------------
# Morphisms of foliation models
# ---------------------------------------------------------------------------


class MorphismError(ValueError):
    pass


class FoliatedMorphism:
    """A polynomial map of models, leafwise holomorphic, foliation preserving.

    z-components are Series over the source with no zb-dependence (they may
    depend on x); x-components depend on x only.
    """

    __slots__ = ("source", "target", "z_components", "x_components")

    def __init__(self, source: FoliationModel, target: FoliationModel, z_components, x_components):
        if len(z_components) != target.m:
            raise MorphismError(f"expected {target.m} z-components, got {len(z_components)}")
        if len(x_components) != target.n:
            raise MorphismError(f"expected {target.n} x-components, got {len(x_components)}")
        for comp in z_components:
            if comp.m != source.m or comp.n != source.n:
                raise MorphismError("z-component does not live on the source model")
            if any(sum(beta) for (_, beta, _) in comp.terms):
                raise MorphismError("z-component must be holomorphic in z (no zb)")
        for comp in x_components:
            if comp.m != source.m or comp.n != source.n:
                raise MorphismError("x-component does not live on the source model")
            if any(sum(alpha) + sum(beta) for (alpha, beta, _) in comp.terms):
                raise MorphismError("x-component may depend on x only")
        self.source = source
        self.target = target
        self.z_components = tuple(z_components)
        self.x_components = tuple(x_components)

    @classmethod
    def identity(cls, model: FoliationModel):
        zc = [Series.variable(model.m, model.n, "z", a) for a in range(1, model.m + 1)]
        xc = [Series.variable(model.m, model.n, "x", j) for j in range(1, model.n + 1)]
        return cls(model, model, zc, xc)

    @property
    def degree(self) -> int:
        degs = [c.degree for c in self.z_components + self.x_components]
        return max(degs, default=0)

    def substitution_budget(self, coeff_budget: int, p: int, q: int) -> int:
        """Degree bound for the pullback of a (p,q)-form with given budget."""
        d = self.degree
        return coeff_budget * d + (p + q) * max(d - 1, 0)

    def pull_series(self, s: Series, out_budget: int | None = None) -> Series:
        """Compose a target-side function with the morphism (exact by default)."""
        if s.m != self.target.m or s.n != self.target.n:
            raise MorphismError("series does not live on the target model")
        m, n = self.source.m, self.source.n
        if out_budget is None:
            out_budget = s.budget * max(self.degree, 1) if self.degree else 0
        zbar_components = [c.conj() for c in self.z_components]
        acc = Series.zero(m, n, out_budget)
        for (alpha, beta, gamma), coeff in s.terms.items():
            term = Series.constant(m, n, coeff)
            for base, exps in (
                (self.z_components, alpha),
                (zbar_components, beta),
                (self.x_components, gamma),
            ):
                for comp, e in zip(base, exps):
                    for _ in range(e):
                        term = term.mul(comp, out_budget=out_budget)
            acc = acc + term
        return acc.with_budget(out_budget)

    def generator_image(self, a: int, anti: bool) -> FoliatedForm:
        """Leafwise image of dz'^a (anti=False) or dzb'^a (anti=True)."""
        m, n = self.source.m, self.source.n
        comp = self.z_components[a - 1]
        coeffs = {}
        for b in range(1, m + 1):
            dz = comp.deriv("z", b)
            if dz.is_zero:
                continue
            if anti:
                coeffs[((), (b,))] = dz.conj()
            else:
                coeffs[((b,), ())] = dz
        budget = max(self.degree - 1, 0)
        if anti:
            return FoliatedForm(self.source, 0, 1, coeffs, budget)
        return FoliatedForm(self.source, 1, 0, coeffs, budget)

    def __repr__(self):
        zs = ", ".join(str(c) for c in self.z_components)
        xs = ", ".join(str(c) for c in self.x_components)
        return f"FoliatedMorphism(z' = [{zs}]; x' = [{xs}])"


def pullback(mu: FoliatedMorphism, phi: FoliatedForm, out_budget: int | None = None) -> FoliatedForm:
    """Pull a target-side (p,q)-form back along mu.

    Coefficients are composed with mu and generators map through the leafwise
    Jacobian, dz'^a -> sum_b d(z'_a)/dz^b dz^b and its conjugate for dzb'^a.
    Substitution beyond out_budget is truncated silently (identities are
    stated up to budget).
    """
    if phi.model.m != mu.target.m or phi.model.n != mu.target.n:
        raise MorphismError("form does not live on the target model")
    exact = mu.substitution_budget(phi.budget, phi.p, phi.q)
    budget = exact if out_budget is None else out_budget
    result = FoliatedForm.zero(mu.source, phi.p, phi.q, budget)
    if phi.p > mu.source.m or phi.q > mu.source.m:
        return result
    for (A, B), c in phi.coeffs.items():
        piece = FoliatedForm.from_series(mu.source, mu.pull_series(c, out_budget=budget))
        for a in A:
            piece = piece.wedge(mu.generator_image(a, anti=False), out_budget=budget)
            if piece.is_zero:
                break
        else:
            for b in B:
                piece = piece.wedge(mu.generator_image(b, anti=True), out_budget=budget)
                if piece.is_zero:
                    break
        if not piece.is_zero:
            result = result + piece
    return result.with_budget(budget)


class MorphismPair:
    """A morphism together with a unit alpha satisfying mu*(f') = alpha * f.

    The compatibility is checked exactly at construction; f is the source
    model twist and f' the target model twist.
    """

    __slots__ = ("phi", "alpha")

    def __init__(self, phi: FoliatedMorphism, alpha: Series):
        if alpha.m != phi.source.m or alpha.n != phi.source.n:
            raise MorphismError("alpha must live on the source model")
        if not alpha.is_unit:
            raise MorphismError("alpha vanishes: not a valid pair")
        pulled = phi.pull_series(phi.target.f)
        expected = alpha.mul(phi.source.f)
        if pulled != expected:
            raise MorphismError(
                "pair constraint violated: mu*(f') != alpha * f "
                f"({pulled} vs {expected})"
            )
        self.phi = phi
        self.alpha = alpha


def pair_pullback(pair: MorphismPair, phi: FoliatedForm, out_budget: int | None = None) -> FoliatedForm:
    """Pull back along the pair: mu*(phi) / alpha^(p+q), truncated at budget.

    This is a cochain map from (target, dbar_{f'}) to (source, dbar_f).
    """
    mu = pair.phi
    pulled = pullback(mu, phi, out_budget=out_budget)
    w = phi.deg
    if w == 0:
        return pulled
    b = pulled.budget if out_budget is None else out_budget
    g = pair.alpha.invert(out_budget=b).power(w, out_budget=b)
    return pulled.mul_series(g, out_budget=b)


def tilde_dbar(
    phi: FoliatedForm,
    psi: FoliatedForm,
    mu: FoliatedMorphism,
    f_prime: Series,
) -> tuple[FoliatedForm, FoliatedForm]:
    """Mapping-cone differential: (phi, psi) -> (dbar_{f'} phi, mu* phi - dbar_{mu* f'} psi).

    phi lives on the target at (p,q), psi on the source at (p,q-1); the result
    pair sits at ((p,q+1), (p,q)).  Applying it twice gives (0,0) exactly.
    """
    if not phi.is_zero and not psi.is_zero:
        if (psi.p, psi.q) != (phi.p, phi.q - 1):
            raise FormError(
                f"cone pair bidegrees must be (p,q) and (p,q-1); "
                f"got ({phi.p},{phi.q}) and ({psi.p},{psi.q})"
            )
    first = dbar_f(phi, f_prime)
    f_pulled = mu.pull_series(f_prime)
    second = pullback(mu, phi) - dbar_f(psi, f_pulled)
    return first, second
