"""Cohomology dimensions by exact rank computations.

Forms at a fixed budget are vectorised over the deterministic basis of
``forms.enumerate_basis``; operators become sparse matrices and every
cohomology group is a kernel-modulo-image quotient of exact subspaces.

Budget semantics ("truncation cohomology"): the group at budget D uses the
kernel on budget-D forms and the image of sources at budget D - gap (gap =
max(deg f - 1, 0)), so the image lands inside budget D with no truncation and
the inclusion image <= kernel is exact.  An optional nonnegative ``slack``
lets the image come from deeper sources (budget D - gap + slack), after which
it is intersected with the budget-D block; this matters for untwisted
exactness, where antiderivatives need one extra degree.  All of this
approximates the smooth theory: stabilisation across budgets is reported,
never assumed.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .algebra import GaussianRational, Series, monomials_upto
from .forms import FoliatedForm, FoliationModel, basis_form
from .operators import (
    FoliatedMorphism,
    dbar,
    dbar_f,
    dbar_f_k,
    partial,
    partial_f,
    pullback,
    tilde_dbar,
    twist_gap,
)
from .linalg import (
    Matrix,
    Subspace,
    column_space,
    hstack,
    kernel_basis,
    quotient_dim,
    rank,
    solve,
    span_restricted_to,
    vstack,
)


class BudgetContractError(ValueError):
    pass


class NotClosedError(ValueError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


# ---------------------------------------------------------------------------
# Vectorisation
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _basis_cached(m: int, n: int, p: int, q: int, budget: int):
    from itertools import combinations

    if p < 0 or q < 0 or p > m or q > m or budget < 0:
        return ()
    monos = monomials_upto(m, n, budget)
    out = []
    for A in combinations(range(1, m + 1), p):
        for B in combinations(range(1, m + 1), q):
            for e in monos:
                out.append((A, B, e))
    return tuple(out)


@lru_cache(maxsize=None)
def _basis_index(m: int, n: int, p: int, q: int, budget: int):
    return {elem: i for i, elem in enumerate(_basis_cached(m, n, p, q, budget))}


def space_basis(model: FoliationModel, p: int, q: int, budget: int):
    return _basis_cached(model.m, model.n, p, q, budget)


def space_dim(model: FoliationModel, p: int, q: int, budget: int) -> int:
    return len(_basis_cached(model.m, model.n, p, q, budget))


def vectorize(phi: FoliatedForm, budget: int) -> tuple:
    """Coordinates of phi over the (p,q) basis at the given budget."""
    model = phi.model
    idx = _basis_index(model.m, model.n, phi.p, phi.q, budget)
    out = [GaussianRational(0)] * len(idx)
    for (A, B), series in phi.coeffs.items():
        for expo, coeff in series.terms.items():
            pos = idx.get((A, B, expo))
            if pos is None:
                raise BudgetContractError(
                    f"form term {(A, B, expo)} does not fit the budget-{budget} basis"
                )
            out[pos] = coeff
    return tuple(out)


def form_from_vector(model: FoliationModel, p: int, q: int, budget: int, vec) -> FoliatedForm:
    basis = _basis_cached(model.m, model.n, p, q, budget)
    coeffs: dict = {}
    for pos, coeff in enumerate(vec):
        if not coeff:
            continue
        A, B, expo = basis[pos]
        series = coeffs.get((A, B))
        term = Series(model.m, model.n, budget, {expo: coeff})
        coeffs[(A, B)] = term if series is None else series + term
    return FoliatedForm(model, p, q, coeffs, budget)


def inclusion_positions(model: FoliationModel, p: int, q: int, small: int, big: int):
    """Positions of the budget-``small`` basis inside the budget-``big`` one."""
    idx = _basis_index(model.m, model.n, p, q, big)
    return [idx[e] for e in _basis_cached(model.m, model.n, p, q, small)]


def inclusion_matrix(model: FoliationModel, p: int, q: int, small: int, big: int) -> Matrix:
    pos = inclusion_positions(model, p, q, small, big)
    rows = space_dim(model, p, q, big)
    return Matrix(rows, len(pos), {(r, j): 1 for j, r in enumerate(pos)})


# ---------------------------------------------------------------------------
# Operator matrices
# ---------------------------------------------------------------------------

_OPS = {
    "dbar": (0, 1, False),
    "partial": (1, 0, False),
    "dbar_f": (0, 1, True),
    "partial_f": (1, 0, True),
    "dbar_f_k": (0, 1, True),
}


def apply_operator(tag: str, phi: FoliatedForm, k: int | None = None) -> FoliatedForm:
    if tag == "dbar":
        return dbar(phi)
    if tag == "partial":
        return partial(phi)
    if tag == "dbar_f":
        return dbar_f(phi)
    if tag == "partial_f":
        return partial_f(phi)
    if tag == "dbar_f_k":
        if k is None:
            raise ValueError("dbar_f_k needs the integer k")
        return dbar_f_k(phi, k)
    raise ValueError(f"unknown operator tag {tag!r}")


def operator_gap(tag: str, model: FoliationModel) -> int:
    return twist_gap(model.f) if _OPS[tag][2] else 0


def operator_matrix(
    tag: str,
    model: FoliationModel,
    p: int,
    q: int,
    in_budget: int,
    out_budget: int,
    k: int | None = None,
) -> Matrix:
    """Matrix of the operator from the (p,q) basis at in_budget.

    Column j holds the coordinates of the operator applied to basis element
    j, over the target-bidegree basis at out_budget.  Requires
    out_budget >= in_budget + gap so no term ever falls outside the target
    basis.
    """
    if tag not in _OPS:
        raise ValueError(f"unknown operator tag {tag!r}")
    dp, dq, _ = _OPS[tag]
    gap = operator_gap(tag, model)
    if out_budget < in_budget + gap:
        raise BudgetContractError(
            f"budget contract violated: out {out_budget} < in {in_budget} + gap {gap}"
        )
    in_basis = _basis_cached(model.m, model.n, p, q, in_budget)
    out_idx = _basis_index(model.m, model.n, p + dp, q + dq, out_budget)
    entries = {}
    for j, elem in enumerate(in_basis):
        image = apply_operator(tag, basis_form(model, elem, in_budget), k)
        for (A, B), series in image.coeffs.items():
            for expo, coeff in series.terms.items():
                pos = out_idx.get((A, B, expo))
                if pos is None:
                    raise BudgetContractError(
                        f"operator output term {(A, B, expo)} exceeds out budget {out_budget}"
                    )
                entries[(pos, j)] = coeff
    return Matrix(len(out_idx), len(in_basis), entries)


def pullback_matrix(
    mu: FoliatedMorphism, p: int, q: int, in_budget: int, out_budget: int
) -> Matrix:
    """Matrix of mu* from target (p,q,in_budget) to source (p,q,out_budget)."""
    if out_budget < mu.substitution_budget(in_budget, p, q):
        raise BudgetContractError(
            "pullback out budget too small for exact substitution"
        )
    in_basis = _basis_cached(mu.target.m, mu.target.n, p, q, in_budget)
    out_idx = _basis_index(mu.source.m, mu.source.n, p, q, out_budget)
    entries = {}
    for j, elem in enumerate(in_basis):
        image = pullback(mu, basis_form(mu.target, elem, in_budget))
        for (A, B), series in image.coeffs.items():
            for expo, coeff in series.terms.items():
                entries[(out_idx[(A, B, expo)], j)] = coeff
    return Matrix(len(out_idx), len(in_basis), entries)


def _composed_matrix(model, p, q, in_budget, mid_budget, out_budget):
    """partial_f after dbar_f from (p,q); checked against direct assembly."""
    B = operator_matrix("dbar_f", model, p, q, in_budget, mid_budget)
    A = operator_matrix("partial_f", model, p, q + 1, mid_budget, out_budget)
    C = A.mul(B)
    direct = {}
    out_idx = _basis_index(model.m, model.n, p + 1, q + 1, out_budget)
    for j, elem in enumerate(_basis_cached(model.m, model.n, p, q, in_budget)):
        image = partial_f(dbar_f(basis_form(model, elem, in_budget)))
        for (A_, B_), series in image.coeffs.items():
            for expo, coeff in series.terms.items():
                direct[(out_idx[(A_, B_, expo)], j)] = coeff
    if Matrix(len(out_idx), C.cols, direct) != C:
        raise AssertionError("composed operator disagrees with matrix product")
    return C


# ---------------------------------------------------------------------------
# Dimension computations
# ---------------------------------------------------------------------------


def _trivial(model, p, q, budget) -> Subspace:
    return Subspace(space_dim(model, p, q, budget), [])


def _image_subspace(tag, model, p, q, src_budget, target_budget, slack, k=None):
    """Image of the operator from (p,q) sources at src_budget + slack,
    expressed in the target-bidegree basis at target_budget."""
    dp, dq, _ = _OPS[tag]
    tp, tq = p + dp, q + dq
    if p < 0 or q < 0 or src_budget + slack < 0:
        return _trivial(model, tp, tq, target_budget)
    src = src_budget + slack
    gap = operator_gap(tag, model)
    out = max(target_budget, src + gap)
    M = operator_matrix(tag, model, p, q, src, out, k)
    img = column_space(M)
    if out == target_budget:
        return img
    keep = inclusion_positions(model, tp, tq, target_budget, out)
    return span_restricted_to(img.basis, keep, img.ambient_dim)


def dolbeault_row(
    model: FoliationModel,
    p: int,
    q: int,
    D: int,
    slack: int = 0,
    k: int | None = None,
) -> dict:
    """One table row of twisted Dolbeault dimensions at budget D.

    Kernel at budget D, image from budget D - gap (+ slack); the value is a
    truncation approximation of the smooth-theory group.
    """
    tag = "dbar_f" if k is None else "dbar_f_k"
    gap = twist_gap(model.f)
    M = operator_matrix(tag, model, p, q, D, D + gap, k)
    K = kernel_basis(M)
    if q == 0:
        I = _trivial(model, p, q, D)
    else:
        I = _image_subspace(tag, model, p, q - 1, D - gap, D, slack, k)
    dim = quotient_dim(K, I)
    row = {
        "p": p,
        "q": q,
        "D": D,
        "ker": K.dim,
        "im": I.dim,
        "dim": dim,
        "budgets": {"kernel": D, "image_source": max(D - gap + slack, -1)},
    }
    if k is not None:
        row["k"] = k
    return row


def bott_chern_row(model: FoliationModel, p: int, q: int, D: int) -> dict:
    """Bott-Chern dimensions: both-kernels modulo the composed image."""
    gap = twist_gap(model.f)
    M1 = operator_matrix("partial_f", model, p, q, D, D + gap)
    M2 = operator_matrix("dbar_f", model, p, q, D, D + gap)
    K = kernel_basis(vstack(M1, M2))
    if p == 0 or q == 0 or D - 2 * gap < 0:
        I = _trivial(model, p, q, D)
    else:
        C = _composed_matrix(model, p - 1, q - 1, D - 2 * gap, D - gap, D)
        I = column_space(C)
    dim = quotient_dim(K, I)
    return {
        "p": p,
        "q": q,
        "D": D,
        "ker": K.dim,
        "im": I.dim,
        "dim": dim,
        "budgets": {"kernel": D, "image_source": D - 2 * gap},
    }


def aeppli_row(model: FoliationModel, p: int, q: int, D: int) -> dict:
    """Aeppli dimensions: kernel of the composition modulo the two images."""
    gap = twist_gap(model.f)
    C = _composed_matrix(model, p, q, D, D + gap, D + 2 * gap)
    K = kernel_basis(C)
    columns = []
    ambient = space_dim(model, p, q, D)
    if p >= 1 and D - gap >= 0:
        Mp = operator_matrix("partial_f", model, p - 1, q, D - gap, D)
        columns.extend(Mp.column(j) for j in range(Mp.cols))
    if q >= 1 and D - gap >= 0:
        Md = operator_matrix("dbar_f", model, p, q - 1, D - gap, D)
        columns.extend(Md.column(j) for j in range(Md.cols))
    I = Subspace.from_span(columns, ambient)
    dim = quotient_dim(K, I)
    return {
        "p": p,
        "q": q,
        "D": D,
        "ker": K.dim,
        "im": I.dim,
        "dim": dim,
        "budgets": {"kernel": D, "image_source": D - gap},
    }


def canonical_map_row(model: FoliationModel, p: int, q: int, D: int) -> dict:
    """Rank of the canonical homomorphism Bott-Chern -> Dolbeault at (p,q,D).

    Representatives of a Bott-Chern class are already dbar_f-closed; the map
    sends the class to its Dolbeault class.  Well-definedness (the Bott-Chern
    image is contained in the Dolbeault image) is asserted.
    """
    gap = twist_gap(model.f)
    M1 = operator_matrix("partial_f", model, p, q, D, D + gap)
    M2 = operator_matrix("dbar_f", model, p, q, D, D + gap)
    K_bc = kernel_basis(vstack(M1, M2))
    if p == 0 or q == 0 or D - 2 * gap < 0:
        I_bc = _trivial(model, p, q, D)
    else:
        I_bc = column_space(_composed_matrix(model, p - 1, q - 1, D - 2 * gap, D - gap, D))
    K_d = kernel_basis(M2)
    if q == 0:
        I_d = _trivial(model, p, q, D)
    else:
        I_d = _image_subspace("dbar_f", model, p, q - 1, D - gap, D, 0)
    ambient = space_dim(model, p, q, D)
    if I_bc.dim:
        both = Matrix.from_columns(list(I_d.basis) + list(I_bc.basis), ambient)
        if rank(both) != I_d.dim:
            raise AssertionError(
                "canonical map ill-defined: Bott-Chern image escapes the Dolbeault image"
            )
    if K_bc.dim:
        mixed = Matrix.from_columns(list(I_d.basis) + list(K_bc.basis), ambient)
        image_rank = rank(mixed) - I_d.dim
    else:
        image_rank = 0
    return {
        "p": p,
        "q": q,
        "D": D,
        "rank": image_rank,
        "domain": quotient_dim(K_bc, I_bc),
        "codomain": quotient_dim(K_d, I_d),
    }


VARIANTS = ("dolbeault", "k", "bc", "aeppli", "canonical")


def variant_row(model, variant, p, q, D, slack=0, k=None) -> dict:
    if variant == "dolbeault":
        return dolbeault_row(model, p, q, D, slack)
    if variant == "k":
        if k is None:
            raise ValueError("variant 'k' needs the integer k")
        return dolbeault_row(model, p, q, D, slack, k)
    if variant == "bc":
        return bott_chern_row(model, p, q, D)
    if variant == "aeppli":
        return aeppli_row(model, p, q, D)
    if variant == "canonical":
        return canonical_map_row(model, p, q, D)
    raise ValueError(f"unknown variant {variant!r}")


def cohomology_grid(
    model: FoliationModel,
    variant: str,
    p_range,
    q_range,
    d_range,
    slack: int = 0,
    k: int | None = None,
) -> list:
    """Grid of rows in deterministic (p, q, D) order with stabilisation flags.

    A row is flagged stable when its value does not change from budget D to
    D + 1; instability is a diagnostic, not an error.
    """
    rows = []
    for p in p_range:
        for q in q_range:
            for D in d_range:
                row = variant_row(model, variant, p, q, D, slack, k)
                nxt = variant_row(model, variant, p, q, D + 1, slack, k)
                key = "rank" if variant == "canonical" else "dim"
                row["stable"] = row[key] == nxt[key]
                rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# The Aeppli pairing statements
# ---------------------------------------------------------------------------


def _sample_kernel_form(rng, model, p, q, D, kernel: Subspace):
    if kernel.dim == 0:
        return FoliatedForm.zero(model, p, q, D)
    coeffs = [GaussianRational(Fraction(rng.randint(-3, 3))) for _ in kernel.basis]
    vec = [GaussianRational(0)] * kernel.ambient_dim
    for c, b in zip(coeffs, kernel.basis):
        if not c:
            continue
        vec = [acc + c * x for acc, x in zip(vec, b)]
    return form_from_vector(model, p, q, D, vec)


def pairing_check(
    model: FoliationModel,
    p: int,
    q: int,
    r: int,
    s: int,
    trials: int,
    seed: int,
) -> dict:
    """Randomised verification of the three wedge-closure statements behind
    the Bott-Chern x Aeppli pairing.

    (a) a both-closed form wedge a (partial_f dbar_f)-closed form is
        (partial_f dbar_f)-closed;
    (b) a both-closed form wedge an (im partial_f + im dbar_f) element stays
        in im partial_f + im dbar_f, with the primitive exhibited;
    (c) a (partial_f dbar_f)-exact form wedge a (partial_f dbar_f)-closed
        form lies in im partial_f + im dbar_f, certified by the explicit
        half-difference primitive; the displayed primitive is mixed-bidegree
        and is applied componentwise.

    Failures are findings in the report, not exceptions.
    """
    import random

    from .sampling import random_form

    rng = random.Random(seed)
    D = model.budget
    gap = twist_gap(model.f)
    stacked = vstack(
        operator_matrix("partial_f", model, p, q, D, D + gap),
        operator_matrix("dbar_f", model, p, q, D, D + gap),
    )
    closed_kernel = kernel_basis(stacked)
    dd_kernel = kernel_basis(_composed_matrix(model, r, s, D, D + gap, D + 2 * gap))
    results = {
        name: {"cases": 0, "violations": 0, "first_counterexample": None}
        for name in ("closed_wedge_ddclosed", "closed_wedge_exact", "ddexact_wedge_ddclosed")
    }

    def record(name, ok, detail):
        entry = results[name]
        entry["cases"] += 1
        if not ok:
            entry["violations"] += 1
            if entry["first_counterexample"] is None:
                entry["first_counterexample"] = detail

    half = GaussianRational(Fraction(1, 2))
    for case in range(trials):
        phi = _sample_kernel_form(rng, model, p, q, D, closed_kernel)
        psi = _sample_kernel_form(rng, model, r, s, D, dd_kernel)
        # (a)
        w = phi.wedge(psi)
        ok = partial_f(dbar_f(w)).is_zero
        record("closed_wedge_ddclosed", ok, {"case": case})
        # (b)
        a = random_form(rng, model, r - 1, s, D)
        b = random_form(rng, model, r, s - 1, D)
        psi_exact = partial_f(a) + dbar_f(b)
        sign = -1 if phi.deg % 2 else 1
        target = phi.wedge(psi_exact)
        prim_a = phi.wedge(a).scale(sign)
        prim_b = phi.wedge(b).scale(sign)
        ok = (partial_f(prim_a) + dbar_f(prim_b)) == target
        record("closed_wedge_exact", ok, {"case": case})
        # (c)
        theta = random_form(rng, model, p, q, D)
        exact = partial_f(dbar_f(theta))
        target = exact.wedge(psi)
        tsign = -1 if theta.deg % 2 else 1
        b1 = dbar_f(theta).wedge(psi) - theta.wedge(dbar_f(psi)).scale(tsign)
        b2 = theta.wedge(partial_f(psi)).scale(tsign) - partial_f(theta).wedge(psi)
        recon = partial_f(b1.scale(half)) + dbar_f(b2.scale(half))
        record("ddexact_wedge_ddclosed", recon == target, {"case": case})
    total = sum(v["violations"] for v in results.values())
    return {
        "suite": "pairing",
        "bidegrees": {"p": p, "q": q, "r": r, "s": s},
        "seed": seed,
        "trials": trials,
        "identities": [
            {"name": name, **data} for name, data in sorted(results.items())
        ],
        "violations_total": total,
    }


# ---------------------------------------------------------------------------
# Primitive solving
# ---------------------------------------------------------------------------


def solve_primitive(
    tag: str,
    model: FoliationModel,
    target: FoliatedForm,
    slack: int = 0,
    k: int | None = None,
) -> FoliatedForm | None:
    """A certified preimage of ``target`` under the named operator, or None.

    The target must be closed (checked first).  The source space is the
    target budget minus the operator gap, enlarged by ``slack``; a None
    answer only reports budget exhaustion, never a disproof.
    """
    residual = apply_operator(tag, target, k)
    if not residual.is_zero:
        raise NotClosedError("target is not closed under the operator", residual)
    dp, dq, _ = _OPS[tag]
    sp, sq = target.p - dp, target.q - dq
    gap = operator_gap(tag, model)
    if sp < 0 or sq < 0:
        return FoliatedForm.zero(model, max(sp, 0), max(sq, 0)) if target.is_zero else None
    src = max(target.budget - gap, 0) + slack
    out = max(target.budget, src + gap)
    M = operator_matrix(tag, model, sp, sq, src, out, k)
    b = vectorize(target.with_budget(out), out)
    x = solve(M, b)
    if x is None:
        return None
    primitive = form_from_vector(model, sp, sq, src, x)
    if apply_operator(tag, primitive, k) != target:
        raise AssertionError("primitive certification failed")
    return primitive


def solve_primitive_tilde(
    mu: FoliatedMorphism,
    f_prime: Series,
    phi: FoliatedForm,
    psi: FoliatedForm,
    slack: int = 0,
) -> tuple[FoliatedForm, FoliatedForm] | None:
    """A certified tilde-primitive of a closed cone pair, or None.

    Solves tilde(phi1, psi1) = (phi, psi) with phi1 on the target at
    (p, q-1) and psi1 on the source at (p, q-2), searching budgets enlarged
    by ``slack``.
    """
    c1, c2 = tilde_dbar(phi, psi, mu, f_prime)
    if not (c1.is_zero and c2.is_zero):
        raise NotClosedError("cone pair is not tilde-closed", (c1, c2))
    p, q = phi.p, phi.q
    f_pulled = mu.pull_series(f_prime)
    gap_t = twist_gap(f_prime)
    gap_s = twist_gap(f_pulled)
    s_phi = max(phi.budget - gap_t, 0) + slack
    s_psi = max(psi.budget - gap_s, 0) + slack
    out_phi = max(phi.budget, s_phi + gap_t)
    out_psi = max(psi.budget, mu.substitution_budget(s_phi, p, q - 1), s_psi + gap_s)

    target_model = mu.target.with_twist(f_prime)
    source_model = mu.source.with_twist(f_pulled)
    M11 = operator_matrix("dbar_f", target_model, p, q - 1, s_phi, out_phi)
    M21 = pullback_matrix(mu, p, q - 1, s_phi, out_psi)
    if q >= 2:
        M22 = -operator_matrix("dbar_f", source_model, p, q - 2, s_psi, out_psi)
    else:
        M22 = Matrix.zero(space_dim(source_model, p, q - 1, out_psi), 0)
    top = hstack(M11, Matrix.zero(M11.rows, M22.cols))
    bottom = hstack(M21, M22)
    M = vstack(top, bottom)
    b = vectorize(phi.with_budget(out_phi), out_phi) + vectorize(
        psi.with_budget(out_psi), out_psi
    )
    x = solve(M, b)
    if x is None:
        return None
    phi1 = form_from_vector(target_model, p, q - 1, s_phi, x[: M11.cols])
    psi1 = form_from_vector(source_model, p, max(q - 2, 0), s_psi if q >= 2 else 0, x[M11.cols :])
    r1, r2 = tilde_dbar(phi1, psi1, mu, f_prime)
    if r1 != phi or r2 != psi:
        raise AssertionError("tilde primitive certification failed")
    return phi1, psi1
