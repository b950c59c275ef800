import random

import pytest

from leafcoh.algebra import GaussianRational, Series, parse_series
from leafcoh.forms import FoliationModel
from leafcoh.operators import FoliatedMorphism
from leafcoh.linalg import Matrix, rank
from leafcoh.sequences import (
    ChainMap,
    CochainComplex,
    CoverValidationError,
    MayerVietorisCover,
    SESValidationError,
    ShortExactSequence,
    _snake,
    _window_complex,
    _window_inclusion,
    complex_cohomology,
    corollary_boundary_report,
    degenerate_cover,
    delta_equals_pullback_check,
    direct_sum,
    laurent_cover,
    make_mv_ses,
    make_relative_complex,
    relative_les,
    snake_les,
)

from factories import random_ses


def G(x):
    return GaussianRational(x)


# ---------------------------------------------------------------------------
# Complex / chain map / SES validation
# ---------------------------------------------------------------------------


def test_cochain_complex_rejects_nonsquaring_differential():
    d0 = Matrix.identity(2)
    d1 = Matrix.identity(2)
    with pytest.raises(ValueError, match="d.d != 0"):
        CochainComplex((2, 2, 2), (d0, d1))


def test_cochain_complex_rejects_bad_shapes():
    with pytest.raises(ValueError, match="shape"):
        CochainComplex((2, 3), (Matrix.zero(2, 2),))


def test_chain_map_must_commute():
    cx = CochainComplex((1, 1), (Matrix.identity(1),))
    cy = CochainComplex((1, 1), (Matrix.zero(1, 1),))
    with pytest.raises(ValueError, match="commute"):
        ChainMap(cx, cy, [Matrix.identity(1), Matrix.identity(1)])


def test_complex_cohomology_of_window():
    # functions [0..D] -> one-forms [-1..D-1]: constants survive at grade 0,
    # the exponent -1 slot survives at grade 1
    cx = _window_complex(0, 3)
    h = complex_cohomology(cx)
    assert [g.dim for g in h] == [1, 1]


def test_snake_refuses_invalid_ses():
    left = CochainComplex((1,), ())
    middle = CochainComplex((1,), ())
    right = CochainComplex((1,), ())
    inject = ChainMap(left, middle, [Matrix.zero(1, 1)])  # not injective
    project = ChainMap(middle, right, [Matrix.identity(1)])
    ses = ShortExactSequence(left, middle, right, inject, project)
    with pytest.raises(SESValidationError):
        snake_les(ses)


@pytest.mark.parametrize("seed", range(40))
def test_snake_on_random_ses(seed):
    rng = random.Random(31000 + seed)
    ses, splits = random_ses(rng, grades=rng.choice([2, 3, 4]))
    rep = snake_les(ses)
    assert rep["exact_everywhere"]
    assert rep["alternating_sum_zero"]
    data = _snake(ses)
    for q, expected in enumerate(splits):
        if q + 1 < data.grades:
            assert rank(data.connecting[q]) == expected


def test_snake_les_zero_left_gives_isomorphisms():
    # left = 0: the projection induces isomorphisms and delta = 0
    rng = random.Random(4)
    dims = (2, 2)
    d = Matrix.zero(2, 2)
    middle = CochainComplex(dims, (d,))
    right = CochainComplex(dims, (d,))
    left = CochainComplex((0, 0), (Matrix.zero(0, 0),))
    inject = ChainMap(left, middle, [Matrix.zero(2, 0), Matrix.zero(2, 0)])
    project = ChainMap(middle, right, [Matrix.identity(2), Matrix.identity(2)])
    ses = ShortExactSequence(left, middle, right, inject, project)
    rep = snake_les(ses)
    assert rep["exact_everywhere"]
    data = _snake(ses)
    for q in range(2):
        assert rank(data.induced_project[q]) == data.right[q].dim == data.middle[q].dim
        assert rank(data.connecting[q]) == 0


def test_snake_les_acyclic_middle_makes_delta_iso():
    # middle = cone of the identity (acyclic); L sits in grade 1, R in grade
    # 0, so the connecting map H^0(R) -> H^1(L) must be an isomorphism
    left = CochainComplex((0, 1), (Matrix.zero(1, 0),))
    right = CochainComplex((1, 0), (Matrix.zero(0, 1),))
    middle = CochainComplex((1, 1), (Matrix.identity(1),))
    inject = ChainMap(left, middle, [Matrix.zero(1, 0), Matrix.identity(1)])
    project = ChainMap(middle, right, [Matrix.identity(1), Matrix.zero(0, 1)])
    ses = ShortExactSequence(left, middle, right, inject, project)
    rep = snake_les(ses)
    assert rep["exact_everywhere"]
    data = _snake(ses)
    assert all(g.dim == 0 for g in data.middle)
    assert rank(data.connecting[0]) == data.right[0].dim == data.left[1].dim == 1


# ---------------------------------------------------------------------------
# Relative (mapping cone) complexes
# ---------------------------------------------------------------------------


def test_relative_identity_morphism_is_acyclic():
    model = FoliationModel.untwisted(1, 0, 2)
    mu = FoliatedMorphism.identity(model)
    rc = make_relative_complex(mu, Series.one(1, 0), 0, 2)
    les = relative_les(rc)
    assert les["exact_everywhere"]
    cone_dims = [n["dim"] for n in les["nodes"] if "(mu)" in n["group"]]
    assert all(d == 0 for d in cone_dims)
    assert delta_equals_pullback_check(rc)["all_equal"]


def test_relative_zero_interaction_splits():
    # constant z-component kills the pullback at p >= 1: the cone cohomology
    # is the direct sum of the two sides
    src = FoliationModel.untwisted(1, 0, 2)
    tgt = FoliationModel.untwisted(1, 0, 2)
    mu = FoliatedMorphism(src, tgt, [Series.constant(1, 0, 5)], [])
    rc = make_relative_complex(mu, Series.one(1, 0), 1, 2)
    les = relative_les(rc)
    assert les["exact_everywhere"]
    data = _snake(rc.ses)
    for q in range(data.grades):
        assert data.middle[q].dim == data.right[q].dim + data.left[q].dim
    assert delta_equals_pullback_check(rc)["all_equal"]


@pytest.mark.parametrize("f_prime_text", ["1", "z1"])
def test_relative_square_morphism(f_prime_text):
    src = FoliationModel.untwisted(1, 0, 2)
    fp = parse_series(f_prime_text, 1, 0, 1)
    tgt = FoliationModel(1, 0, 2, fp)
    mu = FoliatedMorphism(src, tgt, [parse_series("z1^2", 1, 0, 2)], [])
    rc = make_relative_complex(mu, fp, 0, 2)
    les = relative_les(rc)
    assert les["exact_everywhere"]
    assert les["alternating_sum_zero"]
    assert delta_equals_pullback_check(rc)["all_equal"]
    rep = corollary_boundary_report(rc)
    assert rep["all_pass"], rep


def test_relative_mixed_dimensions():
    # source m=2 against target m=1 exercises unequal leaf dimensions
    src = FoliationModel.untwisted(2, 0, 1)
    tgt = FoliationModel.untwisted(1, 0, 1)
    mu = FoliatedMorphism(src, tgt, [parse_series("z1*z2", 2, 0, 2)], [])
    rc = make_relative_complex(mu, Series.one(1, 0), 0, 1)
    les = relative_les(rc)
    assert les["exact_everywhere"]
    rep = corollary_boundary_report(rc)
    assert rep["all_pass"], rep
    assert rep["m_source"] == 2 and rep["m_target"] == 1


def test_relative_with_transverse_variables():
    # x-dependent leafwise component and transverse map exercise both the
    # substitution budgets and the conjugated Jacobian entries
    src = FoliationModel.untwisted(1, 1, 1)
    fp = parse_series("1 + x1", 1, 1, 1)
    tgt = FoliationModel(1, 1, 1, fp)
    mu = FoliatedMorphism(
        src,
        tgt,
        [parse_series("z1 + z1*x1", 1, 1, 2)],
        [parse_series("x1^2", 1, 1, 2)],
    )
    rc = make_relative_complex(mu, fp, 0, 1)
    les = relative_les(rc)
    assert les["exact_everywhere"]
    assert les["alternating_sum_zero"]
    assert delta_equals_pullback_check(rc)["all_equal"]
    rep = corollary_boundary_report(rc)
    assert rep["all_pass"], rep


def test_relative_cone_vanishes_beyond_modeled_range():
    src = FoliationModel.untwisted(1, 0, 2)
    tgt = FoliationModel(1, 0, 2, parse_series("z1", 1, 0, 1))
    mu = FoliatedMorphism(src, tgt, [parse_series("z1^2", 1, 0, 2)], [])
    rc = make_relative_complex(mu, tgt.f, 0, 2)
    data = _snake(rc.ses)
    top = max(rc.m_source + 1, rc.m_target) + 1
    for q in range(top, data.grades):
        assert data.middle[q].dim == 0


@pytest.mark.parametrize("seed", range(12))
def test_relative_random_scene_sweep(seed):
    # random morphisms and twists; affine components when the source has two
    # leafwise variables so the budgets stay at desk scale
    rng = random.Random(52000 + seed)
    m_s = rng.choice([1, 1, 2])
    m_t = rng.choice([1, 2]) if m_s == 1 else 1
    n = rng.choice([0, 1]) if m_s == 1 else 0
    deg = 2 if (m_s, m_t) == (1, 1) and n == 0 else 1
    src = FoliationModel.untwisted(m_s, n, 1)
    tgt = FoliationModel.untwisted(m_t, n, 1)
    from leafcoh.sampling import random_morphism, random_series

    mu = random_morphism(rng, src, tgt, deg)
    fp = random_series(rng, m_t, n, 1, max_terms=2)
    p = rng.randint(0, m_t)
    rc = make_relative_complex(mu, fp, p, 1)
    les = relative_les(rc)
    assert les["exact_everywhere"]
    assert les["alternating_sum_zero"]
    assert delta_equals_pullback_check(rc)["all_equal"]


def test_relative_tilde_matrix_squares_to_zero():
    src = FoliationModel.untwisted(1, 0, 1)
    tgt = FoliationModel(1, 0, 1, parse_series("z1", 1, 0, 1))
    mu = FoliatedMorphism(src, tgt, [parse_series("z1^2", 1, 0, 2)], [])
    rc = make_relative_complex(mu, tgt.f, 0, 1)
    for q in range(len(rc.ses.middle.diffs) - 1):
        assert rc.ses.middle.diffs[q + 1].mul(rc.ses.middle.diffs[q]).is_zero


# ---------------------------------------------------------------------------
# Mayer-Vietoris
# ---------------------------------------------------------------------------


def test_laurent_cover_validates_and_is_exact():
    ses = make_mv_ses(laurent_cover(2))
    assert ses.validate() == []
    rep = snake_les(ses, labels=("M", "U+V", "UV"))
    assert rep["exact_everywhere"]
    assert rep["alternating_sum_zero"]


def test_laurent_cover_known_dims():
    ses = make_mv_ses(laurent_cover(3))
    data = _snake(ses)
    # window complexes keep one constant class and one residue-slot class
    assert [g.dim for g in data.left] == [1, 1]
    assert [g.dim for g in data.right] == [1, 1]


def test_degenerate_cover_fails_with_documented_finding():
    with pytest.raises(CoverValidationError) as err:
        make_mv_ses(degenerate_cover(2))
    conditions = {(f["grade"], f["condition"]) for f in err.value.findings}
    assert (0, "project_surjective") in conditions
    assert (1, "project_surjective") in conditions


def test_trivial_overlap_splits():
    # UV = 0 forces M = U + V; the sequence validates and the LES splits
    cu = _window_complex(0, 2)
    cv = _window_complex(0, 1)
    cm = direct_sum(cu, cv)
    cuv = CochainComplex((0, 0), (Matrix.zero(0, 0),))
    r_u = ChainMap(
        cm, cu, [Matrix(cu.dims[q], cm.dims[q], {(i, i): G(1) for i in range(cu.dims[q])}) for q in range(2)]
    )
    r_v = ChainMap(
        cm,
        cv,
        [
            Matrix(
                cv.dims[q],
                cm.dims[q],
                {(i, cu.dims[q] + i): G(1) for i in range(cv.dims[q])},
            )
            for q in range(2)
        ],
    )
    zero_uv = lambda cx: ChainMap(cx, cuv, [Matrix.zero(0, cx.dims[q]) for q in range(2)])
    cover = MayerVietorisCover(cm, cu, cv, cuv, r_u, r_v, zero_uv(cu), zero_uv(cv))
    ses = make_mv_ses(cover)
    rep = snake_les(ses)
    assert rep["exact_everywhere"]
    data = _snake(ses)
    for q in range(2):
        assert data.left[q].dim == data.middle[q].dim


def test_window_inclusion_is_chain_map():
    inner = _window_complex(0, 2)
    outer = _window_complex(-1, 3)
    cm = _window_inclusion(inner, outer, 0, -1)
    assert isinstance(cm, ChainMap)


def test_mv_restrictions_must_commute():
    cu = _window_complex(0, 2)
    bad = Matrix(cu.dims[1], cu.dims[0], {(0, 0): G(1), (1, 0): G(1)})
    with pytest.raises(ValueError, match="commute"):
        ChainMap(cu, cu, [Matrix.identity(cu.dims[0]), bad])
