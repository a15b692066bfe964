import numpy as np
import pytest

from sigmaconics.census import sample_matrix_entries
from sigmaconics.fields import build_field
from sigmaconics.forms import (SesquiForm, absolute_mask, absolute_points,
                               collineation_images, congruence_transform,
                               fixed_points, induced_collineation, is_polarity,
                               is_reflexive, make_form, radicals)
from sigmaconics.linalg import mat_rank, mat_sigma
from sigmaconics.projective import projective_space

T8 = build_field(2, 1, 3, 1)
T4 = build_field(2, 1, 2, 1)
T27 = build_field(3, 1, 3, 1)

IDENT = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def rand_forms(tower, count, seed, invertible=None):
    entries = sample_matrix_entries(tower.order, seed, 0, count)
    for row in entries:
        if not row.any():
            continue
        form = make_form(tower, [int(x) for x in row])
        if invertible is None or (form.rank() == 3) == invertible:
            yield form


def test_evaluate_identities():
    f = SesquiForm(T8, IDENT)
    assert f.evaluate((1, 0, 0), (0, 1, 0)) == 0
    assert f.evaluate((1, 0, 0), (1, 0, 0)) == 1


def test_evaluate_semilinearity_laws():
    t = T27
    for form in rand_forms(t, 40, seed=11):
        x, y = (5, 17, 2), (9, 1, 20)
        base = form.evaluate(x, y)
        for a in (2, 7, 26):
            ax = tuple(t.mul(a, c) for c in x)
            ay = tuple(t.mul(a, c) for c in y)
            assert form.evaluate(ax, y) == t.mul(a, base)
            assert form.evaluate(x, ay) == t.mul(t.sigma(a), base)


def test_radicals_invertible_are_trivial():
    rp = radicals(SesquiForm(T8, IDENT))
    assert rp.rank == 3 and rp.left == () and rp.right == ()


def test_radicals_rank_one():
    rp = radicals(SesquiForm(T8, ((0, 0, 0), (0, 0, 0), (1, 2, 3))))
    assert rp.rank == 1 and len(rp.left) == 2 and len(rp.right) == 2


def test_radicals_normal_form_vertices():
    # zero first column and zero last row: right radical (1,0,0), left (0,0,1)
    rp = radicals(SesquiForm(T8, ((0, 1, 1), (0, 1, 0), (0, 0, 0))))
    assert rp.rank == 2
    assert rp.right == ((1, 0, 0),) and rp.left == ((0, 0, 1),)


def test_radical_dimensions_always_agree():
    for tower, seed in ((T8, 1), (T27, 2), (T4, 3)):
        for form in rand_forms(tower, 300, seed):
            rp = radicals(form)
            assert len(rp.left) == len(rp.right) == 3 - rp.rank
            twisted = mat_sigma(tower, form.matrix, tower.n - tower.m)
            assert mat_rank(tower, twisted) == rp.rank


def test_reflexive_bilinear_cases():
    t5 = build_field(5, 1, 1, 1)         # sigma is the identity here
    sym = SesquiForm(t5, ((1, 2, 0), (2, 3, 4), (0, 4, 1)))
    assert is_reflexive(sym)
    alt = SesquiForm(t5, ((0, 1, 2), (4, 0, 3), (3, 2, 0)))
    assert is_reflexive(alt)


def test_nonreflexive_rank2_form():
    form = SesquiForm(T8, ((0, 0, 1), (0, 1, 0), (0, 0, 0)))
    assert not is_reflexive(form)


def test_polarity_iff_reflexive_for_invertible():
    t16 = build_field(2, 2, 2, 1)        # sigma^2 = 1 available
    checked = 0
    for tower, seed in ((T4, 5), (t16, 6), (T8, 7)):
        for form in rand_forms(tower, 60, seed, invertible=True):
            assert is_polarity(form) == is_reflexive(form)
            checked += 1
    assert checked > 50


def test_polarity_iff_reflexive_exhaustive_2x2():
    # every invertible 2x2 matrix over F_4
    t = T4
    for a in t.elements():
        for b in t.elements():
            for c in t.elements():
                for d in t.elements():
                    if t.sub(t.mul(a, d), t.mul(b, c)) == 0:
                        continue
                    form = SesquiForm(t, ((a, b), (c, d)))
                    assert is_polarity(form) == is_reflexive(form)


def test_hermitian_identity_is_polarity():
    assert is_polarity(SesquiForm(T4, IDENT))
    assert not is_polarity(SesquiForm(T8, IDENT))   # sigma^2 != 1 on F_8
    with pytest.raises(ZeroDivisionError):
        is_polarity(SesquiForm(T8, ((0, 0, 1), (0, 1, 0), (0, 0, 0))))


def test_absolute_points_two_point_quadric():
    form = SesquiForm(T8, ((0, 1), (0, 0)))
    sp = projective_space(T8, 1)
    ids = absolute_points(form, sp).point_ids
    assert {sp.point_vec(i) for i in ids} == {(0, 1), (1, 0)}


def test_absolute_points_hermitian_curve_pg2_4():
    assert len(absolute_points(SesquiForm(T4, IDENT))) == 9


def test_absolute_set_scalar_invariant():
    for form in rand_forms(T27, 60, seed=13):
        m1 = absolute_mask(form)
        for rho in (2, 9, 26):
            assert np.array_equal(m1, absolute_mask(form.scaled(rho)))


def test_collineation_identity_when_sigma_squared_trivial():
    coll = induced_collineation(SesquiForm(T4, IDENT))
    assert len(fixed_points(coll)) == 21


def test_collineation_fixes_subplane_pg2_8():
    sp = projective_space(T8, 2)
    mask = absolute_mask(SesquiForm(T8, IDENT), sp)
    fixed = fixed_points(induced_collineation(SesquiForm(T8, IDENT)), sp)
    assert len(fixed) == 7
    assert set(fixed) == set(sp.canonical_subplane().point_ids)
    assert sum(1 for i in fixed if mask[i]) == 3


def test_collineation_permutes_absolute_set():
    sp = projective_space(T8, 2)
    for form in rand_forms(T8, 80, seed=17, invertible=True):
        mask = absolute_mask(form, sp)
        img = collineation_images(induced_collineation(form), sp)
        assert sorted(img) == list(range(sp.n_points))     # bijection
        assert np.array_equal(mask[img], mask)


def test_congruence_transform_preserves_cardinality():
    sp = projective_space(T27, 2)
    mats = [m for m in rand_forms(T27, 40, seed=19, invertible=True)]
    forms = [f for f in rand_forms(T27, 40, seed=23)]
    for form, mform in zip(forms, mats):
        b = congruence_transform(form, mform.matrix)
        ma, mb = absolute_mask(form, sp), absolute_mask(b, sp)
        assert ma.sum() == mb.sum()
        # the transformed set is the preimage of the original under x -> Mx
        t = T27
        from sigmaconics.linalg import mat_vec
        cols = np.array([mat_vec(t, mform.matrix, sp.point_vec(i))
                         for i in range(sp.n_points)], dtype=np.uint32)
        assert np.array_equal(mb, ma[sp.index_rows(cols)])


def test_make_form_shapes():
    assert make_form(T8, [1, 0, 0, 1]).d == 1
    assert make_form(T8, list(range(9))).d == 2
    with pytest.raises(ValueError):
        make_form(T8, [1, 2, 3])
