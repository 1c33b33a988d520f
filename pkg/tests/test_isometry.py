import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpconv.errors import NotIsometry, P2Unsupported, POutOfRange
from lpconv.isometry import (LampertiForm, LpContext, Operator, clarkson_gap,
                             interplay_deviation, is_disjointness_preserving,
                             lamperti_decompose, lamperti_distance,
                             lamperti_operator, mult_isometry,
                             transform_isometry, vector_norm)
from lpconv.measure import (BooleanAutomorphism, FiniteMeasureAlgebra,
                            MeasurableFunction)

P_CHOICES = (1.2, 1.5, 3.0, 4.0)


@st.composite
def contexts(draw, max_atoms=8, ps=P_CHOICES):
    n = draw(st.integers(min_value=1, max_value=max_atoms))
    weights = draw(st.lists(st.floats(0.5, 2.0), min_size=n, max_size=n))
    p = draw(st.sampled_from(ps))
    return LpContext(FiniteMeasureAlgebra(tuple(weights)), p)


@st.composite
def forms(draw, ctx):
    n = ctx.algebra.atoms
    angles = draw(st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n))
    perm = draw(st.permutations(range(n)))
    f = MeasurableFunction(ctx.algebra,
                           tuple(np.exp(2j * np.pi * a) for a in angles))
    return LampertiForm(f, BooleanAutomorphism(ctx.algebra, tuple(perm)))


@st.composite
def context_and_form(draw):
    ctx = draw(contexts())
    return ctx, draw(forms(ctx))


def test_mult_isometry_identity_and_inverse_phases():
    algebra = FiniteMeasureAlgebra((1.0, 1.0))
    ctx = LpContext(algebra, 3.0)
    one = mult_isometry(MeasurableFunction.constant(algebra, 1.0), ctx)
    assert np.array_equal(one.matrix, np.eye(2))
    f = mult_isometry(MeasurableFunction(algebra, (1j, 1.0)), ctx)
    g = mult_isometry(MeasurableFunction(algebra, (-1j, 1.0)), ctx)
    assert np.allclose(f.compose(g).matrix, np.eye(2), atol=0)


def test_mult_isometry_rejects_non_unimodular():
    algebra = FiniteMeasureAlgebra((1.0, 1.0))
    ctx = LpContext(algebra, 3.0)
    with pytest.raises(ValueError):
        mult_isometry(MeasurableFunction(algebra, (2.0, 1.0)), ctx)


@given(context_and_form())
def test_mult_isometry_preserves_norms(cf):
    ctx, form = cf
    op = mult_isometry(form.f, ctx)
    rng = np.random.default_rng(7)
    for _ in range(5):
        xi = rng.standard_normal(ctx.algebra.atoms) \
            + 1j * rng.standard_normal(ctx.algebra.atoms)
        assert abs(vector_norm(op.apply(xi), ctx) - vector_norm(xi, ctx)) <= 1e-12


@given(contexts(max_atoms=6), st.data())
def test_mult_isometries_compose_pointwise(ctx, data):
    n = ctx.algebra.atoms
    angles = st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n)
    f = MeasurableFunction(ctx.algebra,
                           tuple(np.exp(2j * np.pi * a) for a in data.draw(angles)))
    g = MeasurableFunction(ctx.algebra,
                           tuple(np.exp(2j * np.pi * a) for a in data.draw(angles)))
    lhs = mult_isometry(f, ctx).compose(mult_isometry(g, ctx))
    rhs = mult_isometry(f * g, ctx)
    assert lhs.max_abs_deviation(rhs) <= 1e-12


def test_transform_isometry_identity():
    algebra = FiniteMeasureAlgebra((1.0, 2.0, 0.5))
    ctx = LpContext(algebra, 1.7)
    identity = transform_isometry(BooleanAutomorphism.identity(algebra), ctx)
    assert np.array_equal(identity.matrix, np.eye(3))


def test_transform_isometry_weighted_swap_entries():
    algebra = FiniteMeasureAlgebra((1.0, 2.0))
    ctx = LpContext(algebra, 3.0)
    swap = transform_isometry(BooleanAutomorphism(algebra, (1, 0)), ctx)
    assert swap.matrix[0, 1] == pytest.approx(2.0 ** (1.0 / 3.0), abs=0)
    assert swap.matrix[1, 0] == pytest.approx(0.5 ** (1.0 / 3.0), abs=0)
    basis0 = np.array([1.0, 0.0])
    assert abs(vector_norm(swap.apply(basis0), ctx)
               - vector_norm(basis0, ctx)) <= 1e-12


def test_transform_isometry_counting_measure_is_permutation_matrix():
    algebra = FiniteMeasureAlgebra((1.0, 1.0, 1.0))
    ctx = LpContext(algebra, 2.5)
    op = transform_isometry(BooleanAutomorphism(algebra, (1, 2, 0)), ctx)
    expected = np.zeros((3, 3))
    for x, y in enumerate((1, 2, 0)):
        expected[y, x] = 1.0
    assert np.array_equal(op.matrix, expected)


@given(contexts(max_atoms=6), st.data())
def test_transform_isometries_compose(ctx, data):
    n = ctx.algebra.atoms
    phi = BooleanAutomorphism(ctx.algebra, tuple(data.draw(st.permutations(range(n)))))
    psi = BooleanAutomorphism(ctx.algebra, tuple(data.draw(st.permutations(range(n)))))
    lhs = transform_isometry(psi, ctx).compose(transform_isometry(phi, ctx))
    rhs = transform_isometry(psi.compose(phi), ctx)
    assert lhs.max_abs_deviation(rhs) <= 1e-12


@given(context_and_form())
def test_interplay_identity(cf):
    ctx, form = cf
    assert interplay_deviation(form.phi, form.f, ctx) <= 1e-12


def test_clarkson_examples():
    algebra = FiniteMeasureAlgebra((1.0, 1.0))
    ctx4 = LpContext(algebra, 4.0)
    assert clarkson_gap((1.0, 0.0), (0.0, 1.0), ctx4) == pytest.approx(0.0, abs=1e-12)
    assert clarkson_gap((1.0, 0.0), (1.0, 0.0), ctx4) == pytest.approx(12.0, abs=1e-9)
    with pytest.raises(P2Unsupported):
        clarkson_gap((1.0, 0.0), (0.0, 1.0), LpContext(algebra, 2.0))


@given(contexts(max_atoms=8, ps=(1.5, 4.0)), st.data())
def test_clarkson_sign_dichotomy(ctx, data):
    n = ctx.algebra.atoms
    draw_vec = st.lists(st.tuples(st.floats(-2, 2), st.floats(-2, 2)),
                        min_size=n, max_size=n)
    xi = np.array([complex(a, b) for a, b in data.draw(draw_vec)])
    eta = np.array([complex(a, b) for a, b in data.draw(draw_vec)])
    gap = clarkson_gap(xi, eta, ctx)
    if ctx.p > 2:
        assert gap >= -1e-10
    else:
        assert gap <= 1e-10
    if np.max(np.abs(xi) * np.abs(eta)) == 0.0:
        assert abs(gap) <= 1e-10


def test_disjointness_preserving_examples():
    algebra = FiniteMeasureAlgebra((1.0, 1.0))
    ctx = LpContext(algebra, 3.0)
    assert is_disjointness_preserving(Operator(ctx, np.diag([1j, -1.0])))
    assert not is_disjointness_preserving(Operator(ctx, np.ones((2, 2))))


@given(context_and_form())
def test_form_operators_preserve_disjointness(cf):
    ctx, form = cf
    assert is_disjointness_preserving(lamperti_operator(form, ctx))


def test_decompose_identity():
    algebra = FiniteMeasureAlgebra((1.0, 2.0, 0.5))
    ctx = LpContext(algebra, 3.0)
    form = lamperti_decompose(Operator(ctx, np.eye(3)))
    assert form.phi.perm == (0, 1, 2)
    assert form.f.values == (1.0 + 0j,) * 3


def test_decompose_forced_two_atom_example():
    algebra = FiniteMeasureAlgebra((1.0, 1.0))
    ctx = LpContext(algebra, 3.0)
    op = Operator(ctx, np.array([[0.0, 1j], [1.0, 0.0]]))
    form = lamperti_decompose(op)
    assert form.phi.perm == (1, 0)
    assert form.f.values == (1j, 1.0 + 0j)


@given(context_and_form())
def test_decompose_round_trip(cf):
    ctx, form = cf
    recovered = lamperti_decompose(lamperti_operator(form, ctx))
    assert recovered.phi.perm == form.phi.perm
    assert max(abs(a - b) for a, b in
               zip(recovered.f.values, form.f.values)) <= 1e-12


def test_decompose_survives_tiny_perturbation():
    rng = np.random.default_rng(3)
    algebra = FiniteMeasureAlgebra(tuple(rng.uniform(0.5, 2.0, 5)))
    ctx = LpContext(algebra, 1.5)
    f = MeasurableFunction(algebra, tuple(np.exp(2j * np.pi * rng.uniform(size=5))))
    phi = BooleanAutomorphism(algebra, tuple(int(v) for v in rng.permutation(5)))
    op = lamperti_operator(LampertiForm(f, phi), ctx)
    noise = 1e-13 * (rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
    perturbed = Operator(ctx, op.matrix + noise)
    assert lamperti_decompose(perturbed).phi.perm == phi.perm


def test_decompose_rejects_rotation_at_p2():
    algebra = FiniteMeasureAlgebra((1.0, 1.0))
    ctx = LpContext(algebra, 2.0)
    c = math.sqrt(0.5)
    rotation = Operator(ctx, np.array([[c, -c], [c, c]]))
    with pytest.raises(P2Unsupported):
        lamperti_decompose(rotation)


def test_decompose_rejects_p1():
    algebra = FiniteMeasureAlgebra((1.0, 1.0))
    ctx = LpContext(algebra, 1.0)
    with pytest.raises(POutOfRange):
        lamperti_decompose(Operator(ctx, np.eye(2)))


def test_decompose_rejects_non_isometries():
    algebra = FiniteMeasureAlgebra((1.0, 1.0))
    ctx = LpContext(algebra, 3.0)
    with pytest.raises(NotIsometry):
        lamperti_decompose(Operator(ctx, np.diag([2.0, 1.0])))
    with pytest.raises(NotIsometry):
        lamperti_decompose(Operator(ctx, np.ones((2, 2))))
    # an l2 rotation presented at p = 3 fails the norm validation
    c = math.sqrt(0.5)
    with pytest.raises(NotIsometry):
        lamperti_decompose(Operator(ctx, np.array([[c, -c], [c, c]])))


def test_distance_closed_forms():
    algebra = FiniteMeasureAlgebra((1.0, 2.0))
    ctx = LpContext(algebra, 3.0)
    f = MeasurableFunction(algebra, (1j, 1.0))
    identity = BooleanAutomorphism.identity(algebra)
    swap = BooleanAutomorphism(algebra, (1, 0))
    a = LampertiForm(f, identity)
    assert lamperti_distance(a, a, ctx) == 0.0
    b = LampertiForm(f, swap)
    assert lamperti_distance(a, b, ctx) == 2.0
    plus = LampertiForm(MeasurableFunction.constant(algebra, 1.0), identity)
    minus = LampertiForm(MeasurableFunction.constant(algebra, -1.0), identity)
    assert lamperti_distance(plus, minus, ctx) == 2.0
