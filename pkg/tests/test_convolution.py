import itertools

import numpy as np
import pytest

from lpconv.convolution import (AlgebraBasis, ConvolutionContext,
                                PhasedPermutation, algebra_membership,
                                convolver_algebra, convolver_basis_exact,
                                left_regular, pseudofunction_algebra,
                                right_regular, unitary_group_enumerate)
from lpconv.errors import NotGroupLike, P2Unsupported, POutOfRange
from lpconv.groups import make_cyclic, make_dihedral, make_symmetric, zoo


def test_regular_representations_at_identity():
    ctx = ConvolutionContext(make_cyclic(3), 3.0)
    assert np.array_equal(left_regular(ctx, 0).matrix, np.eye(3))
    assert np.array_equal(right_regular(ctx, 0).matrix, np.eye(3))


def test_regular_representations_on_two_cycle():
    ctx = ConvolutionContext(make_cyclic(2), 3.0)
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert np.array_equal(left_regular(ctx, 1).matrix, swap)
    assert np.array_equal(right_regular(ctx, 1).matrix, swap)


def test_left_regular_is_a_homomorphism_on_s3():
    g = make_symmetric(3)
    ctx = ConvolutionContext(g, 1.5)
    lam = [left_regular(ctx, s).matrix for s in range(6)]
    for s, t in itertools.product(range(6), repeat=2):
        assert np.array_equal(lam[s] @ lam[t], lam[g.mul(s, t)])


def test_right_regular_is_a_homomorphism_on_s3():
    g = make_symmetric(3)
    ctx = ConvolutionContext(g, 1.5)
    rho = [right_regular(ctx, s).matrix for s in range(6)]
    for s, t in itertools.product(range(6), repeat=2):
        assert np.array_equal(rho[s] @ rho[t], rho[g.mul(s, t)])


def test_left_and_right_translations_commute_exactly():
    g = make_dihedral(4)
    ctx = ConvolutionContext(g, 3.0)
    for s, t in itertools.product(range(8), repeat=2):
        lam = left_regular(ctx, s).matrix
        rho = right_regular(ctx, t).matrix
        assert np.array_equal(lam @ rho, rho @ lam)


def test_pseudofunction_dimensions():
    assert pseudofunction_algebra(ConvolutionContext(make_cyclic(1), 3.0)).dimension == 1
    for _, g in zoo():
        assert pseudofunction_algebra(ConvolutionContext(g, 3.0)).dimension == g.order


def test_pseudofunction_of_cycle_is_circulant_shifts():
    ctx = ConvolutionContext(make_cyclic(4), 3.0)
    basis = pseudofunction_algebra(ctx)
    for s, mat in enumerate(basis.elements):
        expected = np.roll(np.eye(4), s, axis=0)
        assert np.array_equal(mat.real, expected)


def test_convolver_of_trivial_group():
    basis = convolver_algebra(ConvolutionContext(make_cyclic(1), 3.0))
    assert basis.dimension == 1


def test_convolver_of_two_cycle_is_identity_and_swap_span():
    basis = convolver_algebra(ConvolutionContext(make_cyclic(2), 3.0))
    assert basis.dimension == 2
    assert basis.coordinates(np.eye(2)) is not None
    assert basis.coordinates(np.array([[0.0, 1.0], [1.0, 0.0]])) is not None


def test_convolver_spans_translations_for_the_zoo():
    for _, g in zoo():
        ctx = ConvolutionContext(g, 3.0)
        cv = convolver_algebra(ctx)
        pf = pseudofunction_algebra(ctx)
        assert cv.dimension == g.order
        for mat in pf.elements:
            assert cv.coordinates(mat) is not None
        for mat in cv.elements:
            assert pf.coordinates(mat) is not None


def test_convolver_commutes_with_right_translations_exactly():
    g = make_dihedral(4)
    ctx = ConvolutionContext(g, 1.2)
    cv = convolver_algebra(ctx)
    for mat in cv.elements:
        for t in range(g.order):
            rho = right_regular(ctx, t).matrix
            assert np.array_equal(mat @ rho, rho @ mat)


def test_exact_commutant_is_rational_zero_one():
    exact = convolver_basis_exact(make_symmetric(3))
    assert len(exact) == 6
    values = {v for mat in exact for row in mat for v in row}
    assert values <= {0, 1}


def test_membership_examples():
    ctx = ConvolutionContext(make_cyclic(4), 3.0)
    basis = pseudofunction_algebra(ctx)
    coords = algebra_membership(basis, basis.elements[2])
    assert coords is not None
    assert np.allclose(coords, np.eye(4)[2], atol=1e-12)
    combo = basis.elements[0] + basis.elements[1]
    coords = algebra_membership(basis, combo)
    assert np.allclose(coords, np.array([1.0, 1.0, 0.0, 0.0]), atol=1e-12)


def test_membership_rejects_outside_span():
    ctx = ConvolutionContext(make_cyclic(3), 3.0)
    basis = pseudofunction_algebra(ctx)
    rng = np.random.default_rng(0)
    outside = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert algebra_membership(basis, outside) is None


def test_basis_validation_rejects_unclosed_sets():
    # the square of a 3-cycle escapes the span of {identity, 3-cycle}
    cycle = np.roll(np.eye(3), 1, axis=0)
    with pytest.raises(ValueError):
        AlgebraBasis(3, 3.0, (np.eye(3), cycle))


def test_enumerate_two_cycle():
    basis = convolver_algebra(ConvolutionContext(make_cyclic(2), 3.0))
    units = unitary_group_enumerate(basis, 3.0)
    assert [u.perm for u in units] == [(0, 1), (1, 0)]
    assert all(u.phase_dim == 0 for u in units)


def test_enumerate_four_cycle_forms_cyclic_group():
    basis = convolver_algebra(ConvolutionContext(make_cyclic(4), 3.0))
    units = unitary_group_enumerate(basis, 3.0)
    assert len(units) == 4
    shift = next(u for u in units if u.perm == (1, 2, 3, 0))
    power = shift
    seen = {shift.perm}
    for _ in range(3):
        power = power.compose(shift)
        seen.add(power.perm)
    assert len(seen) == 4


def test_enumerate_counts_match_group_order():
    for _, g in zoo():
        for p in (1.5, 3.0):
            basis = convolver_algebra(ConvolutionContext(g, p))
            units = unitary_group_enumerate(basis, p)
            assert len(units) == g.order, g


def test_enumerate_closure_and_projection_to_group_product():
    g = make_symmetric(3)
    ctx = ConvolutionContext(g, 3.0)
    basis = convolver_algebra(ctx)
    units = unitary_group_enumerate(basis, 3.0)
    by_perm = {u.perm: u for u in units}
    lam_perm = {s: tuple(int(np.argmax(left_regular(ctx, s).matrix.real[:, y]))
                         for y in range(6)) for s in range(6)}
    for u, v in itertools.product(units, repeat=2):
        prod = u.compose(v)
        assert prod.perm in by_perm
        assert by_perm[prod.perm].same_class(
            PhasedPermutation(prod.perm, prod.phases, prod.phase_dim))
        assert u.inverse().perm in by_perm
    # scalar multiples of translations project to the translation product
    s, t = 3, 4
    a = PhasedPermutation(lam_perm[s], tuple(0.3 + 0.954j for _ in range(6)))
    b = PhasedPermutation(lam_perm[t], tuple(-1j for _ in range(6)))
    assert a.compose(b).perm == lam_perm[g.mul(s, t)]


def test_enumerate_full_matrix_algebra_yields_all_patterns():
    for n in (3, 4):
        elementary = []
        for i in range(n):
            for j in range(n):
                m = np.zeros((n, n))
                m[i, j] = 1.0
                elementary.append(m)
        basis = AlgebraBasis(n, 3.0, tuple(elementary))
        units = unitary_group_enumerate(basis, 3.0)
        assert len(units) == len(list(itertools.permutations(range(n))))
        assert all(u.phase_dim == n - 1 for u in units)


def test_enumerate_rejects_p2_and_p1():
    basis = convolver_algebra(ConvolutionContext(make_cyclic(2), 3.0))
    with pytest.raises(P2Unsupported):
        unitary_group_enumerate(basis, 2.0)
    with pytest.raises(POutOfRange):
        unitary_group_enumerate(basis, 1.0)


def test_enumerate_refuses_intermediate_phase_families():
    # span of I and diag(1, 1, -1): the diagonal pattern carries a
    # 2-parameter family on 3 atoms, which has no discrete class set
    basis = AlgebraBasis(3, 3.0, (np.eye(3), np.diag([1.0, 1.0, -1.0])))
    with pytest.raises(NotGroupLike):
        unitary_group_enumerate(basis, 3.0)


def test_contexts_reject_extreme_exponents():
    with pytest.raises(POutOfRange):
        ConvolutionContext(make_cyclic(2), 1.0)
