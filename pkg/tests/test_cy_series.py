import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cygrowth.cy_series import (VerdictKind, build_q, criterion_polynomial,
                                dim2_spectral_criterion, dim3_normal_criterion, dim_one_datum,
                                hypocycloid_boundary, hypocycloid_contains, joint_eigenpairs,
                                roots_on_unit_circle, verify_functional_equation)
from cygrowth.errors import CompatibilityError, InvalidCYDatum, InvalidDimOneQuiver, NonUnimodular
from cygrowth.growth import GrowthClass, classify_algebra
from cygrowth.polyalg import T, MatPoly, poly
from cygrowth.quiver import Arrow, CYDatum, WeightedQuiver

from helpers import loops, random_cy_data, skew_group_quiver

SWAP = (2, 1)


def one_vertex_dim3(a, ell):
    return build_q(WeightedQuiver.from_matrix([[a]]), CYDatum((1,), (ell,), 3))


# -- construction ------------------------------------------------------------
def test_build_skew_group():
    m = build_q(skew_group_quiver(), CYDatum(SWAP, (2, 2), 2))
    assert m.q == MatPoly([[poly([1, -1]), poly([0, -1, 1])], [poly([0, -1, 1]), poly([1, -1])]])
    assert m.M == [[1, 1], [1, 1]]


@pytest.mark.parametrize("m", [2, 3, 5])
def test_build_two_weighted_loops(m):
    model = build_q(loops(1, m), CYDatum((1,), (m + 1,), 2))
    assert model.q == MatPoly([[1 - T - T ** m + T ** (m + 1)]])


@pytest.mark.parametrize("a,ell", [(1, 3), (3, 3), (2, 4), (4, 6), (1, 2)])
def test_build_one_vertex_dim3(a, ell):
    assert one_vertex_dim3(a, ell).q == MatPoly([[1 - a * T + a * T ** (ell - 1) - T ** ell]])


def test_build_dim_one_cycles():
    q = WeightedQuiver(3, [Arrow("x", 1, 2), Arrow("y", 2, 3), Arrow("z", 3, 1, 2)])
    cy = dim_one_datum(q)
    assert cy.mu == (2, 3, 1) and cy.ell == (2, 1, 1)
    m = build_q(q, cy)
    assert m.q == MatPoly.identity(3) - MatPoly([[0, T, 0], [0, 0, T], [T ** 2, 0, 0]])


def test_dim_one_rejects_non_cycles():
    with pytest.raises(InvalidDimOneQuiver):
        dim_one_datum(WeightedQuiver(2, [Arrow("x", 1, 2)]))
    with pytest.raises(InvalidDimOneQuiver):
        dim_one_datum(WeightedQuiver(2, [Arrow("x", 1, 2, 0), Arrow("y", 2, 1, 0)]))


def test_dim_two_incompatible_datum_has_witness():
    with pytest.raises(CompatibilityError) as e:
        build_q(skew_group_quiver(), CYDatum(SWAP, (1, 1), 2))
    assert e.value.witness is not None


def test_dim_three_rejects_weight_zero():
    q = WeightedQuiver(2, [Arrow("x", 1, 2, 0), Arrow("y", 2, 1, 1)])
    with pytest.raises(InvalidCYDatum):
        build_q(q, CYDatum((1, 2), (3, 3), 3))


def test_non_unimodular():
    # a loop of weight ell makes q(0) = 1 - 1 + ... singular
    with pytest.raises((NonUnimodular, InvalidCYDatum)):
        build_q(WeightedQuiver(1, [Arrow("x", 1, 1, 3), Arrow("y", 1, 1, 3)]), CYDatum((1,), (3,), 3))


# -- identities --------------------------------------------------------------
def test_functional_equation_examples():
    m = build_q(skew_group_quiver(), CYDatum(SWAP, (2, 2), 2))
    assert verify_functional_equation(m)
    wrong = verify_functional_equation(m.with_datum(CYDatum((1, 2), (2, 2), 2)))
    assert not wrong and not wrong.functional_equation
    assert wrong.witness[0] == "functional_equation"
    cyc = WeightedQuiver(2, [Arrow("x", 1, 2), Arrow("y", 2, 1)])
    m1 = build_q(cyc, dim_one_datum(cyc))
    assert m1.cy.mu == (2, 1) and m1.cy.ell == (1, 1)
    assert verify_functional_equation(m1)


@settings(max_examples=150, deadline=None)
@given(st.randoms(use_true_random=False))
def test_functional_equation_on_random_corpus(rng):
    model = build_q(*random_cy_data(rng))
    check = verify_functional_equation(model)
    assert check.functional_equation and check.commutes


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_dim_two_incidence_identity(rng):
    model = build_q(*random_cy_data(rng, 2))
    PtL = model.cy.nakayama_monomial()
    assert model.N == PtL * model.N.substitute_inverse_t().T


# -- dimension 2 -------------------------------------------------------------
def test_dim2_criterion_skew_group():
    r = dim2_spectral_criterion(build_q(skew_group_quiver(), CYDatum(SWAP, (2, 2), 2)))
    assert r.criterion_verdict.kind is VerdictKind.PASS
    assert r.perron_vector == [1, 1]
    assert abs(r.spectral_radius - 2) < 1e-12


def test_dim2_criterion_markov_two_cycle():
    model = build_q(WeightedQuiver.from_matrix([[0, 3], [3, 0]]), CYDatum((1, 2), (2, 2), 2))
    r = dim2_spectral_criterion(model)
    assert r.criterion_verdict.kind is VerdictKind.FAIL
    assert abs(r.spectral_radius - 3) < 1e-12
    assert r.exact_class is GrowthClass.EXPONENTIAL


def test_dim2_criterion_two_loops():
    r = dim2_spectral_criterion(build_q(WeightedQuiver.from_matrix([[2]]), CYDatum((1,), (2,), 2)))
    assert r.criterion_verdict.kind is VerdictKind.PASS and abs(r.spectral_radius - 2) < 1e-12


def test_dim2_criterion_inapplicable_for_weights():
    r = dim2_spectral_criterion(build_q(loops(1, 2), CYDatum((1,), (3,), 2)))
    assert r.criterion_verdict.kind is VerdictKind.INAPPLICABLE
    assert str(r.criterion_verdict).startswith("Inapplicable(")


# -- hypocycloids ------------------------------------------------------------
def test_boundary_points():
    assert hypocycloid_boundary(3, 3)[0] == 3
    assert hypocycloid_boundary(4, 4)[0] == 4
    p = hypocycloid_boundary(3, 3)[1]
    assert abs(p - 3 * cmath.exp(2j * math.pi / 3)) < 1e-12
    half = hypocycloid_boundary(4, 8, scale=0.5)
    assert abs(half[0] - 2) < 1e-12
    with pytest.raises(ValueError):
        hypocycloid_boundary(3, 2)
    with pytest.raises(ValueError):
        hypocycloid_boundary(5, 10)


def test_contains_examples():
    assert hypocycloid_contains(3, 3)
    assert hypocycloid_contains(-1, 3)
    assert not hypocycloid_contains(2.01, 4)
    assert hypocycloid_contains(2, 4)
    assert not hypocycloid_contains(-1.05, 3)
    assert not hypocycloid_contains(3.05, 3)
    assert not hypocycloid_contains(-3, 3)
    with pytest.raises(ValueError):
        hypocycloid_contains(0, 3, zeta=1.1)


def test_cusp_polynomials():
    # a = 3: 1 - 3x + 3x^2 - x^3 = (1 - x)^3
    assert np.allclose(criterion_polynomial(3, 3), [1, -3, 3, -1])
    # a = -1: 1 + x - x^2 - x^3 = (1 + x)^2 (1 - x)
    assert np.allclose(np.polynomial.polynomial.polymul([1, 1], np.polynomial.polynomial.polymul([1, 1], [1, -1])),
                       np.real(criterion_polynomial(-1, 3)))


def test_boundary_lies_in_region():
    for z in hypocycloid_boundary(3, 97):
        assert hypocycloid_contains(z, 3, tol=1e-8)
        assert not hypocycloid_contains(z * 1.01, 3)
    for z in hypocycloid_boundary(4, 97, scale=0.5):
        assert hypocycloid_contains(z, 4, tol=1e-8)
        assert not hypocycloid_contains(z * 1.01, 4)


points = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)


@settings(max_examples=200)
@given(points, st.sampled_from([3, 4]), st.integers(0, 11))
def test_k_fold_symmetry(a, k, j):
    zeta = cmath.exp(2j * math.pi * j / 12)
    rot = a * cmath.exp(2j * math.pi / k)
    assert hypocycloid_contains(rot, k, zeta) == hypocycloid_contains(a, k, zeta)


@settings(max_examples=200)
@given(points, st.sampled_from([3, 4]))
def test_region_matches_root_test_away_from_boundary(a, k):
    from cygrowth.cy_series import _deltoid_value, _half_astroid_value
    margin = _deltoid_value(a) / (1 + abs(a) ** 4) if k == 3 else _half_astroid_value(a)
    if abs(margin) < 1e-3:
        return
    # for k = 4 the quartic with coefficient a has its roots on the circle iff a lies in the half astroid
    assert hypocycloid_contains(a, k) == roots_on_unit_circle(criterion_polynomial(a, k), 1e-6)


def test_real_sections():
    grid = [round(-5 + 0.05 * s, 10) for s in range(201)]
    inside3 = [a for a in grid if hypocycloid_contains(a, 3)]
    inside4 = [a for a in grid if hypocycloid_contains(a, 4)]
    assert abs(min(inside3) + 1) <= 0.05 and abs(max(inside3) - 3) <= 0.05
    assert abs(min(inside4) + 2) <= 0.05 and abs(max(inside4) - 2) <= 0.05
    assert all(-1 - 1e-9 <= a <= 3 + 1e-9 for a in inside3)


# -- dimension 3 -------------------------------------------------------------
def test_dim3_three_loops():
    r = dim3_normal_criterion(one_vertex_dim3(3, 3))
    assert r.criterion_verdict.kind is VerdictKind.PASS
    assert r.expected_rho == 3 and r.expected_gk == 3 and r.exact_gk == 3
    assert classify_algebra(one_vertex_dim3(3, 3).q).det_q == poly([1, -3, 3, -1])
    assert any("at least 3" in c for c in r.caveats)


def test_dim3_two_loops_ell_four():
    m = one_vertex_dim3(2, 4)
    r = dim3_normal_criterion(m)
    assert r.criterion_verdict.kind is VerdictKind.PASS and r.expected_rho == 2
    assert classify_algebra(m.q).det_q == poly([1, -1]) ** 3 * poly([1, 1])


@pytest.mark.parametrize("a", [2, 3, 4])
def test_dim3_ell_five_fails(a):
    r = dim3_normal_criterion(one_vertex_dim3(a, 5))
    assert r.criterion_verdict.kind is VerdictKind.FAIL
    assert r.exact_class is GrowthClass.EXPONENTIAL


def test_dim3_ell_five_small_gk_inapplicable():
    r = dim3_normal_criterion(one_vertex_dim3(1, 5))
    assert r.criterion_verdict.kind is VerdictKind.INAPPLICABLE
    assert r.exact_gk == 1


def test_dim3_markov_two_cycle():
    m = build_q(WeightedQuiver.from_matrix([[0, 3], [3, 0]]), CYDatum((1, 2), (3, 3), 3))
    r = dim3_normal_criterion(m)
    assert r.criterion_verdict.kind is VerdictKind.FAIL
    assert r.exact_class is GrowthClass.EXPONENTIAL
    deltas = sorted(d.real for d, _, _ in r.pairs)
    assert abs(deltas[0] + 3) < 1e-8 and abs(deltas[1] - 3) < 1e-8


def test_joint_eigenpairs_swap():
    pairs = joint_eigenpairs([[0, 3], [3, 0]], (2, 1))
    got = sorted((round(d.real, 8), round(z.real, 8)) for d, z in pairs)
    assert got == [(-3.0, -1.0), (3.0, 1.0)]


def _normal_commuting_model(rng, ell):
    n = rng.randint(1, 3)
    mu = list(range(1, n + 1))
    rng.shuffle(mu)
    P = np.array([[1 if mu[i] == j + 1 else 0 for j in range(n)] for i in range(n)])
    if rng.random() < 0.5:
        M = sum(rng.randint(0, 2) * np.linalg.matrix_power(P, k) for k in range(n))
    else:
        A = sum(rng.randint(0, 1) * np.linalg.matrix_power(P, k) for k in range(n))
        A = A + rng.randint(0, 1) * np.ones((n, n), dtype=int)
        M = A + A.T
    M = np.asarray(M, dtype=int).reshape(n, n)
    if M.sum() == 0:
        M = np.eye(n, dtype=int)
    return build_q(WeightedQuiver.from_matrix(M.tolist()), CYDatum(tuple(mu), (ell,) * n, 3))


@settings(max_examples=120, deadline=None)
@given(st.randoms(use_true_random=False), st.sampled_from([3, 4, 5, 6]))
def test_criterion_agrees_with_exact_classifier(rng, ell):
    r = dim3_normal_criterion(_normal_commuting_model(rng, ell))
    kind = r.criterion_verdict.kind
    if kind is VerdictKind.PASS:
        assert r.exact_class is GrowthClass.FINITE_GK
    elif kind is VerdictKind.FAIL:
        assert r.exact_class is GrowthClass.EXPONENTIAL


def test_dim3_inapplicable_when_not_normal():
    m = build_q(WeightedQuiver.from_matrix([[1, 1], [0, 1]]), CYDatum((1, 2), (3, 3), 3))
    r = dim3_normal_criterion(m)
    assert r.criterion_verdict.kind is VerdictKind.INAPPLICABLE
    assert "NotNormal" in r.criterion_verdict.reason
