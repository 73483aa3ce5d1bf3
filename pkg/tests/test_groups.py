import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lierec.errors import AlgebraStructureError, BranchCutError, DimensionError, KindMismatchError, MembershipError
from lierec.groups import (
    AlgebraVector,
    GroupElement,
    GroupKind,
    Regime,
    check_loggable,
    classify_regime,
    compose,
    group_exp,
    group_log,
    hat,
    vee,
)
from lierec.matrix import frobenius_norm, mat_exp_series, mat_mul

from conftest import ALL_KINDS, random_coords

SL2 = GroupKind.SL2R


def coords_strategy(kind, bound=1.0):
    return st.lists(
        st.floats(-bound, bound, allow_nan=False), min_size=kind.algebra_dim, max_size=kind.algebra_dim
    ).map(np.array)


def test_kind_table():
    assert [(k.tag, k.ambient_dim, k.algebra_dim) for k in GroupKind] == [
        ("se2", 3, 3), ("se3", 4, 6), ("so3", 3, 3), ("sl2r", 2, 3)
    ]
    assert GroupKind.parse("SO3") is GroupKind.SO3
    with pytest.raises(ValueError):
        GroupKind.parse("so2")


def test_hat_examples():
    np.testing.assert_array_equal(
        hat(AlgebraVector(GroupKind.SO3, [1, 0, 0])), [[0, 0, 0], [0, 0, -1], [0, 1, 0]]
    )
    np.testing.assert_array_equal(hat(AlgebraVector(SL2, [0, 0, 0])), np.zeros((2, 2)))
    vx, vy, w = 0.3, -0.2, 0.7
    np.testing.assert_array_equal(
        hat(AlgebraVector(GroupKind.SE2, [vx, vy, w])), [[0, -w, vx], [w, 0, vy], [0, 0, 0]]
    )


def test_hat_se3_translation_first():
    m = hat(AlgebraVector(GroupKind.SE3, [1, 2, 3, 4, 5, 6]))
    np.testing.assert_array_equal(m[:3, 3], [1, 2, 3])
    np.testing.assert_array_equal(m[:3, :3], hat(AlgebraVector(GroupKind.SO3, [4, 5, 6])))
    np.testing.assert_array_equal(m[3], 0)


def test_algebra_vector_length_checked():
    with pytest.raises(DimensionError):
        AlgebraVector(GroupKind.SE3, [1, 2, 3])
    with pytest.raises(ValueError):
        AlgebraVector(GroupKind.SO3, [1, float("nan"), 0])


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_vee_inverts_hat_exactly(rng, kind):
    for _ in range(100):
        v = rng.uniform(-3, 3, kind.algebra_dim)
        np.testing.assert_array_equal(vee(hat(AlgebraVector(kind, v)), kind).coords, v)


def test_vee_sl2_basis_expansion():
    np.testing.assert_array_equal(vee([[1.0, 0.0], [0.0, -1.0]], SL2).coords, [1, 0, 0])
    np.testing.assert_array_equal(vee([[0.0, 2.0], [-3.0, 0.0]], SL2).coords, [0, 2, -3])


@pytest.mark.parametrize(
    "kind, m",
    [
        (GroupKind.SO3, np.eye(3)),
        (SL2, np.eye(2)),
        (GroupKind.SE2, np.array([[0, 0, 1], [0, 0, 0], [0, 0, 1.0]])),
        (GroupKind.SE3, np.ones((4, 4))),
    ],
)
def test_vee_rejects_wrong_structure(kind, m):
    with pytest.raises(AlgebraStructureError):
        vee(m, kind)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_exp_zero_is_identity(kind):
    g = group_exp(AlgebraVector(kind, np.zeros(kind.algebra_dim)))
    np.testing.assert_array_equal(g.matrix, np.eye(kind.ambient_dim))
    np.testing.assert_array_equal(group_log(g).coords, 0.0)


def test_exp_examples():
    g = group_exp(AlgebraVector(GroupKind.SO3, [0, 0, math.pi / 2]))
    oracle = mat_exp_series(hat(AlgebraVector(GroupKind.SO3, [0, 0, math.pi / 2])), 30)
    assert frobenius_norm(g.matrix - oracle) < 1e-12
    assert frobenius_norm(g.matrix - np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1.0]])) < 1e-12

    g = group_exp(AlgebraVector(SL2, [1, 0, 0]))
    np.testing.assert_allclose(g.matrix, np.diag([math.e, 1 / math.e]), rtol=1e-15, atol=0)

    g = group_exp(AlgebraVector(GroupKind.SE2, [1, 0, 0]))
    np.testing.assert_array_equal(g.matrix, [[1, 0, 1], [0, 1, 0], [0, 0, 1]])


@pytest.mark.parametrize("kind", ALL_KINDS)
@pytest.mark.parametrize("scale", [1e-7, 1e-5, 1e-3, 1.0, 5.0])
def test_exp_matches_series_oracle(rng, kind, scale):
    for _ in range(50):
        v = random_coords(rng, kind, scale)
        g = group_exp(AlgebraVector(kind, v))
        oracle = mat_exp_series(hat(AlgebraVector(kind, v)), 30)
        assert frobenius_norm(g.matrix - oracle) < 1e-9


@pytest.mark.parametrize("kind", ALL_KINDS)
@pytest.mark.parametrize("scale", [1e-9, 1e-5, 1e-4, 2e-4, 1.0])
def test_log_exp_round_trip(rng, kind, scale):
    for _ in range(100):
        v = random_coords(rng, kind, scale)
        back = group_log(group_exp(AlgebraVector(kind, v))).coords
        assert np.max(np.abs(back - v)) < 1e-9


@pytest.mark.parametrize("kind", [GroupKind.SO3, GroupKind.SE3, GroupKind.SE2])
def test_log_near_pi_branch(kind):
    angle = math.pi - 1e-3
    v = np.zeros(kind.algebra_dim)
    v[-1] = angle
    if kind is not GroupKind.SO3:
        v[0] = 0.4  # a translation component
    g = group_exp(AlgebraVector(kind, v))
    np.testing.assert_allclose(group_log(g).coords, v, atol=1e-9)
    assert frobenius_norm(group_exp(group_log(g)).matrix - g.matrix) < 1e-8


def test_log_off_axis_near_pi():
    axis = np.array([1.0, -2.0, 0.5]) / np.linalg.norm([1.0, -2.0, 0.5])
    v = (math.pi - 1e-4) * axis
    back = group_log(group_exp(AlgebraVector(GroupKind.SO3, v))).coords
    np.testing.assert_allclose(back, v, atol=1e-8)


def test_log_rejects_half_turn():
    half_turn = GroupElement(GroupKind.SO3, np.diag([-1.0, -1.0, 1.0]))
    with pytest.raises(BranchCutError):
        group_log(half_turn)


def test_sl2_log_rejects_negative_trace():
    with pytest.raises(BranchCutError):
        group_log(GroupElement(SL2, np.diag([-2.0, -0.5])))
    with pytest.raises(BranchCutError):
        group_log(GroupElement(SL2, [[-1.0, 1.0], [0.0, -1.0]]))


def test_sl2_log_parabolic():
    g = GroupElement(SL2, [[1.0, 0.3], [0.0, 1.0]])
    np.testing.assert_allclose(group_log(g).coords, [0.0, 0.3, 0.0], atol=1e-15)


def test_sl2_log_elliptic_large_angle():
    v = np.array([0.0, 3.0, -1.0])  # det = 3, angle sqrt(3) ~ 1.73
    back = group_log(group_exp(AlgebraVector(SL2, v))).coords
    np.testing.assert_allclose(back, v, atol=1e-12)


def test_membership_violations():
    with pytest.raises(MembershipError):
        GroupElement(SL2, np.diag([2.0, 2.0]))
    with pytest.raises(MembershipError):
        GroupElement(GroupKind.SO3, np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(MembershipError):
        GroupElement(GroupKind.SE2, [[1, 0, 0], [0, 1, 0], [0, 1, 1.0]])
    with pytest.raises(MembershipError):
        GroupElement(GroupKind.SE3, np.diag([1.0, 1.0, 1.1, 1.0]))
    with pytest.raises(DimensionError):
        GroupElement(GroupKind.SE3, np.eye(3))


def test_compose(rng):
    for kind in ALL_KINDS:
        g = group_exp(AlgebraVector(kind, random_coords(rng, kind)))
        ident = GroupElement.identity(kind)
        np.testing.assert_array_equal(compose(g, ident).matrix, g.matrix)
        assert frobenius_norm(compose(g, g.inverse()).matrix - np.eye(kind.ambient_dim)) < 1e-10
    a = group_exp(AlgebraVector(GroupKind.SE2, [0.3, -1.0, 0.8]))
    b = group_exp(AlgebraVector(GroupKind.SE2, [1.1, 0.2, -2.0]))
    np.testing.assert_allclose(compose(a, b).matrix, mat_mul(a.matrix, b.matrix), atol=0)
    with pytest.raises(KindMismatchError):
        compose(a, GroupElement.identity(GroupKind.SO3))


def test_classify_regime_examples():
    assert classify_regime(vee([[0.0, 1.0], [-1.0, 0.0]], SL2)) is Regime.ELLIPTIC
    assert classify_regime(vee([[1.0, 0.0], [0.0, -1.0]], SL2)) is Regime.HYPERBOLIC
    assert classify_regime(vee([[0.0, 1.0], [0.0, 0.0]], SL2)) is Regime.PARABOLIC
    with pytest.raises(KindMismatchError):
        classify_regime(AlgebraVector(GroupKind.SO3, [0, 0, 1]))


def test_check_loggable():
    check_loggable(AlgebraVector(GroupKind.SO3, [0, 0, 3.0]))
    with pytest.raises(BranchCutError):
        check_loggable(AlgebraVector(GroupKind.SO3, [0, 0, 3.2]))
    with pytest.raises(BranchCutError):
        check_loggable(AlgebraVector(SL2, [0, 4.0, -4.0]))  # elliptic angle 4
    check_loggable(AlgebraVector(SL2, [3.0, 0, 0]))  # hyperbolic is always fine


# -- properties ------------------------------------------------------------------


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_property_round_trip_and_membership(kind):
    @settings(max_examples=200, deadline=None)
    @given(coords_strategy(kind))
    def check(v):
        if np.linalg.norm(v) > 1:
            v = v / np.linalg.norm(v)
        x = AlgebraVector(kind, v)
        np.testing.assert_array_equal(vee(hat(x), kind).coords, x.coords)
        g = group_exp(x)
        assert np.max(np.abs(group_log(g).coords - v)) < 1e-9
        m = g.matrix
        if kind is SL2:
            assert abs(np.linalg.det(m) - 1) < 1e-10
        else:
            r = m if kind is GroupKind.SO3 else m[:-1, :-1]
            assert np.linalg.norm(r.T @ r - np.eye(r.shape[0])) < 1e-10

    check()


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_property_one_parameter_subgroup(kind):
    @settings(max_examples=150, deadline=None)
    @given(coords_strategy(kind), st.floats(-1, 1), st.floats(-1, 1))
    def check(v, s, t):
        lhs = group_exp(AlgebraVector(kind, (s + t) * v)).matrix
        rhs = compose(group_exp(AlgebraVector(kind, s * v)), group_exp(AlgebraVector(kind, t * v))).matrix
        assert frobenius_norm(lhs - rhs) < 1e-9

    check()


@settings(max_examples=200, deadline=None)
@given(coords_strategy(SL2, 2.0), coords_strategy(SL2, 1.0))
def test_property_regime_conjugation_invariant(v, hv):
    x = AlgebraVector(SL2, v)
    a, b, c = v
    det = -a * a - b * c
    if 0 < abs(det) < 1e-6:
        return  # too close to the tolerance band for a sign-stable comparison
    h = group_exp(AlgebraVector(SL2, hv))
    conj = h.matrix @ hat(x) @ h.inverse().matrix
    conj[1, 1] = -conj[0, 0]  # remove round-off from the trace
    assert classify_regime(vee(conj, SL2)) is classify_regime(x)
