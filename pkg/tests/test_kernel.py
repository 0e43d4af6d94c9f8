import numpy as np
import pytest
from hypothesis import given, strategies as st

from sks_homography.errors import DegenerateKernel, NotAKernel
from sks_homography.geometry import Homography3, Point2, apply, projective_distance
from sks_homography.kernel import (
    AngularOffsets,
    KernelParams,
    angular_offsets_to_kernel,
    cot_theta,
    kernel_canonical_images,
    kernel_to_angular_offsets,
    kernel_to_matrix,
    matrix_to_kernel,
)

from conftest import kernel_params
from oracles import geometric_angular_offsets


def test_kernel_to_matrix_examples():
    assert kernel_to_matrix(KernelParams()) == Homography3.identity()
    np.testing.assert_array_equal(kernel_to_matrix(KernelParams(0, 0.5, 0, 0)).m, [[1, 0, 0.5], [0, 1, 0], [0.5, 0, 1]])
    expected = Homography3([[1.2, 0.1, 0], [0, 1, 0], [0, 0, 1.2]])
    assert projective_distance(kernel_to_matrix(KernelParams(0.2, 0, 0.1, 0)), expected) < 1e-15


def test_kernel_matches_general_form():
    # same matrix written with a_K = da + 1
    k = KernelParams(0.3, -0.2, 0.1, 0.25)
    a = k.delta_a + 1
    general = np.array([[a, k.u, k.b], [0, 1, 0], [k.b, k.v, a]])
    assert kernel_to_matrix(k) == Homography3(general)


def test_degenerate_kernel_rejected():
    with pytest.raises(DegenerateKernel):
        KernelParams(0, 0, 0, 1.0)
    with pytest.raises(DegenerateKernel):
        KernelParams(0, 1.0, 0, 0.5)


def test_matrix_to_kernel_examples():
    assert matrix_to_kernel(Homography3.identity()) == KernelParams()
    with pytest.raises(NotAKernel) as info:
        matrix_to_kernel(Homography3([[1, 0, 0], [0.01, 1, 0], [0, 0, 1]]))
    assert info.value.residual == pytest.approx(0.01)


@given(kernel_params(), st.floats(1e-3, 1e3), st.sampled_from([1.0, -1.0]))
def test_matrix_to_kernel_scale_invariant(k, s, sign):
    got = matrix_to_kernel(Homography3(sign * s * kernel_to_matrix(k).m))
    np.testing.assert_allclose(got.as_array(), k.as_array(), atol=1e-12)


def test_canonical_images_examples():
    p2, q2 = kernel_canonical_images(KernelParams())
    assert (p2, q2) == (Point2(0, 1), Point2(0, -1))
    p2, q2 = kernel_canonical_images(KernelParams(0, 0.5, 0, 0))
    assert tuple(p2) + tuple(q2) == pytest.approx((0.5, 1, 0.5, -1))
    p2, q2 = kernel_canonical_images(KernelParams(1, 0, 0, 0))
    assert tuple(p2) + tuple(q2) == pytest.approx((0, 0.5, 0, -0.5))


@given(kernel_params())
def test_canonical_images_match_apply(k):
    h = kernel_to_matrix(k)
    p2, q2 = kernel_canonical_images(k)
    for got, src in ((p2, Point2(0, 1)), (q2, Point2(0, -1))):
        w = apply(h, src)
        assert abs(got.x - w.x) < 1e-12 and abs(got.y - w.y) < 1e-12
    # M3, N3 are fixed
    for x in (-1.0, 1.0):
        w = apply(h, Point2(x, 0))
        assert abs(w.x - x) < 1e-12 and abs(w.y) < 1e-12


def test_angular_offsets_examples():
    assert kernel_to_angular_offsets(KernelParams()).as_array().tolist() == [0, 0, 0, 0]
    np.testing.assert_allclose(kernel_to_angular_offsets(KernelParams(0.2, 0, 0, 0)).as_array(), [0.2] * 4)
    np.testing.assert_allclose(geometric_angular_offsets(KernelParams(0.2, 0, 0, 0)), [0.2] * 4, atol=1e-12)
    # theta, alpha, beta, gamma = da+b+u+v, da-b-u+v, da+b-u-v, da-b+u-v
    k = KernelParams(0, 0.1, 0.2, 0.3)
    np.testing.assert_allclose(kernel_to_angular_offsets(k).as_array(), [0.6, 0.0, -0.4, -0.2], atol=1e-15)
    np.testing.assert_allclose(geometric_angular_offsets(k), [0.6, 0.0, -0.4, -0.2], atol=1e-12)


@given(kernel_params())
def test_angular_offsets_match_geometry(k):
    np.testing.assert_allclose(kernel_to_angular_offsets(k).as_array(), geometric_angular_offsets(k), atol=1e-9)


def test_angular_inverse_examples():
    assert angular_offsets_to_kernel(AngularOffsets(0, 0, 0, 0)) == KernelParams()
    np.testing.assert_allclose(angular_offsets_to_kernel(AngularOffsets(0.2, 0.2, 0.2, 0.2)).as_array(), [0.2, 0, 0, 0])


@given(kernel_params())
def test_angular_roundtrip(k):
    back = angular_offsets_to_kernel(kernel_to_angular_offsets(k))
    np.testing.assert_allclose(back.as_array(), k.as_array(), atol=1e-12)
    a = kernel_to_angular_offsets(k)
    np.testing.assert_allclose(kernel_to_angular_offsets(back).as_array(), a.as_array(), atol=1e-12)


def test_angular_inverse_degenerate():
    # da = 0, v = 1 puts P2 at infinity
    bad = kernel_to_angular_offsets.__globals__["ANGULAR_MAP"] @ np.array([0.0, 0.0, 0.0, 1.0])
    with pytest.raises(DegenerateKernel):
        angular_offsets_to_kernel(AngularOffsets(*bad))


def test_cot_theta_examples():
    assert cot_theta(KernelParams()) == 1.0
    assert cot_theta(KernelParams(0.2, 0, 0, 0)) == pytest.approx(1.2)
    assert cot_theta(KernelParams(0, 0.1, 0.2, 0.3)) == pytest.approx(1.6)


@given(kernel_params())
def test_cot_theta_is_one_plus_dtheta(k):
    assert cot_theta(k) == pytest.approx(1 + kernel_to_angular_offsets(k).d_theta, abs=1e-9)


def test_json():
    k = KernelParams(0.1, 0.2, 0.3, 0.4)
    assert k.to_json() == {"dak": 0.1, "bk": 0.2, "uk": 0.3, "vk": 0.4}
    assert KernelParams.from_json(k.to_json()) == k
    a = kernel_to_angular_offsets(k)
    assert AngularOffsets.from_json(a.to_json()) == a
