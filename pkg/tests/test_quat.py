"""Quaternion algebra unit tests."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nks3x3 import quat
from nks3x3.errors import ZeroQuaternion
from nks3x3.quat import ImQuat, Quaternion

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
quats = st.builds(Quaternion, finite, finite, finite, finite)
imquats = st.builds(ImQuat, finite, finite, finite)


def test_hamilton_table():
    # i*j = k, j*k = i, k*i = j, i*i = -1
    assert quat.I * quat.J == quat.K
    assert quat.J * quat.K == quat.I
    assert quat.K * quat.I == quat.J
    assert quat.I * quat.I == -quat.ONE
    assert quat.J * quat.I == -quat.K


@given(quats, quats)
def test_norm_multiplicative(a, b):
    assert math.isclose((a * b).norm(), a.norm() * b.norm(), rel_tol=1e-9, abs_tol=1e-9)


@given(quats, quats, quats)
def test_mul_associative(a, b, c):
    lhs = ((a * b) * c).as_array()
    rhs = (a * (b * c)).as_array()
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-6)


@given(quats)
def test_inverse(a):
    if a.norm2() < 1e-12:
        return
    prod = a * a.inverse()
    assert np.allclose(prod.as_array(), [1, 0, 0, 0], atol=1e-9)


def test_inverse_zero_raises():
    with pytest.raises(ZeroQuaternion):
        Quaternion(0.0, 0.0, 0.0, 0.0).inverse()


@given(quats, quats)
def test_conjugate_antihomomorphism(a, b):
    lhs = (a * b).conjugate().as_array()
    rhs = (b.conjugate() * a.conjugate()).as_array()
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9)


@given(imquats, imquats)
def test_commutator_is_twice_cross(a, b):
    comm, twice_cross = quat.commutator_cross(a, b)
    assert np.allclose(comm.as_array(), twice_cross.as_array(), rtol=1e-9, atol=1e-7)


def test_cross_matches_numpy():
    a = ImQuat(0.3, -1.2, 2.0)
    b = ImQuat(1.0, 0.5, -0.7)
    assert np.allclose(a.cross(b).as_array(), np.cross(a.as_array(), b.as_array()))


@given(imquats)
def test_exp_im_unit_norm(v):
    assert math.isclose(quat.exp_im(v).norm(), 1.0, abs_tol=1e-12)


def test_exp_im_values():
    # exp(i * pi/2) = i
    e = quat.exp_im(ImQuat(math.pi / 2, 0.0, 0.0))
    assert np.allclose(e.as_array(), [0, 1, 0, 0], atol=1e-15)
    # small-angle series branch
    e = quat.exp_im(ImQuat(1e-10, 0.0, 0.0))
    assert np.allclose(e.as_array(), [1, 1e-10, 0, 0], atol=1e-18)
    assert math.isclose(e.norm(), 1.0, abs_tol=1e-15)


def test_exp_im_derivative_at_zero():
    # d/dt exp(t v)|_0 = v
    v = ImQuat(0.4, -0.2, 0.9)
    h = 1e-6
    fd = (quat.exp_im(ImQuat(*(h * v.as_array()))).as_array()
          - quat.exp_im(ImQuat(*(-h * v.as_array()))).as_array()) / (2 * h)
    assert np.allclose(fd, v.to_quaternion().as_array(), atol=1e-9)


def test_array_helpers_match_scalar():
    rng = np.random.default_rng(7)
    A = rng.normal(size=(5, 4))
    B = rng.normal(size=(5, 4))
    prod = quat.qmul(A, B)
    for i in range(5):
        a = Quaternion(*A[i])
        b = Quaternion(*B[i])
        assert np.allclose(prod[i], (a * b).as_array())
    assert np.allclose(quat.qconj(A)[:, 0], A[:, 0])
    assert np.allclose(quat.qconj(A)[:, 1:], -A[:, 1:])
    n = quat.qnormalize(A)
    assert np.allclose(np.linalg.norm(n, axis=-1), 1.0)


def test_qexp_im_matches_scalar():
    rng = np.random.default_rng(3)
    V = rng.normal(size=(7, 3)) * 2.0
    V[0] = 0.0
    V[1] = [1e-12, 0, 0]
    E = quat.qexp_im(V)
    for i in range(7):
        assert np.allclose(E[i], quat.exp_im(ImQuat(*V[i])).as_array(), atol=1e-14)


def test_vec3_embed3():
    rng = np.random.default_rng(5)
    Q = rng.normal(size=(4, 4))
    assert np.allclose(quat.vec3(Q), Q[:, 1:])
    V = rng.normal(size=(4, 3))
    emb = quat.embed3(V)
    assert np.allclose(emb[:, 0], 0.0)
    assert np.allclose(emb[:, 1:], V)
