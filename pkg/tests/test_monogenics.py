"""Spherical monogenics, the numerical Dirac operator, and the ball
polynomials.

The load-bearing oracle here is dirac_numeric: the closed-form Jacobi
representations (including their leading constants) are checked against the
defining iterated-Dirac construction d^n((1-|x|^2)^n Y_k), and the
first-derivative identities on x^s Y_k are exercised for both parities of s.
"""

import math

import numpy as np
import pytest

from cpswf.algebra import from_vector, grade_project, scalar_mv
from cpswf.monogenics import (
    SPHERE_NORM_M2,
    CliffordLegendre,
    clifford_legendre_eval,
    dirac_numeric,
    gram_matrix,
    monogenic_eval,
    monogenic_space_dim,
)


# ---------------------------------------------------------------------------
# Monogenics
# ---------------------------------------------------------------------------

def test_monogenic_degree_zero():
    assert monogenic_eval(0, (0.7, -0.3)) == scalar_mv(2, 1.0)


def test_monogenic_degree_one():
    assert monogenic_eval(1, (1.0, 0.0)).dense() == pytest.approx([1, 0, 0, 0])
    assert monogenic_eval(1, (0.0, 1.0)).dense() == pytest.approx([0, 0, 0, -1])


def test_monogenic_degree_two_closed_form(rng):
    # squaring the degree-1 value: (x1^2 - x2^2) - 2 x1 x2 e12
    for _ in range(5):
        x1, x2 = rng.standard_normal(2)
        got = monogenic_eval(2, (x1, x2))
        want = monogenic_eval(1, (x1, x2)) * monogenic_eval(1, (x1, x2))
        assert (got - want).norm() <= 1e-13 * max(1.0, want.norm())
        assert got.coefficient(0) == pytest.approx(x1**2 - x2**2)
        assert got.coefficient(0b11) == pytest.approx(-2 * x1 * x2)


def test_monogenic_homogeneity(rng):
    for k in (1, 3, 6):
        x = rng.standard_normal(2)
        for t in (0.5, 2.0):
            scaled = monogenic_eval(k, t * x)
            base = monogenic_eval(k, x)
            assert scaled.norm() == pytest.approx(t**k * base.norm(), rel=1e-12)


def test_monogenic_left_monogenicity(rng):
    # numerical Dirac residual <= 1e-6 with h = 1e-4
    for k in range(1, 9):
        x = rng.uniform(-0.6, 0.6, size=2)
        resid = dirac_numeric(lambda p, k=k: monogenic_eval(k, p), x, h=1e-4)
        assert resid.norm() <= 1e-6


def test_monogenic_space_dimension():
    assert monogenic_space_dim(5, 2) == 1
    assert monogenic_space_dim(3, 3) == 4
    assert monogenic_space_dim(0, 4) == 1


def test_sphere_norm_constant():
    # |Y^_k| = 1 on the circle, so the L2 circle norm is sqrt(2 pi) for all k
    theta = np.linspace(0, 2 * np.pi, 2048, endpoint=False)
    for k in (0, 1, 4):
        vals = [monogenic_eval(k, (math.cos(t), math.sin(t))).norm() for t in theta[:32]]
        assert np.max(np.abs(np.array(vals) - 1.0)) <= 1e-13
    assert SPHERE_NORM_M2 == pytest.approx(math.sqrt(2 * math.pi))


# ---------------------------------------------------------------------------
# Numerical Dirac operator
# ---------------------------------------------------------------------------

def test_dirac_constant():
    resid = dirac_numeric(lambda p: scalar_mv(2, 3.7), (0.2, 0.4))
    assert resid.norm() <= 1e-12


def test_dirac_identity_map():
    # d(x) = sum e_j e_j = -m
    out = dirac_numeric(lambda p: from_vector(p), (0.3, -0.1))
    assert (out - scalar_mv(2, -2.0)).norm() <= 1e-9


def test_dirac_clifford_square():
    # d(x^2) = -2x  (s = 2, even)
    out = dirac_numeric(lambda p: from_vector(p) * from_vector(p), (0.4, 0.2))
    want = -2 * from_vector([0.4, 0.2])
    assert (out - want).norm() <= 1e-8


@pytest.mark.parametrize("s", [1, 2, 3, 4])
@pytest.mark.parametrize("k", [0, 1, 3])
def test_dirac_power_rules(s, k, rng):
    # d(x^s Y_k) = -s x^(s-1) Y_k (s even), -(s+2k+m-1) x^(s-1) Y_k (s odd)
    m = 2
    x = rng.uniform(0.2, 0.7, size=2)

    def f(p, s=s, k=k):
        xs = scalar_mv(2, 1.0)
        xv = from_vector(p)
        for _ in range(s):
            xs = xs * xv
        return xs * monogenic_eval(k, p)

    got = dirac_numeric(f, x, h=1e-4, richardson=True)
    xv = from_vector(x)
    xpow = scalar_mv(2, 1.0)
    for _ in range(s - 1):
        xpow = xpow * xv
    factor = -s if s % 2 == 0 else -(s + 2 * k + m - 1)
    want = factor * (xpow * monogenic_eval(k, x))
    assert (got - want).norm() <= 1e-5 * max(1.0, want.norm())


def test_dirac_richardson_improves():
    out_plain = dirac_numeric(lambda p: monogenic_eval(5, p), (0.5, 0.3), h=1e-3)
    out_rich = dirac_numeric(lambda p: monogenic_eval(5, p), (0.5, 0.3), h=1e-3, richardson=True)
    assert out_rich.norm() <= out_plain.norm() + 1e-12


def test_dirac_step_validation():
    with pytest.raises(ValueError):
        dirac_numeric(lambda p: scalar_mv(2, 1.0), (0, 0), h=0.0)


# ---------------------------------------------------------------------------
# Ball polynomials: closed forms vs the iterated-Dirac definition
# ---------------------------------------------------------------------------

def test_order_zero_is_monogenic():
    x = (0.3, 0.5)
    for k in (0, 2):
        got = clifford_legendre_eval(0, k, 2, x)
        assert (got - monogenic_eval(k, x)).norm() <= 1e-14


def test_even_order_frozen_value():
    # d^2((1-|x|^2)^2) at 0: symbolic expansion gives 8 - 16|x|^2 -> 8
    got = clifford_legendre_eval(2, 0, 2, (0.0, 0.0))
    assert got.coefficient(0) == pytest.approx(8.0, rel=1e-13)


def test_order_one_matches_dirac_oracle():
    # oracle: d((1-|x|^2) Y_k); fixes the odd-order leading constant
    for k in (0, 1, 2):
        x = (0.35, -0.2)

        def wrapped(p, k=k):
            u = p[0] ** 2 + p[1] ** 2
            return (1.0 - u) * monogenic_eval(k, p)

        oracle = dirac_numeric(wrapped, x, h=1e-4, richardson=True)
        got = clifford_legendre_eval(1, k, 2, x)
        assert (got - oracle).norm() <= 1e-6 * max(1.0, oracle.norm())


def test_order_one_value():
    # closed form reduces to -2 x Y_k at n = 1 (constant 2^(2n'+1) (2n'+1)!)
    x = (0.4, 0.1)
    got = clifford_legendre_eval(1, 0, 2, x)
    want = -2 * from_vector(x)
    assert (got - want).norm() <= 1e-13


@pytest.mark.parametrize("n,k", [(2, 0), (3, 0), (2, 1), (3, 1), (4, 0), (5, 1)])
def test_higher_orders_match_iterated_dirac(n, k):
    # apply dirac_numeric n times to (1-|x|^2)^n Y_k; O(h^2) error compounds,
    # so tolerances widen with n
    x = np.array([0.31, -0.23])
    h = 5e-3

    def iterated(p0):
        def base(p, n=n, k=k):
            u = p[0] ** 2 + p[1] ** 2
            return (1.0 - u) ** n * monogenic_eval(k, p)

        f = base
        for _ in range(n):
            f = (lambda g: lambda p: dirac_numeric(g, p, h=h, richardson=True))(f)
        return f(p0)

    oracle = iterated(x)
    got = clifford_legendre_eval(n, k, 2, x)
    assert (got - oracle).norm() <= 2e-3 * max(1.0, got.norm())


def test_parity_structure(rng):
    # even orders stay in grades {0, 2}; odd orders in grade 1
    x = rng.uniform(-0.5, 0.5, size=2)
    even = clifford_legendre_eval(4, 1, 2, x)
    assert grade_project(even, 1).norm() <= 1e-12 * even.norm()
    odd = clifford_legendre_eval(3, 1, 2, x)
    assert grade_project(odd, 0).norm() <= 1e-12 * odd.norm()
    assert grade_project(odd, 2).norm() <= 1e-12 * odd.norm()


def test_normalized_unit_ball_norm(rule256):
    # 2D polar quadrature of |C~|^2 over the ball
    theta = 2 * np.pi * np.arange(128) / 128
    for (n, k) in [(0, 0), (1, 0), (2, 1), (5, 2)]:
        b = CliffordLegendre(n, k, 2)
        vals = b.field(rule256.nodes[:, None], theta[None, :], normalized=True)
        norm_sq = np.sum(
            (rule256.weights * rule256.nodes)[:, None]
            * (2 * np.pi / 128)
            * np.sum(np.abs(vals) ** 2, axis=-1)
        )
        assert norm_sq == pytest.approx(1.0, abs=1e-8)


def test_norm_reciprocal_diagnostic():
    # computed ball norm (unit-sphere-norm angular factor) times the quoted
    # normalizer sqrt(2k+2n+m)/(2^n n!) is exactly 1: the quoted constant is
    # the reciprocal of the norm, not the norm itself
    for (n, k) in [(0, 0), (1, 0), (2, 0), (3, 1), (4, 2), (7, 3)]:
        b = CliffordLegendre(n, k, 2)
        assert b.norm * b.factorial_normalizer() == pytest.approx(1.0, rel=1e-10)


def test_jacobi_parameters_by_parity():
    even = CliffordLegendre(4, 2, 2)
    assert even.jacobi_beta == pytest.approx(2 + 1 - 1)
    odd = CliffordLegendre(5, 2, 2)
    assert odd.jacobi_beta == pytest.approx(2 + 1)


# ---------------------------------------------------------------------------
# Gram matrices
# ---------------------------------------------------------------------------

def test_gram_single_element(rule256):
    g = gram_matrix([CliffordLegendre(0, 0, 2)], rule256, q_theta=128)
    assert g[0, 0] == pytest.approx(1.0, abs=1e-8)


def test_gram_same_degree_orthonormal(rule256):
    basis = [CliffordLegendre(n, 1, 2) for n in range(6)]
    g = gram_matrix(basis, rule256, q_theta=128)
    assert np.max(np.abs(g - np.eye(6))) <= 1e-8


def test_gram_cross_degree_zero(rule256):
    basis = [CliffordLegendre(0, 0, 2), CliffordLegendre(0, 1, 2), CliffordLegendre(2, 3, 2)]
    g = gram_matrix(basis, rule256, q_theta=128)
    off = g - np.diag(np.diag(g))
    assert np.max(np.abs(off)) <= 1e-10


def test_gram_resolution_doubling(rule256):
    basis = [CliffordLegendre(n, 2, 2) for n in range(4)]
    g1 = gram_matrix(basis, rule256, q_theta=64)
    g2 = gram_matrix(basis, rule256, q_theta=128)
    assert np.max(np.abs(g1 - g2)) <= 1e-12


def test_angular_integral_reduces_to_bessel():
    # circle integral of e^(-2 pi i r <xi, w>) Y^_k(w) equals
    # 2 pi (-i)^k J_k(2 pi r) Y^_k(xi) in the plane: the identity that turns
    # the ball transform into the radial kernel
    from cpswf.special import bessel_j

    q = 512
    theta = 2 * np.pi * np.arange(q) / q
    w_theta = 2 * np.pi / q
    omega = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    for k in (0, 1, 3):
        angular = np.stack(
            [np.asarray(monogenic_eval(k, w).dense()) for w in omega], axis=0
        )
        for r in (0.4, 1.3):
            for xi_ang in (0.3, 2.2):
                xi = np.array([math.cos(xi_ang), math.sin(xi_ang)])
                phase = np.exp(-2j * np.pi * r * (omega @ xi))
                lhs = w_theta * np.sum(phase[:, None] * angular, axis=0)
                rhs = (
                    2 * np.pi * (-1j) ** k * bessel_j(k, 2 * np.pi * r)
                    * np.asarray(monogenic_eval(k, xi).dense())
                )
                assert np.max(np.abs(lhs - rhs)) <= 1e-12
