import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import eval_gegenbauer, roots_jacobi

from harmonia._linalg import jacobi_eigh, tridiagonal_eigh
from harmonia.errors import SingularKernelError
from harmonia.harmonic import gegenbauer_coefficients, normalized_gegenbauer, sphere_area
from harmonia.kernel import (
    GegenbauerKernel,
    fang_fawzi_kernel,
    frobenius_threshold,
    gegenbauer_expand,
    make_kernel,
    power_kernel,
    power_kernel_polynomial,
    toeplitz_matrix,
)


def loglog_slope(s, y):
    return np.polyfit(np.log(s), np.log(y), 1)[0]


def gamma_ratio(n, s, j):
    return math.exp(
        math.lgamma(s + 1) + math.lgamma(s + n / 2) - math.lgamma(s - j + 1) - math.lgamma(s + j + n / 2)
    )


def test_power_kernel_examples():
    assert_allclose(power_kernel(3, 1).coefficient(1), 2 / 5, rtol=1e-15)
    for n in (3, 4, 5, 7):
        for s in (0, 1, 4, 20, 60):
            assert power_kernel(n, s).coefficient(0) == 1.0
    # 1/lambda_2 - 1 = n / (2s) exactly, so it decays like 1/s
    for n, s in [(3, 8), (4, 30), (7, 64)]:
        assert_allclose(1 / power_kernel(n, s).coefficient(1) - 1, n / (2 * s), rtol=1e-13)


@pytest.mark.parametrize("n", [3, 4, 6])
@pytest.mark.parametrize("s", [1, 5, 17, 40])
def test_power_kernel_matches_gamma_ratio(n, s):
    lam = power_kernel(n, s).lambdas
    assert_allclose(lam, [gamma_ratio(n, s, j) for j in range(s + 1)], rtol=1e-12)
    assert np.all(np.diff(lam) < 0)


def test_power_kernel_pads_with_zero():
    assert power_kernel(3, 2).coefficient(3) == 0.0


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("s", range(1, 7))
def test_expand_power_polynomial(n, s):
    expanded = gegenbauer_expand(power_kernel_polynomial(n, s), n).lambdas
    assert_allclose(expanded, power_kernel(n, s).lambdas, rtol=1e-8)


def test_expand_basis_element():
    # h = g_4 for n = 3, in ascending monomial coefficients
    c = np.asarray(gegenbauer_coefficients(4, 0.5)) * normalized_gegenbauer(3, 4, 1.0) / eval_gegenbauer(4, 0.5, 1.0)
    lam = gegenbauer_expand(c, 3).lambdas
    assert_allclose(lam, [0.0, 0.0, 1.0], atol=1e-12)


def test_expand_constant():
    lam = gegenbauer_expand([1.0], 3).lambdas
    assert_allclose(lam, [4 * math.pi], rtol=1e-14)


def test_expand_t_squared():
    k = gegenbauer_expand([0.0, 0.0, 1.0], 3)
    ref = power_kernel(3, 1).lambdas
    assert_allclose(k.lambdas / k.lambdas[0], ref, rtol=1e-13)


def test_expand_rejects_odd():
    with pytest.raises(ValueError):
        gegenbauer_expand([0.0, 1.0, 1.0], 3)


def test_expand_reconstructs_on_grid():
    c = np.array([0.3, 0.0, -1.2, 0.0, 0.0, 0.0, 2.5])
    k = gegenbauer_expand(c, 4)
    t = np.linspace(-1, 1, 101)
    assert_allclose(k(t), np.polynomial.polynomial.polyval(t, c), rtol=1e-9, atol=1e-12)


def test_toeplitz_structure():
    for n in (3, 4):
        a0 = toeplitz_matrix(n, 0, 6)
        assert_allclose(a0, np.diag(np.diag(a0)), atol=1e-15)
        assert np.all(np.diag(a0) > 0)
        a3 = toeplitz_matrix(n, 3, 5)
        i, j = np.indices(a3.shape)
        assert np.abs(a3[(i + j + 3) % 2 == 1]).max() < 1e-15
        assert_allclose(a3, a3.T, atol=0)


def test_toeplitz_against_independent_quadrature():
    n, ell, s = 3, 2, 2
    z, w = roots_jacobi(200, 0.0, 0.0)
    g = [normalized_gegenbauer(n, j, z) for j in range(s + 1)]
    gl = normalized_gegenbauer(n, ell, z)
    ref = np.array([[np.sum(w * g[i] * g[j] * gl) for j in range(s + 1)] for i in range(s + 1)])
    assert_allclose(toeplitz_matrix(n, ell, s), ref, rtol=1e-12, atol=1e-16)
    # diagonal of A_0 equals the Gegenbauer norm closed form scaled by the normalization
    a0 = np.diag(toeplitz_matrix(4, 0, 5))
    alpha = 1.0
    for j in range(6):
        closed = math.pi * 2 ** (1 - 2 * alpha) * math.gamma(j + 2 * alpha) / (
            math.factorial(j) * (j + alpha) * math.gamma(alpha) ** 2
        )
        scale = normalized_gegenbauer(4, j, 1.0) / eval_gegenbauer(j, alpha, 1.0)
        g0 = 1 / sphere_area(4)
        assert_allclose(a0[j], scale**2 * closed * g0, rtol=1e-12)


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_fang_fawzi_invariants(n, k):
    for s in (k, k + 3, 12):
        sol = fang_fawzi_kernel(n, k, s)
        lam = sol.kernel.lambdas
        assert abs(lam[0] - 1) < 1e-10
        assert abs(np.linalg.norm(sol.eigenvector) - 1) < 1e-12
        assert abs(sol.rho - (k - k * sol.eigenvalue)) < 1e-10
        assert np.all(lam[1 : k + 1] > 0) and np.all(lam[1 : k + 1] <= 1 + 1e-12)
        t = np.linspace(-1, 1, 10001)
        h = sol.kernel(t)
        assert h.min() >= -1e-10 * np.abs(h).max()


def test_fang_fawzi_kernel_is_a_square():
    n, k, s = 3, 2, 7
    sol = fang_fawzi_kernel(n, k, s)
    t = np.linspace(-1, 1, 301)
    q = sum(sol.eta[i] * normalized_gegenbauer(n, i, t) for i in range(s + 1))
    h = sol.kernel(t)
    ratio = (q * q) / h
    mask = np.abs(h) > 1e-6 * np.abs(h).max()
    assert_allclose(ratio[mask], ratio[0], rtol=1e-8)
    assert sum(sol.eta[i] * normalized_gegenbauer(n, i, 1.0) for i in range(s + 1)) > 0


def test_fang_fawzi_rate():
    s = np.arange(8, 41, 4)
    rho = [fang_fawzi_kernel(3, 2, int(v)).rho for v in s]
    assert np.all(np.diff(rho) < 0)
    r = fang_fawzi_kernel(3, 2, 40).rho / fang_fawzi_kernel(3, 2, 20).rho
    assert 0.15 < r < 0.35


def test_fang_fawzi_rejects_small_s():
    with pytest.raises(ValueError):
        fang_fawzi_kernel(3, 3, 2)


def test_frobenius_examples():
    assert frobenius_threshold(GegenbauerKernel.identity(3, 4), 3) == 0.0
    assert_allclose(frobenius_threshold(power_kernel(3, 1), 1), 1.5 * math.sqrt(5), rtol=1e-14)
    with pytest.raises(SingularKernelError) as info:
        frobenius_threshold(power_kernel(3, 2), 3)
    assert info.value.index == 6


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("k", [2, 3])
def test_frobenius_strictly_decreasing(n, k):
    for kind in ("power", "fangfawzi"):
        tau = [frobenius_threshold(make_kernel(kind, n, k, s), k) for s in range(k, 41)]
        assert np.all(np.diff(tau) < 0), kind


def test_frobenius_slopes():
    s = np.arange(8, 41)
    power = [frobenius_threshold(power_kernel(3, int(v)), 2) for v in s]
    ff = [frobenius_threshold(fang_fawzi_kernel(3, 2, int(v)).kernel, 2) for v in s]
    assert -1.3 <= loglog_slope(s, power) <= -0.8
    assert -2.5 <= loglog_slope(s, ff) <= -1.6
    assert -1.3 <= loglog_slope(np.arange(8, 65), [frobenius_threshold(power_kernel(3, int(v)), 2) for v in range(8, 65)]) <= -0.8


def test_fang_fawzi_beats_power():
    for s in range(6, 21):
        assert frobenius_threshold(fang_fawzi_kernel(3, 2, s).kernel, 2) < frobenius_threshold(power_kernel(3, s), 2)


def test_kernel_json():
    assert power_kernel(3, 1).to_dict() == {"n": 3, "s": 1, "lambdas": [1.0, 0.4]}


def test_make_kernel_unknown():
    with pytest.raises(ValueError):
        make_kernel("gaussian", 3, 2, 4)


def test_eigensolvers_against_numpy(rng):
    a = rng.standard_normal((25, 25))
    a = a + a.T
    vals, vecs = jacobi_eigh(a)
    assert_allclose(vals, np.linalg.eigvalsh(a), atol=1e-12)
    assert_allclose(vecs.T @ vecs, np.eye(25), atol=1e-12)
    assert_allclose(a @ vecs, vecs * vals, atol=1e-11)
    d, e = rng.standard_normal(30), rng.standard_normal(29)
    vals, vecs = tridiagonal_eigh(d, e)
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert_allclose(vals, np.linalg.eigvalsh(t), atol=1e-12)
    assert_allclose(t @ vecs, vecs * vals, atol=1e-11)
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))
