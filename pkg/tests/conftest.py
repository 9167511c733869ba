import math

import numpy as np
import pytest

from harmonia.polynomial import HomogeneousPolynomial, laplacian, monomials, multiply_norm_power


def random_form(rng, n, degree, scale=1.0):
    """Dense random form with standard normal coefficients."""
    basis = monomials(n, degree)
    coefs = rng.standard_normal(len(basis)) * scale
    return HomogeneousPolynomial(n, degree, dict(zip(basis, coefs)))


def random_unit(rng, n):
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def sphere_sample(n, count, seed=20240611):
    """Fixed-seed quasi-random points on the sphere (scrambled Sobol mapped through the normal CDF)."""
    from scipy.stats import norm, qmc

    m = max(count - 1, 1).bit_length()
    u = qmc.Sobol(d=n, scramble=True, seed=seed).random_base2(m)[:count]
    u = np.clip(u, 1e-12, 1 - 1e-12)
    x = norm.ppf(u)
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def harmonic_projection(p):
    """Top-degree harmonic projection sum_j c_j |x|^(2j) Lap^j p (closed-form coefficients).

    c_0 = 1, c_{j+1} = -c_j / (2 (j+1) (n + 2m - 2j - 4)), m = deg p.
    """
    n, m = p.n, p.degree
    total = HomogeneousPolynomial.zero(n, m)
    c = 1.0
    lap = p
    j = 0
    while lap.degree >= 0 and 2 * j <= m:
        total = total + multiply_norm_power(lap, j) * c
        if lap.degree < 2:
            break
        c = -c / (2.0 * (j + 1) * (n + 2 * m - 2 * j - 4))
        lap = laplacian(lap)
        j += 1
    return total


def oracle_decompose(f):
    """Components f_0, ..., f_2k from Laplacian powers, independent of the library's linear solve.

    f_2j = H[Lap^(k-j) f] / prod_{a=1}^{k-j} 2a (n + 4j + 2a - 2).
    """
    n, k = f.n, f.degree // 2
    out = []
    for j in range(k + 1):
        g = f
        for _ in range(k - j):
            g = laplacian(g)
        denom = math.prod(2 * a * (n + 4 * j + 2 * a - 2) for a in range(1, k - j + 1))
        out.append(harmonic_projection(g) / denom)
    return out


def coef_distance(f, g):
    keys = set(f.terms) | set(g.terms)
    return max((abs(f.coefficient(e) - g.coefficient(e)) for e in keys), default=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def motzkin():
    return HomogeneousPolynomial(3, 6, {(2, 4, 0): 1, (4, 2, 0): 1, (0, 0, 6): 1, (2, 2, 2): -3})
