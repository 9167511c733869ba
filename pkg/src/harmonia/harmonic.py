"""Harmonic analysis on spheres: harmonic decomposition, Gegenbauer
polynomials and zonal harmonics."""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegreeError, DimensionError
from .polynomial import (
    HomogeneousPolynomial,
    laplacian,
    monomials,
    multiply_norm_power,
)


def harmonic_dim(n, j):
    """Dimension of the space of harmonic forms of degree ``j`` in ``n`` variables."""
    n, j = int(n), int(j)
    if j < 0:
        return 0
    if j < 2:
        return 1 if j == 0 else n
    return math.comb(n + j - 1, j) - math.comb(n + j - 3, j - 2)


def sphere_area(n):
    """Surface area of the unit sphere S^{n-1} in R^n."""
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


@dataclass(frozen=True)
class HarmonicExpansion:
    """Harmonic components ``f_0, f_2, ..., f_{2k}`` of a form of degree ``2k``.

    ``components[j]`` is harmonic of degree ``2j`` and the form equals
    ``sum_j ||x||^(2(k-j)) components[j]``.
    """

    n: int
    k: int
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) != self.k + 1:
            raise ValueError(f"expected {self.k + 1} components, got {len(comps)}")
        for j, c in enumerate(comps):
            if c.n != self.n or c.degree != 2 * j:
                raise DegreeError(
                    f"component {j} must be a degree-{2 * j} form in {self.n} variables, "
                    f"got degree {c.degree} in {c.n}"
                )

    def __getitem__(self, j):
        return self.components[j]

    def __len__(self):
        return len(self.components)

    def scaled(self, factors):
        """Expansion with component ``j`` multiplied by ``factors[j]``."""
        return HarmonicExpansion(
            self.n, self.k, tuple(c * float(a) for c, a in zip(self.components, factors))
        )


@lru_cache(maxsize=None)
def _lift_matrix(n, d):
    """Matrix of ``q -> laplacian(||x||^2 q)`` on forms of degree ``d`` (monomial basis).

    On each block ``||x||^(2i) H_(d-2i)`` it acts as multiplication by
    ``2(i+1)(n + 2d - 2i)`` > 0, hence it is invertible.
    """
    basis = monomials(n, d)
    index = {e: i for i, e in enumerate(basis)}
    mat = np.zeros((len(basis), len(basis)))
    for col, e in enumerate(basis):
        image = laplacian(multiply_norm_power(HomogeneousPolynomial(n, d, {e: 1.0}), 1))
        for exp, c in image.terms.items():
            mat[index[exp], col] = c
    return mat


def harmonic_decompose(f):
    """Unique harmonic expansion of a form of even degree.

    Peels off the top component: solve ``laplacian(||x||^2 q) = laplacian(f)``
    for ``q`` of degree ``deg f - 2``, so ``f - ||x||^2 q`` is harmonic, then
    recurse on ``q``.
    """
    if f.degree % 2:
        raise DegreeError(f"harmonic expansions need an even degree, got {f.degree}")
    if f.n < 2:
        raise DimensionError("harmonic expansions need at least two variables")
    k = f.degree // 2
    top_down = []
    rest = f
    for d in range(f.degree, 0, -2):
        rhs = laplacian(rest).coefficient_vector()
        mat = _lift_matrix(f.n, d - 2)
        q = np.linalg.solve(mat, rhs)
        # one step of iterative refinement
        q += np.linalg.solve(mat, rhs - mat @ q)
        quotient = HomogeneousPolynomial.from_coefficient_vector(f.n, d - 2, q)
        top_down.append(rest - multiply_norm_power(quotient, 1))
        rest = quotient
    top_down.append(rest)
    return HarmonicExpansion(f.n, k, tuple(reversed(top_down)))


def reconstruct(expansion):
    """Assemble ``sum_j ||x||^(2(k-j)) f_{2j}``."""
    k = expansion.k
    total = HomogeneousPolynomial.zero(expansion.n, 2 * k)
    for j, comp in enumerate(expansion.components):
        total = total + multiply_norm_power(comp, k - j)
    return total


def gegenbauer(j, alpha, t):
    """Gegenbauer polynomial ``C_j^(alpha)`` evaluated at ``t`` (scalar or array)."""
    j = int(j)
    if j < 0:
        raise ValueError(f"degree must be nonnegative, got {j}")
    t_arr = np.asarray(t, dtype=float)
    prev = np.ones_like(t_arr)
    if j == 0:
        return prev if t_arr.ndim else float(prev)
    cur = 2.0 * alpha * t_arr
    for i in range(2, j + 1):
        prev, cur = cur, (2.0 * t_arr * (i + alpha - 1.0) * cur - (i + 2.0 * alpha - 2.0) * prev) / i
    return cur if t_arr.ndim else float(cur)


@lru_cache(maxsize=None)
def gegenbauer_coefficients(j, alpha):
    """Monomial coefficients (ascending powers of t) of ``C_j^(alpha)``."""
    prev = np.zeros(j + 1)
    prev[0] = 1.0
    if j == 0:
        return tuple(prev)
    cur = np.zeros(j + 1)
    cur[1] = 2.0 * alpha
    for i in range(2, j + 1):
        shifted = np.zeros(j + 1)
        shifted[1:] = cur[:-1]
        prev, cur = cur, (2.0 * (i + alpha - 1.0) * shifted - (i + 2.0 * alpha - 2.0) * prev) / i
    return tuple(cur)


def _gegenbauer_scale(n, j):
    alpha = (n - 2) / 2.0
    return harmonic_dim(n, j) / (sphere_area(n) * gegenbauer(j, alpha, 1.0))


def normalized_gegenbauer(n, j, t):
    """``g_j(t)``: the Gegenbauer polynomial scaled so ``g_j(<x, y>)`` reproduces H_j.

    Requires n >= 3 (positive Gegenbauer parameter).
    """
    n = int(n)
    if n < 3:
        raise ValueError(f"normalized Gegenbauer polynomials need n >= 3, got {n}")
    return _gegenbauer_scale(n, j) * gegenbauer(j, (n - 2) / 2.0, t)


def zonal_harmonic(n, j, y):
    """Harmonic form of degree ``j`` representing evaluation at the unit vector ``y`` on H_j."""
    y = np.asarray(y, dtype=float)
    n = int(n)
    if y.shape != (n,):
        raise DimensionError(f"pole has shape {y.shape}, expected ({n},)")
    if n < 3:
        raise ValueError(f"zonal harmonics are implemented for n >= 3, got {n}")
    if abs(np.linalg.norm(y) - 1.0) > 1e-12:
        raise ValueError(f"pole must be a unit vector (norm {np.linalg.norm(y)!r})")
    return _zonal_harmonic(n, int(j), tuple(y.tolist()))


@lru_cache(maxsize=4096)
def _zonal_harmonic(n, j, y):
    coeffs = gegenbauer_coefficients(j, (n - 2) / 2.0)
    scale = _gegenbauer_scale(n, j)
    inner = HomogeneousPolynomial.linear(y)
    # ||x||^j C_j(<x,y>/||x||) = sum_m c_m <x,y>^m ||x||^(j-m), only j-m even
    total = HomogeneousPolynomial.zero(n, j)
    power = HomogeneousPolynomial.constant(n, 1.0)
    for m in range(j + 1):
        if m:
            power = power * inner
        if (j - m) % 2 or coeffs[m] == 0.0:
            continue
        total = total + multiply_norm_power(power, (j - m) // 2) * (scale * coeffs[m])
    return total
