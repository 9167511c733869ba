"""Averaging kernels expressed in normalized Gegenbauer coordinates.

A kernel is an even polynomial ``h(t) = sum_j lambda_{2j} g_{2j}(t)``
that is nonnegative on [-1, 1].  Its averaging operator acts on the
harmonic component of degree ``2j`` as multiplication by ``lambda_{2j}``.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from ._linalg import jacobi_eigh
from .cubature import gauss_jacobi
from .errors import SingularKernelError
from .harmonic import harmonic_dim, normalized_gegenbauer, sphere_area

SINGULAR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class GegenbauerKernel:
    """Even kernel of degree ``2s`` given by its coefficients ``lambda_0, lambda_2, ..., lambda_2s``."""

    n: int
    s: int
    lambdas: np.ndarray
    kind: str = field(default="custom", compare=False)

    def __post_init__(self):
        lam = np.array(self.lambdas, dtype=float).ravel()
        if lam.size != self.s + 1:
            raise ValueError(f"kernel of half-degree {self.s} needs {self.s + 1} coefficients")
        lam.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)

    @classmethod
    def identity(cls, n, s):
        """All coefficients equal to one (the identity averaging operator up to degree 2s)."""
        return cls(n, s, np.ones(s + 1), kind="identity")

    def coefficient(self, j):
        """``lambda_{2j}``; zero above the kernel degree."""
        return float(self.lambdas[j]) if 0 <= j <= self.s else 0.0

    def multipliers(self, k):
        """``[lambda_0, lambda_2, ..., lambda_2k]``, zero-padded past ``2s``."""
        return np.array([self.coefficient(j) for j in range(k + 1)])

    def __call__(self, t):
        """``h(t)``."""
        t = np.asarray(t, dtype=float)
        total = np.zeros_like(t)
        for j, lam in enumerate(self.lambdas):
            if lam != 0.0:
                total = total + lam * normalized_gegenbauer(self.n, 2 * j, t)
        return total if t.ndim else float(total)

    def to_dict(self):
        return {"n": self.n, "s": self.s, "lambdas": [float(v) for v in self.lambdas]}


@dataclass(frozen=True, eq=False)
class FangFawziSolution:
    kernel: GegenbauerKernel
    rho: float
    eigenvalue: float
    eigenvector: np.ndarray
    eta: np.ndarray


def _weight_exponent(n):
    return (n - 3) / 2.0


def _gegenbauer_table(n, top, nodes):
    """Rows ``g_0 .. g_top`` evaluated at ``nodes``."""
    return np.array([normalized_gegenbauer(n, j, nodes) for j in range(top + 1)])


def gegenbauer_expand(h, n):
    """Kernel coefficients of the even polynomial ``h`` (ascending monomial coefficients).

    ``lambda_j = int h g_j w / int g_j^2 w`` with ``w(t) = (1 - t^2)^((n-3)/2)``,
    both integrals taken with a Gauss-Jacobi rule exact in the integrand degree.
    """
    c = np.trim_zeros(np.asarray(h, dtype=float), "b")
    if c.size == 0:
        c = np.zeros(1)
    if np.any(c[1::2] != 0.0):
        raise ValueError("kernel polynomial must be even (odd coefficients must vanish)")
    deg = c.size - 1
    quad = gauss_jacobi(deg + 1, _weight_exponent(n))
    t = quad.nodes
    hv = np.polynomial.polynomial.polyval(t, c)
    table = _gegenbauer_table(n, deg, t)
    num = table @ (quad.weights * hv)
    den = (table * table) @ quad.weights
    lam = num / den
    return GegenbauerKernel(n, deg // 2, lam[0::2].copy(), kind="expanded")


def power_kernel(n, s):
    """Coefficients of ``t^(2s) / int_S y_1^(2s) dmu``.

    ``lambda_{2j} = s! Gamma(s + n/2) / ((s-j)! Gamma(s + j + n/2))``, evaluated
    as the product ``prod_{i<j} (s - i) / (s + n/2 + i)`` of factors in (0, 1].
    """
    n, s = int(n), int(s)
    if s < 0:
        raise ValueError(f"s must be nonnegative, got {s}")
    lam = np.empty(s + 1)
    lam[0] = 1.0
    half_n = n / 2.0
    for j in range(1, s + 1):
        i = j - 1
        lam[j] = lam[j - 1] * (s - i) / (s + half_n + i)
    return GegenbauerKernel(n, s, lam, kind="power")


def power_kernel_polynomial(n, s):
    """Ascending monomial coefficients of ``t^(2s) / int_S y_1^(2s) dmu``."""
    moment = 2.0 * math.exp(
        math.lgamma(s + 0.5) + (n - 1) * math.lgamma(0.5) - math.lgamma(s + n / 2.0)
    )
    c = np.zeros(2 * s + 1)
    c[2 * s] = 1.0 / moment
    return c


def toeplitz_matrix(n, ell, s):
    """``(s+1) x (s+1)`` matrix of ``int g_i g_j g_ell w dt`` for ``0 <= i, j <= s``."""
    m = (2 * s + ell) // 2 + 1
    quad = gauss_jacobi(m, _weight_exponent(n))
    table = _gegenbauer_table(n, s, quad.nodes)
    weighted = quad.weights * normalized_gegenbauer(n, ell, quad.nodes)
    mat = (table * weighted) @ table.T
    return 0.5 * (mat + mat.T)


def fang_fawzi_kernel(n, k, s):
    """Square kernel ``h = q^2`` with ``deg q = s`` minimizing ``sum_{j<=k} (1 - lambda_2j)``.

    Under ``lambda_0 = 1`` the objective is ``k - k * lambda_max(T)`` where
    ``T = (1/k) sum_{j=1..k} M_2j`` and ``M_l`` is the symmetric matrix with
    ``lambda_l = e^T M_l e`` in coordinates where ``lambda_0 = ||e||^2``.
    """
    n, k, s = int(n), int(k), int(s)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if s < k:
        raise ValueError(f"need s >= k for an invertible kernel (s={s}, k={k})")

    # one rule, exact for every g_i g_j g_l w with i, j <= s and l <= 2s
    quad = gauss_jacobi(2 * s + 1, _weight_exponent(n))
    table = _gegenbauer_table(n, 2 * s, quad.nodes)
    g_low = table[: s + 1]
    norms = (table * table) @ quad.weights  # int g_l^2 w

    def gram(ell):
        mat = (g_low * (quad.weights * table[ell])) @ g_low.T
        return 0.5 * (mat + mat.T)

    a0 = gram(0)
    diag = np.diag(a0) / norms[0]
    off = a0 - np.diag(np.diag(a0))
    if np.any(diag <= 0.0) or np.abs(off).max(initial=0.0) > 1e-10 * np.abs(diag).max() * norms[0]:
        raise ArithmeticError("A_0 is not a positive diagonal matrix; change of basis is undefined")
    scale = 1.0 / np.sqrt(diag)

    def quadratic(ell):
        return (scale[:, None] * gram(ell) * scale[None, :]) / norms[ell]

    t_mat = sum(quadratic(2 * j) for j in range(1, k + 1)) / k

    # Even-degree forms only feel even l, so T splits into even/odd index
    # blocks; solving per block keeps q of pure parity and h = q^2 even.
    best = None
    for parity in (0, 1):
        idx = np.arange(parity, s + 1, 2)
        if idx.size == 0:
            continue
        vals, vecs = jacobi_eigh(t_mat[np.ix_(idx, idx)])
        if best is None or vals[-1] > best[0] + 1e-14:
            e = np.zeros(s + 1)
            e[idx] = vecs[:, -1]
            best = (vals[-1], e)
    lam_max, e = best
    e /= np.linalg.norm(e)
    eta = scale * e
    # q(1) > 0 fixes the sign
    at_one = np.array([normalized_gegenbauer(n, i, 1.0) for i in range(s + 1)])
    if eta @ at_one < 0:
        e, eta = -e, -eta

    lambdas = np.array([e @ quadratic(2 * j) @ e for j in range(s + 1)])
    lambdas /= lambdas[0]
    rho = math.fsum((1.0 - lambdas[: k + 1]).tolist())
    kernel = GegenbauerKernel(n, s, lambdas, kind="fangfawzi")
    return FangFawziSolution(kernel, rho, float(lam_max), e, eta)


def frobenius_threshold(kernel, k):
    """``sqrt(sum_{j<=k} dim(H_2j) (1/lambda_2j - 1)^2)``."""
    total = 0.0
    for j in range(int(k) + 1):
        lam = kernel.coefficient(j)
        if abs(lam) <= SINGULAR_TOL:
            raise SingularKernelError(2 * j, lam)
        total += harmonic_dim(kernel.n, 2 * j) * (1.0 / lam - 1.0) ** 2
    return math.sqrt(total)


def make_kernel(kind, n, k, s):
    """Kernel of the named family (``"power"`` or ``"fangfawzi"``) at half-degree ``s``."""
    if kind == "power":
        return power_kernel(n, s)
    if kind == "fangfawzi":
        return fang_fawzi_kernel(n, k, s).kernel
    raise ValueError(f"unknown kernel family {kind!r} (expected 'power' or 'fangfawzi')")
