"""Gauss-Jacobi quadrature and product cubature rules on spheres.

The sphere rules are built recursively from the slicing identity

    int_{S^{n-1}} f dmu = int_{-1}^{1} (1 - z^2)^((n-3)/2)
                          int_{S^{n-2}} f(z, sqrt(1 - z^2) y) dmu(y) dz,

using a symmetric Gauss-Jacobi rule in ``z`` and the rule one dimension
down in ``y``; the recursion stops at a regular polygon on the circle.
"""
import csv
import io
import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._linalg import tridiagonal_eigh
from .errors import DimensionError
from .polynomial import evaluate_many, monomials, sphere_monomial_integral


@dataclass(frozen=True, eq=False)
class Quadrature1D:
    """Gauss rule on [-1, 1] for the weight ``(1 - s^2)^alpha``."""

    alpha: float
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return self.nodes.size

    def integrate(self, values):
        return math.fsum((self.weights * np.asarray(values, dtype=float)).tolist())


@dataclass(frozen=True, eq=False)
class CubatureRule:
    """Positive-weight cubature rule on the unit sphere of R^n."""

    n: int
    algebraic_degree: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return self.weights.size


def jacobi_mass(alpha):
    """``int_{-1}^{1} (1 - s^2)^alpha ds`` = B(1/2, alpha + 1)."""
    return math.exp(
        math.lgamma(0.5) + math.lgamma(alpha + 1.0) - math.lgamma(alpha + 1.5)
    )


@lru_cache(maxsize=None)
def gauss_jacobi(points, alpha):
    """``points``-node Gauss rule for the weight ``(1 - s^2)^alpha`` on [-1, 1].

    Nodes are the eigenvalues of the Jacobi matrix of the symmetric Jacobi
    recurrence (Golub-Welsch); weights are the squared first eigenvector
    components scaled to the analytic total mass.  The result is exact for
    polynomials of degree ``2 * points - 1``.
    """
    m = int(points)
    alpha = float(alpha)
    if m < 1:
        raise ValueError(f"need at least one node, got {points}")
    if not alpha > -1.0:
        raise ValueError(f"weight exponent must exceed -1, got {alpha}")

    # Monic recurrence p_{k+1} = s p_k - b_k p_{k-1} with
    # b_k = k (k + 2a) / ((2k + 2a - 1)(2k + 2a + 1)); b_1 = 1 / (3 + 2a).
    b = np.empty(max(m - 1, 0))
    for k in range(1, m):
        if k == 1:
            b[0] = 1.0 / (3.0 + 2.0 * alpha)
        else:
            b[k - 1] = k * (k + 2.0 * alpha) / (
                (2.0 * k + 2.0 * alpha - 1.0) * (2.0 * k + 2.0 * alpha + 1.0)
            )
    values, vectors = tridiagonal_eigh(np.zeros(m), np.sqrt(b))
    w = vectors[0, :] ** 2

    # Exact reflection symmetry; the eigensolver only gets it to rounding.
    z = 0.5 * (values - values[::-1])
    w = 0.5 * (w + w[::-1])
    if m % 2:
        z[m // 2] = 0.0
    w *= jacobi_mass(alpha) / math.fsum(w.tolist())
    return Quadrature1D(alpha, z, w)


def circle_rule(t):
    """Vertices of the regular ``2(t+1)``-gon on S^1, each with weight ``pi/(t+1)``.

    Exact for all forms of degree at most ``2t + 1``.
    """
    t = int(t)
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    p = t + 1
    nodes = np.empty((2 * p, 2))
    for k in range(2 * p):
        # Reduce the angle pi*k/p to a first-quadrant reference angle with
        # integer arithmetic, so sign-flipped copies are bitwise identical.
        j = k % p
        ref = min(j, p - j)
        if 2 * ref == p:
            c, s = 0.0, 1.0
        elif ref == 0:
            c, s = 1.0, 0.0
        else:
            theta = math.pi * ref / p
            c, s = math.cos(theta), math.sin(theta)
        # quadrant of pi*k/p: I for 2k < p, II for p < 2k < 2p, ...
        sx = 1.0 if (2 * k <= p or 2 * k >= 3 * p) else -1.0
        sy = 1.0 if k <= p else -1.0
        nodes[k] = (sx * c, sy * s)
    nodes[nodes == 0.0] = 0.0  # no negative zeros
    weights = np.full(2 * p, math.pi / p)
    return CubatureRule(2, 2 * t, nodes, weights)


def product_cubature(n, t):
    """Sign-change invariant rule of algebraic degree ``2t`` on S^{n-1}.

    Has exactly ``2 (t+1)^(n-1)`` nodes; the first coordinate of each node is
    a Gauss-Jacobi node of the outermost recursion level.
    """
    n = int(n)
    t = int(t)
    if n < 2:
        raise ValueError(f"spheres need n >= 2, got {n}")
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    return _product_cubature(n, t)


@lru_cache(maxsize=64)
def _product_cubature(n, t):
    if n == 2:
        return circle_rule(t)
    inner = _product_cubature(n - 1, t)
    quad = gauss_jacobi(t + 1, (n - 3) / 2.0)
    z = quad.nodes
    assert np.all(np.abs(z) < 1.0), "Gauss nodes must lie strictly inside (-1, 1)"
    radius = np.sqrt((1.0 - z) * (1.0 + z))
    m_in = len(inner)
    nodes = np.empty((z.size * m_in, n))
    nodes[:, 0] = np.repeat(z, m_in)
    nodes[:, 1:] = (radius[:, None, None] * inner.nodes[None, :, :]).reshape(-1, n - 1)
    weights = np.outer(quad.weights, inner.weights).ravel()
    return CubatureRule(n, 2 * t, nodes, weights)


def integrate(rule, f):
    """Weighted node sum of ``f``; the sphere integral when the rule is exact for it."""
    if f.n != rule.n:
        raise DimensionError(f"rule lives in R^{rule.n}, form in {f.n} variables")
    return math.fsum((rule.weights * evaluate_many(f, rule.nodes)).tolist())


def verify_exactness(rule, degree):
    """Largest residual of the rule over all monomials of total ``degree``.

    Residuals are relative to the analytic integral when it is nonzero and
    absolute (scaled by the sphere area) for odd monomials.
    """
    degree = int(degree)
    area = sphere_monomial_integral((0,) * rule.n)
    x = rule.nodes
    worst = 0.0
    basis = monomials(rule.n, degree)
    # x_i^a tables, one per coordinate
    tables = np.ones((rule.n, x.shape[0], degree + 1))
    for a in range(1, degree + 1):
        tables[:, :, a] = tables[:, :, a - 1] * x.T
    for start in range(0, len(basis), 512):
        chunk = np.array(basis[start : start + 512])
        vals = np.ones((x.shape[0], chunk.shape[0]))
        for i in range(rule.n):
            vals *= tables[i][:, chunk[:, i]]
        approx = rule.weights @ vals
        for exp, q in zip(chunk, approx):
            exact = sphere_monomial_integral(exp)
            if exact == 0.0:
                res = abs(q) / area
            else:
                res = abs(q - exact) / abs(exact)
            worst = max(worst, res)
    return worst


def format_rule_csv(rule):
    """``x1,...,xn,weight`` CSV text with 17 significant digits per float."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"x{i + 1}" for i in range(rule.n)] + ["weight"])
    for node, w in zip(rule.nodes, rule.weights):
        writer.writerow([format(v, ".17g") for v in node] + [format(w, ".17g")])
    return buf.getvalue()


def write_rule_csv(rule, path):
    with open(path, "w", newline="") as fh:
        fh.write(format_rule_csv(rule))


def read_rule_csv(path, algebraic_degree):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    n = len(header) - 1
    if n < 2 or header[-1] != "weight":
        raise ValueError(f"{path}: not a cubature CSV (header {header})")
    data = np.array([[float(v) for v in row] for row in body], dtype=float).reshape(-1, n + 1)
    return CubatureRule(n, int(algebraic_degree), data[:, :n].copy(), data[:, n].copy())


def cached_product_cubature(n, t, cache_dir=None):
    """:func:`product_cubature`, persisted as ``rule_n{n}_t{t}.csv`` under ``cache_dir``."""
    if not cache_dir:
        return product_cubature(n, t)
    path = os.path.join(cache_dir, f"rule_n{n}_t{t}.csv")
    if os.path.exists(path):
        return read_rule_csv(path, 2 * t)
    rule = product_cubature(n, t)
    os.makedirs(cache_dir, exist_ok=True)
    tmp = f"{path}.{os.getpid()}.tmp"
    write_rule_csv(rule, tmp)
    os.replace(tmp, path)
    return rule
