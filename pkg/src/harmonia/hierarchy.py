"""Harmonic hierarchies: averaging operators, optimization-free lower bounds,
cubature upper bounds and dual moment generators."""
import math
import time
from dataclasses import dataclass

import numpy as np

from .cubature import cached_product_cubature
from .errors import DegreeError, DimensionError, HarmoniaError, SingularKernelError
from .harmonic import harmonic_decompose, reconstruct, sphere_area, zonal_harmonic
from .kernel import SINGULAR_TOL, frobenius_threshold, make_kernel
from .polynomial import HomogeneousPolynomial, evaluate_many, l2_norm, multiply_norm_power


@dataclass(frozen=True)
class BoundResult:
    """One hierarchy level: lower bound, upper bound and bookkeeping."""

    s: int
    kernel_kind: str
    tau: float
    lower: float
    upper: float
    cubature_size: int
    elapsed: float  # milliseconds


@dataclass(frozen=True, eq=False)
class DualGenerator:
    """Moment functional ``L_y = <representer, .>`` attached to a cubature node ``y``."""

    node: np.ndarray
    representer: HomogeneousPolynomial


class SweepError(HarmoniaError):
    """One or more levels of a sweep failed.

    ``failures`` holds ``(s, exception)`` pairs; ``results`` holds every level
    that could still be reported, failed ones with NaN ``tau`` and ``lower``.
    """

    def __init__(self, failures, results):
        self.failures = list(failures)
        self.results = list(results)
        detail = "; ".join(f"s={s}: {exc}" for s, exc in self.failures)
        super().__init__(f"{len(self.failures)} level(s) failed: {detail}")


def _half_degree(f):
    if f.degree % 2:
        raise DegreeError(f"need a form of even degree, got {f.degree}")
    return f.degree // 2


def _check_inverse(kernel, k):
    for j in range(k + 1):
        lam = kernel.coefficient(j)
        if abs(lam) <= SINGULAR_TOL:
            raise SingularKernelError(2 * j, lam)


def _check_rule(f, kernel, rule):
    if rule.n != f.n:
        raise DimensionError(f"rule lives in R^{rule.n}, form in {f.n} variables")
    need = f.degree + 2 * kernel.s
    if rule.algebraic_degree < need:
        raise DegreeError(
            f"rule of degree {rule.algebraic_degree} is too weak; "
            f"a degree-{f.degree} form with a degree-{2 * kernel.s} kernel needs {need}"
        )


def apply_gamma(f, kernel):
    """Averaging operator of ``kernel`` applied to the even form ``f``."""
    k = _half_degree(f)
    return reconstruct(harmonic_decompose(f).scaled(kernel.multipliers(k)))


def apply_gamma_inverse(f, kernel):
    """Inverse averaging operator: harmonic component ``2j`` divided by ``lambda_2j``."""
    k = _half_degree(f)
    _check_inverse(kernel, k)
    return reconstruct(harmonic_decompose(f).scaled(1.0 / kernel.multipliers(k)))


def convolve_on_nodes(f, kernel, rule, x):
    """``sum_z W(z) h(<x, z>) f(z)`` over the nodes of ``rule``.

    Equals ``apply_gamma(f, kernel)(x)`` for unit ``x`` whenever the rule is
    exact in degree ``deg f + 2s``.
    """
    _half_degree(f)
    _check_rule(f, kernel, rule)
    x = np.asarray(x, dtype=float)
    if x.shape != (f.n,):
        raise DimensionError(f"point has shape {x.shape}, expected ({f.n},)")
    h = kernel(np.clip(rule.nodes @ x, -1.0, 1.0))
    return math.fsum((rule.weights * h * evaluate_many(f, rule.nodes)).tolist())


def lower_bound(f, kernel, rule):
    """Optimization-free lower bound: the minimum of ``apply_gamma_inverse(f)`` over the nodes."""
    k = _half_degree(f)
    _check_inverse(kernel, k)
    if abs(kernel.coefficient(0) - 1.0) > 1e-10:
        raise ValueError(f"lower bounds need lambda_0 = 1, got {kernel.coefficient(0)!r}")
    _check_rule(f, kernel, rule)
    if f.is_zero():
        return 0.0
    return float(np.min(evaluate_many(apply_gamma_inverse(f, kernel), rule.nodes)))


def upper_bound(f, rule):
    """Minimum of ``f`` over the nodes of ``rule``."""
    if rule.n != f.n:
        raise DimensionError(f"rule lives in R^{rule.n}, form in {f.n} variables")
    if f.is_zero():
        return 0.0
    return float(np.min(evaluate_many(f, rule.nodes)))


def certify_membership(f, kernel, rule, norm_rule=None):
    """Sufficient test that ``f`` lies in the hierarchy cone of ``kernel``.

    True when the node minimum of ``f`` exceeds ``tau / sqrt(mu(S)) * ||f||_2``.
    ``norm_rule`` (default: the degree-``2 deg f`` product rule) computes the norm.
    """
    k = _half_degree(f)
    _check_inverse(kernel, k)
    _check_rule(f, kernel, rule)
    if norm_rule is None:
        norm_rule = cached_product_cubature(f.n, f.degree)
    tau = frobenius_threshold(kernel, k)
    threshold = tau / math.sqrt(sphere_area(f.n)) * l2_norm(f, norm_rule)
    return bool(np.min(evaluate_many(f, rule.nodes)) > threshold)


def dual_representer(k, kernel, y):
    """``sum_{j<=k} lambda_2j ||x||^(2(k-j)) phi_y^(2j)(x)``."""
    y = np.asarray(y, dtype=float)
    n = y.size
    total = HomogeneousPolynomial.zero(n, 2 * k)
    for j in range(k + 1):
        lam = kernel.coefficient(j)
        if lam == 0.0:
            continue
        total = total + multiply_norm_power(zonal_harmonic(n, 2 * j, y), k - j) * lam
    return total


def moment_generators(k, kernel, rule):
    """One dual generator per node of ``rule`` for forms of degree ``2k``."""
    k = int(k)
    _check_inverse(kernel, k)
    if rule.n != kernel.n:
        raise DimensionError(f"rule lives in R^{rule.n}, kernel in R^{kernel.n}")
    if rule.algebraic_degree < 2 * (k + kernel.s):
        raise DegreeError(
            f"rule of degree {rule.algebraic_degree} is below the level degree {2 * (k + kernel.s)}"
        )
    return [DualGenerator(node, dual_representer(k, kernel, node)) for node in rule.nodes]


def sweep(f, kernel_kind, s_range, shared_rule=True, cache_dir=None, clock=time.perf_counter):
    """Bounds for every kernel half-degree ``s`` in ``s_range``.

    With ``shared_rule`` (the default) every level evaluates its lower bound on
    the single product rule of the largest level degree ``deg f + 2 max(s)``;
    otherwise each level uses its own rule of degree ``deg f + 2s``.  ``upper``
    is the best node minimum over the product rules of degree at most
    ``deg f + 2s``, so the upper-bound sequence never increases.

    A level whose kernel fails (for instance a singular power kernel with
    ``s < k``) still gets a result with ``tau`` and ``lower`` set to NaN; the
    sweep then raises :class:`SweepError` carrying every result.
    """
    k = _half_degree(f)
    levels = list(s_range)
    results = []
    failures = []
    node_minima = {}

    def rule_min(t):
        if t not in node_minima:
            node_minima[t] = upper_bound(f, cached_product_cubature(f.n, t, cache_dir))
        return node_minima[t]

    shared = None
    if shared_rule and levels:
        shared = cached_product_cubature(f.n, k + max(levels), cache_dir)

    for s in levels:
        start = clock()
        try:
            rule = shared if shared is not None else cached_product_cubature(f.n, k + s, cache_dir)
            upper = min(rule_min(t) for t in range(k + s + 1))
        except (HarmoniaError, ValueError, ArithmeticError) as exc:
            failures.append((s, exc))
            continue
        try:
            kernel = make_kernel(kernel_kind, f.n, k, s)
            tau = frobenius_threshold(kernel, k)
            lower = lower_bound(f, kernel, rule)
        except (HarmoniaError, ValueError, ArithmeticError) as exc:
            # keep the level (its upper bound is still valid) with NaN placeholders
            failures.append((s, exc))
            tau = lower = math.nan
        elapsed = (clock() - start) * 1000.0
        results.append(BoundResult(s, kernel_kind, tau, lower, upper, len(rule), elapsed))
    if failures:
        raise SweepError(failures, results)
    return results
