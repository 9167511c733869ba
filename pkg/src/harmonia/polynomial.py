"""Sparse homogeneous polynomials (forms) in ``n`` real variables."""
import itertools
import math
from functools import lru_cache
from types import MappingProxyType

import numpy as np

from .errors import DegreeError, DimensionError

# Only exact zeros (and denormal debris) are dropped at construction.
_ZERO_CUTOFF = 1e-300


def monomials(n, degree):
    """Exponent tuples of all monomials of total ``degree`` in ``n`` variables.

    Ordered lexicographically with the first variable's exponent descending,
    e.g. ``(2,0,0), (1,1,0), (1,0,1), (0,2,0), ...``.
    """
    return _monomials(n, degree)


@lru_cache(maxsize=None)
def _monomials(n, degree):
    out = []
    for combo in itertools.combinations_with_replacement(range(n), degree):
        exp = [0] * n
        for i in combo:
            exp[i] += 1
        out.append(tuple(exp))
    return tuple(out)


class HomogeneousPolynomial:
    """A form of fixed degree stored as an exponent -> coefficient map.

    Instances are immutable and hashable.  Arithmetic between forms is only
    defined when the ambient dimension matches; ``+``/``-`` additionally
    require equal degrees.
    """

    __slots__ = ("n", "degree", "_terms", "_arrays")

    def __init__(self, n, degree, terms=None):
        n = int(n)
        degree = int(degree)
        if n < 1:
            raise ValueError(f"need at least one variable, got n={n}")
        if degree < 0:
            raise ValueError(f"degree must be nonnegative, got {degree}")
        clean = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(a) for a in exp)
            if len(exp) != n:
                raise DimensionError(f"exponent {exp} has length {len(exp)}, expected {n}")
            if min(exp) < 0:
                raise ValueError(f"negative exponent in {exp}")
            if sum(exp) != degree:
                raise DegreeError(
                    f"exponent {exp} has total degree {sum(exp)}; form has degree {degree}"
                )
            coef = float(coef)
            if not math.isfinite(coef):
                raise ValueError(f"non-finite coefficient {coef} for {exp}")
            if abs(coef) >= _ZERO_CUTOFF:
                clean[exp] = clean.get(exp, 0.0) + coef
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(
            self, "_terms", {e: c for e, c in sorted(clean.items(), reverse=True) if abs(c) >= _ZERO_CUTOFF}
        )
        object.__setattr__(self, "_arrays", None)

    def __setattr__(self, name, value):
        raise AttributeError("HomogeneousPolynomial is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, n, degree):
        return cls(n, degree, {})

    @classmethod
    def constant(cls, n, value):
        return cls(n, 0, {(0,) * n: value})

    @classmethod
    def variable(cls, n, i):
        exp = [0] * n
        exp[i] = 1
        return cls(n, 1, {tuple(exp): 1.0})

    @classmethod
    def linear(cls, coefficients):
        """The linear form ``sum_i c_i x_i``."""
        c = [float(v) for v in coefficients]
        n = len(c)
        terms = {}
        for i, v in enumerate(c):
            exp = [0] * n
            exp[i] = 1
            terms[tuple(exp)] = v
        return cls(n, 1, terms)

    @classmethod
    def from_coefficient_vector(cls, n, degree, vector):
        """Inverse of :meth:`coefficient_vector` (basis order of :func:`monomials`)."""
        basis = monomials(n, degree)
        vector = np.asarray(vector, dtype=float)
        if vector.shape != (len(basis),):
            raise DimensionError(
                f"expected {len(basis)} coefficients for degree {degree} in {n} variables"
            )
        return cls(n, degree, dict(zip(basis, vector.tolist())))

    # -- views ----------------------------------------------------------------

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def coefficient(self, exp):
        return self._terms.get(tuple(exp), 0.0)

    def coefficient_vector(self):
        """Dense coefficients in the basis order of :func:`monomials`."""
        return np.array([self._terms.get(e, 0.0) for e in monomials(self.n, self.degree)])

    def is_zero(self):
        return not self._terms

    def max_abs_coefficient(self):
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def _exponent_arrays(self):
        if self._arrays is None:
            if self._terms:
                exps = np.array(list(self._terms.keys()), dtype=np.int64)
                coefs = np.array(list(self._terms.values()), dtype=float)
            else:
                exps = np.zeros((0, self.n), dtype=np.int64)
                coefs = np.zeros(0)
            object.__setattr__(self, "_arrays", (exps, coefs))
        return self._arrays

    # -- protocol -------------------------------------------------------------

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        return self.n == other.n and self.degree == other.degree and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, self.degree, tuple(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return f"HomogeneousPolynomial(n={self.n}, degree={self.degree}, 0)"
        body = " + ".join(f"{c:g}*x^{list(e)}" for e, c in self._terms.items())
        return f"HomogeneousPolynomial(n={self.n}, degree={self.degree}, {body})"

    def __call__(self, x):
        return evaluate(self, x)

    # -- arithmetic -----------------------------------------------------------

    def _check_compatible(self, other):
        if other.n != self.n:
            raise DimensionError(f"cannot combine forms in {self.n} and {other.n} variables")

    def __add__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        self._check_compatible(other)
        if other.degree != self.degree:
            raise DegreeError(f"cannot add forms of degree {self.degree} and {other.degree}")
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0.0) + c
        return HomogeneousPolynomial(self.n, self.degree, terms)

    def __neg__(self):
        return HomogeneousPolynomial(self.n, self.degree, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HomogeneousPolynomial):
            self._check_compatible(other)
            terms = {}
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    terms[e] = terms.get(e, 0.0) + c1 * c2
            return HomogeneousPolynomial(self.n, self.degree + other.degree, terms)
        if isinstance(other, (int, float, np.integer, np.floating)):
            return HomogeneousPolynomial(
                self.n, self.degree, {e: c * float(other) for e, c in self._terms.items()}
            )
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return self * (1.0 / float(other))
        return NotImplemented

    def __pow__(self, m):
        m = int(m)
        if m < 0:
            raise ValueError("negative powers are not forms")
        result = HomogeneousPolynomial.constant(self.n, 1.0)
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def partial(self, i):
        """Partial derivative with respect to variable ``i``."""
        terms = {}
        for e, c in self._terms.items():
            a = e[i]
            if a:
                d = list(e)
                d[i] -= 1
                d = tuple(d)
                terms[d] = terms.get(d, 0.0) + c * a
        return HomogeneousPolynomial(self.n, max(self.degree - 1, 0), terms)

    # -- serialization --------------------------------------------------------

    def to_dict(self):
        return {
            "n": self.n,
            "degree": self.degree,
            "terms": [{"exp": list(e), "coef": c} for e, c in self._terms.items()],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            n = data["n"]
            degree = data["degree"]
            raw = data["terms"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"polynomial object needs 'n', 'degree' and 'terms': {exc}") from None
        terms = {}
        for item in raw:
            exp = tuple(item["exp"])
            terms[exp] = terms.get(exp, 0.0) + float(item["coef"])
        return cls(n, degree, terms)


def norm_squared(n):
    """The form ``x_1^2 + ... + x_n^2``."""
    return _norm_power(n, 1)


@lru_cache(maxsize=None)
def _norm_power(n, m):
    if m == 0:
        return HomogeneousPolynomial.constant(n, 1.0)
    # Multinomial expansion of (x_1^2 + ... + x_n^2)^m, exact integer coefficients.
    terms = {}
    fm = math.factorial(m)
    for half in monomials(n, m):
        coef = fm
        for b in half:
            coef //= math.factorial(b)
        terms[tuple(2 * b for b in half)] = float(coef)
    return HomogeneousPolynomial(n, 2 * m, terms)


def evaluate(f, x):
    """Value of ``f`` at a single point ``x``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (f.n,):
        raise DimensionError(f"point has shape {x.shape}, form lives in {f.n} variables")
    return float(evaluate_many(f, x[None, :])[0])


def evaluate_many(f, points):
    """Values of ``f`` at each row of ``points`` (shape ``(N, n)``)."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != f.n:
        raise DimensionError(f"points have shape {points.shape}, form lives in {f.n} variables")
    exps, coefs = f._exponent_arrays()
    if coefs.size == 0:
        return np.zeros(points.shape[0])
    top = int(exps.max(initial=0))
    # powers[i][:, a] = x_i ** a, built once per variable
    cols = np.ones((points.shape[0], len(coefs)))
    for i in range(f.n):
        if not exps[:, i].any():
            continue
        table = np.ones((points.shape[0], top + 1))
        for a in range(1, top + 1):
            table[:, a] = table[:, a - 1] * points[:, i]
        cols *= table[:, exps[:, i]]
    return cols @ coefs


def laplacian(f):
    """Sum of unmixed second partials; degree drops by two (floored at zero)."""
    terms = {}
    for e, c in f.terms.items():
        for i, a in enumerate(e):
            if a >= 2:
                d = list(e)
                d[i] -= 2
                d = tuple(d)
                terms[d] = terms.get(d, 0.0) + c * a * (a - 1)
    return HomogeneousPolynomial(f.n, max(f.degree - 2, 0), terms)


def multiply_norm_power(f, m):
    """Expand ``||x||^(2m) * f``."""
    m = int(m)
    if m < 0:
        raise ValueError(f"norm power must be nonnegative, got {m}")
    if m == 0:
        return f
    return f * _norm_power(f.n, m)


def sphere_monomial_integral(exponents):
    """Integral of ``x^a`` over the unit sphere in R^n against surface area."""
    a = [int(v) for v in exponents]
    n = len(a)
    if n < 2:
        raise ValueError("sphere integrals need n >= 2")
    if any(v % 2 for v in a):
        return 0.0
    log_num = sum(math.lgamma((v + 1) / 2.0) for v in a)
    return 2.0 * math.exp(log_num - math.lgamma((sum(a) + n) / 2.0))


def l2_norm(f, rule):
    """L2 norm of ``f`` on the sphere, computed with a rule exact for ``f**2``."""
    if rule.n != f.n:
        raise DimensionError(f"rule lives in R^{rule.n}, form in {f.n} variables")
    if rule.algebraic_degree < 2 * f.degree:
        raise DegreeError(
            f"rule of degree {rule.algebraic_degree} cannot integrate the square of a "
            f"degree-{f.degree} form exactly"
        )
    values = evaluate_many(f, rule.nodes)
    return math.sqrt(max(math.fsum((rule.weights * values * values).tolist()), 0.0))
