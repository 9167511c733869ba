"""Small symmetric eigensolvers.

Two routines, both returning ascending eigenvalues with orthonormal
eigenvectors stored column-wise:

* :func:`tridiagonal_eigh` -- implicit QL with Wilkinson shifts for a
  symmetric tridiagonal matrix (Golub-Welsch quadrature).
* :func:`jacobi_eigh` -- cyclic Jacobi rotations for a dense symmetric
  matrix (kernel eigenproblems, a few dozen rows at most).
"""
import math

import numpy as np

from .errors import ConvergenceError

_EPS = np.finfo(float).eps


def tridiagonal_eigh(diag, offdiag, max_iter=60):
    """Eigen-decomposition of a symmetric tridiagonal matrix.

    Parameters
    ----------
    diag : array_like, shape (m,)
        Main diagonal.
    offdiag : array_like, shape (m-1,)
        Sub/super diagonal; ``offdiag[i]`` couples rows ``i`` and ``i+1``.
    max_iter : int
        QL iterations allowed per eigenvalue.

    Returns
    -------
    values : ndarray, shape (m,)
    vectors : ndarray, shape (m, m)
    """
    d = np.array(diag, dtype=float)
    m = d.size
    e = np.zeros(m)
    e[: m - 1] = np.asarray(offdiag, dtype=float)
    z = np.eye(m)

    for l in range(m):
        it = 0
        while True:
            j = l
            while j < m - 1:
                dd = abs(d[j]) + abs(d[j + 1])
                if abs(e[j]) <= _EPS * dd:
                    break
                j += 1
            if j == l:
                break
            if it == max_iter:
                raise ConvergenceError(
                    f"implicit QL did not converge for eigenvalue {l} after "
                    f"{max_iter} iterations (|e|={abs(e[l]):.3e}, size {m})"
                )
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[j] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(j - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[j] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * zi1
                z[:, i] = c * z[:, i] - s * zi1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[j] = 0.0

    order = np.argsort(d, kind="stable")
    return d[order], z[:, order]


def jacobi_eigh(a, tol=1e-14, max_sweeps=60):
    """Eigen-decomposition of a dense symmetric matrix by cyclic Jacobi sweeps."""
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=1e-12, atol=1e-14 * max(1.0, np.abs(a).max(initial=0.0))):
        raise ValueError("jacobi_eigh needs a symmetric matrix")
    a = 0.5 * (a + a.T)
    m = a.shape[0]
    v = np.eye(m)
    scale = np.linalg.norm(a)
    if scale == 0.0 or m == 1:
        return np.diag(a).copy(), v

    for _ in range(max_sweeps):
        off = math.sqrt(np.sum(np.triu(a, 1) ** 2) * 2.0)
        if off <= tol * scale:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise ConvergenceError(
            f"Jacobi rotations did not converge in {max_sweeps} sweeps "
            f"(off-diagonal norm {off:.3e}, matrix norm {scale:.3e})"
        )

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]
