"""Laguerre-basis truncations of ``C_phi`` in the time-domain model.

Under the Laplace transform ``f(w) = int_0^inf F(t) exp(-w t) dt`` the Hardy
space is isometric to ``L2(0, inf)`` (normalised so that
``||k_beta||^2 = 1/(2 Re beta)``), and ``C_phi`` acts as

    (T F)(s) = (1/a) exp(-b s / a) F(s / a).

Matrices are taken in the orthonormal Laguerre functions
``l_n(t) = sqrt(2c) exp(-c t) L_n(2 c t)``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, NumericalFailure
from .kernels import KernelElement
from .symbol import AffineSymbol

logger = logging.getLogger(__name__)

DEFAULT_SIZE = 64
MAX_SIZE = 256
QUAD_TOL = 1e-10
NODES_PER_PANEL = 24
# basis functions are treated as zero once below this multiple of sqrt(2c)
SUPPORT_TOL = 1e-18


class ConvergenceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class LaguerreBasis:
    c: float = 1.0
    N: int = DEFAULT_SIZE

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise InvalidInput(f"Laguerre scale must be positive, got {self.c!r}")
        if int(self.N) != self.N or self.N < 1:
            raise InvalidInput(f"basis size must be a positive integer, got {self.N!r}")
        if self.N > MAX_SIZE:
            raise InvalidInput(f"basis size {self.N} exceeds cap {MAX_SIZE}")

    def __call__(self, t) -> np.ndarray:
        """Values ``l_n(t)`` as an array of shape ``(N, len(t))``."""
        return laguerre_functions(self.N, self.c, t)

    def support(self) -> float:
        """Time beyond which every basis function is negligible."""
        return _support_extent(self.N, self.c)


def laguerre_functions(N: int, c: float, t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    x = 2 * c * t
    out = np.empty((N, t.size))
    # the three-term recurrence is linear, so it can run on the weighted
    # functions directly and never forms the large polynomial values
    out[0] = math.sqrt(2 * c) * np.exp(-c * t)
    if N > 1:
        out[1] = out[0] * (1 - x)
    for n in range(1, N - 1):
        out[n + 1] = ((2 * n + 1 - x) * out[n] - n * out[n - 1]) / (n + 1)
    return out


def _support_extent(N: int, c: float) -> float:
    y = np.arange(0.0, 4 * N + 40 * math.sqrt(N) + 200, 0.25)
    vals = np.abs(laguerre_functions(N, c, y / (2 * c))).max(axis=0) / math.sqrt(2 * c)
    above = np.nonzero(vals > SUPPORT_TOL)[0]
    return (y[above[-1]] + 1.0) / (2 * c)


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """``entries[m, n] = <T l_n, l_m>`` for ``m, n < N``."""

    entries: np.ndarray
    basis: LaguerreBasis
    symbol: AffineSymbol
    quadrature_nodes: int = 0
    quadrature_change: float = 0.0

    def __matmul__(self, v):
        return self.entries @ v


def kernel_time_coeffs(beta: complex, basis: LaguerreBasis) -> np.ndarray:
    """Laguerre coefficients of ``exp(-conj(beta) t)``, the time-domain ``k_beta``.

    ``<exp(-conj(beta) t), l_n> = sqrt(2c) (conj(beta) - c)^n / (conj(beta) + c)^(n+1)``.
    """
    beta = complex(beta)
    if not beta.real > 0:
        raise InvalidInput(f"kernel pole must have positive real part, got {beta!r}")
    c = basis.c
    bc = beta.conjugate()
    ratio = (bc - c) / (bc + c)
    return math.sqrt(2 * c) / (bc + c) * ratio ** np.arange(basis.N)


def element_coeffs(f: KernelElement, basis: LaguerreBasis) -> np.ndarray:
    out = np.zeros(basis.N, dtype=complex)
    for coef, pole in zip(f.coefs, f.poles):
        out += coef * kernel_time_coeffs(pole, basis)
    return out


def _gauss_panels(length: float, panels: int) -> tuple[np.ndarray, np.ndarray]:
    # panels are uniform in u = sqrt(t / length): high-degree Laguerre functions
    # oscillate like J0(2 sqrt(n t)) near the origin, i.e. uniformly in sqrt(t)
    x, w = np.polynomial.legendre.leggauss(NODES_PER_PANEL)
    h = 1.0 / panels
    left = h * np.arange(panels)
    u = (left[:, None] + h * (x[None, :] + 1) / 2).ravel()
    wu = np.tile(w * h / 2, panels)
    return length * u * u, wu * 2 * length * u


def _matrix_on_panels(phi: AffineSymbol, basis: LaguerreBasis, length: float, panels: int) -> np.ndarray:
    s, wts = _gauss_panels(length, panels)
    a, b = phi.a, phi.b
    weight = wts * np.exp(-b * s / a) / a
    out_basis = basis(s)        # l_m(s)
    in_basis = basis(s / a)     # l_n(s/a)
    return (out_basis * weight) @ in_basis.T


def build_matrix(phi: AffineSymbol, basis: LaguerreBasis | None = None) -> TruncatedOperator:
    """Quadrature of ``int (1/a) exp(-b s/a) l_n(s/a) l_m(s) ds`` for all ``m, n``.

    Composite Gauss-Legendre in ``sqrt(s)`` over the common support of
    ``l_m(s)`` and ``l_n(s/a)``. The panel count is doubled until no entry moves by more than
    ``QUAD_TOL``; two doublings without convergence raise ``NumericalFailure``.
    """
    basis = basis or LaguerreBasis()
    length = basis.support() * min(1.0, phi.a)
    oscillations = abs(phi.b.imag) * length / (2 * math.pi * phi.a)
    panels = basis.N + 8 + int(math.ceil(2 * oscillations))

    prev = _matrix_on_panels(phi, basis, length, panels)
    change = math.inf
    for _ in range(2):
        panels *= 2
        cur = _matrix_on_panels(phi, basis, length, panels)
        change = float(np.abs(cur - prev).max())
        if change <= QUAD_TOL:
            return TruncatedOperator(cur, basis, phi, panels * NODES_PER_PANEL, change)
        prev = cur
    raise NumericalFailure(
        f"Laguerre matrix quadrature did not converge: entry change {change:.3g} "
        f"> {QUAD_TOL:g} after two doublings ({panels} panels)")


def _squared_start(gram: np.ndarray, squarings: int = 30) -> np.ndarray:
    # the top singular values of these truncations cluster tightly, which stalls
    # plain power iteration near 1e-7; repeated squaring of M^H M reaches
    # exponent 2**squarings cheaply and supplies a start vector in the top cluster
    p = gram / np.linalg.norm(gram)
    for _ in range(squarings):
        p = p @ p
        size = np.linalg.norm(p)
        if size == 0 or not np.isfinite(size):
            break
        p = p / size
    col = np.argmax(np.linalg.norm(p, axis=0))
    v = p[:, col]
    size = np.linalg.norm(v)
    if size == 0 or not np.isfinite(size):
        return np.ones(gram.shape[0], dtype=complex) / math.sqrt(gram.shape[0])
    return v / size


def power_iteration(matrix: np.ndarray, tol: float = 1e-10, max_iter: int = 10_000):
    """Largest singular value of ``matrix`` by power iteration on ``M^H M``.

    Returns ``(estimate, iterations, converged)``. The estimate ``||M v||``
    for unit ``v`` never exceeds the true value.
    """
    matrix = np.asarray(matrix, dtype=complex)
    gram = matrix.conj().T @ matrix
    if not np.any(gram):
        return 0.0, 0, True
    v = _squared_start(gram)
    est = float(np.linalg.norm(matrix @ v))
    for it in range(1, max_iter + 1):
        u = gram @ v
        size = np.linalg.norm(u)
        if size == 0:
            return 0.0, it, True
        v = u / size
        new = float(np.linalg.norm(matrix @ v))
        if abs(new - est) < tol:
            return max(new, est), it, True
        est = new
    return est, max_iter, False


def norm_estimate(T: TruncatedOperator) -> float:
    value, iterations, converged = power_iteration(T.entries)
    if not converged:
        warnings.warn(f"power iteration stopped after {iterations} steps without "
                      "reaching tolerance 1e-10", ConvergenceWarning, stacklevel=2)
    logger.debug("norm estimate %.17g after %d iterations", value, iterations)
    return value


def spectrum_estimate(T: TruncatedOperator) -> np.ndarray:
    """Truncation eigenvalues, sorted by decreasing modulus.

    LAPACK's Hessenberg-QR (``numpy.linalg.eigvals``) does the orthogonal
    reduction. For non-normal symbols these are eigenvalues of a truncation,
    not of ``C_phi``.
    """
    if T.entries.shape[0] > MAX_SIZE:
        raise InvalidInput(f"spectrum estimation is capped at N={MAX_SIZE}")
    try:
        vals = np.linalg.eigvals(T.entries)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigenvalue iteration failed: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise NumericalFailure("eigenvalue iteration produced non-finite values")
    order = np.lexsort((vals.imag, vals.real, -np.abs(vals)))
    return vals[order]
