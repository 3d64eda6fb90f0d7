"""Finite combinations of Hardy-space reproducing kernels.

An element ``f = sum_i c_i k_{beta_i}`` with ``k_beta(w) = 1/(w + conj(beta))``
is stored as parallel arrays of coefficients and poles. This span is invariant
under ``C_phi`` and its adjoint for affine ``phi``, so inner products, operator
actions and orbit norms are computed in closed form rather than by
discretising the space.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate

from .errors import InvalidInput, NumericalFailure
from .symbol import AffineSymbol, adjoint_symbol, iterate

MAX_TERMS = 512
ORBIT_CAP = 10_000
NEGATIVE_GRAM_TOL = 1e-14
# below this ratio of |<f,f>| to sum |c_i c_j G_ij| the Gram sum has lost most
# of its digits and the norm is recomputed in the time domain
CANCELLATION_RATIO = 1e-8


def _normalize(coefs, poles):
    c = np.asarray(coefs, dtype=complex).ravel()
    p = np.asarray(poles, dtype=complex).ravel()
    if c.shape != p.shape:
        raise InvalidInput("coefficient and pole arrays differ in length")
    valid = np.isfinite(p) & (p.real > 0)
    if not valid.all():
        bad = p[~valid][0]
        raise InvalidInput(f"kernel pole must lie in the open right half-plane, got {complex(bad)!r}")
    if not np.isfinite(c).all():
        raise InvalidInput("kernel coefficients must be finite")
    if len(p) > 1:
        ordered = np.sort(p)
        if (ordered[1:] == ordered[:-1]).any():
            # equal poles (bitwise, up to signed zeros) are merged in order of first appearance
            uniq, first, inv = np.unique(p, return_index=True, return_inverse=True)
            sums = np.zeros(len(uniq), dtype=complex)
            np.add.at(sums, inv.ravel(), c)
            order = np.argsort(first, kind="stable")
            c, p = sums[order], uniq[order]
    keep = c != 0
    if not keep.all():
        c, p = c[keep], p[keep]
    if len(c) > MAX_TERMS:
        raise InvalidInput(f"kernel element exceeds {MAX_TERMS} terms ({len(c)})")
    return c.copy(), p.copy()


@dataclass(frozen=True, eq=False)
class KernelElement:
    """``sum(coefs[i] * k_{poles[i]})``; equal poles merged, zero terms dropped."""

    coefs: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    poles: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))

    def __post_init__(self):
        c, p = _normalize(np.atleast_1d(self.coefs), np.atleast_1d(self.poles))
        c.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "coefs", c)
        object.__setattr__(self, "poles", p)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[complex, complex]]) -> "KernelElement":
        terms = list(terms)
        return cls([t[0] for t in terms], [t[1] for t in terms])

    @property
    def terms(self) -> list[tuple[complex, complex]]:
        return [(complex(c), complex(p)) for c, p in zip(self.coefs, self.poles)]

    def __len__(self) -> int:
        return len(self.coefs)

    def is_zero(self) -> bool:
        return len(self.coefs) == 0

    def __add__(self, other: "KernelElement") -> "KernelElement":
        if not isinstance(other, KernelElement):
            return NotImplemented
        return KernelElement(np.concatenate([self.coefs, other.coefs]),
                             np.concatenate([self.poles, other.poles]))

    def __neg__(self) -> "KernelElement":
        return KernelElement(-self.coefs, self.poles)

    def __sub__(self, other: "KernelElement") -> "KernelElement":
        if not isinstance(other, KernelElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: complex) -> "KernelElement":
        return KernelElement(complex(scalar) * self.coefs, self.poles)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "KernelElement":
        return KernelElement(self.coefs / complex(scalar), self.poles)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KernelElement):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        inner = ", ".join(f"{c:.6g}*k[{p:.6g}]" for c, p in self.terms)
        return f"KernelElement({inner})"

    def __call__(self, w: complex) -> complex:
        return evaluate(self, w)


ZERO = KernelElement()


def kernel(beta: complex) -> KernelElement:
    beta = complex(beta)
    if not beta.real > 0:
        raise InvalidInput(f"kernel pole must have positive real part, got {beta!r}")
    return KernelElement([1.0], [beta])


def evaluate(f: KernelElement, w: complex) -> complex:
    w = complex(w)
    if not w.real > 0:
        raise InvalidInput(f"evaluation point must have positive real part, got {w!r}")
    if f.is_zero():
        return 0j
    return complex(np.sum(f.coefs / (w + np.conj(f.poles))))


def _gram_matrix(c_f, p_f, c_g, p_g) -> np.ndarray:
    # <k_alpha, k_beta> = k_alpha(beta) = 1/(beta + conj(alpha))
    denom = p_g[None, :] + np.conj(p_f)[:, None]
    return c_f[:, None] * np.conj(c_g)[None, :] / denom


def _gram_terms(f: KernelElement, g: KernelElement) -> np.ndarray:
    return _gram_matrix(f.coefs, f.poles, g.coefs, g.poles)


def _compensated_sum(values: np.ndarray) -> complex:
    # pairwise numpy row sums, then exact fsum across rows
    rows = values.sum(axis=1)
    return complex(math.fsum(rows.real), math.fsum(rows.imag))


def inner(f: KernelElement, g: KernelElement) -> complex:
    if f.is_zero() or g.is_zero():
        return 0j
    return _compensated_sum(_gram_terms(f, g))


def _time_domain_norm_sq(c: np.ndarray, poles: np.ndarray) -> float:
    # f is the Laplace transform of F(t) = sum c_i exp(-conj(beta_i) t) and
    # ||f|| = ||F||_{L2(0, inf)}. Cancellation in F is pointwise and costs only
    # absolute accuracy at the level of eps * sum|c_i|, which sets epsabs.
    rates = np.conj(poles)

    def integrand(t):
        return abs(np.sum(c * np.exp(-rates * t))) ** 2

    slow = float(np.min(rates.real))
    floor = (8 * np.finfo(float).eps * float(np.abs(c).sum())) ** 2 / slow
    edges = [0.0] + [k / slow for k in (1, 4, 16, 64)] + [np.inf]
    total = 0.0
    with warnings.catch_warnings():
        # roundoff warnings are expected once the integrand is at its noise floor
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for lo, hi in zip(edges[:-1], edges[1:]):
            val, _ = integrate.quad(integrand, lo, hi, epsabs=floor, epsrel=1e-11, limit=100)
            total += val
    return total


def _quadratic_form(c: np.ndarray, p: np.ndarray) -> float:
    # sum_ij c_i conj(c_j) / (p_j + conj(p_i)): BLAS row products, fsum across rows
    gram = 1 / (p[None, :] + np.conj(p)[:, None])
    rows = c * (gram @ np.conj(c))
    return math.fsum(rows.real)


def _norm_squared_terms(c: np.ndarray, p: np.ndarray) -> float:
    """Squared norm of ``sum c_i k_{p_i}``; repeated poles are allowed."""
    if len(c) == 0:
        return 0.0
    value = _quadratic_form(c, p)
    # Cauchy-Schwarz bound on sum |c_i c_j G_ij|, which also bounds the rounding
    # error of the form; it exceeds the exact sum by at most a factor len(c)
    scale = float(np.sum(np.abs(c) / np.sqrt(2 * p.real))) ** 2
    if value < -NEGATIVE_GRAM_TOL * max(1.0, scale):
        raise NumericalFailure(
            f"Gram form returned {value!r} for a {len(c)}-term element; "
            "the Gram matrix should be positive semidefinite")
    if abs(value) < CANCELLATION_RATIO * scale:
        return _time_domain_norm_sq(c, p)
    return max(value, 0.0)


def norm_squared(f: KernelElement) -> float:
    return _norm_squared_terms(f.coefs, f.poles)


def norm(f: KernelElement) -> float:
    return math.sqrt(norm_squared(f))


def apply(phi: AffineSymbol, f: KernelElement) -> KernelElement:
    """``C_phi f = f o phi``; each ``c k_alpha`` becomes ``(c/a) k_{(alpha + conj b)/a}``."""
    a = phi.a
    return KernelElement(f.coefs / a, (f.poles + np.conj(phi.b)) / a)


def apply_adjoint(phi: AffineSymbol, f: KernelElement) -> KernelElement:
    """``C_phi^*``, which sends ``k_beta`` to ``k_{phi(beta)}``."""
    return KernelElement(f.coefs, phi.a * f.poles + phi.b)


def orbit(phi: AffineSymbol, f: KernelElement, n: int) -> list[KernelElement]:
    """``[f, C_phi f, ..., C_phi^n f]`` by repeated application."""
    _check_orbit_length(n)
    out = [f]
    for _ in range(n):
        out.append(apply(phi, out[-1]))
    return out


def _check_orbit_length(n: int, cap: int = ORBIT_CAP) -> None:
    if n < 0:
        raise InvalidInput(f"orbit length must be nonnegative, got {n}")
    if n > cap:
        raise InvalidInput(f"orbit length {n} exceeds cap {cap}")


def orbit_norms(phi: AffineSymbol, f: KernelElement, n: int, cap: int = ORBIT_CAP) -> list[float]:
    _check_orbit_length(n, cap)
    norms = [norm(f)]
    g = f
    for _ in range(n):
        g = apply(phi, g)
        norms.append(norm(g))
    return norms


def orbit_norm_kernel_closed(phi: AffineSymbol, w: complex, n: int) -> float:
    """``||C_phi^n k_w||`` without forming the orbit.

    For ``a == 1`` this is ``1/sqrt(2 Re w + 2 n Re b)``. Otherwise
    ``C_phi^n k_w = a^-n k_{psi^n(w)}`` with ``psi`` the adjoint symbol, whose
    norm is ``a^-n / sqrt(2 Re psi^n(w))``; for ``a > 1`` this reduces to
    ``1/sqrt(2 a^n Re w + 2 a^n (a^n - 1)/(a - 1) Re b)``.
    """
    w = complex(w)
    if not w.real > 0:
        raise InvalidInput(f"kernel pole must have positive real part, got {w!r}")
    if n < 0:
        raise InvalidInput("n must be nonnegative")
    if phi.a == 1:
        return 1 / math.sqrt(2 * w.real + 2 * n * phi.b.real)
    _, psi = adjoint_symbol(phi)
    psi_n = iterate(psi, n)
    return phi.a ** (-n) / math.sqrt(2 * psi_n(w).real)


def expansivity_lower_bound(phi: AffineSymbol, f: KernelElement, n: int,
                            anchor: float = 1.0) -> float:
    """Lower bound ``sqrt(2) a^(-n/2) |f(1 + (1 - a^n)/(1 - a) b)|`` on ``||C_phi^n f||``.

    Pairs ``C_phi^n f`` with the unit-direction kernel at ``anchor * a^-n`` and
    applies Cauchy-Schwarz; ``anchor`` (default 1) moves the evaluation point to
    ``anchor + (1 - a^n)/(1 - a) b`` and scales the bound by ``sqrt(anchor)``.
    Only meaningful for contracting symbols (``0 < a < 1``).
    """
    a = phi.a
    if not a < 1:
        raise InvalidInput(f"lower bound requires 0 < a < 1, got a={a}")
    if n < 0:
        raise InvalidInput("n must be nonnegative")
    if not anchor > 0:
        raise InvalidInput("anchor must be positive")
    point = anchor + (1 - a ** n) / (1 - a) * phi.b
    return math.sqrt(2 * anchor) * a ** (-n / 2) * abs(evaluate(f, point))


def pointwise_bound_check(f: KernelElement, w: complex) -> bool:
    w = complex(w)
    return abs(evaluate(f, w)) <= norm(f) / math.sqrt(2 * w.real) + 1e-12


def random_element(rng: np.random.Generator, n_terms: int,
                   re_range: Sequence[float] = (0.1, 3.0),
                   im_range: Sequence[float] = (-3.0, 3.0)) -> KernelElement:
    """Random element with poles uniform in a box; used by tests and experiments."""
    poles = rng.uniform(*re_range, n_terms) + 1j * rng.uniform(*im_range, n_terms)
    coefs = rng.normal(size=n_terms) + 1j * rng.normal(size=n_terms)
    return KernelElement(coefs, poles)
