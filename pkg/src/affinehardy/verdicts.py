"""Dynamical verdicts for ``C_phi`` and the explicit witnesses behind them.

Every verdict is read off the symbol class; the numerical routines here
(orbits, pseudo-orbits, shadowing errors, Li-Yorke envelopes) corroborate the
table and never decide it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels as ks
from .errors import InvalidInput, PreconditionError
from .kernels import KernelElement
from .symbol import (AffineSymbol, SymbolClass, classify, fixed_point, iterate,
                     operator_norm)

# expansivity threshold ||T^n z|| >= 2 for unit z
EXPANSIVITY_CONSTANT = 2.0


class VerdictValue(str, enum.Enum):
    YES = "yes"
    NO = "no"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class Verdict:
    value: VerdictValue
    provenance: str
    note: str = ""

    def __bool__(self) -> bool:
        return self.value is VerdictValue.YES


class SpectrumKind(str, enum.Enum):
    SINGLETON_ONE = "Singleton1"
    UNIT_CIRCLE = "UnitCircle"
    DECAYING_SPIRAL = "DecayingSpiralWithZero"
    CIRCLE = "Circle"
    CLOSED_DISC = "ClosedDisc"
    TRUNCATION_ONLY = "TruncationOnly"


@dataclass(frozen=True)
class SpectrumDescriptor:
    variant: SpectrumKind
    radius: Optional[float] = None
    b: Optional[complex] = None
    provenance: str = ""

    def describe(self) -> str:
        if self.variant is SpectrumKind.CIRCLE:
            return f"circle |z| = {self.radius!r}"
        if self.variant is SpectrumKind.CLOSED_DISC:
            return f"closed disc |z| <= {self.radius!r}"
        if self.variant is SpectrumKind.DECAYING_SPIRAL:
            return f"{{exp(-b t): t >= 0}} u {{0}} with b = {self.b!r}"
        if self.variant is SpectrumKind.UNIT_CIRCLE:
            return "unit circle"
        if self.variant is SpectrumKind.SINGLETON_ONE:
            return "{1}"
        return "no closed form; truncation eigenvalues only"


@dataclass(frozen=True)
class DynamicsReport:
    symbol: AffineSymbol
    symbol_class: SymbolClass
    operator_norm: float
    invertible: bool
    normal: bool
    self_adjoint: bool
    unitary: bool
    positively_expansive: Verdict
    uniformly_positively_expansive: Verdict
    expansive: Verdict
    uniformly_expansive: Verdict
    positive_shadowing: Verdict
    li_yorke: Verdict
    spectrum: SpectrumDescriptor


# provenance tags name the result a verdict rests on
NORMALITY = "normality-criterion"
POSITIVE_EXPANSIVITY = "positive-expansivity-characterization"
BOUNDED_KERNEL_ORBITS = "bounded-kernel-orbits"
INVERTIBLE_EXPANSIVITY = "invertible-expansivity-characterization"
NEEDS_INVERTIBILITY = "expansivity-requires-invertibility"
CONTRACTION_SHADOWING = "contraction-shadowing"
HYPERBOLIC_SHADOWING = "hyperbolic-invertible-shadowing"
PARABOLIC_NON_SHADOWING = "parabolic-non-shadowing"
FIXED_POINT_NON_SHADOWING = "fixed-point-non-shadowing"
NO_LI_YORKE = "no-li-yorke-chaos"
PARABOLIC_SPECTRUM = "parabolic-spectrum"
HYPERBOLIC_SPECTRUM = "hyperbolic-spectrum"

_YES, _NO, _NA = VerdictValue.YES, VerdictValue.NO, VerdictValue.NOT_APPLICABLE


def _spectrum(phi: AffineSymbol, cls: SymbolClass) -> SpectrumDescriptor:
    radius = phi.a ** -0.5
    if cls is SymbolClass.IDENTITY:
        return SpectrumDescriptor(SpectrumKind.SINGLETON_ONE, provenance="identity")
    if cls is SymbolClass.PARABOLIC_AUTOMORPHISM:
        return SpectrumDescriptor(SpectrumKind.UNIT_CIRCLE, provenance=PARABOLIC_SPECTRUM)
    if cls is SymbolClass.PARABOLIC_NON_AUTOMORPHISM:
        return SpectrumDescriptor(SpectrumKind.DECAYING_SPIRAL, b=phi.b,
                                  provenance=PARABOLIC_SPECTRUM)
    if phi.b == 0:
        # dilations w -> a w are outside the hyperbolic spectral theorem (b != 0)
        return SpectrumDescriptor(SpectrumKind.TRUNCATION_ONLY)
    if phi.b.real == 0:
        return SpectrumDescriptor(SpectrumKind.CIRCLE, radius=radius,
                                  provenance=HYPERBOLIC_SPECTRUM)
    return SpectrumDescriptor(SpectrumKind.CLOSED_DISC, radius=radius,
                              provenance=HYPERBOLIC_SPECTRUM)


def report(phi: AffineSymbol) -> DynamicsReport:
    cls = classify(phi)
    invertible = phi.b.real == 0
    normal = phi.a == 1 or invertible
    self_adjoint = phi.a == 1 and phi.b.imag == 0
    unitary = phi.a == 1 and invertible

    if cls in (SymbolClass.HYPERBOLIC_AUTOMORPHISM_I, SymbolClass.HYPERBOLIC_NON_AUTOMORPHISM_I):
        pos = Verdict(_YES, POSITIVE_EXPANSIVITY,
                      "a < 1: ||C^n f|| >= sqrt(2) a^(-n/2) |f(phi^n(a^-n))| grows without bound")
    elif cls is SymbolClass.IDENTITY or cls.is_parabolic:
        pos = Verdict(_NO, BOUNDED_KERNEL_ORBITS,
                      "a = 1: kernel orbits are bounded by 1/sqrt(2 Re w)")
    else:
        pos = Verdict(_NO, BOUNDED_KERNEL_ORBITS,
                      "a > 1: ||C^n|| = a^(-n/2) < 1")
    unif_pos = Verdict(pos.value, pos.provenance, pos.note)

    if not invertible:
        exp = Verdict(_NA, NEEDS_INVERTIBILITY, "C_phi is not invertible (Re b > 0)")
    elif phi.a != 1:
        exp = Verdict(_YES, INVERTIBLE_EXPANSIVITY, "invertible with a != 1")
    else:
        exp = Verdict(_NO, INVERTIBLE_EXPANSIVITY,
                      "a = 1: unit kernels at 1/2 + n i have unit two-sided orbits")
    unif_exp = Verdict(exp.value, exp.provenance, exp.note)

    if cls in (SymbolClass.HYPERBOLIC_AUTOMORPHISM_II, SymbolClass.HYPERBOLIC_NON_AUTOMORPHISM_II):
        shadow = Verdict(_YES, CONTRACTION_SHADOWING,
                         "||C^n|| <= p^n with p = a^(-1/2) < 1")
    elif cls is SymbolClass.HYPERBOLIC_AUTOMORPHISM_I:
        shadow = Verdict(_YES, HYPERBOLIC_SHADOWING,
                         "invertible normal operator with spectrum |z| = a^(-1/2) > 1")
    elif cls is SymbolClass.HYPERBOLIC_NON_AUTOMORPHISM_I:
        shadow = Verdict(_NO, FIXED_POINT_NON_SHADOWING,
                         "interior fixed point b/(1-a)")
    elif cls is SymbolClass.IDENTITY:
        shadow = Verdict(_NO, FIXED_POINT_NON_SHADOWING, "every point is fixed")
    else:
        shadow = Verdict(_NO, PARABOLIC_NON_SHADOWING,
                         "normal operator whose spectrum meets the unit circle")

    if normal:
        ly_note = "normal operator"
    elif phi.a > 1:
        ly_note = "norm < 1, every orbit tends to 0"
    else:
        ly_note = "every nonzero orbit is eventually above 2"
    li_yorke = Verdict(_NO, NO_LI_YORKE, ly_note)

    return DynamicsReport(
        symbol=phi,
        symbol_class=cls,
        operator_norm=operator_norm(phi),
        invertible=invertible,
        normal=normal,
        self_adjoint=self_adjoint,
        unitary=unitary,
        positively_expansive=pos,
        uniformly_positively_expansive=unif_pos,
        expansive=exp,
        uniformly_expansive=unif_exp,
        positive_shadowing=shadow,
        li_yorke=li_yorke,
        spectrum=_spectrum(phi, cls),
    )


def eigen_check(phi: AffineSymbol, w: complex) -> float:
    """``||C^* C k_w - (1/a) k_w||``, zero for automorphic symbols."""
    if phi.b.real != 0:
        raise InvalidInput("eigen_check needs an automorphic symbol (Re b = 0)")
    k = ks.kernel(w)
    residual = ks.apply_adjoint(phi, ks.apply(phi, k)) - k / phi.a
    return ks.norm(residual)


def uniform_expansivity_counterexample(phi: AffineSymbol, n_max: int) -> list[tuple[int, float]]:
    """``(n, ||C^n k_{1/2 + n i}||)`` for ``n = 1..n_max``; all kernels have unit norm."""
    if phi.a != 1:
        raise InvalidInput("the unit-kernel counterexample applies to a = 1 only")
    if n_max < 1:
        raise InvalidInput("n_max must be positive")
    out = []
    for n in range(1, n_max + 1):
        image = ks.apply(iterate(phi, n), ks.kernel(complex(0.5, n)))
        out.append((n, ks.norm(image)))
    return out


@dataclass(frozen=True, eq=False)
class PseudoOrbit:
    """A ``delta``-pseudotrajectory ``elements[0..N]`` of ``C_phi``."""

    symbol: AffineSymbol
    delta: float
    elements: list[KernelElement]
    # x_{n+1} - C_phi x_n, when the generator recorded them
    perturbations: Optional[list[KernelElement]] = None

    def steps(self) -> list[KernelElement]:
        """``x_{n+1} - C_phi x_n`` for consecutive pairs."""
        if self.perturbations is not None:
            return self.perturbations
        return [y - ks.apply(self.symbol, x)
                for x, y in zip(self.elements[:-1], self.elements[1:])]

    def deviations(self) -> list[float]:
        """``||C_phi x_n - x_{n+1}||`` for consecutive pairs."""
        return [ks.norm(ks.apply(self.symbol, x) - y)
                for x, y in zip(self.elements[:-1], self.elements[1:])]

    def is_valid(self, rel: float = 1e-10) -> bool:
        return all(d <= self.delta * (1 + rel) for d in self.deviations())

    def __len__(self) -> int:
        return len(self.elements)


def interior_fixed_point(phi: AffineSymbol) -> complex:
    fp = fixed_point(phi)
    if fp is None or not fp.interior:
        raise PreconditionError(
            "the fixed-point witness needs a fixed point in the open half-plane; "
            f"{classify(phi).value} has none")
    return fp.point


def non_shadowing_witness(phi: AffineSymbol, f: Optional[KernelElement], delta: float,
                          n_max: int) -> PseudoOrbit:
    """Pseudo-orbit ``f_n = delta/||C f|| * sum_{j=1}^{n} C^j f`` that no true orbit follows.

    Every step deviates from the orbit by exactly ``delta`` while
    ``f_n(eta) = n delta f(eta) / ||C f||`` grows linearly at the fixed point
    ``eta``, whereas any true orbit is constant there.
    """
    eta = interior_fixed_point(phi)
    if f is None:
        f = ks.kernel(eta)
    if ks.evaluate(f, eta) == 0:
        raise PreconditionError("seed function must not vanish at the fixed point")
    if not delta > 0:
        raise InvalidInput("delta must be positive")
    ks._check_orbit_length(n_max)
    cf = ks.apply(phi, f)
    step = cf * (delta / ks.norm(cf))
    elements = [ks.ZERO]
    for _ in range(n_max):
        elements.append(ks.apply(phi, elements[-1]) + step)
    return PseudoOrbit(phi, delta, elements, [step] * n_max)


def witness_fixed_point_values(orbit: PseudoOrbit) -> list[complex]:
    eta = interior_fixed_point(orbit.symbol)
    return [ks.evaluate(x, eta) for x in orbit.elements]


def divergence_floor(phi: AffineSymbol, f: KernelElement, delta: float, n: int,
                     g: KernelElement) -> float:
    """Lower bound ``| n delta |f(eta)| / ||C f|| - |g(eta)| |`` on ``||C^n g - f_n||``."""
    eta = interior_fixed_point(phi)
    slope = delta * abs(ks.evaluate(f, eta)) / ks.norm(ks.apply(phi, f))
    return abs(n * slope - abs(ks.evaluate(g, eta)))


# perturbation poles are drawn from this box in the right half-plane
PERTURBATION_BOX = ((0.1, 3.0), (-3.0, 3.0))


def random_pseudo_orbit(phi: AffineSymbol, f0: KernelElement, delta: float, n_max: int,
                        seed: int) -> PseudoOrbit:
    """``f_{n+1} = C f_n + g_{n+1}`` with random one-kernel perturbations of norm <= delta."""
    if delta < 0:
        raise InvalidInput("delta must be nonnegative")
    ks._check_orbit_length(n_max)
    rng = np.random.default_rng(seed)
    (re_lo, re_hi), (im_lo, im_hi) = PERTURBATION_BOX
    elements = [f0]
    steps = []
    for _ in range(n_max):
        size = rng.uniform(0.0, delta) if delta > 0 else 0.0
        angle = rng.uniform(0.0, 2 * math.pi)
        pole = complex(rng.uniform(re_lo, re_hi), rng.uniform(im_lo, im_hi))
        # unit kernel k_p / ||k_p|| has coefficient sqrt(2 Re p)
        coef = size * math.sqrt(2 * pole.real) * complex(math.cos(angle), math.sin(angle))
        step = KernelElement([coef], [pole])
        elements.append(ks.apply(phi, elements[-1]) + step)
        steps.append(step)
    return PseudoOrbit(phi, delta, elements, steps)


@dataclass(frozen=True)
class ShadowResult:
    seed: KernelElement
    bound: float
    contraction: float


def admissible_delta(phi: AffineSymbol, epsilon: float) -> float:
    """Largest ``delta = (1 - p) epsilon / (2K)`` with ``K = 1``, ``p = a^(-1/2)``."""
    p = phi.a ** -0.5
    return (1 - p) * epsilon / 2


def shadow_construct(phi: AffineSymbol, orbit: PseudoOrbit,
                     epsilon: Optional[float] = None) -> ShadowResult:
    """Shadow a pseudo-orbit of a contracting ``C_phi`` (``a > 1``) by the orbit of its start.

    ``f_n - C^n f_0 = sum_{i<=n} C^{n-i} g_i`` and ``||C^k|| = p^k`` give the
    a-priori error ``delta / (1 - p)``, which is at most ``epsilon / 2`` when
    ``delta`` is admissible for ``epsilon``. Without ``epsilon`` only the
    bound is returned.
    """
    if not phi.a > 1:
        raise PreconditionError("constructive shadowing bound requires a > 1")
    if epsilon is not None:
        if not epsilon > 0:
            raise InvalidInput("epsilon must be positive")
        limit = admissible_delta(phi, epsilon)
        if orbit.delta > limit:
            raise PreconditionError(
                f"delta={orbit.delta!r} exceeds the admissible (1-p)eps/2 = {limit!r}")
    p = phi.a ** -0.5
    return ShadowResult(orbit.elements[0], orbit.delta / (1 - p), p)


# terms of the error whose norm falls below this multiple of delta are
# dropped once C_phi is a contraction; each drop perturbs later errors by at
# most its own size, so over the orbit cap the total stays below 1e-13 delta
SHADOW_DROP_TOL = 1e-17


def shadow_errors(phi: AffineSymbol, orbit: PseudoOrbit, seed: KernelElement) -> list[float]:
    """``||C^n seed - f_n||`` along the pseudo-orbit.

    The error obeys ``e_{n+1} = C e_n - g_{n+1}`` with ``g`` the recorded
    perturbations, so it is carried as one coefficient/pole array.
    """
    a, shift = phi.a, np.conj(phi.b)
    e = seed - orbit.elements[0]
    c, p = e.coefs, e.poles
    errors = [ks.norm(e)]
    floor = SHADOW_DROP_TOL * orbit.delta if a >= 1 else 0.0
    for g in orbit.steps():
        c = np.concatenate([c / a, -g.coefs])
        p = np.concatenate([(p + shift) / a, g.poles])
        if floor > 0:
            keep = np.abs(c) / np.sqrt(2 * p.real) >= floor
            c, p = c[keep], p[keep]
        errors.append(math.sqrt(ks._norm_squared_terms(c, p)))
    return errors


@dataclass(frozen=True)
class LiYorkeCertificate:
    liminf_est: float
    limsup_est: float
    reason: str
    floor_index: Optional[int] = None


def floor_anchor(phi: AffineSymbol, f: KernelElement) -> float:
    """Anchor ``x`` with ``f(x + b/(1-a)) != 0``: 1, else ``1 + 2^-k`` for the first such k.

    Kernel-span elements are rational, so their zeros are isolated.
    """
    base = phi.b / (1 - phi.a)
    for k in range(0, 60):
        x = 1.0 if k == 0 else 1.0 + 2.0 ** -k
        if ks.evaluate(f, x + base) != 0:
            return x
    raise PreconditionError("seed function vanishes at every probe point")


def li_yorke_certificate(phi: AffineSymbol, f: KernelElement, n_max: int) -> LiYorkeCertificate:
    """Tail extrema of ``||C^n f||`` over ``n in [n_max/2, n_max]`` with the class reason."""
    if f.is_zero():
        raise InvalidInput("f must be nonzero")
    norms = ks.orbit_norms(phi, f, n_max)
    tail = norms[n_max // 2:]
    lo, hi = min(tail), max(tail)
    if phi.a == 1 or phi.b.real == 0:
        return LiYorkeCertificate(lo, hi, "normal operator: no semi-irregular vectors")
    if phi.a > 1:
        return LiYorkeCertificate(lo, hi, "norm a^(-1/2) < 1: orbits decay to 0")
    anchor = floor_anchor(phi, f)
    first = None
    for n in range(n_max + 1):
        if ks.expansivity_lower_bound(phi, f, n, anchor) > EXPANSIVITY_CONSTANT:
            first = n
            break
    reason = "expanding: orbit eventually stays above 2"
    return LiYorkeCertificate(lo, hi, reason, first)
