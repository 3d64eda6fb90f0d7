"""Affine self-maps ``w -> a*w + b`` of the right half-plane.

Parameters are used exactly as given. Classification compares ``a`` with 1
and ``Re(b)`` with 0 without tolerance, so boundary classes are selected by
typing exact values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidInput


class SymbolClass(str, enum.Enum):
    IDENTITY = "Identity"
    PARABOLIC_AUTOMORPHISM = "ParabolicAutomorphism"
    PARABOLIC_NON_AUTOMORPHISM = "ParabolicNonAutomorphism"
    HYPERBOLIC_AUTOMORPHISM_I = "HyperbolicAutomorphismTypeI"
    HYPERBOLIC_AUTOMORPHISM_II = "HyperbolicAutomorphismTypeII"
    HYPERBOLIC_NON_AUTOMORPHISM_I = "HyperbolicNonAutomorphismTypeI"
    HYPERBOLIC_NON_AUTOMORPHISM_II = "HyperbolicNonAutomorphismTypeII"

    @property
    def is_parabolic(self) -> bool:
        return self in (SymbolClass.PARABOLIC_AUTOMORPHISM,
                        SymbolClass.PARABOLIC_NON_AUTOMORPHISM)

    @property
    def is_automorphism(self) -> bool:
        return self in (SymbolClass.IDENTITY,
                        SymbolClass.PARABOLIC_AUTOMORPHISM,
                        SymbolClass.HYPERBOLIC_AUTOMORPHISM_I,
                        SymbolClass.HYPERBOLIC_AUTOMORPHISM_II)


@dataclass(frozen=True)
class AffineSymbol:
    """The map ``w -> a*w + b`` with ``a > 0`` and ``Re(b) >= 0``."""

    a: float
    b: complex = 0j

    def __post_init__(self):
        a = float(self.a)
        b = complex(self.b)
        if not a > 0 or a == float("inf"):
            raise InvalidInput(f"dilation a must be a finite positive real, got {self.a!r}")
        if not b.real >= 0 or b != b or abs(b) == float("inf"):
            raise InvalidInput(f"translation b must satisfy Re(b) >= 0, got {self.b!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __call__(self, w: complex) -> complex:
        return self.a * w + self.b

    @property
    def is_automorphism(self) -> bool:
        return self.b.real == 0


IDENTITY = AffineSymbol(1.0, 0j)


def classify(phi: AffineSymbol) -> SymbolClass:
    a, b = phi.a, phi.b
    if a == 1:
        if b == 0:
            return SymbolClass.IDENTITY
        if b.real == 0:
            return SymbolClass.PARABOLIC_AUTOMORPHISM
        return SymbolClass.PARABOLIC_NON_AUTOMORPHISM
    auto = b.real == 0
    if a < 1:
        return (SymbolClass.HYPERBOLIC_AUTOMORPHISM_I if auto
                else SymbolClass.HYPERBOLIC_NON_AUTOMORPHISM_I)
    return (SymbolClass.HYPERBOLIC_AUTOMORPHISM_II if auto
            else SymbolClass.HYPERBOLIC_NON_AUTOMORPHISM_II)


def iterate(phi: AffineSymbol, n: int) -> AffineSymbol:
    """Return the ``n``-fold composite of ``phi`` in closed form.

    For ``a != 1`` the translation is ``(1 - a**n) / (1 - a) * b``; repeated
    composition is deliberately avoided since its rounding drifts with ``n``.
    """
    if n < 0:
        raise InvalidInput("negative iterates are available only via inverse()")
    if n == 0:
        return IDENTITY
    a, b = phi.a, phi.b
    if a == 1:
        return AffineSymbol(1.0, n * b)
    an = a ** n
    return AffineSymbol(an, (1 - an) / (1 - a) * b)


def compose(outer: AffineSymbol, inner: AffineSymbol) -> AffineSymbol:
    """``outer o inner``."""
    return AffineSymbol(outer.a * inner.a, outer.a * inner.b + outer.b)


def inverse(phi: AffineSymbol) -> Optional[AffineSymbol]:
    """Inverse self-map, or ``None`` when ``phi`` is not onto (``Re(b) > 0``)."""
    if phi.b.real != 0:
        return None
    if phi.a == 1 and phi.b == 0:
        return IDENTITY
    # -b/a keeps Re == 0 exactly (possibly as -0.0), which the validator accepts
    return AffineSymbol(1 / phi.a, complex(0.0, -phi.b.imag / phi.a))


def adjoint_symbol(phi: AffineSymbol) -> tuple[float, AffineSymbol]:
    """Return ``(1/a, psi)`` with ``C_phi^* = (1/a) C_psi``, ``psi(w) = (w + conj(b))/a``."""
    a = phi.a
    return 1 / a, AffineSymbol(1 / a, phi.b.conjugate() / a)


@dataclass(frozen=True)
class FixedPoint:
    point: complex
    interior: bool
    everywhere: bool = False


def fixed_point(phi: AffineSymbol) -> Optional[FixedPoint]:
    """Fixed point of ``phi`` in the closed plane, if there is one.

    The identity fixes everything; it is reported with representative point 1.
    Translations (``a == 1``, ``b != 0``) have no fixed point.
    """
    if phi.a == 1:
        if phi.b == 0:
            return FixedPoint(1 + 0j, True, everywhere=True)
        return None
    eta = phi.b / (1 - phi.a)
    return FixedPoint(eta, eta.real > 0)


def derivative_at_infinity(phi: AffineSymbol) -> float:
    """Angular derivative ``lim w/phi(w)`` as ``w -> infinity``, i.e. ``1/a``."""
    return 1 / phi.a


def operator_norm(phi: AffineSymbol) -> float:
    """Norm of ``C_phi`` on the Hardy space: the square root of the derivative at infinity."""
    return derivative_at_infinity(phi) ** 0.5
