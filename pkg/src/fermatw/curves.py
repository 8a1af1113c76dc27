"""Affine plane curves and membership residuals.

A curve tag knows its defining polynomial and reports how far a point is
from satisfying it, normalized by max(1, |x|^d, |y|^d) with d the curve
degree, so residuals stay meaningful near poles of the rational maps.
"""

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from math import comb


@dataclass(frozen=True)
class FermatCurve:
    """x^n + y^n = 1."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"Fermat curve degree must be an integer >= 2, got {self.n}")

    @property
    def degree(self):
        return self.n

    def residual(self, x, y):
        num = abs(x ** self.n + y ** self.n - 1.0)
        return num / max(1.0, abs(x) ** self.n, abs(y) ** self.n)

    def __str__(self):
        return f"x^{self.n}+y^{self.n}=1"


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 = 4x^3 - g2*x - g3."""

    g2: complex
    g3: complex

    @property
    def degree(self):
        return 3

    def residual(self, x, y):
        num = abs(y * y - (4.0 * x ** 3 - self.g2 * x - self.g3))
        return num / max(1.0, abs(x) ** 3, abs(y) ** 3)

    def __str__(self):
        return f"y^2=4x^3-({self.g2})x-({self.g3})"


@dataclass(frozen=True)
class E2Curve:
    """The degree-n normal form 2 + sum(c_k y^k, k=1..n-1) = x^n.

    For odd n the coefficients are c_k = 2*C(n,k) at even k (zero at odd k).
    For even n they are c_k = C(n,k)*(1 + w^k) where w is a root of
    x^n = -1 picked by omega_index: w = exp(i*pi*(2*omega_index + 1)/n).
    """

    n: int
    omega_index: int | None = None

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise ValueError(f"normal form needs integer degree >= 3, got {self.n}")
        even = self.n % 2 == 0
        if even and self.omega_index is None:
            raise ValueError("even degree requires an omega_index")
        if not even and self.omega_index is not None:
            raise ValueError("odd degree takes no omega_index")
        if even and not 0 <= self.omega_index < self.n:
            raise ValueError(f"omega_index must be in [0, {self.n})")

    @property
    def degree(self):
        return self.n

    @property
    def omega(self):
        if self.omega_index is None:
            return None
        return cmath.exp(1j * math.pi * (2 * self.omega_index + 1) / self.n)

    @cached_property
    def coefficients(self):
        """Numeric y-coefficients (c_0 .. c_{n-1}), c_0 = 2."""
        n = self.n
        if self.omega_index is None:
            return tuple(
                2.0 * comb(n, k) if k % 2 == 0 else 0.0 for k in range(n)
            )
        w = self.omega
        return tuple(comb(n, k) * (1.0 + w ** k) for k in range(n))

    def lhs(self, y):
        acc = 0.0 + 0.0j
        for c in reversed(self.coefficients):
            acc = acc * y + c
        return acc

    def residual(self, x, y):
        num = abs(self.lhs(y) - x ** self.n)
        return num / max(1.0, abs(x) ** self.n, abs(y) ** self.n)

    def __str__(self):
        return f"degree-{self.n} normal form 2+sum(c_k y^k)=x^{self.n}"


@dataclass(frozen=True)
class AffinePoint:
    """A point tagged with the curve it is supposed to lie on."""

    x: complex
    y: complex
    curve: object

    def residual(self):
        return self.curve.residual(self.x, self.y)


def on_curve_residual(point):
    """Normalized defect of `point` against its own curve tag."""
    return point.curve.residual(point.x, point.y)
