"""Period lattices, Eisenstein invariants, and argument reduction.

Truncation convention: sums run over the lattice points inside the disk
|w| <= R * ell_min, where ell_min is the length of a shortest nonzero vector
and R is `truncation_radius`. A disk (rather than an index box) keeps the
truncated point set invariant under the lattice's point group, so the
anisotropic error orbits cancel and g2 of the hexagonal lattice comes out at
machine scale instead of O(R^-2). Disk membership is decided through the
normalized Gram form q(m,n) = |m*w1 + n*w2|^2 / |w1|^2, whose entries are
exact dyadics for the hexagonal and square generators used throughout; a
1e-9 relative slack keeps boundary orbits intact for generic generators
without reaching the next integer shell for any radius below ~3e4.
"""

import math
from dataclasses import InitVar, dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy.integrate import quad

from . import _kernels
from .errors import UnsupportedFeatureError

DEFAULT_TRUNCATION_RADIUS = 200

_DISK_SLACK = 1e-9


@dataclass(frozen=True)
class Lattice:
    """Rank-2 lattice spanned by omega1, omega2 with Im(omega2/omega1) > 0.

    A handed basis is normalized by flipping omega2's sign; collinear
    generators are rejected. The Eisenstein invariants (g2, g3) are computed
    once at construction (disk-truncated compensated sums) and cached; they
    do not participate in equality or hashing.
    """

    omega1: complex
    omega2: complex
    truncation_radius: int = DEFAULT_TRUNCATION_RADIUS
    g2: complex = field(init=False, compare=False, repr=False)
    g3: complex = field(init=False, compare=False, repr=False)
    _invariants: InitVar[tuple | None] = None

    def __post_init__(self, _invariants):
        w1 = complex(self.omega1)
        w2 = complex(self.omega2)
        if w1 == 0 or w2 == 0:
            raise ValueError("lattice generators must be nonzero")
        tau = w2 / w1
        if tau.imag == 0:
            raise ValueError("lattice generators are collinear")
        if tau.imag < 0:
            w2 = -w2
        radius = self.truncation_radius
        if not isinstance(radius, int) or radius < 1:
            raise ValueError(f"truncation_radius must be a positive integer, got {radius!r}")
        object.__setattr__(self, "omega1", w1)
        object.__setattr__(self, "omega2", w2)
        if _invariants is None:
            s4, s6 = _kernels.eisenstein_sums(_half_points_cached(w1, w2, radius))
            g2 = 60.0 * s4
            g3 = 140.0 * s6
        else:
            g2, g3 = _invariants
        disc = g2 ** 3 - 27.0 * g3 ** 2
        scale = max(abs(g2) ** 3, abs(g3) ** 2)
        if scale == 0.0 or abs(disc) <= 1e-10 * scale:
            raise ValueError(f"degenerate lattice: discriminant {disc} vanishes within tolerance")
        object.__setattr__(self, "g2", g2)
        object.__setattr__(self, "g3", g3)

    @cached_property
    def ell_min(self):
        """Length of a shortest nonzero lattice vector.

        Search over a small index neighborhood; exact for the (near-)reduced
        bases this package constructs.
        """
        return min(
            abs(m * self.omega1 + n * self.omega2)
            for m in range(-3, 4)
            for n in range(-3, 4)
            if (m, n) != (0, 0)
        )


def _enumerate_half_lattice(w1, w2, radius):
    """One representative per +/- pair inside the truncation disk, ordered
    by (|w|^2, m, n) so summation runs shell by shell."""
    a = (w1 * w1.conjugate()).real
    b = (w1 * w2.conjugate()).real
    c = (w2 * w2.conjugate()).real
    nb = b / a
    nc = c / a
    qmin = min(
        m * m + 2.0 * nb * (m * n) + nc * (n * n)
        for m in range(-3, 4)
        for n in range(-3, 4)
        if (m, n) != (0, 0)
    )
    thresh = radius * radius * qmin * (1.0 + _DISK_SLACK)
    det = nc - nb * nb  # Gram determinant (normalized); > 0 for a true basis
    bound_m = int(math.ceil(math.sqrt(thresh * nc / det))) + 1
    bound_n = int(math.ceil(math.sqrt(thresh / det))) + 1
    ms = np.arange(-bound_m, bound_m + 1)
    ns = np.arange(-bound_n, bound_n + 1)
    mg, ng = np.meshgrid(ms, ns, indexing="ij")
    q = mg * mg + 2.0 * nb * (mg * ng) + nc * (ng * ng)
    keep = (q <= thresh) & ((mg > 0) | ((mg == 0) & (ng > 0)))
    mm = mg[keep]
    nn = ng[keep]
    qq = q[keep]
    order = np.lexsort((nn, mm, qq))
    pts = mm[order] * w1 + nn[order] * w2
    pts = np.ascontiguousarray(pts, dtype=np.complex128)
    pts.setflags(write=False)
    return pts


@lru_cache(maxsize=32)
def _half_points_cached(omega1, omega2, radius):
    return _enumerate_half_lattice(omega1, omega2, radius)


def half_points(lat, truncation_radius=None):
    """Half-lattice point array for `lat` at the given (or cached) radius.

    The returned array is shared and marked read-only.
    """
    r = lat.truncation_radius if truncation_radius is None else int(truncation_radius)
    if r < 1:
        raise ValueError("truncation_radius must be positive")
    return _half_points_cached(lat.omega1, lat.omega2, r)


def eisenstein_invariants(lat, truncation_radius=None):
    """(g2, g3) = (60 * sum w^-4, 140 * sum w^-6) over the truncation disk.

    Recomputed from scratch at the requested radius (the lattice caches its
    construction-time values in lat.g2, lat.g3). The truncation tail of the
    two sums decays like R^-2 and R^-4 with coefficients that vanish under
    the hexagonal/square point groups, where only the fp accumulation floor
    remains.
    """
    s4, s6 = _kernels.eisenstein_sums(half_points(lat, truncation_radius))
    return 60.0 * s4, 140.0 * s6


def discriminant(g2, g3):
    """g2^3 - 27*g3^2; zero iff the cubic 4x^3 - g2 x - g3 has a double root."""
    return g2 ** 3 - 27.0 * g3 ** 2


def scale_lattice(lat, s):
    """The lattice s*L. Invariants rescale exactly: g2 *= s^-4, g3 *= s^-6."""
    s = complex(s)
    if s == 0:
        raise ValueError("scale factor must be nonzero")
    return Lattice(
        s * lat.omega1,
        s * lat.omega2,
        lat.truncation_radius,
        _invariants=(lat.g2 * s ** -4, lat.g3 * s ** -6),
    )


def hexagonal_lattice(g3_target, truncation_radius=DEFAULT_TRUNCATION_RADIUS):
    """Hexagonal lattice with invariants (0, g3_target), g3_target real > 0.

    omega1 is the real period 2 * int_{e1}^{inf} dx / sqrt(4x^3 - g3) with
    e1 = (g3/4)^(1/3); the substitution x = e1/t^2 turns it into
    (4 e1 / sqrt(g3)) * int_0^1 (1 - t^6)^(-1/2) dt, a finite interval with
    an integrable endpoint that quadrature handles to ~1e-13 relative. The
    second generator is omega1 * (1/2 + i*sqrt(3)/2). g2 = 0 by hexagonal
    symmetry; the construction is cross-checked against the recomputed sums
    before returning.
    """
    g3t = float(g3_target)
    if not g3t > 0:
        raise ValueError(f"g3 target must be positive, got {g3_target!r}")
    e1 = (g3t / 4.0) ** (1.0 / 3.0)
    integral, _err = quad(
        lambda t: 1.0 / math.sqrt(1.0 - t ** 6), 0.0, 1.0,
        epsabs=1e-14, epsrel=1e-13, limit=200,
    )
    omega1 = 4.0 * e1 / math.sqrt(g3t) * integral
    tau = complex(0.5, 0.5 * math.sqrt(3.0))
    lat = Lattice(omega1, omega1 * tau, truncation_radius)
    g2_scale = max(1.0, g3t ** (2.0 / 3.0))
    if abs(lat.g2) > 1e-8 * g2_scale or abs(lat.g3 - g3t) > 1e-6 * g3t:
        raise ArithmeticError(
            f"hexagonal construction failed self-check: got ({lat.g2}, {lat.g3}), "
            f"wanted (0, {g3t})"
        )
    return lat


def lattice_from_invariants(g2, g3, truncation_radius=DEFAULT_TRUNCATION_RADIUS):
    """Lattice with prescribed invariants; implemented for g2 = 0 only.

    Any complex g3 != 0 is reached by scaling the unit hexagonal lattice
    (principal branch of g3^(-1/6)). Inverting general (g2, g3) pairs is out
    of scope and raises UnsupportedFeatureError.
    """
    if g2 != 0:
        raise UnsupportedFeatureError(
            "lattice inversion is only implemented for g2 = 0 (hexagonal family); "
            f"got g2 = {g2}"
        )
    g3 = complex(g3)
    if g3 == 0:
        raise ValueError("g2 = g3 = 0 is a degenerate (cuspidal) case with no lattice")
    base = hexagonal_lattice(1.0, truncation_radius)
    if g3 == 1:
        return base
    return scale_lattice(base, g3 ** (-1.0 / 6.0))


def lattice_coordinates(z, lat):
    """Real (a, b) with z = a*omega1 + b*omega2."""
    w1, w2 = lat.omega1, lat.omega2
    d = (w1.conjugate() * w2).imag
    a = -(z * w2.conjugate()).imag / d
    b = (z * w1.conjugate()).imag / d
    return a, b


def reduce_to_fundamental(z, lat):
    """Representative of z mod L with coordinates in [0,1) x [0,1).

    The result is z minus an exact integer combination of the generators,
    so congruence holds to the last bit.
    """
    a, b = lattice_coordinates(complex(z), lat)
    m = math.floor(a)
    n = math.floor(b)
    return complex(z) - m * lat.omega1 - n * lat.omega2


def reduce_min_norm(z, lat):
    """Representative of z mod L of minimal norm (ties broken deterministically).

    Rounds the lattice coordinates, then searches the 3x3 translate
    neighborhood; for the (near-)reduced bases used here that neighborhood
    always contains the minimum.
    """
    return complex(reduce_min_norm_many(np.asarray([complex(z)]), lat)[0])


def reduce_min_norm_many(zs, lat):
    zs = np.asarray(zs, dtype=np.complex128)
    w1, w2 = lat.omega1, lat.omega2
    d = (w1.conjugate() * w2).imag
    a = -(zs * w2.conjugate()).imag / d
    b = (zs * w1.conjugate()).imag / d
    m = np.rint(a)
    n = np.rint(b)
    best = zs - (m * w1 + n * w2)
    best_norm = best.real ** 2 + best.imag ** 2
    for dm in (-1, 0, 1):
        for dn in (-1, 0, 1):
            if dm == 0 and dn == 0:
                continue
            cand = zs - ((m + dm) * w1 + (n + dn) * w2)
            cand_norm = cand.real ** 2 + cand.imag ** 2
            better = cand_norm < best_norm
            best = np.where(better, cand, best)
            best_norm = np.where(better, cand_norm, best_norm)
    return best
