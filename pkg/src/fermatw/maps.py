"""The cubic x^3 + y^3 = 1: birational normal forms and explicit solutions
by lattice functions.

Two Weierstrass models are used:

* E3  : y^2 = 4x^3 - 8   reached from the cubic by
        phi(x, y) = (2/(y+x), sqrt(24)*(y-x)/(y+x));
* E3' : y^2 = 4x^3 - 1   the rescaled model (x, y) -> (2x, sqrt(8)*y),
        with the direct inverse `phi_bar` back to the cubic.

Composing the inverses with (wp, wp') gives the explicit solution pairs

    f = (1 - wp'/sqrt(3)) / (2 wp),  g = (1 + wp'/sqrt(3)) / (2 wp)

on the (0,1)-lattice, and f = (1 - wp'/sqrt(24))/wp, g = (1 + wp'/sqrt(24))/wp
on the (0,8)-lattice; f(z)^3 + g(z)^3 = 1 identically. Any entire alpha then
yields the solution pair z -> (f(alpha(z)), g(alpha(z))).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .curves import AffinePoint, FermatCurve, WeierstrassCurve
from .errors import CurveMembershipError, PoleError, SolutionPoleError
from .expr import evaluate, parse
from .lattice import hexagonal_lattice, reduce_min_norm_many
from .weierstrass import DEFAULT_POLE_EXCLUSION, wp_both, wp_eval_reduced

SQRT3 = math.sqrt(3.0)
SQRT8 = math.sqrt(8.0)
SQRT24 = math.sqrt(24.0)

# The rescaling consistency between the two models needs these exact float
# identities; they hold in IEEE double (and are re-checked in the tests).
if SQRT8 / (2.0 * SQRT24) != 1.0 / (2.0 * SQRT3):
    raise AssertionError("sqrt constant branches are inconsistent on this platform")

FERMAT3 = FermatCurve(3)
E3 = WeierstrassCurve(0.0, 8.0)
E3_PRIME = WeierstrassCurve(0.0, 1.0)

MEMBERSHIP_TOL = 1e-6
SOLUTION_POLE_TOL = 1e-8

VARIANTS = ("g3_1", "g3_8")


@dataclass(frozen=True)
class SolutionPair:
    """Values (f, g) of a solution of f^3 + g^3 = 1 at the point z."""

    f: complex
    g: complex
    z: complex

    def cube_sum_residual(self):
        return abs(self.f ** 3 + self.g ** 3 - 1.0)


def _require_on(curve, point, tol, what):
    r = curve.residual(point.x, point.y)
    if not r <= tol:
        raise CurveMembershipError(
            f"{what}: point ({point.x}, {point.y}) is off {curve} "
            f"(residual {r:.3e} > {tol:.1e})",
            residual=r,
        )


def phi(point, tol=MEMBERSHIP_TOL):
    """Cubic -> E3. (x, y) -> (2/(y+x), sqrt(24)(y-x)/(y+x)).

    x + y = 0 forces x^3 + y^3 = 0 != 1, so the line y = -x meets the curve
    only at infinity; inputs near it map to the image's point at infinity.
    """
    _require_on(FERMAT3, point, tol, "phi")
    den = point.y + point.x
    if abs(den) <= 1e-12 * max(1.0, abs(point.x), abs(point.y)):
        raise PoleError("y + x = 0 maps to infinity on E3", location=point)
    return AffinePoint(2.0 / den, SQRT24 * (point.y - point.x) / den, E3)


def phi_inv(point, tol=MEMBERSHIP_TOL):
    """E3 -> cubic. (x, y) -> (1/x - y/(sqrt(24) x), 1/x + y/(sqrt(24) x))."""
    _require_on(E3, point, tol, "phi_inv")
    if abs(point.x) <= 1e-12 * max(1.0, abs(point.y)):
        raise PoleError("x = 0 on E3 maps to infinity on the cubic", location=point)
    u = 1.0 / point.x
    v = point.y / (SQRT24 * point.x)
    return AffinePoint(u - v, u + v, FERMAT3)


def phi_bar(point, tol=MEMBERSHIP_TOL):
    """E3' -> cubic: phi_inv after undoing the model rescaling.

    Identical to phi_inv((2x, sqrt(8) y)), written out:
    (x, y) -> ((1 - y/sqrt(3)) / (2x), (1 + y/sqrt(3)) / (2x)).
    """
    _require_on(E3_PRIME, point, tol, "phi_bar")
    if abs(point.x) <= 1e-12 * max(1.0, abs(point.y)):
        raise PoleError("x = 0 on E3' maps to infinity on the cubic", location=point)
    half = 1.0 / (2.0 * point.x)
    ratio = point.y / SQRT3
    return AffinePoint(half * (1.0 - ratio), half * (1.0 + ratio), FERMAT3)


@lru_cache(maxsize=8)
def canonical_lattice(g3):
    """Cached hexagonal lattice with invariants (0, g3)."""
    return hexagonal_lattice(float(g3))


def _resolve_lattice(lat, g3_target):
    if lat is None:
        return canonical_lattice(g3_target)
    if abs(lat.g2) > 1e-6 or abs(lat.g3 - g3_target) > 1e-6 * max(1.0, g3_target):
        raise ValueError(
            f"lattice invariants ({lat.g2}, {lat.g3}) are not ({0.0}, {g3_target})"
        )
    return lat


def _pair_from_wp(p, pp, z, scale_const, half_denominator):
    if abs(p) < SOLUTION_POLE_TOL:
        raise SolutionPoleError(
            f"wp(z) = {p} vanishes at z = {z}: the solution pair has a pole there",
            location=z,
        )
    den = 2.0 * p if half_denominator else p
    ratio = pp / scale_const
    return SolutionPair((1.0 - ratio) / den, (1.0 + ratio) / den, z)


def uniformize_g3_1(z, lat=None, method="direct",
                    pole_exclusion=DEFAULT_POLE_EXCLUSION):
    """Solution pair on the (0,1) lattice:
    f, g = (1 -+ wp'(z)/sqrt(3)) / (2 wp(z))."""
    lat = _resolve_lattice(lat, 1.0)
    v = wp_both(z, lat, method=method, pole_exclusion=pole_exclusion)
    return _pair_from_wp(v.p, v.p_prime, complex(z), SQRT3, True)


def uniformize_g3_8(z, lat=None, method="direct",
                    pole_exclusion=DEFAULT_POLE_EXCLUSION):
    """Solution pair on the (0,8) lattice:
    f, g = (1 -+ wp'(z)/sqrt(24)) / wp(z)."""
    lat = _resolve_lattice(lat, 8.0)
    v = wp_both(z, lat, method=method, pole_exclusion=pole_exclusion)
    return _pair_from_wp(v.p, v.p_prime, complex(z), SQRT24, False)


def solution_from_alpha(alpha, z, variant="g3_1", lat=None, method="direct",
                        pole_exclusion=DEFAULT_POLE_EXCLUSION):
    """General solution pair z -> (f(alpha(z)), g(alpha(z))).

    `alpha` is an entire function given as expression source text (parsed by
    fermatw.expr, which enforces entirety) or an already-parsed AST node.
    Poles of the composed pair surface as PoleError/SolutionPoleError.
    """
    if isinstance(alpha, str):
        alpha = parse(alpha)
    w = evaluate(alpha, complex(z))
    if variant == "g3_1":
        return uniformize_g3_1(w, lat, method, pole_exclusion)
    if variant == "g3_8":
        return uniformize_g3_8(w, lat, method, pole_exclusion)
    raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def verification_samples(count, lat, rng, tol=1e-9, method="direct",
                         pole_exclusion=DEFAULT_POLE_EXCLUSION,
                         max_draw_factor=16):
    """Uniform fundamental-cell points at which the cube-sum identity is
    certifiable in double precision, with their solution values.

    Draws z = u*omega1 + v*omega2 (u, v uniform in [0,1)) and rejects:

    * points inside the pole-exclusion disks around lattice points;
    * points where |wp| < 0.05 * |g3|^(1/3) -- within O(0.05) of a zero of
      wp, i.e. a pole of the solution pair, where the identity's conditioning
      exceeds any double-precision evaluation;
    * points where max(|f|, |g|)^3 * 6.6e-15 > tol/2, the same certifiability
      bound expressed through the values themselves.

    Returns arrays (zs, fs, gs) of length `count` plus the rejection count.
    Rejected draws are replaced, and the rejection sequence is a pure
    function of the generator state, so results are deterministic per seed.
    """
    g3_mag = abs(lat.g3)
    wp_floor = 0.05 * g3_mag ** (1.0 / 3.0)
    value_cap = (tol / (2.0 * 6.6e-15)) ** (1.0 / 3.0)
    variant_is_unit = abs(lat.g3 - 1.0) < abs(lat.g3 - 8.0)
    const = SQRT3 if variant_is_unit else SQRT24
    zs = []
    fs = []
    gs = []
    rejected = 0
    draws = 0
    limit = max(16, max_draw_factor * count)
    while len(zs) < count:
        if draws >= limit:
            raise ArithmeticError(
                f"rejected {rejected} of {draws} draws; exclusion disks should "
                f"cover ~0.5% of the cell, not this much"
            )
        need = count - len(zs)
        uv = rng.random((need, 2))
        draws += need
        z = uv[:, 0] * lat.omega1 + uv[:, 1] * lat.omega2
        zr = reduce_min_norm_many(z, lat)
        outside = np.abs(zr) >= pole_exclusion * abs(lat.omega1)
        z, zr = z[outside], zr[outside]
        p, pp = wp_eval_reduced(zr, lat, method=method)
        away = np.abs(p) >= wp_floor
        z, p, pp = z[away], p[away], pp[away]
        ratio = pp / const
        den = 2.0 * p if variant_is_unit else p
        f = (1.0 - ratio) / den
        g = (1.0 + ratio) / den
        small = np.maximum(np.abs(f), np.abs(g)) <= value_cap
        rejected += need - int(np.count_nonzero(small))
        zs.extend(z[small])
        fs.extend(f[small])
        gs.extend(g[small])
    return (np.asarray(zs, dtype=np.complex128),
            np.asarray(fs, dtype=np.complex128),
            np.asarray(gs, dtype=np.complex128),
            rejected)
