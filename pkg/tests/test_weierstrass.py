"""The wp evaluator: ODE, symmetries, argument reduction, and the series path."""

import numpy as np
import pytest

from fermatw.errors import PoleError
from fermatw.lattice import reduce_min_norm_many, scale_lattice
from fermatw.weierstrass import (
    WpValue,
    ode_residual,
    psi,
    wp,
    wp_both,
    wp_eval_reduced,
    wp_prime,
    wp_unreduced,
)

E1 = 4.0 ** (-1.0 / 3.0)


def _cell_samples(lat, rng, count, lo=0.04, hi=0.96):
    u = rng.uniform(lo, hi, count)
    v = rng.uniform(lo, hi, count)
    return u * lat.omega1 + v * lat.omega2


@pytest.mark.parametrize("which", ["lat1", "lat8"])
@pytest.mark.parametrize("method,tol", [("direct", 1e-12), ("laurent", 1e-10)])
def test_ode_residual(which, method, tol, lat1, lat8, rng):
    lat = lat1 if which == "lat1" else lat8
    zs = _cell_samples(lat, rng, 300)
    worst = 0.0
    for z in zs:
        try:
            worst = max(worst, ode_residual(complex(z), lat, method=method))
        except PoleError:
            continue
    assert worst < tol


def test_parity(lat1, rng):
    zs = _cell_samples(lat1, rng, 100)
    for z in zs:
        a = wp_both(complex(z), lat1)
        b = wp_both(complex(-z), lat1)
        assert abs(a.p - b.p) <= 1e-13 * max(1.0, abs(a.p))
        assert abs(a.p_prime + b.p_prime) <= 1e-13 * max(1.0, abs(a.p_prime))


def test_periodicity(lat1, rng):
    # Stay away from the pole so the shifted evaluation is well conditioned.
    zs = _cell_samples(lat1, rng, 60, lo=0.2, hi=0.8)
    zs = zs[np.abs(reduce_min_norm_many(zs, lat1)) > 0.1 * lat1.ell_min]
    shifts = rng.integers(-3, 4, size=(zs.size, 2))
    for z, (m, n) in zip(zs, shifts):
        a = wp_both(complex(z), lat1)
        b = wp_both(complex(z + m * lat1.omega1 + n * lat1.omega2), lat1)
        assert abs(a.p - b.p) <= 1e-9 * max(1.0, abs(a.p))
        assert abs(a.p_prime - b.p_prime) <= 1e-9 * max(1.0, abs(a.p_prime))


def test_methods_agree(lat1, rng):
    zs = _cell_samples(lat1, rng, 200)
    zr = reduce_min_norm_many(zs, lat1)
    keep = np.abs(zr) > 0.05 * lat1.ell_min
    pd, qd = wp_eval_reduced(zr[keep], lat1, "direct")
    pl, ql = wp_eval_reduced(zr[keep], lat1, "laurent")
    np.testing.assert_allclose(pd, pl, rtol=1e-10, atol=1e-10)
    np.testing.assert_allclose(qd, ql, rtol=1e-10, atol=1e-10)


def test_half_period_value(lat1):
    """wp at the real half-period is the real branch root e1 = 4^(-1/3)."""
    val = wp_both(lat1.omega1 / 2.0, lat1)
    assert abs(val.p - E1) <= 1e-12
    assert abs(val.p_prime) <= 1e-12


def test_scaling_covariance(lat1, rng):
    # wp_{s L}(s z) = s^-2 wp_L(z), wp'_{s L}(s z) = s^-3 wp'_L(z)
    for s in (2.0 ** -0.5, 1 + 1j):
        scaled = scale_lattice(lat1, s)
        zs = _cell_samples(lat1, rng, 24, lo=0.15, hi=0.85)
        for z in zs:
            a = wp_both(complex(z), lat1)
            b = wp_both(complex(s * z), scaled)
            assert abs(b.p - a.p / s**2) <= 1e-10 * max(1.0, abs(a.p))
            assert abs(b.p_prime - a.p_prime / s**3) <= 1e-10 * max(1.0, abs(a.p_prime))


def test_pole_raises(lat1):
    for z in (0.0, lat1.omega1, lat1.omega2, 3 * lat1.omega1 - 2 * lat1.omega2):
        with pytest.raises(PoleError):
            wp(z, lat1)
    err = None
    try:
        wp(lat1.omega1 + 1e-9, lat1)
    except PoleError as exc:
        err = exc
    assert err is not None
    # location reports the offending lattice point
    assert err.location is not None
    assert abs(err.location - lat1.omega1) <= 1e-8


def test_pole_exclusion_override(lat1):
    z = 1e-5 + 0.0j
    val = wp(z, lat1, pole_exclusion=0.0)
    assert abs(val - 1.0 / z**2) <= 1e-4 * abs(val)


def test_near_pole_laurent_still_accurate(lat1):
    # Just outside the default exclusion radius the series path stays tight.
    z = 3.2e-3 * lat1.omega1
    a = wp_both(complex(z), lat1, method="direct")
    b = wp_both(complex(z), lat1, method="laurent")
    assert abs(a.p - b.p) <= 1e-9 * abs(a.p)
    assert abs(a.p_prime - b.p_prime) <= 1e-9 * abs(a.p_prime)


def test_method_validation(lat1):
    with pytest.raises(ValueError):
        wp(0.3 + 0.2j, lat1, method="pade")


def test_wp_value_shape(lat1):
    val = wp_both(0.4 + 0.2j, lat1)
    assert isinstance(val, WpValue)
    assert val.p == wp(0.4 + 0.2j, lat1)
    assert val.p_prime == wp_prime(0.4 + 0.2j, lat1)
    with pytest.raises(AttributeError):
        val.p = 0.0  # frozen


def test_psi_lands_on_curve(lat1, rng):
    zs = _cell_samples(lat1, rng, 50)
    for z in zs:
        pt = psi(complex(z), lat1)
        assert pt.curve.g2 == lat1.g2
        assert pt.curve.g3 == lat1.g3
        assert pt.residual() <= 1e-12
    with pytest.raises(PoleError):
        psi(0.0, lat1)


def test_unreduced_oracle(lat1):
    """Brute-force unreduced sum over a radius-800 disk agrees with the
    reduced evaluator; this cross-checks the reduction itself."""
    for z in (0.31 + 0.17j, 1.1 * lat1.omega1 + 0.4 * lat1.omega2):
        a = wp(complex(z), lat1)
        b = wp_unreduced(complex(z), lat1, truncation_radius=800)
        assert abs(a - b) <= 5e-8 * max(1.0, abs(a))
