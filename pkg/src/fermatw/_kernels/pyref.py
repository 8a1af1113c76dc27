"""Pure-numpy kernel backend.

Same six-function protocol as the compiled backend (`_core`): disk-truncated
lattice sums with +/- pairing, and the Laurent-series/duplication evaluator.
numpy's pairwise `sum` keeps the accumulation error near machine precision
for the shell-ordered arrays these functions receive.
"""

import numpy as np

BACKEND_NAME = "python"


def eisenstein_sums(w_half):
    """Full-lattice sums (S4, S6) = (sum w^-4, sum w^-6) over nonzero points.

    `w_half` holds one representative per +/- pair, so each term counts twice.
    """
    inv2 = 1.0 / (w_half * w_half)
    inv4 = inv2 * inv2
    s4 = 2.0 * np.sum(inv4)
    s6 = 2.0 * np.sum(inv4 * inv2)
    return complex(s4), complex(s6)


def wp_direct(z, w_half):
    a = 1.0 / (z - w_half)
    b = 1.0 / (z + w_half)
    c = 1.0 / w_half
    tail = np.sum(a * a + b * b - 2.0 * (c * c))
    return 1.0 / (z * z) + complex(tail)


def wp_prime_direct(z, w_half):
    a = 1.0 / (z - w_half)
    b = 1.0 / (z + w_half)
    tail = np.sum(a * a * a + b * b * b)
    return -2.0 / (z * z * z) - 2.0 * complex(tail)


def wp_both_direct(z, w_half):
    a = 1.0 / (z - w_half)
    b = 1.0 / (z + w_half)
    c = 1.0 / w_half
    a2 = a * a
    b2 = b * b
    p = 1.0 / (z * z) + complex(np.sum(a2 + b2 - 2.0 * (c * c)))
    pp = -2.0 / (z * z * z) - 2.0 * complex(np.sum(a2 * a + b2 * b))
    return p, pp


def wp_both_direct_batch(zs, w_half):
    zs = np.asarray(zs, dtype=np.complex128)
    p = np.empty(zs.shape, dtype=np.complex128)
    pp = np.empty(zs.shape, dtype=np.complex128)
    flat = zs.ravel()
    pf = p.ravel()
    ppf = pp.ravel()
    for i in range(flat.size):
        pf[i], ppf[i] = wp_both_direct(complex(flat[i]), w_half)
    return p, pp


def wp_fast_batch(zs, ndup, g2, coeffs):
    """Laurent series at z/2^ndup followed by ndup duplication steps.

    Callers guarantee |z/2^ndup| is inside the series' accuracy disk and that
    no intermediate argument is near a zero of the derivative (true for
    min-norm-reduced inputs, see the calling module).
    """
    zs = np.asarray(zs, dtype=np.complex128)
    z = zs / float(2 ** ndup)
    u = z * z
    acc_p = np.zeros_like(u)
    acc_q = np.zeros_like(u)
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        acc_p = acc_p * u + c
        acc_q = acc_q * u + (2.0 * (k + 1)) * c
    p = 1.0 / u + u * acc_p
    q = -2.0 / (u * z) + z * acc_q
    half_g2 = 0.5 * g2
    for _ in range(ndup):
        A = 6.0 * p * p - half_g2
        q2 = q * q
        p_new = (A * A) / (4.0 * q2) - 2.0 * p
        q_new = A * (12.0 * p * q2 - A * A) / (4.0 * q2 * q) - q
        p, q = p_new, q_new
    return p, q
