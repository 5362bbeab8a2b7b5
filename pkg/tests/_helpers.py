"""Shared direct-space helpers for the test suite."""
import math

import numpy as np


def coherent_down_vector(alpha, space):
    """|alpha> x |m = -S> in a TruncatedSpace (spin index 0 is lowest weight)."""
    dim_s = space.two_s + 1
    v = np.zeros(space.dim, dtype=complex)
    w = np.exp(-abs(alpha) ** 2 / 2.0)
    for n in range(space.n_max + 1):
        v[n * dim_s] = w * alpha ** n / math.sqrt(math.factorial(n))
    return v


def branch_by_energy(family, energy, tol=1e-3):
    """The (RootSet, StateMeta) pair whose energy is nearest `energy`."""
    best = min(family.branches, key=lambda br: abs(br[1].energy - energy))
    if abs(best[1].energy - energy) > tol * max(1.0, abs(energy)):
        raise AssertionError(f"no branch near E={energy}: nearest {best[1].energy}")
    return best


def closed_scalar_m1(mu, lam, c, delta, s):
    """Closed polynomial for the one-root scalar product <vac|C(mu)B(lam)|vac>,
    valid fully off shell."""
    return -c * c * s * s + s * (2 + c * (2 * delta - lam - mu)) + lam * mu


def closed_scalar_m2(m1, m2, l1, l2, c, delta, s):
    """Closed polynomial for the two-root scalar product, valid fully off
    shell; symmetric in (m1, m2) and in (l1, l2)."""
    cd = c * delta + 1
    return (2 * c**4 * s**4 - 4 * c**4 * s**3 + 2 * c**4 * s**2
            - (l1 + l2) * (-2 * c**3 * s**3 + 2 * c**3 * s**2 + c * (4 * s**2 - 2 * s) * cd)
            - (m1 + m2) * (-2 * c**3 * s**3 + 2 * c**3 * s**2 + 4 * c * s**2 * cd - 2 * c * s * cd)
            + 4 * c**2 * s**2 * cd + 2 * c**2 * l1 * l2 * s**2 + 2 * c**2 * m1 * m2 * s**2
            + cd * (-8 * c**2 * s**3 + 4 * c**2 * s**2 - 2 * c**2 * s + (8 * s**2 - 4 * s) * cd)
            + 2 * (l1 + l2) * (m1 + m2) * s * cd - 2 * c * (l1 + l2) * m1 * m2 * s
            - 2 * c * l1 * l2 * (m1 + m2) * s + 2 * l1 * l2 * m1 * m2)


def random_closed_roots(gen, m, scale=1.5):
    """A conjugate-closed, generically off-shell root set: real roots plus
    conjugate pairs, separated enough to avoid collision checks."""
    n_real = m % 2
    roots = [complex(gen.uniform(-scale, scale)) for _ in range(n_real)]
    for k in range((m - n_real) // 2):
        re = gen.uniform(-scale, scale)
        im = (k + 1) * gen.uniform(0.4, 1.2)
        roots += [complex(re, im), complex(re, -im)]
    return roots
