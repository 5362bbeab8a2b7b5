"""Determinant representations: scalar products, squared norms, and photon
ladder transition elements between Bethe states.

Everything here evaluates to a LogComplex so the dynamics layer can assemble
products of many large factors without overflow.  Internally the matrices are
small (M x M) and built with explicit leave-one-out products, which stay exact
at moderate M and make the pole structure obvious.

Sign conventions for transition elements: completing the limit determinant for
<bra| a^n |ket> requires n constant rows, and both the all-plus and all-minus
choices are internally consistent.  The native convention here is the all-plus
one ("plus-row"); "minus-row" flips the result by (-1)^n and is the convention
the legacy coefficient tables follow.  `creation` elements are derived from
annihilation ones via conjugation and the nu factors of the two states.
"""
from __future__ import annotations

import warnings
from typing import Tuple

import numpy as np

from .logdomain import LogComplex, log_det
from .model import (
    ModelParams,
    RootSet,
    canonical_order,
    nu_log,
    vacuum_a,
    vacuum_d,
)

__all__ = [
    "slavnov_matrix",
    "slavnov_scalar_product",
    "gaudin_matrix",
    "gaudin_norm",
    "state_norm",
    "annihilation_transition",
    "creation_transition",
    "SIGN_CONVENTIONS",
]

SIGN_CONVENTIONS = ("plus-row", "minus-row")
_EQUAL_SET_RTOL = 1e-10
_COINCIDENCE_TOL = 1e-10
_LIMIT_RADII = (1e3, 1e4, 1e5)
_LIMIT_RESIDUAL_WARN = 1e-5


def _require_rootset(x, who: str) -> RootSet:
    if not isinstance(x, RootSet):
        raise TypeError(f"{who} must be a RootSet (on-shell data is required here)")
    return x


def _same_sector_axes(a: ModelParams, b: ModelParams):
    if (abs(a.c - b.c) > 1e-12 or abs(a.delta - b.delta) > 1e-12
            or a.two_s != b.two_s):
        raise ValueError("bra and ket live at different (c, Delta, 2S)")


def _sets_equal(mus: np.ndarray, lams: np.ndarray) -> bool:
    if len(mus) != len(lams):
        return False
    if len(mus) == 0:
        return True
    a = canonical_order(mus)
    b = canonical_order(lams)
    span = max(1.0, float(np.max(np.abs(b))))
    return bool(np.max(np.abs(a - b)) <= _EQUAL_SET_RTOL * span)


# ---------------------------------------------------------------------------
# scalar products


def slavnov_matrix(mus, ket: RootSet) -> np.ndarray:
    """The matrix whose determinant carries <bra(mu)| ket(lam)> for an
    on-shell ket and arbitrary bra rapidities,

        T_ab = [a(mu_a) prod_{j!=b}(1 - c/(mu_a - lam_j))
                - d(mu_a) prod_{j!=b}(1 + c/(mu_a - lam_j))] / (lam_b - mu_a)^2.
    """
    ket = _require_rootset(ket, "ket")
    p = ket.params
    lams = ket.roots
    mus = np.asarray(mus, dtype=complex)
    c = p.c
    T = np.zeros((len(mus), len(lams)), dtype=complex)
    for ai, mu in enumerate(mus):
        for bi, lb in enumerate(lams):
            pm = 1.0 + 0j
            pp = 1.0 + 0j
            for j, lj in enumerate(lams):
                if j == bi:
                    continue
                pm *= 1 - c / (mu - lj)
                pp *= 1 + c / (mu - lj)
            T[ai, bi] = (vacuum_a(mu, p) * pm - vacuum_d(mu, p) * pp) / (lb - mu) ** 2
    return T


def _slavnov_log(mus: np.ndarray, ket: RootSet) -> complex:
    """Complex log of the scalar product; assumes guards already ran."""
    p = ket.params
    lams = ket.roots
    lg = log_det(slavnov_matrix(mus, ket))
    for lam in lams:
        lg += np.log(lam - p.c * p.spin)
    for mu in mus:
        for lam in lams:
            lg += np.log(mu - lam)
    n = len(mus)
    for j in range(n):
        for k in range(j):
            lg -= np.log(mus[k] - mus[j])
    m = len(lams)
    for b in range(m):
        for a in range(b):
            lg -= np.log(lams[b] - lams[a])
    return lg


def slavnov_scalar_product(bra_mus, ket: RootSet) -> LogComplex:
    """<bra(mu)| ket(lam)> for an on-shell ket; the bra rapidities are free.

    Coinciding bra rapidities make the formula 0/0 and are rejected; a bra
    equal to the ket (within 1e-10) routes to the Gaudin norm, which is that
    limit taken analytically.  Both states are the unnormalized operator
    products over the vacuum.
    """
    ket = _require_rootset(ket, "ket")
    mus = np.asarray(bra_mus, dtype=complex)
    lams = ket.roots
    if len(mus) != len(lams):
        raise ValueError("scalar product needs equal numbers of bra and ket rapidities")
    if len(mus) == 0:
        return LogComplex.from_value(1.0)
    if len(mus) > 1:
        d = np.abs(mus[:, None] - mus[None, :])
        np.fill_diagonal(d, np.inf)
        if d.min() < _COINCIDENCE_TOL:
            raise ValueError("coinciding bra rapidities (Slavnov form degenerates)")
    if _sets_equal(mus, lams):
        return gaudin_norm(ket)
    span = max(1.0, float(np.max(np.abs(lams))))
    if np.min(np.abs(mus[:, None] - lams[None, :])) < _COINCIDENCE_TOL * span:
        raise ValueError("a bra rapidity coincides with a ket root; "
                         "only the full equal-set limit is supported")
    return LogComplex.from_log(_slavnov_log(mus, ket))


# ---------------------------------------------------------------------------
# norms


def gaudin_matrix(roots: RootSet) -> np.ndarray:
    """Jacobian-style matrix whose determinant carries the squared norm."""
    rs = _require_rootset(roots, "roots")
    p = rs.params
    lams = rs.roots
    c, s = p.c, p.spin
    m = len(lams)
    Phi = np.zeros((m, m), dtype=complex)
    for a in range(m):
        la = lams[a]
        diag = -(1 / (la - p.delta - 1 / c) + 1 / (la + c * s) - 1 / (la - c * s))
        for k in range(m):
            if k == a:
                continue
            diag -= 1 / (la - lams[k] - c) + 1 / (lams[k] - la - c)
        Phi[a, a] = diag
        for b in range(m):
            if b == a:
                continue
            Phi[a, b] = 1 / (la - lams[b] - c) + 1 / (lams[b] - la - c)
    return Phi


def gaudin_norm(roots: RootSet) -> LogComplex:
    """Squared norm of the unnormalized B-operator state,

        N^2 = c^M prod_j d(lam_j)^2
              prod_{a!=b} (lam_a - lam_b + c)/(lam_a - lam_b) det Phi.

    This equals nu * <v|v>, so it is real for conjugate-closed root sets but
    carries the sign of nu; `state_norm` returns the positive inner product.
    """
    rs = _require_rootset(roots, "roots")
    p = rs.params
    lams = rs.roots
    m = len(lams)
    if m == 0:
        return LogComplex.from_value(1.0)
    lg = log_det(gaudin_matrix(rs)) + m * np.log(complex(p.c))
    for lam in lams:
        lg += 2 * np.log(complex(vacuum_d(lam, p)))
    for a in range(m):
        for b in range(m):
            if a == b:
                continue
            lg += np.log(lams[a] - lams[b] + p.c) - np.log(lams[a] - lams[b])
    return LogComplex.from_log(lg)


def state_norm(roots: RootSet) -> float:
    """<v|v> = N^2 / nu; positive for any genuine on-shell branch."""
    rs = _require_rootset(roots, "roots")
    lg = gaudin_norm(rs).clog - nu_log(rs)
    val = LogComplex.from_log(lg)
    out = val.to_real(tol=1e-6)
    if out <= 0:
        raise ValueError(f"non-positive state norm {out:.3e}; roots are not a valid branch")
    return out


# ---------------------------------------------------------------------------
# transition elements


def _series_coeffs(lams: np.ndarray, p: ModelParams, b_i: int, order: int) -> np.ndarray:
    """Large-mu expansion coefficients of the Slavnov column entry
    T(mu, lam_b) in powers of 1/mu, p = 0..order.

    Numerator and denominator are assembled as polynomials in mu; their
    descending-order coefficients are exactly the ascending series
    coefficients of x^(M+1) T(1/x), so long division in that order gives the
    expansion directly, with no reversal step.
    """
    c, s, delta = p.c, p.spin, p.delta
    m = len(lams)
    apoly = np.array([1.0, c * s - delta - 1 / c, -(delta + 1 / c) * c * s], dtype=complex)
    dpoly = np.array([-1 / c, s], dtype=complex)
    pm = np.array([1.0 + 0j])
    pp = np.array([1.0 + 0j])
    for j in range(m):
        if j == b_i:
            continue
        pm = np.convolve(pm, np.array([1.0, -(lams[j] + c)]))
        pp = np.convolve(pp, np.array([1.0, -(lams[j] - c)]))
    num = np.convolve(apoly, pm)
    num_d = np.convolve(dpoly, pp)
    full = num.copy()
    full[len(full) - len(num_d):] -= num_d
    q = np.array([1.0 + 0j])
    for j in range(m):
        if j == b_i:
            continue
        q = np.convolve(q, np.array([1.0, -lams[j]]))
    Q = np.convolve(np.array([1.0, -2 * lams[b_i], lams[b_i] ** 2], dtype=complex), q)
    out = np.zeros(order + 1, dtype=complex)
    rem = full[:order + 1].copy() if len(full) >= order + 1 else np.pad(full, (0, order + 1 - len(full)))
    qq = Q[:order + 1] if len(Q) >= order + 1 else np.pad(Q, (0, order + 1 - len(Q)))
    for k in range(order + 1):
        out[k] = rem[k] / qq[0]
        rem[k:] -= out[k] * qq[:order + 1 - k]
    return out


def _annihilation_log(bra_roots: np.ndarray, ket: RootSet, n: int) -> complex:
    """Complex log of <bra| a^n |ket> via the bordered Slavnov determinant:
    the n bra rapidities sent to infinity leave rows of series coefficients
    (a single row of ones for n = 1)."""
    p = ket.params
    lams = ket.roots
    m = len(lams)
    T = np.zeros((m, m), dtype=complex)
    if n == 1:
        T[0, :] = 1.0
    else:
        for b_i in range(m):
            T[:n, b_i] = _series_coeffs(lams, p, b_i, n - 1)
    if m - n > 0:
        T[n:, :] = slavnov_matrix(bra_roots, ket)
    lg = log_det(T)
    for lam in lams:
        lg += np.log(lam - p.c * p.spin)
    for lp in bra_roots:
        for lam in lams:
            lg += np.log(lp - lam)
    for j in range(len(bra_roots)):
        for k in range(j):
            lg -= np.log(bra_roots[k] - bra_roots[j])
    for b in range(m):
        for a in range(b):
            lg -= np.log(lams[b] - lams[a])
    return lg


def _annihilation_limit(bra_roots: np.ndarray, ket: RootSet, n: int,
                        radii=_LIMIT_RADII) -> Tuple[complex, float]:
    """Numeric-limit route: evaluate the full scalar product with n bra
    rapidities on a large arc, divide out their leading growth, and
    extrapolate R -> infinity by two Richardson stages over decade-spaced
    radii.  Returns (value, relative residual of the extrapolation)."""
    vals = []
    for R in radii:
        mus_big = np.array([R * np.exp(1j * (k + 1) * np.pi / (4 * n))
                            for k in range(n)], dtype=complex)
        mus = np.concatenate([mus_big, bra_roots])
        lg = _slavnov_log(mus, ket)
        lg -= np.sum(np.log(mus_big))
        vals.append(np.exp(lg))
    e1 = (10 * vals[1] - vals[0]) / 9
    e2 = (10 * vals[2] - vals[1]) / 9
    out = (100 * e2 - e1) / 99
    res = abs(e2 - e1) / max(abs(e2), 1e-300)
    return out, float(res)


def _transition_pair(bra: RootSet, ket: RootSet) -> int:
    bra = _require_rootset(bra, "bra")
    ket = _require_rootset(ket, "ket")
    _same_sector_axes(bra.params, ket.params)
    n = ket.m - bra.m
    if n < 1:
        raise ValueError(f"ket must carry more roots than bra (got {ket.m} vs {bra.m})")
    return n


def _convention_sign(convention: str, n: int) -> float:
    if convention not in SIGN_CONVENTIONS:
        raise ValueError(f"convention must be one of {SIGN_CONVENTIONS}")
    return -1.0 if (convention == "minus-row" and n % 2) else 1.0


def annihilation_transition(bra: RootSet, ket: RootSet, route: str = "series",
                            convention: str = "plus-row") -> LogComplex:
    """<bra| a^n |ket> between unnormalized on-shell states, n = ket.m - bra.m.

    route="series" is the analytic bordered determinant (default, exact);
    route="limit" is the numeric large-rapidity extrapolation, kept as an
    independent cross-check, which warns when its extrapolation residual
    exceeds 1e-5 (expected for n >= 3).
    """
    n = _transition_pair(bra, ket)
    sign = _convention_sign(convention, n)
    if route == "series":
        return sign * LogComplex.from_log(_annihilation_log(bra.roots, ket, n))
    if route == "limit":
        val, res = _annihilation_limit(bra.roots, ket, n)
        if res > _LIMIT_RESIDUAL_WARN:
            warnings.warn(f"limit-route extrapolation residual {res:.2e} for n={n}; "
                          "prefer route='series'", RuntimeWarning, stacklevel=2)
        return sign * LogComplex.from_value(val)
    raise ValueError("route must be 'series' or 'limit'")


def creation_transition(bra: RootSet, ket: RootSet, route: str = "series",
                        convention: str = "plus-row") -> LogComplex:
    """<bra| (a^dag)^n |ket>, n = bra.m - ket.m, from the conjugated
    annihilation element:

        <v| (a^dag)^n |v'> = (nu_v / nu_v') conj(<v'| a^n |v>).

    The nu ratio accounts for the two states being built in the convention
    whose conjugate is the other's dual.
    """
    bra = _require_rootset(bra, "bra")
    ket = _require_rootset(ket, "ket")
    _same_sector_axes(bra.params, ket.params)
    n = bra.m - ket.m
    if n < 1:
        raise ValueError(f"bra must carry more roots than ket (got {bra.m} vs {ket.m})")
    down = annihilation_transition(ket, bra, route=route, convention=convention)
    lg = nu_log(bra) - nu_log(ket) + np.conj(down.clog)
    return LogComplex.from_log(lg)
