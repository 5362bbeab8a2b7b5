"""Domain types and closed-form scalar functions of Bethe roots.

The model is a collective spin S coupled to one bosonic mode with a Kerr-type
photon-spin cross term,

    H = Delta*Sz + (adag*Sm + a*Sp) + c * adag*a * Sz,

whose exact eigenstates in each excitation sector are labeled by root sets
{lambda_j} of a system of M coupled algebraic equations.  This module holds
the parameter/state containers and every scalar that is a closed-form
function of a root set: energies, the transfer-matrix eigenvalue, the nu
factor, elementary symmetric functions and the mapping back to lab-frame
energies.  Root finding lives in solver.py, determinants in determinants.py.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .logdomain import LogComplex

# below this |c| the Kerr-free (TC) formulas take over; the c->0 limit of the
# root equations is regular but 1/c appears in several prefactors
C_TC_THRESHOLD = 1e-10

CONJUGATE_TOL = 1e-8
COLLISION_TOL = 1e-8


@dataclass(frozen=True)
class PhysicalParams:
    """Lab-frame cavity parameters behind the effective pair (c, Delta)."""

    g: float
    omega: float
    omega0: float
    gamma: float


@dataclass(frozen=True)
class ModelParams:
    """Parameter quadruple (c, Delta, 2S, M); spin is stored doubled so cS and
    S(S+1) stay exact for half-integer S."""

    c: float
    delta: float
    two_s: int
    m_excitations: int
    physical: Optional[PhysicalParams] = None

    def __post_init__(self):
        if self.two_s < 0:
            raise ValueError("two_s must be non-negative")
        if self.m_excitations < 0:
            raise ValueError("m_excitations must be non-negative")
        if self.physical is not None:
            p = self.physical
            if p.g == 0:
                raise ValueError("physical coupling g must be nonzero")
            delta_chk = (p.gamma + p.omega0 - p.omega) / p.g
            c_chk = -2.0 * p.gamma / p.g
            if (abs(delta_chk - self.delta) > 1e-12 * max(1.0, abs(self.delta))
                    or abs(c_chk - self.c) > 1e-12 * max(1.0, abs(self.c))):
                raise ValueError("physical parameters inconsistent with (c, delta)")

    @property
    def spin(self) -> float:
        return 0.5 * self.two_s

    @property
    def is_tc_limit(self) -> bool:
        return abs(self.c) < C_TC_THRESHOLD

    def with_m(self, m_excitations: int) -> "ModelParams":
        return replace(self, m_excitations=m_excitations)

    def with_target(self, c: Optional[float] = None, delta: Optional[float] = None) -> "ModelParams":
        return replace(self, c=self.c if c is None else c,
                       delta=self.delta if delta is None else delta)


def branch_count(params: ModelParams) -> int:
    """Number of independent root branches in the sector, K = min(2S, M) + 1."""
    return min(params.two_s, params.m_excitations) + 1


def canonical_order(roots) -> np.ndarray:
    """Sort roots lexicographically by (Re, Im); the single order used for all
    alternating products and determinant columns so sign ambiguities cancel."""
    r = np.asarray(roots, dtype=complex)
    if r.size == 0:
        return r.reshape(0)
    idx = np.lexsort((r.imag, r.real))
    return r[idx]


@dataclass(frozen=True, eq=False)
class RootSet:
    """One solution branch: sigma label (1-based, 0 = unlabeled), M roots in
    canonical order, and the residual recorded at creation."""

    params: ModelParams
    sigma: int
    roots: np.ndarray
    max_residual: float

    @classmethod
    def build(cls, params: ModelParams, roots, max_residual: float,
              sigma: int = 0, check: bool = True) -> "RootSet":
        r = canonical_order(roots)
        if len(r) != params.m_excitations:
            raise ValueError(f"expected {params.m_excitations} roots, got {len(r)}")
        if check and len(r):
            if not np.all(np.isfinite(r)):
                raise ValueError("non-finite roots")
            # pairing-based closure: sort-order comparison is unstable when a
            # conjugate pair's real parts differ by an ulp
            d = np.abs(np.conj(r)[:, None] - r[None, :])
            if np.max(np.min(d, axis=1)) > CONJUGATE_TOL:
                raise ValueError("roots do not close under conjugation")
            if len(r) > 1:
                d = np.abs(r[:, None] - r[None, :])
                np.fill_diagonal(d, np.inf)
                if d.min() < COLLISION_TOL:
                    raise ValueError(f"coinciding roots (min distance {d.min():.2e})")
        return cls(params, sigma, r, float(max_residual))

    @property
    def m(self) -> int:
        return len(self.roots)

    def relabel(self, sigma: int) -> "RootSet":
        return RootSet(self.params, sigma, self.roots, self.max_residual)


@dataclass(frozen=True)
class StateMeta:
    """Per-branch derived scalars.  norm_sq is None for TC-limit families,
    where the determinant engine does not apply."""

    energy: float
    norm_sq: Optional[LogComplex]
    nu: complex


@dataclass
class TimeSeries:
    """Sampled observable over a time grid with provenance metadata."""

    t: np.ndarray
    values: np.ndarray
    observable_tag: str
    provenance: dict

    def real_values(self, tol: float = 1e-8) -> np.ndarray:
        v = np.asarray(self.values)
        if not np.iscomplexobj(v):
            return v
        bad = np.abs(v.imag) > tol * np.maximum(1.0, np.abs(v.real))
        if np.any(bad):
            k = int(np.argmax(np.abs(v.imag)))
            raise ValueError(f"series not real within {tol}: Im={v.imag[k]:.3e} at t={self.t[k]}")
        return v.real.copy()


def _unpack(roots, params: Optional[ModelParams]):
    if isinstance(roots, RootSet):
        return roots.roots, roots.params
    if params is None:
        raise TypeError("params required when passing a bare root sequence")
    return np.asarray(roots, dtype=complex), params


def _require_coupling(params: ModelParams):
    if abs(params.c) < C_TC_THRESHOLD:
        raise ValueError("c = 0 is outside this parametrization; use the TC-limit routines")


def _real_checked(z, what: str, tol: float = 1e-9) -> float:
    z = complex(z)
    if abs(z.imag) > tol * max(1.0, abs(z.real)):
        raise ValueError(f"{what} has a non-negligible imaginary part: {z.imag:.3e}")
    return z.real


def vacuum_a(lam, params: ModelParams):
    """Vacuum eigenvalue a(lambda) = (lambda - Delta - 1/c)(lambda + cS)."""
    _require_coupling(params)
    return (lam - params.delta - 1.0 / params.c) * (lam + params.c * params.spin)


def vacuum_d(lam, params: ModelParams):
    """Vacuum eigenvalue d(lambda) = -(lambda - cS)/c."""
    _require_coupling(params)
    return -(lam - params.c * params.spin) / params.c


def elementary_symmetric(roots: Sequence[complex], m: int) -> complex:
    """e_m(roots) by the stable one-root-at-a-time recurrence."""
    r = np.asarray(roots, dtype=complex)
    if m < 0 or m > len(r):
        raise ValueError(f"m={m} out of range for {len(r)} roots")
    e = np.zeros(m + 1, dtype=complex)
    e[0] = 1.0
    for lam in r:
        for k in range(m, 0, -1):
            e[k] += lam * e[k - 1]
    return complex(e[m])


def _energy_raw(roots, c, delta, spin) -> complex:
    """Unchecked complex energy; tolerates complex (c, delta), which the
    continuation engine exploits on its detour arcs."""
    r = np.asarray(roots, dtype=complex)
    if len(r) == 0:
        return complex(-spin * delta)
    return complex((spin / c) * np.prod(1.0 - c / r)
                   - (spin * delta + spin / c) * np.prod(1.0 + c / r))


def energy_igtc(roots, params: Optional[ModelParams] = None) -> float:
    """Sector energy E = (S/c) prod(1 - c/lam) - (S Delta + S/c) prod(1 + c/lam).

    Empty root sets give -S*Delta.  At |c| below the TC threshold the
    Kerr-free expression is used on the same roots.
    """
    r, p = _unpack(roots, params)
    if p.is_tc_limit:
        return energy_tc(r, p)
    if len(r) and np.min(np.abs(r)) < 1e-12:
        raise ValueError("root at the origin")
    return _real_checked(_energy_raw(r, p.c, p.delta, p.spin), "energy")


def energy_value(roots, params: ModelParams) -> complex:
    """Complex energy without the reality check; the imaginary part itself is
    a certification signal inside the continuation loop."""
    r = np.asarray(roots, dtype=complex)
    return _energy_raw(r, params.c, params.delta, params.spin)


def energy_tc(roots, params: ModelParams) -> float:
    """Kerr-free limit energy E = -S (Delta + 2 sum 1/lam)."""
    r = np.asarray(roots, dtype=complex)
    if isinstance(roots, RootSet):
        r, params = roots.roots, roots.params
    if len(r) and np.min(np.abs(r)) < 1e-12:
        raise ValueError("root at the origin")
    s = params.spin
    e = -s * (params.delta + 2.0 * np.sum(1.0 / r)) if len(r) else -s * params.delta
    return _real_checked(e, "TC energy")


def theta_eigenvalue(mu: complex, roots, params: Optional[ModelParams] = None) -> complex:
    """Transfer-matrix eigenvalue at spectral parameter mu,

        theta(mu) = a(mu) prod(1 - c/(mu - lam_j)) + d(mu) prod(1 + c/(mu - lam_j)).

    The d term enters with +: the mu=0 identity theta(0) = c*E pins this sign.
    """
    r, p = _unpack(roots, params)
    _require_coupling(p)
    if len(r) and np.min(np.abs(mu - r)) < 1e-12:
        raise ValueError("mu too close to a root (pole of theta)")
    pm = np.prod(1.0 - p.c / (mu - r)) if len(r) else 1.0
    pp = np.prod(1.0 + p.c / (mu - r)) if len(r) else 1.0
    return complex(vacuum_a(mu, p) * pm + vacuum_d(mu, p) * pp)


def nu_factor(roots, params: Optional[ModelParams] = None) -> complex:
    """nu = 1 / prod(1 + Delta*c - c*lam_j); relates the two operator-ordering
    conventions for the same eigenstate.  Empty product gives 1."""
    r, p = _unpack(roots, params)
    if len(r) == 0:
        return 1.0 + 0j
    factors = 1.0 + p.delta * p.c - p.c * r
    if np.min(np.abs(factors)) < 1e-14:
        raise ValueError("vanishing factor in nu (degenerate parameter point)")
    return complex(1.0 / np.prod(factors))


def nu_log(roots, params: Optional[ModelParams] = None) -> complex:
    """Complex log of nu_factor, for use inside log-space weight assembly."""
    r, p = _unpack(roots, params)
    if len(r) == 0:
        return 0.0 + 0j
    return complex(-np.sum(np.log(1.0 + p.delta * p.c - p.c * r)))


def map_energy_physical(energy: float, params: ModelParams) -> float:
    """Map a sector energy to the lab-frame Hamiltonian eigenvalue,

        E_lab = g*E - (gamma - omega)(M - S) + gamma (M - S)^2,

    using that the conserved excitation operator takes the value M - S on an
    M-root state."""
    if params.physical is None:
        raise ValueError("physical parameters not set")
    p = params.physical
    mval = params.m_excitations - params.spin
    return p.g * energy - (p.gamma - p.omega) * mval + p.gamma * mval ** 2


def map_energy_effective(energy_lab: float, params: ModelParams) -> float:
    """Inverse of map_energy_physical."""
    if params.physical is None:
        raise ValueError("physical parameters not set")
    p = params.physical
    mval = params.m_excitations - params.spin
    return (energy_lab + (p.gamma - p.omega) * mval - p.gamma * mval ** 2) / p.g
