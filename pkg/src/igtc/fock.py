"""Independent exact-diagonalization engine on a truncated Fock x spin space.

Everything else in the package is certified against this module: it builds
the conserved-sector Hamiltonian blocks, the quasi-particle operators B and C
as explicit matrices, Bethe states by direct operator products, and exact
coherent-state evolution.  Nothing here knows about determinant formulas or
root equations, which is the point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Optional, Sequence, Tuple
import warnings

import numpy as np

from .model import ModelParams, RootSet, TimeSeries, elementary_symmetric

# direct state products are meant as a small-M certification authority, not a
# production path; the bound keeps accidental large-M calls from exploding
DIRECT_M_BOUND = 6


@dataclass(frozen=True)
class SectorBasis:
    """Basis of one conserved-excitation sector: states (n, 2m) with
    n = (M - S) - m, ordered by ascending m.  Index 0 is (n=M, m=-S)."""

    two_s: int
    m_excitations: int
    states: tuple

    @classmethod
    def build(cls, two_s: int, m_excitations: int) -> "SectorBasis":
        states = []
        for k in range(0, min(two_s, m_excitations) + 1):
            two_m = -two_s + 2 * k
            n = m_excitations - k
            states.append((n, two_m))
        return cls(two_s, m_excitations, tuple(states))

    @property
    def dim(self) -> int:
        return len(self.states)


@dataclass(frozen=True, eq=False)
class TruncatedSpace:
    """Fock cutoff n_max tensored with the spin-S multiplet; operator matrices
    built once per space.  Spin index 0 is the lowest weight m = -S."""

    two_s: int
    n_max: int
    _ops: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        dim_f = self.n_max + 1
        dim_s = self.two_s + 1
        s = self.two_s / 2.0
        a = np.diag(np.sqrt(np.arange(1, dim_f)), 1)
        ad = a.T.copy()
        m_vals = np.array([-s + k for k in range(dim_s)])
        sz = np.diag(m_vals)
        sp = np.zeros((dim_s, dim_s))
        for k in range(dim_s - 1):
            m = m_vals[k]
            sp[k + 1, k] = np.sqrt(s * (s + 1) - m * (m + 1))
        sm = sp.T.copy()
        i_f, i_s = np.eye(dim_f), np.eye(dim_s)
        self._ops.update(
            a=np.kron(a, i_s), ad=np.kron(ad, i_s), n=np.kron(ad @ a, i_s),
            sz=np.kron(i_f, sz), sp=np.kron(i_f, sp), sm=np.kron(i_f, sm),
        )

    @property
    def dim(self) -> int:
        return (self.n_max + 1) * (self.two_s + 1)

    def op(self, name: str) -> np.ndarray:
        return self._ops[name]

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim)
        v[0] = 1.0  # |n=0> x |m=-S>
        return v


def build_sector_hamiltonian(params: ModelParams) -> Tuple[np.ndarray, SectorBasis]:
    """Tridiagonal K x K block of H over one sector: diagonal Delta*m + c*n*m,
    off-diagonal sqrt(n) sqrt(S(S+1) - m(m+1)) from a*Sp."""
    basis = SectorBasis.build(params.two_s, params.m_excitations)
    K = basis.dim
    s = params.spin
    H = np.zeros((K, K))
    for i, (n, two_m) in enumerate(basis.states):
        m = two_m / 2.0
        H[i, i] = params.delta * m + params.c * n * m
        if i + 1 < K:
            amp = np.sqrt(n) * np.sqrt(s * (s + 1) - m * (m + 1))
            H[i + 1, i] = amp
            H[i, i + 1] = amp
    return H, basis


def exact_spectrum(params: ModelParams) -> np.ndarray:
    """Ascending eigenvalues of the sector Hamiltonian."""
    H, _ = build_sector_hamiltonian(params)
    return np.linalg.eigvalsh(H)


def full_hamiltonian(space: TruncatedSpace, params: ModelParams) -> np.ndarray:
    return (params.delta * space.op("sz") + space.op("ad") @ space.op("sm")
            + space.op("a") @ space.op("sp") + params.c * space.op("n") @ space.op("sz"))


def build_bc_operators(lam: complex, space: TruncatedSpace,
                       params: ModelParams) -> Tuple[np.ndarray, np.ndarray]:
    """Matrix representations of B(lam) = lam*X - Y and C(lam) = lam*a - Z with
    X = adag + c*Sp, Y = (1 + c*Delta)Sp - c*adag*Sz + c^2*adag*a*Sp and
    Z = Sm + c*a*Sz."""
    c = params.c
    ad, a = space.op("ad"), space.op("a")
    sp, sm, sz = space.op("sp"), space.op("sm"), space.op("sz")
    X = ad + c * sp
    Y = (1 + c * params.delta) * sp - c * ad @ sz + c * c * ad @ a @ sp
    Z = sm + c * a @ sz
    B = lam * X - Y
    C = lam * a - Z
    return B, C


def bethe_state_direct(roots: Sequence[complex], space: TruncatedSpace,
                       params: ModelParams) -> np.ndarray:
    """prod_j B(lam_j) |vacuum>, cross-checked against the equivalent
    elementary-symmetric-function expansion sum_m (-1)^(M-m) e_m X^m Y^(M-m)."""
    r = np.asarray(roots, dtype=complex)
    M = len(r)
    if space.n_max < M:
        raise ValueError(f"n_max={space.n_max} too small for M={M} creation operators")
    v = space.vacuum().astype(complex)
    for lam in r:
        B, _ = build_bc_operators(lam, space, params)
        v = B @ v
    if M:
        c = params.c
        ad, a, sp, sz = space.op("ad"), space.op("a"), space.op("sp"), space.op("sz")
        X = (ad + c * sp).astype(complex)
        Y = ((1 + c * params.delta) * sp - c * ad @ sz + c * c * ad @ a @ sp).astype(complex)
        alt = np.zeros_like(v)
        xm = space.vacuum().astype(complex)
        for m in range(M + 1):
            term = xm.copy()
            for _ in range(M - m):
                term = Y @ term
            alt += (-1.0) ** (M - m) * elementary_symmetric(r, m) * term
            xm = X @ xm
        scale = max(np.linalg.norm(v), 1e-300)
        if np.linalg.norm(alt - v) > 1e-10 * scale:
            raise AssertionError("product-of-B and symmetric-function state constructions disagree")
    return v


def dual_state_direct(roots: Sequence[complex], space: TruncatedSpace,
                      params: ModelParams) -> np.ndarray:
    """<vacuum| prod_j C(lam_j) as a row vector (transpose products, no
    conjugation: this is the algebraic dual, not the Hermitian adjoint)."""
    w = space.vacuum().astype(complex)
    for lam in reversed(list(roots)):
        _, C = build_bc_operators(lam, space, params)
        w = C.T @ w
    return w


def _check_bound(*sizes):
    if max(sizes, default=0) > DIRECT_M_BOUND:
        raise ValueError(f"direct evaluation bounded at M={DIRECT_M_BOUND}, got {max(sizes)}")


def direct_scalar_product(bra_mus: Sequence[complex], ket_lambdas: Sequence[complex],
                          params: ModelParams) -> complex:
    """<vac| prod C(mu) prod B(lam) |vac> by explicit matrix application; valid
    for arbitrary mu and lam, on-shell or not."""
    if len(bra_mus) != len(ket_lambdas):
        raise ValueError("scalar product needs equal-length parameter sets")
    _check_bound(len(ket_lambdas))
    M = len(ket_lambdas)
    space = TruncatedSpace(params.two_s, max(M, 1))
    v = space.vacuum().astype(complex)
    for lam in ket_lambdas:
        B, _ = build_bc_operators(lam, space, params)
        v = B @ v
    for mu in bra_mus:
        _, C = build_bc_operators(mu, space, params)
        v = C @ v
    return complex(space.vacuum() @ v)


def direct_transition_element(bra_roots: Sequence[complex], ket_roots: Sequence[complex],
                              op_kind: str, n: int, params: ModelParams) -> complex:
    """<vac| prod C(bra) a^n prod B(ket) |vac> (op_kind 'annihilate_n') or the
    (adag)^n variant ('create_n').  Sector counting requires
    len(bra) = len(ket) - n for annihilation, len(ket) + n for creation."""
    bra = list(bra_roots)
    ket = list(ket_roots)
    _check_bound(len(bra), len(ket))
    if op_kind == "annihilate_n":
        if len(bra) != len(ket) - n:
            raise ValueError("annihilate_n needs len(bra) = len(ket) - n")
        ladder = "a"
        n_max = max(len(ket), 1)
    elif op_kind == "create_n":
        if len(bra) != len(ket) + n:
            raise ValueError("create_n needs len(bra) = len(ket) + n")
        ladder = "ad"
        n_max = max(len(ket) + n, 1)
    else:
        raise ValueError(f"unknown op_kind {op_kind!r}")
    space = TruncatedSpace(params.two_s, n_max)
    v = space.vacuum().astype(complex)
    for lam in ket:
        B, _ = build_bc_operators(lam, space, params)
        v = B @ v
    op = space.op(ladder)
    for _ in range(n):
        v = op @ v
    for mu in bra:
        _, C = build_bc_operators(mu, space, params)
        v = C @ v
    return complex(space.vacuum() @ v)


def state_norm_sq_direct(roots: Sequence[complex], params: ModelParams) -> complex:
    """<vac| prod C(lam) prod B(lam) |vac> at coincident arguments: the
    algebraic squared norm (= norm_sq from the determinant engine).  The
    Hermitian squared norm of the same state is norm_sq / nu."""
    _check_bound(len(roots))
    M = len(roots)
    space = TruncatedSpace(params.two_s, max(M, 1))
    ket = bethe_state_direct(roots, space, params)
    bra = dual_state_direct(roots, space, params)
    return complex(bra @ ket)


def _poisson_m_max(alpha: complex, weight_cutoff: float, hard_max: int = 400) -> int:
    nbar = abs(alpha) ** 2
    w = np.exp(-nbar)
    acc = w
    m = 0
    while acc < 1.0 - weight_cutoff and m < hard_max:
        m += 1
        w *= nbar / m
        acc += w
    return m


def evolve_coherent(params_family, alpha: complex, t_grid,
                    observable: str = "inversion",
                    weight_cutoff: float = 1e-10,
                    m_max: Optional[int] = None) -> TimeSeries:
    """Exact evolution of |alpha> x |S,-S| under U(t) = exp(+iHt), sector by
    sector (each conserved block is K x K, diagonalized once).

    params_family is a ModelParams (m_excitations ignored) or a (c, delta,
    two_s) triple.  observable is 'inversion' for <Sz>(t) or 'photon_number'
    for <adag a>(t).  Sectors are kept until the cumulative Poisson weight
    reaches 1 - weight_cutoff; the dropped tail is reported via a warning.
    """
    if isinstance(params_family, ModelParams):
        c, delta, two_s = params_family.c, params_family.delta, params_family.two_s
    else:
        c, delta, two_s = params_family
    if abs(alpha) ** 2 > 400:
        raise ValueError("|alpha|^2 too large for the sector sweep")
    t_arr = np.asarray(t_grid, dtype=float)
    if m_max is None:
        m_max = _poisson_m_max(alpha, weight_cutoff)
    nbar = abs(alpha) ** 2
    log_norm = -nbar / 2.0
    sz = np.zeros(len(t_arr))
    nph = np.zeros(len(t_arr))
    total_w = 0.0
    for M in range(0, m_max + 1):
        H, basis = build_sector_hamiltonian(ModelParams(c, delta, two_s, M))
        w, V = np.linalg.eigh(H)
        amp = np.exp(log_norm) * alpha ** M / np.sqrt(float(factorial(M)))
        total_w += abs(amp) ** 2
        coef = V[0, :] * amp  # overlap with basis index 0 = (n=M, m=-S)
        mvals = np.array([tm / 2.0 for _, tm in basis.states])
        nvals = np.array([nv for nv, _ in basis.states], dtype=float)
        phases = np.exp(1j * np.outer(t_arr, w)) * coef
        vt = phases @ V.T
        prob = np.abs(vt) ** 2
        sz += prob @ mvals
        nph += prob @ nvals
    dropped = 1.0 - total_w
    if dropped > weight_cutoff * 10:
        warnings.warn(f"coherent-state truncation dropped weight {dropped:.2e}")
    if observable == "inversion":
        values = sz
    elif observable == "photon_number":
        values = nph
    else:
        raise ValueError(f"unknown observable {observable!r}")
    return TimeSeries(
        t=t_arr, values=values, observable_tag=observable,
        provenance={"engine": "oracle", "c": c, "delta": delta, "two_s": two_s,
                    "alpha": complex(alpha), "m_max": m_max,
                    "dropped_weight": dropped},
    )
