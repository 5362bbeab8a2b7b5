"""Bethe-ansatz solver and dynamics toolkit for the integrable generalized
Tavis-Cummings model: a spin S exchanging excitations with a single bosonic
mode, with a Kerr-like cross term that keeps the model integrable.

Layers:

* model      - parameter and root-set containers, energies, conserved scalars
* solver     - Newton refinement, c = 0 enumeration, certified continuation
* determinants - scalar products, norms, photon ladder transition elements
* fock       - truncated-space oracle (direct construction + exact evolution)
* dynamics   - coherent-state observables assembled from branch families
* cache      - persistent JSON documents for solved families
* cli        - `igtc` command-line driver
"""

from .logdomain import LogComplex
from .model import (
    ModelParams,
    PhysicalParams,
    RootSet,
    StateMeta,
    TimeSeries,
    branch_count,
    canonical_order,
    energy_igtc,
    energy_tc,
    map_energy_effective,
    map_energy_physical,
    nu_factor,
    theta_eigenvalue,
)
from .solver import (
    BranchFamily,
    CertificateError,
    CollisionError,
    ContinuationPath,
    SolverError,
    continuation_solve,
    enumerate_branches,
    family_table,
    max_residual,
    newton_refine,
    residual_igtc,
    residual_tc,
    string_seed,
    sweep_enumerate,
    tc_branch_roots,
)
from .determinants import (
    annihilation_transition,
    creation_transition,
    gaudin_norm,
    slavnov_scalar_product,
    state_norm,
)
from .dynamics import (
    CollapseRevival,
    DynamicsConfig,
    atomic_inversion,
    collapse_revival,
    field_intensity,
    green_function,
    oracle_inversion,
    projection_f,
    projection_g,
)
from .fock import evolve_coherent, exact_spectrum
from .cache import load_family, save_family
from .verify import invariant_checks

__version__ = "0.1.0"

__all__ = [
    "LogComplex",
    "ModelParams", "PhysicalParams", "RootSet", "StateMeta", "TimeSeries",
    "branch_count", "canonical_order", "energy_igtc", "energy_tc",
    "map_energy_effective", "map_energy_physical", "nu_factor", "theta_eigenvalue",
    "BranchFamily", "CertificateError", "CollisionError", "ContinuationPath",
    "SolverError", "continuation_solve", "enumerate_branches", "family_table",
    "max_residual", "newton_refine", "residual_igtc", "residual_tc",
    "string_seed", "sweep_enumerate", "tc_branch_roots",
    "annihilation_transition", "creation_transition", "gaudin_norm",
    "slavnov_scalar_product", "state_norm",
    "CollapseRevival", "DynamicsConfig", "atomic_inversion", "collapse_revival",
    "field_intensity", "green_function", "oracle_inversion",
    "projection_f", "projection_g",
    "evolve_coherent", "exact_spectrum",
    "load_family", "save_family", "invariant_checks",
    "__version__",
]
