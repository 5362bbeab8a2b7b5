"""Command-line driver: solve and cache branch families, verify them, and
export scalar products, transition matrices, and time series.

Exit codes: 0 success, 2 solver failure (or bad request), 3 verification
failure, 4 missing or unusable prerequisite cache.

Data goes to --out when given (CSV or JSON per --format), otherwise to
stdout; short human-readable summaries always print to stdout, cache
bookkeeping notes to stderr.  CSV floats are written with 17 significant
digits and fixed iteration orders, so identical flags give byte-identical
files.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .model import ModelParams, TimeSeries
from .fock import evolve_coherent, exact_spectrum
from .solver import (
    BranchFamily,
    CertificateError,
    ContinuationPath,
    SolverError,
    enumerate_branches,
)
from .determinants import (
    SIGN_CONVENTIONS,
    annihilation_transition,
    creation_transition,
    slavnov_scalar_product,
)
from .dynamics import (
    DynamicsConfig,
    atomic_inversion,
    field_intensity,
    green_function,
    required_sectors,
)
from .cache import (
    CacheError,
    cache_path,
    document_from_family,
    load_family,
    resolve_cache_dir,
    save_family,
)
from .verify import all_passed, invariant_checks

EXIT_OK = 0
EXIT_SOLVER = 2
EXIT_VERIFY = 3
EXIT_NO_CACHE = 4


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if cell is None:
                cells.append("")
            elif isinstance(cell, float):
                cells.append(_fmt(cell))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    import json
    return json.dumps(obj, indent=1) + "\n"


def _plot_target(args) -> Optional[Path]:
    if not getattr(args, "plot", False):
        return None
    if not args.out:
        raise ValueError("--plot needs --out to know where the figure belongs")
    return Path(args.out).with_suffix(".png")


def _params(args, m: Optional[int] = None) -> ModelParams:
    if args.c is None or args.delta is None or args.two_s is None:
        raise ValueError("--c, --delta and --two-s are required")
    m_val = m if m is not None else args.m
    if m_val is None:
        raise ValueError("--m is required for this command")
    return ModelParams(c=args.c, delta=args.delta, two_s=args.two_s,
                       m_excitations=int(m_val))


def _solve_settings(args) -> dict:
    return {"tol": args.tol, "max_newton_iter": args.max_iter}


def _continuation_path(params: ModelParams, args) -> ContinuationPath:
    return ContinuationPath(start=(0.0, params.delta),
                            end=(params.c, params.delta),
                            tol=args.tol, max_newton_iter=args.max_iter)


def _load_or_solve(params: ModelParams, args, write: bool = True):
    """Cached family if present; otherwise solve, optionally persist."""
    cache_dir = resolve_cache_dir(args.cache_dir)
    fam = load_family(params, cache_dir)
    if fam is not None:
        return fam, True
    fam = enumerate_branches(params, path=_continuation_path(params, args))
    if write:
        save_family(fam, cache_dir, solver_settings=_solve_settings(args))
    return fam, False


def _require_cached(params: ModelParams, args) -> BranchFamily:
    cache_dir = resolve_cache_dir(args.cache_dir)
    fam = load_family(params, cache_dir)
    if fam is None:
        raise CacheError(f"no cached document at {cache_path(params, cache_dir)}; "
                         "run `igtc solve` first")
    return fam


def _families_for(base: ModelParams, sectors, args) -> Dict[int, BranchFamily]:
    return {m: _load_or_solve(base.with_m(m), args)[0] for m in sectors}


def _norm_text(meta) -> str:
    if meta.norm_sq is None:
        return "n/a (TC limit)"
    lg = meta.norm_sq
    if abs(lg.log_magnitude) < 500:
        return f"{lg.to_real(tol=1e-6):.6g}"
    sign = "-" if lg.phase.real < 0 else ""
    return f"{sign}exp({lg.log_magnitude:.6f})"


def _family_summary(fam: BranchFamily) -> str:
    p = fam.params
    lines = [f"branches at c={p.c:g} delta={p.delta:g} 2S={p.two_s} M={p.m_excitations}:",
             f"{'sigma':>5}  {'energy':>18}  {'norm_sq':>16}  {'residual':>10}"]
    for rs, meta in fam.branches:
        lines.append(f"{rs.sigma:>5}  {meta.energy:>18.10g}  {_norm_text(meta):>16}  "
                     f"{rs.max_residual:>10.2e}")
    cert = fam.certificate
    lines.append(f"spectrum certificate: max energy mismatch "
                 f"{cert['max_energy_mismatch']:.2e}")
    return "\n".join(lines) + "\n"


def _family_rows(fam: BranchFamily) -> List[list]:
    rows = []
    for rs, meta in fam.branches:
        norm_lg = meta.norm_sq.log_magnitude if meta.norm_sq is not None else None
        if rs.m == 0:
            rows.append([rs.sigma, float(meta.energy), norm_lg,
                         float(rs.max_residual), None, None, None])
        for i, z in enumerate(rs.roots):
            rows.append([rs.sigma, float(meta.energy), norm_lg,
                         float(rs.max_residual), i, float(z.real), float(z.imag)])
    return rows


_FAMILY_HEADER = ["sigma", "energy", "norm_log_magnitude", "max_residual",
                  "root_index", "root_re", "root_im"]


def _emit_family(fam: BranchFamily, args) -> None:
    sys.stdout.write(_family_summary(fam))
    if args.out:
        if args.format == "json":
            _emit(_json_text(document_from_family(fam, _solve_settings(args))), args.out)
        else:
            _emit(_csv(_FAMILY_HEADER, _family_rows(fam)), args.out)
    png = _plot_target(args)
    if png is not None:
        from .plotting import plot_roots
        plot_roots(fam, png)
        print(f"figure written to {png}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args) -> int:
    params = _params(args)
    cache_dir = resolve_cache_dir(args.cache_dir)
    fam = load_family(params, cache_dir)
    if fam is None:
        fam = enumerate_branches(params, path=_continuation_path(params, args))
        save_family(fam, cache_dir, solver_settings=_solve_settings(args))
        print(f"cache: wrote {cache_path(params, cache_dir)}", file=sys.stderr)
    else:
        print("cache: hit, no recomputation", file=sys.stderr)
    _emit_family(fam, args)
    return EXIT_OK


def cmd_branches(args) -> int:
    fam = _require_cached(_params(args), args)
    _emit_family(fam, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    fam = _require_cached(_params(args), args)
    checks = invariant_checks(fam)
    for ch in checks:
        print(ch.line())
    if args.out:
        if args.format == "json":
            payload = [{"name": ch.name, "measured": ch.measured,
                        "tolerance": ch.tolerance,
                        "status": "skip" if ch.skipped else ("pass" if ch.passed else "fail")}
                       for ch in checks]
            _emit(_json_text(payload), args.out)
        else:
            rows = [[ch.name, ch.measured, ch.tolerance,
                     "skip" if ch.skipped else ("pass" if ch.passed else "fail")]
                    for ch in checks]
            _emit(_csv(["check", "measured", "tolerance", "status"], rows), args.out)
    return EXIT_OK if all_passed(checks) else EXIT_VERIFY


def cmd_scalar(args) -> int:
    params = _params(args)
    if params.is_tc_limit:
        raise ValueError("scalar products need c != 0 (determinant engine)")
    fam, _ = _load_or_solve(params, args)
    norms = [meta.norm_sq.clog for _, meta in fam.branches]
    k = len(fam)
    rows = []
    lines = [f"normalized overlaps <sigma|sigma'> at c={params.c:g} delta={params.delta:g} "
             f"2S={params.two_s} M={params.m_excitations}:"]
    for i, rs_i in enumerate(fam.root_sets):
        vals = []
        for j, rs_j in enumerate(fam.root_sets):
            ov = slavnov_scalar_product(rs_i.roots, rs_j)
            val = complex(np.exp(ov.clog - 0.5 * (norms[i] + norms[j])))
            rows.append([i + 1, j + 1, val.real, val.imag])
            vals.append(val)
        lines.append("  " + "  ".join(f"{v.real:+.3e}{v.imag:+.3e}j" for v in vals))
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        if args.format == "json":
            payload = [{"bra_sigma": r[0], "ket_sigma": r[1],
                        "re": r[2], "im": r[3]} for r in rows]
            _emit(_json_text(payload), args.out)
        else:
            _emit(_csv(["bra_sigma", "ket_sigma", "overlap_re", "overlap_im"], rows),
                  args.out)
    return EXIT_OK


def cmd_transition(args) -> int:
    params = _params(args)
    if params.is_tc_limit:
        raise ValueError("transition elements need c != 0 (determinant engine)")
    n = args.n
    if n is None or n < 1:
        raise ValueError("--n >= 1 is required")
    if n > params.m_excitations:
        raise ValueError("--n cannot exceed --m")
    fam_m = _require_cached(params, args)
    fam_p = _require_cached(params.with_m(params.m_excitations - n), args)
    conv = args.sign_convention
    a_rows, adag_rows = [], []
    a_vals = np.zeros((len(fam_p), len(fam_m)), dtype=complex)
    adag_vals = np.zeros((len(fam_m), len(fam_p)), dtype=complex)
    for i2, rs_p in enumerate(fam_p.root_sets):
        for i1, rs_m in enumerate(fam_m.root_sets):
            a_vals[i2, i1] = annihilation_transition(
                rs_p, rs_m, route=args.route, convention=conv).to_complex()
            a_rows.append(["a^n", i2 + 1, i1 + 1,
                           a_vals[i2, i1].real, a_vals[i2, i1].imag])
    for i1, rs_m in enumerate(fam_m.root_sets):
        for i2, rs_p in enumerate(fam_p.root_sets):
            adag_vals[i1, i2] = creation_transition(
                rs_m, rs_p, route=args.route, convention=conv).to_complex()
            adag_rows.append(["adag^n", i1 + 1, i2 + 1,
                              adag_vals[i1, i2].real, adag_vals[i1, i2].imag])

    def show(tag, mat):
        print(f"{tag} (rows: bra sigma, cols: ket sigma, convention {conv}):")
        for row in mat:
            print("  " + "  ".join(f"{v.real:+.10g}{v.imag:+.10g}j" for v in row))

    show(f"<{params.m_excitations - n}|a^{n}|{params.m_excitations}>", a_vals)
    show(f"<{params.m_excitations}|(adag)^{n}|{params.m_excitations - n}>", adag_vals)
    if args.out:
        if args.format == "json":
            payload = [{"matrix": r[0], "bra_sigma": r[1], "ket_sigma": r[2],
                        "re": r[3], "im": r[4]} for r in a_rows + adag_rows]
            _emit(_json_text(payload), args.out)
        else:
            _emit(_csv(["matrix", "bra_sigma", "ket_sigma", "value_re", "value_im"],
                       a_rows + adag_rows), args.out)
    return EXIT_OK


def _time_grid(args) -> np.ndarray:
    if args.tmax is None:
        raise ValueError("--tmax is required")
    if args.tmax < 0:
        raise ValueError("--tmax must be non-negative")
    if args.tmax == 0:
        return np.array([0.0])
    return np.linspace(0.0, args.tmax, args.steps)


def _series_out(ts: TimeSeries, header, rows, args, ylabel: str) -> None:
    if args.out:
        if args.format == "json":
            payload = {"observable": ts.observable_tag,
                       "provenance": {k: repr(v) for k, v in ts.provenance.items()},
                       "columns": list(header),
                       "rows": [[float(c) for c in r] for r in rows]}
            _emit(_json_text(payload), args.out)
        else:
            _emit(_csv(header, rows), args.out)
    else:
        _emit(_csv(header, rows), None)
    png = _plot_target(args)
    if png is not None:
        from .plotting import plot_timeseries
        plot_timeseries({ts.observable_tag: ts}, png, ylabel=ylabel)
        print(f"figure written to {png}")


def cmd_green(args) -> int:
    params = _params(args)
    if params.is_tc_limit:
        raise ValueError("the Bethe Green function needs c != 0")
    n = args.n if args.n is not None else 1
    if n < 1:
        raise ValueError("--n >= 1 is required")
    t_grid = _time_grid(args)
    ground, _ = _load_or_solve(params, args)
    excited, _ = _load_or_solve(params.with_m(params.m_excitations + n), args)
    ts = green_function(ground, excited, t_grid)
    rows = [[float(t), float(v.real), float(v.imag)]
            for t, v in zip(ts.t, ts.values)]
    _series_out(ts, ["t", "re", "im"], rows, args, ylabel=f"Re G_{n}(t)")
    return EXIT_OK


def _alpha_from_args(args) -> complex:
    if args.alpha_sq is None:
        raise ValueError("--alpha-sq is required")
    if args.alpha_sq < 0:
        raise ValueError("--alpha-sq must be non-negative")
    return complex(np.sqrt(args.alpha_sq))


def cmd_intensity(args) -> int:
    params_base = _params(args, m=0)
    if params_base.is_tc_limit:
        raise ValueError("the Bethe intensity engine needs c != 0")
    alpha = _alpha_from_args(args)
    n = args.n if args.n is not None else 1
    config = DynamicsConfig(alpha=alpha, t_grid=_time_grid(args), n_photons=n,
                            m_max=args.m)
    fams = _families_for(params_base, required_sectors(config), args)
    ts = field_intensity(fams, config)
    try:
        vals = ts.real_values(tol=1e-6)
    except ValueError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    rows = [[float(t), float(v)] for t, v in zip(ts.t, vals)]
    _series_out(ts, ["t", "intensity"], rows, args, ylabel=f"I_{n}(t)")
    return EXIT_OK


def cmd_inversion(args) -> int:
    params_base = _params(args, m=0)
    alpha = _alpha_from_args(args)
    t_grid = _time_grid(args)
    engine = args.engine
    if engine in ("bethe", "both") and params_base.is_tc_limit:
        raise ValueError("the Bethe engine needs c != 0; use --engine oracle at c = 0")
    sz_b = sz_o = None
    prov_ts: Optional[TimeSeries] = None
    if engine in ("bethe", "both"):
        config = DynamicsConfig(alpha=alpha, t_grid=t_grid, n_photons=1,
                                m_max=args.m)
        fams = _families_for(params_base, required_sectors(config), args)
        ts = atomic_inversion(fams, config)
        sz_b = ts.values
        prov_ts = ts
    if engine in ("oracle", "both"):
        ts = evolve_coherent((params_base.c, params_base.delta, params_base.two_s),
                             alpha, t_grid, observable="inversion", m_max=args.m)
        sz_o = ts.real_values()
        if prov_ts is None:
            prov_ts = ts
    if engine == "both":
        rows = [[float(t), float(b), float(o), float(abs(b - o))]
                for t, b, o in zip(t_grid, sz_b, sz_o)]
        header = ["t", "sz_bethe", "sz_oracle", "abs_diff"]
        print(f"max |sz_bethe - sz_oracle| = {max(r[3] for r in rows):.3e}")
    else:
        vals = sz_b if engine == "bethe" else sz_o
        rows = [[float(t), float(v)] for t, v in zip(t_grid, vals)]
        header = ["t", "sz"]
    _series_out(prov_ts, header, rows, args, ylabel="<S^z>(t)")
    return EXIT_OK


def cmd_oracle_compare(args) -> int:
    params = _params(args)
    fam, _ = _load_or_solve(params, args)
    exact = np.sort(exact_spectrum(params))
    solved = np.sort(fam.energies)
    scale = max(1.0, float(np.max(np.abs(exact))))
    rows = []
    print(f"{'idx':>4}  {'E_solver':>18}  {'E_exact':>18}  {'abs_diff':>10}")
    for i, (eb, eo) in enumerate(zip(solved, exact)):
        print(f"{i:>4}  {eb:>18.12g}  {eo:>18.12g}  {abs(eb - eo):>10.2e}")
        rows.append([i, float(eb), float(eo), float(abs(eb - eo))])
    mismatch = float(np.max(np.abs(solved - exact)))
    ok = mismatch < 1e-8 * scale
    print(f"max mismatch {mismatch:.3e} ({'pass' if ok else 'FAIL'} at 1e-8 relative)")
    if args.out:
        if args.format == "json":
            payload = [{"index": r[0], "energy_solver": r[1],
                        "energy_exact": r[2], "abs_diff": r[3]} for r in rows]
            _emit(_json_text(payload), args.out)
        else:
            _emit(_csv(["index", "energy_solver", "energy_exact", "abs_diff"], rows),
                  args.out)
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--c", type=float, help="photon-spin coupling asymmetry c")
    common.add_argument("--delta", type=float, help="effective detuning Delta")
    common.add_argument("--two-s", type=int, dest="two_s", help="2S (integer)")
    common.add_argument("--m", type=int, help="excitation sector M (or sector cutoff "
                                              "for intensity/inversion)")
    common.add_argument("--n", type=int, help="photon ladder order n")
    common.add_argument("--alpha-sq", type=float, dest="alpha_sq",
                        help="coherent amplitude squared |alpha|^2 = <n>")
    common.add_argument("--tmax", type=float, help="time grid endpoint")
    common.add_argument("--steps", type=int, default=400, help="time grid samples")
    common.add_argument("--tol", type=float, default=1e-12, help="solver tolerance")
    common.add_argument("--max-iter", type=int, default=40, dest="max_iter",
                        help="Newton iterations per continuation step")
    common.add_argument("--cache-dir", dest="cache_dir",
                        help="cache directory (default: $CACHE_DIR or ~/.cache/igtc)")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--engine", choices=("bethe", "oracle", "both"),
                        default="bethe")
    common.add_argument("--plot", action="store_true",
                        help="also render a PNG next to --out")

    ap = argparse.ArgumentParser(
        prog="igtc",
        description="Bethe-ansatz solver and dynamics for the integrable "
                    "generalized Tavis-Cummings model")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", parents=[common],
                        help="solve all branches of one sector and cache them")
    sp.set_defaults(func=cmd_solve)
    sp = sub.add_parser("branches", parents=[common],
                        help="print a cached branch family")
    sp.set_defaults(func=cmd_branches)
    sp = sub.add_parser("verify", parents=[common],
                        help="run the invariant suite on a cached family")
    sp.set_defaults(func=cmd_verify)
    sp = sub.add_parser("scalar", parents=[common],
                        help="normalized cross-branch overlap matrix")
    sp.set_defaults(func=cmd_scalar)
    sp = sub.add_parser("transition", parents=[common],
                        help="photon ladder matrices between cached families")
    sp.add_argument("--sign-convention", choices=SIGN_CONVENTIONS,
                    default="plus-row", dest="sign_convention")
    sp.add_argument("--route", choices=("series", "limit"), default="series")
    sp.set_defaults(func=cmd_transition)
    sp = sub.add_parser("green", parents=[common],
                        help="n-photon autocorrelation on the ground branch")
    sp.set_defaults(func=cmd_green)
    sp = sub.add_parser("intensity", parents=[common],
                        help="coherent-state field intensity <(adag)^n a^n>(t)")
    sp.set_defaults(func=cmd_intensity)
    sp = sub.add_parser("inversion", parents=[common],
                        help="atomic inversion <S^z>(t) for a coherent field")
    sp.set_defaults(func=cmd_inversion)
    sp = sub.add_parser("oracle-compare", parents=[common],
                        help="family energies against exact diagonalization")
    sp.set_defaults(func=cmd_oracle_compare)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CacheError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return EXIT_NO_CACHE
    except CertificateError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
