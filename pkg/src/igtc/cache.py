"""Persistent JSON cache of solved branch families.

One document per (c, Delta, 2S, M) point, keyed by a canonical parameter
string, written atomically (temp file + rename) so readers never observe a
torn file.  Numeric payloads round-trip losslessly: floats are emitted with
Python's shortest-round-trip repr, which preserves every bit.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np

from .logdomain import LogComplex
from .model import ModelParams, RootSet, StateMeta
from .solver import BranchFamily

__all__ = [
    "SCHEMA_VERSION",
    "CacheError",
    "cache_key",
    "cache_path",
    "document_from_family",
    "family_from_document",
    "save_family",
    "load_family",
    "resolve_cache_dir",
]

SCHEMA_VERSION = 1
ENV_CACHE_DIR = "CACHE_DIR"
_DEFAULT_CACHE = Path.home() / ".cache" / "igtc"


class CacheError(RuntimeError):
    """A cache document exists but cannot be used."""


def resolve_cache_dir(explicit: Optional[str] = None) -> Path:
    """Explicit flag wins, then the CACHE_DIR environment variable, then
    ~/.cache/igtc."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    return _DEFAULT_CACHE


def cache_key(params: ModelParams, schema: int = SCHEMA_VERSION) -> str:
    return (f"c={params.c:.17g}_d={params.delta:.17g}"
            f"_2s={params.two_s}_m={params.m_excitations}_v{schema}")


def cache_path(params: ModelParams, cache_dir) -> Path:
    return Path(cache_dir) / f"{cache_key(params)}.json"


def _settings_payload(solver_settings: Optional[dict]) -> dict:
    settings = dict(solver_settings or {})
    canon = json.dumps(settings, sort_keys=True, separators=(",", ":"))
    settings["digest"] = hashlib.sha256(canon.encode()).hexdigest()[:16]
    return settings


def document_from_family(family: BranchFamily,
                         solver_settings: Optional[dict] = None) -> dict:
    p = family.params
    branches = []
    for rs, meta in family.branches:
        if meta.norm_sq is None:
            norm = None
        else:
            norm = {
                "log_magnitude": meta.norm_sq.log_magnitude,
                "phase_re": meta.norm_sq.phase.real,
                "phase_im": meta.norm_sq.phase.imag,
            }
        branches.append({
            "sigma": rs.sigma,
            "roots": [[z.real, z.imag] for z in rs.roots],
            "energy": meta.energy,
            "norm_sq": norm,
            "nu": [meta.nu.real, meta.nu.imag],
            "max_residual": rs.max_residual,
        })
    return {
        "schema_version": SCHEMA_VERSION,
        "params": {"c": p.c, "delta": p.delta, "two_s": p.two_s,
                   "m": p.m_excitations},
        "branches": branches,
        "certificate": {
            "oracle_energies": [float(e) for e in family.certificate["oracle_energies"]],
            "max_energy_mismatch": float(family.certificate["max_energy_mismatch"]),
        },
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "solver_settings": _settings_payload(solver_settings),
    }


def family_from_document(doc: dict) -> BranchFamily:
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise CacheError(f"unsupported document schema: {doc.get('schema_version')!r}")
    try:
        pd = doc["params"]
        params = ModelParams(c=float(pd["c"]), delta=float(pd["delta"]),
                             two_s=int(pd["two_s"]), m_excitations=int(pd["m"]))
        branches = []
        for b in doc["branches"]:
            roots = np.array([complex(re, im) for re, im in b["roots"]], dtype=complex)
            rs = RootSet.build(params, roots, b["max_residual"], sigma=int(b["sigma"]))
            if b["norm_sq"] is None:
                norm = None
            else:
                norm = LogComplex(
                    log_magnitude=float(b["norm_sq"]["log_magnitude"]),
                    phase=complex(b["norm_sq"]["phase_re"], b["norm_sq"]["phase_im"]))
            meta = StateMeta(energy=float(b["energy"]), norm_sq=norm,
                             nu=complex(b["nu"][0], b["nu"][1]))
            branches.append((rs, meta))
        certificate = {
            "oracle_energies": np.array(doc["certificate"]["oracle_energies"], dtype=float),
            "max_energy_mismatch": float(doc["certificate"]["max_energy_mismatch"]),
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise CacheError(f"malformed cache document: {exc}") from exc
    return BranchFamily(params=params, branches=tuple(branches),
                        certificate=certificate)


def save_family(family: BranchFamily, cache_dir,
                solver_settings: Optional[dict] = None) -> Path:
    """Serialize and atomically replace the document for this family."""
    target = cache_path(family.params, cache_dir)
    target.parent.mkdir(parents=True, exist_ok=True)
    doc = document_from_family(family, solver_settings)
    fd, tmp = tempfile.mkstemp(dir=target.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return target


def load_family(params: ModelParams, cache_dir) -> Optional[BranchFamily]:
    """The cached family at these parameters, or None when absent.  A present
    but unreadable document raises CacheError rather than silently recomputing."""
    target = cache_path(params, cache_dir)
    if not target.exists():
        return None
    try:
        with open(target, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CacheError(f"cannot read cache document {target}: {exc}") from exc
    return family_from_document(doc)
