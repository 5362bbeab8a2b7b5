"""Log-magnitude representation for overflow-prone products and determinants.

Squared norms in the larger sectors reach 1e33 and transition elements carry
prefactors with dozens of multiplicative terms, so intermediate quantities are
accumulated as complex logarithms log|z| + i*arg(z) and only materialized at
the end.  LogComplex is the boundary type handed to callers; the engines work
on the bare complex logs internally.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LogComplex:
    """A complex value stored as exp(log_magnitude) * phase, |phase| = 1."""

    log_magnitude: float
    phase: complex

    def __post_init__(self):
        if math.isfinite(self.log_magnitude) and abs(abs(self.phase) - 1.0) > 1e-12:
            raise ValueError(f"phase must have unit modulus, got |phase|={abs(self.phase)}")

    @classmethod
    def from_value(cls, z) -> "LogComplex":
        z = complex(z)
        r = abs(z)
        if r == 0.0:
            return cls(-math.inf, 1.0 + 0j)
        return cls(math.log(r), z / r)

    @classmethod
    def from_log(cls, clog) -> "LogComplex":
        """Build from a complex log, clog = log|z| + i*arg(z)."""
        clog = complex(clog)
        return cls(clog.real, complex(np.exp(1j * clog.imag)))

    @property
    def clog(self) -> complex:
        return self.log_magnitude + 1j * float(np.angle(self.phase))

    def to_complex(self) -> complex:
        """Materialize; overflows to inf beyond ~1e308, caller's responsibility."""
        if self.log_magnitude == -math.inf:
            return 0.0 + 0j
        return complex(np.exp(self.log_magnitude) * self.phase)

    def to_real(self, tol: float = 1e-8) -> float:
        """Materialize a value known to be real; rejects stray phase."""
        if self.log_magnitude == -math.inf:
            return 0.0
        if abs(self.phase.imag) > tol or self.phase.real < 0:
            if abs(self.phase + 1.0) <= tol:
                return -float(np.exp(self.log_magnitude))
            raise ValueError(f"value is not real within {tol}: phase={self.phase}")
        return float(np.exp(self.log_magnitude))

    def is_positive_real(self, tol: float = 1e-8) -> bool:
        return self.log_magnitude == -math.inf or abs(self.phase - 1.0) <= tol

    def conjugate(self) -> "LogComplex":
        return LogComplex(self.log_magnitude, self.phase.conjugate())

    def _coerce(self, other):
        if isinstance(other, LogComplex):
            return other
        return LogComplex.from_value(other)

    def __mul__(self, other) -> "LogComplex":
        o = self._coerce(other)
        ph = self.phase * o.phase
        r = abs(ph)
        return LogComplex(self.log_magnitude + o.log_magnitude, ph / r if r else 1.0 + 0j)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogComplex":
        o = self._coerce(other)
        ph = self.phase / o.phase
        r = abs(ph)
        return LogComplex(self.log_magnitude - o.log_magnitude, ph / r if r else 1.0 + 0j)

    def __neg__(self) -> "LogComplex":
        return LogComplex(self.log_magnitude, -self.phase)

    def __pow__(self, k: int) -> "LogComplex":
        ph = self.phase ** k
        r = abs(ph)
        return LogComplex(self.log_magnitude * k, ph / r if r else 1.0 + 0j)


def log_of_product(factors) -> complex:
    """Complex log of prod(factors); factors must be nonzero."""
    arr = np.asarray(factors, dtype=complex)
    if arr.size == 0:
        return 0.0 + 0j
    if np.any(arr == 0):
        return complex(-math.inf, 0.0)
    return complex(np.sum(np.log(arr)))


def log_det(mat) -> complex:
    """Complex log of det(mat) via sign/log-abs factorization."""
    sign, logabs = np.linalg.slogdet(np.asarray(mat, dtype=complex))
    if sign == 0:
        return complex(-math.inf, 0.0)
    return complex(logabs + np.log(sign))
