"""Finite sequences with an implicit zero tail, and the zero table built from them.

Every public interface speaks 1-based indices (``n = 1, 2, ...``); storage is
an ordinary 0-based numpy array.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import InvariantViolation


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CoeffSequence:
    """Element of l^2 given by its first ``N`` entries; entries beyond ``N`` are zero."""

    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.values)
        if arr.size == 0:
            raise InvariantViolation("a CoeffSequence needs at least one entry")
        if not np.all(np.isfinite(arr)):
            raise InvariantViolation("CoeffSequence entries must be finite")
        object.__setattr__(self, "values", arr)

    @classmethod
    def zeros(cls, N: int) -> "CoeffSequence":
        return cls(np.zeros(N))

    @classmethod
    def unit(cls, j: int, N: int) -> "CoeffSequence":
        """The unit vector e_j (1-based) of length N."""
        if not 1 <= j <= N:
            raise IndexError(f"unit index {j} outside 1..{N}")
        e = np.zeros(N)
        e[j - 1] = 1.0
        return cls(e)

    @property
    def N(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.values
        return self.values.astype(dtype)

    def at(self, n: int) -> float:
        """Entry n (1-based); zero beyond the stored length."""
        if n < 1:
            raise IndexError("sequence indices start at 1")
        return float(self.values[n - 1]) if n <= self.N else 0.0

    def padded(self, N: int) -> np.ndarray:
        """Copy of the values zero-padded (or cut) to length N."""
        out = np.zeros(N)
        m = min(N, self.N)
        out[:m] = self.values[:m]
        return out

    def norm(self) -> float:
        return l2_norm(self)

    def __add__(self, other):
        n = max(self.N, len(other))
        return CoeffSequence(self.padded(n) + _as_sequence(other).padded(n))

    def __sub__(self, other):
        n = max(self.N, len(other))
        return CoeffSequence(self.padded(n) - _as_sequence(other).padded(n))

    def __mul__(self, scalar: float):
        return CoeffSequence(self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return CoeffSequence(-self.values)

    def __repr__(self) -> str:
        head = np.array2string(self.values[:4], precision=6)
        return f"CoeffSequence(N={self.N}, head={head})"


def _as_sequence(x: Any) -> CoeffSequence:
    return x if isinstance(x, CoeffSequence) else CoeffSequence(x)


def l2_norm(x) -> float:
    """sqrt(sum x_n^2), computed with scaling so it cannot overflow."""
    v = np.asarray(x, dtype=np.float64)
    m = float(np.max(np.abs(v))) if v.size else 0.0
    if m == 0.0 or not np.isfinite(m):
        return m
    return m * float(np.linalg.norm(v / m))


@dataclass(frozen=True, eq=False)
class ZeroTable:
    """Positive zeros tau_n = n + 1/2 - delta_n of the extremal function.

    Both columns are stored so the table round-trips through ``zeros.csv``
    without re-deriving one from the other.
    """

    tau: np.ndarray
    delta: np.ndarray
    source_config: Any = field(default=None, compare=False)

    def __post_init__(self):
        tau = _frozen_array(self.tau)
        delta = _frozen_array(self.delta)
        if tau.shape != delta.shape or tau.size == 0:
            raise InvariantViolation("tau and delta must be non-empty and of equal length")
        if not (np.all(np.isfinite(tau)) and np.all(np.isfinite(delta))):
            raise InvariantViolation("zeros must be finite")
        grid = np.arange(1, tau.size + 1) + 0.5
        if np.any(np.abs(tau - grid) >= 0.5):
            bad = int(np.argmax(np.abs(tau - grid) >= 0.5)) + 1
            raise InvariantViolation(f"tau_{bad} = {tau[bad - 1]!r} left its cell (n, n+1)")
        if np.any(np.abs(tau - (grid - delta)) > 1e-12 * grid):
            raise InvariantViolation("tau and delta disagree: expected tau_n = n + 1/2 - delta_n")
        if tau[0] < 0.5:
            raise InvariantViolation("tau_1 must be at least 1/2")
        if np.any(np.diff(tau) <= 0):
            raise InvariantViolation("zeros must be strictly increasing")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "delta", delta)

    @property
    def N(self) -> int:
        return self.tau.size

    def __len__(self) -> int:
        return self.tau.size

    def at(self, n: int) -> float:
        return float(self.tau[n - 1])

    def head(self, N: int) -> "ZeroTable":
        """The first N zeros."""
        return ZeroTable(self.tau[:N], self.delta[:N], self.source_config)

    @classmethod
    def from_tau(cls, tau, source_config=None) -> "ZeroTable":
        tau = np.asarray(tau, dtype=np.float64)
        return cls(tau, np.arange(1, tau.size + 1) + 0.5 - tau, source_config)

    @classmethod
    def grid(cls, N: int) -> "ZeroTable":
        """The unperturbed table tau_n = n + 1/2."""
        return deltas_to_zeros(CoeffSequence.zeros(N))


def deltas_to_zeros(d, source_config=None) -> ZeroTable:
    """tau_n = n + 1/2 - d_n; raises InvariantViolation if a zero leaves its cell."""
    d = _as_sequence(d)
    if np.any(np.abs(d.values) >= 0.5):
        raise InvariantViolation("every |delta_n| must be below 1/2")
    tau = np.arange(1, d.N + 1) + 0.5 - d.values
    return ZeroTable(tau, d.values, source_config)


def zeros_to_deltas(zeros: ZeroTable) -> CoeffSequence:
    return CoeffSequence(zeros.delta)
