"""The Hilbert-type matrix A, its explicit inverse B, the nonlinear part Q and
the right-hand side w of the zero equation  A delta + Q delta = w.

Entries, for k, n >= 1:

    a_{k,n} = 1/(n + k + 1/2) + 1/(n - k + 1/2)
    b_{k,n} = (1 - (2n+1)^-2) / (pi^2 (1 - (2k)^-2)) * a_{k,n}

Denominators are half-integers, so nothing here is ever singular.

B is applied as ``(Bx)_n = sum_k b_{k,n} x_k``; with this orientation
``BA = AB = I`` on l^2.  Truncated operators act on the leading N x N block.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DeltaTooLarge, DimensionMismatch, InvariantViolation, UnsupportedArity
from .seqspace import CoeffSequence
from .special import QuadratureRule, gauss_legendre

PI2 = math.pi ** 2

# dense matrices are cached up to this size; larger ones are streamed in row blocks
_DENSE_CACHE_LIMIT = 2048
_BLOCK_ROWS = 512


@dataclass(frozen=True)
class OperatorTruncation:
    N: int
    fast_apply: bool = False

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 4:
            raise InvariantViolation(f"truncation N must be an integer >= 4, got {self.N!r}")


@dataclass(frozen=True, eq=False)
class RhsVector:
    w: np.ndarray
    quad_order: int

    def __post_init__(self):
        w = np.array(self.w, dtype=np.float64)
        w.setflags(write=False)
        k = np.arange(1, w.size + 1)
        if np.any(w <= 0):
            raise InvariantViolation("w_k must be positive")
        if np.any(w > 1.0 / (math.pi * (k - 0.5) ** 2)):
            raise InvariantViolation("w_k exceeds the majorant 1/(pi (k - 1/2)^2)")
        object.__setattr__(self, "w", w)

    @property
    def K(self) -> int:
        return self.w.size

    def __len__(self):
        return self.w.size

    def __array__(self, dtype=None, copy=None):
        return self.w if dtype is None else self.w.astype(dtype)

    def as_sequence(self) -> CoeffSequence:
        return CoeffSequence(self.w)


@dataclass(frozen=True, eq=False)
class QDecomposition:
    """Q d = A alpha + remainder, with alpha_n = sin(pi d_n)/pi - d_n."""

    alpha: CoeffSequence
    remainder: np.ndarray


def a_entry(k: int, n: int) -> float:
    return 1.0 / (n + k + 0.5) + 1.0 / (n - k + 0.5)


def b_entry(k: int, n: int) -> float:
    return (1.0 - (2 * n + 1.0) ** -2) / (PI2 * (1.0 - (2.0 * k) ** -2)) * a_entry(k, n)


def a_block(K: int, N: int, row_start: int = 1) -> np.ndarray:
    """Rows k = row_start..row_start+K-1, columns n = 1..N of A."""
    k = np.arange(row_start, row_start + K, dtype=np.float64)[:, None]
    n = np.arange(1, N + 1, dtype=np.float64)[None, :]
    return 1.0 / (n + k + 0.5) + 1.0 / (n - k + 0.5)


def _row_scale(N):
    # 1 / (pi^2 (1 - (2k)^-2)), applied to the input of B
    k = np.arange(1, N + 1, dtype=np.float64)
    return 1.0 / (PI2 * (1.0 - (2.0 * k) ** -2))


def _col_scale(N):
    # 1 - (2n+1)^-2, applied to the output of B
    n = np.arange(1, N + 1, dtype=np.float64)
    return 1.0 - (2.0 * n + 1.0) ** -2


@lru_cache(maxsize=6)
def _dense_a(N: int) -> np.ndarray:
    m = a_block(N, N)
    m.setflags(write=False)
    return m


@lru_cache(maxsize=6)
def _dense_b(N: int) -> np.ndarray:
    """Matrix of x -> Bx, i.e. entry [n-1, k-1] = b_{k,n}."""
    m = _col_scale(N)[:, None] * _dense_a(N).T * _row_scale(N)[None, :]
    m.setflags(write=False)
    return m


def b_matrix(N: int) -> np.ndarray:
    """Dense N x N matrix with (B x) = b_matrix(N) @ x."""
    return _dense_b(N)


def _naive_a(x, transpose=False):
    N = x.size
    if N <= _DENSE_CACHE_LIMIT:
        m = _dense_a(N)
        return m.T @ x if transpose else m @ x
    out = np.zeros(N)
    for start in range(0, N, _BLOCK_ROWS):
        rows = min(_BLOCK_ROWS, N - start)
        blk = a_block(rows, N, row_start=start + 1)
        if transpose:
            out += blk.T @ x[start:start + rows]
        else:
            out[start:start + rows] = blk @ x
    return out


def _hankel_apply(x, v):
    """z_q = sum_n x_n v_{n+q}, q = 0..N-1 (0-based), via one length-2N FFT."""
    N = x.size
    L = 2 * N
    fx = np.fft.rfft(x[::-1], L)
    fv = np.fft.rfft(v, L)
    return np.fft.irfft(fx * fv, L)[N - 1:2 * N - 1]


@lru_cache(maxsize=16)
def _kernels(N):
    i = np.arange(2 * N - 1, dtype=np.float64)
    toeplitz = 1.0 / (i - (N - 1) + 0.5)    # 1/(n - k + 1/2) laid out by n - k + N - 1
    hankel = 1.0 / (i + 2.5)                # 1/(n + k + 1/2) laid out by n + k - 2
    toeplitz.setflags(write=False)
    hankel.setflags(write=False)
    return toeplitz, hankel


def _fast_a(x, transpose=False):
    toeplitz, hankel = _kernels(x.size)
    y = _hankel_apply(x, hankel)
    if transpose:
        y += _hankel_apply(x[::-1], toeplitz)
    else:
        y += _hankel_apply(x, toeplitz)[::-1]
    return y


def _prepare(x, trunc: OperatorTruncation):
    arr = np.asarray(x, dtype=np.float64).reshape(-1)
    if arr.size > trunc.N:
        raise DimensionMismatch(f"input of length {arr.size} exceeds truncation N={trunc.N}")
    out = np.zeros(trunc.N)
    out[:arr.size] = arr
    return out


def apply_A(x, trunc: OperatorTruncation) -> CoeffSequence:
    """(Ax)_k = sum_{n<=N} a_{k,n} x_n for k = 1..N."""
    v = _prepare(x, trunc)
    y = _fast_a(v) if trunc.fast_apply else _naive_a(v)
    return CoeffSequence(y)


def apply_B(x, trunc: OperatorTruncation) -> CoeffSequence:
    """(Bx)_n = sum_{k<=N} b_{k,n} x_k for n = 1..N."""
    v = _prepare(x, trunc)
    N = trunc.N
    if trunc.fast_apply:
        y = _col_scale(N) * _fast_a(v * _row_scale(N), transpose=True)
    elif N <= _DENSE_CACHE_LIMIT:
        y = _dense_b(N) @ v
    else:
        y = _col_scale(N) * _naive_a(v * _row_scale(N), transpose=True)
    return CoeffSequence(y)


def apply_B_rows(x, M: int, fast_apply: bool = True) -> np.ndarray:
    """(Bx)_n for n = 1..M where x has length <= M (zero-padded).

    Used to continue a truncated solution past its own length.
    """
    trunc = OperatorTruncation(max(M, 4), fast_apply)
    return apply_B(x, trunc).values[:M]


def compute_w(K: int, rule: QuadratureRule | None = None, panels: int = 8) -> RhsVector:
    """w_k = (1/pi) int_{-1/2}^{1/2} cos(pi x) / (x - k)^2 dx, k = 1..K.

    Composite rule with ``panels`` equal pieces: the pole at x = 1 sits only
    1/2 away from the interval when k = 1.
    """
    if K < 1:
        raise ValueError("K must be positive")
    if rule is None:
        rule = gauss_legendre(8)
    edges = np.linspace(-0.5, 0.5, panels + 1)
    x, wt = rule.scaled(edges[:-1], edges[1:])
    x, wt = x.ravel(), wt.ravel()
    k = np.arange(1, K + 1, dtype=np.float64)[:, None]
    w = (np.cos(np.pi * x) / (x - k) ** 2) @ wt / math.pi
    return RhsVector(w, rule.order)


def _check_delta(d):
    d = np.asarray(d, dtype=np.float64).reshape(-1)
    if np.any(np.abs(d) >= 0.25):
        n = int(np.argmax(np.abs(d) >= 0.25)) + 1
        raise DeltaTooLarge(f"|delta_{n}| = {abs(d[n - 1])!r} >= 1/4")
    return d


def _q_kernel(y, c):
    # cos(pi y)/(c - y) - 1/c without cancellation for small y
    s = np.sin(0.5 * np.pi * y)
    return (y - 2.0 * c * s * s) / (c * (c - y))


def apply_Q(d, K: int, rule: QuadratureRule | None = None) -> CoeffSequence:
    """(Qd)_k for k = 1..K.

    Each inner integral over the oriented interval [0, d_n] uses the fixed
    rule; the sum runs over the stored entries of d.
    """
    d = _check_delta(d)
    if rule is None:
        rule = gauss_legendre(8)
    N = d.size
    y, wt = rule.scaled(np.zeros(N), d)            # (N, m)
    k = np.arange(1, K + 1, dtype=np.float64)
    out = np.zeros(K)
    chunk = max(1, 2 ** 21 // max(1, K * rule.order))
    for start in range(0, N, chunk):
        stop = min(N, start + chunk)
        nz = np.nonzero(d[start:stop])[0] + start
        if nz.size == 0:
            continue
        n = (nz + 1.0)[:, None, None]
        yy = y[nz][:, :, None]
        ww = wt[nz][:, :, None]
        kk = k[None, None, :]
        f = _q_kernel(yy, n + 0.5 + kk) + _q_kernel(yy, n + 0.5 - kk)
        out += np.sum(ww * f, axis=(0, 1))
    return CoeffSequence(out)


def decompose_Q(d, K: int, rule: QuadratureRule | None = None) -> QDecomposition:
    """Split Q d into the linear image A alpha plus a quadratically small remainder."""
    d = _check_delta(d)
    alpha = np.sin(np.pi * d) / np.pi - d
    q = apply_Q(d, K, rule).values
    a_alpha = a_block(K, d.size) @ alpha
    return QDecomposition(CoeffSequence(alpha), q - a_alpha)


def beta_bound_constant(eps: float) -> float:
    """c(eps) = 1/2 + 2 eps / (3 (1 - 2 eps)), valid for eps < 1/2."""
    return 0.5 + 2.0 * eps / (3.0 * (1.0 - 2.0 * eps))


def remainder_majorant(d, K: int) -> np.ndarray:
    """c(max|d_n|) * sum_n d_n^2 ((n+1/2+k)^-2 + (n+1/2-k)^-2), k = 1..K."""
    d = np.asarray(d, dtype=np.float64)
    eps = float(np.max(np.abs(d))) if d.size else 0.0
    n = np.arange(1, d.size + 1, dtype=np.float64)[None, :]
    k = np.arange(1, K + 1, dtype=np.float64)[:, None]
    D = 1.0 / (n + 0.5 + k) ** 2 + 1.0 / (n + 0.5 - k) ** 2
    return beta_bound_constant(eps) * (D @ (d * d))


def _pf_tail(alpha: float, beta: float, L: float) -> float:
    # integral over [L, inf) of dx / ((x + alpha)(x + beta))
    if alpha == beta:
        return 1.0 / (L + alpha)
    return math.log1p((beta - alpha) / (L + alpha)) / (beta - alpha)


def partial_fraction_constant(a) -> float:
    """C(a_1..a_r) = sum over all integers n of prod_i 1/(n + a_i + 1/2), r in 2..4.

    r = 2 uses |n| <= 10^6 plus the midpoint-rule integral of both tails;
    r = 3, 4 truncate at |n| <= 10^5.
    """
    a = [int(v) for v in a]
    r = len(a)
    if not 2 <= r <= 4:
        raise UnsupportedArity(f"C(a_1..a_r) is supported for r = 2..4, got r = {r}")
    M = 10 ** 6 if r == 2 else 10 ** 5
    n = np.arange(-M, M + 1, dtype=np.float64)
    terms = np.ones_like(n)
    for ai in a:
        terms /= n + ai + 0.5
    total = math.fsum(terms)
    if r == 2:
        s1, s2 = a[0] + 0.5, a[1] + 0.5
        total += _pf_tail(s1, s2, M + 0.5) + _pf_tail(-s1, -s2, M + 0.5)
    return total
