"""The extremal function phi(x) = prod_n (1 - x^2 / tau_n^2), its L^1 norm,
the lower bound 1/||phi||_1 for the point-evaluation constant, and an
independent check of the zeros through the sine integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolation, OutOfRange
from .seqspace import ZeroTable
from .special import adaptive_integrate, gauss_legendre, sine_integral

REFERENCE_BRACKET = (0.5409288219, 0.5409288220)

_EVAL_CHUNK = 1 << 22


@dataclass(frozen=True, eq=False)
class PhiEvaluator:
    """phi built from the first ``tail_start`` zeros; later zeros sit at n + 1/2.

    The infinite grid product is resummed as cos(pi x) / (1 - 4x^2), so only
    the ratios (1 - x^2/tau_n^2) / (1 - x^2/(n + 1/2)^2), n <= tail_start, are
    multiplied out.
    """

    zeros: ZeroTable
    tail_start: int | None = None

    def __post_init__(self):
        T = self.zeros.N if self.tail_start is None else int(self.tail_start)
        if not 1 <= T <= self.zeros.N:
            raise InvariantViolation(f"tail_start must lie in 1..{self.zeros.N}, got {T}")
        object.__setattr__(self, "tail_start", T)
        object.__setattr__(self, "_tau", self.zeros.tau[:T])

    @property
    def x_max(self) -> float:
        return float(self.tail_start)

    def __call__(self, x):
        return eval_phi(self, x)


def _phi_nonneg(tau, x):
    T = tau.size
    g = np.arange(1, T + 1) + 0.5
    m = np.floor(x).astype(np.int64)
    u = m + 0.5 - x
    xc = x[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        # the one infinite ratio per row (n = m) is replaced just below
        ratio = (g / tau) ** 2 * ((tau - xc) * (tau + xc)) / ((g - xc) * (g + xc))
    near = (m >= 1) & (m <= T)
    rows = np.nonzero(near)[0]
    ratio[rows, m[rows] - 1] = 1.0
    P = np.prod(ratio, axis=1)

    out = np.empty_like(x)
    centre = m == 0
    out[centre] = P[centre] * math.pi * np.sinc(u[centre]) / (2.0 * (1.0 + 2.0 * x[centre]))
    far = m > T
    out[far] = P[far] * np.cos(math.pi * x[far]) / (1.0 - 4.0 * x[far] ** 2)
    if rows.size:
        xm, mm = x[near], m[near]
        gm, tm = mm + 0.5, tau[mm - 1]
        # cos(pi x) / (1 - x^2/g_m^2) = (-1)^m g_m^2 pi sinc(u) / (g_m + x), exact at x = g_m
        sign = np.where(mm % 2 == 0, 1.0, -1.0)
        own = (tm - xm) * (tm + xm) / tm ** 2
        out[near] = (P[near] * own * sign * gm ** 2 * math.pi * np.sinc(u[near])
                     / ((gm + xm) * (1.0 - 4.0 * xm ** 2)))
    out[x == 0.0] = 1.0
    return out


def eval_phi(ev: PhiEvaluator, x):
    """phi(x) for scalar or array x with |x| <= tail_start."""
    scalar = np.ndim(x) == 0
    xa = np.abs(np.asarray(x, dtype=np.float64)).ravel()
    if not np.all(np.isfinite(xa)) or (xa.size and xa.max() > ev.x_max):
        raise OutOfRange(f"phi is only modelled on |x| <= {ev.x_max:g}")
    out = np.empty_like(xa)
    step = max(1, _EVAL_CHUNK // ev.tail_start)
    for s in range(0, xa.size, step):
        out[s:s + step] = _phi_nonneg(ev._tau, xa[s:s + step])
    out = out.reshape(np.shape(x))
    return float(out) if scalar else out


@dataclass(frozen=True)
class L1Estimate:
    """||phi||_1 = panels + tail, with ``uncertainty`` covering the tail model."""

    value: float
    panels: float
    tail: float
    uncertainty: float
    quadrature_error: float
    n_zeros: int

    def __float__(self):
        return self.value


def l1_norm_phi(ev: PhiEvaluator, n_zeros: int = 300, tol: float = 1e-10) -> L1Estimate:
    """L^1 norm of phi over the real line.

    |phi| is integrated zero-to-zero up to tau_{n_zeros} (each panel is
    smooth); beyond that |phi(x)| is modelled as c |cos(pi x)| / (4x^2 - 1)
    with c read off at the extremum x = n_zeros + 1, and integrated using the
    mean 2/pi of |cos|. The tail model is trusted to relative accuracy 1/X,
    X = tau_{n_zeros}, which is what ``uncertainty`` reports.
    """
    if not 1 <= n_zeros <= ev.tail_start - 5:
        raise InvariantViolation(
            f"n_zeros must lie in 1..tail_start-5 = {ev.tail_start - 5}, got {n_zeros}")
    tau = ev.zeros.tau[:n_zeros]
    edges = np.concatenate([[0.0], tau])
    vals, errs = adaptive_integrate(lambda t: np.abs(eval_phi(ev, t)), edges[:-1], edges[1:],
                                    tol=tol / n_zeros, rule=gauss_legendre(16))
    panels = 2.0 * math.fsum(vals)

    X = float(tau[-1])
    xe = n_zeros + 1.0
    c = abs(eval_phi(ev, xe)) * (4.0 * xe * xe - 1.0)
    one_side = c * (2.0 / math.pi) * 0.25 * math.log((2.0 * X + 1.0) / (2.0 * X - 1.0))
    tail = 2.0 * one_side
    return L1Estimate(value=panels + tail, panels=panels, tail=tail,
                      uncertainty=tail / X, quadrature_error=2.0 * float(np.sum(errs)),
                      n_zeros=n_zeros)


@dataclass(frozen=True)
class ConstantBracket:
    phi_l1: float
    lower: float
    lower_interval: tuple
    tail: float
    uncertainty: float
    n_zeros: int
    reference: tuple = REFERENCE_BRACKET
    upper_computed: bool = False

    @property
    def gap(self) -> float:
        """Signed distance of the lower bound from the reference bracket (0 inside it)."""
        lo, hi = self.reference
        if self.lower < lo:
            return self.lower - lo
        if self.lower > hi:
            return self.lower - hi
        return 0.0

    def as_dict(self) -> dict:
        return {
            "phi_l1": self.phi_l1,
            "lower_bound": self.lower,
            "lower_bound_interval": list(self.lower_interval),
            "tail_estimate": self.tail,
            "tail_uncertainty": self.uncertainty,
            "n_zeros": self.n_zeros,
            "reference_bracket": list(self.reference),
            "gap_to_reference": self.gap,
            "upper_bound_computed": self.upper_computed,
            "upper_bound_note": "the sup-norm term of the upper bound is not computed",
        }


def constant_bracket(ev: PhiEvaluator, n_zeros: int = 300, tol: float = 1e-10) -> ConstantBracket:
    """Lower bound 1/||phi||_1 for the sharp constant, next to the reference bracket."""
    est = l1_norm_phi(ev, n_zeros, tol)
    L, u = est.value, est.uncertainty
    return ConstantBracket(phi_l1=L, lower=1.0 / L, lower_interval=(1.0 / (L + u), 1.0 / (L - u)),
                           tail=est.tail, uncertainty=u, n_zeros=n_zeros)


def asymptotic_tail_constant(zeros: ZeroTable) -> float:
    """c in delta_n ~ c / (n + 1/2), read off the last tabulated zero."""
    N = zeros.N
    return float(zeros.delta[-1] * (N + 0.5))


def residual_start(zeros: ZeroTable, k, tail: str = "asymptotic"):
    """Left-hand side of the sinc-integral system at row k (scalar or array).

        int_{-1/2}^{1/2} sinc pi(x-k) dx
          + sum_n (-1)^n int_{tau_n}^{n+1/2} (sinc pi(x-k) + sinc pi(x+k)) dx

    Every integral is a difference of sine integrals. ``tail="zero"`` treats
    zeros past the table as sitting exactly on the grid; ``tail="asymptotic"``
    adds the first-order contribution of delta_n = c/(n + 1/2) for n > N.
    """
    if tail not in ("zero", "asymptotic"):
        raise ValueError(f"unknown tail model {tail!r}")
    scalar = np.ndim(k) == 0
    ks = np.atleast_1d(np.asarray(k, dtype=np.int64))
    N = zeros.N
    if np.any(ks < 1) or np.any(2 * ks > N):
        raise InvariantViolation(f"row index k must lie in 1..{N // 2}")
    tau = zeros.tau
    g = np.arange(1, N + 1) + 0.5
    sign = np.where(np.arange(1, N + 1) % 2 == 0, 1.0, -1.0)
    out = np.empty(ks.size)
    for i, kk in enumerate(ks):
        head = sine_integral(math.pi * (kk + 0.5)) - sine_integral(math.pi * (kk - 0.5))
        body = (sine_integral(math.pi * (g - kk)) - sine_integral(math.pi * (tau - kk))
                + sine_integral(math.pi * (g + kk)) - sine_integral(math.pi * (tau + kk)))
        out[i] = (head + math.fsum(sign * body)) / math.pi
    if tail == "asymptotic":
        c = asymptotic_tail_constant(zeros)
        kf = ks.astype(np.float64)
        parity = np.where(ks % 2 == 0, 1.0, -1.0)
        out += parity * c / math.pi * np.log((N + 1 + kf) / (N + 1 - kf)) / kf
    return float(out[0]) if scalar else out
