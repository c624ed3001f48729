"""Banach iteration for A delta + Q delta = w and the certificates that go with it.

With x = delta - Bw the equation becomes the fixed-point problem
x = G(x) = -B Q(x + Bw); we iterate the equivalent form
delta <- B (w - Q delta) starting from delta = Bw (x = 0).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvariantViolation, NoConvergence
from .operators import OperatorTruncation, apply_B, apply_B_rows, apply_Q, compute_w
from .seqspace import CoeffSequence, ZeroTable, deltas_to_zeros, l2_norm
from .special import gauss_legendre

log = logging.getLogger(__name__)

DELTA_BOUND = 0.13
BALL_RADIUS = 0.042
BW_BOUND = 0.088
CONTRACTION_BOUND = 0.73
CONTRACTION_SLACK = 0.02


@dataclass(frozen=True)
class SolverConfig:
    N: int = 400
    max_iter: int = 30
    tol: float = 1e-10
    quad_order: int = 8
    fast_apply: bool = False

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 8:
            raise InvariantViolation(f"N must be an integer >= 8, got {self.N!r}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise InvariantViolation(f"max_iter must be >= 1, got {self.max_iter!r}")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise InvariantViolation(f"tol must be positive, got {self.tol!r}")

    @property
    def truncation(self) -> OperatorTruncation:
        return OperatorTruncation(self.N, self.fast_apply)

    def as_dict(self) -> dict:
        return {"N": self.N, "max_iter": self.max_iter, "tol": self.tol,
                "quad_order": self.quad_order, "fast_apply": self.fast_apply}


@dataclass(frozen=True, eq=False)
class SolveReport:
    delta: CoeffSequence
    iterations: int
    step_norms: tuple
    contraction_ratios: tuple
    norm_delta: float
    norm_x: float
    norm_Bw: float
    residual: float
    converged: bool
    config: SolverConfig
    Bw: CoeffSequence = field(repr=False)
    forcing: CoeffSequence = field(repr=False)

    def zeros(self) -> ZeroTable:
        return deltas_to_zeros(self.delta, self.config)

    def tail_bounds(self) -> dict:
        return {"delta": tail_norm_bound(self.delta),
                "x": tail_norm_bound(self.delta - self.Bw),
                "Bw": tail_norm_bound(self.Bw)}


def tail_norm_bound(v) -> float:
    """Estimate of ||(v_n)_{n>N}|| for a sequence decaying like c/(n + 1/2).

    Columns of B decay like 2/(pi^2 n), so every image under B has a c/n tail;
    c is taken as the largest |v_n| (n + 1/2) over the last half of the data,
    and sum_{n>N} (n + 1/2)^-2 <= 1/N.
    """
    v = np.asarray(v, dtype=np.float64)
    N = v.size
    n = np.arange(1, N + 1) + 0.5
    c = float(np.max(np.abs(v[N // 2:]) * n[N // 2:]))
    return c / math.sqrt(N)


def _rhs(cfg: SolverConfig):
    rule = gauss_legendre(cfg.quad_order)
    return rule, compute_w(cfg.N, rule).w


def fixed_point_solve(cfg: SolverConfig | None = None, initial=None) -> SolveReport:
    """Iterate delta <- B(w - Q delta) until the l^2 step drops below cfg.tol.

    ``initial`` overrides the canonical start delta = Bw.  Raises NoConvergence
    (carrying the partial report) when the iteration budget runs out.
    """
    cfg = cfg or SolverConfig()
    trunc = cfg.truncation
    rule, w = _rhs(cfg)
    Bw = apply_B(w, trunc).values
    delta = Bw.copy() if initial is None else np.asarray(initial, dtype=np.float64)[:cfg.N].copy()
    if delta.size < cfg.N:
        delta = np.pad(delta, (0, cfg.N - delta.size))

    steps = []
    converged = False
    forcing = w - apply_Q(delta, cfg.N, rule).values
    for it in range(1, cfg.max_iter + 1):
        new = apply_B(forcing, trunc).values
        step = l2_norm(new - delta)
        steps.append(step)
        delta = new
        forcing = w - apply_Q(delta, cfg.N, rule).values
        log.debug("iteration %d: step %.3e", it, step)
        if step < cfg.tol:
            converged = True
            break

    ratios = tuple(b / a for a, b in zip(steps, steps[1:]) if a > 0)
    residual = l2_norm(apply_B(forcing, trunc).values - delta)
    report = SolveReport(
        delta=CoeffSequence(delta),
        iterations=len(steps),
        step_norms=tuple(steps),
        contraction_ratios=ratios,
        norm_delta=l2_norm(delta),
        norm_x=l2_norm(delta - Bw),
        norm_Bw=l2_norm(Bw),
        residual=residual,
        converged=converged,
        config=cfg,
        Bw=CoeffSequence(Bw),
        forcing=CoeffSequence(forcing),
    )
    if not converged:
        raise NoConvergence(
            f"no convergence after {cfg.max_iter} iterations (last step {steps[-1]:.3e})", report)
    return report


def extend_deltas(delta, M: int, quad_order: int = 8, forcing=None) -> CoeffSequence:
    """Continue a truncated solution to length M > N.

    Entries 1..N are kept; entries N+1..M are (B f)_n with f = w - Q delta
    restricted to k <= N, which is exactly what the fixed-point map produces
    for those rows.
    """
    d = np.asarray(delta, dtype=np.float64)
    N = d.size
    if M <= N:
        return CoeffSequence(d[:M])
    if forcing is None:
        rule = gauss_legendre(quad_order)
        forcing = compute_w(N, rule).w - apply_Q(d, N, rule).values
    tail = apply_B_rows(np.asarray(forcing, dtype=np.float64), M, fast_apply=True)
    return CoeffSequence(np.concatenate([d, tail[N:]]))


def extended_zeros(report: SolveReport, M: int) -> ZeroTable:
    d = extend_deltas(report.delta, M, report.config.quad_order, report.forcing)
    return deltas_to_zeros(d, report.config)


# -- certificates ---------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    name: str
    value: float
    bound: float
    slack: float
    passed: bool
    note: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "bound": self.bound,
                "slack": self.slack, "passed": self.passed, "note": self.note}


@dataclass(frozen=True)
class CertificateResult:
    certificates: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.certificates)

    def __getitem__(self, name) -> Certificate:
        for c in self.certificates:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_list(self) -> list:
        return [c.as_dict() for c in self.certificates]


def _upper(name, value, bound, slack=0.0, note=""):
    return Certificate(name, float(value), float(bound), float(slack),
                       bool(value <= bound + slack), note)


def ball_certificates(delta, Bw, contraction: float) -> list:
    """The three norm certificates plus the contraction one.

    ||delta|| and ||delta - Bw|| carry their tail estimate on the measured
    side; ||Bw|| is compared against 0.088 widened by its tail estimate.
    """
    delta = np.asarray(delta, dtype=np.float64)
    Bw = np.asarray(Bw, dtype=np.float64)
    x = delta - Bw
    td, tx, tb = tail_norm_bound(delta), tail_norm_bound(x), tail_norm_bound(Bw)
    return [
        _upper("norm_delta", l2_norm(delta) + td, DELTA_BOUND,
               note=f"truncated norm {l2_norm(delta):.6g} + tail {td:.3g}"),
        _upper("norm_x", l2_norm(x) + tx, BALL_RADIUS,
               note=f"truncated norm {l2_norm(x):.6g} + tail {tx:.3g}"),
        _upper("norm_Bw", l2_norm(Bw), BW_BOUND, slack=tb, note="slack = tail estimate"),
        _upper("contraction", contraction, CONTRACTION_BOUND, slack=CONTRACTION_SLACK),
    ]


def estimate_contraction(delta, cfg: SolverConfig, samples: int = 4, seed: int = 0) -> float:
    """Largest observed ||G(x) - G(z)|| / ||x - z|| over a few pairs in the ball.

    The pairs are the solution against the centre and its midpoint, plus
    seeded random points of norm <= 0.042; deterministic for fixed inputs.
    """
    trunc = cfg.truncation
    rule, w = _rhs(cfg)
    Bw = apply_B(w, trunc).values
    d = np.asarray(delta, dtype=np.float64)[:cfg.N]
    d = np.pad(d, (0, cfg.N - d.size))

    def G(x):
        return -apply_B(apply_Q(x + Bw, cfg.N, rule).values, trunc).values

    xs = d - Bw
    rng = np.random.default_rng(seed)
    points = [xs, np.zeros(cfg.N), 0.5 * xs]
    for _ in range(samples):
        u = rng.standard_normal(cfg.N)
        points.append(BALL_RADIUS * rng.uniform() * u / np.linalg.norm(u))
    images = [G(p) for p in points]
    worst = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            gap = np.linalg.norm(points[i] - points[j])
            if gap > 0:
                worst = max(worst, np.linalg.norm(images[i] - images[j]) / gap)
    return float(worst)


def certify_ball(report: SolveReport) -> CertificateResult:
    """Check a converged solve against the ball, bound and contraction constants."""
    if not report.converged:
        raise InvariantViolation("certify_ball needs a converged SolveReport")
    ratios = report.contraction_ratios[2:]
    if ratios:
        contraction = max(ratios)
    else:
        contraction = estimate_contraction(report.delta, report.config)
    certs = ball_certificates(report.delta, report.Bw, contraction)
    return CertificateResult(tuple(certs))


# -- truncation study -----------------------------------------------------


@dataclass(frozen=True)
class ConvergenceRow:
    N: int
    iterations: int
    norm_delta: float
    tau1: float
    prefix_diff: float   # ||delta^(N) - delta^(N/2)|| on the first N/2 entries; nan on level 0


@dataclass(frozen=True)
class ConvergenceTable:
    rows: tuple

    @property
    def prefix_diffs(self) -> list:
        return [r.prefix_diff for r in self.rows[1:]]

    def decreasing(self) -> bool:
        diffs = self.prefix_diffs
        return all(b < a for a, b in zip(diffs, diffs[1:]))


def truncation_study(base_cfg: SolverConfig, levels: int) -> ConvergenceTable:
    """Solve at N, 2N, ..., 2^(levels-1) N and compare consecutive solutions."""
    if levels < 2:
        raise ValueError("a truncation study needs at least two levels")
    rows = []
    prev = None
    for level in range(levels):
        cfg = replace(base_cfg, N=base_cfg.N * 2 ** level)
        rep = fixed_point_solve(cfg)
        d = rep.delta.values
        diff = float("nan") if prev is None else l2_norm(d[:prev.size] - prev)
        rows.append(ConvergenceRow(cfg.N, rep.iterations, rep.norm_delta,
                                   float(1.5 - d[0]), diff))
        prev = d
    return ConvergenceTable(tuple(rows))
