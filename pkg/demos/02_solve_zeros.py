"""Solve for the zeros and check them two ways.

The fixed-point iteration gives delta_n = n + 1/2 - tau_n; the certificates
compare its norms with the constants of the contraction argument, and the
sine-integral residual re-checks the zeros without touching the solver's
quadrature.
"""
import numpy as np

from hbzeros import SolverConfig, certify_ball, fixed_point_solve, residual_start
from hbzeros.solver import extended_zeros

report = fixed_point_solve(SolverConfig(N=400))
print(f"converged in {report.iterations} iterations")
for i, (s, r) in enumerate(zip(report.step_norms, (None,) + report.contraction_ratios), 1):
    print(f"  {i:2d}  step {s:.3e}" + ("" if r is None else f"  ratio {r:.3f}"))

zeros = report.zeros()
print("\nfirst zeros:", np.round(zeros.tau[:6], 8))

print("\ncertificates")
for c in certify_ball(report).certificates:
    print(f"  {c.name:12s} {c.value:.6f} <= {c.bound} (+{c.slack:.3g})  {'ok' if c.passed else 'FAIL'}")

# delta_n ~ 0.0846 / (n + 1/2): the tail is long, so continue the table through B
n = np.arange(1, 401) + 0.5
print(f"\ndelta_n (n + 1/2) at n = 100, 200, 400: {np.round(report.delta.values[[99, 199, 399]] * n[[99, 199, 399]], 5)}")

k = np.arange(1, 51)
for label, z in (("400 rows", zeros), ("4096 rows", extended_zeros(report, 4096))):
    r = residual_start(z, k)
    print(f"sine-integral residual, {label}: max |r_k| = {np.max(np.abs(r)):.2e}")
