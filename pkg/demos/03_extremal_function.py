"""The extremal function, its L^1 norm and the lower bound for the constant.

Compared with cos(pi x) / (1 - 4x^2), whose zeros sit exactly on the grid and
whose norm is slightly larger.
"""
import numpy as np

from hbzeros import PhiEvaluator, constant_bracket, deltas_to_zeros, eval_phi
from hbzeros import SolverConfig, fixed_point_solve
from hbzeros.solver import extended_zeros

report = fixed_point_solve(SolverConfig(N=400))
phi = PhiEvaluator(extended_zeros(report, 4096))
grid = PhiEvaluator(deltas_to_zeros(np.zeros(4096)))

xs = np.array([0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0])
print("   x      phi(x)       grid")
for x, a, b in zip(xs, eval_phi(phi, xs), eval_phi(grid, xs)):
    print(f"{x:5.1f}  {a:+.8f}  {b:+.8f}")

for name, ev in (("extremal", phi), ("grid", grid)):
    cb = constant_bracket(ev, n_zeros=300)
    lo, hi = cb.lower_interval
    print(f"\n{name}: ||phi||_1 = {cb.phi_l1:.10f}, 1/||phi||_1 = {cb.lower:.10f} "
          f"in [{lo:.10f}, {hi:.10f}]")
print(f"\nreference bracket: {cb.reference}")
