"""The Hilbert-type matrix A and its explicit inverse B.

Shows that B undoes A on unit vectors (better as N grows), that the FFT
products agree with the dense ones, and the isometry identity
||Ax||^2 + 2 (sum x_n / (n + 1/2))^2 = pi^2 ||x||^2.
"""
import math

import numpy as np

from hbzeros import CoeffSequence, OperatorTruncation, apply_A, apply_B
from hbzeros.operators import a_block

print("||B A e_j - e_j|| for j = 1, 5")
for N in (64, 128, 256, 512, 1024):
    t = OperatorTruncation(N)
    row = []
    for j in (1, 5):
        e = CoeffSequence.unit(j, N)
        row.append(np.linalg.norm(apply_B(apply_A(e, t), t).values - e.values))
    print(f"  N = {N:5d}: " + "  ".join(f"{v:.3e}" for v in row))

x = np.random.default_rng(0).standard_normal(4096)
slow = apply_A(x, OperatorTruncation(4096)).values
fast = apply_A(x, OperatorTruncation(4096, fast_apply=True)).values
print(f"\nfast vs dense A at N = 4096: relative difference "
      f"{np.linalg.norm(fast - slow) / np.linalg.norm(slow):.1e}")

x = np.array([1.0, -0.5, 0.25, 2.0])
n = np.arange(1, 5) + 0.5
Ax = a_block(200_000, 4) @ x
lhs = Ax @ Ax + 2 * np.sum(x / n) ** 2
print(f"\nisometry: lhs = {lhs:.12f}, pi^2 ||x||^2 = {math.pi ** 2 * (x @ x):.12f}")
