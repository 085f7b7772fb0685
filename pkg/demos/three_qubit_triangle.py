# Three-qubit W-type states and the triangle with sides a1, a2, a3.
#
#   python3 demos/three_qubit_triangle.py

import numpy as np

from wentangle import WParams, alternating_maximize, pmax_w3, w_state

rng = np.random.default_rng(1)

for coeffs in [(1, 1, 1), (0.6, 0.6, np.sqrt(0.28)), (1, 1, 0), (0.8, 0.36, 0.48), (3, 4, 5)]:
    p = WParams.normalized(coeffs)
    r = pmax_w3(p)
    radius = f"{r.circumradius:.6f}" if r.circumradius is not None else "-"
    print(np.round(p.coefficients, 4), f"pmax={r.pmax:.9f}", f"R={radius}", r.regime)

# acute triangles give 4R^2, obtuse ones the largest square
worst = 0.0
for _ in range(50):
    p = WParams.normalized(np.abs(rng.standard_normal(3)))
    worst = max(worst, abs(pmax_w3(p).pmax - alternating_maximize(w_state(p), starts=8).pmax))
print("largest closed/oracle gap over 50 random triples:", worst)
