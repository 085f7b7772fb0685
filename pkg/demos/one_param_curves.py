# One-parameter W_n states: closed form against the alternating oracle.
#
#   python3 demos/one_param_curves.py
#
# Below q = 1/sqrt(2) the overlap follows the nontrivial formula, above it
# the single dominant coefficient wins and pmax = q^2.

import numpy as np

from wentangle import WParams, alternating_maximize, pmax_wn_one_param, w_state

qs = np.linspace(0.0, 0.99, 12)

for n in (4, 5, 6):
    print(f"n = {n}")
    print("    q      closed     oracle     regime")
    for q in qs:
        closed = pmax_wn_one_param(n, q)
        num = alternating_maximize(w_state(WParams.one_param(n, q)), starts=8)
        print(f"  {q:5.3f}  {closed.pmax:.7f}  {num.pmax:.7f}  {closed.regime}")
    print()

# the equal-coefficient point reproduces (1 - 1/n)^(n-1)
for n in range(3, 9):
    print(n, pmax_wn_one_param(n, 1 / np.sqrt(n)).pmax, (1 - 1 / n) ** (n - 1))
