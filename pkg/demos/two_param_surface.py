# Surface of pmax over a|1000> + b|0100> + q|0010> + q|0001>.
#
#   python3 demos/two_param_surface.py
#
# Coarse text rendering; the minimum sits at a = b = 1/2 (the equal W_4).

import numpy as np

from wentangle import closed_form as cf

axis = np.linspace(0.0, 1.0, 11)
print("b \\ a " + " ".join(f"{a:5.2f}" for a in axis))
for b in axis:
    cells = []
    for a in axis:
        if a * a + b * b > 1.0:
            cells.append("   . ")
        else:
            cells.append(f"{cf.pmax_w4_two_param(a, b).pmax:5.3f}")
    print(f"{b:5.2f} " + " ".join(cells))

low = min((cf.pmax_w4_two_param(a, b).pmax, float(a), float(b)) for a in axis for b in axis if a * a + b * b <= 1)
print("\nminimum", low, " 27/64 =", 27 / 64)

# on the 2q = a + b line the general expression is 0/0; the library switches
# to the line formula there, and the rationalized form stays finite next to it
a = 0.4
b = (-a + np.sqrt(6 - 8 * a * a)) / 3
for d in (1e-3, 1e-6, 1e-9, 0.0):
    print(f"offset {d:7.0e}  literal {cf.abqq_literal(a, b + d)!s:>22}  stable {cf.abqq_stable(a, b + d):.15f}")
print("line value", cf.special_line_pmax(a, b))
