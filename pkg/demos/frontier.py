"""Print the polynomial nonexistence frontier for small degrees.

For each degree d the optimizer returns an exact rational lower bound on
the threshold below which the gadget game has no approximate equilibrium,
together with the gadget parameters that achieve it. The oracle then
confirms the bound on the d = 2 gadget by brute force.
"""

from apne.nonexistence import build_gadget, optimize_alpha
from apne.oracle import nonexistence_threshold

for d in range(2, 9):
    fp = optimize_alpha(d)
    p = fp.argmax
    print(f"d={d:2d}  alpha >= {float(fp.alpha_lower):.6f}  n={p.n} k={p.k} "
          f"w={float(p.w):.4f} beta={float(p.beta):.4f}")

fp = optimize_alpha(2)
print("oracle threshold of the d=2 gadget:", float(nonexistence_threshold(build_gadget(fp.argmax))))
