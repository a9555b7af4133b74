"""Merge circuits with a game that has no approximate equilibrium.

The merged game's approximate equilibria match the satisfying assignments
of the circuit one to one, so an unsatisfiable circuit gives a game with
no approximate equilibrium at all.
"""

from fractions import Fraction

from apne import circuit as circ
from apne.merge import merge, verify_parsimony
from apne.nonexistence import build_gadget, optimize_alpha

fp = optimize_alpha(2)
core = build_gadget(fp.argmax)
alpha = Fraction(21, 20)
print(f"core threshold {float(fp.alpha_lower):.6f}, merging at alpha={alpha}")

circuits = {
    "x1 nand x2": "INPUT x1\nINPUT x2\nNAND g x1 x2\nOUTPUT g",
    "x and not x": "INPUT x\nNOT n x\nNAND a x n\nNOT g a\nOUTPUT g",
}
for name, text in circuits.items():
    raw = circ.parse(text)
    m = merge(raw, 2, alpha, core, threshold=fp.alpha_lower)
    rep = verify_parsimony(m, raw)
    print(f"{name:12s} players={m.game.n:2d} sat={rep.sat_count} "
          f"alpha-PNE={rep.pne_count} exact-PNE={rep.exact_pne_count} ok={rep.ok}")
