"""Compile a small circuit into a congestion game and list its equilibria.

Every approximate equilibrium of the compiled game is the circuit evaluated
on some input, so the number of equilibria is 2**inputs.
"""

from fractions import Fraction

from apne import circuit as circ
from apne.circuit_game import compile_circuit, extend_to_pne, select_params
from apne.oracle import enumerate_pne

raw = circ.parse("""
INPUT a
INPUT b
NAND g a b
OUTPUT g
""")
c = circ.canonicalize(circ.make_valid(raw))
print(circ.serialize(c))

params = select_params(2, Fraction(3, 2))
print(f"mu={params.mu} lambda={params.lam} alpha_max={float(params.alpha_max):.4f}")
cg = compile_circuit(c, params)
print("players:", [p.id for p in cg.game.players])

pne = enumerate_pne(cg.game, params.alpha).pne_profiles
for x in circ.assignments(len(c.inputs)):
    prof = extend_to_pne(cg, x)
    print(x, "->", prof, "output", circ.evaluate(c, x), "equilibrium", prof in pne)
