"""Step-cost games: the social cost bound and the n-player gadget.

Any game with n players has an n-approximate equilibrium, while the gadget
with n players has none below Phi_(n-1).
"""

import random

from apne.general import build_general_gadget, frontier_general, random_step_game
from apne.oracle import enumerate_pne, improving_dynamics, nonexistence_threshold

for n, ph in frontier_general(8):
    print(f"n={n}  Phi_{n - 1} in [{float(ph.lower):.9f}, {float(ph.upper):.9f}]")

for n in range(2, 6):
    gg = build_general_gadget(n)
    print(f"gadget n={n}: threshold {float(nonexistence_threshold(gg.game)):.9f}, "
          f"{enumerate_pne(gg.game, n).count} profiles are {n}-approximate equilibria")

rng = random.Random(1)
moves = converged = 0
for _ in range(50):
    g = random_step_game(rng)
    trace = improving_dynamics(g, (0,) * g.n, 1)
    trace_n = improving_dynamics(g, (0,) * g.n, g.n)
    moves += len(trace.steps)
    converged += trace_n.converged
print(f"50 random games: {moves} exact improving moves from the all-zero start, "
      f"n-improving dynamics converged in {converged}")
