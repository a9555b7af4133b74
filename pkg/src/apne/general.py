"""General (step) cost functions: the social-cost potential bound, the
``n``-player gadget with nonexistence threshold ``Phi_{n-1}``, and its merge
with a circuit game.

``Phi_m`` is the positive root of ``(x+1)**m == x**(m+1)``. It is irrational,
so every construction uses a rational lower bound ``xi_bar`` in its place.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import circuit as circ
from .circuit import Circuit
from .circuit_game import compile_circuit, select_params
from .game import (Game, Player, Profile, Step, player_cost,
                   social_cost)
from .interval import three_pow_half
from .merge import CORE, DUMMY, MergedGame, _namespaced, merge_meta

DEFAULT_TOL = Fraction(1, 10 ** 9)


@dataclass(frozen=True)
class PhiApprox:
    m: int
    lower: Fraction
    upper: Fraction

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper


def _phi_sign(m: int, x: Fraction) -> int:
    """Sign of (x+1)^m - x^(m+1), in integers."""
    p, q = x.numerator, x.denominator
    diff = (p + q) ** m * q - p ** (m + 1)
    return (diff > 0) - (diff < 0)


def phi(m: int, tol=DEFAULT_TOL) -> PhiApprox:
    """Bisection enclosure of Phi_m on [1, m+2], with exact sign checks."""
    if m < 1:
        raise ValueError("m must be at least 1")
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    lo, hi = Fraction(1), Fraction(m + 2)
    assert _phi_sign(m, lo) > 0 > _phi_sign(m, hi)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s = _phi_sign(m, mid)
        if s == 0:
            return PhiApprox(m, mid, mid)
        if s > 0:
            lo = mid
        else:
            hi = mid
    return PhiApprox(m, lo, hi)


def frontier_general(n_max: int, tol=DEFAULT_TOL) -> list[tuple[int, PhiApprox]]:
    """(n, enclosure of Phi_{n-1}) for n = 2..n_max."""
    return [(n, phi(n - 1, tol)) for n in range(2, n_max + 1)]


# -- potential bound ----------------------------------------------------------

@dataclass(frozen=True)
class PotentialReport:
    delta_social: Fraction   # C(s') - C(s)
    bound: Fraction          # n C_i(s') - C_i(s)
    others_ok: bool          # C_j(s') - C_j(s) <= C_i(s') for every j != i

    @property
    def slack(self) -> Fraction:
        return self.bound - self.delta_social

    @property
    def holds(self) -> bool:
        return self.slack >= 0 and self.others_ok


def potential_certificate(game: Game, profile: Profile, i: int, new: int) -> PotentialReport:
    profile = game.check_profile(profile)
    moved = profile[:i] + (new,) + profile[i + 1:]
    after_i = player_cost(game, moved, i)
    others_ok = all(
        player_cost(game, moved, j) - player_cost(game, profile, j) <= after_i
        for j in range(game.n) if j != i
    )
    return PotentialReport(
        social_cost(game, moved) - social_cost(game, profile),
        game.n * after_i - player_cost(game, profile, i),
        others_ok,
    )


def random_step_game(rng: random.Random, max_players=4, max_resources=4) -> Game:
    """Small random game with nondecreasing step costs and rational weights."""
    nres = rng.randint(1, max_resources)
    names = [f"e{j}" for j in range(nres)]
    resources = {}
    for e in names:
        points, t, v = [], Fraction(0), Fraction(0)
        for _ in range(rng.randint(1, 3)):
            t += Fraction(rng.randint(1, 8), 4)
            v += Fraction(rng.randint(0, 6), rng.randint(1, 3))
            points.append((t, v))
        resources[e] = Step(tuple(points))
    players = []
    for i in range(rng.randint(1, max_players)):
        strategies = set()
        for _ in range(rng.randint(1, 3)):
            strategies.add(tuple(sorted(rng.sample(names, rng.randint(1, nres)))))
        players.append(Player(f"p{i}", Fraction(rng.randint(1, 8), 4), tuple(sorted(strategies))))
    return Game(resources, tuple(players))


# -- the n-player gadget --------------------------------------------------------

@dataclass(frozen=True)
class GeneralGadget:
    game: Game
    n: int
    xi_bar: Fraction
    phi: PhiApprox

    @property
    def weights(self) -> list[Fraction]:
        return [p.weight for p in self.game.players]

    def case_ratios(self) -> tuple[Fraction, Fraction]:
        """Improvement factors of the two profile classes: (1+1/xi)^m and xi."""
        xi = self.xi_bar
        return (1 + 1 / xi) ** (self.n - 1), xi


def build_general_gadget(n: int, tol=DEFAULT_TOL) -> GeneralGadget:
    """Players 0..m (m = n-1) of weight 2^-i on resources a0..am, b0..bm."""
    if n < 2:
        raise ValueError("need at least two players")
    m = n - 1
    ph = phi(m, tol)
    xi = ph.lower
    w = [Fraction(1, 2 ** i) for i in range(m + 1)]
    costs = {0: Step(((w[0], 1),))}
    for i in range(1, m + 1):
        costs[i] = Step(((w[0] + w[i], (1 / xi) * (1 + 1 / xi) ** (i - 1)),))
    resources = {}
    for i in range(m + 1):
        resources[f"a{i}"] = costs[i]
        resources[f"b{i}"] = costs[i]
    players = [Player("p0", w[0], (
        [f"a{i}" for i in range(m + 1)],
        [f"b{i}" for i in range(m + 1)],
    ))]
    for i in range(1, m + 1):
        players.append(Player(f"p{i}", w[i], (
            [f"a{j}" for j in range(i)] + [f"b{i}"],
            [f"b{j}" for j in range(i)] + [f"a{i}"],
        )))
    gadget = GeneralGadget(Game(resources, tuple(players)), n, xi, ph)
    r1, r2 = gadget.case_ratios()
    if not (r1 >= xi and r2 >= xi):
        raise ArithmeticError("case ratios fall below xi_bar")
    return gadget


# -- merge with a circuit -------------------------------------------------------

def _degree_for(ph: PhiApprox) -> int:
    d = 1
    while not (three_pow_half(d).lo > ph.upper and ph.lower ** 2 < 3 ** d):
        d += 1
    return max(d, 2)


def merge_general(raw: Circuit, n: int, alpha_tilde, tol=DEFAULT_TOL) -> MergedGame:
    """Circuit game of the negated circuit plus the halved ``n``-player gadget.

    The output player's one strategy gains a dummy resource costing
    ``xi_bar**2`` from load 1 on. Equilibria sit at output zero, i.e. at
    satisfying assignments of ``raw`` (bit-flipped by the input buffers).
    """
    alpha = Fraction(alpha_tilde)
    gadget = build_general_gadget(n, tol)
    if not 1 <= alpha < gadget.xi_bar:
        raise ValueError(f"need 1 <= alpha < xi_bar = {float(gadget.xi_bar)}")
    d = _degree_for(gadget.phi)
    params = select_params(d, gadget.phi.upper)
    c = circ.canonicalize(circ.negate_output(circ.canonicalize(circ.make_valid(raw))))
    cg = compile_circuit(c, params)

    resources, players = _namespaced(cg)
    for e, cost in gadget.game.resources.items():
        resources[CORE + e] = Step(tuple((t / 2, v) for t, v in cost.points))
    resources[DUMMY] = Step(((1, gadget.xi_bar ** 2),))
    out = cg.output_player
    zero, one = players[out].strategies
    players[out] = Player(players[out].id, 1, (zero, one + (DUMMY,)))
    first = len(players)
    dummy_idx = []
    for p in gadget.game.players:
        strategies = tuple(tuple(CORE + e for e in s) for s in p.strategies) + ((DUMMY,),)
        players.append(Player(CORE + p.id, p.weight / 2, strategies))
        dummy_idx.append(len(strategies) - 1)
    meta = merge_meta("merge-general", alpha, alpha, d, gadget.phi.upper, first, 0, dummy_idx)
    game = Game(resources, tuple(players), meta=meta)
    info = {"d": d, "xi_bar": gadget.xi_bar, "phi": gadget.phi}
    return MergedGame(game, cg, tuple(range(first, len(players))), tuple(dummy_idx),
                      alpha, alpha, 0, info)
