"""Lockable circuit games: a canonical circuit compiled into a congestion game.

Every input bit and every gate gets a player with a *zero* and a *one*
strategy; a static player stands for the constant-one input. Gate ``k`` owns
two resources ``0_k`` and ``1_k`` with costs ``lam * mu**k * x**d`` and
``mu**k * x**d``. For suitable ``(mu, lam)`` the approximate equilibria are
exactly the profiles in which gate players compute the circuit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import circuit as circ
from .circuit import ONE, Circuit
from .game import Game, Player, Polynomial, Profile, format_rational, player_cost
from .interval import three_pow_half

ZERO_STRATEGY = 0
ONE_STRATEGY = 1


@dataclass(frozen=True)
class CircuitGameParams:
    d: int
    alpha: Fraction
    mu: Fraction
    lam: Fraction
    epsilon_mu: Fraction  # upper bound on 3^(d + d/2) / (mu - 1)

    @property
    def spread(self) -> Fraction:
        """The factor 1 + 3^d/(mu - 1) that both locking bounds lose."""
        return 1 + Fraction(3 ** self.d) / (self.mu - 1)

    @property
    def alpha_max(self) -> Fraction:
        """Supremum of the alpha for which (mu, lam) still lock every gate."""
        return min(self.lam / self.spread, Fraction(3 ** self.d) / (self.lam * self.spread))

    def window_holds(self, alpha=None) -> bool:
        alpha = self.alpha if alpha is None else Fraction(alpha)
        return alpha * self.spread < self.lam < Fraction(3 ** self.d) / (alpha * self.spread)


def select_params(d: int, alpha) -> CircuitGameParams:
    """Rational (mu, lam) for which the locking inequalities hold at ``alpha``.

    ``lam`` is the lower enclosure of 3^(d/2), the geometric centre of the
    admissible window, and ``mu`` the smallest integer above both
    ``1 + 2*3^(d + d/2)`` and ``1 + 3^(d + d/2)/min(eps, 1)``.
    """
    alpha = Fraction(alpha)
    if d < 1:
        raise ValueError("degree must be at least 1")
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    root = three_pow_half(d)
    if alpha >= root.lo:
        raise ValueError(f"alpha={alpha} is not below 3^(d/2) for d={d}")
    eps = (root.lo - alpha) / 2
    upper = 3 ** d * root.hi
    bound = max(1 + 2 * upper, 1 + upper / min(eps, 1))
    mu = Fraction(int(bound) + 1)
    params = CircuitGameParams(d, alpha, mu, root.lo, upper / (mu - 1))
    if not params.window_holds():
        raise ArithmeticError("locking window is empty; this should not happen")
    return params


@dataclass(frozen=True)
class CircuitGame:
    game: Game
    circuit: Circuit
    params: CircuitGameParams
    input_players: tuple[int, ...]
    static_player: int
    gate_players: tuple[int, ...]  # gate_players[k-1] is G_k

    def player_of(self, node: str) -> int:
        if node == ONE:
            return self.static_player
        if node in self.circuit.inputs:
            return self.input_players[self.circuit.inputs.index(node)]
        return self.gate_players[circ.gate_index(node) - 1]

    @property
    def output_player(self) -> int:
        return self.gate_players[0]

    def bit(self, profile: Profile, node: str) -> int:
        return 1 if node == ONE else profile[self.player_of(node)]

    def input_bits(self, profile: Profile) -> tuple[int, ...]:
        return tuple(profile[i] for i in self.input_players)


def _successor_indices(c: Circuit):
    succ = c.successors()
    return {v: sorted(circ.gate_index(g) for g in gs) for v, gs in succ.items()}


def compile_circuit(c: Circuit, params: CircuitGameParams) -> CircuitGame:
    if not circ.is_canonical(c):
        raise ValueError("compile needs a circuit in canonical form")
    d, mu, lam = params.d, params.mu, params.lam
    K = len(c.gates)
    resources = {}
    for k in range(1, K + 1):
        resources[f"0_{k}"] = Polynomial.monomial(lam * mu ** k, d)
        resources[f"1_{k}"] = Polynomial.monomial(mu ** k, d)
    succ = _successor_indices(c)
    players = []
    for i, x in enumerate(c.inputs, 1):
        players.append(Player(f"X{i}", 1, (
            [f"0_{k}" for k in succ[x]],
            [f"1_{k}" for k in succ[x]],
        )))
    players.append(Player("P", 1, ([f"1_{k}" for k in succ[ONE]],)))
    for k in range(1, K + 1):
        own = succ[f"g{k}"]
        players.append(Player(f"G{k}", 1, (
            [f"0_{k}"] + [f"0_{j}" for j in own],
            [f"1_{k}"] + [f"1_{j}" for j in own],
        )))
    n = len(c.inputs)
    game = Game(resources, tuple(players), degree_bound=d)
    return CircuitGame(game, c, params, tuple(range(n)), n, tuple(range(n + 1, n + 1 + K)))


def follows_nand(cg: CircuitGame, profile: Profile) -> bool:
    profile = cg.game.check_profile(profile)
    for k, g in enumerate(cg.circuit.gates, 1):
        a, b = (cg.bit(profile, s) for s in g.inputs)
        if profile[cg.gate_players[k - 1]] != 1 - (a & b):
            return False
    return True


def extend_to_pne(cg: CircuitGame, assignment) -> Profile:
    """The profile in which the gates compute the circuit on ``assignment``."""
    val = circ.values(cg.circuit, assignment)
    profile = [0] * cg.game.n
    for i, x in zip(cg.input_players, cg.circuit.inputs):
        profile[i] = val[x]
    for k, p in enumerate(cg.gate_players, 1):
        profile[p] = val[f"g{k}"]
    return tuple(profile)


# -- decision problems -------------------------------------------------------

@dataclass(frozen=True)
class Query:
    """Property of a profile; the question is whether some alpha-PNE has it."""

    kind: str  # "subset", "resource" or "cost"
    player: int | None = None
    strategy: int | None = None
    resource: str | None = None
    bound: Fraction | None = None

    def holds(self, game: Game, profile: Profile) -> bool:
        if self.kind == "subset":
            return profile[self.player] == self.strategy
        if self.kind == "resource":
            return any(self.resource in p.strategies[s] for p, s in zip(game.players, profile))
        if self.kind == "cost":
            return player_cost(game, profile, self.player) <= self.bound
        raise ValueError(f"unknown query kind {self.kind!r}")

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.player is not None:
            out["player"] = self.player
        if self.strategy is not None:
            out["strategy"] = self.strategy
        if self.resource is not None:
            out["resource"] = self.resource
        if self.bound is not None:
            out["bound"] = format_rational(self.bound)
        return out

    @classmethod
    def from_json(cls, obj) -> Query:
        bound = obj.get("bound")
        return cls(obj["kind"], obj.get("player"), obj.get("strategy"), obj.get("resource"),
                   Fraction(bound) if bound is not None else None)


@dataclass
class DecisionInstance:
    cgame: CircuitGame
    game: Game
    query: Query
    expected: bool
    scale: Fraction = Fraction(1)
    notes: dict = field(default_factory=dict)

    def descriptor(self) -> str:
        return json.dumps({"query": self.query.to_json(), "expected": self.expected,
                           "scale": format_rational(self.scale)}, indent=1) + "\n"


KINDS = ("subset", "resource", "cost")


def thm2_instance(kind: str, raw: Circuit, d: int, alpha, z=None) -> DecisionInstance:
    """Game plus query whose answer is the satisfiability of ``raw``.

    ``subset`` asks for the output player on its one strategy, ``resource``
    for use of a zero-cost resource added to that strategy, and ``cost`` for
    an output player cost of at most ``z`` on the negated circuit.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    params = select_params(d, alpha)
    expected = circ.is_satisfiable(raw)
    if kind == "cost":
        c = circ.canonicalize(circ.make_valid(circ.negate_output(raw)))
    else:
        c = circ.canonicalize(circ.make_valid(raw))
    cg = compile_circuit(c, params)
    out = cg.output_player
    if kind == "subset":
        return DecisionInstance(cg, cg.game, Query("subset", out, ONE_STRATEGY), expected)
    if kind == "resource":
        g = cg.game
        players = list(g.players)
        p = players[out]
        strategies = list(p.strategies)
        strategies[ONE_STRATEGY] = strategies[ONE_STRATEGY] + ("r",)
        players[out] = Player(p.id, p.weight, tuple(strategies))
        resources = dict(g.resources, r=Polynomial(()))
        game = Game(resources, tuple(players), degree_bound=d)
        return DecisionInstance(cg, game, Query("resource", resource="r"), expected)
    low = params.lam * params.mu
    high = 2 ** d * params.mu
    if z is None:
        scale, bound = Fraction(1), (low + high) / 2
    else:
        bound = Fraction(z)
        if bound <= 0:
            raise ValueError("z must be positive")
        scale = 2 * bound / (low + high)
    if not scale * low < bound < scale * high:
        raise ArithmeticError("cost bound outside the scaled window")
    g = cg.game
    game = Game({e: c.scaled(scale) for e, c in g.resources.items()}, g.players, degree_bound=d)
    inst = DecisionInstance(cg, game, Query("cost", out, bound=bound), expected, scale)
    inst.notes.update(yes_cost=scale * low, no_cost=scale * high)
    return inst


def decide(inst: DecisionInstance, pne_profiles) -> bool:
    return any(inst.query.holds(inst.game, p) for p in pne_profiles)
