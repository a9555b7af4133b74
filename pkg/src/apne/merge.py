"""Splicing a circuit game onto a game without approximate equilibria.

The core game is first normalized (monomial costs, positive weights, no empty
strategies), then shrunk by a factor ``gamma`` so that its players are too
light to disturb the circuit. The output player's one strategy covers every
core resource, and each core player may retreat to a constant-cost dummy
resource. Approximate equilibria of the merged game then correspond one to
one with satisfying assignments of the circuit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import circuit as circ
from .circuit import Circuit
from .circuit_game import CircuitGame, CircuitGameParams, compile_circuit, extend_to_pne, select_params
from .game import Game, Player, Polynomial, Profile, Step
from .oracle import enumerate_pne, nonexistence_threshold

CIRC = "circ/"
CORE = "core/"
DUMMY = "dummy"


# -- normalization ------------------------------------------------------------

@dataclass(frozen=True)
class NormalizedGame:
    game: Game
    d: int
    removed: tuple[str, ...] = ()

    def coefficient(self, e: str) -> Fraction:
        return self.game.resources[e].coeffs[-1]

    def exponent(self, e: str) -> int:
        return len(self.game.resources[e].coeffs) - 1

    @property
    def a_min(self) -> Fraction:
        return min(self.coefficient(e) for e in self.game.resources)

    @property
    def a_sum(self) -> Fraction:
        return sum((self.coefficient(e) for e in self.game.resources), Fraction(0))

    @property
    def W(self) -> Fraction:
        return sum((p.weight for p in self.game.players), Fraction(0))

    @property
    def c_max(self) -> Fraction:
        W = self.W
        return sum((c(W) for c in self.game.resources.values()), Fraction(0))


def _is_monomial(c: Polynomial) -> bool:
    nonzero = [j for j, a in enumerate(c.coeffs) if a]
    return len(nonzero) == 1 and nonzero[0] >= 1 and nonzero[0] == len(c.coeffs) - 1


def normalize(game: Game, d: int) -> NormalizedGame:
    """Monomial-cost copy of a polynomial game with the same player costs.

    Each polynomial is split into one resource per positive coefficient; a
    constant part ``a0`` becomes a private resource ``(a0 / w_i) x`` for each
    player ``i`` using it. Zero costs disappear, and players left with an
    empty strategy are removed (their presence cannot create or destroy
    equilibria). Positive weights are already guaranteed by ``Player``.
    """
    split = {}
    resources = {}
    for e, c in game.resources.items():
        if not isinstance(c, Polynomial):
            raise TypeError(f"resource {e!r}: normalize needs polynomial costs")
        if c.degree > d:
            raise ValueError(f"resource {e!r} has degree {c.degree} > {d}")
        if _is_monomial(c):
            split[e] = [e]
            resources[e] = c
            continue
        split[e] = []
        for j, a in enumerate(c.coeffs):
            if a and j >= 1:
                name = f"{e}^{j}"
                split[e].append(name)
                resources[name] = Polynomial.monomial(a, j)
    players, removed = [], []
    for p in game.players:
        strategies = []
        for s in p.strategies:
            new = []
            for e in s:
                new += split[e]
                a0 = game.resources[e].coeffs[0] if game.resources[e].coeffs else 0
                if a0 and e not in resources:
                    name = f"{e}^0@{p.id}"
                    resources[name] = Polynomial.monomial(a0 / p.weight, 1)
                    new.append(name)
            strategies.append(tuple(new))
        if any(not s for s in strategies):
            removed.append(p.id)
        else:
            players.append(Player(p.id, p.weight, tuple(strategies)))
    used = {e for p in players for s in p.strategies for e in s}
    resources = {e: c for e, c in resources.items() if e in used}
    return NormalizedGame(Game(resources, tuple(players), degree_bound=d), d, tuple(removed))


def rescale(ng: NormalizedGame, gamma) -> NormalizedGame:
    """Coefficients times gamma^(d+1-k), weights times gamma: costs scale by gamma^(d+1)."""
    gamma = Fraction(gamma)
    if not 0 < gamma <= 1:
        raise ValueError("gamma must lie in (0, 1]")
    d = ng.d
    resources = {
        e: Polynomial.monomial(gamma ** (d + 1 - ng.exponent(e)) * ng.coefficient(e), ng.exponent(e))
        for e in ng.game.resources
    }
    players = tuple(Player(p.id, gamma * p.weight, p.strategies) for p in ng.game.players)
    return NormalizedGame(Game(resources, players, degree_bound=d), d, ng.removed)


def gamma_bounds(ng: NormalizedGame, alpha_bar, mu) -> tuple[Fraction, Fraction, Fraction]:
    """Right-hand sides of the three strict upper bounds on gamma."""
    alpha_bar, mu, d = Fraction(alpha_bar), Fraction(mu), ng.d
    return (
        1 / ng.W,
        mu / (mu - 1) * Fraction(3, 2) ** d / ng.a_sum,
        ng.a_min / (ng.c_max * alpha_bar ** 2),
    )


def choose_gamma(ng: NormalizedGame, alpha_bar, mu, d=None) -> Fraction:
    if d is not None and d != ng.d:
        raise ValueError("degree does not match the normalized game")
    bounds = gamma_bounds(ng, alpha_bar, mu)
    gamma = min(Fraction(1), min(bounds) / 2)
    if not all(gamma < b for b in bounds):
        gamma = min(bounds) / 2
    assert all(gamma < b for b in bounds)
    return gamma


# -- merged games -------------------------------------------------------------

@dataclass
class MergedGame:
    """A circuit game joined with a core game and a dummy resource.

    Players are ordered circuit players first (same indices as in
    ``cgame.game``), then core players. ``target_output`` is the output bit of
    the compiled circuit at which core players sit on the dummy.
    """

    game: Game
    cgame: CircuitGame
    core_players: tuple[int, ...]
    dummy_strategy: tuple[int, ...]
    alpha: Fraction
    alpha_bar: Fraction
    target_output: int
    info: dict = field(default_factory=dict)

    @property
    def params(self) -> CircuitGameParams:
        return self.cgame.params

    def expected_profiles(self) -> list[Profile]:
        c = self.cgame.circuit
        out = []
        for x in circ.assignments(len(c.inputs)):
            if circ.evaluate(c, x) == self.target_output:
                base = extend_to_pne(self.cgame, x)
                out.append(base + self.dummy_strategy)
        return sorted(out)


def _namespaced(cg: CircuitGame):
    g = cg.game
    resources = {CIRC + e: c for e, c in g.resources.items()}
    players = [
        Player(CIRC + p.id, p.weight, tuple(tuple(CIRC + e for e in s) for s in p.strategies))
        for p in g.players
    ]
    return resources, players


def merge_meta(construction, alpha, alpha_bar, d, params_alpha, circuit_players,
               target_output, dummy_strategy) -> dict:
    """Provenance stored in the game file so the merge can be re-verified later."""
    fmt = lambda x: f"{Fraction(x).numerator}/{Fraction(x).denominator}"  # noqa: E731
    return {
        "construction": construction,
        "alpha": fmt(alpha),
        "alpha_bar": fmt(alpha_bar),
        "d": d,
        "params_alpha": fmt(params_alpha),
        "circuit_players": circuit_players,
        "target_output": target_output,
        "dummy_strategy": list(dummy_strategy),
    }


def restore(game: Game, raw: Circuit) -> MergedGame:
    """Rebuild the bookkeeping of a merged game read back from disk."""
    meta = game.meta
    try:
        construction = meta["construction"]
        d = int(meta["d"])
        params = select_params(d, Fraction(meta["params_alpha"]))
    except KeyError as exc:
        raise ValueError(f"game file lacks merge metadata {exc}") from None
    if construction == "merge":
        c = prepare(raw)
    elif construction == "merge-general":
        c = circ.canonicalize(circ.negate_output(prepare(raw)))
    else:
        raise ValueError(f"unknown construction {construction!r}")
    cg = compile_circuit(c, params)
    k = int(meta["circuit_players"])
    ids = [p.id for p in game.players[:k]]
    if ids != [CIRC + p.id for p in cg.game.players]:
        raise ValueError("circuit does not match the circuit part of the merged game")
    return MergedGame(game, cg, tuple(range(k, game.n)), tuple(meta["dummy_strategy"]),
                      Fraction(meta["alpha"]), Fraction(meta["alpha_bar"]),
                      int(meta["target_output"]), {"construction": construction})


def prepare(raw: Circuit) -> Circuit:
    """Canonical valid form of a raw circuit; assignments are bit-flipped."""
    return circ.canonicalize(circ.make_valid(raw))


def merge(raw: Circuit, d: int, alpha, core: Game, *, threshold=None, budget=None,
          workers: int = 1) -> MergedGame:
    """Join ``core`` (a game with no alpha-PNE) to the circuit game of ``raw``.

    ``threshold`` is the nonexistence threshold of ``core``; the oracle
    computes it when omitted. The internal factor ``alpha_bar`` sits halfway
    between ``alpha`` and ``min(threshold, d)``.
    """
    alpha = Fraction(alpha)
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    if not alpha < d:
        raise ValueError(f"need alpha < d (got alpha={alpha}, d={d})")
    if threshold is None:
        threshold = nonexistence_threshold(core, budget=budget, workers=workers)
    if not threshold > alpha:
        raise ValueError(f"core game has an alpha-PNE (threshold {threshold} <= {alpha})")
    top = Fraction(d) if threshold > d else Fraction(threshold)
    alpha_bar = alpha + (top - alpha) / 2
    params = select_params(d, alpha_bar)
    cg = compile_circuit(prepare(raw), params)

    ng = normalize(core, d)
    if ng.removed:
        # Dropping players never creates equilibria, but the oracle check was
        # done on the original game; redo it on the normalized one.
        if not nonexistence_threshold(ng.game, budget=budget, workers=workers) > alpha_bar:
            raise ValueError("normalized core game has an alpha_bar-PNE")
    gamma = choose_gamma(ng, alpha_bar, params.mu)
    scaled = rescale(ng, gamma)
    dummy_cost = scaled.a_min / alpha_bar

    resources, players = _namespaced(cg)
    core_res = [CORE + e for e in scaled.game.resources]
    resources.update({CORE + e: c for e, c in scaled.game.resources.items()})
    resources[DUMMY] = Polynomial((dummy_cost,))
    out = cg.output_player
    zero, one = players[out].strategies
    players[out] = Player(players[out].id, 1, (zero, one + tuple(core_res)))
    first = len(players)
    dummy_idx = []
    for p in scaled.game.players:
        strategies = tuple(tuple(CORE + e for e in s) for s in p.strategies) + ((DUMMY,),)
        players.append(Player(CORE + p.id, p.weight, strategies))
        dummy_idx.append(len(strategies) - 1)
    meta = merge_meta("merge", alpha, alpha_bar, d, alpha_bar, first, 1, dummy_idx)
    game = Game(resources, tuple(players), degree_bound=d, meta=meta)
    info = {"gamma": gamma, "threshold": threshold, "dummy_cost": dummy_cost,
            "removed": ng.removed}
    return MergedGame(game, cg, tuple(range(first, len(players))), tuple(dummy_idx),
                      alpha, alpha_bar, 1, info)


@dataclass
class ParsimonyReport:
    sat_count: int
    pne_count: int
    exact_pne_count: int
    matches_expected: bool
    gap_holds: bool
    projection_matches: bool  # circuit part of the PNE set is exactly the sat extensions

    @property
    def ok(self) -> bool:
        return (self.matches_expected and self.gap_holds
                and self.pne_count == self.sat_count)

    @property
    def decides_sat(self) -> bool:
        return (self.pne_count > 0) == (self.sat_count > 0)


def verify_parsimony(merged: MergedGame, raw: Circuit | None = None, alpha=None, *,
                     budget=None, workers: int = 1) -> ParsimonyReport:
    """Compare the merged game's alpha-PNE with the circuit's satisfying assignments."""
    alpha = merged.alpha if alpha is None else Fraction(alpha)
    approx = enumerate_pne(merged.game, alpha, budget=budget, workers=workers).pne_profiles
    exact = enumerate_pne(merged.game, 1, budget=budget, workers=workers).pne_profiles
    expected = merged.expected_profiles()
    if raw is not None:
        sat = len(circ.satisfying_assignments(raw))
    else:
        sat = len(expected)
    k = len(merged.cgame.game.players)
    projected = sorted({p[:k] for p in approx})
    return ParsimonyReport(sat, len(approx), len(exact), sorted(approx) == expected,
                           sorted(approx) == sorted(exact),
                           projected == sorted({p[:k] for p in expected}))
