"""Weighted atomic congestion games with exact rational costs.

A strategy profile is a plain tuple holding one strategy index per player.
Players are addressed by their position in ``Game.players``; the string
``Player.id`` only matters for provenance and serialization.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Profile = tuple[int, ...]
Strategy = tuple[str, ...]

# Improvement factor of a deviation from positive cost to zero cost.
UNBOUNDED = math.inf


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"`` (or an integer string) exactly."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    text = str(text).strip()
    if not text or any(c in text for c in ".eE"):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Polynomial:
    """Nonnegative polynomial; ``coeffs[j]`` multiplies ``x**j``."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if any(c < 0 for c in coeffs):
            raise ValueError("polynomial coefficients must be nonnegative")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def monomial(cls, coefficient, degree: int) -> Polynomial:
        return cls((0,) * degree + (coefficient,))

    @property
    def degree(self) -> int:
        nonzero = [j for j, c in enumerate(self.coeffs) if c]
        return nonzero[-1] if nonzero else 0

    def __call__(self, x: Fraction) -> Fraction:
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = total * x + c
        return total

    def scaled(self, factor) -> Polynomial:
        return Polynomial(tuple(c * factor for c in self.coeffs))


@dataclass(frozen=True)
class Step:
    """Right-continuous step function: ``points[j][1]`` applies for ``x >= points[j][0]``.

    Below the first threshold the cost is zero.
    """

    points: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        points = tuple((Fraction(t), Fraction(v)) for t, v in self.points)
        thresholds = [t for t, _ in points]
        values = [v for _, v in points]
        if any(a >= b for a, b in zip(thresholds, thresholds[1:])):
            raise ValueError("step thresholds must be strictly increasing")
        if any(v < 0 for v in values) or any(a > b for a, b in zip(values, values[1:])):
            raise ValueError("step values must be nonnegative and nondecreasing")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "_thresholds", tuple(thresholds))

    def __call__(self, x: Fraction) -> Fraction:
        j = bisect.bisect_right(self._thresholds, x)
        return self.points[j - 1][1] if j else Fraction(0)

    def scaled(self, factor) -> Step:
        return Step(tuple((t, v * factor) for t, v in self.points))


CostFunction = Union[Polynomial, Step]


def strategy(resources: Iterable[str]) -> Strategy:
    return tuple(sorted(set(resources)))


@dataclass(frozen=True)
class Player:
    id: str
    weight: Fraction
    strategies: tuple[Strategy, ...]

    def __post_init__(self):
        weight = Fraction(self.weight)
        if weight <= 0:
            raise ValueError(f"player {self.id!r}: weight must be positive")
        if not self.strategies:
            raise ValueError(f"player {self.id!r}: needs at least one strategy")
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "strategies", tuple(strategy(s) for s in self.strategies))


@dataclass(frozen=True)
class Game:
    resources: Mapping[str, CostFunction]
    players: tuple[Player, ...]
    degree_bound: int | None = None
    meta: Mapping[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        object.__setattr__(self, "resources", dict(self.resources))
        for p in self.players:
            for s in p.strategies:
                missing = [e for e in s if e not in self.resources]
                if missing:
                    raise ValueError(f"player {p.id!r} uses unknown resources {missing}")
        if self.degree_bound is not None:
            for e, c in self.resources.items():
                if isinstance(c, Polynomial) and len(c.coeffs) > self.degree_bound + 1:
                    raise ValueError(f"resource {e!r} exceeds degree bound {self.degree_bound}")

    @property
    def n(self) -> int:
        return len(self.players)

    def shape(self) -> tuple[int, ...]:
        return tuple(len(p.strategies) for p in self.players)

    def profile_count(self) -> int:
        return math.prod(self.shape())

    def check_profile(self, profile: Sequence[int]) -> Profile:
        profile = tuple(profile)
        if len(profile) != self.n or any(
            not 0 <= s < k for s, k in zip(profile, self.shape())
        ):
            raise ValueError(f"invalid profile {profile} for shape {self.shape()}")
        return profile

    def loads(self, profile: Profile) -> dict[str, Fraction]:
        x = dict.fromkeys(self.resources, Fraction(0))
        for p, s in zip(self.players, profile):
            for e in p.strategies[s]:
                x[e] += p.weight
        return x


def load(game: Game, profile: Profile, e: str) -> Fraction:
    if e not in game.resources:
        raise KeyError(f"unknown resource {e!r}")
    profile = game.check_profile(profile)
    return sum(
        (p.weight for p, s in zip(game.players, profile) if e in p.strategies[s]),
        Fraction(0),
    )


def player_cost(game: Game, profile: Profile, i: int) -> Fraction:
    profile = game.check_profile(profile)
    x = game.loads(profile)
    return sum((game.resources[e](x[e]) for e in game.players[i].strategies[profile[i]]), Fraction(0))


def deviation_cost(game: Game, profile: Profile, i: int, new: int,
                   loads: Mapping[str, Fraction] | None = None) -> Fraction:
    """Cost of player ``i`` after unilaterally switching to strategy ``new``."""
    x = game.loads(profile) if loads is None else loads
    p = game.players[i]
    current = set(p.strategies[profile[i]])
    total = Fraction(0)
    for e in p.strategies[new]:
        total += game.resources[e](x[e] if e in current else x[e] + p.weight)
    return total


def social_cost(game: Game, profile: Profile) -> Fraction:
    profile = game.check_profile(profile)
    x = game.loads(profile)
    return sum(
        (game.resources[e](x[e]) for p, s in zip(game.players, profile) for e in p.strategies[s]),
        Fraction(0),
    )


def improvement_factor(current: Fraction, alternative: Fraction):
    """C_i(s) / C_i(s'), with UNBOUNDED for a move from positive cost to zero."""
    if alternative == 0:
        return UNBOUNDED if current > 0 else Fraction(1)
    return current / alternative


@dataclass(frozen=True)
class Move:
    player: int
    strategy: int
    factor: Fraction | float


def find_improving_move(game: Game, profile: Profile, alpha) -> Move | None:
    """First alpha-improving move (ascending player, then strategy index), if any."""
    alpha = Fraction(alpha)
    profile = game.check_profile(profile)
    x = game.loads(profile)
    for i, p in enumerate(game.players):
        here = sum((game.resources[e](x[e]) for e in p.strategies[profile[i]]), Fraction(0))
        if here == 0:
            continue
        for t in range(len(p.strategies)):
            if t == profile[i]:
                continue
            there = deviation_cost(game, profile, i, t, x)
            if here > alpha * there:
                return Move(i, t, improvement_factor(here, there))
    return None


def is_alpha_pne(game: Game, profile: Profile, alpha) -> bool:
    if Fraction(alpha) < 1:
        raise ValueError("alpha must be at least 1")
    return find_improving_move(game, profile, alpha) is None


def is_alpha_dominating(game: Game, profile: Profile, i: int, alpha) -> bool:
    """Whether player i's current strategy beats every alternative by more than alpha."""
    alpha = Fraction(alpha)
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    profile = game.check_profile(profile)
    x = game.loads(profile)
    here = sum((game.resources[e](x[e]) for e in game.players[i].strategies[profile[i]]), Fraction(0))
    return all(
        deviation_cost(game, profile, i, t, x) > alpha * here
        for t in range(len(game.players[i].strategies))
        if t != profile[i]
    )


# -- serialization -----------------------------------------------------------

def cost_to_json(c: CostFunction) -> dict:
    if isinstance(c, Polynomial):
        return {"kind": "poly", "coeffs": [format_rational(a) for a in c.coeffs]}
    return {"kind": "step", "points": [[format_rational(t), format_rational(v)] for t, v in c.points]}


def cost_from_json(obj: Mapping) -> CostFunction:
    kind = obj.get("kind")
    if kind == "poly":
        return Polynomial(tuple(parse_rational(a) for a in obj["coeffs"]))
    if kind == "step":
        return Step(tuple((parse_rational(t), parse_rational(v)) for t, v in obj["points"]))
    raise ValueError(f"unknown cost function kind {kind!r}")


def game_to_json(game: Game) -> dict:
    out = {
        "resources": {e: cost_to_json(c) for e, c in game.resources.items()},
        "players": [
            {"id": p.id, "weight": format_rational(p.weight), "strategies": [list(s) for s in p.strategies]}
            for p in game.players
        ],
    }
    if game.degree_bound is not None:
        out["degree_bound"] = game.degree_bound
    if game.meta:
        out["meta"] = dict(game.meta)
    return out


def game_from_json(obj: Mapping) -> Game:
    return Game(
        resources={e: cost_from_json(c) for e, c in obj["resources"].items()},
        players=tuple(
            Player(p["id"], parse_rational(p["weight"]), tuple(tuple(s) for s in p["strategies"]))
            for p in obj["players"]
        ),
        degree_bound=obj.get("degree_bound"),
        meta=obj.get("meta", {}),
    )


def serialize(game: Game) -> str:
    return json.dumps(game_to_json(game), indent=1, ensure_ascii=False) + "\n"


def deserialize(text: str) -> Game:
    return game_from_json(json.loads(text))


def save(game: Game, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(game))


def read(path) -> Game:
    with open(path, encoding="utf-8") as fh:
        return deserialize(fh.read())
