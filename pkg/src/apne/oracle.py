"""Brute-force equilibrium oracle over the full profile space.

Everything here is exhaustive and exact. The profile space is split by the
strategies of the leading players so that chunks can run in worker
processes; chunk results are merged back in lexicographic order, which keeps
reports identical for any worker count.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .game import UNBOUNDED, Game, Move, Profile, find_improving_move, improvement_factor

DEFAULT_BUDGET = 2 ** 24


class BudgetExceeded(RuntimeError):
    pass


def default_budget() -> int:
    return int(os.environ.get("APNE_BUDGET", DEFAULT_BUDGET))


class _Compiled:
    """Integer-indexed copy of a game with memoized resource costs."""

    def __init__(self, game: Game):
        ids = list(game.resources)
        index = {e: j for j, e in enumerate(ids)}
        self.costs = [game.resources[e] for e in ids]
        self.memo = [{} for _ in ids]
        self.weights = [p.weight for p in game.players]
        self.strategies = [[tuple(index[e] for e in s) for s in p.strategies] for p in game.players]
        self.sets = [[frozenset(s) for s in ss] for ss in self.strategies]
        self.zero = Fraction(0)
        self.nres = len(ids)

    def cost(self, j, x):
        memo = self.memo[j]
        v = memo.get(x)
        if v is None:
            v = memo[x] = self.costs[j](x)
        return v

    def loads(self, profile):
        x = [self.zero] * self.nres
        for w, ss, s in zip(self.weights, self.strategies, profile):
            for j in ss[s]:
                x[j] += w
        return x

    def options(self, profile, x, i):
        """(current cost, [(strategy index, deviation cost), ...]) for player i."""
        ss = self.strategies[i]
        cur = profile[i]
        here = sum((self.cost(j, x[j]) for j in ss[cur]), self.zero)
        inside = self.sets[i][cur]
        w = self.weights[i]
        alts = []
        for t, s in enumerate(ss):
            if t != cur:
                alts.append((t, sum((self.cost(j, x[j] if j in inside else x[j] + w) for j in s), self.zero)))
        return here, alts

    def violates(self, profile, alpha):
        x = self.loads(profile)
        for i in range(len(self.weights)):
            here, alts = self.options(profile, x, i)
            if here == 0:
                continue
            for t, there in alts:
                if here > alpha * there:
                    return Move(i, t, improvement_factor(here, there))
        return None

    def max_factor(self, profile, cutoff):
        """Largest improvement factor at profile; stops early once above cutoff."""
        x = self.loads(profile)
        best = Fraction(1)
        for i in range(len(self.weights)):
            here, alts = self.options(profile, x, i)
            if here == 0:
                continue
            for _, there in alts:
                f = improvement_factor(here, there)
                if f > best:
                    best = f
                    if best > cutoff:
                        return best
        return best


def _chunks(shape, workers):
    # Enough leading-player prefixes to keep every worker busy.
    depth = 0
    while depth < len(shape) and math.prod(shape[:depth]) < 4 * workers:
        depth += 1
    return depth, list(itertools.product(*(range(k) for k in shape[:depth])))


def _scan_pne(game, alpha, depth, prefix, witnesses):
    comp = _Compiled(game)
    found, wit = [], {}
    for rest in itertools.product(*(range(k) for k in game.shape()[depth:])):
        profile = prefix + rest
        move = comp.violates(profile, alpha)
        if move is None:
            found.append(profile)
        elif witnesses:
            wit[profile] = move
    return found, wit


def _scan_threshold(game, depth, prefix):
    comp = _Compiled(game)
    best, arg = UNBOUNDED, None
    for rest in itertools.product(*(range(k) for k in game.shape()[depth:])):
        profile = prefix + rest
        f = comp.max_factor(profile, best)
        if f < best:
            best, arg = f, profile
    return best, arg


def _run(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*tasks)))


def _check_budget(game: Game, budget):
    budget = default_budget() if budget is None else budget
    count = game.profile_count()
    if count > budget:
        raise BudgetExceeded(f"{count} profiles exceed the budget of {budget}")


@dataclass
class OracleReport:
    alpha: Fraction
    pne_profiles: list[Profile]
    threshold: Fraction | float | None = None
    witnesses: dict[Profile, Move] | None = field(default=None, repr=False)

    @property
    def count(self) -> int:
        return len(self.pne_profiles)


def enumerate_pne(game: Game, alpha, *, budget: int | None = None, workers: int = 1,
                  witnesses: bool = False) -> OracleReport:
    """All alpha-PNE of ``game`` in lexicographic profile order."""
    alpha = Fraction(alpha)
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    _check_budget(game, budget)
    depth, prefixes = _chunks(game.shape(), workers)
    parts = _run(_scan_pne, [(game, alpha, depth, p, witnesses) for p in prefixes], workers)
    found = [p for part, _ in parts for p in part]
    wit = {k: v for _, w in parts for k, v in w.items()} if witnesses else None
    return OracleReport(alpha, found, witnesses=wit)


def threshold_with_profile(game: Game, *, budget: int | None = None, workers: int = 1):
    _check_budget(game, budget)
    depth, prefixes = _chunks(game.shape(), workers)
    parts = _run(_scan_threshold, [(game, depth, p) for p in prefixes], workers)
    best, arg = UNBOUNDED, None
    for value, profile in parts:
        if profile is not None and value < best:
            best, arg = value, profile
    return best, arg


def nonexistence_threshold(game: Game, *, budget: int | None = None, workers: int = 1):
    """min over profiles of the largest improvement factor available there.

    An alpha-PNE exists iff alpha >= this value. The result is a Fraction
    (at least 1) or ``UNBOUNDED`` when every profile admits a move to zero cost.
    """
    return threshold_with_profile(game, budget=budget, workers=workers)[0]


@dataclass(frozen=True)
class TraceStep:
    profile: Profile
    player: int
    strategy: int
    factor: Fraction | float


@dataclass
class DynamicsTrace:
    steps: list[TraceStep]
    terminal: Profile
    converged: bool


def improving_dynamics(game: Game, start: Profile, alpha, max_steps: int = 10_000) -> DynamicsTrace:
    """Follow first-found alpha-improving moves until none is left or the step limit."""
    alpha = Fraction(alpha)
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    profile = game.check_profile(start)
    steps = []
    while True:
        move = find_improving_move(game, profile, alpha)
        if move is None:
            return DynamicsTrace(steps, profile, True)
        if len(steps) >= max_steps:
            return DynamicsTrace(steps, profile, False)
        steps.append(TraceStep(profile, move.player, move.strategy, move.factor))
        profile = profile[:move.player] + (move.strategy,) + profile[move.player + 1:]
