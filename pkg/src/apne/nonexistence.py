"""The two-sided polynomial gadget without approximate equilibria.

One heavy player (weight 1) and ``n`` light players (weight ``w``) share
resources ``a0..an`` and ``b0..bn``. ``a0``/``b0`` cost ``x**k`` and the
others cost ``beta * x**d``. Two improvement ratios cover every profile up
to symmetry; the smaller of them is a lower bound on the nonexistence
threshold of the game, and maximizing it over the parameters gives the
degree-``d`` frontier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import interval as iv
from .game import UNBOUNDED, Game, Player, Polynomial
from .interval import Interval


@dataclass(frozen=True)
class GadgetParams:
    d: int
    n: int
    k: int
    w: Fraction
    beta: Fraction

    def __post_init__(self):
        w, beta = Fraction(self.w), Fraction(self.beta)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "beta", beta)
        if self.d < 2:
            raise ValueError("degree must be at least 2")
        if self.n < 1:
            raise ValueError("need at least one light player")
        if not 1 <= self.k <= self.d:
            raise ValueError("k must lie in 1..d")
        if not (0 <= w <= 1 and 0 <= beta <= 1):
            raise ValueError("w and beta must lie in [0, 1]")


def build_gadget(p: GadgetParams) -> Game:
    if p.w == 0:
        raise ValueError("light players need a positive weight to form a game")
    a = [f"a{i}" for i in range(p.n + 1)]
    b = [f"b{i}" for i in range(p.n + 1)]
    c0 = Polynomial.monomial(1, p.k)
    c1 = Polynomial.monomial(p.beta, p.d)
    resources = {e: (c0 if e in ("a0", "b0") else c1) for e in a + b}
    players = [Player("heavy", 1, (tuple(a), tuple(b)))]
    for i in range(1, p.n + 1):
        players.append(Player(f"light{i}", p.w, (("a0", f"b{i}"), ("b0", f"a{i}"))))
    return Game(resources, tuple(players), degree_bound=p.d)


def case_ratios(p: GadgetParams):
    """Exact improvement ratios of the heavy-alone and shared-a0 cases."""
    d, n, k, w, beta = p.d, p.n, p.k, p.w, p.beta
    r1 = (1 + n * beta * (1 + w) ** d) / ((1 + n * w) ** k + n * beta)
    den2 = (n * w) ** k + beta * (1 + w) ** d
    r2 = ((1 + w) ** k + beta * w ** d) / den2 if den2 else UNBOUNDED
    return r1, r2


def case_ratios_enclosure(p: GadgetParams, bits: int = iv.BITS) -> tuple[Interval, Interval]:
    """Same ratios as certified intervals; cheap for very large d."""
    d, n, k = p.d, p.n, p.k
    w, beta = Interval.point(p.w), Interval.point(p.beta)
    lift = (1 + w) ** d
    r1 = (1 + n * beta * lift) / ((1 + n * w) ** k + n * beta)
    r2 = ((1 + w) ** k + beta * w ** d) / ((n * w) ** k + beta * lift)
    return r1, r2


# -- numerical frontier --------------------------------------------------------

def _ridge(d, n, k, w):
    """min(r1, r2) with beta placed where the two ratios cross (clipped to [0, 1]).

    r1 is nondecreasing and r2 nonincreasing in beta, so for fixed (n, k, w)
    the crossing point maximizes the minimum.
    """
    with np.errstate(all="ignore"):
        A = (1 + w) ** d
        B = (1 + n * w) ** k
        P = (n * w) ** k
        Q = (1 + w) ** k
        R = w ** d
        qa = n * (A * A - R)
        qb = A + n * A * P - n * Q - R * B
        qc = P - Q * B
        root = np.sqrt(np.maximum(qb * qb - 4 * qa * qc, 0))
        beta = np.where(qb >= 0, 2 * qc / (-qb - root), (-qb + root) / (2 * qa))
        beta = np.clip(np.nan_to_num(beta, nan=1.0, posinf=1.0, neginf=0.0), 0, 1)
        r1 = (1 + n * beta * A) / (B + n * beta)
        r2 = (Q + beta * R) / (P + beta * A)
        value = np.nan_to_num(np.minimum(r1, r2), nan=0.0, posinf=0.0)
    return value, beta


def n_max_default(d: int) -> int:
    return math.ceil(4 * math.sqrt(d) * d / math.log(d))


@dataclass(frozen=True)
class FrontierPoint:
    d: int
    alpha_lower: Fraction
    argmax: GadgetParams
    evaluations: int

    def __post_init__(self):
        if self.alpha_lower < 1:
            raise ValueError("frontier value below 1")


GOLDEN = (math.sqrt(5) - 1) / 2


def optimize_alpha(d: int, *, n_max: int | None = None, grid: int = 256,
                   iterations: int = 90, candidates: int = 8) -> FrontierPoint:
    """Best certified min(r1, r2) over k in 1..d, n in 1..n_max and (w, beta).

    For each (n, k) the search runs over ``log w`` only: a log-spaced grid
    locates the peak, golden-section refines it, and beta sits on the ridge.
    The few best cells are then snapped to rationals and re-evaluated
    exactly; the returned value is the exact minimum ratio at that point.
    """
    if d < 2:
        raise ValueError("degree must be at least 2")
    n_max = n_max or n_max_default(d)
    n = np.arange(1, n_max + 1, dtype=float)[:, None]
    logw = np.linspace(math.log(1e-6), 0.0, grid)
    w = np.exp(logw)[None, :]
    evaluations = 0
    cells = []
    for k in range(1, d + 1):
        value, _ = _ridge(d, n, k, w)
        evaluations += value.size
        idx = value.argmax(axis=1)
        lo = logw[np.maximum(idx - 1, 0)]
        hi = logw[np.minimum(idx + 1, grid - 1)]
        nn = n[:, 0]
        for _ in range(iterations):
            x1 = hi - GOLDEN * (hi - lo)
            x2 = lo + GOLDEN * (hi - lo)
            f1, _ = _ridge(d, nn, k, np.exp(x1))
            f2, _ = _ridge(d, nn, k, np.exp(x2))
            left = f1 > f2
            hi = np.where(left, x2, hi)
            lo = np.where(left, lo, x1)
        evaluations += 2 * iterations * nn.size
        wbest = np.minimum(np.exp((lo + hi) / 2), 1.0)
        value, beta = _ridge(d, nn, k, wbest)
        for j in np.argsort(value)[::-1][:candidates]:
            cells.append((float(value[j]), int(nn[j]), k, float(wbest[j]), float(beta[j])))
    cells.sort(reverse=True)
    best = None
    for _, nj, k, wj, bj in cells[:candidates]:
        p = GadgetParams(d, nj, k, Fraction(wj), Fraction(bj))
        exact = min(case_ratios(p))
        if best is None or exact > best[0]:
            best = (exact, p)
    return FrontierPoint(d, best[0], best[1], evaluations)


def frontier(d_values) -> list[FrontierPoint]:
    return [optimize_alpha(d) for d in d_values]


# -- asymptotic parameter choice -----------------------------------------------

def _log_terms(d: int):
    lnd = iv.log_of(Fraction(d))
    return lnd, iv.log(lnd)


def k_of(d: int) -> int:
    """ceil(ln d / (2 ln ln d)), certified."""
    lnd, lnlnd = _log_terms(d)
    return iv.certified_ceil(lnd / (2 * lnlnd))


def asymptotic_params(d: int) -> GadgetParams:
    """Rational version of the large-d parameter choice.

    w is the lower end of the enclosure of ln d / (2d); beta and n are then
    derived from that rational w (beta rounded down, n a certified floor).
    """
    if d < 4:
        raise ValueError("the asymptotic parameter choice needs d >= 4")
    lnd, _ = _log_terms(d)
    k = k_of(d)
    w = iv.round_down((lnd / (2 * d)).lo, 64)
    lift = Interval.point(1 + w) ** d
    beta = iv.round_down((1 / (iv.power(Fraction(d), Fraction(k, 2 * (k + 1))) * lift)).lo, 64)
    n = iv.certified_floor(1 / (iv.power(Fraction(d), Fraction(1, 2 * (k + 1))) * w))
    return GadgetParams(d, n, k, w, beta)


def appendix_g(d: int, bits: int = iv.BITS) -> Interval:
    """Enclosure of (1 + d^(-1/(2(k+1))))^k + 2 sqrt(d) / (ln d (1 + ln d/(2d))^d)."""
    if d < 3:
        raise ValueError("g(d) needs ln ln d > 0, i.e. d >= 3")
    lnd, _ = _log_terms(d)
    k = k_of(d)
    first = (1 + iv.power(Fraction(d), Fraction(-1, 2 * (k + 1)), bits)) ** k
    second = 2 * iv.sqrt_of(Fraction(d), bits) / (lnd * (1 + lnd / (2 * d)) ** d)
    return first + second


@dataclass(frozen=True)
class AsymptoticCheck:
    """Certified enclosures of both sides of the large-d bounds."""

    params: GadgetParams
    heavy_gain: Interval        # 1 + n beta (1+w)^d
    heavy_gain_bound: Interval  # 2 sqrt(d) / ln d
    heavy_alt: Interval         # (1+nw)^k + n beta
    g: Interval
    light_gain: Interval        # (1+w)^k + beta w^d
    light_alt: Interval         # (nw)^k + beta (1+w)^d
    light_alt_bound: Interval   # 2 ln d / sqrt(d)
    r1: Interval
    r2: Interval
    target: Interval            # sqrt(d) / (2 ln d)

    def holds(self) -> dict[str, bool]:
        return {
            "heavy_gain": self.heavy_gain.lo >= self.heavy_gain_bound.hi,
            "heavy_alt": self.heavy_alt.hi <= self.g.lo,
            "light_gain": self.light_gain.lo >= 1,
            "light_alt": self.light_alt.hi <= self.light_alt_bound.lo,
            "r1": self.r1.lo >= self.target.hi,
            "r2": self.r2.lo >= self.target.hi,
        }


def asymptotic_check(d: int) -> AsymptoticCheck:
    p = asymptotic_params(d)
    lnd, _ = _log_terms(d)
    rootd = iv.sqrt_of(Fraction(d))
    w, beta, n, k = Interval.point(p.w), Interval.point(p.beta), p.n, p.k
    lift = (1 + w) ** d
    r1, r2 = case_ratios_enclosure(p)
    return AsymptoticCheck(
        params=p,
        heavy_gain=1 + n * beta * lift,
        heavy_gain_bound=2 * rootd / lnd,
        heavy_alt=(1 + n * w) ** k + n * beta,
        g=appendix_g(d),
        light_gain=(1 + w) ** k + beta * w ** d,
        light_alt=(n * w) ** k + beta * lift,
        light_alt_bound=2 * lnd / rootd,
        r1=r1,
        r2=r2,
        target=rootd / (2 * lnd),
    )
