from fractions import Fraction as F

import pytest

from apne import circuit as circ
from apne import game as gm
from apne.game import Game, Player, Polynomial
from apne.merge import (choose_gamma, gamma_bounds, merge, normalize, rescale, restore,
                        verify_parsimony)
from apne.nonexistence import GadgetParams, build_gadget, optimize_alpha

from conftest import SUITE_SAT


@pytest.fixture(scope="module")
def core():
    fp = optimize_alpha(2)
    return build_gadget(fp.argmax), fp.alpha_lower


def test_normalize_gadget_is_identity(core):
    g, _ = core
    ng = normalize(g, 2)
    assert ng.game.resources == g.resources and ng.game.players == g.players


def test_normalize_splits_constant_part():
    g = Game({"e": Polynomial((2, 3))}, (Player("p", F(1, 2), [("e",)]),))
    ng = normalize(g, 1)
    assert sorted(ng.game.resources) == ["e^0@p", "e^1"]
    assert ng.game.resources["e^0@p"] == Polynomial.monomial(4, 1)
    assert ng.game.resources["e^0@p"](F(1, 2)) == 2
    assert gm.player_cost(ng.game, (0,), 0) == gm.player_cost(g, (0,), 0)


def test_normalize_drops_zero_cost_players():
    g = Game({"e": Polynomial((0, 1)), "z": Polynomial(())},
             (Player("p", 1, [("e",)]), Player("q", 1, [("z",), ("e",)])))
    ng = normalize(g, 1)
    assert ng.removed == ("q",) and [p.id for p in ng.game.players] == ["p"]


def test_rescale_identity_and_scaling(core):
    g, _ = core
    ng = normalize(g, 2)
    assert rescale(ng, 1).game.resources == ng.game.resources
    half = rescale(ng, F(1, 2))
    prof = (0,) * g.n
    for i in range(g.n):
        assert gm.player_cost(half.game, prof, i) == F(1, 8) * gm.player_cost(ng.game, prof, i)


def test_choose_gamma_bounds(core):
    g, threshold = core
    ng = normalize(g, 2)
    gamma = choose_gamma(ng, threshold, 56)
    bounds = gamma_bounds(ng, threshold, 56)
    assert all(gamma < b for b in bounds)
    assert all(gamma / 2 < b for b in bounds)
    with pytest.raises(ValueError):
        choose_gamma(ng, threshold, 56, d=3)


def test_choose_gamma_one_when_slack():
    # bounds are 4, (100/99)(3/2)*4 and (1/4)/(1/16) = 4, so half the minimum is 2
    g = Game({"e": Polynomial.monomial(F(1, 4), 1)}, (Player("p", F(1, 4), [("e",)]),))
    assert choose_gamma(normalize(g, 1), 1, 100) == 1


def test_merge_parsimony_on_suite(suite, core):
    g, threshold = core
    for name, raw in suite.items():
        m = merge(raw, 2, F(21, 20), g, threshold=threshold)
        for alpha in (None, 1):
            rep = verify_parsimony(m, raw, alpha)
            assert rep.ok and rep.pne_count == SUITE_SAT[name], (name, rep)


def test_merge_rejects_bad_inputs(suite, core):
    g, threshold = core
    raw = suite["sat_nand"]
    with pytest.raises(ValueError):
        merge(raw, 2, F(11, 10), g, threshold=threshold)
    with pytest.raises(ValueError):
        merge(raw, 2, 2, g, threshold=threshold)
    easy = build_gadget(GadgetParams(2, 1, 1, 1, 1))
    with pytest.raises(ValueError):
        merge(raw, 2, F(21, 20), easy)


def test_restore_after_round_trip(suite, core, tmp_path):
    g, threshold = core
    raw = suite["sat_and"]
    m = merge(raw, 2, F(21, 20), g, threshold=threshold)
    path = tmp_path / "merged.json"
    gm.save(m.game, path)
    back = restore(gm.read(path), raw)
    assert back.expected_profiles() == m.expected_profiles()
    assert verify_parsimony(back, raw).ok
    with pytest.raises(ValueError):
        restore(gm.read(path), circ.parse("INPUT x\nNOT g x\nOUTPUT g"))
