from fractions import Fraction as F

import pytest

from apne import circuit as circ
from apne.circuit_game import (ONE_STRATEGY, ZERO_STRATEGY, Query, compile_circuit, decide,
                               extend_to_pne, follows_nand, select_params, thm2_instance)
from apne.game import deviation_cost, player_cost
from apne.oracle import enumerate_pne

from conftest import SUITE_SAT


def one_gate():
    return circ.canonicalize(circ.parse("INPUT x\nNOT g x\nOUTPUT g"))


def test_select_params_window_d2():
    p = select_params(2, 2)
    assert p.lam == 3 and p.mu >= 55
    spread = 1 + F(9) / (p.mu - 1)
    assert 2 * spread < p.lam < F(9) / (2 * spread)
    assert p.window_holds() and p.alpha_max > 2
    # the window at mu = 55 is already nonempty
    spread55 = 1 + F(9, 54)
    assert 2 * spread55 < F(9) / (2 * spread55)


def test_select_params_refuses_large_alpha():
    with pytest.raises(ValueError):
        select_params(2, 3)
    with pytest.raises(ValueError):
        select_params(2, F(1, 2))
    assert select_params(4, F(17, 2)).window_holds()


def test_compile_smallest_instance():
    cg = compile_circuit(one_gate(), select_params(2, 1))
    assert [p.id for p in cg.game.players] == ["X1", "P", "G1"]
    assert sorted(cg.game.resources) == ["0_1", "1_1"]
    with pytest.raises(ValueError):
        compile_circuit(circ.parse("INPUT x\nNOT g x\nOUTPUT g"), select_params(2, 1))


def test_follows_nand_on_one_gate():
    cg = compile_circuit(one_gate(), select_params(2, 1))
    # profile order is (X1, P, G1); NAND(x, 1) = not x
    assert follows_nand(cg, (0, 0, 1)) and follows_nand(cg, (1, 0, 0))
    assert not follows_nand(cg, (1, 0, 1))


def test_all_ones_forces_zero_downstream():
    c = circ.canonicalize(circ.make_valid(circ.parse(
        "INPUT a\nINPUT b\nNAND g a b\nOUTPUT g")))
    cg = compile_circuit(c, select_params(2, 1))
    prof = extend_to_pne(cg, (1, 1))
    for k, g in enumerate(c.gates, 1):
        if all(s in c.inputs or s == circ.ONE for s in g.inputs):
            assert prof[cg.gate_players[k - 1]] == 0


def test_extend_to_pne_is_the_pne_set():
    for c in circ.canonical_circuits(3):
        params = select_params(2, 1)
        mid = (1 + params.alpha_max) / 2
        cg = compile_circuit(c, select_params(2, mid))
        expected = sorted(extend_to_pne(cg, x) for x in circ.assignments(len(c.inputs)))
        assert all(follows_nand(cg, p) for p in expected)
        for alpha in (1, mid):
            assert enumerate_pne(cg.game, alpha).pne_profiles == expected
        for x in circ.assignments(len(c.inputs)):
            assert extend_to_pne(cg, x)[cg.output_player] == circ.evaluate(c, x)


def test_input_player_lock_ratio():
    # input player on the zero side: switching raises its cost by 3^d / lam at least
    cg = compile_circuit(one_gate(), select_params(2, 1))
    prof = extend_to_pne(cg, (0,))
    x = cg.input_players[0]
    ratio = deviation_cost(cg.game, prof, x, 1) / player_cost(cg.game, prof, x)
    assert ratio >= cg.params.lam


@pytest.mark.parametrize("kind", ["subset", "resource", "cost"])
def test_decision_kinds_on_suite(suite, kind):
    for name, raw in suite.items():
        inst = thm2_instance(kind, raw, 2, F(3, 2))
        assert inst.expected == (SUITE_SAT[name] > 0)
        rep = enumerate_pne(inst.game, F(3, 2))
        assert decide(inst, rep.pne_profiles) == inst.expected, name
        if kind == "cost":
            out = inst.cgame.output_player
            costs = {player_cost(inst.game, p, out) for p in rep.pne_profiles}
            params = inst.cgame.params
            allowed = {params.lam * params.mu, 4 * params.mu}
            assert costs <= allowed and costs
            assert (params.lam * params.mu in costs) == inst.expected


def test_decision_sat_witness_and_custom_z(suite):
    raw = suite["sat_nand"]
    inst = thm2_instance("subset", raw, 2, 1)
    pne = enumerate_pne(inst.game, 1).pne_profiles
    witnesses = [p for p in pne if inst.query.holds(inst.game, p)]
    assert len(witnesses) == SUITE_SAT["sat_nand"]
    inst = thm2_instance("cost", raw, 2, 1, z=F(7))
    assert inst.query.bound == 7
    assert inst.notes["yes_cost"] < 7 < inst.notes["no_cost"]
    with pytest.raises(ValueError):
        thm2_instance("cost", raw, 2, 1, z=0)
    with pytest.raises(ValueError):
        thm2_instance("bogus", raw, 2, 1)


def test_query_json_round_trip():
    for q in (Query("subset", 3, ONE_STRATEGY), Query("resource", resource="r"),
              Query("cost", 2, bound=F(7, 3)), Query("subset", 0, ZERO_STRATEGY)):
        assert Query.from_json(q.to_json()) == q
