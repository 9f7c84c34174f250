import itertools
import random

import pytest

from treeamb.errors import IncompleteStrategy, MalformedArena
from treeamb.games import (AUTOMATON, PATHFINDER, ParityGameArena,
                           has_cycle_with_max_color, solve, solve_oracle,
                           strongly_connected_components, to_dot,
                           verify_strategy)


def arena(owner, color, edges, sinks=(), name="g", init=None):
    return ParityGameArena(name, dict(owner), dict(color),
                           {v: tuple(ws) for v, ws in edges.items()},
                           frozenset(sinks), init).check()


def test_self_loop_parity():
    g = arena({0: AUTOMATON}, {0: 0}, {0: [0]})
    assert solve(g).winner_of(0) == AUTOMATON
    g = arena({0: AUTOMATON}, {0: 1}, {0: [0]})
    assert solve(g).winner_of(0) == PATHFINDER


def test_two_cycle_max_color_decides():
    g = arena({"a": AUTOMATON, "p": PATHFINDER},
              {"a": 1, "p": 2},
              {"a": ["p"], "p": ["a"]})
    an = solve(g)
    assert an.region[AUTOMATON] == {"a", "p"}
    assert an.region[PATHFINDER] == frozenset()


def test_choice_vertex_picks_even_loop():
    g = arena({"a": AUTOMATON, "good": PATHFINDER, "bad": PATHFINDER},
              {"a": 1, "good": 2, "bad": 1},
              {"a": ["good", "bad"], "good": ["good"], "bad": ["bad"]})
    an = solve(g)
    assert an.region[AUTOMATON] == {"a", "good"}
    assert an.region[PATHFINDER] == {"bad"}
    assert an.strategy[AUTOMATON]["a"] == "good"
    assert an.strategy[PATHFINDER] == {"bad": "bad"}


def test_sink_loses_for_owner():
    # [TRIVIAL] a stuck player loses on the spot
    g = arena({"s": AUTOMATON}, {"s": 0}, {}, sinks=["s"])
    assert solve(g).winner_of("s") == PATHFINDER
    g = arena({"s": PATHFINDER}, {"s": 5}, {}, sinks=["s"])
    assert solve(g).winner_of("s") == AUTOMATON


def test_pathfinder_can_steer_into_automaton_sink():
    g = arena({"p": PATHFINDER, "s": AUTOMATON, "ok": AUTOMATON},
              {"p": 0, "s": 0, "ok": 2},
              {"p": ["ok", "s"], "ok": ["p"]}, sinks=["s"])
    an = solve(g)
    assert an.region[PATHFINDER] == {"p", "s", "ok"}
    assert an.strategy[PATHFINDER]["p"] == "s"


def test_pathfinder_wins_odd_trap():
    # Automaton may shuttle between two odd colors forever, or enter an
    # even self-loop that the Pathfinder immediately exits through color 3.
    g = arena({0: AUTOMATON, 1: AUTOMATON, 2: PATHFINDER},
              {0: 1, 1: 3, 2: 2},
              {0: [1, 2], 1: [0], 2: [1]})
    an = solve(g)
    assert an.region[PATHFINDER] == {0, 1, 2}
    assert verify_strategy(g, PATHFINDER, an.strategy[PATHFINDER],
                           an.region[PATHFINDER])


def test_malformed_arenas_rejected():
    with pytest.raises(MalformedArena):
        arena({0: AUTOMATON}, {0: 0}, {})          # no move, not a sink
    with pytest.raises(MalformedArena):
        arena({0: AUTOMATON}, {0: 0}, {0: [0]}, sinks=[0])
    with pytest.raises(MalformedArena):
        arena({0: AUTOMATON}, {0: 0}, {0: [1]})    # dangling edge
    with pytest.raises(MalformedArena):
        arena({0: "X"}, {0: 0}, {0: [0]})


def _strategy_domains_exact(g, an):
    for p in (AUTOMATON, PATHFINDER):
        expect = {v for v in an.region[p]
                  if g.owner[v] == p and v not in g.sinks}
        assert set(an.strategy[p]) == expect


def test_exhaustive_two_vertex_agreement():
    # every 2-vertex arena with colors in {0,1}: recursive solver,
    # progress-measure oracle, and strategy verification all agree
    edge_opts = [(), (0,), (1,), (0, 1)]
    count = 0
    for o0, o1 in itertools.product((AUTOMATON, PATHFINDER), repeat=2):
        for c0, c1 in itertools.product((0, 1), repeat=2):
            for e0, e1 in itertools.product(edge_opts, repeat=2):
                sinks = [v for v, e in ((0, e0), (1, e1)) if not e]
                g = arena({0: o0, 1: o1}, {0: c0, 1: c1},
                          {0: e0, 1: e1}, sinks=sinks)
                an = solve(g)
                ora = solve_oracle(g)
                assert an.region == ora.region
                _strategy_domains_exact(g, an)
                for p in (AUTOMATON, PATHFINDER):
                    assert verify_strategy(g, p, an.strategy[p], an.region[p])
                    assert verify_strategy(g, p, ora.strategy[p], ora.region[p])
                count += 1
    assert count == 256


def random_arena(rng, n):
    owner = {v: rng.choice((AUTOMATON, PATHFINDER)) for v in range(n)}
    color = {v: rng.randrange(4) for v in range(n)}
    edges = {}
    sinks = []
    for v in range(n):
        if rng.random() < 0.1:
            edges[v] = ()
            sinks.append(v)
        else:
            k = rng.randint(1, min(3, n))
            edges[v] = tuple(rng.sample(range(n), k))
    return arena(owner, color, edges, sinks=sinks)


def test_random_arenas_solver_vs_oracle():
    rng = random.Random(20240817)
    for _ in range(150):
        g = random_arena(rng, rng.randint(1, 7))
        an = solve(g)
        ora = solve_oracle(g)
        assert an.region == ora.region
        _strategy_domains_exact(g, an)
        _strategy_domains_exact(g, ora)
        for p in (AUTOMATON, PATHFINDER):
            assert verify_strategy(g, p, an.strategy[p], an.region[p])
            assert verify_strategy(g, p, ora.strategy[p], ora.region[p])


def test_verify_rejects_bad_strategy():
    g = arena({"a": AUTOMATON, "good": PATHFINDER, "bad": PATHFINDER},
              {"a": 1, "good": 2, "bad": 1},
              {"a": ["good", "bad"], "good": ["good"], "bad": ["bad"]})
    assert verify_strategy(g, AUTOMATON, {"a": "good"}, {"a"})
    assert not verify_strategy(g, AUTOMATON, {"a": "bad"}, {"a"})
    with pytest.raises(IncompleteStrategy):
        verify_strategy(g, AUTOMATON, {}, {"a"})
    with pytest.raises(IncompleteStrategy):
        verify_strategy(g, AUTOMATON, {"a": "a"}, {"a"})  # not an edge


def test_verify_rejects_reachable_owned_sink():
    g = arena({"a": AUTOMATON, "s": AUTOMATON},
              {"a": 0, "s": 0}, {"a": ["s"]}, sinks=["s"])
    assert not verify_strategy(g, AUTOMATON, {"a": "s"}, {"a"})


def test_scc_and_cycle_helpers():
    succ = {0: [1], 1: [2], 2: [0], 3: [3], 4: [0]}.__getitem__
    comps = strongly_connected_components({0, 1, 2, 3, 4}, succ)
    assert sorted(sorted(c) for c in comps) == [[0, 1, 2], [3], [4]]
    color = {0: 0, 1: 2, 2: 1, 3: 1, 4: 3}
    assert has_cycle_with_max_color({0, 1, 2, 3, 4}, succ, color, 2)
    assert has_cycle_with_max_color({3}, succ, color, 1)
    assert not has_cycle_with_max_color({0, 1, 2}, succ, color, 1)
    assert not has_cycle_with_max_color({4}, succ, color, 3)


def test_many_color_layers_do_not_overflow():
    # isolated self-loops with all-distinct colors force one recursion
    # level per vertex in the decomposition; 1500 levels exceed the
    # default interpreter recursion limit
    n = 1500
    owner = {v: AUTOMATON for v in range(n)}
    color = {v: 2 * v for v in range(n)}
    edges = {v: (v,) for v in range(n)}
    g = arena(owner, color, edges)
    an = solve(g)
    assert an.region[AUTOMATON] == frozenset(range(n))


def test_dot_output_mentions_shapes_and_strategy():
    g = arena({"a": AUTOMATON, "p": PATHFINDER},
              {"a": 2, "p": 1}, {"a": ["p"], "p": ["a"]})
    an = solve(g)
    dot = to_dot(g, an)
    assert "shape=box" in dot and "shape=diamond" in dot
    assert 'label="a:2"' in dot
    assert "style=bold" in dot
    assert to_dot(g).count("fillcolor") == 0
