"""The membership game: does an automaton accept a regular tree?

Both machines are finite, so the game where Automaton proposes transitions
and Pathfinder picks directions lives on a finite product arena: Automaton
positions are pairs (tree-machine state, automaton state), Pathfinder
positions are (tree-machine state, q_left, q_right).  The winner from the
initial position decides membership, and the positional strategies of the
solved game convert back and forth into regular runs (for Automaton) and
regular direction-choosing trees (for Pathfinder).

A note on invalid moves: the textbook game lets Automaton propose any state
pair and lose on the spot when it is not a transition.  Here invalid moves
are simply absent from the arena, and a position with no valid move is a
losing sink for Automaton.  Both treatments give the same winner: every
play through an invalid move is lost for Automaton immediately, which is
exactly what the sink does.  The leads() simulator below re-creates the
invalid-move device where it is actually needed.
"""

from dataclasses import dataclass

from .automata import single_initial
from .errors import (AlphabetMismatch, IncompleteStrategy, InconsistentRun,
                     IsMember, NotMember, PreconditionViolated, StateMismatch)
from .games import (AUTOMATON, PATHFINDER, ParityGameArena,
                    has_cycle_with_max_color, solve)
from .trees import (DIRS, RegularTree, build_tree, check_path, graft_node,
                    tree_equal)


def _product_arena(a, t, name):
    """Arena of the membership game, explored from all initial states.

    Vertices: (m, q) owned by Automaton with color C(q), and (m, ql, qr)
    owned by Pathfinder with color 0.  An Automaton vertex with no
    transition on the node's label is a losing sink.  Returns the arena and
    the list of initial Automaton vertices (one per initial state of a).
    """
    owner, color, edges = {}, {}, {}
    sinks = set()
    inits = [(t.init, q) for q in sorted(a.initials, key=str)]
    queue = list(inits)
    seen = set(queue)
    while queue:
        v = queue.pop(0)
        if len(v) == 2:
            m, q = v
            owner[v] = AUTOMATON
            color[v] = a.color[q]
            succ = tuple((m, ql, qr) for ql, qr in a.moves(q, t.out[m]))
            if not succ:
                sinks.add(v)
        else:
            m, ql, qr = v
            owner[v] = PATHFINDER
            color[v] = 0
            succ = ((t.next[(m, "l")], ql), (t.next[(m, "r")], qr))
        edges[v] = succ
        for w in succ:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    init = inits[0] if len(inits) == 1 else None
    return ParityGameArena(name, owner, color, edges,
                           frozenset(sinks), init).check(), inits


@dataclass
class MembershipGame:
    arena: ParityGameArena
    avert: dict        # Automaton vertex -> (tree state, automaton state)
    pvert: dict        # Pathfinder vertex -> (tree state, q_left, q_right)
    automaton: object  # the automaton the arena was built from (single-initial)
    original: object   # the automaton as passed in
    tree: RegularTree


def build_game(a, t):
    """Membership game for automaton a on regular tree t.

    Multi-initial automata are funneled through single_initial first so the
    game has one initial position; the original automaton is kept on the
    result for converting strategies back to runs over its real states.
    """
    if not set(t.alphabet) <= set(a.alphabet):
        raise AlphabetMismatch(
            f"{t.name} is over {t.alphabet}, outside {a.name}'s alphabet")
    normalized = a if len(a.initials) == 1 else single_initial(a)
    arena, inits = _product_arena(normalized, t, f"G[{a.name},{t.name}]")
    avert = {v: v for v in arena.owner if len(v) == 2}
    pvert = {v: v for v in arena.owner if len(v) == 3}
    return MembershipGame(arena, avert, pvert, normalized, a, t)


def member(a, t):
    """Is t in the language of a?"""
    g = build_game(a, t)
    return solve(g.arena).winner_of(g.arena.init) == AUTOMATON


@dataclass
class RegularRun:
    """A regular run of an automaton on a regular tree.

    The machine is a RegularTree whose "labels" are automaton states: the
    state assigned to node v is machine.label(v).  Reusing the tree type
    buys grafting, subtree extraction and equality checking for free.
    """

    automaton: object
    tree: RegularTree
    machine: RegularTree

    @property
    def name(self):
        return self.machine.name


def run_check(run):
    """Validate the run invariants; raises InconsistentRun.

    Root must output an initial state, and every reachable (run state,
    tree state) pair must read off a transition of the automaton.
    """
    a, t, mach = run.automaton, run.tree, run.machine
    mach.check()
    if mach.out[mach.init] not in a.initials:
        raise InconsistentRun(
            f"{run.name}: root state {mach.out[mach.init]!r} is not initial")
    seen = {(mach.init, t.init)}
    queue = [(mach.init, t.init)]
    while queue:
        r, m = queue.pop(0)
        trans = (mach.out[r], t.out[m],
                 mach.out[mach.next[(r, "l")]], mach.out[mach.next[(r, "r")]])
        if trans not in a.delta:
            raise InconsistentRun(
                f"{run.name}: {trans!r} is not a transition of {a.name}")
        for d in DIRS:
            p = (mach.next[(r, d)], t.next[(m, d)])
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return run


def run_is_accepting(run):
    """Does every branch of the run satisfy the parity condition?

    A branch's infinitely-visited machine states form a cycle-closed set,
    so the condition fails exactly when some reachable cycle of the run
    machine has an odd maximal color.
    """
    run_check(run)
    a, mach = run.automaton, run.machine
    reach = {mach.init}
    queue = [mach.init]
    while queue:
        s = queue.pop(0)
        for d in DIRS:
            w = mach.next[(s, d)]
            if w not in reach:
                reach.add(w)
                queue.append(w)
    colors = {s: a.color[mach.out[s]] for s in reach}

    def succ(s):
        return (mach.next[(s, "l")], mach.next[(s, "r")])

    for c in sorted({v for v in colors.values() if v % 2 == 1}):
        if has_cycle_with_max_color(reach, succ, colors, c):
            return False
    return True


def automaton_strategy_to_run(g, analysis):
    """Read a regular run off Automaton's winning strategy.

    The run machine is the strategy-restricted product: from (m, q) the
    chosen Pathfinder vertex fixes the state pair, and its two arena edges
    are the l- and r-successors.  When the game was built over a fresh
    funnel state, the root is renamed to the first original initial state
    that carries the chosen transition.
    """
    if analysis.winner_of(g.arena.init) != AUTOMATON:
        raise NotMember(f"{g.tree.name} not accepted by {g.original.name}")
    strat = analysis.strategy[AUTOMATON]
    a, t = g.original, g.tree
    root = g.arena.init
    root_out = root[1]
    if g.automaton is not a:
        # the funnel state copied some initial state's transition; recover it
        _, ql, qr = strat[root]
        root_out = next(q for q in sorted(a.initials, key=str)
                        if (q, t.out[t.init], ql, qr) in a.delta)

    def succ(v, d):
        p = strat[v]
        return g.arena.edges[p][0 if d == "l" else 1]

    def out(v):
        return root_out if v == root else v[1]

    alphabet = tuple(sorted(a.states, key=str))
    mach = build_tree(root, succ, out, alphabet, f"run[{a.name},{t.name}]")
    return run_check(RegularRun(a, t, mach))


@dataclass
class PathfinderStrategyTree:
    """A regular tree of total maps (q_left, q_right) -> direction.

    The machine runs over directions like a RegularTree; out[state] is the
    map consulted at the corresponding node.
    """

    name: str
    automaton: object
    init: object
    next: dict       # (state, dir) -> state
    out: dict        # state -> {(ql, qr): "l" | "r"}, total on Q x Q

    @property
    def states(self):
        return tuple(sorted(self.out))


def pathfinder_strategy(a, t):
    """Pathfinder's winning strategy as a regular map-labeled tree.

    Entries for state pairs never reached as Pathfinder vertices default to
    direction l, keeping the emitted maps total and files reproducible.
    """
    g = build_game(a, t)
    analysis = solve(g.arena)
    if analysis.winner_of(g.arena.init) == AUTOMATON:
        raise IsMember(f"{t.name} is accepted by {a.name}")
    strat = analysis.strategy[PATHFINDER]
    pairs = [(ql, qr) for ql in sorted(a.states, key=str)
             for qr in sorted(a.states, key=str)]
    out = {m: {pair: "l" for pair in pairs} for m in t.states}
    for v, w in strat.items():
        if len(v) != 3:
            continue
        m, ql, qr = v
        if (ql, qr) in out[m]:
            out[m][(ql, qr)] = "l" if w == g.arena.edges[v][0] else "r"
    return PathfinderStrategyTree(f"straj[{a.name},{t.name}]", a,
                                  t.init, dict(t.next), out)


def run_graft(run, run1, v):
    """Replace the part of run below node v by run1.

    run1 must start in the state run assigns to v; the result is a run on
    the correspondingly grafted tree.  Acceptance carries over whenever
    both inputs are accepting, since every cycle of the grafted machine
    comes from one of the two machines.
    """
    check_path(v)
    here = run.machine.label(v)
    there = run1.machine.label("")
    if here != there:
        raise StateMismatch(
            f"run assigns {here!r} at {v or 'the root'}, graft starts at {there!r}")
    machine = graft_node(run.machine, run1.machine, v)
    tree = graft_node(run.tree, run1.tree, v)
    return run_check(RegularRun(run.automaton, tree, machine))


def leads(a, t0, strj, tprime, phi):
    """Play phi's strategy against strj in the game on t0; find the slip.

    phi is an accepting run on tprime, so when Automaton replays it in the
    game for t0 (Pathfinder steering by strj) the first proposal that is
    not a transition under t0's labels pins a node where t0 and tprime
    disagree: the same proposal IS a transition under tprime's label there.
    The states of the four machines determine the whole simulation, so a
    valid play longer than their product must have looped, meaning some
    precondition (t0 rejected, strj winning, phi accepting) was violated.
    """
    try:
        if not run_is_accepting(phi):
            raise PreconditionViolated(f"{phi.name} is not accepting")
    except InconsistentRun as err:
        raise PreconditionViolated(str(err)) from err
    if not tree_equal(phi.tree, tprime):
        raise PreconditionViolated(
            f"{phi.name} runs on {phi.tree.name}, not on {tprime.name}")
    if not set(t0.alphabet) <= set(a.alphabet):
        raise AlphabetMismatch(
            f"{t0.name} is over {t0.alphabet}, outside {a.name}'s alphabet")
    mach = phi.machine
    bound = len(mach.states) * len(t0.states) * len(tprime.states) * len(strj.states)
    r, m0, s = mach.init, t0.init, strj.init
    path = ""
    for _ in range(bound + 1):
        ql = mach.out[mach.next[(r, "l")]]
        qr = mach.out[mach.next[(r, "r")]]
        if (mach.out[r], t0.out[m0], ql, qr) not in a.delta:
            return path
        choice = strj.out[s].get((ql, qr))
        if choice is None:
            raise IncompleteStrategy(
                f"{strj.name} has no direction for {(ql, qr)!r}")
        path += choice
        r = mach.next[(r, choice)]
        m0 = t0.next[(m0, choice)]
        s = strj.next[(s, choice)]
    raise PreconditionViolated(
        "no invalid move within the state-product bound; "
        "the inputs cannot all satisfy the leads preconditions")
