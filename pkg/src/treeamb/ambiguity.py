"""How many accepting runs does an automaton have on a tree?

The run-cardinality machinery works on the membership product graph
restricted to the Automaton winning region W.  Writing N(v) for the number
of accepting runs from product vertex v = (tree state, automaton state),
the two structural observations that drive everything are:

  * a vertex with exactly one winning move everywhere below it has exactly
    the winning strategy's run, so N(v) = 1; and
  * where choices exist they multiply across children and add across
    moves, so N(v) = sum over winning moves of N(left)*N(right).

That recursion is exact whenever no vertex reachable inside W is both on a
W-cycle and above a choice ("cyclic and branching"): any branch of any
assembled run eventually cycles through choice-free vertices and therefore
follows the winning strategy, so every assembly is accepting.  A cyclic
and branching vertex conversely pumps its cycle any number of times before
committing to one of two distinct continuations, giving infinitely many
accepting runs.  Uncountability is certified separately by an even cycle
that either leaves the run's path choice (two winning moves re-entering
the cycle's strongly connected component) or re-chooses a subtree (a cycle
whose off-path sibling has more than one run) at every revisit.

Only soundness is claimed for the infinite and uncountable certificates;
the classifier reports what it can prove and otherwise counts.
"""

import itertools
from dataclasses import dataclass

from .automata import (ParityTreeAutomaton, conjunction_dpw_tuple,
                       restrict_initials)
from .errors import AlphabetMismatch, InconsistentRun, NotMember
from .games import (AUTOMATON, PATHFINDER, ParityGameArena, solve,
                    strongly_connected_components)
from .membership import (RegularRun, _product_arena, automaton_strategy_to_run,
                         build_game, run_check, run_is_accepting)
from .trees import build_tree, tree_equal

INFINITE = "infinite"
UNCOUNTABLE = "uncountable"


# ----------------------------------------------------------------- emptiness

def _emptiness_game(a):
    """Arena: states pick a transition, transitions branch to both children.

    States and transition tuples are tagged to keep them apart; a state
    with no transitions at all is a losing sink for Automaton.
    """
    owner, color, edges = {}, {}, {}
    sinks = set()
    bystate = {}
    for tr in a.delta:
        bystate.setdefault(tr[0], []).append(tr)
    for q in a.states:
        v = ("q", q)
        owner[v] = AUTOMATON
        color[v] = a.color[q]
        trs = sorted(bystate.get(q, ()), key=str)
        if trs:
            edges[v] = tuple(("t", tr) for tr in trs)
        else:
            edges[v] = ()
            sinks.add(v)
        for tr in trs:
            w = ("t", tr)
            if w not in owner:
                owner[w] = PATHFINDER
                color[w] = 0
                edges[w] = (("q", tr[2]), ("q", tr[3]))
    arena = ParityGameArena(f"empty[{a.name}]", owner, color, edges,
                            frozenset(sinks))
    return arena.check()


def emptiness(a):
    """A regular tree accepted by a, or None when the language is empty."""
    analysis = solve(_emptiness_game(a))
    winners = [q for q in sorted(a.initials, key=str)
               if analysis.winner_of(("q", q)) == AUTOMATON]
    if not winners:
        return None
    strat = analysis.strategy[AUTOMATON]

    def chosen(q):
        return strat[("q", q)][1]

    return build_tree(winners[0],
                      lambda q, d: chosen(q)[2 if d == "l" else 3],
                      lambda q: chosen(q)[1],
                      a.alphabet, name=f"wit[{a.name}]")


def nonempty_states(a):
    """States from which some accepting run exists (on some tree)."""
    analysis = solve(_emptiness_game(a))
    return frozenset(q for q in a.states
                     if analysis.winner_of(("q", q)) == AUTOMATON)


# ------------------------------------------------------ k distinct runs

def k_distinct_runs_automaton(a, k):
    """Automaton for "a has at least k pairwise distinct accepting runs".

    k trackers each follow one candidate run; a checker per tracker pair
    starts searching and must eventually discharge, which it may do
    exactly at a node where its two trackers disagree (both children
    leave the search); while the trackers agree it hands the search to
    one chosen child.  Acceptance folds the k tracker parities and one
    co-Buechi coordinate (search = 1, discharged = 0, maxed over the
    checkers) through the parity-conjunction construction; the product is
    built breadth-first so only the reachable part materializes.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    pairs = tuple(itertools.combinations(range(k), 2))
    d = a.max_color()
    dpw = conjunction_dpw_tuple((d,) * k + (1,))

    def letter_of(trackers, checkers):
        cob = max((1 for c in checkers if c == "s"), default=0)
        return tuple(a.color[q] for q in trackers) + (cob,)

    def checker_options(trackers, checkers):
        """Per-pair child assignments: list of (left, right) label lists."""
        opts = []
        for (i, j), c in zip(pairs, checkers):
            if c == "d":
                opts.append((("d", "d"),))
            elif trackers[i] != trackers[j]:
                opts.append((("d", "d"),))      # discharge here
            else:
                opts.append((("s", "d"), ("d", "s")))
        return opts

    initials = set()
    for trackers in itertools.product(sorted(a.initials, key=str), repeat=k):
        checkers = ("s",) * len(pairs)
        ds = dpw.delta[(dpw.init, letter_of(trackers, checkers))]
        initials.add((trackers, checkers, ds))

    states = set()
    delta = set()
    todo = list(sorted(initials, key=str))
    while todo:
        st = todo.pop()
        if st in states:
            continue
        states.add(st)
        trackers, checkers, ds = st
        for x in a.alphabet:
            moves = [a.moves(q, x) for q in trackers]
            if not all(moves):
                continue
            copts = checker_options(trackers, checkers)
            for combo in itertools.product(*moves):
                ltr = tuple(m[0] for m in combo)
                rtr = tuple(m[1] for m in combo)
                for assign in itertools.product(*copts):
                    lch = tuple(s for s, _ in assign)
                    rch = tuple(s for _, s in assign)
                    lst = (ltr, lch, dpw.delta[(ds, letter_of(ltr, lch))])
                    rst = (rtr, rch, dpw.delta[(ds, letter_of(rtr, rch))])
                    delta.add((st, x, lst, rst))
                    for child in (lst, rst):
                        if child not in states:
                            todo.append(child)
    color = {st: dpw.color[st[2]] for st in states}
    return ParityTreeAutomaton(f"{k}-distinct[{a.name}]", a.alphabet,
                               frozenset(states), frozenset(initials),
                               frozenset(delta), color).check()


def is_k_ambiguous(a, k):
    """True iff no tree at all has more than k distinct accepting runs."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    return emptiness(k_distinct_runs_automaton(a, k + 1)) is None


# ------------------------------------------------------- counting core

class _RunCounts:
    """Winning-region counting data for one automaton/tree pair.

    avert: the Automaton product vertices; wmoves maps each winning vertex
    to its winning moves as (left, right) vertex pairs; roots are the
    winning initial vertices; reach is the set reachable from the roots
    through winning moves (= vertices occurring in accepting runs).
    """

    def __init__(self, a, t):
        if not set(t.alphabet) <= set(a.alphabet):
            raise AlphabetMismatch(
                f"{t.name} is over {t.alphabet}, outside {a.name}'s alphabet")
        self.automaton = a
        self.tree = t
        arena, inits = _product_arena(a, t, f"count[{a.name},{t.name}]")
        analysis = solve(arena)
        self.arena = arena
        self.analysis = analysis
        won = analysis.region[AUTOMATON]
        self.roots = tuple(v for v in inits if v in won)
        # winning moves of a winning Automaton vertex: the Pathfinder
        # successors inside W, given as their (left child, right child)
        self.wmoves = {}
        for v in arena.vertices:
            if len(v) == 2 and v in won:
                self.wmoves[v] = tuple(tuple(arena.edges[pv])
                                       for pv in arena.edges[v] if pv in won)
        self.reach = set()
        todo = list(self.roots)
        while todo:
            v = todo.pop()
            if v in self.reach:
                continue
            self.reach.add(v)
            for cl, cr in self.wmoves.get(v, ()):
                todo += [u for u in (cl, cr) if u not in self.reach]
        self._branching = None
        self._cyclic = None
        self._counts = {}      # cap -> {vertex: saturated N(vertex)}

    def branching(self):
        """Vertices with a genuine choice at or below them (least fixpoint)."""
        if self._branching is None:
            flag = {v: len(m) >= 2 for v, m in self.wmoves.items()}
            changed = True
            while changed:
                changed = False
                for v, ms in self.wmoves.items():
                    if flag[v]:
                        continue
                    if any(flag[c] for cl, cr in ms for c in (cl, cr)):
                        flag[v] = True
                        changed = True
            self._branching = flag
        return self._branching

    def cyclic(self):
        """Vertices lying on a cycle of the winning move graph."""
        if self._cyclic is None:
            succ = {v: sorted({c for cl, cr in ms for c in (cl, cr)}, key=str)
                    for v, ms in self.wmoves.items()}
            sccs = strongly_connected_components(sorted(succ, key=str),
                                                 lambda v: succ[v])
            flag = {v: False for v in succ}
            for comp in sccs:
                if len(comp) > 1:
                    for v in comp:
                        flag[v] = True
            for v in succ:
                if v in succ[v]:
                    flag[v] = True
            self._cyclic = flag
        return self._cyclic

    def regeneration_vertices(self):
        """Reachable vertices that are cyclic and branching, in search order."""
        br, cy = self.branching(), self.cyclic()
        return [v for v in sorted(self.reach, key=lambda u: (u[0], str(u[1])))
                if br.get(v) and cy.get(v)]

    def count(self, v, cap=None):
        """N(v), exactly or saturated at cap.

        Only sound once regeneration_vertices() is empty: branching
        vertices then form a DAG and the worklist below terminates.
        """
        br = self.branching()
        memo = self._counts.setdefault(cap, {})
        expanding = set()
        stack = [(v, False)]
        while stack:
            u, ready = stack.pop()
            if u in memo:
                continue
            if not br.get(u, False):
                memo[u] = 1
                continue
            if ready:
                expanding.discard(u)
                total = 0
                for cl, cr in self.wmoves[u]:
                    total += memo[cl] * memo[cr]
                    if cap is not None and total >= cap:
                        total = cap
                        break
                memo[u] = total
            else:
                if u in expanding:
                    raise AssertionError(
                        "counting over a branching cycle; the infinite "
                        "certificate should have fired first")
                expanding.add(u)
                stack.append((u, True))
                for cl, cr in self.wmoves[u]:
                    for c in (cl, cr):
                        if c not in memo:
                            stack.append((c, False))
        return memo[v]

    def total(self, cap=None):
        """Number of accepting runs on the whole tree (0 when not member)."""
        total = 0
        for v in self.roots:
            total += self.count(v, cap)
            if cap is not None and total >= cap:
                return cap
        return total


def at_least_k(a, t, k):
    """True iff a has at least k pairwise distinct accepting runs on t.

    Decided by counting on the winning product graph (with the infinite
    certificate short-circuiting), which agrees with membership of the
    k-distinct product but stays polynomial in the product size instead
    of exponential in k.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    counts = _RunCounts(a, t)
    if not counts.roots:
        return False
    if counts.regeneration_vertices():
        return True
    return counts.total(cap=k) >= k


# ------------------------------------------------- witnesses & verdicts

@dataclass
class RegenerationWitness:
    """A vertex that regenerates ambiguity, with its certificate.

    spine is a cycle of product vertices from the vertex back to itself
    through winning moves (even maximum color in the uncountable case);
    runs are two distinct accepting runs of the automaton started at the
    vertex's state on the subtree at the vertex's tree state.
    """

    mode: str
    vertex: tuple
    spine: tuple
    runs: tuple


@dataclass
class AmbiguityVerdict:
    kind: str          # "exact" | "at_least" | "infinite" | "uncountable"
    n: int = None
    witness: RegenerationWitness = None

    @classmethod
    def exact(cls, n):
        return cls("exact", n=n)

    @classmethod
    def at_least(cls, n):
        return cls("at_least", n=n)

    @classmethod
    def infinite(cls, witness):
        return cls(INFINITE, witness=witness)

    @classmethod
    def uncountable(cls, witness):
        return cls(UNCOUNTABLE, witness=witness)

    def __repr__(self):
        if self.kind == "exact":
            return f"Exact({self.n})"
        if self.kind == "at_least":
            return f"AtLeast({self.n})"
        return self.kind.capitalize()


def _succ_within(counts, allowed):
    """Winning-move successor map restricted to a vertex set."""
    return {v: sorted({c for cl, cr in counts.wmoves.get(v, ())
                       for c in (cl, cr) if c in allowed}, key=str)
            for v in allowed}


def _shortest_path(succ, sources, targets):
    """BFS path (vertex list) from any source to any target, or None."""
    targets = set(targets)
    seen = {}
    queue = list(sources)
    for s in queue:
        seen.setdefault(s, None)
    i = 0
    while i < len(queue):
        u = queue[i]
        i += 1
        if u in targets:
            path = [u]
            while seen[path[-1]] is not None:
                path.append(seen[path[-1]])
            return path[::-1]
        for w in succ.get(u, ()):
            if w not in seen:
                seen[w] = u
                queue.append(w)
    return None


def _cycle_through(counts, v, allowed, via=None):
    """A cycle v ->+ v inside allowed, passing through some via vertex."""
    succ = _succ_within(counts, allowed)
    starts = succ.get(v, ())
    if via is None or v in via:
        back = _shortest_path(succ, starts, {v})
        return None if back is None else [v] + back
    head = _shortest_path(succ, starts, via)
    if head is None:
        return None
    tail = _shortest_path(succ, succ.get(head[-1], ()), {v})
    if tail is None:
        return None
    return [v] + head + tail


def _residual_runs(counts, vertex):
    """Two distinct accepting runs of A_q on the subtree at m."""
    m, q = vertex
    a, t = counts.automaton, counts.tree
    sub = build_tree(m, lambda s, d: t.next[(s, d)], lambda s: t.out[s],
                     t.alphabet, name=f"{t.name}@{m}")
    aq = restrict_initials(a, frozenset([q]))
    k2 = k_distinct_runs_automaton(aq, 2)
    g = build_game(k2, sub)
    paired = automaton_strategy_to_run(g, solve(g.arena))
    alphabet = tuple(sorted(aq.states, key=str))
    runs = []
    for i in (0, 1):
        mach = build_tree(paired.machine.init,
                          lambda s, d: paired.machine.next[(s, d)],
                          lambda s, i=i: paired.machine.out[s][0][i],
                          alphabet, name=f"{paired.name}#{i}")
        runs.append(run_check(RegularRun(aq, sub, mach)))
    return tuple(runs)


def _find_witness(counts, mode):
    a = counts.automaton
    if mode == INFINITE:
        for v in counts.regeneration_vertices():
            spine = _cycle_through(counts, v, set(counts.wmoves))
            if spine and len(spine) > 1 and spine[-1] == v:
                runs = _residual_runs(counts, v)
                return RegenerationWitness(mode, v, tuple(spine), runs)
        return None
    if mode != UNCOUNTABLE:
        raise ValueError(f"unknown witness mode {mode!r}")
    order = sorted(counts.reach, key=lambda u: (u[0], str(u[1])))
    colors = sorted({a.color[q] for q in a.states if a.color[q] % 2 == 0})
    sccs_at = {}
    for c in colors:
        allowed = {v for v in counts.wmoves if a.color[v[1]] <= c}
        succ = _succ_within(counts, allowed)
        comp_of = {}
        for comp in strongly_connected_components(sorted(allowed, key=str),
                                                  lambda v: succ[v]):
            members = frozenset(comp)
            for v in comp:
                comp_of[v] = members
        sccs_at[c] = (comp_of, succ)
    branching = counts.branching()
    for v in order:
        for c in colors:
            comp_of, succ = sccs_at[c]
            S = comp_of.get(v)
            if S is None:
                continue
            if len(S) == 1 and v not in succ.get(v, ()):
                continue
            tops = {u for u in S if a.color[u[1]] == c}
            if not tops:
                continue
            twin = sum(1 for cl, cr in counts.wmoves[v]
                       if cl in S or cr in S) >= 2
            side = any((cl in S and branching.get(cr, False)) or
                       (cr in S and branching.get(cl, False))
                       for cl, cr in counts.wmoves[v])
            if not (twin or side):
                continue
            spine = _cycle_through(counts, v, S, via=tops)
            if not spine or spine[-1] != v or len(spine) < 2:
                continue
            runs = _residual_runs(counts, v)
            return RegenerationWitness(UNCOUNTABLE, v, tuple(spine), runs)
    return None


def find_regeneration_witness(a, t, mode):
    """Search the winning product graph for an ambiguity-regenerating
    vertex; None when no certificate of the requested kind is found."""
    counts = _RunCounts(a, t)
    if not counts.roots:
        raise NotMember(f"{a.name} does not accept {t.name}")
    witness = _find_witness(counts, mode)
    if witness is not None and not witness_is_valid(a, t, witness):
        raise AssertionError("internal witness failed its validity checks")
    return witness


def witness_is_valid(a, t, witness):
    """Mechanical validity checks of a regeneration witness."""
    counts = _RunCounts(a, t)
    v = witness.vertex
    if v not in counts.reach:
        return False
    spine = witness.spine
    if len(spine) < 2 or spine[0] != v or spine[-1] != v:
        return False
    for u, w in zip(spine, spine[1:]):
        if not any(w in (cl, cr) for cl, cr in counts.wmoves.get(u, ())):
            return False
    if witness.mode == UNCOUNTABLE:
        if max(a.color[q] for _, q in spine) % 2 != 0:
            return False
    r1, r2 = witness.runs
    try:
        if not (run_is_accepting(r1) and run_is_accepting(r2)):
            return False
    except InconsistentRun:
        return False
    return not tree_equal(r1.machine, r2.machine)


def classify(a, t, K):
    """The run-cardinality verdict of a on t, counting up to K.

    Order: non-membership, the uncountable certificate, the infinite
    certificate, then exact counting with verdict AtLeast(K+1) once the
    count exceeds K (the certificates are sound but not complete, so
    AtLeast also covers "infinite but unproven").
    """
    if K < 1:
        raise ValueError(f"K must be at least 1, got {K}")
    counts = _RunCounts(a, t)
    if not counts.roots:
        return AmbiguityVerdict.exact(0)
    for mode, build in ((UNCOUNTABLE, AmbiguityVerdict.uncountable),
                        (INFINITE, AmbiguityVerdict.infinite)):
        witness = _find_witness(counts, mode)
        if witness is not None:
            if not witness_is_valid(a, t, witness):
                raise AssertionError(
                    "internal witness failed its validity checks")
            return build(witness)
    n = counts.total(cap=K + 1)
    if n > K:
        return AmbiguityVerdict.at_least(K + 1)
    return AmbiguityVerdict.exact(n)
