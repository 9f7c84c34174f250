"""Finite parity games with max-parity winning condition.

Vertices are owned by the Automaton player ("A", wants the maximal color
seen infinitely often to be even) or the Pathfinder ("P", wants it odd).
A declared sink loses for its owner.  solve() is a recursive attractor
decomposition; solve_oracle() recomputes both regions with progress
measures and exists purely as an independent cross-check.
"""

import sys
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass

from .errors import IncompleteStrategy, MalformedArena

AUTOMATON = "A"
PATHFINDER = "P"


def opponent(player):
    return PATHFINDER if player == AUTOMATON else AUTOMATON


@dataclass
class ParityGameArena:
    name: str
    owner: dict      # vertex -> "A" | "P"
    color: dict      # vertex -> nonnegative int
    edges: dict      # vertex -> tuple of successors; order breaks ties
    sinks: frozenset
    init: object = None

    @property
    def vertices(self):
        return set(self.owner)

    def check(self):
        for v, o in self.owner.items():
            if o not in (AUTOMATON, PATHFINDER):
                raise MalformedArena(f"vertex {v!r} has owner {o!r}")
            if v not in self.color or self.color[v] < 0:
                raise MalformedArena(f"vertex {v!r} lacks a valid color")
            succ = self.edges.get(v, ())
            if v in self.sinks:
                if succ:
                    raise MalformedArena(f"sink {v!r} has outgoing edges")
            elif not succ:
                raise MalformedArena(f"vertex {v!r} has no move and is not a sink")
            for w in succ:
                if w not in self.owner:
                    raise MalformedArena(f"edge {v!r} -> {w!r} dangling")
        if self.init is not None and self.init not in self.owner:
            raise MalformedArena(f"initial vertex {self.init!r} undeclared")
        return self


@dataclass
class WinningAnalysis:
    arena: ParityGameArena
    region: dict     # player -> frozenset of vertices
    strategy: dict   # player -> {vertex: chosen successor}

    def winner_of(self, v):
        return AUTOMATON if v in self.region[AUTOMATON] else PATHFINDER


def _completed(arena):
    """Replace sinks by a gadget self-loop that loses for the sink's owner."""
    owner = dict(arena.owner)
    color = dict(arena.color)
    edges = {v: tuple(arena.edges.get(v, ())) for v in arena.owner}
    gadgets = set()
    for v in arena.sinks:
        g = ("__lost__", v)
        gadgets.add(g)
        owner[g] = arena.owner[v]
        color[g] = 1 if arena.owner[v] == AUTOMATON else 0
        edges[g] = (g,)
        edges[v] = (g,)
    return owner, color, edges, gadgets


def _preds(vertices, edges):
    # iterate in a fixed order so strategy tie-breaking is reproducible
    p = {v: [] for v in vertices}
    for v in sorted(vertices, key=str):
        for w in edges[v]:
            if w in vertices:
                p[w].append(v)
    return p

def _attract(vertices, edges, preds, owner, player, target):
    """Attractor of target for player inside the given vertex set.

    Returns the attracted set and the player's pulling strategy on the
    newly attracted vertices (first edge into the set wins ties).
    preds is for the full arena and is filtered against vertices here.
    """
    attr = set(target)
    strat = {}
    degree = {}
    queue = deque(sorted(target, key=str))
    while queue:
        u = queue.popleft()
        for v in preds[u]:
            if v in attr or v not in vertices:
                continue
            if owner[v] == player:
                # choose the pulling edge before admitting v, so a self-loop
                # can never masquerade as progress toward the target
                strat[v] = next(w for w in edges[v] if w in attr and w in vertices)
                attr.add(v)
                queue.append(v)
            else:
                if v not in degree:
                    degree[v] = sum(1 for w in edges[v] if w in vertices)
                degree[v] -= 1
                if degree[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strat


def _zielonka(vertices, edges, preds, owner, color):
    if not vertices:
        return {AUTOMATON: set(), PATHFINDER: set()}, {AUTOMATON: {}, PATHFINDER: {}}
    c = max(color[v] for v in vertices)
    sigma = AUTOMATON if c % 2 == 0 else PATHFINDER
    opp = opponent(sigma)
    target = {v for v in vertices if color[v] == c}
    attr, pull = _attract(vertices, edges, preds, owner, sigma, target)
    sub_regions, sub_strats = _zielonka(vertices - attr, edges, preds, owner, color)
    if not sub_regions[opp]:
        strat = dict(sub_strats[sigma])
        strat.update(pull)
        for v in sorted(target, key=str):
            if owner[v] == sigma and v not in strat:
                strat[v] = next(w for w in edges[v] if w in vertices)
        return ({sigma: set(vertices), opp: set()},
                {sigma: strat, opp: {}})
    trap, pull2 = _attract(vertices, edges, preds, owner, opp, sub_regions[opp])
    regions2, strats2 = _zielonka(vertices - trap, edges, preds, owner, color)
    opp_strat = dict(sub_strats[opp])
    opp_strat.update(pull2)
    opp_strat.update(strats2[opp])
    return ({sigma: regions2[sigma], opp: regions2[opp] | trap},
            {sigma: strats2[sigma], opp: opp_strat})


@contextmanager
def _deep_recursion(n):
    old = sys.getrecursionlimit()
    if n > old:
        sys.setrecursionlimit(n)
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def solve(arena):
    """Winning regions and positional strategies, by attractor decomposition."""
    arena.check()
    owner, color, edges, gadgets = _completed(arena)
    vertices = set(owner)
    preds = _preds(vertices, edges)
    with _deep_recursion(10000 + 10 * len(vertices)):
        regions, strats = _zielonka(vertices, edges, preds, owner, color)
    return _project(arena, gadgets, regions, strats)


def _project(arena, gadgets, regions, strats):
    region = {p: frozenset(v for v in regions[p] if v not in gadgets)
              for p in (AUTOMATON, PATHFINDER)}
    strategy = {}
    for p in (AUTOMATON, PATHFINDER):
        strategy[p] = {v: w for v, w in strats[p].items()
                       if v not in gadgets and v not in arena.sinks
                       and w not in gadgets}
    return WinningAnalysis(arena, region, strategy)


# --------------------------------------------------------------------------
# Progress-measure solver (independent oracle)

_TOP = "TOP"


def _spm_one_side(vertices, edges, owner, color, player):
    """Vertices from which `player` wins when colors of their parity are good.

    Standard lifting of small progress measures; written for the player who
    wants the maximal recurring color to be even, so the Pathfinder side is
    handled by the caller via a color shift.
    """
    odd = sorted({color[v] for v in vertices if color[v] % 2 == 1}, reverse=True)
    cap = {p: sum(1 for v in vertices if color[v] == p) for p in odd}
    zero = tuple(0 for _ in odd)
    idx = {p: i for i, p in enumerate(odd)}

    def prog(mw, p):
        if mw == _TOP:
            return _TOP
        # keep components for odd priorities >= p, zero the rest
        upto = -1
        for i, q in enumerate(odd):
            if q >= p:
                upto = i
        pref = list(mw[:upto + 1])
        if p % 2 == 0:
            return tuple(pref) + zero[upto + 1:]
        i = idx[p]
        while i >= 0:
            if pref[i] < cap[odd[i]]:
                pref[i] += 1
                return tuple(pref) + zero[upto + 1:]
            pref[i] = 0
            i -= 1
        return _TOP

    def less(a, b):
        if b == _TOP:
            return a != _TOP
        if a == _TOP:
            return False
        return a < b

    rho = {v: zero for v in vertices}
    preds = _preds(vertices, edges)
    queue = deque(sorted(vertices, key=str))
    queued = set(vertices)
    while queue:
        v = queue.popleft()
        queued.discard(v)
        vals = [prog(rho[w], color[v]) for w in edges[v] if w in vertices]
        if owner[v] == player:
            new = min(vals, key=lambda m: (m == _TOP, m if m != _TOP else ()))
        else:
            new = _TOP if _TOP in vals else max(vals)
        if less(rho[v], new):
            rho[v] = new
            for u in preds[v]:
                if u not in queued:
                    queue.append(u)
                    queued.add(u)
    win = {v for v in vertices if rho[v] != _TOP}
    strat = {}
    for v in win:
        if owner[v] == player:
            best, best_w = None, None
            for w in edges[v]:
                if w not in vertices:
                    continue
                m = prog(rho[w], color[v])
                if m == _TOP:
                    continue
                if best is None or m < best:
                    best, best_w = m, w
            strat[v] = best_w
    return win, strat


def solve_oracle(arena):
    """Same contract as solve, computed with progress measures twice over."""
    arena.check()
    owner, color, edges, gadgets = _completed(arena)
    vertices = set(owner)
    win_a, strat_a = _spm_one_side(vertices, edges, owner, color, AUTOMATON)
    shifted = {v: c + 1 for v, c in color.items()}
    win_p, strat_p = _spm_one_side(vertices, edges, owner, shifted, PATHFINDER)
    if win_a | win_p != vertices or win_a & win_p:
        raise MalformedArena("progress measure passes do not partition the arena")
    return _project(arena, gadgets,
                    {AUTOMATON: win_a, PATHFINDER: win_p},
                    {AUTOMATON: strat_a, PATHFINDER: strat_p})


# --------------------------------------------------------------------------
# Strategy verification

def strongly_connected_components(vertices, succ):
    """Tarjan, iterative.  succ maps a vertex to an iterable of successors."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    sccs = []
    counter = [0]
    for root in vertices:
        if root in index:
            continue
        work = [(root, iter([w for w in succ(root) if w in vertices]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter([u for u in succ(w) if u in vertices])))
                    advanced = True
                    break
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


def has_cycle_with_max_color(vertices, succ, color, c):
    """Is there a cycle, inside the given set, whose maximal color is exactly c?"""
    sub = {v for v in vertices if color[v] <= c}
    marked = {v for v in sub if color[v] == c}
    if not marked:
        return False
    for comp in strongly_connected_components(sub, lambda v: (w for w in succ(v) if w in sub)):
        if not comp & marked:
            continue
        if len(comp) > 1:
            return True
        v = next(iter(comp))
        if v in set(succ(v)):
            return True
    return False


def verify_strategy(arena, player, strategy, region=None):
    """Check that a positional strategy wins for player on the claimed region.

    Follows strategy edges at the player's vertices and all edges at the
    opponent's; fails if a reachable cycle has the wrong max-color parity or
    a reachable sink belongs to the player.
    """
    arena.check()
    start = set(region) if region is not None else set(strategy)
    seen = set()
    queue = deque(start)
    restricted = {}
    while queue:
        v = queue.popleft()
        if v in seen:
            continue
        seen.add(v)
        if v in arena.sinks:
            if arena.owner[v] == player:
                return False
            restricted[v] = ()
            continue
        if arena.owner[v] == player:
            if v not in strategy:
                raise IncompleteStrategy(f"no move chosen at {v!r}")
            w = strategy[v]
            if w not in arena.edges[v]:
                raise IncompleteStrategy(f"chosen move {v!r} -> {w!r} is not an edge")
            restricted[v] = (w,)
        else:
            restricted[v] = arena.edges[v]
        queue.extend(restricted[v])
    bad = 1 if player == AUTOMATON else 0
    for c in sorted({arena.color[v] for v in seen}):
        if c % 2 == bad and has_cycle_with_max_color(
                seen, lambda v: restricted[v], arena.color, c):
            return False
    return True


# --------------------------------------------------------------------------
# DOT rendering

def to_dot(arena, analysis=None):
    """GraphViz text: box for Automaton vertices, diamond for Pathfinder,
    fill by winning region, strategy edges bold."""
    names = {v: f"v{i}" for i, v in enumerate(sorted(arena.owner, key=str))}
    lines = [f'digraph "{arena.name}" {{']
    chosen = set()
    if analysis is not None:
        for p in (AUTOMATON, PATHFINDER):
            chosen.update((v, w) for v, w in analysis.strategy[p].items())
    for v in sorted(arena.owner, key=str):
        shape = "box" if arena.owner[v] == AUTOMATON else "diamond"
        attrs = [f"shape={shape}", f'label="{v}:{arena.color[v]}"']
        if analysis is not None:
            fill = "lightblue" if v in analysis.region[AUTOMATON] else "lightpink"
            attrs.append(f'style=filled,fillcolor={fill}')
        lines.append(f'  {names[v]} [{", ".join(attrs)}];')
    for v in sorted(arena.owner, key=str):
        for w in arena.edges.get(v, ()):
            style = ' [style=bold]' if (v, w) in chosen else ""
            lines.append(f'  {names[v]} -> {names[w]}{style};')
    lines.append("}")
    return "\n".join(lines) + "\n"
