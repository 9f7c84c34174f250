"""Command-line front end.

Exit codes: 0 success, 1 negative verdict (member/ambiguous false, empty
reporting a nonempty language, suite with failures), 2 bad input (parse
errors, missing files, violated preconditions).
"""

import argparse
import os
import sys

from . import formats, zoo
from .ambiguity import at_least_k, classify, emptiness, is_k_ambiguous
from .automata import (intersect, moore_reduction, restrict_initials,
                       single_initial, union)
from .errors import ParseError, TreeambError
from .games import solve
from .membership import build_game, leads, member
from .trees import graft_antichain, graft_node

_PARSERS = {
    ".mtree": formats.parse_mtree,
    ".chain": formats.parse_chain,
    ".pta": formats.parse_pta,
    ".fta": formats.parse_fta,
    ".ftree": formats.parse_ftree,
    ".game": formats.parse_game,
    ".moore": formats.parse_moore,
    ".straj": formats.parse_straj,
    ".run": formats.parse_run,
}


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise ParseError(path, 0, f"cannot read file: {e.strerror}")


def _load(path, kind):
    return _PARSERS[kind](_read(path), path)


def _write(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def _emit_pta(a, out):
    text = formats.serialize_pta(a)
    if out:
        _write(out, text)
    else:
        sys.stdout.write(text)


def _emit_mtree(t, out):
    text = formats.serialize_mtree(t)
    if out:
        _write(out, text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------- commands

def _cmd_validate(args):
    path = args.file
    if os.path.isdir(path):
        rep = formats.load_rep(path)
        print(f"ok: representation {rep.name} "
              f"({len(rep.fta.states)} shape states, {len(rep.subs)} trees)")
        return 0
    ext = os.path.splitext(path)[1]
    if ext not in _PARSERS:
        raise ParseError(path, 0, f"unknown format {ext!r} "
                                  f"(known: {' '.join(sorted(_PARSERS))})")
    _load(path, ext)
    print("ok")
    return 0


def _cmd_member(args):
    a = _load(args.automaton, ".pta")
    t = _load(args.tree, ".mtree")
    verdict = member(a, t)
    print("true" if verdict else "false")
    return 0 if verdict else 1


def _cmd_classify(args):
    a = _load(args.automaton, ".pta")
    t = _load(args.tree, ".mtree")
    verdict = classify(a, t, args.max_k)
    if args.json:
        print(formats.verdict_to_json(verdict))
    else:
        print(repr(verdict))
    return 0


def _cmd_ambiguous(args):
    a = _load(args.automaton, ".pta")
    verdict = is_k_ambiguous(a, args.k)
    print("true" if verdict else "false")
    return 0 if verdict else 1


def _cmd_empty(args):
    a = _load(args.automaton, ".pta")
    w = emptiness(a)
    if w is None:
        print("empty")
        return 0
    if args.witness:
        _write(args.witness, formats.serialize_mtree(w))
    print("nonempty")
    return 1


def _cmd_construct(args):
    if args.op == "union":
        _emit_pta(union(_load(args.inputs[0], ".pta"),
                        _load(args.inputs[1], ".pta")), args.out)
    elif args.op == "intersect":
        _emit_pta(intersect(_load(args.inputs[0], ".pta"),
                            _load(args.inputs[1], ".pta")), args.out)
    elif args.op == "single-init":
        _emit_pta(single_initial(_load(args.inputs[0], ".pta")), args.out)
    elif args.op == "restrict":
        a = _load(args.inputs[0], ".pta")
        qs = frozenset(args.inputs[1:])
        if not qs:
            raise ParseError(args.inputs[0], 0,
                             "restrict needs at least one state id")
        _emit_pta(restrict_initials(a, qs), args.out)
    elif args.op == "reduce":
        a2 = _load(args.inputs[0], ".pta")
        m = _load(args.inputs[1], ".moore")
        _emit_pta(moore_reduction(a2, m), args.out)
    else:   # graft
        t1 = _load(args.inputs[0], ".mtree")
        t2 = _load(args.inputs[1], ".mtree")
        if (args.at is None) == (args.chain is None):
            raise ParseError("graft", 0,
                             "graft needs exactly one of --at / --chain")
        if args.at is not None:
            node = "" if args.at == "-" else args.at
            _emit_mtree(graft_node(t1, t2, node), args.out)
        else:
            _emit_mtree(graft_antichain(t1, t2,
                                        _load(args.chain, ".chain")),
                        args.out)
    return 0


def _cmd_zoo(args):
    name = args.name
    if name == "neg-union":
        _emit_pta(zoo.zoo_neg_union(args.k if args.k is not None else 2),
                  args.out)
    elif name == "exists-a1":
        _emit_pta(zoo.zoo_exists_a1(), args.out)
    elif name == "complement-singleton":
        if not args.tree:
            raise ParseError(name, 0, "complement-singleton needs --tree")
        _emit_pta(zoo.zoo_complement_singleton(_load(args.tree, ".mtree")),
                  args.out)
    elif name == "lfa":
        _emit_pta(zoo.zoo_lfa(), args.out)
    elif name == "lfa-witness":
        if args.m is None:
            raise ParseError(name, 0, "lfa-witness needs --m")
        _emit_mtree(zoo.lfa_witness_tree(args.m, args.k or 0), args.out)
    elif name == "frak":
        if not (args.a0 and args.anb):
            raise ParseError(name, 0, "frak needs --a0 and --anb")
        _emit_pta(zoo.zoo_frak_scheme(_load(args.a0, ".pta"),
                                      _load(args.anb, ".pta")), args.out)
    elif name == "no-max":
        _emit_pta(zoo.zoo_no_max(), args.out)
    elif name == "perf":
        _emit_pta(zoo.zoo_perf(), args.out)
    elif name == "x-subset-ydown":
        _emit_pta(zoo.zoo_x_subset_ydown(), args.out)
    elif name == "free2":
        _emit_pta(zoo.zoo_free2(), args.out)
    elif name in ("rep-single", "rep-leaf-or-node", "rep-combs"):
        rep = {"rep-single": zoo.niwinski_rep_single,
               "rep-leaf-or-node": zoo.niwinski_rep_leaf_or_node,
               "rep-combs": zoo.niwinski_rep_combs}[name]()
        if not args.out:
            raise ParseError(name, 0, "representations need -o <directory>")
        formats.save_rep(rep, args.out)
        print(f"wrote {args.out}/")
    else:
        raise ParseError(name, 0, "unknown zoo entry")
    return 0


def _cmd_game(args):
    if args.gop == "build":
        a = _load(args.automaton, ".pta")
        t = _load(args.tree, ".mtree")
        g = build_game(a, t)
        if args.out:
            _write(args.out, formats.serialize_game(g.arena))
        else:
            sys.stdout.write(formats.serialize_game(g.arena))
        if args.dot:
            _write(args.dot, formats.game_to_dot(g.arena, solve(g.arena)))
        return 0
    arena = _load(args.game, ".game")
    analysis = solve(arena)
    for player, tag in (("A", "Automaton"), ("P", "Pathfinder")):
        print(f"{tag} wins {len(analysis.region[player])} vertices")
    if args.dot:
        _write(args.dot, formats.game_to_dot(arena, analysis))
    if arena.init is not None:
        winner = analysis.winner_of(arena.init)
        print(f"initial vertex won by "
              f"{'Automaton' if winner == 'A' else 'Pathfinder'}")
    return 0


def _cmd_leads(args):
    a = _load(args.automaton, ".pta")
    t0 = _load(args.t0, ".mtree")
    tprime = _load(args.tprime, ".mtree")
    _, _, raw_mach = _load(args.run, ".run")
    phi = formats.bind_run(raw_mach, a, tprime)
    strj = formats.bind_straj(_load(args.straj, ".straj"), a)
    v = leads(a, t0, strj, tprime, phi)
    print(v if v else "-")
    return 0


def _cmd_suite(_args):
    from .acceptance import run_suite
    results = run_suite()
    width = max(len(name) for name, _, _ in results)
    ok = True
    for name, passed, seconds in results:
        ok &= passed
        print(f"{name:<{width}}  {'PASS' if passed else 'FAIL'}  "
              f"{seconds:6.2f}s")
    print(f"{'suite':<{width}}  {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


# ------------------------------------------------------------ dispatch

def _build_parser():
    p = argparse.ArgumentParser(
        prog="treeamb",
        description="Parity tree automata over regular infinite trees: "
                    "membership games and run-cardinality classification.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("validate", help="parse and check a file or rep dir")
    s.add_argument("file")
    s.set_defaults(fn=_cmd_validate)

    s = sub.add_parser("member", help="is the tree accepted?")
    s.add_argument("-a", "--automaton", required=True)
    s.add_argument("-t", "--tree", required=True)
    s.set_defaults(fn=_cmd_member)

    s = sub.add_parser("classify", help="count accepting runs")
    s.add_argument("-a", "--automaton", required=True)
    s.add_argument("-t", "--tree", required=True)
    s.add_argument("--max-k", type=int, default=8)
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=_cmd_classify)

    s = sub.add_parser("ambiguous",
                       help="no tree has more than k accepting runs?")
    s.add_argument("-a", "--automaton", required=True)
    s.add_argument("-k", type=int, required=True)
    s.set_defaults(fn=_cmd_ambiguous)

    s = sub.add_parser("empty", help="is the language empty?")
    s.add_argument("-a", "--automaton", required=True)
    s.add_argument("--witness", help="write an accepted tree here")
    s.set_defaults(fn=_cmd_empty)

    s = sub.add_parser("construct", help="automaton and tree constructions")
    s.add_argument("op", choices=["union", "intersect", "single-init",
                                  "restrict", "reduce", "graft"])
    s.add_argument("inputs", nargs="+")
    s.add_argument("--at", help="graft node path (- for the root)")
    s.add_argument("--chain", help="graft antichain file")
    s.add_argument("-o", "--out")
    s.set_defaults(fn=_cmd_construct)

    s = sub.add_parser("zoo", help="stock automata and trees")
    s.add_argument("name")
    s.add_argument("--k", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--tree", help="tree input for complement-singleton")
    s.add_argument("--a0", help="component automaton for frak")
    s.add_argument("--anb", help="component automaton for frak")
    s.add_argument("-o", "--out")
    s.set_defaults(fn=_cmd_zoo)

    s = sub.add_parser("game", help="membership games")
    gsub = s.add_subparsers(dest="gop", required=True)
    b = gsub.add_parser("build")
    b.add_argument("-a", "--automaton", required=True)
    b.add_argument("-t", "--tree", required=True)
    b.add_argument("-o", "--out")
    b.add_argument("--dot")
    b.set_defaults(fn=_cmd_game)
    so = gsub.add_parser("solve")
    so.add_argument("-g", "--game", required=True)
    so.add_argument("--dot")
    so.set_defaults(fn=_cmd_game)

    s = sub.add_parser("leads", help="node where the rejected tree differs")
    s.add_argument("-a", "--automaton", required=True)
    s.add_argument("--t0", required=True)
    s.add_argument("--tprime", required=True)
    s.add_argument("--run", required=True)
    s.add_argument("--straj", required=True)
    s.set_defaults(fn=_cmd_leads)

    s = sub.add_parser("suite", help="run the acceptance criteria")
    s.set_defaults(fn=_cmd_suite)
    return p


def run(argv):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as e:
        print(e, file=sys.stderr)
        return 2
    except (TreeambError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run(sys.argv[1:]))
