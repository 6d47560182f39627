"""Command-line front end.

Exit status: 0 property verified or verdict produced, 1 verified false,
2 inconclusive within bounds, 3 input error.
"""

import argparse
import sys
from fractions import Fraction

from . import defense, pcp, product, regular, relation, substitution, zmachine
from .dot import to_dot
from .errors import ParseError, ReductionError
from .words import format_word

OK, FALSE, INCONCLUSIVE, INPUT_ERROR = 0, 1, 2, 3


class InputError(Exception):
    pass


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _pair_text(pair):
    word, count = pair
    return f"({format_word(word)}, c^{count})"


def _bits(word, what="word"):
    word = "" if word == "-" else word
    if set(word) - {"0", "1"}:
        raise InputError(f"{what} must be over {{0,1}} (use '-' for the empty word)")
    return word


# pcp ------------------------------------------------------------------------

def cmd_pcp_solve(args):
    inst = pcp.parse_pcp(args.file)
    print(f"pairs {inst.n} max-len {args.max_len}")
    seq = pcp.brute_force_pcp(inst, args.max_len)
    if seq is None:
        print(f"no solution up to length {args.max_len}")
        return INCONCLUSIVE
    print("solution " + ",".join(map(str, seq)))
    return OK


def cmd_pcp_scan(args):
    inst = pcp.parse_pcp(args.file)
    print(f"pairs {inst.n} max-seq {args.max_seq} max-word {args.max_word}")
    violations = pcp.scan_claim(inst, args.max_seq, args.max_word)
    for v in violations:
        seq = ",".join(map(str, v.seq))
        print(f"violation side {v.side} seq {seq} w1 {v.w1} case {v.case} expected {v.expected} got {v.actual}")
    print(f"violations {len(violations)}")
    return FALSE if violations else OK


def _parse_seq(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"bad index sequence {text!r}; expected e.g. 1,2,1") from None


def cmd_pcp_witness(args):
    inst = pcp.parse_pcp(args.file)
    seq = _parse_seq(args.seq)
    pair = pcp.solution_witness(inst, seq)
    l0 = pcp.build_l0(inst)
    flags = {
        "L0": relation.contains(l0, pair),
        "Lu": relation.contains(pcp.build_side(inst, "u").L, pair),
        "Lv": relation.contains(pcp.build_side(inst, "v").L, pair),
    }
    print("witness " + _pair_text(pair))
    for name, flag in flags.items():
        print(f"in {name}: {'yes' if flag else 'no'}")
    return OK if flags == {"L0": True, "Lu": False, "Lv": False} else FALSE


# z-transducers --------------------------------------------------------------

def cmd_zt_build_chi(args):
    inst = pcp.parse_pcp(args.file)
    coding = zmachine.Coding.for_instance(inst)
    if args.side == "l0":
        zt = zmachine.build_chi_l0(inst)
    else:
        zt = zmachine.compile_relation(coding, pcp.build_side(inst, args.side).L)
    info = zmachine.analyze(zt)
    print(f"k {coding.k} side {args.side} states {len(zt.states)} transitions {len(zt.transitions)}")
    print(f"deterministic {info.deterministic} complete {info.complete}")
    _write(args.output, zmachine.dump_zt(zt))
    return OK


def cmd_zt_run(args):
    zt = zmachine.parse_zt(args.ztfile)
    word = _bits(args.word)
    outs = sorted(zmachine.outputs(zt, word))
    print(f"word {word or '-'} outputs {{{', '.join(map(str, outs))}}}")
    return OK


# defense systems ------------------------------------------------------------

def cmd_nds_search(args):
    nds = defense.parse_nds(args.file)
    print(f"lines {nds.s} max-len {args.max_len}")
    word = defense.search_critical(nds, args.max_len)
    if word is None:
        print(f"no critical word up to length {args.max_len}")
        return INCONCLUSIVE
    print(f"critical {word}")
    return OK


def cmd_nds_prob(args):
    nds = defense.parse_nds(args.file)
    word = _bits(args.word)
    dist = defense.attack_probabilities(nds, word)
    print(f"lines {nds.s} word {word or '-'}")
    for cfg in sorted(dist, key=lambda c: c.encode(nds.s)):
        print(f"node {cfg.node} line {cfg.line} code {cfg.encode(nds.s)} p {dist[cfg]}")
    print(f"total {sum(dist.values(), Fraction(0))}")
    print("critical" if not defense.defends_origin(frozenset(dist)) else "node 0 defended")
    return OK


# reductions -----------------------------------------------------------------

def cmd_reduce_zt_to_nds(args):
    c, d = zmachine.parse_zt(args.c), zmachine.parse_zt(args.d)
    prod = product.build_product(c, d)
    print(f"lines {prod.nds.s} rules {len(prod.nds.rules)}")
    _write(args.output, defense.dump_nds(prod.nds))
    return OK


def cmd_reduce_check(args):
    c, d = zmachine.parse_zt(args.c), zmachine.parse_zt(args.d)
    rep = product.check_correspondence(c, d, args.bound)
    print("\n".join(rep.lines()))
    return {"consistent": OK, "violated": FALSE, "inconclusive": INCONCLUSIVE}[rep.status]


def cmd_reduce_nds_to_subs(args):
    nds = defense.parse_nds(args.file)
    phi, xi = substitution.build_substitutions(nds)
    ws = substitution.WordSystem(nds.s)
    print(f"lines {nds.s} w {ws.w}")
    _write(args.output[0], regular.dump_substitution(phi))
    _write(args.output[1], regular.dump_substitution(xi))
    return OK


def cmd_subs_decide(args):
    nds = defense.parse_nds(args.file)
    verdict = substitution.decide_equivalence(nds, probe_len=args.probe_len)
    print("\n".join(verdict.lines()))
    return OK if verdict.consistent else FALSE


def cmd_subs_witness(args):
    nds = defense.parse_nds(args.file)
    rep = substitution.critical_witness(nds, _bits(args.critical, "critical word"))
    print("\n".join(rep.lines()))
    return OK if rep.in_phi and not rep.in_xi and rep.discipline_ok else FALSE


# export ---------------------------------------------------------------------

def _sniff(path):
    with open(path) as fh:
        for raw in fh:
            f = raw.split("#", 1)[0].split()
            if not f:
                continue
            if f[0].startswith("z"):
                return "zt"
            if f[0] in ("lines", "rule"):
                return "nds"
            if f[0] == "sub":
                return "sub"
            if f[0] == "pair":
                return "pcp"
            if f[0] == "trans":
                return "transducer" if len(f) == 5 else "nfa"
    return "nfa"


def _nds_to_dot(nds):
    edges = [(r.k, f"{r.a}:{r.z:+d}:{r.p}", r.j) for r in nds.rules]
    return to_dot("nds", range(1, nds.s + 1), [1], set(), edges)


def cmd_export(args):
    kind = _sniff(args.file)
    loaders = {
        "zt": (zmachine.parse_zt, zmachine.dump_zt, zmachine.zt_to_dot),
        "nds": (defense.parse_nds, defense.dump_nds, _nds_to_dot),
        "sub": (regular.parse_substitution, regular.dump_substitution, None),
        "pcp": (pcp.parse_pcp, pcp.dump_pcp, None),
        "transducer": (relation.parse_transducer, relation.dump_transducer, relation.transducer_to_dot),
        "nfa": (regular.parse_nfa, regular.dump_nfa, regular.nfa_to_dot),
    }
    load, dump, dot = loaders[kind]
    obj = load(args.file)
    if args.format == "text":
        _write(args.output, dump(obj))
    elif dot is None:
        raise InputError(f"{kind} files have no graph form; use --format text")
    else:
        _write(args.output, dot(obj))
    return OK


def build_parser():
    p = argparse.ArgumentParser(prog="transreduce", description=__doc__.splitlines()[0])
    top = p.add_subparsers(dest="group", required=True)

    g = top.add_parser("pcp").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("solve")
    s.add_argument("file")
    s.add_argument("--max-len", type=int, required=True)
    s.set_defaults(func=cmd_pcp_solve)
    s = g.add_parser("scan")
    s.add_argument("file")
    s.add_argument("--max-seq", type=int, required=True)
    s.add_argument("--max-word", type=int, required=True)
    s.set_defaults(func=cmd_pcp_scan)
    s = g.add_parser("witness")
    s.add_argument("file")
    s.add_argument("--seq", required=True)
    s.set_defaults(func=cmd_pcp_witness)

    g = top.add_parser("zt").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("build-chi")
    s.add_argument("file")
    s.add_argument("--side", choices=("u", "v", "l0"), required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_zt_build_chi)
    s = g.add_parser("run")
    s.add_argument("ztfile")
    s.add_argument("--word", required=True)
    s.set_defaults(func=cmd_zt_run)

    g = top.add_parser("nds").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("search")
    s.add_argument("file")
    s.add_argument("--max-len", type=int, required=True)
    s.set_defaults(func=cmd_nds_search)
    s = g.add_parser("prob")
    s.add_argument("file")
    s.add_argument("--word", required=True)
    s.set_defaults(func=cmd_nds_prob)

    g = top.add_parser("reduce").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("zt-to-nds")
    s.add_argument("c")
    s.add_argument("d")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_reduce_zt_to_nds)
    s = g.add_parser("check")
    s.add_argument("c")
    s.add_argument("d")
    s.add_argument("--bound", type=int, required=True)
    s.set_defaults(func=cmd_reduce_check)
    s = g.add_parser("nds-to-subs")
    s.add_argument("file")
    s.add_argument("-o", "--output", nargs=2, required=True, metavar=("PHI", "XI"))
    s.set_defaults(func=cmd_reduce_nds_to_subs)

    g = top.add_parser("subs").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("decide")
    s.add_argument("file")
    s.add_argument("--probe-len", type=int, default=substitution.DEFAULT_PROBE_LEN)
    s.set_defaults(func=cmd_subs_decide)
    s = g.add_parser("witness")
    s.add_argument("file")
    s.add_argument("--critical", required=True)
    s.set_defaults(func=cmd_subs_witness)

    g = top.add_parser("export").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("dot")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.add_argument("--format", choices=("dot", "text"), default="dot")
    s.set_defaults(func=cmd_export)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        return args.func(args)
    except (ParseError, ReductionError, InputError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
