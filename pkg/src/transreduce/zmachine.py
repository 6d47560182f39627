"""Z-transducers: binary input, one or two c's per symbol, a single final state.

Also the block code of the pair alphabet into {0,1}* and the compilers that
turn coded relations into Z-transducers.
"""

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, NamedTuple, Tuple

from .dot import to_dot
from .errors import ParseError, ReductionError
from .pcp import PcpInstance, index_letter
from .relation import Relation
from .words import as_word, read_lines

SYMBOLS = ("0", "1")
ZEdge = Tuple[str, str, int, str]


@dataclass(frozen=True)
class ZTransducer:
    states: Tuple[str, ...]
    transitions: FrozenSet[ZEdge]
    initial: str
    final: str

    def __post_init__(self):
        known = set(self.states)
        if len(known) != len(self.states):
            raise ValueError("repeated state name")
        if self.initial not in known or self.final not in known:
            raise ValueError("initial and final states must be declared")
        for p, a, b, q in self.transitions:
            if p not in known or q not in known:
                raise ValueError(f"transition {(p, a, b, q)} uses an undeclared state")
            if a not in SYMBOLS:
                raise ValueError(f"input symbol {a!r} is not 0 or 1")
            if b not in (1, 2):
                raise ValueError(f"output count {b} is not 1 or 2")
            if p == self.final:
                raise ValueError("no transition may leave the final state")

    @cached_property
    def delta(self) -> Dict[Tuple[str, str], List[Tuple[int, str]]]:
        table = defaultdict(list)
        for p, a, b, q in sorted(self.transitions):
            table[p, a].append((b, q))
        return dict(table)


class Analysis(NamedTuple):
    deterministic: bool
    complete: bool
    ambiguous: Tuple[Tuple[str, str], ...]
    missing: Tuple[Tuple[str, str], ...]


def analyze(zt: ZTransducer) -> Analysis:
    ambiguous, missing = [], []
    for q in zt.states:
        if q == zt.final:
            continue
        for a in SYMBOLS:
            k = len(zt.delta.get((q, a), ()))
            if k == 0:
                missing.append((q, a))
            elif k > 1:
                ambiguous.append((q, a))
    return Analysis(not ambiguous and not missing, not missing, tuple(ambiguous), tuple(missing))


def complete_machine(zt: ZTransducer, garbage: str = "garbage") -> ZTransducer:
    """Route every missing (state, symbol) to a non-accepting sink with output c."""
    missing = analyze(zt).missing
    if not missing:
        return zt
    while garbage in zt.states:
        garbage += "_"
    extra = {(q, a, 1, garbage) for q, a in missing}
    extra |= {(garbage, a, 1, garbage) for a in SYMBOLS}
    return ZTransducer(zt.states + (garbage,), zt.transitions | extra, zt.initial, zt.final)


def outputs(zt: ZTransducer, word: str) -> FrozenSet[int]:
    """All m such that (word, c^m) is recognized."""
    current = {(zt.initial, 0)}
    for a in word:
        current = {(q, m + b) for p, m in current for b, q in zt.delta.get((p, a), ())}
        if not current:
            break
    return frozenset(m for q, m in current if q == zt.final)


def accepts(zt: ZTransducer, pair) -> bool:
    word, count = pair
    return count in outputs(zt, word)


def run_path(zt: ZTransducer, word: str):
    """The unique run of a deterministic machine: list of (state, output) after each symbol.

    Stops early when the run reaches the final state or gets stuck.
    """
    p, total, trace = zt.initial, 0, []
    for a in word:
        nxt = zt.delta.get((p, a), ())
        if len(nxt) != 1:
            break
        b, p = nxt[0]
        total += b
        trace.append((p, total))
        if p == zt.final:
            break
    return trace


# coding ---------------------------------------------------------------------

@dataclass(frozen=True)
class Coding:
    """a -> 10^k1, b -> 10^(k+1)1, i_alpha -> 10^(k+1+alpha)1."""

    k: int
    n: int

    @classmethod
    def for_instance(cls, inst: PcpInstance) -> "Coding":
        return cls(1 + max(max(len(u), len(v)) for u, v in inst.pairs), inst.n)

    @cached_property
    def letter_map(self) -> Dict[str, str]:
        codes = {"a": "1" + "0" * self.k + "1", "b": "1" + "0" * (self.k + 1) + "1"}
        for alpha in range(1, self.n + 1):
            codes[index_letter(alpha)] = "1" + "0" * (self.k + 1 + alpha) + "1"
        return codes

    def delta(self, word) -> str:
        try:
            return "".join(self.letter_map[x] for x in as_word(word))
        except KeyError as exc:
            raise ValueError(f"letter {exc.args[0]!r} has no code") from None

    def chi(self, pair) -> Tuple[str, int]:
        word, m = pair
        coded = self.delta(word) + "0"
        return coded, m + len(coded)

    def decode(self, bits: str):
        """Inverse of delta on well-formed code sequences; None otherwise."""
        inverse = {v: k for k, v in self.letter_map.items()}
        out, i = [], 0
        while i < len(bits):
            if bits[i] != "1":
                return None
            j = bits.find("1", i + 1)
            if j < 0 or bits[i:j + 1] not in inverse:
                return None
            out.append(inverse[bits[i:j + 1]])
            i = j + 1
        return tuple(out)


def compile_relation(coding: Coding, rel: Relation, complete: bool = True) -> ZTransducer:
    """Z-transducer recognizing chi(O(rel)).

    Every transition (x, c^m) becomes a chain over delta(x) that outputs cc on
    its first m symbols and c on the rest; each final state reads the closing 0
    with output c into the single final state.
    """
    t = rel.machine
    states = [f"s{p}" for p in range(t.num_states)]
    trans = set()
    fresh = 0
    for p, x, m, q in sorted(t.transitions):
        if not x:
            raise ReductionError(f"transition with empty input (c^{m}) cannot be coded")
        code = coding.delta(x)
        if m > len(code):
            raise ReductionError(
                f"atom ({''.join(x)}, c^{m}) needs m <= |delta(x)| = {len(code)}; k={coding.k} is too small"
            )
        cur = f"s{p}"
        for i, bit in enumerate(code):
            if i == len(code) - 1:
                nxt = f"s{q}"
            else:
                nxt = f"t{fresh}"
                fresh += 1
                states.append(nxt)
            trans.add((cur, bit, 2 if i < m else 1, nxt))
            cur = nxt
    states.append("qf")
    trans |= {(f"s{f}", "0", 1, "qf") for f in t.finals}
    zt = ZTransducer(tuple(states), frozenset(trans), f"s{t.initial}", "qf")
    return complete_machine(zt) if complete else zt


def build_chi_l0(inst: PcpInstance) -> ZTransducer:
    """Deterministic complete machine for the coded L0.

    Reads one or more index codes (output |code|+1), then one or more letter
    codes (output |code|+2), then the closing 0.  The extra c of every code
    is emitted on its leading 1; the second extra c of a letter code is
    emitted on its closing 1, the first point where the zero count tells a
    letter code from an index code.
    """
    coding = Coding.for_instance(inst)
    k = coding.k
    top = k + 1 + inst.n
    letter_zeros = {k, k + 1}
    index_zeros = set(range(k + 2, top + 1))
    g = "garbage"
    trans = set()

    def counter(prefix, limit, on_one):
        for c in range(limit + 1):
            here = f"{prefix}{c}"
            trans.add((here, "0", 1, f"{prefix}{c + 1}" if c < limit else g))
            trans.add((here, "1", *on_one(c)))
            states.append(here)

    states = ["start", "after_index", "after_letter"]
    trans |= {
        ("start", "1", 2, "idx0"),
        ("start", "0", 1, g),
        ("after_index", "1", 2, "mix0"),
        ("after_index", "0", 1, g),
        ("after_letter", "1", 2, "let0"),
        ("after_letter", "0", 1, "qf"),
    }
    counter("idx", top, lambda c: (1, "after_index") if c in index_zeros else (1, g))
    counter(
        "mix",
        top,
        lambda c: (2, "after_letter") if c in letter_zeros
        else (1, "after_index") if c in index_zeros else (1, g),
    )
    counter("let", k + 1, lambda c: (2, "after_letter") if c in letter_zeros else (1, g))
    states += [g, "qf"]
    trans |= {(g, a, 1, g) for a in SYMBOLS}
    return ZTransducer(tuple(states), frozenset(trans), "start", "qf")


# text format ----------------------------------------------------------------

GRAMMAR = "'zstate <id>', 'zinit <id>', 'zfinal <id>' or 'ztrans <from> <0|1> <1|2> <to>'"


def dump_zt(zt: ZTransducer) -> str:
    lines = [f"zstate {q}" for q in zt.states]
    lines += [f"zinit {zt.initial}", f"zfinal {zt.final}"]
    order = {q: i for i, q in enumerate(zt.states)}
    for p, a, b, q in sorted(zt.transitions, key=lambda e: (order[e[0]], e[1], e[2], order[e[3]])):
        lines.append(f"ztrans {p} {a} {b} {q}")
    return "\n".join(lines) + "\n"


def parse_zt(path) -> ZTransducer:
    states, trans = [], set()
    initial = final = None

    def declare(q):
        if q not in states:
            states.append(q)

    for no, line in read_lines(path):
        f = line.split()
        if f[0] == "zstate" and len(f) == 2:
            declare(f[1])
        elif f[0] == "zinit" and len(f) == 2 and initial is None:
            initial = f[1]
            declare(f[1])
        elif f[0] == "zfinal" and len(f) == 2 and final is None:
            final = f[1]
            declare(f[1])
        elif f[0] == "ztrans" and len(f) == 5 and f[2] in SYMBOLS and f[3] in ("1", "2"):
            declare(f[1])
            declare(f[4])
            trans.add((f[1], f[2], int(f[3]), f[4]))
        else:
            raise ParseError(path, no, line, GRAMMAR)
    if initial is None or final is None:
        raise ParseError(path, 0, "", "one 'zinit <id>' and one 'zfinal <id>' line")
    try:
        return ZTransducer(tuple(states), frozenset(trans), initial, final)
    except ValueError as exc:
        raise ParseError(path, 0, "", f"a well-formed Z-transducer ({exc})") from None


def zt_to_dot(zt: ZTransducer, name="ztransducer") -> str:
    edges = [(p, f"{a}:{'c' * b}", q) for p, a, b, q in sorted(zt.transitions)]
    return to_dot(name, zt.states, [zt.initial], {zt.final}, edges)
