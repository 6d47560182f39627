"""Rational relations over (input word) x c* with the output kept as a count.

A :class:`Relation` is a finite transducer whose transitions carry an input
word and a number of ``c``'s.  No transition may be labelled (empty, 0); this
progress condition makes membership a finite search over
(input position, output so far, state).
"""

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import FrozenSet, NamedTuple, Tuple

from .dot import to_dot
from .errors import ParseError
from .regular import Nfa, NfaBuilder
from .words import Word, as_word, format_word, parse_word, read_lines


class UnaryPair(NamedTuple):
    input: Word
    count: int

    @classmethod
    def of(cls, word, count):
        if count < 0:
            raise ValueError("count must be >= 0")
        return cls(as_word(word), count)


Edge = Tuple[int, Word, int, int]


@dataclass(frozen=True)
class Transducer:
    alphabet: Tuple[str, ...]
    num_states: int
    transitions: FrozenSet[Edge]
    initial: int
    finals: FrozenSet[int]

    def __post_init__(self):
        if not 0 <= self.initial < self.num_states:
            raise ValueError("initial state out of range")
        if not self.finals <= set(range(self.num_states)):
            raise ValueError("final state out of range")
        for p, word, m, q in self.transitions:
            if not (0 <= p < self.num_states and 0 <= q < self.num_states):
                raise ValueError(f"transition {(p, word, m, q)} leaves the state range")
            if m < 0:
                raise ValueError("negative output count")
            if not word and m == 0:
                raise ValueError("transition labelled (empty, 0) violates the progress condition")
            bad = set(word) - set(self.alphabet)
            if bad:
                raise ValueError(f"letters {sorted(bad)} not in alphabet")

    @cached_property
    def outgoing(self):
        table = defaultdict(list)
        for p, word, m, q in sorted(self.transitions):
            table[p].append((word, m, q))
        return dict(table)


class _Builder:
    """Scratch transducer allowing (empty, 0) moves, labelled with ``None``."""

    def __init__(self):
        self.n = 0
        self.edges = []
        self.finals = set()

    def state(self):
        self.n += 1
        return self.n - 1

    def embed(self, t: Transducer):
        base = self.n
        self.n += t.num_states
        for p, word, m, q in t.transitions:
            self.edges.append((p + base, word, m, q + base))
        return base

    def eps(self, p, q):
        self.edges.append((p, None, 0, q))

    def build(self, alphabet, initial) -> Transducer:
        eps = defaultdict(set)
        for p, word, _, q in self.edges:
            if word is None:
                eps[p].add(q)
        moves = defaultdict(set)
        for p, word, m, q in self.edges:
            if word is not None:
                moves[p].add((word, m, q))
        trans, finals = set(), set()
        for p in range(self.n):
            closure = {p}
            stack = [p]
            while stack:
                for q in eps[stack.pop()]:
                    if q not in closure:
                        closure.add(q)
                        stack.append(q)
            for r in closure:
                trans.update((p, word, m, q) for word, m, q in moves[r])
            if closure & self.finals:
                finals.add(p)
        return _trim(alphabet, self.n, trans, initial, finals)


def _trim(alphabet, n, trans, initial, finals) -> Transducer:
    fwd, bwd = defaultdict(set), defaultdict(set)
    for p, _, _, q in trans:
        fwd[p].add(q)
        bwd[q].add(p)
    coreach = set(finals)
    stack = list(finals)
    while stack:
        for p in bwd[stack.pop()]:
            if p not in coreach:
                coreach.add(p)
                stack.append(p)
    order = [initial]
    seen = {initial}
    i = 0
    while i < len(order):
        for q in sorted(fwd[order[i]]):
            if q in coreach and q not in seen:
                seen.add(q)
                order.append(q)
        i += 1
    index = {p: i for i, p in enumerate(order)}
    return Transducer(
        alphabet=tuple(alphabet),
        num_states=len(order),
        transitions=frozenset(
            (index[p], w, m, index[q]) for p, w, m, q in trans if p in index and q in index
        ),
        initial=0,
        finals=frozenset(index[p] for p in finals if p in index),
    )


@dataclass(frozen=True)
class Relation:
    """Handle on a transducer; its meaning is the set of pairs it recognizes."""

    machine: Transducer

    @property
    def alphabet(self):
        return self.machine.alphabet

    def contains(self, pair) -> bool:
        return contains(self, pair)

    def __or__(self, other):
        return union(self, other)

    def __add__(self, other):
        return concat(self, other)


def _alphabet(alphabet):
    alphabet = tuple(alphabet)
    if len(set(alphabet)) != len(alphabet):
        raise ValueError("repeated letter in alphabet")
    return alphabet


def atom(word, count: int, alphabet) -> Relation:
    """The singleton relation {(word, c^count)}."""
    word = as_word(word)
    alphabet = _alphabet(alphabet)
    if count < 0:
        raise ValueError("count must be >= 0")
    if not word and count == 0:
        raise ValueError("(empty, 0) atom: use identity() for the unit relation")
    if set(word) - set(alphabet):
        raise ValueError(f"word {word} not over alphabet {alphabet}")
    t = Transducer(alphabet, 2, frozenset({(0, word, count, 1)}), 0, frozenset({1}))
    return Relation(t)


def identity(alphabet) -> Relation:
    """{(empty, empty)}, the unit of concatenation."""
    return Relation(Transducer(_alphabet(alphabet), 1, frozenset(), 0, frozenset({0})))


def empty(alphabet) -> Relation:
    return Relation(Transducer(_alphabet(alphabet), 1, frozenset(), 0, frozenset()))


def _same_alphabet(*rels):
    alphas = {r.alphabet for r in rels}
    if len(alphas) != 1:
        raise ValueError(f"alphabet mismatch: {sorted(alphas)}")
    return rels[0].alphabet


def union(a: Relation, b: Relation) -> Relation:
    alphabet = _same_alphabet(a, b)
    bld = _Builder()
    start = bld.state()
    for r in (a, b):
        base = bld.embed(r.machine)
        bld.eps(start, base + r.machine.initial)
        bld.finals |= {base + f for f in r.machine.finals}
    return Relation(bld.build(alphabet, start))


def concat(a: Relation, b: Relation) -> Relation:
    alphabet = _same_alphabet(a, b)
    bld = _Builder()
    ba = bld.embed(a.machine)
    bb = bld.embed(b.machine)
    for f in a.machine.finals:
        bld.eps(ba + f, bb + b.machine.initial)
    bld.finals |= {bb + f for f in b.machine.finals}
    return Relation(bld.build(alphabet, ba + a.machine.initial))


def star(a: Relation) -> Relation:
    bld = _Builder()
    hub = bld.state()
    base = bld.embed(a.machine)
    bld.eps(hub, base + a.machine.initial)
    for f in a.machine.finals:
        bld.eps(base + f, hub)
    bld.finals.add(hub)
    return Relation(bld.build(a.alphabet, hub))


def plus(a: Relation) -> Relation:
    return concat(a, star(a))


def union_all(rels) -> Relation:
    rels = list(rels)
    if not rels:
        raise ValueError("union of no relations")
    return reduce(union, rels)


def concat_all(rels) -> Relation:
    return reduce(concat, rels)


def combine(kind: str, *args: Relation) -> Relation:
    arity = {"union": 2, "concat": 2, "star": 1, "plus": 1}
    if kind not in arity:
        raise ValueError(f"unknown combinator {kind!r}")
    if len(args) != arity[kind]:
        raise ValueError(f"{kind} takes {arity[kind]} argument(s), got {len(args)}")
    return {"union": union, "concat": concat, "star": star, "plus": plus}[kind](*args)


def contains(rel: Relation, pair) -> bool:
    """Decide (word, c^m) in O(rel) by search over (position, count, state)."""
    word, count = as_word(pair[0]), pair[1]
    t = rel.machine
    n = len(word)
    start = (0, 0, t.initial)
    seen = {start}
    stack = [start]
    while stack:
        pos, acc, p = stack.pop()
        if pos == n and acc == count and p in t.finals:
            return True
        for x, m, q in t.outgoing.get(p, ()):
            k = len(x)
            if acc + m > count or pos + k > n or word[pos:pos + k] != x:
                continue
            nxt = (pos + k, acc + m, q)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


def input_language(rel: Relation) -> Nfa:
    """Automaton for {w | (w, y) in O(rel) for some y}."""
    t = rel.machine
    b = NfaBuilder(t.alphabet)
    for _ in range(t.num_states):
        b.state()
    b.initials.add(t.initial)
    b.finals |= t.finals
    for p, word, _, q in sorted(t.transitions):
        b.add_word(p, word, q)
    return b.build(t.alphabet)


# text format ----------------------------------------------------------------

GRAMMAR = "'alphabet <letter>...', 'state <id>', 'init <id>', 'final <id>' or 'trans <from> <input-word|-> <count> <to>'"


def dump_transducer(rel: Relation) -> str:
    t = rel.machine
    lines = ["alphabet " + " ".join(t.alphabet)]
    lines += [f"state {p}" for p in range(t.num_states)]
    lines.append(f"init {t.initial}")
    lines += [f"final {p}" for p in sorted(t.finals)]
    lines += [f"trans {p} {format_word(w)} {m} {q}" for p, w, m, q in sorted(t.transitions)]
    return "\n".join(lines) + "\n"


def parse_transducer(path) -> Relation:
    ids = {}
    alphabet = []
    trans = set()
    finals = set()
    initial = None

    def sid(token):
        return ids.setdefault(token, len(ids))

    for no, line in read_lines(path):
        f = line.split()
        try:
            if f[0] == "alphabet" and len(f) >= 2:
                alphabet += [x for x in f[1:] if x not in alphabet]
            elif f[0] == "state" and len(f) == 2:
                sid(f[1])
            elif f[0] == "init" and len(f) == 2 and initial is None:
                initial = sid(f[1])
            elif f[0] == "final" and len(f) == 2:
                finals.add(sid(f[1]))
            elif f[0] == "trans" and len(f) == 5:
                m = int(f[3])
                if m < 0:
                    raise ValueError
                trans.add((sid(f[1]), parse_word(f[2], alphabet), m, sid(f[4])))
            else:
                raise ValueError
        except ValueError:
            raise ParseError(path, no, line, GRAMMAR) from None
    if initial is None:
        raise ParseError(path, 0, "", "an 'init <id>' line")
    for _, w, _, _ in trans:
        alphabet += [x for x in w if x not in alphabet]
    try:
        t = Transducer(tuple(alphabet), len(ids), frozenset(trans), initial, frozenset(finals))
    except ValueError as exc:
        raise ParseError(path, 0, "", f"a well-formed transducer ({exc})") from None
    return Relation(t)


def transducer_to_dot(rel: Relation, name="transducer") -> str:
    t = rel.machine
    edges = [(p, f"{format_word(w)}:c^{m}", q) for p, w, m, q in sorted(t.transitions)]
    return to_dot(name, range(t.num_states), [t.initial], t.finals, edges)
