"""NFAs, finite substitutions and language inclusion.

Automata are immutable.  States are the integers ``0 .. num_states-1``;
epsilon moves only exist inside :class:`NfaBuilder` and are eliminated when
the automaton is built.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import groupby, product
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .dot import to_dot
from .errors import ParseError
from .words import Word, as_word, format_word, parse_word, read_lines, shortlex_key


@dataclass(frozen=True)
class Nfa:
    alphabet: Tuple[str, ...]
    num_states: int
    transitions: FrozenSet[Tuple[int, str, int]]
    initials: FrozenSet[int]
    finals: FrozenSet[int]

    def __post_init__(self):
        for p, a, q in self.transitions:
            if not (0 <= p < self.num_states and 0 <= q < self.num_states):
                raise ValueError(f"transition {(p, a, q)} leaves the state range")
            if a not in self.alphabet:
                raise ValueError(f"letter {a!r} not in alphabet {self.alphabet}")
        if not self.initials <= set(range(self.num_states)):
            raise ValueError("initial state out of range")
        if not self.finals <= set(range(self.num_states)):
            raise ValueError("final state out of range")

    @cached_property
    def delta(self) -> Dict[Tuple[int, str], FrozenSet[int]]:
        table = defaultdict(set)
        for p, a, q in self.transitions:
            table[p, a].add(q)
        return {key: frozenset(v) for key, v in table.items()}

    def step(self, states: Iterable[int], letter: str) -> FrozenSet[int]:
        delta = self.delta
        out = set()
        for p in states:
            out |= delta.get((p, letter), frozenset())
        return frozenset(out)

    def accepts(self, word) -> bool:
        current = self.initials
        for letter in as_word(word):
            current = self.step(current, letter)
            if not current:
                return False
        return bool(current & self.finals)

    def is_empty(self) -> bool:
        return not enumerate_words(self, self.num_states, limit=1)


class NfaBuilder:
    """Mutable scratch automaton; ``None`` as a letter is an epsilon move."""

    def __init__(self, alphabet=()):
        self.alphabet = set(alphabet)
        self.n = 0
        self.edges: List[Tuple[int, Optional[str], int]] = []
        self.initials = set()
        self.finals = set()

    def state(self) -> int:
        self.n += 1
        return self.n - 1

    def add(self, p: int, letter: Optional[str], q: int):
        if letter is not None:
            self.alphabet.add(letter)
        self.edges.append((p, letter, q))

    def add_word(self, p: int, word: Word, q: int):
        """Chain ``p --word--> q`` through fresh states; the empty word is an epsilon move."""
        if not word:
            self.add(p, None, q)
            return
        cur = p
        for letter in word[:-1]:
            nxt = self.state()
            self.add(cur, letter, nxt)
            cur = nxt
        self.add(cur, word[-1], q)

    def build(self, alphabet=None) -> Nfa:
        eps = defaultdict(set)
        for p, a, q in self.edges:
            if a is None:
                eps[p].add(q)
        closure = {}
        for p in range(self.n):
            seen = {p}
            stack = [p]
            while stack:
                for q in eps[stack.pop()]:
                    if q not in seen:
                        seen.add(q)
                        stack.append(q)
            closure[p] = seen
        moves = defaultdict(set)
        for p, a, q in self.edges:
            if a is not None:
                moves[p].add((a, q))
        trans = set()
        finals = set()
        for p in range(self.n):
            for r in closure[p]:
                for a, q in moves[r]:
                    trans.add((p, a, q))
            if closure[p] & self.finals:
                finals.add(p)
        alpha = tuple(sorted(self.alphabet | set(alphabet or ())))
        return trim(alpha, self.n, trans, self.initials, finals)


def trim(alphabet, n, transitions, initials, finals) -> Nfa:
    """Keep states that are both reachable and co-reachable, renumbered in BFS order."""
    fwd = defaultdict(list)
    bwd = defaultdict(list)
    for p, a, q in transitions:
        fwd[p].append(q)
        bwd[q].append(p)
    coreach = set(finals)
    stack = list(finals)
    while stack:
        for p in bwd[stack.pop()]:
            if p not in coreach:
                coreach.add(p)
                stack.append(p)
    order = []
    seen = set()
    for p in sorted(initials):
        if p in coreach and p not in seen:
            seen.add(p)
            order.append(p)
    i = 0
    while i < len(order):
        for q in sorted(fwd[order[i]]):
            if q in coreach and q not in seen:
                seen.add(q)
                order.append(q)
        i += 1
    index = {p: i for i, p in enumerate(order)}
    return Nfa(
        alphabet=tuple(alphabet),
        num_states=len(order),
        transitions=frozenset(
            (index[p], a, index[q]) for p, a, q in transitions if p in index and q in index
        ),
        initials=frozenset(index[p] for p in initials if p in index),
        finals=frozenset(index[p] for p in finals if p in index),
    )


def from_words(words, alphabet=()) -> Nfa:
    """Automaton for a finite language."""
    b = NfaBuilder(alphabet)
    start, end = b.state(), b.state()
    b.initials.add(start)
    b.finals.add(end)
    for w in words:
        b.add_word(start, as_word(w), end)
    return b.build()


@dataclass(frozen=True)
class FiniteSubstitution:
    """Letter -> finite nonempty set of nonempty words."""

    images: Mapping[str, FrozenSet[Word]] = field(hash=False)

    def __post_init__(self):
        frozen = {}
        for letter, words in self.images.items():
            words = frozenset(as_word(w) for w in words)
            if not words:
                raise ValueError(f"image of {letter!r} is empty")
            if () in words:
                raise ValueError(f"image of {letter!r} contains the empty word")
            frozen[letter] = words
        object.__setattr__(self, "images", dict(sorted(frozen.items())))

    def __eq__(self, other):
        return isinstance(other, FiniteSubstitution) and self.images == other.images

    def __getitem__(self, letter) -> FrozenSet[Word]:
        return self.images[letter]

    @property
    def domain(self):
        return tuple(self.images)

    @property
    def target_alphabet(self):
        return tuple(sorted({x for ws in self.images.values() for w in ws for x in w}))

    def image(self, word) -> set:
        """All words of ``sub(word)``; the image of the empty word is {epsilon}."""
        parts = [sorted(self.images[letter]) for letter in as_word(word)]
        return {sum(choice, ()) for choice in product(*parts)}

    def is_included_in(self, other: "FiniteSubstitution") -> bool:
        return all(
            letter in other.images and ws <= other.images[letter]
            for letter, ws in self.images.items()
        )


def apply_substitution(sub: FiniteSubstitution, nfa: Nfa) -> Nfa:
    """Automaton for ``sub(L(nfa))``: each letter edge becomes one chain per image word."""
    missing = set(nfa.alphabet) - set(sub.domain)
    if missing:
        raise ValueError(f"substitution undefined on {sorted(missing)}")
    b = NfaBuilder(sub.target_alphabet)
    for _ in range(nfa.num_states):
        b.state()
    b.initials |= nfa.initials
    b.finals |= nfa.finals
    for p, a, q in sorted(nfa.transitions):
        for u in sorted(sub[a]):
            b.add_word(p, u, q)
    return b.build()


def inclusion(a: Nfa, b: Nfa) -> Optional[Word]:
    """Return None if L(a) is a subset of L(b), else the shortlex-least word of L(a) - L(b).

    Explores pairs (state of a, set of states of b) breadth first in shortlex
    order of the words reaching them.  A pair is discarded when a pair with the
    same a-state and a subset of its b-states was already visited: anything the
    larger set can reject, the smaller one rejects from a shortlex-smaller word.
    """
    letters = sorted(set(a.alphabet) | set(b.alphabet))
    visited: Dict[int, List[FrozenSet[int]]] = defaultdict(list)

    def subsumed(p, states):
        return any(old <= states for old in visited[p])

    def remember(p, states):
        visited[p] = [old for old in visited[p] if not states <= old]
        visited[p].append(states)

    start = b.initials
    frontier = []
    for p in sorted(a.initials):
        if p in a.finals and not (start & b.finals):
            return ()
        if not subsumed(p, start):
            remember(p, start)
            frontier.append(((), p, start))
    while frontier:
        nxt = []
        # entries sharing a word are adjacent; expand them letter by letter
        # together so successors come out in shortlex order
        for word, group in groupby(frontier, key=lambda e: e[0]):
            group = [(p, states) for _, p, states in group]
            for letter in letters:
                w2 = word + (letter,)
                for p, states in group:
                    targets = a.delta.get((p, letter))
                    if not targets:
                        continue
                    succ = b.step(states, letter)
                    for q in sorted(targets):
                        if subsumed(q, succ):
                            continue
                        if q in a.finals and not (succ & b.finals):
                            return w2
                        remember(q, succ)
                        nxt.append((w2, q, succ))
        frontier = nxt
    return None


def equivalent(a: Nfa, b: Nfa) -> bool:
    return inclusion(a, b) is None and inclusion(b, a) is None


def enumerate_words(nfa: Nfa, max_len: int, limit: Optional[int] = None) -> List[Word]:
    """Accepted words of length <= max_len in shortlex order."""
    letters = sorted(nfa.alphabet)
    out = []
    frontier = [((), nfa.initials)] if nfa.initials else []
    for length in range(max_len + 1):
        for word, states in frontier:
            if states & nfa.finals:
                out.append(word)
                if limit is not None and len(out) >= limit:
                    return out
        if length == max_len:
            break
        nxt = []
        for word, states in frontier:
            for letter in letters:
                succ = nfa.step(states, letter)
                if succ:
                    nxt.append((word + (letter,), succ))
        frontier = nxt
    return out


# text formats ---------------------------------------------------------------

def dump_nfa(nfa: Nfa) -> str:
    lines = ["alphabet " + " ".join(nfa.alphabet)] if nfa.alphabet else []
    lines += [f"state {p}" for p in range(nfa.num_states)]
    lines += [f"init {p}" for p in sorted(nfa.initials)]
    lines += [f"final {p}" for p in sorted(nfa.finals)]
    lines += [f"trans {p} {a} {q}" for p, a, q in sorted(nfa.transitions)]
    return "\n".join(lines) + "\n"


NFA_GRAMMAR = "'alphabet <letter>...', 'state <id>', 'init <id>', 'final <id>' or 'trans <from> <letter|-> <to>'"


def parse_nfa(path) -> Nfa:
    b = NfaBuilder()
    ids = {}

    def sid(token):
        if token not in ids:
            ids[token] = b.state()
        return ids[token]

    for no, line in read_lines(path):
        f = line.split()
        try:
            if f[0] == "alphabet" and len(f) >= 2:
                b.alphabet |= set(f[1:])
            elif f[0] == "state" and len(f) == 2:
                sid(f[1])
            elif f[0] == "init" and len(f) == 2:
                b.initials.add(sid(f[1]))
            elif f[0] == "final" and len(f) == 2:
                b.finals.add(sid(f[1]))
            elif f[0] == "trans" and len(f) == 4:
                b.add(sid(f[1]), None if f[2] == "-" else f[2], sid(f[3]))
            else:
                raise ValueError
        except ValueError:
            raise ParseError(path, no, line, NFA_GRAMMAR) from None
    return b.build()


def dump_substitution(sub: FiniteSubstitution) -> str:
    lines = []
    for letter, words in sub.images.items():
        toks = " ".join(format_word(w) for w in sorted(words, key=shortlex_key))
        lines.append(f"sub {letter} = {toks}")
    return "\n".join(lines) + "\n"


SUB_GRAMMAR = "'sub <letter> = <word> [<word> ...]'"


def parse_substitution(path) -> FiniteSubstitution:
    images = {}
    for no, line in read_lines(path):
        f = line.split()
        if len(f) < 4 or f[0] != "sub" or f[2] != "=" or f[1] in images:
            raise ParseError(path, no, line, SUB_GRAMMAR)
        try:
            images[f[1]] = [parse_word(t) for t in f[3:]]
        except ValueError:
            raise ParseError(path, no, line, SUB_GRAMMAR) from None
        if () in images[f[1]]:
            raise ParseError(path, no, line, SUB_GRAMMAR + " with nonempty words")
    return FiniteSubstitution(images)


def nfa_to_dot(nfa: Nfa, name="nfa") -> str:
    edges = [(p, a, q) for p, a, q in sorted(nfa.transitions)]
    return to_dot(name, range(nfa.num_states), sorted(nfa.initials), nfa.finals, edges)
