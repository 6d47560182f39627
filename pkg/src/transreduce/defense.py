"""Nondeterministic defense systems over the attack alphabet {0, 1}.

Lines ``1..s`` defend integer nodes.  A rule ``(k, a, j, z, p)`` moves the
defense of node ``i`` by line ``k`` to node ``i + z`` by line ``j`` with
probability ``p`` when symbol ``a`` arrives.  Initially node 0 is defended by
line 1.  A word is critical when afterwards no configuration on node 0 has
positive probability.
"""

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, NamedTuple, Optional, Tuple

from .errors import ParseError
from .words import read_lines

SYMBOLS = ("0", "1")


class Rule(NamedTuple):
    k: int
    a: str
    j: int
    z: int
    p: Fraction


class Configuration(NamedTuple):
    node: int
    line: int

    def encode(self, s: int) -> int:
        return self.node * s + (self.line - 1)

    @classmethod
    def decode(cls, code: int, s: int) -> "Configuration":
        node, rem = divmod(code, s)
        return cls(node, rem + 1)


Support = FrozenSet[Configuration]
INITIAL = Configuration(0, 1)


class InvalidSystem(ValueError):
    def __init__(self, message, row=None):
        self.row = row
        super().__init__(message)


@dataclass(frozen=True)
class Nds:
    s: int
    rules: Tuple[Rule, ...]

    def __post_init__(self):
        if self.s < 1:
            raise InvalidSystem("a defense system needs at least one line")
        rules = []
        for r in self.rules:
            r = Rule(int(r[0]), str(r[1]), int(r[2]), int(r[3]), Fraction(r[4]))
            if not (1 <= r.k <= self.s and 1 <= r.j <= self.s):
                raise InvalidSystem(f"rule {r} names a line outside 1..{self.s}")
            if r.a not in SYMBOLS or r.z not in (-1, 0, 1):
                raise InvalidSystem(f"rule {r} has a bad symbol or shift")
            if not 0 < r.p <= 1:
                raise InvalidSystem(f"rule {r} needs probability in (0, 1]")
            rules.append(r)
        object.__setattr__(self, "rules", tuple(rules))
        totals = defaultdict(Fraction)
        for r in rules:
            totals[r.k, r.a] += r.p
        for k in range(1, self.s + 1):
            for a in SYMBOLS:
                if totals[k, a] != 1:
                    raise InvalidSystem(
                        f"probabilities of line {k} on symbol {a} sum to {totals[k, a]}, not 1",
                        row=(k, a),
                    )

    @cached_property
    def table(self) -> Dict[Tuple[int, str], Tuple[Rule, ...]]:
        table = defaultdict(list)
        for r in self.rules:
            table[r.k, r.a].append(r)
        return {key: tuple(v) for key, v in table.items()}


def step_support(nds: Nds, support: Support, a: str) -> Support:
    table = nds.table
    return frozenset(
        Configuration(c.node + r.z, r.j) for c in support for r in table[c.line, a]
    )


def support_after(nds: Nds, word: str, start: Support = frozenset({INITIAL})) -> Support:
    support = start
    for a in word:
        support = step_support(nds, support, a)
    return support


def attack_probabilities(nds: Nds, word: str) -> Dict[Configuration, Fraction]:
    dist = {INITIAL: Fraction(1)}
    table = nds.table
    for a in word:
        nxt = defaultdict(Fraction)
        for c, mass in dist.items():
            for r in table[c.line, a]:
                nxt[Configuration(c.node + r.z, r.j)] += mass * r.p
        dist = dict(nxt)
    return dist


def defends_origin(support: Support) -> bool:
    return any(c.node == 0 for c in support)


def is_critical(nds: Nds, word: str) -> bool:
    return not defends_origin(support_after(nds, word))


def search_critical(nds: Nds, max_len: int) -> Optional[str]:
    """Shortlex-least critical word of length <= max_len, or None.

    Supports evolve deterministically, so a word reaching an already seen
    support is dropped: the earlier (shortlex smaller) word has the same future.
    """
    start = frozenset({INITIAL})
    seen = {start}
    frontier = [("", start)]
    for _ in range(max_len):
        nxt = []
        for word, support in frontier:
            for a in SYMBOLS:
                succ = step_support(nds, support, a)
                if not defends_origin(succ):
                    return word + a
                if succ not in seen:
                    seen.add(succ)
                    nxt.append((word + a, succ))
        frontier = nxt
        if not frontier:
            break
    return None


# text format ----------------------------------------------------------------

GRAMMAR = "'lines <s>' then 'rule <k> <0|1> <j> <-1|0|1> <num>/<den>'"


def parse_nds(path) -> Nds:
    s = None
    rules = []
    for no, line in read_lines(path):
        f = line.split()
        try:
            if f[0] == "lines" and len(f) == 2 and s is None:
                s = int(f[1])
            elif f[0] == "rule" and len(f) == 6 and s is not None:
                p = Fraction(f[5])
                if f[2] not in SYMBOLS or p <= 0:
                    raise ValueError
                rules.append(Rule(int(f[1]), f[2], int(f[3]), int(f[4]), p))
            else:
                raise ValueError
        except (ValueError, ZeroDivisionError):
            raise ParseError(path, no, line, GRAMMAR) from None
    if s is None:
        raise ParseError(path, 0, "", "a 'lines <s>' line")
    try:
        return Nds(s, tuple(rules))
    except InvalidSystem as exc:
        where = f" (row k={exc.row[0]}, a={exc.row[1]})" if exc.row else ""
        raise ParseError(path, 0, "", f"a valid defense system: {exc}{where}") from None


def dump_nds(nds: Nds) -> str:
    lines = [f"lines {nds.s}"]
    for r in nds.rules:
        lines.append(f"rule {r.k} {r.a} {r.j} {r.z} {r.p.numerator}/{r.p.denominator}")
    return "\n".join(lines) + "\n"
