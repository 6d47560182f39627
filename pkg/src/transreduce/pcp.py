"""PCP instances and their reduction to inclusion of unary rational relations.

Index letters are named ``i1 .. in``; the pair alphabet is ``a, b, i1, .., in``.
For an instance, ``L0`` is contained in ``Lu | Lv`` exactly when the instance
has no solution; for a single pair of ``L0`` the word part misses ``Lu``
exactly when it spells the u-concatenation of the index sequence.
"""

from dataclasses import dataclass
from itertools import product
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .errors import ParseError, ReductionError, SizeLimitError
from .relation import Relation, UnaryPair, atom, concat_all, contains, plus, star, union_all
from .words import read_lines

DEFAULT_MISMATCH_CAP = 2 ** 16
LETTERS = ("a", "b")


def index_letter(alpha: int) -> str:
    return f"i{alpha}"


@dataclass(frozen=True)
class PcpInstance:
    pairs: Tuple[Tuple[str, str], ...]

    def __post_init__(self):
        pairs = tuple((str(u), str(v)) for u, v in self.pairs)
        if not pairs:
            raise ValueError("a PCP instance needs at least one pair")
        for u, v in pairs:
            if not u or not v or set(u + v) - set(LETTERS):
                raise ValueError(f"pair {(u, v)} must be two nonempty words over {{a,b}}")
        object.__setattr__(self, "pairs", pairs)

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def alphabet(self) -> Tuple[str, ...]:
        return LETTERS + tuple(index_letter(a) for a in range(1, self.n + 1))

    def words(self, side: str) -> Tuple[str, ...]:
        if side not in ("u", "v"):
            raise ValueError(f"side must be 'u' or 'v', not {side!r}")
        return tuple(p[0] if side == "u" else p[1] for p in self.pairs)

    def concat(self, side: str, seq: Sequence[int]) -> str:
        words = self.words(side)
        return "".join(words[a - 1] for a in seq)

    def is_solution(self, seq: Sequence[int]) -> bool:
        return bool(seq) and self.concat("u", seq) == self.concat("v", seq)

    def check_sequence(self, seq: Sequence[int]):
        if not seq:
            raise ValueError("index sequence must be nonempty")
        for a in seq:
            if not 1 <= a <= self.n:
                raise ValueError(f"index {a} outside 1..{self.n}")


class SideRelations(NamedTuple):
    L1: Relation
    L2: Relation
    L3: Relation
    L4: Relation
    L5: Relation
    L: Relation


def mismatch_words(word: str, cap: int = DEFAULT_MISMATCH_CAP) -> List[str]:
    """All words over {a,b} of the same length as ``word`` except ``word`` itself."""
    if 2 ** len(word) > cap:
        raise SizeLimitError(f"2^{len(word)} mismatch words exceed the cap {cap}")
    return ["".join(t) for t in product(LETTERS, repeat=len(word)) if "".join(t) != word]


def build_side(inst: PcpInstance, side: str, cap: int = DEFAULT_MISMATCH_CAP) -> SideRelations:
    words = inst.words(side)
    lengths = [len(w) for w in words]
    sigma = inst.alphabet
    idx = [index_letter(a) for a in range(1, inst.n + 1)]

    def A(word, m):
        return atom((word,) if word in idx else tuple(word), m, sigma)

    L1 = star(union_all(A(idx[a], lengths[a] + 1) for a in range(inst.n)))
    ones = star(union_all(A(i, 1) for i in idx))
    single = star(union_all([A("a", 1), A("b", 1)]))
    double = union_all([A("a", 2), A("b", 2)])

    L2 = union_all(
        concat_all([L1, A(idx[beta], j), ones])
        for beta in range(inst.n)
        for j in range(1, lengths[beta] + 1)
    )
    L3 = concat_all([L2, single])
    L4 = concat_all([L1, single, plus(double)])
    L5 = union_all(
        concat_all([L1, A(idx[beta], 1), ones, single, A(mu, 2 * lengths[beta]), star(double)])
        for beta in range(inst.n)
        for mu in mismatch_words(words[beta], cap)
    )
    return SideRelations(L1, L2, L3, L4, L5, union_all([L3, L4, L5]))


def build_l0(inst: PcpInstance) -> Relation:
    sigma = inst.alphabet
    ones = union_all(atom((index_letter(a),), 1, sigma) for a in range(1, inst.n + 1))
    double = union_all([atom("a", 2, sigma), atom("b", 2, sigma)])
    return concat_all([plus(ones), plus(double)])


def l0_pair(seq: Sequence[int], w1: str) -> UnaryPair:
    """The element of L0 with index part ``seq`` and letter part ``w1``."""
    return UnaryPair(tuple(index_letter(a) for a in seq) + tuple(w1), len(seq) + 2 * len(w1))


def solution_witness(inst: PcpInstance, seq: Sequence[int]) -> UnaryPair:
    inst.check_sequence(seq)
    if not inst.is_solution(seq):
        raise ReductionError(
            f"{list(seq)} is not a solution: {inst.concat('u', seq)} != {inst.concat('v', seq)}"
        )
    return l0_pair(seq, inst.concat("u", seq))


def brute_force_pcp(inst: PcpInstance, max_len: int) -> Optional[Tuple[int, ...]]:
    """Shortlex-least solution of length <= max_len, or None.

    Sequences whose u- and v-concatenations are not prefix-comparable are
    dropped; only the unmatched overhang is kept per sequence.
    """
    # (sequence, side holding the overhang, overhang)
    frontier = [((), "u", "")]
    for _ in range(max_len):
        nxt = []
        for seq, side, rest in frontier:
            for a, (u, v) in enumerate(inst.pairs, 1):
                top = (rest if side == "u" else "") + u
                bot = (rest if side == "v" else "") + v
                if top.startswith(bot):
                    item = (seq + (a,), "u", top[len(bot):])
                elif bot.startswith(top):
                    item = (seq + (a,), "v", bot[len(top):])
                else:
                    continue
                if not item[2]:
                    return item[0]
                nxt.append(item)
        frontier = nxt
    return None


class Violation(NamedTuple):
    seq: Tuple[int, ...]
    w1: str
    side: str
    expected: bool
    actual: bool
    case: str


def proof_case(inst: PcpInstance, side: str, seq: Sequence[int], w1: str) -> Optional[str]:
    """Which layer must contain the L0 pair when w1 differs from the concatenation.

    Returns ``"L4"`` (w1 too long), ``"L3"`` (too short), ``"L5"`` (same length,
    some block mismatches) or None when w1 equals the concatenation.
    """
    target = inst.concat(side, seq)
    if len(w1) > len(target):
        return "L4"
    if len(w1) < len(target):
        return "L3"
    return None if w1 == target else "L5"


def scan_claim(
    inst: PcpInstance, max_seq_len: int, max_word_len: int, sides=None
) -> List[Violation]:
    """Check membership of every bounded L0 pair against the concatenation test.

    For each pair, membership in the side relation must hold exactly when the
    letter part differs from that side's concatenation, and when it holds the
    layer predicted by :func:`proof_case` must contain the pair on its own.
    """
    if max_seq_len < 1 or max_word_len < 1:
        raise ValueError("bounds must be >= 1")
    sides = sides or {s: build_side(inst, s) for s in ("u", "v")}
    out = []
    for s_len in range(1, max_seq_len + 1):
        for seq in product(range(1, inst.n + 1), repeat=s_len):
            for length in range(1, max_word_len + 1):
                for letters in product(LETTERS, repeat=length):
                    w1 = "".join(letters)
                    pair = l0_pair(seq, w1)
                    for side, rels in sides.items():
                        case = proof_case(inst, side, seq, w1)
                        expected = case is not None
                        actual = contains(rels.L, pair)
                        if actual != expected:
                            out.append(Violation(seq, w1, side, expected, actual, case or "-"))
                        elif case is not None and not contains(getattr(rels, case), pair):
                            out.append(Violation(seq, w1, side, True, False, case))
    return out


PCP_GRAMMAR = "'pair <u> <v>' with u, v nonempty words over {a,b}"


def parse_pcp(path) -> PcpInstance:
    pairs = []
    for no, line in read_lines(path):
        f = line.split()
        if len(f) != 3 or f[0] != "pair" or set(f[1] + f[2]) - set(LETTERS):
            raise ParseError(path, no, line, PCP_GRAMMAR)
        pairs.append((f[1], f[2]))
    if not pairs:
        raise ParseError(path, 0, "", "at least one " + PCP_GRAMMAR)
    return PcpInstance(tuple(pairs))


def dump_pcp(inst: PcpInstance) -> str:
    return "".join(f"pair {u} {v}\n" for u, v in inst.pairs)
