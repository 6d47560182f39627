"""From a pair of Z-transducers to a defense system.

C is deterministic, D is nondeterministic and complete.  The defense system
runs C and D' (D plus copies of C's first moves) side by side on its lines;
the defended node tracks |output of D'| - |output of C|.  Some word is
critical for it exactly when O(C) is not a subset of O(D).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .defense import Nds, Rule, search_critical
from .errors import ReductionError
from .zmachine import SYMBOLS, ZTransducer, analyze, outputs


def _rename(zt: ZTransducer, tag: str) -> ZTransducer:
    name = {q: f"{tag}.{q}" for q in zt.states}
    return ZTransducer(
        tuple(name[q] for q in zt.states),
        frozenset((name[p], a, b, name[q]) for p, a, b, q in zt.transitions),
        name[zt.initial],
        name[zt.final],
    )


def _check_pair(c: ZTransducer, d: ZTransducer):
    ac, ad = analyze(c), analyze(d)
    if not ac.deterministic:
        raise ReductionError(
            f"C must be deterministic; ambiguous at {list(ac.ambiguous)[:5]}, missing at {list(ac.missing)[:5]}"
        )
    if not ad.complete:
        raise ReductionError(f"D must be complete; missing at {list(ad.missing)[:5]}")


def disjoint_pair(c: ZTransducer, d: ZTransducer) -> Tuple[ZTransducer, ZTransducer]:
    """Validate the pair and tag state names ``C.`` / ``D.`` so they cannot clash."""
    _check_pair(c, d)
    return _rename(c, "C"), _rename(d, "D")


def build_dprime(c: ZTransducer, d: ZTransducer) -> ZTransducer:
    """D with C's states and transitions added, plus a copy of every move out of
    C's initial state starting from D's initial state.  The added paths end in
    C's final state, which is not final here, so O(D') = O(D)."""
    c, d = disjoint_pair(c, d)
    return _dprime(c, d)


def _dprime(c: ZTransducer, d: ZTransducer) -> ZTransducer:
    copies = {(d.initial, a, b, q) for p, a, b, q in c.transitions if p == c.initial}
    return ZTransducer(
        c.states + d.states, c.transitions | d.transitions | copies, d.initial, d.final
    )


@dataclass(frozen=True)
class Product:
    c: ZTransducer
    dprime: ZTransducer
    lines: Tuple[Tuple[str, str], ...]
    nds: Nds
    index: Dict[Tuple[str, str], int] = field(compare=False, repr=False)

    def line_of(self, q, g) -> int:
        return self.index[q, g]


def build_product(c: ZTransducer, d: ZTransducer) -> Product:
    c, d = disjoint_pair(c, d)
    dp = _dprime(c, d)
    q0, qf, g0, gf = c.initial, c.final, dp.initial, dp.final
    first = (q0, g0)
    lines = [first] + [(q, g) for q in c.states for g in dp.states if (q, g) != first]
    index = {pair: i for i, pair in enumerate(lines, 1)}
    stay, sink = index[qf, gf], index[qf, qf]
    rules: List[Rule] = []
    for k, (q, g) in enumerate(lines, 1):
        for a in SYMBOLS:
            if k == stay:
                moves = {(0, stay)}
            elif q == qf or g in (gf, qf):
                moves = {(1, sink)}
            else:
                moves = {
                    (b2 - b1, index[r, t])
                    for b1, r in c.delta.get((q, a), ())
                    for b2, t in dp.delta.get((g, a), ())
                }
            if not moves:
                raise ReductionError(f"line {k} = {(q, g)} has no rule on symbol {a}")
            p = Fraction(1, len(moves))
            rules.extend(Rule(k, a, j, z, p) for z, j in sorted(moves))
    return Product(c, dp, tuple(lines), Nds(len(lines), tuple(rules)), index)


def build_product_nds(c: ZTransducer, d: ZTransducer) -> Nds:
    return build_product(c, d).nds


def co_simulate(product: Product, word: str) -> set:
    """Configurations reached by pairing a C-path with a D'-path on ``word``,
    stepping only while neither path has finished.  Each comes with node
    |output of D'| - |output of C|."""
    c, dp = product.c, product.dprime
    current = {(c.initial, dp.initial, 0, 0)}
    for a in word:
        nxt = set()
        for q, g, yc, yd in current:
            if q == c.final or g in (dp.final, c.final):
                continue
            for b1, r in c.delta.get((q, a), ()):
                for b2, t in dp.delta.get((g, a), ()):
                    nxt.add((r, t, yc + b1, yd + b2))
        current = nxt
    return {(yd - yc, product.line_of(q, g)) for q, g, yc, yd in current}


def find_counterexample(c: ZTransducer, d: ZTransducer, max_len: int) -> Optional[Tuple[str, int]]:
    """Shortlex-least (w, m) with (w, c^m) in O(C) and not in O(D), |w| <= max_len."""
    frontier = [("", c.initial, 0, frozenset({(d.initial, 0)}))]
    for _ in range(max_len):
        nxt = []
        for word, q, m, dset in frontier:
            for a in SYMBOLS:
                moves = c.delta.get((q, a), ())
                if not moves:
                    continue
                b, r = moves[0]
                dnext = frozenset((t, n + b2) for g, n in dset for b2, t in d.delta.get((g, a), ()))
                if r == c.final:
                    if (d.final, m + b) not in dnext:
                        return word + a, m + b
                    continue
                nxt.append((word + a, r, m + b, dnext))
        frontier = nxt
    return None


@dataclass
class CorrespondenceReport:
    word_bound: int
    counterexample: Optional[Tuple[str, int]] = None
    critical: Optional[str] = None
    critical_bound: Optional[int] = None
    backward_prefix: Optional[Tuple[str, int]] = None
    checks: List[Tuple[str, bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(passed for _, passed in self.checks)

    @property
    def status(self) -> str:
        if not self.ok:
            return "violated"
        if self.counterexample is None and self.critical is None:
            return "inconclusive"
        return "consistent"

    def lines(self) -> List[str]:
        out = [f"bound {self.word_bound}"]
        if self.counterexample:
            w, m = self.counterexample
            out.append(f"forward counterexample {w} c^{m} (length {len(w)})")
        else:
            out.append("forward none")
        if self.critical is not None:
            out.append(f"critical {self.critical or '-'} (length {len(self.critical)}, searched to {self.critical_bound})")
        else:
            out.append(f"critical none (searched to {self.critical_bound})")
        if self.backward_prefix:
            out.append(f"backward prefix {self.backward_prefix[0]} c^{self.backward_prefix[1]}")
        out += [f"check {'pass' if ok else 'FAIL'}: {text}" for text, ok in self.checks]
        out.append(f"status {self.status}")
        return out


def accepted_prefix(c: ZTransducer, word: str) -> Optional[Tuple[str, int]]:
    """The prefix of ``word`` accepted by deterministic C with its output, if any."""
    q, m = c.initial, 0
    for i, a in enumerate(word):
        moves = c.delta.get((q, a), ())
        if len(moves) != 1:
            return None
        b, q = moves[0]
        m += b
        if q == c.final:
            return word[:i + 1], m
    return None


def check_correspondence(c: ZTransducer, d: ZTransducer, word_bound: int, product: Product = None) -> CorrespondenceReport:
    """Bounded check, in both directions, that a counterexample to O(C) <= O(D)
    exists iff the product defense system has a critical word."""
    product = product or build_product(c, d)
    rep = CorrespondenceReport(word_bound)
    rep.counterexample = find_counterexample(c, d, word_bound)
    search_bound = word_bound
    if rep.counterexample is not None:
        search_bound = max(word_bound, 2 * len(rep.counterexample[0]) + 2)
    rep.critical_bound = search_bound
    rep.critical = search_critical(product.nds, search_bound)
    if rep.counterexample is not None:
        ell = len(rep.counterexample[0])
        rep.checks.append((
            f"critical word of length <= 2*{ell}+2 = {2 * ell + 2} exists",
            rep.critical is not None and len(rep.critical) <= 2 * ell + 2,
        ))
    if rep.critical is not None:
        prefix = accepted_prefix(c, rep.critical)
        rep.backward_prefix = prefix
        rep.checks.append((
            f"critical word {rep.critical or '-'} has a prefix in O(C) missing from O(D)",
            prefix is not None and prefix[1] not in outputs(d, prefix[0]),
        ))
    return rep
