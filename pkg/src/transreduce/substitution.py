"""Two finite substitutions built from a defense system.

For a system with ``s`` lines, ``phi`` and ``xi`` map {b, 0, 1, c} to finite
sets of binary words, with ``xi(x) <= phi(x)`` letterwise.  They agree on
b{0,1}*c exactly when the system is reliable; a critical word x' of length n
makes w^(2n+2) a word of phi(b x' c) outside xi(b x' c).
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

from .defense import SYMBOLS, Nds, is_critical, search_critical
from .errors import ReductionError, SizeLimitError
from .regular import (
    FiniteSubstitution,
    Nfa,
    NfaBuilder,
    apply_substitution,
    inclusion,
)

DEFAULT_IMAGE_CAP = 10 ** 5
DEFAULT_PROBE_LEN = 6

Triple = Tuple[int, int, int]


@dataclass(frozen=True)
class WordSystem:
    """w = 0^1 1 0^2 1 ... 0^(s+1) 1, split as alpha_k beta_k after block k."""

    s: int

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be >= 1")

    @cached_property
    def blocks(self) -> Tuple[str, ...]:
        return tuple("0" * i + "1" for i in range(1, self.s + 2))

    @cached_property
    def w(self) -> str:
        return "".join(self.blocks)

    def alpha(self, k: int) -> str:
        self._check(k)
        return "".join(self.blocks[:k])

    def beta(self, k: int) -> str:
        self._check(k)
        return "".join(self.blocks[k:])

    def power(self, m: int) -> str:
        if m < 0:
            raise ValueError("negative power of w")
        return self.w * m

    def F(self, k: int, z: int, j: int = None) -> str:
        """beta_k w^(z+1) alpha_j, or beta_k w^(z+2) when j is omitted."""
        if j is None:
            return self.beta(k) + self.power(z + 2)
        return self.beta(k) + self.power(z + 1) + self.alpha(j)

    def _check(self, k):
        if not 1 <= k <= self.s:
            raise ValueError(f"line {k} outside 1..{self.s}")

    def is_power_prefix(self, u: str) -> bool:
        """Whether u is a prefix of some power of w."""
        w = self.w
        reps = len(u) // len(w) + 1
        return (w * reps).startswith(u)

    def as_power_alpha(self, u: str) -> Optional[Tuple[int, int]]:
        """(r, j) with u == w^r alpha_j, if such a split exists."""
        lw = len(self.w)
        for j in range(1, self.s + 1):
            a = self.alpha(j)
            rest = len(u) - len(a)
            if rest >= 0 and rest % lw == 0 and u == self.power(rest // lw) + a:
                return rest // lw, j
        return None


class BlockFamilies(NamedTuple):
    D: Dict[str, FrozenSet[Triple]]
    T: Dict[str, FrozenSet[str]]
    C: Dict[str, FrozenSet[str]]
    M: FrozenSet[str]
    B: FrozenSet[str]
    N: FrozenSet[str]
    S: FrozenSet[str]


def block_families(nds: Nds) -> BlockFamilies:
    ws = WordSystem(nds.s)
    D = {a: frozenset((r.k, r.z, r.j) for r in nds.rules if r.a == a and r.p > 0) for a in SYMBOLS}
    T = {a: frozenset(ws.F(k, z, j) for k, z, j in D[a]) for a in SYMBOLS}
    C = {a: frozenset(ws.F(k, z) for k, z, _ in D[a]) for a in SYMBOLS}
    return BlockFamilies(
        D=D,
        T=T,
        C=C,
        M=frozenset({ws.w}),
        B=frozenset({ws.w * 2}),
        N=frozenset(ws.beta(k) for k in range(1, nds.s + 1)),
        S=frozenset({ws.alpha(1)}),
    )


def _cat(*sets):
    out = {""}
    for s in sets:
        out = {x + y for x in out for y in s}
    return out


def substitution_images(nds: Nds, cap: int = DEFAULT_IMAGE_CAP) -> Tuple[Dict[str, set], Dict[str, set]]:
    """Images of phi and xi as sets of strings, keyed by b, 0, 1, c."""
    fam = block_families(nds)
    s = nds.s
    for a in SYMBOLS:
        d = len(fam.D[a])
        size = 1 + d * (1 + s) ** 2
        if size > cap:
            raise SizeLimitError(f"image of {a} would hold up to {size} words (cap {cap})")
    xi = {
        "b": fam.S | _cat(fam.M, fam.N),
        "c": fam.M | _cat(fam.N, fam.M),
    }
    for a in SYMBOLS:
        xi[a] = (
            fam.B
            | fam.T[a]
            | _cat(fam.N, fam.T[a])
            | _cat(fam.C[a], fam.N)
            | _cat(fam.N, fam.C[a], fam.N)
        )
    phi = dict(xi)
    phi["b"] = xi["b"] | fam.M
    return phi, xi


def build_substitutions(nds: Nds, cap: int = DEFAULT_IMAGE_CAP) -> Tuple[FiniteSubstitution, FiniteSubstitution]:
    phi, xi = substitution_images(nds, cap)
    return FiniteSubstitution(phi), FiniteSubstitution(xi)


def language_bxc() -> Nfa:
    """b{0,1}*c."""
    bld = NfaBuilder(("b", "0", "1", "c"))
    start, loop, end = bld.state(), bld.state(), bld.state()
    bld.initials.add(start)
    bld.finals.add(end)
    bld.add(start, "b", loop)
    bld.add(loop, "0", loop)
    bld.add(loop, "1", loop)
    bld.add(loop, "c", end)
    return bld.build()


@dataclass
class EquivalenceVerdict:
    s: int
    equal: bool
    counterexample: Optional[str]
    xi_in_phi: bool
    probe_len: int
    probe_critical: Optional[str]

    @property
    def consistent(self) -> bool:
        """The decided fact agrees with the bounded reliability probe.

        A critical word is expected to force inequality.  This can fail: the
        critical witness w^(2n+2) is outside xi(b x' c) but may still lie in
        xi(b x'' c) for another x'' (all-shift -1 systems already do this).
        """
        return self.xi_in_phi and (self.probe_critical is None or not self.equal)

    def lines(self) -> List[str]:
        out = [f"lines s={self.s}"]
        out.append("equal" if self.equal else f"counterexample {self.counterexample}")
        out.append(f"xi(L) subset of phi(L): {'yes' if self.xi_in_phi else 'NO'}")
        if self.probe_critical is None:
            out.append(f"probe no critical word up to length {self.probe_len}")
        else:
            out.append(f"probe critical {self.probe_critical} (system unreliable)")
        if not self.consistent:
            out.append("images equal although the system is unreliable")
        return out


def decide_equivalence(nds: Nds, cap: int = DEFAULT_IMAGE_CAP, probe_len: int = DEFAULT_PROBE_LEN) -> EquivalenceVerdict:
    phi, xi = build_substitutions(nds, cap)
    L = language_bxc()
    A = apply_substitution(phi, L)
    B = apply_substitution(xi, L)
    backward = inclusion(B, A)
    forward = inclusion(A, B)
    return EquivalenceVerdict(
        s=nds.s,
        equal=forward is None,
        counterexample=None if forward is None else "".join(forward),
        xi_in_phi=backward is None,
        probe_len=probe_len,
        probe_critical=search_critical(nds, probe_len) if probe_len > 0 else None,
    )


@dataclass
class WitnessReport:
    critical: str
    witness: str
    in_phi: bool
    in_xi: bool
    phi_factorization: Tuple[str, ...]
    explored: int
    discipline_ok: bool

    def lines(self) -> List[str]:
        n = len(self.critical)
        return [
            f"critical {self.critical} (n={n})",
            f"witness w^{2 * n + 2} (length {len(self.witness)})",
            f"in phi(b{self.critical}c): {'yes' if self.in_phi else 'no'} via "
            + " | ".join(self.phi_factorization),
            f"in xi(b{self.critical}c): {'yes' if self.in_xi else 'no'} "
            f"({self.explored} partial products explored)",
            f"prefix discipline: {'ok' if self.discipline_ok else 'VIOLATED'}",
        ]


def critical_witness(nds: Nds, critical: str, cap: int = DEFAULT_IMAGE_CAP) -> WitnessReport:
    if set(critical) - set(SYMBOLS):
        raise ValueError("critical word must be over {0,1}")
    if not is_critical(nds, critical):
        raise ReductionError(f"{critical or 'the empty word'} is not critical")
    ws = WordSystem(nds.s)
    phi, xi = substitution_images(nds, cap)
    n = len(critical)
    target = ws.power(2 * n + 2)
    letters = "b" + critical + "c"

    factors = (ws.w,) + (ws.w * 2,) * n + (ws.w,)
    in_phi = "".join(factors) == target and all(f in phi[x] for f, x in zip(factors, letters))

    # depth-first over xi-factorizations, keeping only prefixes of the target
    found = False
    explored = 0
    discipline_ok = True
    images = [sorted(xi[x]) for x in letters]
    stack = [(0, 0)]
    while stack and not found:
        depth, pos = stack.pop()
        for v in images[depth]:
            end = pos + len(v)
            if target[pos:end] != v:
                continue
            explored += 1
            if depth == len(letters) - 1:
                if end == len(target):
                    found = True
                    break
                continue
            if ws.as_power_alpha(target[:end]) is None:
                discipline_ok = False
            stack.append((depth + 1, end))
    return WitnessReport(critical, target, in_phi, found, factors, explored, discipline_ok)


def t_chain(ws: WordSystem, path: Sequence[Tuple[int, int]]) -> str:
    """alpha_1 followed by T-blocks along a rule path [(z_1, j_1), ...] from line 1."""
    out, k = ws.alpha(1), 1
    for z, j in path:
        out += ws.F(k, z, j)
        k = j
    return out
