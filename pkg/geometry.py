"""
geometry.py - Chains of Wahl singularities, discrepancies, slides and the
toric model of a marked surface

A chain of singularities is written the way it is drawn:

    [4/3]-(1)-[6/5]-(1)-(2)-(2)

Wahl slots are "[n/a]", curves "(c)" with self-intersection -c. Two curves
next to each other have a smooth slot between them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt
import logging
import re
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from cfkernel import Chain, evaluate, format_chain, minimal_model
from errors import (
    IdentityViolation,
    InvalidChain,
    InvalidMarking,
    NoSlide,
    NotDegree8,
    NotNef,
    SingularSystem,
    require,
)
from marking import Marking, format_marking
from wahl import SMOOTH, WahlPair, slot_chain, wahl_chain

logger = logging.getLogger(__name__)


# ============================================================================
# Discrepancies
# ============================================================================

def solve_tridiagonal(chain: Sequence[int], rhs: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Solve A x = rhs for the intersection matrix A of a chain (diag -e, off-diagonal 1)."""
    r = len(chain)
    cp: List[Fraction] = []
    dp: List[Fraction] = []
    for i in range(r):
        pivot = Fraction(-chain[i]) - (cp[i - 1] if i else 0)
        if pivot == 0:
            raise SingularSystem(f"zero pivot at index {i + 1} of {format_chain(chain)}")
        cp.append(Fraction(1) / pivot)
        dp.append((Fraction(rhs[i]) - (dp[i - 1] if i else 0)) / pivot)
    x = [Fraction(0)] * r
    x[-1] = dp[-1]
    for i in range(r - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return tuple(x)


def discrepancy_magnitudes(chain: Sequence[int]) -> Tuple[Fraction, ...]:
    """|d_i| with K = pi*K + sum d_i E_i, i.e. sum m_i E_i.E_j = 2 - e_j."""
    if not chain:
        return ()
    return solve_tridiagonal(chain, [Fraction(2 - e) for e in chain])


@lru_cache(maxsize=4096)
def end_magnitudes(p: WahlPair) -> Tuple[Fraction, Fraction]:
    """Magnitudes at (E_1, E_r) of a Wahl chain: ((n-a)/n, a/n)."""
    if p.is_smooth:
        return Fraction(0), Fraction(0)
    m = discrepancy_magnitudes(wahl_chain(p))
    expected = (Fraction(p.n - p.a, p.n), Fraction(p.a, p.n))
    require((m[0], m[-1]) == expected, f"end discrepancies of {p} are {m[0]}, {m[-1]}, expected {expected}")
    require(all(0 < x < 1 for x in m), f"discrepancies of {p} leave (0,1): {m}")
    return expected


def pullback_coefficient(chain: Sequence[int], index: int) -> Fraction:
    """Coefficient at E_index of the pullback of a curve meeting only E_index transversally."""
    rhs = [Fraction(0)] * len(chain)
    rhs[index - 1] = Fraction(-1)
    return solve_tridiagonal(chain, rhs)[index - 1]


# ============================================================================
# Chains of singularities
# ============================================================================

@dataclass(frozen=True)
class Curve:
    self_intersection: int
    kind: str
    block: Optional[int] = None


@dataclass(frozen=True)
class ResolutionGraph:
    curves: Tuple[Curve, ...]

    def pairing(self, i: int, j: int) -> int:
        if i == j:
            return self.curves[i].self_intersection
        return 1 if abs(i - j) == 1 else 0

    def blocks(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {}
        for i, c in enumerate(self.curves):
            if c.block is not None:
                out.setdefault(c.block, []).append(i)
        return out

    def discrepancies(self) -> Tuple[Fraction, ...]:
        """Magnitude per curve; 0 for curves outside exceptional blocks."""
        out = [Fraction(0)] * len(self.curves)
        for idx in self.blocks().values():
            chain = [-self.curves[i].self_intersection for i in idx]
            for i, m in zip(idx, discrepancy_magnitudes(chain)):
                require(0 <= m < 1, f"discrepancy {m} outside [0,1) in block {format_chain(chain)}")
                out[i] = m
        return tuple(out)


_TOKEN_RE = re.compile(r"\[(\d+)/(\d+)\]|\[\]|\((-?\d+)\)")


@dataclass(frozen=True)
class SingChain:
    """P_0 - C_1 - P_1 - ... - C_m - P_m; slots may be SMOOTH."""

    sings: Tuple[WahlPair, ...]
    cs: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.sings) != len(self.cs) + 1:
            raise InvalidChain(f"{len(self.sings)} slots for {len(self.cs)} curves")

    def full_chain(self) -> Chain:
        out: List[int] = []
        for i, p in enumerate(self.sings):
            out.extend(slot_chain(p))
            if i < len(self.cs):
                out.append(self.cs[i])
        return tuple(out)

    def k_intersections(self) -> Tuple[Fraction, ...]:
        """K.C_i = (c_i - 2) + |d| of the Wahl ends C_i meets."""
        out = []
        for i, c in enumerate(self.cs):
            left, right = self.sings[i], self.sings[i + 1]
            out.append(c - 2 + end_magnitudes(left)[1] + end_magnitudes(right)[0])
        return tuple(out)

    def deltas(self) -> Tuple[int, ...]:
        """delta_i = n_{i-1} n_i |K.C_i|, an integer on every chain of Wahl singularities."""
        out = []
        for i, k in enumerate(self.k_intersections()):
            value = self.sings[i].n * self.sings[i + 1].n * abs(k)
            require(value.denominator == 1, f"delta at curve {i + 1} of {self} is {value}")
            out.append(int(value))
        return tuple(out)

    def resolution_graph(self) -> ResolutionGraph:
        curves: List[Curve] = []
        for i, p in enumerate(self.sings):
            curves.extend(Curve(-e, "exceptional", i) for e in slot_chain(p))
            if i < len(self.cs):
                curves.append(Curve(-self.cs[i], "connecting"))
        return ResolutionGraph(tuple(curves))

    def __str__(self) -> str:
        parts = []
        for i, p in enumerate(self.sings):
            if not p.is_smooth:
                parts.append(str(p))
            if i < len(self.cs):
                parts.append(f"({self.cs[i]})")
        return "-".join(parts)


def parse_sing_chain(text: str) -> SingChain:
    sings: List[WahlPair] = []
    cs: List[int] = []
    current = SMOOTH
    for m in _TOKEN_RE.finditer(text):
        if m.group(3) is not None:
            sings.append(current)
            cs.append(int(m.group(3)))
            current = SMOOTH
        elif m.group(1) is not None:
            if not current.is_smooth:
                raise InvalidChain(f"two singularities without a curve between them in {text!r}")
            current = WahlPair(int(m.group(1)), int(m.group(2)))
    sings.append(current)
    return SingChain(tuple(sings), tuple(cs))


# ============================================================================
# Slides
# ============================================================================

Direction = Literal["left", "right"]


@dataclass(frozen=True)
class Slide:
    pair: WahlPair
    chain: Chain
    target: Chain


def _contract_leftmost(chain: Sequence[int], times: int) -> Chain:
    w = list(chain)
    for _ in range(times):
        j = w.index(1)
        if j > 0:
            w[j - 1] -= 1
        if j < len(w) - 1:
            w[j + 1] -= 1
        del w[j]
    return tuple(w)


def slide(chain: Sequence[int], i: int, direction: Direction) -> Slide:
    """Wahl chain S with S+[1]+e (left) or e+[1]+S (right) contracting to e with e_i - 1."""
    e = tuple(chain)
    r = len(e)
    if not 1 <= i <= r:
        raise NoSlide(f"index {i} outside 1..{r}")
    if direction == "left":
        if i < 2:
            raise NoSlide("a left slide needs i >= 2")
        v = evaluate(e[:i - 1])
        pair = WahlPair(v.numerator, v.denominator)
        s = wahl_chain(pair)
        out = s + (1,) + e
    elif direction == "right":
        if i > r - 1:
            raise NoSlide("a right slide needs i <= r-1")
        v = evaluate(e[i:][::-1])
        pair = WahlPair(v.numerator, v.numerator - v.denominator)
        s = wahl_chain(pair)
        out = e + (1,) + s
    else:
        raise NoSlide(f"unknown direction {direction!r}")
    target = e[:i - 1] + (e[i - 1] - 1,) + e[i:]
    got = _contract_leftmost(out, len(s) + 1)
    require(got == target, f"slide {direction} at {i} of {format_chain(e)} contracts to {format_chain(got)}")
    return Slide(pair, out, target)


@dataclass(frozen=True)
class SlideNumerics:
    n: int
    a: int
    index: int
    n1: int
    a1: int
    n2: int
    a2: int
    a2_read: int
    delta: int
    gamma_sq: Fraction
    gamma1_sq: Fraction
    gamma2_sq: Fraction
    k_gamma: Fraction
    k_gamma1: Fraction
    k_gamma2: Fraction

    @property
    def markov(self) -> bool:
        """Gamma^2 > 0: the slide is a Markov-type mutation."""
        return self.gamma_sq > 0

    def record(self) -> Dict:
        return {
            "n": self.n, "a": self.a, "i": self.index,
            "n1": self.n1, "a1": self.a1, "n2": self.n2, "a2": self.a2, "a2_read": self.a2_read,
            "delta": self.delta,
            "gamma_sq": str(self.gamma_sq), "gamma1_sq": str(self.gamma1_sq), "gamma2_sq": str(self.gamma2_sq),
            "k_gamma": str(self.k_gamma), "markov": self.markov,
        }


def slide_numerics(p: WahlPair, i: int) -> SlideNumerics:
    """Numerics of the (-1)-curve at E_i of the Wahl chain of p and its two slides.

    At i=1 the left singularity is the sentinel (1,0); at i=r the right one is.
    """
    e = wahl_chain(p)
    r = len(e)
    n, a = p.n, p.a
    if not 1 <= i <= r:
        raise NoSlide(f"index {i} outside 1..{r}")
    if i >= 2:
        v = evaluate(e[:i - 1])
        n1, a1 = v.numerator, v.denominator
    else:
        n1, a1 = 1, 0
    delta = n1 * a - a1 * n
    n2, a2 = delta * n - n1, delta * a - a1
    a2_read = n2 - a2
    if i <= r - 1:
        v = evaluate(e[i:][::-1])
        require((v.numerator, v.denominator) == (n2, a2_read), f"right side of {p} at {i} is {v}, expected {n2}/{a2_read}")
    else:
        require(n2 == 1, f"right end of {p}: n'' = {n2}, expected 1")
    require(delta == n2 * (n - a) - n * a2_read, f"two expressions for delta disagree at {p}, i={i}")
    require(delta > 0, f"delta = {delta} at {p}, i={i}")

    m = discrepancy_magnitudes(e)
    k_gamma = -1 + m[i - 1]
    require(k_gamma == Fraction(-delta, n), f"K.Gamma = {k_gamma}, expected {-delta}/{n}")
    gamma_sq = -1 + pullback_coefficient(e, i)
    require(gamma_sq == -1 + Fraction(n1 * n2, n * n), f"Gamma^2 = {gamma_sq} at {p}, i={i}")
    require(gamma_sq != 0, f"Gamma^2 = 0 at {p}, i={i}")

    # W': S' + [1] + e, the curve meets the last component of S' and E_1
    s1 = slot_chain(WahlPair(n1, a1)) if n1 > 1 else ()
    k_gamma1 = -1 + Fraction(a1, n1) + Fraction(n - a, n)
    gamma1_sq = -1 + pullback_coefficient(e, 1) + (pullback_coefficient(s1, len(s1)) if s1 else 0)
    # W'': e + [1] + S'', meeting E_r and the first component of S''
    s2 = slot_chain(WahlPair(n2, a2)) if n2 > 1 else ()
    k_gamma2 = -1 + Fraction(a, n) + Fraction(n2 - a2, n2)
    gamma2_sq = -1 + pullback_coefficient(e, r) + (pullback_coefficient(s2, 1) if s2 else 0)

    require(n1 * k_gamma1 == k_gamma == n2 * k_gamma2, f"K.Gamma is not conserved across the slides of {p} at {i}")
    require(n1 * n1 * gamma1_sq == gamma_sq == n2 * n2 * gamma2_sq, f"Gamma^2 is not conserved across the slides of {p} at {i}")
    return SlideNumerics(
        n, a, i, n1, a1, n2, a2, a2_read, delta,
        gamma_sq, gamma1_sq, gamma2_sq, k_gamma, k_gamma1, k_gamma2,
    )


# ============================================================================
# The toric model of a marked surface
# ============================================================================

def _w_hat_tokens(marking: Marking) -> List:
    e = marking.chain
    r = len(e)
    i = marking.central
    d = list(marking.decrements)
    left: List = []
    if i == 1:
        left.append(0)
    else:
        for j in range(i - 1, 1, -1):
            v = evaluate(e[:j - 1])
            pair = WahlPair(v.numerator, v.denominator)
            for _ in range(d[j - 1]):
                left.extend([1, pair])
        if d[0] > 0:
            left.append(1)
            left.extend([2] * (d[0] - 1))
    right: List = []
    if i == r:
        right.append(0)
    else:
        for j in range(i + 1, r):
            v = evaluate(e[j:][::-1])
            pair = WahlPair(v.numerator, v.numerator - v.denominator)
            for _ in range(d[j - 1]):
                right.extend([1, pair])
        if d[r - 1] > 0:
            right.append(1)
            right.extend([2] * (d[r - 1] - 1))
    return left[::-1] + [marking.pair] + right


def _tokens_to_sing_chain(tokens: Sequence) -> SingChain:
    sings: List[WahlPair] = []
    cs: List[int] = []
    current = SMOOTH
    for t in tokens:
        if isinstance(t, WahlPair):
            require(current.is_smooth, "two singularities without a curve between them")
            current = t
        else:
            sings.append(current)
            cs.append(t)
            current = SMOOTH
    sings.append(current)
    return SingChain(tuple(sings), tuple(cs))


def closing_curve(chain: SingChain) -> int:
    """Self-intersection number b_C of the curve closing the toric boundary cycle.

    The cycle closes iff walking the rays u_{j+1} = b_j u_j - u_{j-1} returns to
    the start after every curve.
    """
    entries = chain.full_chain()
    N = len(entries) + 1
    b_c = 3 * N - 12 - sum(entries)
    b = (b_c,) + entries
    u = [(1, 0), (0, 1)]
    for j in range(1, N + 1):
        bj = b[j % N]
        u.append((bj * u[j][0] - u[j - 1][0], bj * u[j][1] - u[j - 1][1]))
    if u[N] != u[0] or u[N + 1] != u[1]:
        raise InvalidMarking(f"boundary of {chain} does not close into a toric cycle")
    return b_c


@dataclass(frozen=True)
class TSingularity:
    """1/dn^2(1, dna-1); n = 1 (pair SMOOTH) is the Du Val point A_{d-1}."""

    d: int
    pair: WahlPair

    def __str__(self) -> str:
        if self.pair.is_smooth:
            return f"A{self.d - 1}"
        return f"{self.d}x{self.pair}"


@dataclass(frozen=True)
class WHat:
    marking: Marking
    chain: SingChain
    closing: int
    k_curves: Tuple[Fraction, ...]
    k_closing: Fraction
    nef: bool = field(default=True)

    @property
    def degree(self) -> int:
        return self.marking.degree

    def k_squared(self) -> Fraction:
        """K^2 = -sum K.D over the toric boundary (K = -sum D)."""
        return -(sum(self.k_curves, Fraction(0)) + self.k_closing)

    def record(self) -> Dict:
        return {
            "marking": format_marking(self.marking),
            "degree": self.degree,
            "chain": str(self.chain),
            "closing": self.closing,
            "k_closing": str(self.k_closing),
            "nef": self.nef,
        }


def build_w_hat(m: Marking) -> WHat:
    """Slide every marking curve off the Wahl chain and close the toric boundary.

    Marking curves at interior E_j become (1)-curves followed by the left (right)
    slide singularity of E_j, once per curve; curves at E_1 / E_r become a
    (1)-curve followed by (2)-curves.
    """
    tokens = _w_hat_tokens(m)
    chain = _tokens_to_sing_chain(tokens)
    b_c = closing_curve(chain)
    k_curves = chain.k_intersections()
    k_closing = b_c - 2 + end_magnitudes(chain.sings[0])[0] + end_magnitudes(chain.sings[-1])[1]
    positive = [k for k in k_curves if k > 0]
    if positive:
        raise IdentityViolation(f"{format_marking(m)}: boundary curves with K.C > 0 in {chain}")
    nef = k_closing <= 0
    if not nef and not (m.kind == "I" and m.degree == 1):
        raise IdentityViolation(f"{format_marking(m)}: closing curve has K.C = {k_closing}")
    w = WHat(m, chain, b_c, k_curves, k_closing, nef)
    require(w.k_squared() == m.degree, f"{format_marking(m)}: K^2 of the toric model is {w.k_squared()}, degree {m.degree}")
    logger.debug("%s -> %s (closing %d)", format_marking(m), chain, b_c)
    return w


def _t_singularity(chain: Chain) -> TSingularity:
    v = evaluate(minimal_model(chain))
    delta, omega = v.numerator, v.denominator
    for d in range(1, delta + 1):
        if delta % d:
            continue
        n = isqrt(delta // d)
        if n * n != delta // d:
            continue
        if n == 1:
            if omega == delta - 1 or delta == 1:
                return TSingularity(d, SMOOTH)
            continue
        if (omega + 1) % (d * n) == 0:
            a = (omega + 1) // (d * n)
            if 0 < a < n:
                return TSingularity(d, WahlPair(n, a))
    raise IdentityViolation(f"{format_chain(chain)} does not contract to a T-singularity")


def toric_contraction(w: WHat) -> List[TSingularity]:
    """Contract every K-trivial boundary curve of the toric model; returns the singular points."""
    if not w.nef:
        raise NotNef(f"{format_marking(w.marking)}: toric model is not weak del Pezzo")
    # cycle: closing curve, P_0, C_1, P_1, ..., C_m, P_m
    items: List = [("curve", w.closing, w.k_closing)]
    for i, p in enumerate(w.chain.sings):
        items.append(("slot", p, None))
        if i < len(w.chain.cs):
            items.append(("curve", w.chain.cs[i], w.k_curves[i]))
    start = next(j for j, x in enumerate(items) if x[0] == "curve" and x[2] < 0)
    items = items[start + 1:] + items[:start + 1]
    out: List[TSingularity] = []
    block: List[int] = []
    for kind, value, k in items:
        if kind == "curve" and k < 0:
            if block:
                out.append(_t_singularity(tuple(block)))
            block = []
        elif kind == "curve":
            block.append(value)
        else:
            block.extend(slot_chain(value))
    return out


def k_squared(m: Marking) -> int:
    """8 - B + r, B counting the blow-ups of the Hirzebruch surface the marking implies."""
    blowups = 0
    for side in (m.left, m.right):
        if side.is_absent:
            continue
        blowups += len(side.base) - 1 + sum(f - k for f, k in zip(side.base, side.k))
    value = 8 - blowups + len(m.chain)
    require(value == m.degree, f"{format_marking(m)}: K^2 bookkeeping gives {value}, degree {m.degree}")
    return value


# ============================================================================
# Degree 8
# ============================================================================

@dataclass(frozen=True)
class Degree8Class:
    marking: Marking
    surface: Literal["F0", "F1"]
    parity: Tuple[Tuple[int, int], ...]
    blowup_clause: str = "undetermined"

    def record(self) -> Dict:
        return {
            "marking": format_marking(self.marking),
            "surface": self.surface,
            "parity": [list(x) for x in self.parity],
            "blowup_clause": self.blowup_clause,
        }


def degree8_fiber_class(m: Marking) -> Degree8Class:
    """F1 when n is even; otherwise F0 iff n K.Gamma is even for every marking curve."""
    if m.degree != 8:
        raise NotDegree8(f"{format_marking(m)} has degree {m.degree}")
    mags = discrepancy_magnitudes(m.chain)
    parity = []
    for j, dj in enumerate(m.decrements, start=1):
        if j == m.central or dj == 0:
            continue
        value = m.pair.n * (mags[j - 1] - 1)
        require(value.denominator == 1, f"n K.Gamma = {value} is not an integer at E_{j}")
        parity.append((j, int(value)))
    if m.pair.n % 2 == 0:
        surface = "F1"
    else:
        surface = "F0" if all(v % 2 == 0 for _, v in parity) else "F1"
    return Degree8Class(m, surface, tuple(parity))
