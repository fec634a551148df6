"""
marking.py - Zero continued fractions, del Pezzo markings of Wahl chains

A marking decrements entries on one side (type I) or both sides (type II)
of a central entry so that each side becomes a zero continued fraction.
The weight of a side is (total decrement - 1) and the degree is
9 - (sum of weights).

Two censuses are available:
  formal  - entries >= 1 and the chain evaluates to 0; intermediate
            blow-downs may pass through zero entries (the census default)
  strict  - every tail of the zero CF is positive, so it blows down to [1,1]

Realizability questions (degrees, toric models, bundles) use the strict census.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
import logging
import re
from typing import Dict, FrozenSet, List, Literal, Optional, Sequence, Set, Tuple

from cfkernel import CQS, Chain, blow_up_step, format_chain, is_zero_cf
from errors import ExcludedChain, IdentityViolation, InvalidMarking, OutOfRange
from wahl import WahlPair, post_center, wahl_center, wahl_chain

logger = logging.getLogger(__name__)

MAX_WEIGHT = 8
Kind = Literal["I", "II"]


# ============================================================================
# Zero continued fraction assignments
# ============================================================================

@dataclass(frozen=True)
class ZeroCFAssignment:
    """k = f - d on `base`; k is () for an absent side and (0,) for a collapsed single entry."""

    base: Chain
    k: Chain
    weight: int

    @property
    def is_absent(self) -> bool:
        return not self.base

    @property
    def decrements(self) -> Dict[int, int]:
        return {i + 1: f - k for i, (f, k) in enumerate(zip(self.base, self.k)) if f != k}

    @property
    def u(self) -> int:
        """Length of the [1,2,...,2,1] core this zero CF is blown up from, minus one."""
        return 3 * (len(self.k) - 1) - sum(self.k)

    def sort_key(self) -> Tuple:
        d = self.decrements
        return (self.weight, tuple(d), tuple(d.values()))


ABSENT = ZeroCFAssignment((), (), -1)


def _strict_zero_cfs(f: Sequence[int], budget: int) -> List[Chain]:
    """All zero CFs k <= f (entries >= 1) with sum(f - k) <= budget, right to left."""
    s = len(f)
    out: List[Chain] = []
    k = [0] * s

    def rec(i: int, p: int, q: int, b: int) -> None:
        # the tail after position i is p/q > 0
        if i == 0:
            if q % p:
                return
            k0 = q // p
            if 1 <= k0 <= f[0] and f[0] - k0 <= b:
                k[0] = k0
                out.append(tuple(k))
            return
        lo = max(1, q // p + 1, f[i] - b)
        for x in range(f[i], lo - 1, -1):
            k[i] = x
            rec(i - 1, x * p - q, p, b - (f[i] - x))

    for x in range(f[-1], max(1, f[-1] - budget) - 1, -1):
        k[-1] = x
        rec(s - 2, x, 1, budget - (f[-1] - x))
    return out


def _formal_value_is_zero(k: Sequence[int]) -> bool:
    p, q = k[-1], 1
    for e in reversed(k[:-1]):
        if p == 0:
            return False
        p, q = e * p - q, p
    return p == 0


def _formal_zero_cfs(f: Chain, budget: int, memo: Dict) -> List[Chain]:
    """Formal census: blow-down reduction that also removes interior zeros."""
    key = (f, budget)
    if key in memo:
        return memo[key]
    s = len(f)
    found: Dict[Chain, None] = {}
    if s == 2:
        if f[0] >= 1 and f[1] >= 1 and f[0] + f[1] - 2 <= budget:
            found[(1, 1)] = None
    elif s > 2:
        for j in range(s):
            cost = f[j] - 1
            if cost < 0 or cost > budget:
                continue
            g = list(f)
            if j > 0:
                g[j - 1] -= 1
            if j < s - 1:
                g[j + 1] -= 1
            del g[j]
            if min(g) < 0:
                continue
            for k2 in _formal_zero_cfs(tuple(g), budget - cost, memo):
                k = list(k2)
                if j > 0:
                    k[j - 1] += 1
                if j < s - 1:
                    k[j] += 1
                k.insert(j, 1)
                found[tuple(k)] = None
        for p in range(1, s - 1):
            cost = f[p]
            if cost > budget:
                continue
            left, right = f[p - 1], f[p + 1]
            g = f[:p - 1] + (left + right,) + f[p + 2:]
            if len(g) < 2:
                continue
            for k2 in _formal_zero_cfs(g, budget - cost, memo):
                merged = k2[p - 1]
                for a in range(max(0, merged - right), min(left, merged) + 1):
                    found[k2[:p - 1] + (a, 0, merged - a) + k2[p:]] = None
    out = [k for k in found if _formal_value_is_zero(k)]
    memo[key] = out
    return out


def enumerate_zero_cf_assignments(
    base: Sequence[int], max_weight: int = MAX_WEIGHT, formal: bool = False
) -> List[ZeroCFAssignment]:
    """All assignments of weight 0..max_weight turning `base` into a zero CF.

    The empty base gives the single absent assignment of weight -1; a base of
    length 1 gives nothing (a single positive entry is never a zero CF).
    """
    base = tuple(base)
    if max_weight > MAX_WEIGHT:
        raise OutOfRange(f"max_weight must be <= {MAX_WEIGHT}")
    if not base:
        return [ABSENT]
    if len(base) == 1:
        return []
    budget = max_weight + 1
    if formal:
        candidates = [k for k in _formal_zero_cfs(base, budget, {}) if min(k) >= 1]
    else:
        candidates = _strict_zero_cfs(base, budget)
    out = []
    for k in candidates:
        weight = sum(base) - sum(k) - 1
        if 0 <= weight <= max_weight:
            out.append(ZeroCFAssignment(base, k, weight))
    return sorted(out, key=ZeroCFAssignment.sort_key)


def _side_assignments(side: Chain, max_weight: int, formal: bool) -> List[ZeroCFAssignment]:
    # a single entry [f] collapses to [0] at weight f-1
    if len(side) == 1:
        if side[0] - 1 <= max_weight:
            return [ZeroCFAssignment(side, (0,), side[0] - 1)]
        return []
    return enumerate_zero_cf_assignments(side, max_weight, formal)


def count_zero_cfs(s: int) -> int:
    """Number of zero CFs of length s, by exhaustive blow-ups of [1,1]; a Catalan number."""
    if s < 2:
        raise OutOfRange("zero continued fractions have length >= 2")
    level: Set[Chain] = {(1, 1)}
    for _ in range(s - 2):
        level = {blow_up_step(c, pos) for c in level for pos in range(len(c) + 1)}
    expected = comb(2 * (s - 1), s - 1) // s
    if len(level) != expected:
        raise IdentityViolation(f"{len(level)} zero CFs of length {s}, Catalan number is {expected}")
    return len(level)


def christophersen_stevens(c: CQS) -> List[Chain]:
    """Zero CFs [k1..ks] with 1 <= ki <= bi where Delta/(Delta-Omega) = [b1..bs]."""
    b = c.dual_chain()
    if len(b) == 1:
        return [(0,)]
    return sorted(_strict_zero_cfs(b, sum(b)))


# ============================================================================
# Markings
# ============================================================================

@dataclass(frozen=True)
class Marking:
    pair: WahlPair
    chain: Chain
    kind: Kind
    central: int
    left: ZeroCFAssignment
    right: ZeroCFAssignment
    degree: int = field(compare=False)

    @property
    def central_mark(self) -> int:
        return self.chain[self.central - 1]

    @property
    def k(self) -> Chain:
        return self.left.k + (self.central_mark,) + self.right.k

    @property
    def decrements(self) -> Chain:
        """Decrement per entry of the Wahl chain; 0 at the central entry."""
        return tuple(e - k if i + 1 != self.central else 0 for i, (e, k) in enumerate(zip(self.chain, self.k)))

    @property
    def weights(self) -> Tuple[int, ...]:
        if self.kind == "I":
            side = self.right if self.left.is_absent else self.left
            return (max(side.weight, 0),)
        return (self.left.weight, self.right.weight)

    @property
    def u(self) -> Tuple[int, ...]:
        if self.kind == "I":
            side = self.right if self.left.is_absent else self.left
            return (side.u,)
        return (self.left.u, self.right.u)

    def record(self) -> Dict:
        return {
            "n": self.pair.n,
            "a": self.pair.a,
            "chain": list(self.chain),
            "kind": self.kind,
            "degree": self.degree,
            "central_index": self.central,
            "left": list(self.left.k),
            "right": list(self.right.k),
            "marking": format_marking(self),
        }


def format_marking(m: Marking) -> str:
    parts = [f"u{{{e}}}" if i + 1 == m.central else str(e) for i, e in enumerate(m.k)]
    return "[" + ",".join(parts) + "]"


_MARK_RE = re.compile(r"u\{(\d+)\}|_(\d+)_?")


def parse_marking(text: str) -> Tuple[int, Chain]:
    """Parse "[2,1,2,u{10},...]" (or "_10_") into (central index, marked chain)."""
    body = text.strip().strip("[]")
    central = None
    k: List[int] = []
    for pos, token in enumerate(t.strip() for t in body.split(",")):
        m = _MARK_RE.fullmatch(token)
        if m:
            if central is not None:
                raise InvalidMarking(f"two central marks in {text!r}")
            central = pos + 1
            token = m.group(1) or m.group(2)
        if not token.isdigit():
            raise InvalidMarking(f"bad entry {token!r} in {text!r}")
        k.append(int(token))
    if central is None:
        raise InvalidMarking(f"no central mark in {text!r}")
    return central, tuple(k)


def _check_marking(m: Marking) -> None:
    r = len(m.chain)
    if r > 1:
        expected = m.degree + (m.u[0] - 3 if m.kind == "I" else sum(m.u) - 1)
        if m.central_mark != expected or min(m.u) < 0:
            raise IdentityViolation(f"central mark law fails for {format_marking(m)}: u={m.u}")
    if m.degree >= 5:
        if m.kind == "I" and m.central_mark < 3 and not (r == 2 and m.central_mark == 2):
            raise IdentityViolation(f"type I marking {format_marking(m)} of degree {m.degree} has central mark < 3")
        if m.kind == "II" and m.central_mark < 5:
            raise IdentityViolation(f"type II marking {format_marking(m)} of degree {m.degree} has central mark < 5")


def classify_markings(p: WahlPair, max_weight: int = MAX_WEIGHT, formal: bool = True) -> List[Marking]:
    """Every type I / type II marking of degree 1..9 of the Wahl chain of p.

    The formal census is the default; formal=False keeps only the markings whose
    sides blow down to [1,1].
    """
    chain = wahl_chain(p)
    r = len(chain)
    out: List[Marking] = []
    if r == 1:
        out.append(Marking(p, chain, "I", 1, ABSENT, ABSENT, 9))
    else:
        for central in (1, r):
            side = chain[1:] if central == 1 else chain[:-1]
            for a in _side_assignments(side, max_weight, formal):
                left, right = (ABSENT, a) if central == 1 else (a, ABSENT)
                out.append(Marking(p, chain, "I", central, left, right, 9 - a.weight))
        for central in range(2, r):
            lefts = _side_assignments(chain[:central - 1], max_weight, formal)
            rights = _side_assignments(chain[central:], max_weight, formal)
            for a in lefts:
                for b in rights:
                    if a.weight + b.weight <= max_weight:
                        out.append(Marking(p, chain, "II", central, a, b, 9 - a.weight - b.weight))
    out.sort(key=lambda m: (m.central, m.left.sort_key(), m.right.sort_key()))
    for m in out:
        _check_marking(m)
    nines = [m for m in out if m.degree == 9]
    if len(nines) > 1:
        raise IdentityViolation(f"{p} has {len(nines)} degree-9 markings")
    logger.debug("%s: %d markings (formal=%s)", p, len(out), formal)
    return out


def find_marking(p: WahlPair, central: int, k: Sequence[int], formal: bool = False) -> Marking:
    for m in classify_markings(p, formal=formal):
        if m.central == central and m.k == tuple(k):
            return m
    raise InvalidMarking(f"{format_chain(k)} with central index {central} is not a marking of {p}")


def type_one_markings(p: WahlPair, degree: int) -> List[Marking]:
    """Type I markings of one degree with central entry e1, without the full census."""
    chain = wahl_chain(p)
    if len(chain) == 1:
        return [Marking(p, chain, "I", 1, ABSENT, ABSENT, 9)] if degree == 9 else []
    weight = 9 - degree
    if not 0 <= weight <= MAX_WEIGHT:
        raise OutOfRange(f"degree must be in 1..9, got {degree}")
    out = []
    for a in _side_assignments(chain[1:], weight, False):
        if a.weight == weight:
            m = Marking(p, chain, "I", 1, ABSENT, a, degree)
            _check_marking(m)
            out.append(m)
    return out


def marking_degree_histogram(p: WahlPair, formal: bool = True) -> Dict[int, int]:
    hist: Dict[int, int] = {}
    for m in classify_markings(p, formal=formal):
        hist[m.degree] = hist.get(m.degree, 0) + 1
    return dict(sorted(hist.items()))


def canonical_markings(p: WahlPair) -> Tuple[Marking, Marking]:
    """The two type I markings built from the Wahl-algorithm center (central e1, then er).

    Degrees are computed, not assumed: for [2,...,2,x+4] one of the two has
    degree 8.
    """
    chain = wahl_chain(p)
    if chain in ((4,), (5, 2), (2, 5)):
        raise ExcludedChain(f"{format_chain(chain)} has no canonical markings")
    r = len(chain)
    center, _ = wahl_center(chain)
    post = post_center(chain)
    out = []
    for central in (1, r):
        d = [0] * r
        d[center - 1] += 4
        d[post - 1] += 1
        d[(r if central == 1 else 1) - 1] += 1
        d[central - 1] = 0
        k = tuple(e - x for e, x in zip(chain, d))
        side_base = chain[1:] if central == 1 else chain[:-1]
        side_k = k[1:] if central == 1 else k[:-1]
        if not is_zero_cf(side_k):
            raise IdentityViolation(f"canonical side {format_chain(side_k)} of {format_chain(chain)} is not a zero CF")
        a = ZeroCFAssignment(side_base, side_k, sum(d) - 1)
        left, right = (ABSENT, a) if central == 1 else (a, ABSENT)
        m = Marking(p, chain, "I", central, left, right, 9 - a.weight)
        _check_marking(m)
        out.append(m)
    return out[0], out[1]


# ============================================================================
# Degrees
# ============================================================================

RESIDUAL_NOTE = (
    "1/4(1,1): the degree-9 model is P(1,1,4); lower degrees come from blowing up "
    "points away from the singularity"
)


def realizable_degrees(p: WahlPair) -> FrozenSet[int]:
    """Degrees l such that the Wahl chain is del Pezzo of some degree >= l (strict census)."""
    markings = classify_markings(p, formal=False)
    if not markings:
        return frozenset()
    return frozenset(range(1, max(m.degree for m in markings) + 1))


def realizability_report(p: WahlPair) -> Dict:
    markings = classify_markings(p, formal=False)
    best: Dict[int, str] = {}
    for m in markings:
        best.setdefault(m.degree, format_marking(m))
    degrees = sorted(realizable_degrees(p))
    report = {
        "n": p.n,
        "a": p.a,
        "degrees": degrees,
        "max_degree": max(degrees) if degrees else None,
        "witnesses": {str(d): best[d] for d in sorted(best)},
    }
    if (p.n, p.a) == (2, 1):
        report["note"] = RESIDUAL_NOTE
    return report


@dataclass(frozen=True)
class FiberMarking:
    pair: WahlPair
    assignment: ZeroCFAssignment
    degree: int


def fiber_type_markings(p: WahlPair) -> List[FiberMarking]:
    """Zero CF assignments of the whole chain; degree 8 - weight, kept when positive."""
    chain = wahl_chain(p)
    out = [
        FiberMarking(p, a, 8 - a.weight)
        for a in _side_assignments(chain, MAX_WEIGHT, False)
        if 8 - a.weight >= 1
    ]
    for fm in out:
        if fm.degree > 5 or (fm.degree == 5 and chain != (4,)):
            raise IdentityViolation(f"{p} has a fiber-type marking of degree {fm.degree}")
    return out


def harvest_chain(A: int, B: int) -> Chain:
    """[2]*B + [A+4] + [2]*(A-1) + [B+2]; never del Pezzo of degree >= 5 for B >= A+4."""
    return (2,) * B + (A + 4,) + (2,) * (A - 1) + (B + 2,)
