"""
wahl.py - Wahl chains: construction, recognition, generation and duals

A Wahl singularity 1/n^2(1, na-1) is named by the pair (n, a). The pair
(1, 0) is the smooth-point sentinel; its chain is empty.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd, isqrt
import logging
from typing import Iterator, List, Optional, Sequence, Tuple

from cfkernel import Chain, evaluate, expand, format_chain
from errors import IdentityViolation, InvalidChain, NotCoprime, OutOfRange, Sentinel

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class WahlPair:
    n: int
    a: int

    def __post_init__(self) -> None:
        if (self.n, self.a) == (1, 0):
            return
        if not 0 < self.a < self.n:
            raise OutOfRange(f"need 0 < a < n, got ({self.n},{self.a})")
        if gcd(self.n, self.a) != 1:
            raise NotCoprime(f"gcd({self.n}, {self.a}) != 1")

    @property
    def is_smooth(self) -> bool:
        return self.n == 1

    def reversed(self) -> "WahlPair":
        if self.is_smooth:
            return self
        return WahlPair(self.n, self.n - self.a)

    def __str__(self) -> str:
        return "[]" if self.is_smooth else f"[{self.n}/{self.a}]"


SMOOTH = WahlPair(1, 0)


def wahl_chain(p: WahlPair) -> Chain:
    """expand(n^2, na-1)."""
    if p.is_smooth:
        raise Sentinel("the smooth sentinel (1,0) has no Wahl chain")
    return expand(p.n * p.n, p.n * p.a - 1)


def slot_chain(p: WahlPair) -> Chain:
    """Chain of a slot in a chain of singularities; empty for a smooth slot."""
    return () if p.is_smooth else wahl_chain(p)


def recognize_wahl(chain: Sequence[int]) -> Optional[WahlPair]:
    if not chain or min(chain) < 2:
        return None
    try:
        value = evaluate(chain)
    except InvalidChain:
        return None
    m, q = value.numerator, value.denominator
    n = isqrt(m)
    if n < 2 or n * n != m or (q + 1) % n:
        return None
    a = (q + 1) // n
    if not 0 < a < n or gcd(n, a) != 1:
        return None
    return WahlPair(n, a)


# ============================================================================
# Wahl algorithm
# ============================================================================

def generate_wahl(max_length: int) -> Iterator[Tuple[WahlPair, Chain, int]]:
    """Every Wahl chain of length <= max_length, shortest first, with its center.

    From [4] the two moves are L: [e1+1,...,er,2] and R: [2,e1,...,er+1]; the
    center is the position of the original 4 and moves right with every R.
    """
    if max_length < 1:
        raise OutOfRange("max_length must be >= 1")
    queue = deque([((4,), 1)])
    while queue:
        chain, center = queue.popleft()
        pair = recognize_wahl(chain)
        if pair is None:
            raise IdentityViolation(f"Wahl algorithm produced non-Wahl chain {format_chain(chain)}")
        yield pair, chain, center
        if len(chain) < max_length:
            queue.append(((chain[0] + 1,) + chain[1:] + (2,), center))
            queue.append(((2,) + chain[:-1] + (chain[-1] + 1,), center + 1))


def wahl_center(chain: Sequence[int]) -> Tuple[int, List[str]]:
    """Undo the Wahl algorithm; returns (center index, moves in the order they were applied)."""
    w = list(chain)
    undone: List[str] = []
    while len(w) > 1:
        if w[-1] == 2:
            undone.append("L")
            w.pop()
            w[0] -= 1
        elif w[0] == 2:
            undone.append("R")
            w.pop(0)
            w[-1] -= 1
        else:
            raise InvalidChain(f"{format_chain(chain)} is not a Wahl chain")
    if w != [4]:
        raise InvalidChain(f"{format_chain(chain)} is not a Wahl chain")
    moves = undone[::-1]
    return 1 + moves.count("R"), moves


def post_center(chain: Sequence[int]) -> Optional[int]:
    """Index of the entry created by the first move after [4]; None for [4]."""
    center, moves = wahl_center(chain)
    if not moves:
        return None
    return center + 1 if moves[0] == "L" else center - 1


# ============================================================================
# Duals
# ============================================================================

def wahl_dual(p: WahlPair) -> Chain:
    """expand(n^2, n^2-na+1) = [x1..xu, 2, yv..y1] with n/a=[y], n/(n-a)=[x]."""
    if p.is_smooth:
        raise Sentinel("the smooth sentinel (1,0) has no dual chain")
    n, a = p.n, p.a
    out = expand(n * n, n * n - n * a + 1)
    y = expand(n, a)
    x = expand(n, n - a)
    if out != x + (2,) + y[::-1]:
        raise IdentityViolation(f"dual of {p} is {format_chain(out)}, not x+[2]+reversed(y)")
    rebuilt = y[:-1] + (y[-1] + x[-1],) + x[:-1][::-1]
    if rebuilt != wahl_chain(p):
        raise IdentityViolation(f"Wahl chain of {p} does not rebuild from n/a and n/(n-a)")
    logger.debug("dual of %s is %s", p, format_chain(out))
    return out
