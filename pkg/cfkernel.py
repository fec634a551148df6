"""
cfkernel.py - Exact Hirzebruch-Jung continued fraction algebra

Chains are plain tuples of ints, indices are 1-based in every public
signature, values are Fractions.
The empty chain stands for a smooth point / empty wagon; it concatenates
like any other chain but has no value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
import re
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from errors import IdentityViolation, InvalidChain, NotContractible, NotCoprime, OutOfRange

Chain = Tuple[int, ...]
Matrix = Tuple[Tuple[int, int], Tuple[int, int]]


def as_chain(entries: Iterable[int]) -> Chain:
    chain = tuple(int(e) for e in entries)
    return chain


# ============================================================================
# Evaluation / expansion
# ============================================================================

def evaluate(chain: Sequence[int]) -> Fraction:
    """e1 - 1/(e2 - 1/(... - 1/er)), evaluated right to left.

    Every proper tail [e_j,...,e_r] (j >= 2) must be > 0 and the full value >= 0.
    """
    if len(chain) == 0:
        raise InvalidChain("the empty chain has no value")
    value = Fraction(chain[-1])
    for j in range(len(chain) - 2, -1, -1):
        if value <= 0:
            raise InvalidChain(f"tail starting at index {j + 2} of {format_chain(chain)} is {value}, not > 0")
        value = chain[j] - 1 / value
    if value < 0:
        raise InvalidChain(f"{format_chain(chain)} evaluates to {value} < 0")
    return value


def is_valid(chain: Sequence[int]) -> bool:
    try:
        evaluate(chain)
    except InvalidChain:
        return False
    return True


def expand(m: Union[int, Fraction], q: Optional[int] = None) -> Chain:
    """Unique chain with all entries >= 2 whose value is m/q (0 < q < m, coprime)."""
    if q is None:
        value = Fraction(m)
        m, q = value.numerator, value.denominator
        if value <= 1:
            raise OutOfRange(f"{value} is not > 1")
    m, q = int(m), int(q)
    if not 0 < q < m:
        raise OutOfRange(f"need 0 < q < m, got m={m}, q={q}")
    if gcd(m, q) != 1:
        raise NotCoprime(f"gcd({m}, {q}) = {gcd(m, q)}")
    out: List[int] = []
    while q:
        e = -(-m // q)
        out.append(e)
        m, q = q, e * q - m
    return tuple(out)


# ============================================================================
# Blow-ups / blow-downs
# ============================================================================

def blow_down_step(chain: Sequence[int], index: int) -> Chain:
    """Contract the 1 at `index`: [.., u, 1, v, ..] -> [.., u-1, v-1, ..]."""
    chain = list(chain)
    if tuple(chain) in ((1, 1), (1,)):
        raise NotContractible(f"{format_chain(chain)} is already minimal")
    if not 1 <= index <= len(chain) or chain[index - 1] != 1:
        raise NotContractible(f"no 1 at index {index} of {format_chain(chain)}")
    i = index - 1
    for j in (i - 1, i + 1):
        if 0 <= j < len(chain):
            if chain[j] < 2:
                raise NotContractible(f"neighbour at index {j + 1} of {format_chain(chain)} would drop below 1")
            chain[j] -= 1
    del chain[i]
    return tuple(chain)


def blow_up_step(chain: Sequence[int], position: int) -> Chain:
    """Insert a 1 after the first `position` entries, incrementing its neighbours.

    position 0 puts the new curve in front, position len(chain) at the end.
    """
    chain = list(chain)
    if not 0 <= position <= len(chain):
        raise OutOfRange(f"blow-up position {position} outside 0..{len(chain)}")
    if position > 0:
        chain[position - 1] += 1
    if position < len(chain):
        chain[position] += 1
    chain.insert(position, 1)
    return tuple(chain)


def minimal_model(chain: Sequence[int]) -> Chain:
    """Contract 1s (leftmost first) until [1,1], a single entry, or no 1 is left."""
    chain = tuple(chain)
    if chain:
        evaluate(chain)
    while len(chain) > 1 and chain != (1, 1) and 1 in chain:
        try:
            chain = blow_down_step(chain, chain.index(1) + 1)
        except NotContractible as e:
            raise InvalidChain(str(e))
    return chain


def is_zero_cf(chain: Sequence[int]) -> bool:
    """True iff the chain is a (strict) zero continued fraction: it blows down to [1,1]."""
    if len(chain) < 2 or min(chain) < 1:
        return False
    try:
        return evaluate(chain) == 0
    except InvalidChain:
        return False


def concat_with_one(left: Sequence[int], right: Sequence[int]) -> Chain:
    return tuple(left) + (1,) + tuple(right)


# ============================================================================
# Duality and matrices
# ============================================================================

def mod_inverse(q: int, m: int) -> int:
    """0 < q^-1 < m with q*q^-1 = 1 mod m. By convention 0 when m == 1."""
    if gcd(q, m) != 1:
        raise NotCoprime(f"{q} has no inverse modulo {m}")
    if m == 1:
        return 0
    return pow(q, -1, m)


def _require_minimal(chain: Sequence[int]) -> Fraction:
    if not chain or min(chain) < 2:
        raise InvalidChain(f"{format_chain(chain)} is not a minimal chain (entries >= 2)")
    return evaluate(chain)


def dual(chain: Sequence[int]) -> Chain:
    """The chain of m/(m-q) for a minimal chain of m/q."""
    value = _require_minimal(chain)
    m, q = value.numerator, value.denominator
    out = expand(m, m - q)
    if not is_zero_cf(concat_with_one(chain, out[::-1])):
        raise IdentityViolation(f"{format_chain(chain)} + [1] + reversed dual is not a zero continued fraction")
    return out


def matrix_of(chain: Sequence[int]) -> Matrix:
    """Product of [[e,-1],[1,0]] over the chain, checked against [[m,-q^-1],[q,(1-qq^-1)/m]]."""
    value = _require_minimal(chain)
    a, b, c, d = 1, 0, 0, 1
    for e in chain:
        a, b, c, d = a * e + b, -a, c * e + d, -c
    m, q = value.numerator, value.denominator
    q_inv = mod_inverse(q, m)
    expected = ((m, -q_inv), (q, (1 - q * q_inv) // m))
    result = ((a, b), (c, d))
    if result != expected:
        raise IdentityViolation(f"matrix of {format_chain(chain)} is {result}, expected {expected}")
    return result


@dataclass(frozen=True)
class CQS:
    """Cyclic quotient singularity 1/Delta(1, Omega)."""

    delta: int
    omega: int

    def __post_init__(self) -> None:
        if not 0 < self.omega < self.delta:
            raise OutOfRange(f"need 0 < Omega < Delta, got 1/{self.delta}(1,{self.omega})")
        if gcd(self.delta, self.omega) != 1:
            raise NotCoprime(f"gcd({self.delta}, {self.omega}) != 1")

    @classmethod
    def of_chain(cls, chain: Sequence[int]) -> "CQS":
        value = evaluate(minimal_model(chain))
        return cls(value.numerator, value.denominator)

    @property
    def omega_inverse(self) -> int:
        return mod_inverse(self.omega, self.delta)

    def chain(self) -> Chain:
        return expand(self.delta, self.omega)

    def dual_chain(self) -> Chain:
        """Delta/(Delta-Omega); the chain behind the Christophersen-Stevens set."""
        return expand(self.delta, self.delta - self.omega)

    def reversed(self) -> "CQS":
        return CQS(self.delta, self.omega_inverse)

    def __str__(self) -> str:
        return f"1/{self.delta}(1,{self.omega})"


# ============================================================================
# Literal syntax
# ============================================================================

_CHAIN_RE = re.compile(r"^\[?\s*([0-9*,\s]*)\s*\]?$")


def parse_chain(text: str) -> Tuple[Chain, Optional[int]]:
    """Parse "[3,2,2,7,2]" or "[2,2*,6]"; returns (chain, bar index or None)."""
    match = _CHAIN_RE.match(text.strip())
    if not match:
        raise InvalidChain(f"cannot parse chain literal {text!r}")
    body = match.group(1).strip()
    if not body:
        return (), None
    entries: List[int] = []
    bar: Optional[int] = None
    for pos, token in enumerate(t.strip() for t in body.split(",")):
        if token.endswith("*"):
            if bar is not None:
                raise InvalidChain(f"more than one bar in {text!r}")
            bar = pos + 1
            token = token[:-1]
        if not token.isdigit():
            raise InvalidChain(f"bad entry {token!r} in {text!r}")
        entries.append(int(token))
    return tuple(entries), bar


def format_chain(chain: Sequence[int], bar: Optional[int] = None) -> str:
    parts = [f"{e}*" if bar == i + 1 else str(e) for i, e in enumerate(chain)]
    return "[" + ",".join(parts) + "]"
