"""
diophantine.py - Markov triples, Markov-type equations, degree 8 relations,
Hodge bounds and the Pell families of del Pezzo Wahl chains

Everything here is integer arithmetic on top of the marking census: a Markov
triple (x, y, z) names the Wahl singularity of index z whose chain carries the
unique degree-9 marking, and each Pell family is a sequence of Wahl chains with
a type I marking of a fixed degree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
import json
import logging
from math import isqrt
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from cfkernel import Chain, format_chain, mod_inverse
from config import pell_seeds_path
from errors import IdentityViolation, InvalidChain, OutOfRange, UnknownFamily, require
from geometry import SingChain
from marking import Marking, classify_markings, format_marking, type_one_markings
from toric import build_fake_wpp, hodge_inequality, side_value
from wahl import WahlPair, wahl_chain

logger = logging.getLogger(__name__)


# ============================================================================
# Markov triples
# ============================================================================

@dataclass(frozen=True, order=True)
class MarkovTriple:
    x: int
    y: int
    z: int

    def __post_init__(self) -> None:
        if not 0 < self.x <= self.y <= self.z:
            raise OutOfRange(f"need 0 < x <= y <= z, got {self.as_tuple()}")
        if self.x ** 2 + self.y ** 2 + self.z ** 2 != 3 * self.x * self.y * self.z:
            raise OutOfRange(f"{self.as_tuple()} is not a Markov triple")

    @classmethod
    def of(cls, *values: int) -> "MarkovTriple":
        return cls(*sorted(values))

    def as_tuple(self) -> Tuple[int, int, int]:
        return self.x, self.y, self.z

    def mutations(self) -> List["MarkovTriple"]:
        x, y, z = self.as_tuple()
        out = []
        for t in ((3 * y * z - x, y, z), (x, 3 * x * z - y, z), (x, y, 3 * x * y - z)):
            if min(t) > 0:
                out.append(MarkovTriple.of(*t))
        return out

    def __str__(self) -> str:
        return f"({self.x},{self.y},{self.z})"


def markov_triples(limit: int) -> List[MarkovTriple]:
    """Every Markov triple with z <= limit, by traversing the tree from (1,1,1)."""
    if limit < 2:
        raise OutOfRange("limit must be >= 2")
    root = MarkovTriple(1, 1, 1)
    seen = {root}
    queue = deque([root])
    while queue:
        t = queue.popleft()
        for m in t.mutations():
            if m.z <= limit and m not in seen:
                seen.add(m)
                queue.append(m)
    out = sorted(seen, key=lambda t: (t.z, t.y, t.x))
    logger.debug("%d Markov triples with z <= %d", len(out), limit)
    return out


def fibonacci_branch(count: int) -> List[MarkovTriple]:
    """(1, F_{2k-1}, F_{2k+1}) for k = 1..count."""
    if count < 1:
        raise OutOfRange("count must be >= 1")
    fib = [0, 1]
    while len(fib) < 2 * count + 2:
        fib.append(fib[-1] + fib[-2])
    return [MarkovTriple(1, fib[2 * k - 1], fib[2 * k + 1]) for k in range(1, count + 1)]


def markov_pair(t: MarkovTriple) -> WahlPair:
    """The Wahl singularity of index z: a = 3 y x^-1 mod z."""
    if t.z < 2:
        raise OutOfRange(f"{t} has z = 1, no Wahl singularity")
    return WahlPair(t.z, 3 * t.y * mod_inverse(t.x % t.z, t.z) % t.z)


def markov_correspondence(t: MarkovTriple) -> Dict:
    """Degree-9 marking and fake weighted projective plane P(z^2, x^2, y^2) of a triple."""
    p = markov_pair(t)
    nines = [m for m in classify_markings(p, max_weight=0, formal=False) if m.degree == 9]
    require(len(nines) == 1, f"{t}: {p} has {len(nines)} degree-9 markings")
    w = build_fake_wpp(nines[0])
    expected = sorted((t.z ** 2, t.x ** 2, t.y ** 2))
    require(sorted(w.weights) == expected, f"{t}: weights {w.weights}, expected {expected}")
    return {
        "triple": list(t.as_tuple()),
        "n": p.n,
        "a": p.a,
        "chain": list(wahl_chain(p)),
        "marking": format_marking(nines[0]),
        "weights": list(w.weights),
    }


# ============================================================================
# Markov-type equations
# ============================================================================

def t_singularity_equation(n: int, n1: int, n2: int, d1: int, d2: int) -> bool:
    """(n^2 + d1 n1^2 + d2 n2^2)^2 == (11 - d1 - d2) d1 d2 n^2 n1^2 n2^2."""
    if min(n, n1, n2, d1, d2) < 1:
        raise OutOfRange("all inputs must be positive")
    if d1 + d2 > 10:
        raise OutOfRange(f"d1 + d2 = {d1 + d2} > 10")
    level = 11 - d1 - d2
    return (n * n + d1 * n1 * n1 + d2 * n2 * n2) ** 2 == level * d1 * d2 * (n * n1 * n2) ** 2


def markov_type_table() -> List[Dict]:
    """(d1, d2), d1 <= d2, whose degree 11 - d1 - d2 times d1 d2 is a square."""
    out = []
    for d1 in range(1, 10):
        for d2 in range(d1, 11 - d1):
            level = 11 - d1 - d2
            v = level * d1 * d2
            if isqrt(v) ** 2 == v:
                out.append({"d1": d1, "d2": d2, "degree": level, "root": isqrt(v)})
    return out


def _degree8_identities(pairs: Sequence[WahlPair]) -> bool:
    (n0, a0), (n1, a1), (n2, a2), (n3, a3) = ((p.n, p.a) for p in pairs)
    delta = n0 * a1 - n1 * a0
    delta2 = n2 * a3 - n3 * a2
    squares = delta * n0 * n1 + delta2 * n2 * n3 == n0 * n0 + n1 * n1 + n2 * n2 + n3 * n3
    weighted = delta * n0 * a1 + delta2 * a2 * n3 == n0 * a0 + n1 * a1 + n2 * a2 + n3 * a3
    return squares and weighted


def degree8_relations(s: SingChain) -> bool:
    """The two degree 8 identities on [n0]-(1)-[n1]-(1)-[n2]-(1)-[n3].

    Read left to right or, with every pair flipped to (n, n-a), right to left.
    """
    if len(s.sings) != 4:
        raise InvalidChain(f"{s} has {len(s.sings)} slots, need 4")
    return _degree8_identities(s.sings) or _degree8_identities([p.reversed() for p in s.sings[::-1]])


# ============================================================================
# Hodge bounds
# ============================================================================

def hodge_bound(m: Marking) -> bool:
    """(n^2 + m1 + m2)^2 >= l n^2 m1 m2 for the fake weighted projective plane of m."""
    e, i = m.chain, m.central
    m1, _ = side_value(e[:i - 1][::-1])
    m2, _ = side_value(e[i:])
    return hodge_inequality(m.pair.n, m1, m2, m.degree)


def type_one_hodge_margin(n: int, a: int, level: int) -> int:
    """(n + a)^2 - l (n a - 1); never negative for a type I marking of degree l at e1."""
    return (n + a) ** 2 - level * (n * a - 1)


def norm_margin(n: int, degree: int, level: int) -> int:
    """deg^2 + l n deg + l n^2 + 1."""
    return degree * degree + level * n * degree + level * n * n + 1


def degree5_family(t: int) -> Dict:
    """[t+2, 5, 2, ..., 2] with n = 2t + 3, a = 2 and its degree-5 type I marking."""
    if t < 1:
        raise OutOfRange("t must be >= 1")
    p = WahlPair(2 * t + 3, 2)
    chain = wahl_chain(p)
    require(chain == (t + 2, 5) + (2,) * t, f"t={t}: chain is {format_chain(chain)}")
    marks = type_one_markings(p, 5)
    require(bool(marks), f"{p} has no degree-5 type I marking at e1")
    n, a = p.n, p.a
    degrees = (a + n * (1 - 5), -a - n)
    return {
        "t": t,
        "n": n,
        "a": a,
        "chain": list(chain),
        "marking": format_marking(marks[0]),
        "degrees": list(degrees),
        "hodge_margin": type_one_hodge_margin(n, a, 5),
        "norm_margin": norm_margin(n, degrees[1], 5),
    }


# ============================================================================
# Pell families
# ============================================================================

@dataclass(frozen=True)
class ChainShape:
    """[head^(k+head_offset), middle, block^(k+block_offset), tail]."""

    head: int
    head_offset: int
    middle: Tuple[int, ...]
    block: Tuple[int, ...]
    block_offset: int
    tail: Tuple[int, ...]
    kmin: int

    def chain(self, k: int) -> Chain:
        return (
            (self.head,) * (k + self.head_offset)
            + self.middle
            + self.block * max(0, k + self.block_offset)
            + self.tail
        )


@dataclass(frozen=True)
class PellFamily:
    level: int
    norm: int
    branch: int
    seeds: Tuple[Tuple[int, int], Tuple[int, int]]
    printed: Tuple[Tuple[int, int], Tuple[int, int]]
    shape: ChainShape
    markings: Tuple[ChainShape, ...] = field(default=(), compare=False)
    note: Optional[str] = field(default=None, compare=False)

    @property
    def key(self) -> Tuple[int, int, int]:
        return self.level, self.norm, self.branch

    def sequence(self, count: int) -> List[Tuple[int, int]]:
        """(n(k), d(k)) for k = 0..count-1."""
        (n0, d0), (n1, d1) = self.seeds
        ns, ds = [n0, n1], [d0, d1]
        while len(ns) < count:
            ns.append((self.level - 2) * ns[-1] - ns[-2])
            ds.append((self.level - 2) * ds[-1] - ds[-2])
        return list(zip(ns, ds))[:count]


@dataclass(frozen=True)
class PellMember:
    family: PellFamily
    k: int
    n: int
    degree: int
    pair: WahlPair
    chain: Chain
    marking: Marking

    def record(self) -> Dict:
        return {
            "level": self.family.level,
            "norm": self.family.norm,
            "branch": self.family.branch,
            "k": self.k,
            "n": self.n,
            "degree": self.degree,
            "pair": str(self.pair),
            "chain": list(self.chain),
            "marking": format_marking(self.marking),
        }


def _pair_of(values: Sequence[Sequence[int]]) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    (a, b), (c, d) = values
    return (a, b), (c, d)


def _shape_of(s: Dict) -> ChainShape:
    return ChainShape(
        s["head"], s["head_offset"], tuple(s["middle"]), tuple(s["block"]),
        s["block_offset"], tuple(s["tail"]), s["kmin"],
    )


@lru_cache(maxsize=4)
def _load_families(path: str) -> Dict[Tuple[int, int, int], PellFamily]:
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    out = {}
    for row in data["families"]:
        fam = PellFamily(
            row["l"], row["e"], row["j"], _pair_of(row["seeds"]), _pair_of(row["printed"]),
            _shape_of(row["shape"]), tuple(_shape_of(m) for m in row.get("markings", ())), row.get("note"),
        )
        out[fam.key] = fam
    logger.debug("loaded %d Pell families from %s", len(out), path)
    return out


def pell_families(path: Optional[Path] = None) -> List[PellFamily]:
    return list(_load_families(str(path or pell_seeds_path())).values())


def get_pell_family(level: int, norm: int, branch: int = 0, path: Optional[Path] = None) -> PellFamily:
    families = _load_families(str(path or pell_seeds_path()))
    try:
        return families[(level, norm, branch)]
    except KeyError:
        raise UnknownFamily(f"no Pell family with l={level}, e={norm}, j={branch}")


def check_pell_norms(family: PellFamily, count: int) -> List[Tuple[int, int]]:
    """The first count terms, each checked against d^2 + l n d + l n^2 = e."""
    seq = family.sequence(count)
    level = family.level
    for k, (n, d) in enumerate(seq):
        require(d * d + level * n * d + level * n * n == family.norm,
                f"{family.key}: norm fails at k={k} with (n, d) = ({n}, {d})")
        if k >= 1:
            require(d == -n - seq[k - 1][0], f"{family.key}: d({k}) = {d} is not -n({k}) - n({k - 1})")
    return seq


def pell_family(level: int, norm: int, branch: int, count: int) -> List[PellMember]:
    """Members k = 1..count: the Wahl chain of (n(k), n(k-1)) and a degree-l type I marking.

    From k = kmin on, every tabulated marking shape must be a type I marking of
    degree l and the member carries the first one.
    """
    if count < 1:
        raise OutOfRange("count must be >= 1")
    fam = get_pell_family(level, norm, branch)
    seq = check_pell_norms(fam, count + 1)
    out = []
    for k in range(1, count + 1):
        n, d = seq[k]
        pair = WahlPair(n, seq[k - 1][0])
        chain = wahl_chain(pair)
        if k >= fam.shape.kmin:
            shaped = fam.shape.chain(k)
            require(chain == shaped, f"{fam.key}, k={k}: chain {format_chain(chain)} is not {format_chain(shaped)}")
        marks = type_one_markings(pair, level)
        if not marks:
            raise IdentityViolation(f"{fam.key}, k={k}: {pair} has no type I marking of degree {level}")
        chosen = marks[0]
        if k >= fam.shape.kmin and fam.markings:
            by_k = {m.k: m for m in marks}
            shown = [shape.chain(k) for shape in fam.markings]
            for want in shown:
                require(want in by_k,
                        f"{fam.key}, k={k}: {format_chain(want)} is not a type I marking of degree {level}")
            chosen = by_k[shown[0]]
        out.append(PellMember(fam, k, n, d, pair, chain, chosen))
    logger.info("Pell family %s: %d members", fam.key, len(out))
    return out
