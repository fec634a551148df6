"""
bundles.py - Exceptional bundle numerics read off chains of Wahl singularities

For a chain P_0 - G_1 - P_1 - ... - G_m - P_m the bundle E_i has rank n_i and
c1(E_i) = -n_i (A + G_1 + ... + G_i). Degrees are deg(E) = -c1(E).K, so
deg(E_i) = n_i (A + G_1 + ... + G_i).K. Self-intersections are computed on the
minimal resolution from pullback coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import logging
from math import gcd
from typing import Dict, List, Optional, Tuple

from diophantine import get_pell_family
from errors import MissingPullback, NotCoprime, NotNef, OutOfRange, require
from geometry import SingChain, pullback_coefficient, solve_tridiagonal
from marking import Marking, classify_markings, format_marking
from wahl import SMOOTH, WahlPair, wahl_chain

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BundleRecord:
    rank: int
    degree: int
    c1_sq: Fraction
    c2: int

    @property
    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)

    def record(self) -> Dict:
        return {
            "rank": self.rank,
            "degree": self.degree,
            "c1_sq": str(self.c1_sq),
            "c2": self.c2,
            "slope": str(self.slope),
        }


def _tail_coefficient(p: WahlPair) -> Fraction:
    """Pullback coefficient at E_r of a curve meeting the last component."""
    if p.is_smooth:
        return Fraction(0)
    chain = wahl_chain(p)
    return pullback_coefficient(chain, len(chain))


def _head_coefficient(p: WahlPair) -> Fraction:
    if p.is_smooth:
        return Fraction(0)
    return pullback_coefficient(wahl_chain(p), 1)


def _crossing(p: WahlPair) -> Fraction:
    """G.G' for two curves through p, one meeting E_1 and one meeting E_r."""
    if p.is_smooth:
        return Fraction(1)
    chain = wahl_chain(p)
    rhs = [Fraction(0)] * len(chain)
    rhs[-1] = Fraction(-1)
    return solve_tridiagonal(chain, rhs)[0]


def gamma_squares(s: SingChain) -> Tuple[Fraction, ...]:
    """G_j^2 on the singular surface: -c_j plus the pullback corrections at both ends."""
    return tuple(
        -c + _tail_coefficient(s.sings[j]) + _head_coefficient(s.sings[j + 1])
        for j, c in enumerate(s.cs)
    )


def hec_from_chain(
    s: SingChain,
    a_dot_k: Optional[Fraction] = None,
    a_sq: Optional[Fraction] = None,
    a_dot_gamma1: Optional[Fraction] = None,
) -> List[BundleRecord]:
    """Rank, degree and Chern numbers of E_0, ..., E_m.

    A is linearly trivial when P_0 is smooth; otherwise A.K, A^2 and A.G_1 must
    be supplied and A meets no other curve of the chain.
    """
    p0 = s.sings[0]
    data = (a_dot_k, a_sq, a_dot_gamma1)
    if p0.is_smooth:
        a_dot_k, a_sq, a_dot_gamma1 = (Fraction(0) if x is None else Fraction(x) for x in data)
    elif any(x is None for x in data):
        raise MissingPullback(f"{s}: P_0 = {p0} is singular, A.K, A^2 and A.G_1 are needed")
    else:
        a_dot_k, a_sq, a_dot_gamma1 = (Fraction(x) for x in data)

    ks = s.k_intersections()
    squares = gamma_squares(s)
    crossings = [_crossing(p) for p in s.sings[1:-1]]
    out: List[BundleRecord] = []
    k_sum, d_sq = a_dot_k, a_sq
    for i, p in enumerate(s.sings):
        if i >= 1:
            k_sum += ks[i - 1]
            d_sq += squares[i - 1] + 2 * (a_dot_gamma1 if i == 1 else crossings[i - 2])
        n, a = p.n, p.a
        deg = n * k_sum
        require(deg.denominator == 1, f"{s}: deg(E_{i}) = {deg} is not an integer")
        deg = int(deg)
        require((deg + a) % n == 0, f"{s}: deg(E_{i}) = {deg} is not -{a} mod {n}")
        require(gcd(n, deg) == 1, f"{s}: rank {n} and degree {deg} of E_{i} share a factor")
        c1_sq = n * n * d_sq
        c2 = Fraction(n - 1, 2 * n) * (c1_sq + n + 1)
        require(c2.denominator == 1, f"{s}: c2(E_{i}) = {c2} is not an integer")
        out.append(BundleRecord(n, deg, c1_sq, int(c2)))
    logger.debug("%s: bundles %s", s, [(b.rank, b.degree) for b in out])
    return out


def hom_dimensions(s: SingChain) -> List[List[int]]:
    """hom(E_j, E_i) = -n_i n_j (G_{i+1} + ... + G_j).K at row j, column i, for i < j."""
    ks = s.k_intersections()
    if any(k > 0 for k in ks):
        raise NotNef(f"{s} has a curve with K.G > 0")
    size = len(s.sings)
    ranks = [p.n for p in s.sings]
    out = [[0] * size for _ in range(size)]
    for j in range(size):
        for i in range(j):
            value = -ranks[i] * ranks[j] * sum(ks[i:j], Fraction(0))
            require(value.denominator == 1 and value >= 0, f"{s}: hom(E_{j}, E_{i}) = {value}")
            out[j][i] = int(value)
    return out


# ============================================================================
# Degree realizability
# ============================================================================

def fiber_type_degrees(p: WahlPair, d: int) -> Tuple[int, int]:
    """Degrees a + n(2-d) and n - a + n(2-d) from the fiber-type chain of p on F_d."""
    if d < 0:
        raise OutOfRange("d must be >= 0")
    shift = p.n * (2 - d)
    return p.a + shift, p.n - p.a + shift


def dual_twist(n: int, degree: int) -> int:
    """Degree of E^v (x) O(K) against O on a degree 4 surface."""
    return -degree - 4 * n


def twist_ladder(n: int, count: int) -> List[int]:
    """Degrees of rank n reached at degree 4 from F_0, ..., F_count and one dual twist."""
    if n < 2:
        raise OutOfRange("n must be >= 2")
    if count < 0:
        raise OutOfRange("count must be >= 0")
    found = set()
    for a in range(1, n):
        if gcd(n, a) != 1:
            continue
        for d in range(count + 1):
            for x in fiber_type_degrees(WahlPair(n, a), d):
                found.add(x)
                found.add(dual_twist(n, x))
    return sorted(found)


def ladder_witness(n: int, degree: int) -> Dict:
    """Fiber-type data realizing a rank n bundle of the given degree at degree 4."""
    b = degree % n
    d = 2 - (degree - b) // n
    if d >= 0:
        a, flipped, dual = b, False, False
    else:
        # -b' + n(d - 6) with b' = n - b
        b2 = n - b
        d = 6 + (degree + b2) // n
        a, flipped, dual = b2, False, True
    p = WahlPair(n, a)
    x = fiber_type_degrees(p, d)[0]
    require((dual_twist(n, x) if dual else x) == degree, f"ladder witness for ({n}, {degree}) misses")
    if a > n - a:
        p, flipped = p.reversed(), True
    return {
        "pair": str(p),
        "chain": list(wahl_chain(p)),
        "hirzebruch": d,
        "flipped": flipped,
        "dual_twist": dual,
    }


@dataclass(frozen=True)
class RealizabilityVerdict:
    n: int
    degree: int
    level: int
    realizable: bool
    witness: Optional[Dict] = None
    certificate: Optional[Dict] = None

    def record(self) -> Dict:
        out = {"n": self.n, "degree": self.degree, "level": self.level, "realizable": self.realizable}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


def _best_marking(p: WahlPair, level: int) -> Optional[Marking]:
    best = None
    for m in classify_markings(p, max_weight=9 - level, formal=False):
        if m.degree >= level and (best is None or m.degree > best.degree):
            best = m
    return best


def realizable_rank_degree(n: int, degree: int, level: int) -> RealizabilityVerdict:
    """Whether a rank n, degree `degree` exceptional bundle can live on a del Pezzo of degree `level`.

    Degrees up to 4 are always reached (blow up general points below 4). From 5
    on, the Wahl chain of (n, +-degree mod n) needs a marking of degree >= level.
    """
    if n < 2:
        raise OutOfRange("n must be >= 2")
    if not 1 <= level <= 9:
        raise OutOfRange(f"level must be in 1..9, got {level}")
    if gcd(n, degree) != 1:
        raise NotCoprime(f"gcd({n}, {degree}) != 1")
    if level <= 4:
        witness = ladder_witness(n, degree)
        if level < 4:
            witness["blow_ups"] = 4 - level
        return RealizabilityVerdict(n, degree, level, True, witness=witness)
    pairs = sorted({WahlPair(n, (-degree) % n), WahlPair(n, degree % n)})
    for p in pairs:
        m = _best_marking(p, level)
        if m is not None:
            witness = {"pair": str(p), "marking": format_marking(m), "degree": m.degree}
            return RealizabilityVerdict(n, degree, level, True, witness=witness)
    certificate = {
        "pairs": [str(p) for p in pairs],
        "chains": [list(wahl_chain(p)) for p in pairs],
        "markings_of_degree_at_least": level,
        "count": 0,
    }
    logger.info("rank %d degree %d is not realizable in degree %d", n, degree, level)
    return RealizabilityVerdict(n, degree, level, False, certificate=certificate)


def pell_bundle(level: int, norm: int, branch: int, k: int) -> Dict:
    """The bundle of (0)-[n(k)/n(k-1)] with its companion of degree n(k-1) + (1-l) n(k)."""
    if k < 1:
        raise OutOfRange("k must be >= 1")
    fam = get_pell_family(level, norm, branch)
    seq = fam.sequence(k + 1)
    (prev, _), (n, d) = seq[k - 1], seq[k]
    s = SingChain((SMOOTH, WahlPair(n, prev)), (0,))
    e1 = hec_from_chain(s)[1]
    require(e1.degree == d, f"Pell {fam.key}, k={k}: bundle degree {e1.degree}, family degree {d}")
    return {
        "chain": str(s),
        "rank": e1.rank,
        "degree": e1.degree,
        "companion_degree": prev + (1 - level) * n,
        "c1_sq": str(e1.c1_sq),
        "c2": e1.c2,
    }
