"""
toric.py - M-resolutions by toric search and fake weighted projective planes

Both live in the lattice Z^2. A cone(u, w) with det(u, w) = D is the cyclic
quotient 1/D(1, O) where (w + O u) / D is integral; smooth cones have D = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
import logging
from typing import Dict, List, Optional, Tuple

from cfkernel import CQS, Chain, evaluate, format_chain, minimal_model, mod_inverse
from errors import BoundTooSmall, IdentityViolation, InvalidChain, require
from geometry import SingChain
from marking import Marking, christophersen_stevens, format_marking
from wahl import SMOOTH, WahlPair

logger = logging.getLogger(__name__)

Vec = Tuple[int, int]


def det(u: Vec, w: Vec) -> int:
    return u[0] * w[1] - u[1] * w[0]


def _egcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def cone_type(u: Vec, w: Vec) -> Tuple[int, int]:
    """(D, O) with cone(u, w) = 1/D(1, O); (1, 0) for a smooth cone."""
    D = det(u, w)
    if D == 1:
        return 1, 0
    g, s, t = _egcd(u[0], u[1])
    require(g == 1, f"ray {u} is not primitive")
    return D, (-(s * w[0] + t * w[1])) % D


def wahl_cone(D: int, O: int) -> Optional[WahlPair]:
    n = isqrt(D)
    if n < 2 or n * n != D or (O + 1) % n:
        return None
    a = (O + 1) // n
    if not 0 < a < n or gcd(n, a) != 1:
        return None
    return WahlPair(n, a)


def _neighbour_towards(p: Vec, v: Vec) -> Vec:
    """Ray of the minimal resolution of cone(p, v) adjacent to v."""
    D = det(p, v)
    _, x, y = _egcd(v[1], -v[0])
    X = det(p, (x, y))
    t = -(X // D)
    return x + t * v[0], y + t * v[1]


def _neighbour_from(p: Vec, v: Vec) -> Vec:
    """Ray of the minimal resolution of cone(p, v) adjacent to p."""
    D = det(p, v)
    _, x, y = _egcd(-p[1], p[0])
    Y = det((x, y), v)
    t = -(Y // D)
    return x + t * p[0], y + t * p[1]


# ============================================================================
# M-resolutions
# ============================================================================

def _rays_to_sing_chain(rays: List[Vec]) -> SingChain:
    sings = []
    for u, w in zip(rays, rays[1:]):
        D, O = cone_type(u, w)
        sings.append(SMOOTH if D == 1 else wahl_cone(D, O))
    cs = []
    for j in range(1, len(rays) - 1):
        before = _neighbour_towards(rays[j - 1], rays[j])
        after = _neighbour_from(rays[j], rays[j + 1])
        cs.append(det(before, after))
    return SingChain(tuple(sings), tuple(cs))


def _candidate_rays(c: CQS) -> List[Vec]:
    D, O = c.delta, c.omega
    v0, v1 = (1, 0), (-O, D)
    out = []
    for x in range(-O, 2):
        for y in range(1, D):
            p = (x, y)
            if gcd(abs(x), y) != 1 or det(v0, p) <= 0 or det(p, v1) <= 0:
                continue
            if det((v1[0] - v0[0], v1[1] - v0[1]), (p[0] - v0[0], p[1] - v0[1])) < 0:
                continue
            out.append(p)
    return out


def m_resolutions(c: CQS, length_bound: Optional[int] = None) -> List[SingChain]:
    """Every chain of Wahl singularities over 1/Delta(1,Omega) with all K.C >= 0.

    Found as subdivisions of the cone (1,0), (-Omega, Delta) into smooth and Wahl
    cones; the count is checked against the Christophersen-Stevens set.
    """
    v0, v1 = (1, 0), (-c.omega, c.delta)
    points = _candidate_rays(c)
    cones: Dict[Tuple[Vec, Vec], bool] = {}

    def admissible(u: Vec, w: Vec) -> bool:
        key = (u, w)
        if key not in cones:
            D, O = cone_type(u, w)
            cones[key] = D == 1 or wahl_cone(D, O) is not None
        return cones[key]

    found: List[List[Vec]] = []

    def extend(path: List[Vec]) -> None:
        v = path[-1]
        for w in [p for p in points if det(v, p) > 0] + [v1]:
            if not admissible(v, w):
                continue
            if len(path) >= 2:
                u = path[-2]
                if det(u, w) < det(u, v) + det(v, w):
                    continue
            if w == v1:
                found.append(path + [w])
            else:
                extend(path + [w])

    extend([v0])
    out = []
    target = c.chain()
    for rays in found:
        s = _rays_to_sing_chain(rays)
        full = s.full_chain()
        if length_bound is not None and len(full) > length_bound:
            raise BoundTooSmall(f"{s} needs {len(full)} curves, bound is {length_bound}")
        try:
            mm = minimal_model(full)
        except InvalidChain:
            raise IdentityViolation(f"{s} over {c} does not blow down")
        require(mm == target, f"{s} blows down to {format_chain(mm)}, not {format_chain(target)}")
        require(all(k >= 0 for k in s.k_intersections()), f"{s} has a curve with K.C < 0")
        out.append(s)
    expected = len(christophersen_stevens(c))
    require(len(out) == expected, f"{len(out)} M-resolutions of {c}, Christophersen-Stevens count is {expected}")
    out.sort(key=str)
    logger.debug("%s: %d M-resolutions", c, len(out))
    return out


def extremal_p_resolutions(c: CQS) -> List[SingChain]:
    """M-resolutions with a single curve C and K.C > 0."""
    return [s for s in m_resolutions(c) if len(s.cs) == 1 and s.k_intersections()[0] > 0]


# ============================================================================
# Fake weighted projective planes
# ============================================================================

@dataclass(frozen=True)
class FakeWPP:
    marking: Marking
    m1: int
    q1: int
    m2: int
    q2: int
    d: int
    rays: Tuple[Vec, Vec, Vec]

    @property
    def n(self) -> int:
        return self.marking.pair.n

    @property
    def weights(self) -> Tuple[int, int, int]:
        return self.n * self.n, self.m1, self.m2

    @property
    def mu(self) -> int:
        return gcd(self.m1, self.m2)

    def covering(self) -> Tuple[int, int, int]:
        """Weights of the weighted projective plane covering this one with degree mu."""
        mu = self.mu
        return tuple(w // mu for w in self.weights)

    @property
    def hodge_ok(self) -> bool:
        return hodge_inequality(self.n, self.m1, self.m2, self.marking.degree)

    def record(self) -> Dict:
        return {
            "marking": format_marking(self.marking),
            "weights": list(self.weights),
            "m1": self.m1, "q1": self.q1, "m2": self.m2, "q2": self.q2, "d": self.d,
            "mu": self.mu,
            "covering": list(self.covering()),
            "rays": [list(v) for v in self.rays],
        }


def hodge_inequality(n: int, m1: int, m2: int, degree: int) -> bool:
    return (n * n + m1 + m2) ** 2 >= degree * n * n * m1 * m2


def side_value(side: Chain) -> Tuple[int, int]:
    if not side:
        return 1, 0
    v = evaluate(side)
    return v.numerator, v.denominator


def _realizes(cone: Tuple[int, int], m: int, o: int) -> bool:
    if m == 1:
        return cone[0] == 1
    return cone[0] == m and (cone[1] == o % m or cone[1] * o % m == 1)


def build_fake_wpp(m: Marking) -> FakeWPP:
    """P(n^2, m1, m2) of a marking, with m1/q1 = [e_{i-1},...,e_1] and m2/q2 = [e_{i+1},...,e_r]."""
    e = m.chain
    i = m.central
    n, a = m.pair.n, m.pair.a
    m1, q1 = side_value(e[:i - 1][::-1])
    m2, q2 = side_value(e[i:])
    d = e[i - 1]
    q1_inv, q2_inv = mod_inverse(q1, m1), mod_inverse(q2, m2)
    label = format_marking(m)
    require(q1 * m2 + q2 * m1 + n * n == m1 * m2 * d, f"{label}: q1 m2 + q2 m1 + n^2 != m1 m2 d")
    require(
        m1 + m2 == n * (m1 * a - n * q1_inv) == n * (m2 * (n - a) - n * q2_inv),
        f"{label}: m1 + m2 is not n(m1 a - n q1^-1) = n(m2(n-a) - n q2^-1)",
    )
    num = m1 * (n * a - 1) - m2
    require(num % (n * n) == 0, f"{label}: third ray is not integral")
    p, s, t = (1, 0), (-(n * a - 1), n * n), (num // (n * n), -m1)
    require(cone_type(p, s) == (n * n, n * a - 1), f"{label}: wrong Wahl cone")
    require(_realizes(cone_type(t, p), m1, m1 - q1), f"{label}: cone(t, p) is not 1/{m1}(1,{m1 - q1})")
    require(_realizes(cone_type(s, t), m2, m2 - q2_inv), f"{label}: cone(s, t) is not 1/{m2}(1,{m2 - q2_inv})")
    require(m2 * p[0] + m1 * s[0] + n * n * t[0] == 0 and m2 * p[1] + m1 * s[1] + n * n * t[1] == 0,
            f"{label}: rays do not satisfy the weight relation")
    w = FakeWPP(m, m1, q1, m2, q2, d, (p, s, t))
    require((n * n) % w.mu == 0, f"{label}: mu = {w.mu} does not divide n^2")
    require(w.hodge_ok, f"{label}: Hodge bound fails")
    if m.kind == "I" and i == 1:
        require(m2 == n * a - 1 and q2 == d * m2 - n * n, f"{label}: type I data is not P(1, n^2, na-1)")
    return w
