"""
trains.py - Mori trains: divisorial, flipping and Markov

Wagons come from the index recursion x_{k+1} = delta x_k - x_{k-1} and every
wagon is then re-checked by blow-down arithmetic alone: each consecutive pair
W_k + [1] + W_{k+1} must contract to the base chain (either orientation) and
every wagon after the first carries exactly one bar.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
from math import gcd
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from cfkernel import CQS, Chain, format_chain, minimal_model
from errors import (
    AmbiguousBar,
    InvalidChain,
    NoBar,
    NotExtremal,
    NotMarkovMutation,
    OutOfRange,
    VerificationFailed,
    require,
)
from geometry import SingChain, slide, slide_numerics
from toric import extremal_p_resolutions
from wahl import SMOOTH, WahlPair, recognize_wahl, slot_chain, wahl_chain

logger = logging.getLogger(__name__)

Kind = Literal["DC", "Flip", "Markov"]


@dataclass(frozen=True)
class Wagon:
    pair: WahlPair
    chain: Chain
    bar: Optional[int] = None

    def __str__(self) -> str:
        return format_chain(self.chain, self.bar)


@dataclass
class MoriTrain:
    base: CQS
    delta: int
    kind: Kind
    wagons: List[Wagon] = field(default_factory=list)
    orientations: List[str] = field(default_factory=list)
    complete: bool = True

    @property
    def indices(self) -> List[int]:
        return [w.pair.n for w in self.wagons]

    def record(self) -> Dict:
        return {
            "base": str(self.base),
            "delta": self.delta,
            "kind": self.kind,
            "wagons": [str(w) for w in self.wagons],
            "indices": self.indices,
            "orientations": self.orientations,
            "complete": self.complete,
        }

    def __str__(self) -> str:
        return "-".join(str(w) for w in self.wagons)


# ============================================================================
# Contraction checks
# ============================================================================

def _contracts_to(chain: Sequence[int], base: CQS) -> Optional[str]:
    """'forward' / 'reverse' when chain blows down to the base chain, else None."""
    try:
        mm = minimal_model(chain)
    except InvalidChain:
        return None
    target = base.chain()
    if mm == target:
        return "forward"
    if mm == target[::-1]:
        return "reverse"
    return None


def _bar_candidates(wagon: Sequence[int], base: CQS) -> List[int]:
    hits = []
    for i in range(len(wagon)):
        w = list(wagon)
        w[i] -= 1
        if min(w) >= 1 and _contracts_to(w, base):
            hits.append(i + 1)
    return hits


def find_bar(wagon: Sequence[int], base: CQS) -> int:
    """The unique i with minimal_model(wagon, e_i - 1) equal to the base chain or its reverse."""
    if recognize_wahl(wagon) is None:
        raise InvalidChain(f"{format_chain(wagon)} is not a Wahl chain")
    hits = _bar_candidates(wagon, base)
    if not hits:
        raise NoBar(f"{format_chain(wagon)} has no bar over {base}")
    if len(hits) > 1:
        raise AmbiguousBar(f"{format_chain(wagon)} has bars {hits} over {base}")
    return hits[0]


def _pair_orientation(left: WahlPair, right: WahlPair, base: CQS) -> Optional[str]:
    return _contracts_to(slot_chain(left) + (1,) + slot_chain(right), base)


def _verify(train: MoriTrain) -> MoriTrain:
    ws = train.wagons
    train.orientations = []
    for prev, nxt in zip(ws, ws[1:]):
        o = _pair_orientation(prev.pair, nxt.pair, train.base)
        if o is None:
            raise VerificationFailed(f"{prev}+[1]+{nxt} does not contract to {train.base}")
        det = abs(prev.pair.n * nxt.pair.a - nxt.pair.n * prev.pair.a)
        if det != train.delta:
            raise VerificationFailed(f"|n a' - n' a| = {det} between {prev} and {nxt}, delta is {train.delta}")
        train.orientations.append(o)
    return train


def _recurse(seed0: WahlPair, seed1: WahlPair, delta: int, count: int) -> Tuple[List[WahlPair], bool]:
    ns, as_ = [seed0.n, seed1.n], [seed0.a, seed1.a]
    while len(ns) < count:
        n, a = delta * ns[-1] - ns[-2], delta * as_[-1] - as_[-2]
        if n <= ns[-1]:
            return [WahlPair(x, y) for x, y in zip(ns, as_)][:count], False
        ns.append(n)
        as_.append(a)
    return [WahlPair(x, y) for x, y in zip(ns, as_)][:count], True


def _barred(pair: WahlPair, base: CQS, first: bool) -> Wagon:
    if pair.is_smooth:
        return Wagon(pair, ())
    chain = wahl_chain(pair)
    if first:
        return Wagon(pair, chain)
    try:
        return Wagon(pair, chain, find_bar(chain, base))
    except (NoBar, AmbiguousBar) as e:
        raise VerificationFailed(str(e))


# ============================================================================
# Divisorial contractions
# ============================================================================

def divisorial_train(p: WahlPair, count: int) -> MoriTrain:
    """Wagons over the Wahl singularity (delta, a): n = delta, delta^2, ...; a = a, delta a + 1, ..."""
    if count < 1:
        raise OutOfRange("count must be >= 1")
    delta, a = p.n, p.a
    base = CQS(delta * delta, delta * a - 1)
    pairs, complete = _recurse(p, WahlPair(delta * delta, delta * a + 1), delta, count)
    train = MoriTrain(base, delta, "DC", [_barred(q, base, k == 0) for k, q in enumerate(pairs)], complete=complete)
    _verify(train)
    logger.info("divisorial train over %s: %s", p, train)
    return train


# ============================================================================
# Flips
# ============================================================================

def _second_wagon(seed: WahlPair, n1: int, base: CQS) -> Optional[WahlPair]:
    found = []
    for a in range(1, n1):
        if gcd(n1, a) != 1:
            continue
        cand = WahlPair(n1, a)
        if _pair_orientation(seed, cand, base) and len(_bar_candidates(wahl_chain(cand), base)) == 1:
            found.append(cand)
    if len(found) > 1:
        raise VerificationFailed(f"{len(found)} candidates for the second wagon after {seed} over {base}")
    return found[0] if found else None


def _flip_train(base: CQS, seed: WahlPair, other: WahlPair, delta: int, count: int) -> MoriTrain:
    n1 = delta * seed.n + other.n
    for start in (seed, seed.reversed()):
        second = _second_wagon(start, n1, base)
        if second is not None:
            break
    else:
        raise VerificationFailed(f"no second wagon of index {n1} after {seed} over {base}")
    pairs, complete = _recurse(start, second, delta, count)
    train = MoriTrain(base, delta, "Flip", [_barred(q, base, k == 0) for k, q in enumerate(pairs)], complete=complete)
    return _verify(train)


def flipping_trains(extremal: SingChain, count: int) -> List[MoriTrain]:
    """One train per distinct slot of an extremal P-resolution P0 - C - P1."""
    if len(extremal.cs) != 1:
        raise NotExtremal(f"{extremal} has {len(extremal.cs)} curves, need exactly one")
    k = extremal.k_intersections()[0]
    if k <= 0:
        raise NotExtremal(f"{extremal} has K.C = {k} <= 0")
    if count < 1:
        raise OutOfRange("count must be >= 1")
    base = CQS.of_chain(extremal.full_chain())
    delta = extremal.deltas()[0]
    p0, p1 = extremal.sings
    trains = [_flip_train(base, p0, p1, delta, count)]
    if p1 != p0:
        trains.append(_flip_train(base, p1, p0, delta, count))
    for t in trains:
        logger.info("flip train over %s: %s", extremal, t)
    return trains


def flip_train_over_wahl(p: WahlPair, count: int) -> List[MoriTrain]:
    """Flip trains of every extremal P-resolution of 1/n^2(1, na-1)."""
    out: List[MoriTrain] = []
    for s in extremal_p_resolutions(CQS(p.n * p.n, p.n * p.a - 1)):
        out.extend(flipping_trains(s, count))
    return out


# ============================================================================
# Markov trains
# ============================================================================

def markov_train(chain: Sequence[int], i: int, count: int) -> MoriTrain:
    """Iterate the mutation at E_i: left slide, the chain, right slide, ...

    Each wagon after the first is barred at the position whose left slide is the
    previous wagon and whose right slide is the next one.
    """
    e = tuple(chain)
    p = recognize_wahl(e)
    if p is None:
        raise InvalidChain(f"{format_chain(e)} is not a Wahl chain")
    num = slide_numerics(p, i)
    if not num.markov:
        raise NotMarkovMutation(f"Gamma^2 = {num.gamma_sq} < 0 at {format_chain(e)}, i={i}")
    if count < 1:
        raise OutOfRange("count must be >= 1")
    first = WahlPair(num.n1, num.a1) if num.n1 > 1 else SMOOTH
    pairs, complete = _recurse(first, p, num.delta, count)
    wagons = [Wagon(pairs[0], slot_chain(pairs[0]))]
    for k in range(1, len(pairs)):
        chain_k = wahl_chain(pairs[k])
        bar = _markov_bar(chain_k, pairs[k - 1], pairs[k + 1] if k + 1 < len(pairs) else None, num.delta)
        wagons.append(Wagon(pairs[k], chain_k, bar))
    base = CQS(p.n * p.n, p.n * p.a - 1)
    train = MoriTrain(base, num.delta, "Markov", wagons, complete=complete)
    train.orientations = ["slide"] * (len(wagons) - 1)
    logger.info("Markov train from %s at %d: %s", format_chain(e), i, train)
    return train


def _markov_bar(chain: Chain, prev: WahlPair, nxt: Optional[WahlPair], delta: int) -> int:
    hits = []
    for j in range(1, len(chain) + 1):
        if j >= 2:
            left = slide(chain, j, "left").pair
        else:
            left = SMOOTH
        if left != prev:
            continue
        if nxt is not None:
            if j > len(chain) - 1 or slide(chain, j, "right").pair != nxt:
                continue
        hits.append(j)
    if len(hits) != 1:
        raise VerificationFailed(f"{format_chain(chain)}: {len(hits)} mutation positions after {prev}")
    require(slide_numerics(recognize_wahl(chain), hits[0]).delta == delta, f"delta changes along {format_chain(chain)}")
    return hits[0]
