from typing import Callable, List, Literal

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel

from bundles import realizable_rank_degree
from cfkernel import CQS, evaluate, minimal_model
from errors import InternalError, WahlKitError
from geometry import slide, slide_numerics
from marking import canonical_markings, classify_markings
from toric import build_fake_wpp, extremal_p_resolutions, m_resolutions
from trains import divisorial_train, flipping_trains
from wahl import WahlPair, recognize_wahl, wahl_center, wahl_chain, wahl_dual

router = APIRouter(prefix="/wahl", tags=["wahl"])


class ChainRequest(BaseModel):
    chain: List[int]


class SlideRequest(BaseModel):
    chain: List[int]
    index: int
    direction: Literal["left", "right"]


def _call(fn: Callable, *args, **kwargs):
    """Run fn, mapping data errors to 400 and internal errors to 500."""
    try:
        return fn(*args, **kwargs)
    except InternalError as e:
        raise HTTPException(status_code=500, detail=str(e))
    except WahlKitError as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/eval")
def eval_chain(req: ChainRequest):
    def run():
        value = evaluate(req.chain)
        return {
            "chain": req.chain,
            "value": f"{value.numerator}/{value.denominator}",
            "minimal_model": list(minimal_model(req.chain)),
        }

    return _call(run)


@router.get("/chain/{n}/{a}")
def chain(n: int, a: int):
    def run():
        p = WahlPair(n, a)
        e = wahl_chain(p)
        center, moves = wahl_center(e)
        return {"n": n, "a": a, "chain": list(e), "dual": list(wahl_dual(p)), "center": center, "moves": "".join(moves)}

    return _call(run)


@router.get("/markings/{n}/{a}")
def markings(n: int, a: int, formal: bool = True):
    return _call(lambda: [m.record() for m in classify_markings(WahlPair(n, a), formal=formal)])


@router.get("/canonical/{n}/{a}")
def canonical(n: int, a: int):
    return _call(lambda: [m.record() for m in canonical_markings(WahlPair(n, a))])


@router.get("/mres/{delta}/{omega}")
def mres(delta: int, omega: int):
    def run():
        c = CQS(delta, omega)
        return {"cqs": str(c), "chains": [str(s) for s in m_resolutions(c)]}

    return _call(run)


@router.post("/slide")
def slide_chain(req: SlideRequest):
    def run():
        sl = slide(req.chain, req.index, req.direction)
        out = {"pair": str(sl.pair), "slide": list(sl.chain), "target": list(sl.target)}
        p = recognize_wahl(req.chain)
        if p is not None:
            out["numerics"] = slide_numerics(p, req.index).record()
        return out

    return _call(run)


@router.get("/train/dc/{n}/{a}")
def train_dc(n: int, a: int, count: int = 4):
    return _call(lambda: divisorial_train(WahlPair(n, a), count).record())


@router.get("/train/flip/{delta}/{omega}")
def train_flip(delta: int, omega: int, count: int = 4):
    def run():
        out = []
        for s in extremal_p_resolutions(CQS(delta, omega)):
            out.extend(t.record() for t in flipping_trains(s, count))
        return out

    return _call(run)


@router.get("/fwpp/{n}/{a}")
def fwpp(n: int, a: int):
    return _call(lambda: [build_fake_wpp(m).record() for m in classify_markings(WahlPair(n, a), formal=False)])


@router.get("/realizable/{n}/{degree}/{level}")
def realizable(n: int, degree: int, level: int):
    return _call(lambda: realizable_rank_degree(n, degree, level).record())
