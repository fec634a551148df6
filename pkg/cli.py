#!/usr/bin/env python3
"""
cli.py - Command line front end

    python -m cli eval "[3,2,2,7,2]"
    python -m cli mark classify 29 22 --strict
    python -m cli mark zerocf "[2,2,2,2,2,5]" --max-weight 2
    python -m cli wahl generate --max-length 6 --out wahl.jsonl
    python -m cli train flip 11 3 --count 4
    python -m cli dio markov --limit 100
    python -m cli --format table ec realizable 11 5 5

Records go to stdout as JSON lines (or an aligned table); logs go to stderr.
Exit codes: 0 ok, 1 data error or failed verification, 2 usage, 3 internal.
"""

from __future__ import annotations

import argparse
from fractions import Fraction
import json
import logging
from pathlib import Path
import sys
from typing import Any, Dict, Iterable, List, Optional, Sequence

from bundles import hec_from_chain, hom_dimensions, pell_bundle, realizable_rank_degree, twist_ladder
from cfkernel import CQS, dual, evaluate, format_chain, matrix_of, minimal_model, parse_chain
from config import configure_logging
from diophantine import (
    MarkovTriple,
    degree5_family,
    degree8_relations,
    fibonacci_branch,
    hodge_bound,
    markov_correspondence,
    markov_triples,
    markov_type_table,
    pell_family,
    t_singularity_equation,
)
from errors import InternalError, InvalidChain, WahlKitError, require
from geometry import (
    SingChain,
    build_w_hat,
    degree8_fiber_class,
    k_squared,
    parse_sing_chain,
    slide,
    slide_numerics,
    toric_contraction,
)
from marking import (
    MAX_WEIGHT,
    Marking,
    canonical_markings,
    christophersen_stevens,
    classify_markings,
    count_zero_cfs,
    enumerate_zero_cf_assignments,
    fiber_type_markings,
    find_marking,
    format_marking,
    harvest_chain,
    parse_marking,
    realizability_report,
)
from toric import build_fake_wpp, extremal_p_resolutions, m_resolutions
from trains import divisorial_train, find_bar, flip_train_over_wahl, flipping_trains, markov_train
from wahl import WahlPair, generate_wahl, post_center, recognize_wahl, wahl_center, wahl_chain, wahl_dual

logger = logging.getLogger("cli")


# ============================================================================
# Output
# ============================================================================

def _cell(value: Any) -> str:
    if isinstance(value, (list, dict)):
        return json.dumps(value, separators=(",", ":"))
    return "" if value is None else str(value)


def emit(records: Iterable[Dict], fmt: str, out=None) -> None:
    out = out or sys.stdout
    records = list(records)
    if fmt == "json":
        for r in records:
            out.write(json.dumps(r, ensure_ascii=False) + "\n")
        return
    if not records:
        return
    keys: List[str] = []
    for r in records:
        keys.extend(k for k in r if k not in keys)
    rows = [[_cell(r.get(k)) for k in keys] for r in records]
    widths = [max(len(k), *(len(row[i]) for row in rows)) for i, k in enumerate(keys)]
    out.write("  ".join(k.ljust(w) for k, w in zip(keys, widths)).rstrip() + "\n")
    for row in rows:
        out.write("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n")


# ============================================================================
# Argument helpers
# ============================================================================

def _chain(text: str) -> tuple:
    chain, _ = parse_chain(text)
    return chain


# alias -> command name
ALIASES = {"classify": "list", "gen": "generate", "what8": "deg8"}


def _command(name: str) -> str:
    return ALIASES.get(name, name)


def _marking(n: int, a: int, text: str, formal: bool = False) -> Marking:
    central, k = parse_marking(text)
    return find_marking(WahlPair(n, a), central, k, formal=formal)


# ============================================================================
# Commands
# ============================================================================

def cmd_eval(args) -> List[Dict]:
    chain, bar = parse_chain(args.chain)
    value = evaluate(chain)
    return [{
        "chain": list(chain),
        "bar": bar,
        "value": f"{value.numerator}/{value.denominator}",
        "minimal_model": list(minimal_model(chain)),
        "matrix": [list(row) for row in matrix_of(chain)] if chain and min(chain) >= 2 else None,
    }]


def cmd_dual(args) -> List[Dict]:
    if args.cqs:
        c = CQS(*args.cqs)
        chain = c.chain()
    else:
        chain = _chain(args.chain)
    return [{"chain": list(chain), "dual": list(dual(chain))}]


def cmd_wahl(args) -> List[Dict]:
    if _command(args.wahl_cmd) == "chain":
        p = WahlPair(args.n, args.a)
        chain = wahl_chain(p)
        center, moves = wahl_center(chain)
        return [{
            "n": p.n, "a": p.a, "chain": list(chain), "dual": list(wahl_dual(p)),
            "center": center, "post_center": post_center(chain), "moves": "".join(moves),
        }]
    if args.wahl_cmd == "recognize":
        chain = _chain(args.chain)
        p = recognize_wahl(chain)
        return [{"chain": list(chain), "wahl": p is not None, "n": p.n if p else None, "a": p.a if p else None}]
    records = [
        {"n": p.n, "a": p.a, "chain": list(chain), "center": center}
        for p, chain, center in generate_wahl(args.max_length)
    ]
    if not args.out:
        return records
    path = Path(args.out)
    with open(path, "w", encoding="utf-8") as f:
        emit(records, "json", f)
    logger.info("wrote %d Wahl chains to %s", len(records), path)
    return [{"out": str(path), "max_length": args.max_length, "count": len(records)}]


def cmd_mark(args) -> List[Dict]:
    sub = _command(args.mark_cmd)
    if sub == "count":
        return [{"length": args.s, "zero_cfs": count_zero_cfs(args.s)}]
    if sub == "cs":
        return [{"cqs": str(CQS(args.delta, args.omega)), "zero_cf": list(k)}
                for k in christophersen_stevens(CQS(args.delta, args.omega))]
    if sub == "zerocf":
        base = _chain(args.chain)
        return [
            {"chain": list(base), "k": list(z.k), "weight": z.weight,
             "decrements": [f - k for f, k in zip(base, z.k)]}
            for z in enumerate_zero_cf_assignments(base, args.max_weight, formal=args.formal)
        ]
    if sub == "harvest":
        chain = harvest_chain(args.A, args.B)
        p = recognize_wahl(chain)
        require(p is not None, f"harvest chain {format_chain(chain)} is not a Wahl chain")
        report = realizability_report(p)
        report["chain"] = list(chain)
        return [report]
    p = WahlPair(args.n, args.a)
    if sub == "list":
        out = [m.record() for m in classify_markings(p, formal=not args.strict)]
        if args.degree is not None:
            out = [r for r in out if r["degree"] == args.degree]
        return out
    if sub == "canonical":
        return [m.record() for m in canonical_markings(p)]
    if sub == "degrees":
        return [realizability_report(p)]
    if sub == "fiber":
        return [{"n": p.n, "a": p.a, "k": list(f.assignment.k), "degree": f.degree} for f in fiber_type_markings(p)]
    raise WahlKitError(f"unknown mark command {sub!r}")


def cmd_geo(args) -> List[Dict]:
    sub = _command(args.geo_cmd)
    if sub == "mres":
        c = CQS(args.delta, args.omega)
        return [{"cqs": str(c), "chain": str(s), "k": [str(k) for k in s.k_intersections()], "deltas": list(s.deltas())}
                for s in m_resolutions(c, length_bound=args.bound)]
    if sub == "extremal":
        c = CQS(args.delta, args.omega)
        return [{"cqs": str(c), "chain": str(s), "delta": s.deltas()[0]} for s in extremal_p_resolutions(c)]
    if sub == "chain":
        s = parse_sing_chain(args.sing_chain)
        return [{
            "chain": str(s), "full": list(s.full_chain()),
            "k": [str(k) for k in s.k_intersections()], "deltas": list(s.deltas()),
            "discrepancies": [str(d) for d in s.resolution_graph().discrepancies()],
        }]
    if sub == "slide":
        chain = _chain(args.chain)
        sl = slide(chain, args.i, args.direction)
        out = {"chain": list(chain), "i": args.i, "direction": args.direction,
               "pair": str(sl.pair), "slide": list(sl.chain), "target": list(sl.target)}
        p = recognize_wahl(chain)
        if p is not None:
            out.update(slide_numerics(p, args.i).record())
        return [out]
    m = _marking(args.n, args.a, args.marking, formal=False)
    if sub == "what":
        w = build_w_hat(m)
        rec = w.record()
        rec["k_squared"] = k_squared(m)
        if w.nef:
            rec["contraction"] = [str(t) for t in toric_contraction(w)]
        return [rec]
    if sub == "fwpp":
        rec = build_fake_wpp(m).record()
        rec["hodge"] = hodge_bound(m)
        return [rec]
    if sub == "deg8":
        return [degree8_fiber_class(m).record()]
    raise WahlKitError(f"unknown geo command {sub!r}")


def _flip_bases(target: Sequence[str]) -> List[SingChain]:
    """`DELTA OMEGA` (every extremal P-resolution) or one chain of singularities."""
    if len(target) == 2 and all(t.isdigit() for t in target):
        return extremal_p_resolutions(CQS(int(target[0]), int(target[1])))
    if len(target) == 1:
        return [parse_sing_chain(target[0])]
    raise InvalidChain(f"expected DELTA OMEGA or one chain of singularities, got {' '.join(target)!r}")


def cmd_train(args) -> List[Dict]:
    sub = args.train_cmd
    if sub == "dc":
        return [divisorial_train(WahlPair(args.n, args.a), args.count).record()]
    if sub == "flip":
        return [t.record() for s in _flip_bases(args.target) for t in flipping_trains(s, args.count)]
    if sub == "wahl":
        return [t.record() for t in flip_train_over_wahl(WahlPair(args.n, args.a), args.count)]
    if sub == "markov":
        return [markov_train(_chain(args.chain), args.i, args.count).record()]
    if sub == "bar":
        chain = _chain(args.chain)
        c = CQS(args.delta, args.omega)
        return [{"chain": list(chain), "cqs": str(c), "bar": find_bar(chain, c)}]
    raise WahlKitError(f"unknown train command {sub!r}")


def cmd_dio(args) -> List[Dict]:
    sub = args.dio_cmd
    if sub == "markov":
        return [{"x": t.x, "y": t.y, "z": t.z} for t in markov_triples(args.limit)]
    if sub == "corr":
        return [markov_correspondence(MarkovTriple.of(args.x, args.y, args.z))]
    if sub == "fib":
        return [{"x": t.x, "y": t.y, "z": t.z} for t in fibonacci_branch(args.count)]
    if sub == "pell":
        return [m.record() for m in pell_family(args.l, args.e, args.j, args.count)]
    if sub == "deg8":
        s = parse_sing_chain(args.sing_chain)
        return [{"chain": str(s), "holds": degree8_relations(s)}]
    if sub == "tsing":
        return [{"args": [args.n, args.n1, args.n2, args.d1, args.d2],
                 "holds": t_singularity_equation(args.n, args.n1, args.n2, args.d1, args.d2)}]
    if sub == "table":
        return markov_type_table()
    if sub == "deg5":
        return [degree5_family(args.t)]
    if sub == "hodge":
        m = _marking(args.n, args.a, args.marking)
        return [{"marking": format_marking(m), "degree": m.degree, "hodge": hodge_bound(m)}]
    raise WahlKitError(f"unknown dio command {sub!r}")


def cmd_ec(args) -> List[Dict]:
    sub = args.ec_cmd
    if sub == "chain":
        s = parse_sing_chain(args.sing_chain)
        records = hec_from_chain(s, args.a_dot_k, args.a_sq, args.a_dot_gamma1)
        return [dict(index=i, **r.record()) for i, r in enumerate(records)]
    if sub == "hom":
        s = parse_sing_chain(args.sing_chain)
        return [{"chain": str(s), "hom": hom_dimensions(s)}]
    if sub == "realizable":
        return [realizable_rank_degree(args.n, args.degree, args.level).record()]
    if sub == "ladder":
        return [{"n": args.n, "degrees": twist_ladder(args.n, args.count)}]
    if sub == "pell":
        return [pell_bundle(args.l, args.e, args.j, args.k)]
    raise WahlKitError(f"unknown ec command {sub!r}")


def cmd_atlas(args) -> List[Dict]:
    from services.atlas_service import write_atlas

    return [write_atlas(args.max_n, args.shards, out_dir=args.out)]


def cmd_verify(args) -> List[Dict]:
    from verify import AcceptanceVerifier

    verifier = AcceptanceVerifier(quick=args.quick, seed=args.seed)
    results = verifier.run_all_tests()
    args.exit_code = verifier.exit_code(results)
    return results


# ============================================================================
# Parser
# ============================================================================

def _frac(text: str) -> Fraction:
    return Fraction(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wahlkit", description="Wahl chains, markings and their geometry")
    parser.add_argument("--format", choices=("json", "table"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="value, minimal model and matrix of a chain")
    p.add_argument("chain")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("dual", help="dual chain")
    p.add_argument("chain", nargs="?", default="[]")
    p.add_argument("--cqs", type=int, nargs=2, metavar=("DELTA", "OMEGA"))
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("wahl", help="Wahl chains")
    wsub = p.add_subparsers(dest="wahl_cmd", required=True)
    q = wsub.add_parser("chain")
    q.add_argument("n", type=int)
    q.add_argument("a", type=int)
    q = wsub.add_parser("recognize")
    q.add_argument("chain")
    q = wsub.add_parser("generate", aliases=["gen"])
    q.add_argument("--max-length", "--max-len", type=int, default=4)
    q.add_argument("--out", help="write the chains to this JSON lines file")
    p.set_defaults(func=cmd_wahl)

    p = sub.add_parser("mark", help="markings and zero continued fractions")
    msub = p.add_subparsers(dest="mark_cmd", required=True)
    for name in ("list", "canonical", "degrees", "fiber"):
        q = msub.add_parser(name, aliases=["classify"] if name == "list" else [])
        q.add_argument("n", type=int)
        q.add_argument("a", type=int)
        if name == "list":
            q.add_argument("--strict", action="store_true", help="only markings whose sides blow down to [1,1]")
            q.add_argument("--degree", type=int)
    q = msub.add_parser("zerocf")
    q.add_argument("chain")
    q.add_argument("--max-weight", type=int, default=MAX_WEIGHT)
    q.add_argument("--formal", action="store_true")
    q = msub.add_parser("count")
    q.add_argument("s", type=int)
    q = msub.add_parser("cs")
    q.add_argument("delta", type=int)
    q.add_argument("omega", type=int)
    q = msub.add_parser("harvest")
    q.add_argument("A", type=int)
    q.add_argument("B", type=int)
    p.set_defaults(func=cmd_mark)

    p = sub.add_parser("geo", help="chains of singularities, slides, toric models")
    gsub = p.add_subparsers(dest="geo_cmd", required=True)
    for name in ("mres", "extremal"):
        q = gsub.add_parser(name)
        q.add_argument("delta", type=int)
        q.add_argument("omega", type=int)
        if name == "mres":
            q.add_argument("--bound", type=int)
    q = gsub.add_parser("chain")
    q.add_argument("sing_chain")
    q = gsub.add_parser("slide")
    q.add_argument("chain")
    q.add_argument("i", type=int)
    q.add_argument("direction", choices=("left", "right"))
    for name in ("what", "fwpp", "deg8"):
        q = gsub.add_parser(name, aliases=["what8"] if name == "deg8" else [])
        q.add_argument("n", type=int)
        q.add_argument("a", type=int)
        q.add_argument("marking")
    p.set_defaults(func=cmd_geo)

    p = sub.add_parser("train", help="Mori trains")
    tsub = p.add_subparsers(dest="train_cmd", required=True)
    q = tsub.add_parser("dc")
    q.add_argument("n", type=int)
    q.add_argument("a", type=int)
    q = tsub.add_parser("flip")
    q.add_argument("target", nargs="+", metavar="DELTA OMEGA | CHAIN")
    q = tsub.add_parser("wahl")
    q.add_argument("n", type=int)
    q.add_argument("a", type=int)
    q = tsub.add_parser("markov")
    q.add_argument("chain")
    q.add_argument("i", type=int)
    for q in (tsub.choices["dc"], tsub.choices["flip"], tsub.choices["wahl"], tsub.choices["markov"]):
        q.add_argument("--count", type=int, default=4)
    q = tsub.add_parser("bar")
    q.add_argument("chain")
    q.add_argument("delta", type=int)
    q.add_argument("omega", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("dio", help="Markov triples and Diophantine identities")
    dsub = p.add_subparsers(dest="dio_cmd", required=True)
    q = dsub.add_parser("markov")
    q.add_argument("--limit", type=int, default=100)
    q = dsub.add_parser("corr")
    for name in ("x", "y", "z"):
        q.add_argument(name, type=int)
    q = dsub.add_parser("fib")
    q.add_argument("--count", type=int, default=5)
    q = dsub.add_parser("pell")
    q.add_argument("l", type=int)
    q.add_argument("e", type=int)
    q.add_argument("j", type=int, nargs="?", default=0)
    q.add_argument("--count", type=int, default=4)
    q = dsub.add_parser("deg8")
    q.add_argument("sing_chain")
    q = dsub.add_parser("tsing")
    for name in ("n", "n1", "n2", "d1", "d2"):
        q.add_argument(name, type=int)
    dsub.add_parser("table")
    q = dsub.add_parser("deg5")
    q.add_argument("t", type=int)
    q = dsub.add_parser("hodge")
    q.add_argument("n", type=int)
    q.add_argument("a", type=int)
    q.add_argument("marking")
    p.set_defaults(func=cmd_dio)

    p = sub.add_parser("ec", help="exceptional bundle numerics")
    esub = p.add_subparsers(dest="ec_cmd", required=True)
    q = esub.add_parser("chain")
    q.add_argument("sing_chain")
    q.add_argument("--a-dot-k", type=_frac)
    q.add_argument("--a-sq", type=_frac)
    q.add_argument("--a-dot-gamma1", type=_frac)
    q = esub.add_parser("hom")
    q.add_argument("sing_chain")
    q = esub.add_parser("realizable")
    q.add_argument("n", type=int)
    q.add_argument("degree", type=int)
    q.add_argument("level", type=int)
    q = esub.add_parser("ladder")
    q.add_argument("n", type=int)
    q.add_argument("--count", type=int, default=8)
    q = esub.add_parser("pell")
    q.add_argument("l", type=int)
    q.add_argument("e", type=int)
    q.add_argument("j", type=int)
    q.add_argument("k", type=int)
    p.set_defaults(func=cmd_ec)

    p = sub.add_parser("atlas", help="write the marking atlas as JSON lines")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled slide checks")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    args.exit_code = 0
    try:
        records = args.func(args)
    except WahlKitError as e:
        level = logging.ERROR if isinstance(e, InternalError) else logging.WARNING
        logger.log(level, "%s: %s", type(e).__name__, e)
        return e.exit_code
    emit(records, args.format)
    return args.exit_code


if __name__ == "__main__":
    sys.exit(main())
