#!/usr/bin/env python3
"""
verify.py - Acceptance suite

Reproduces the worked examples stored in tests/golden/worked_examples.json and
runs the exhaustive property sweeps. Every check reports the anchor it covers.

    python verify.py           # full bounds
    python verify.py --quick   # reduced bounds, as used by the unit suite
"""

from __future__ import annotations

from fractions import Fraction
import json
import logging
from math import comb, gcd, isqrt
from pathlib import Path
import random
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from bundles import hec_from_chain, pell_bundle
from cfkernel import CQS, dual, evaluate, expand, format_chain, matrix_of, parse_chain
from config import BASE_DIR
from diophantine import (
    MarkovTriple,
    check_pell_norms,
    get_pell_family,
    markov_correspondence,
    markov_triples,
    pell_families,
    pell_family,
)
from errors import InternalError, WahlKitError
from geometry import SingChain, build_w_hat, degree8_fiber_class, parse_sing_chain, slide, slide_numerics
from marking import (
    canonical_markings,
    christophersen_stevens,
    classify_markings,
    count_zero_cfs,
    enumerate_zero_cf_assignments,
    find_marking,
    format_marking,
    harvest_chain,
    parse_marking,
    realizable_degrees,
)
from toric import build_fake_wpp, m_resolutions
from trains import divisorial_train, flip_train_over_wahl, flipping_trains, markov_train
from wahl import SMOOTH, WahlPair, generate_wahl, recognize_wahl, wahl_chain, wahl_dual

logger = logging.getLogger(__name__)

GOLDEN_PATH = BASE_DIR / "tests" / "golden" / "worked_examples.json"

# (quick, full)
BOUNDS = {
    "catalan": (8, 12),
    "markov_z": (200, 1000),
    "train_wagons": (8, 25),
    "slide_samples": (300, 10_000),
    "slide_n": (60, 10_000),
    "fwpp_n": (20, 150),
    "mres_delta": (15, 100),
    "even_n": (16, 40),
    "pell_norm_k": (25, 25),
    "pell_shape_k": (6, 6),
    "harvest_a": (3, 6),
    "harvest_span": (4, 20),
    "bundle_n": (30, 150),
    "round_trip_delta": (80, 500),
    "duality_delta": (60, 300),
    "wahl_length": (9, 14),
    "reversal_n": (60, 200),
    "recognize_n": (80, 500),
    "weight0_delta": (100, 400),
}


class AcceptanceVerifier:
    def __init__(self, quick: bool = False, golden_path: Optional[Path] = None, seed: int = 0):
        self.quick = quick
        self.golden_path = Path(golden_path or GOLDEN_PATH)
        self.seed = seed
        with open(self.golden_path, encoding="utf-8") as f:
            self.golden = json.load(f)

    def bound(self, name: str) -> int:
        quick, full = BOUNDS[name]
        return quick if self.quick else full

    def _check(self, test_name: str, anchor: str, body: Callable[[Dict], None]) -> Dict:
        results = {"test_name": test_name, "anchor": anchor, "passed": False, "details": []}
        try:
            body(results)
        except WahlKitError as e:
            results["details"].append({"error": type(e).__name__, "message": str(e)})
            results["internal"] = isinstance(e, InternalError)
            logger.error("%s: %s: %s", test_name, type(e).__name__, e)
            return results
        results["passed"] = all(d.get("ok", True) for d in results["details"])
        logger.info("%s %s (%s)", "PASS" if results["passed"] else "FAIL", test_name, anchor)
        return results

    @staticmethod
    def _expect(results: Dict, label: str, got, expected) -> None:
        ok = got == expected
        detail = {"check": label, "ok": ok}
        if not ok:
            detail.update(got=got, expected=expected)
        results["details"].append(detail)

    # ========================================================================
    # Golden examples
    # ========================================================================

    def test_catalan_count(self) -> Dict:
        def body(results):
            for s in range(2, self.bound("catalan") + 1):
                self._expect(results, f"s={s}", count_zero_cfs(s), comb(2 * (s - 1), s - 1) // s)

        return self._check("Catalan count", "zero continued fractions and triangulations", body)

    def test_marking_census(self) -> Dict:
        g = self.golden

        def body(results):
            c = g["census"]
            p = WahlPair(c["n"], c["a"])
            self._expect(results, "chain", list(wahl_chain(p)), c["chain"])
            census = [format_marking(m) for m in classify_markings(p)]
            strict = [format_marking(m) for m in classify_markings(p, formal=False)]
            self._expect(results, "formal count", len(census), c["formal_count"])
            self._expect(results, "strict count", len(strict), c["strict_count"])
            self._expect(results, "strict within formal", set(strict) <= set(census), True)
            self._expect(results, "degree 9 marking", c["degree9"] in strict, True)
            self._expect(results, "degree 8 marking", c["degree8"] in strict, True)

            d4 = g["degree4_markings"]
            p = recognize_wahl(d4["chain"])
            got = sorted(format_marking(m) for m in classify_markings(p) if m.degree == 4)
            self._expect(results, f"degree 4 markings of {format_chain(d4['chain'])}", got, sorted(d4["markings"]))

            for row in g["n29_degree8"]:
                p = WahlPair(29, row["a"])
                self._expect(results, f"chain of {p}", list(wahl_chain(p)), row["chain"])
                got = sorted(format_marking(m) for m in classify_markings(p) if m.degree == 8)
                self._expect(results, f"degree 8 markings of {p}", got, sorted(row["markings"]))

        return self._check("Marking census", "18 markings of [2,2,2,10,2,2,2,2,2,5]; n = 29 degree 8 data", body)

    def test_canonical_markings(self) -> Dict:
        def body(results):
            for row in self.golden["canonical_markings"]:
                p = recognize_wahl(row["chain"])
                got = [format_marking(m) for m in canonical_markings(p)]
                self._expect(results, format_chain(row["chain"]), got, row["markings"])

        return self._check("Canonical markings", "worked examples of the two canonical markings", body)

    def test_markov_correspondence(self) -> Dict:
        def body(results):
            for row in self.golden["markov"]:
                rec = markov_correspondence(MarkovTriple.of(*row["triple"]))
                self._expect(results, f"triple {row['triple']}", (rec["n"], rec["a"], rec["marking"]),
                             (row["n"], row["a"], row["marking"]))
            triples = markov_triples(self.bound("markov_z"))
            for t in triples:
                if t.z >= 2:
                    markov_correspondence(t)
            results["details"].append({"check": f"{len(triples)} triples up to z = {self.bound('markov_z')}"})

        return self._check("Markov correspondence", "Markov triples and degree 9 markings", body)

    def test_mori_trains(self) -> Dict:
        g = self.golden["trains"]
        count = self.bound("train_wagons")

        def body(results):
            flip = g["flip"]
            trains = flipping_trains(parse_sing_chain(flip["extremal"]), 4)
            self._expect(results, "flip trains", [[str(w) for w in t.wagons] for t in trains], flip["trains"])
            self._expect(results, "flip delta", [t.delta for t in trains], [flip["delta"]] * len(trains))

            dc = g["divisorial"]
            t = divisorial_train(WahlPair(dc["n"], dc["a"]), len(dc["wagons"]))
            self._expect(results, "divisorial train", [str(w) for w in t.wagons], dc["wagons"])

            fw = g["flip_over_wahl"]
            t = flip_train_over_wahl(WahlPair(fw["n"], fw["a"]), len(fw["wagons"]))
            self._expect(results, "flip train over a Wahl singularity", [str(w) for w in t[0].wagons], fw["wagons"])

            mk = g["markov"]
            t = markov_train(mk["chain"], mk["i"], len(mk["wagons"]))
            self._expect(results, "Markov train", [str(w) for w in t.wagons], mk["wagons"])
            self._expect(results, "Markov indices", t.indices, mk["indices"])

            long = flipping_trains(parse_sing_chain(flip["extremal"]), count)
            long.append(divisorial_train(WahlPair(dc["n"], dc["a"]), count))
            long.append(divisorial_train(WahlPair(3, 1), count))
            for tr in long:
                self._expect(results, f"{tr.kind} over {tr.base} has {count} wagons", len(tr.wagons), count)
                bars = [w.bar for w in tr.wagons[1:]]
                self._expect(results, f"{tr.kind} over {tr.base} bars", all(b is not None for b in bars), True)

        return self._check("Mori trains", "flip and divisorial trains over 1/11(1,3) and 1/4(1,1)", body)

    def test_slides(self) -> Dict:
        def body(results):
            for row in self.golden["slides"]:
                i = row["i"]
                self._expect(results, f"left slide of {format_chain(row['chain'])} at {i}",
                             list(slide(row["chain"], i, "left").chain), row["left"])
                self._expect(results, f"right slide of {format_chain(row['chain'])} at {i}",
                             list(slide(row["chain"], i, "right").chain), row["right"])

            rng = random.Random(self.seed)
            top = self.bound("slide_n")
            bad = 0
            samples = self.bound("slide_samples")
            for _ in range(samples):
                p = None
                while p is None:
                    n = rng.randint(2, top)
                    p = _pair_or_none(n, rng.randint(1, n - 1))
                chain = wahl_chain(p)
                i = rng.randint(1, len(chain))
                num = slide_numerics(p, i)
                ok = (
                    num.delta == num.n1 * p.a - num.a1 * p.n
                    and num.n1 + num.n2 == num.delta * p.n
                    and num.a1 + num.a2 == num.delta * p.a
                )
                if i >= 2:
                    ok = ok and slide(chain, i, "left").pair == WahlPair(num.n1, num.a1)
                if i <= len(chain) - 1:
                    ok = ok and slide(chain, i, "right").pair == WahlPair(num.n2, num.a2)
                bad += not ok
            self._expect(results, f"slide identities on {samples} samples with n <= {top}", bad, 0)

        return self._check("Slides", "slides of [3,2,2,7,2] and [2,2,2,7]; delta identities", body)

    def test_w_hat(self) -> Dict:
        def body(results):
            for row in self.golden["w_hat"]:
                m = _golden_marking(row)
                w = build_w_hat(m)
                self._expect(results, row["marking"], (str(w.chain), w.degree), (row["chain"], row["degree"]))
            fam = self.golden["w_hat_family"]
            for x in fam["x"]:
                p = recognize_wahl((2,) * x + (x + 4,))
                w = build_w_hat(canonical_markings(p)[0])
                expected = fam["template"].format(x1=x + 1, x2=x + 2, x3=x + 3, x4=x + 4)
                self._expect(results, f"x={x}", str(w.chain), expected)
                self._expect(results, f"x={x} K.C <= 0", all(k <= 0 for k in w.k_curves), True)

        return self._check("Toric model", "toric chains of [2,...,2,x+4] and (27,11)", body)

    def test_fake_wpp(self) -> Dict:
        g = self.golden["fake_wpp"]

        def body(results):
            w = build_fake_wpp(_golden_marking(g))
            got = {
                "weights": list(w.weights), "d": w.d, "m1": w.m1, "q1": w.q1, "m2": w.m2, "q2": w.q2,
                "q1_inv": pow(w.q1, -1, w.m1), "q2_inv": pow(w.q2, -1, w.m2),
            }
            self._expect(results, g["marking"], got, {k: g[k] for k in got})
            total = 0
            for n in range(2, self.bound("fwpp_n") + 1):
                for a in range(1, n):
                    p = _pair_or_none(n, a)
                    if p is None:
                        continue
                    for m in classify_markings(p, formal=False):
                        build_fake_wpp(m)
                        total += 1
            results["details"].append({"check": f"{total} markings with n <= {self.bound('fwpp_n')}"})

        return self._check("Fake weighted projective planes", "P(27^2, 5, 22) and the weight identities", body)

    def test_m_resolutions(self) -> Dict:
        g = self.golden["m_resolutions"]

        def body(results):
            c = CQS(g["delta"], g["omega"])
            self._expect(results, str(c), sorted(str(s) for s in m_resolutions(c)), sorted(g["chains"]))
            bound = self.bound("mres_delta")
            mismatched = []
            for delta in range(2, bound + 1):
                for omega in range(1, delta):
                    c = _cqs_or_none(delta, omega)
                    if c is not None and len(m_resolutions(c)) != len(christophersen_stevens(c)):
                        mismatched.append(str(c))
            self._expect(results, f"counts up to Delta = {bound}", mismatched, [])

        return self._check("M-resolutions", "three M-resolutions of 1/19(1,7)", body)

    def test_degree8_classes(self) -> Dict:
        def body(results):
            for row in self.golden["degree8_classes"]:
                m = _golden_marking(row)
                self._expect(results, row["marking"], degree8_fiber_class(m).surface, row["surface"])
            wrong = []
            for n in range(2, self.bound("even_n") + 1, 2):
                for a in range(1, n, 2):
                    p = _pair_or_none(n, a)
                    if p is None:
                        continue
                    for m in classify_markings(p, formal=False):
                        if m.degree == 8 and degree8_fiber_class(m).surface != "F1":
                            wrong.append(format_marking(m))
            self._expect(results, "even n is always F1", wrong, [])

        return self._check("Degree 8 classifier", "the two degree 8 markings of (29,5)", body)

    def test_pell_families(self) -> Dict:
        def body(results):
            for row in self.golden["pell"]:
                fam = get_pell_family(row["l"], row["e"], row["j"])
                self._expect(results, f"seeds of {fam.key}", [list(s) for s in fam.seeds], row["seeds"])
            for fam in pell_families():
                check_pell_norms(fam, self.bound("pell_norm_k") + 1)
                members = pell_family(fam.level, fam.norm, fam.branch, self.bound("pell_shape_k"))
                self._expect(results, f"{fam.key} members", len(members), self.bound("pell_shape_k"))

        return self._check("Pell families", "degree l type I families and their norm equations", body)

    def test_impossibility_harvest(self) -> Dict:
        def body(results):
            for A in range(2, self.bound("harvest_a") + 1):
                for B in range(A + 4, A + self.bound("harvest_span") + 1):
                    p = recognize_wahl(harvest_chain(A, B))
                    high = sorted(d for d in realizable_degrees(p) if d >= 5)
                    self._expect(results, f"A={A} B={B}", high, [])

        return self._check("Impossibility harvest", "[2,...,2,A+4,2,...,2,B+2] is never of degree >= 5", body)

    def test_bundle_numerics(self) -> Dict:
        def body(results):
            total = 0
            for n in range(2, self.bound("bundle_n") + 1):
                for a in range(1, n):
                    p = _pair_or_none(n, a)
                    if p is None:
                        continue
                    for c in (0, 1):
                        hec_from_chain(SingChain((SMOOTH, p), (c,)))
                        total += 1
            results["details"].append({"check": f"{total} chains (c)-[n/a]"})
            for fam in pell_families():
                for k in range(1, self.bound("pell_shape_k") + 1):
                    b = pell_bundle(fam.level, fam.norm, fam.branch, k)
                    (prev, _), (n, _) = fam.sequence(k + 1)[k - 1:k + 1]
                    self._expect(results, f"{fam.key} k={k} degree", b["degree"], -n - prev)

        return self._check("Bundle numerics", "degrees and c2 of bundles read off Wahl chains", body)

    def test_kernel_properties(self) -> Dict:
        def body(results):
            bound = self.bound("round_trip_delta")
            failures = []
            for m, q in _coprime_pairs(bound):
                chain = expand(m, q)
                if evaluate(chain) != Fraction(m, q) or parse_chain(format_chain(chain))[0] != chain:
                    failures.append(chain)
            self._expect(results, f"round trip for Delta <= {bound}", failures, [])

            bound = self.bound("duality_delta")
            failures = []
            for m, q in _coprime_pairs(bound):
                chain = expand(m, q)
                if dual(dual(chain)) != chain:
                    failures.append(("duality", chain))
                matrix_of(chain)
                back = evaluate(chain[::-1])
                if back.numerator != m or (back.denominator * q) % m != 1 % m:
                    failures.append(("reversal", chain))
            self._expect(results, f"duality and matrices for Delta <= {bound}", failures, [])

            length = self.bound("wahl_length")
            failures = [chain for _, chain, _ in generate_wahl(length) if sum(chain) != 3 * len(chain) + 1]
            self._expect(results, f"sum of Wahl chains of length <= {length}", failures, [])

            bound = self.bound("reversal_n")
            failures = [
                str(p) for p in _wahl_pairs(bound) if wahl_chain(p.reversed()) != wahl_chain(p)[::-1]
            ]
            self._expect(results, f"Wahl reversal for n <= {bound}", failures, [])

            bound = self.bound("recognize_n")
            failures = [str(p) for p in _wahl_pairs(bound) if recognize_wahl(wahl_chain(p)) != p]
            self._expect(results, f"recognize o wahl_chain for n <= {bound}", failures, [])

            bound = self.bound("weight0_delta")
            duals = {wahl_dual(p) for p in _wahl_pairs(isqrt(bound))}
            failures = []
            for m, q in _coprime_pairs(bound):
                chain = expand(m, q)
                if len(chain) < 2:
                    continue
                if bool(enumerate_zero_cf_assignments(chain, max_weight=0)) != (chain in duals):
                    failures.append(chain)
            self._expect(results, f"weight 0 zero CFs are Wahl duals for Delta <= {bound}", failures, [])

        return self._check("Kernel properties", "continued fraction laws", body)

    # ========================================================================
    # Runner
    # ========================================================================

    def run_all_tests(self) -> List[Dict]:
        logger.info("acceptance suite (%s bounds) against %s", "quick" if self.quick else "full", self.golden_path)
        test_results = [
            self.test_catalan_count(),
            self.test_marking_census(),
            self.test_canonical_markings(),
            self.test_markov_correspondence(),
            self.test_mori_trains(),
            self.test_slides(),
            self.test_w_hat(),
            self.test_fake_wpp(),
            self.test_m_resolutions(),
            self.test_degree8_classes(),
            self.test_pell_families(),
            self.test_impossibility_harvest(),
            self.test_bundle_numerics(),
            self.test_kernel_properties(),
        ]
        passed_count = sum(1 for t in test_results if t["passed"])
        logger.info("passed %d/%d", passed_count, len(test_results))
        return test_results

    @staticmethod
    def exit_code(test_results: List[Dict]) -> int:
        if any(t.get("internal") for t in test_results):
            return 3
        if not all(t["passed"] for t in test_results):
            return 1
        return 0


def _golden_marking(row: Dict):
    central, k = parse_marking(row["marking"])
    return find_marking(WahlPair(row["n"], row["a"]), central, k)


def _coprime_pairs(bound: int) -> Iterator[Tuple[int, int]]:
    for m in range(2, bound + 1):
        for q in range(1, m):
            if gcd(m, q) == 1:
                yield m, q


def _wahl_pairs(max_n: int) -> Iterator[WahlPair]:
    return (WahlPair(n, a) for n, a in _coprime_pairs(max_n))


def _pair_or_none(n: int, a: int) -> Optional[WahlPair]:
    try:
        return WahlPair(n, a)
    except WahlKitError:
        return None


def _cqs_or_none(delta: int, omega: int) -> Optional[CQS]:
    try:
        return CQS(delta, omega)
    except WahlKitError:
        return None


if __name__ == "__main__":
    import sys

    from config import configure_logging

    configure_logging()
    verifier = AcceptanceVerifier(quick="--quick" in sys.argv[1:])
    test_results = verifier.run_all_tests()
    print("\n" + "=" * 60)
    print("ACCEPTANCE SUMMARY")
    print("=" * 60)
    for result in test_results:
        status = "PASS" if result["passed"] else "FAIL"
        print(f"{status} - {result['test_name']} ({result['anchor']})")
    sys.exit(verifier.exit_code(test_results))
