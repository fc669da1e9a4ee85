"""The end-to-end verification suites shared by the CLI and the test-suite."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .coeff import CaseConfig, Scalar
from .hecke import (
    delta_half,
    delta_r,
    orbit_representatives,
    orbits_in_window,
    preserves_rel_check,
    t_star_direct,
    t_star_via_delta,
)
from .module_structure import leading_term_check, rank_report, round_trip_check
from .straighten import (
    confluence_check,
    derived_relations_check,
    normal_form,
    normal_form_random,
)
from .transforms import factorization_check, recursion_check
from .typmon import Element

ALL_CASES = (CaseConfig("uH"), CaseConfig("A"), CaseConfig("S", 1), CaseConfig("S", -1))
S_CASES = (CaseConfig("S", 1), CaseConfig("S", -1))


@dataclass
class SuiteResult:
    name: str
    ok: bool = True
    rows: list = field(default_factory=list)  # (label, ok, detail)
    seconds: float = 0.0

    def add(self, label: str, ok: bool, detail: str = "") -> None:
        self.rows.append((label, bool(ok), detail))
        self.ok = self.ok and bool(ok)

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "ok": self.ok,
            "checks": [{"label": l, "ok": o, "detail": d} for l, o, d in self.rows],
        }


def random_element(cfg: CaseConfig, rng: random.Random, r: int, window=(0, 4), terms: int = 3) -> Element:
    lo, hi = window
    acc = Element.zero(r)
    for _ in range(terms):
        w = [(rng.randint(lo, hi), rng.choice(cfg.signs)) for _ in range(r)]
        acc = acc + Element.word(w, Scalar.const(rng.randint(-3, 3) or 1))
    return acc


def finite_field_suite(quick: bool = False) -> SuiteResult:
    from .oracles.finitefield import compare_counts, suite_spaces

    res = SuiteResult("finite-field counts")
    spaces = suite_spaces(3, 4) if quick else suite_spaces(4, 6)
    for fs in spaces:
        rep = compare_counts(fs)
        label = f"{fs.cfg} over GF({fs.F.q}), dim {fs.dim}, gram diag {[fs.gram[i][i] for i in range(fs.dim)]}"
        res.add(label, rep.ok, "" if rep.ok else repr(rep.mismatches[:3]))
    return res


def confluence_suite(quick: bool = False, seeds: int = 500, seed: int = 0) -> SuiteResult:
    res = SuiteResult("confluence")
    for cfg in ALL_CASES:
        rep = confluence_check(cfg, (0, 4))
        named_ok = rep.covers_named
        res.add(f"{cfg} overlaps on [0,4]", rep.ok and named_ok, f"{rep.checked} overlaps, {len(rep.named)} named")
    n = 50 if quick else seeds
    for cfg in ALL_CASES:
        bad = 0
        for s in range(seed, seed + n):
            rng = random.Random(s)
            x = random_element(cfg, rng, rng.choice((2, 3, 4)))
            if normal_form(x, cfg) != normal_form_random(x, cfg, rng):
                bad += 1
        res.add(f"{cfg} strategy independence", bad == 0, f"{n} seeds, {bad} discrepancies")
    return res


def rel_preservation_suite(quick: bool = False) -> SuiteResult:
    res = SuiteResult("Rel preservation")
    window = (0, 3) if quick else (0, 4)
    for cfg in ALL_CASES:
        for r in (1, 2, 3):
            ops = [("Delta", delta_r(cfg, r))]
            if cfg.case != "S":
                ops.append(("half", delta_half(cfg, r)))
            for name, op in ops:
                rep = preserves_rel_check(op, cfg, window)
                res.add(f"{cfg} {name}_r, r={r}", rep.ok, f"{rep.checked} checks")
    return res


def main_theorem_suite(quick: bool = False) -> SuiteResult:
    res = SuiteResult("direct count = straightened Delta")
    rmax = 2 if quick else 3
    for cfg in ALL_CASES:
        n = bad = 0
        for r in range(1, rmax + 1):
            for o in orbits_in_window(cfg, r, 0, 3):
                reps = orbit_representatives(o, cfg)
                for k in range(cfg.gamma * r + 1):
                    direct = t_star_direct(o, k, cfg)
                    for rep in reps:
                        n += 1
                        if t_star_via_delta(o, k, cfg, rep) != direct:
                            bad += 1
        res.add(f"{cfg} orbits in [0,3], r<={rmax}", bad == 0, f"{n} comparisons, {bad} mismatches")
    return res


def padic_suite(quick: bool = False) -> SuiteResult:
    from .oracles.padic import case_config_for, lattice_of_orbit, verify_main_lemma

    res = SuiteResult("p-adic lattice oracle")
    plan = [("uH", 3, 3), ("S", 3, 3), ("S", 5, 3), ("A", 3, 2)]
    hi = 2 if quick else 3
    for case, p, rmax in plan:
        if quick:
            rmax = min(rmax, 2)
        cfg = case_config_for(case, p)
        n = bad = cbad = 0
        for r in range(1, rmax + 1):
            for o in orbits_in_window(cfg, r, 0, hi):
                rep = verify_main_lemma(lattice_of_orbit(o, cfg, p))
                n += rep.checked
                bad += len(rep.mismatches) + (rep.orbit != o)
                cbad += len(rep.count_mismatches)
        res.add(
            f"{cfg} p={p}, rank<={rmax}, valuations in [0,{hi}]",
            bad == 0 and cbad == 0,
            f"{n} sublattices, {bad} type mismatches, {cbad} histogram mismatches",
        )
    return res


def freeness_suite(quick: bool = False) -> SuiteResult:
    res = SuiteResult("free module structure")
    for cfg in ALL_CASES:
        for r in (1, 2, 3):
            try:
                n = rank_report(cfg, r)
                res.add(f"{cfg} rank, r={r}", True, str(n))
            except AssertionError as exc:
                res.add(f"{cfg} rank, r={r}", False, str(exc))
    window = (0, 4) if quick else (0, 5)
    for cfg in ALL_CASES:
        for r in (1, 2):
            rep = leading_term_check(cfg, r, window)
            res.add(f"{cfg} leading terms, r={r}", rep.ok, f"{rep.checked} checks")
            rep = round_trip_check(cfg, r, window)
            res.add(f"{cfg} expansion round trip, r={r}", rep.ok, f"{rep.checked} words")
    return res


def transforms_suite(quick: bool = False) -> SuiteResult:
    res = SuiteResult("transform identities")
    for cfg in (CaseConfig("uH"), CaseConfig("A")):
        for r in range(1, 5):
            f = factorization_check(cfg, r)
            g = recursion_check(cfg, r)
            res.add(f"{cfg} r={r}", f.ok and g.ok, "" if f.ok and g.ok else repr({**f.results, **g.results}))
    return res


def derived_suite(quick: bool = False) -> SuiteResult:
    res = SuiteResult("derived relations")
    for cfg in S_CASES:
        rep = derived_relations_check(cfg, (0, 4))
        res.add(f"{cfg} on [0,4]", rep.ok, f"{len(rep.results)} congruences")
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "1": finite_field_suite,
    "2": confluence_suite,
    "3": rel_preservation_suite,
    "4": main_theorem_suite,
    "5": padic_suite,
    "6": freeness_suite,
    "7": transforms_suite,
    "8": derived_suite,
}


def run_all(quick: bool = False, seed: int = 0, log=None) -> list[SuiteResult]:
    out = []
    for key, fn in SUITES.items():
        t = time.perf_counter()
        res = fn(quick=quick, seed=seed) if key == "2" else fn(quick=quick)
        res.seconds = time.perf_counter() - t
        if log:
            log(f"[{key}] {res.name}: {'PASS' if res.ok else 'FAIL'} ({res.seconds:.1f}s)")
        out.append(res)
    return out


def format_table(results: list[SuiteResult]) -> str:
    lines = []
    for i, res in enumerate(results, 1):
        lines.append(f"== {i}. {res.name}: {'PASS' if res.ok else 'FAIL'}")
        width = max((len(l) for l, _, _ in res.rows), default=0)
        for label, ok, detail in res.rows:
            lines.append(f"  {'ok  ' if ok else 'FAIL'} {label.ljust(width)}  {detail}")
    return "\n".join(lines) + "\n"
