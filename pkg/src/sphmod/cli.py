"""Command-line entry point: ``sphmod <subcommand> [flags]``.

Exit status is 0 on success, 1 when a verification fails and 2 on a usage
error (bad flags, malformed JSON, out-of-range parameters).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .coeff import CaseConfig, format_scalar, scalar_eval_q

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# flag parsing helpers


def _sign(text: str) -> int:
    t = text.strip()
    if t in ("+", "+1", "1"):
        return 1
    if t in ("-", "-1"):
        return -1
    raise argparse.ArgumentTypeError(f"expected +1 or -1, got {text!r}")


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("window needs LO <= HI")
    return lo, hi


def _cfg(args) -> CaseConfig:
    eps = getattr(args, "epsilon", None)
    if args.case != "S":
        if eps not in (None, 1):
            raise UsageError(f"--epsilon only applies to case S")
        return CaseConfig(args.case)
    return CaseConfig("S", 1 if eps is None else eps)


def _nonneg(name: str, v) -> int:
    if v is None:
        raise UsageError(f"--{name} is required")
    if v < 0:
        raise UsageError(f"--{name} must be non-negative")
    return v


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_json(path: str):
    try:
        raw = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc


def _read_element(args):
    from .typmon import element_from_json

    try:
        x, cfg = element_from_json(_read_json(args.inp))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.case is not None and args.case != cfg.case:
        raise UsageError(f"--case {args.case} disagrees with the element's case {cfg.case}")
    if args.epsilon is not None and cfg.case == "S" and args.epsilon != cfg.epsilon:
        raise UsageError("--epsilon disagrees with the element's epsilon")
    return x, cfg


# ---------------------------------------------------------------------------
# subcommands


def cmd_straighten(args) -> int:
    from .straighten import normal_form
    from .typmon import delta_to_orbit, element_to_json

    x, cfg = _read_element(args)
    nf = normal_form(x, cfg)
    out = element_to_json(nf, cfg)
    out["orbits"] = delta_to_orbit(nf, cfg).to_json()
    _emit(out, args.out)
    return EXIT_OK


def cmd_qcount(args) -> int:
    from . import qcomb

    cfg = _cfg(args)
    r = _nonneg("r", args.r)
    chi = args.chi
    if cfg.case != "S" and chi != 1:
        raise UsageError("--chi only applies to case S")
    if args.kind == "S":
        params = {"b": _nonneg("b", args.b), "r": r, "chi": chi}
        val = qcomb.count_S(params["b"], r, chi, cfg)
    elif args.kind == "R":
        params = {"a": _nonneg("a", args.a), "eta": args.eta, "r": r, "chi": chi}
        val = qcomb.count_R(params["a"], args.eta, r, chi, cfg)
    elif args.kind == "Q":
        n, m = _nonneg("n", args.n), _nonneg("m", args.m)
        w = 2 // cfg.gamma
        l = r - n - w * m
        if l < 0:
            raise UsageError("need n + (2/gamma) m <= r")
        psi2 = chi * args.psi1 * cfg.epsilon ** m if cfg.case == "S" else 1
        params = {"n": n, "psi1": args.psi1, "m": m, "l": l, "psi2": psi2}
        val = qcomb.count_Q(n, args.psi1, m, l, psi2, cfg)
    else:
        params = {"r": r, "chi": chi}
        val = qcomb.card_H(r, chi, cfg)
    out = {"case": cfg.case, "epsilon": cfg.epsilon, "kind": args.kind, "params": params, "symbolic": format_scalar(val)}
    if args.q is not None:
        out["q"] = args.q
        out["value"] = str(scalar_eval_q(val, args.q, cfg.case))
    _emit(out, args.out)
    return EXIT_OK


def cmd_hecke(args) -> int:
    from .hecke import t_star_direct, t_star_via_delta
    from .typmon import OrbitType

    cfg = _cfg(args)
    try:
        raw = json.loads(args.orbit) if not args.orbit.startswith("@") else _read_json(args.orbit[1:])
        o = OrbitType.from_json(raw)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, AttributeError) as exc:
        raise UsageError(f"bad --orbit: {exc}") from exc
    if cfg.case != "S" and any(c != 1 for c in o.chi0.values()):
        raise UsageError(f"orbit signs must be + in case {cfg.case}")
    if args.r is not None and args.r != o.rank:
        raise UsageError(f"--r {args.r} but the orbit has rank {o.rank}")
    k = _nonneg("k", args.k)
    if k > cfg.gamma * o.rank:
        raise UsageError(f"--k must lie in [0, {cfg.gamma * o.rank}]")
    out = {"case": cfg.case, "epsilon": cfg.epsilon, "orbit": o.to_json(), "k": k, "method": args.method}
    status = EXIT_OK
    if args.method in ("direct", "both"):
        out["direct"] = t_star_direct(o, k, cfg).to_json()
    if args.method in ("delta", "both"):
        out["delta"] = t_star_via_delta(o, k, cfg).to_json()
    if args.method == "both":
        out["agree"] = out["direct"] == out["delta"]
        status = EXIT_OK if out["agree"] else EXIT_FAIL
    _emit(out, args.out)
    return status


def cmd_basis(args) -> int:
    from .module_structure import basis_set

    cfg = _cfg(args)
    r = _nonneg("r", args.r)
    B = basis_set(cfg, r)
    _emit({"case": cfg.case, "epsilon": cfg.epsilon, "r": r, "size": len(B), "basis": [str(b) for b in B]}, args.out)
    return EXIT_OK


def cmd_expand(args) -> int:
    from .module_structure import expand_in_basis, expansion_to_json, reexpand
    from .straighten import normal_form
    from .typmon import element_to_json

    x, cfg = _read_element(args)
    exp = expand_in_basis(x, cfg)
    ok = normal_form(reexpand(exp, x.degree, cfg), cfg) == normal_form(x, cfg)
    _emit({"element": element_to_json(x, cfg), "expansion": expansion_to_json(exp), "verified": ok}, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_transforms(args) -> int:
    from .transforms import factorization_check, recursion_check

    if args.case == "S":
        raise UsageError("transforms apply to cases uH and A")
    cfg = _cfg(args)
    r = _nonneg("r", args.r)
    rows = []
    ok = True
    for rr in range(1, r + 1):
        for rep in (factorization_check(cfg, rr), recursion_check(cfg, rr)):
            for name, diff in rep.results.items():
                rows.append({"r": rr, "identity": name, "ok": diff is None, "witness": None if diff is None else repr(diff)})
                ok = ok and diff is None
    _emit({"case": cfg.case, "r_max": r, "ok": ok, "checks": rows}, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_confluence(args) -> int:
    from .straighten import confluence_check

    cfg = _cfg(args)
    rep = confluence_check(cfg, args.window)
    _emit(rep.to_json(), args.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def _check_prime(p: int) -> None:
    if p is None or p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise UsageError("--p must be a prime")


def cmd_oracle_ff(args) -> int:
    from .oracles.fields import field
    from .oracles.finitefield import BudgetExceeded, Degenerate, FormSpace, compare_counts, epsilon_for, standard_gram

    _check_prime(args.p)
    if args.case == "S" and args.p == 2:
        raise UsageError("case S needs odd p")
    F = field(args.p, 2 if args.case == "uH" else 1)
    cfg = CaseConfig(args.case, epsilon_for(args.p) if args.case == "S" else 1)
    if args.gram:
        from .oracles.finitefield import parse_gram

        try:
            G = parse_gram(args.gram, F)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if args.dim is not None and args.dim != len(G):
            raise UsageError("--dim disagrees with the gram matrix")
    else:
        dim = _nonneg("dim", args.dim)
        if args.case == "A" and dim % 2:
            raise UsageError("alternating forms need even --dim")
        G = standard_gram(cfg, F, dim // cfg.gamma, args.chi)
    try:
        fs = FormSpace(cfg, F, tuple(tuple(r) for r in G))
        rep = compare_counts(fs)
    except (ValueError, Degenerate, BudgetExceeded) as exc:
        raise UsageError(str(exc)) from exc

    def table(d):
        return {json.dumps(k) if isinstance(k, tuple) else str(k): str(v) for k, v in sorted(d.items(), key=repr)}

    out = {
        "case": cfg.case,
        "epsilon": cfg.epsilon,
        "field": F.q,
        "gram": G,
        "brute": {kind: table(v) for kind, v in rep.brute.items()},
        "formula": {kind: table({k: v for k, v in d.items() if v}) for kind, d in rep.formula.items()},
        "mismatches": [list(map(str, m)) for m in rep.mismatches],
        "ok": rep.ok,
    }
    _emit(out, args.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_oracle_padic(args) -> int:
    from .oracles.padic import GramLattice, PrecisionLoss, TruncatedRing, parse_padic_gram, verify_main_lemma
    from .oracles.finitefield import epsilon_for

    _check_prime(args.p)
    if args.p == 2:
        raise UsageError("the p-adic oracle needs odd p")
    if not args.gram:
        raise UsageError("--gram is required")
    cfg = CaseConfig(args.case, epsilon_for(args.p) if args.case == "S" else 1)
    R = TruncatedRing(args.p, args.N, 2 if args.case == "uH" else 1)
    try:
        G = parse_padic_gram(args.gram, R)
        gl = GramLattice(cfg, R, G)
        ks = None if args.k is None else [args.k]
        if args.k is not None and not 0 <= args.k <= gl.n:
            raise UsageError(f"--k must lie in [0, {gl.n}]")
        rep = verify_main_lemma(gl, ks)
    except PrecisionLoss as exc:
        raise UsageError(f"precision exhausted, raise --N: {exc}") from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = {
        "case": cfg.case,
        "epsilon": cfg.epsilon,
        "p": args.p,
        "N": args.N,
        "orbit": rep.orbit.to_json(),
        "sublattices": rep.checked,
        "histograms": {
            str(k): [{"orbit": o.to_json(), "count": n} for o, n in sorted(h.items())]
            for k, h in sorted(rep.histograms.items())
        },
        "type_mismatches": [{"k": k, "U": U, "actual": repr(a), "predicted": repr(p)} for k, U, a, p in rep.mismatches],
        "count_mismatches": [{"k": k} for k, *_ in rep.count_mismatches],
        "ok": rep.ok,
    }
    _emit(out, args.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_verify_all(args) -> int:
    from .suites import format_table, run_all

    results = run_all(quick=args.quick, seed=args.seed, log=lambda s: print(s, file=sys.stderr))
    summary = {
        "mode": "quick" if args.quick else "full",
        "seed": args.seed,
        "ok": all(r.ok for r in results),
        "suites": [r.to_json() for r in results],
    }
    tables = format_table(results)
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        (d / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
        (d / "tables.txt").write_text(tables)
    sys.stdout.write(tables)
    return EXIT_OK if summary["ok"] else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sphmod", description="Straightening relations and Hecke operators on spherical functions.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, case_required=True, cases=("uH", "S", "A")):
        p.add_argument("--case", choices=cases, required=case_required)
        p.add_argument("--epsilon", type=_sign, default=None, help="+1 or -1 (case S)")
        p.add_argument("--out", default=None, help="write JSON here instead of stdout")

    p = sub.add_parser("straighten", help="normal form of an element given as JSON")
    common(p, case_required=False)
    p.add_argument("--in", dest="inp", required=True)
    p.set_defaults(func=cmd_straighten)

    p = sub.add_parser("qcount", help="closed-form counts")
    common(p)
    p.add_argument("--kind", choices=("S", "R", "Q", "H"), required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--chi", type=_sign, default=1)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--eta", type=_sign, default=1)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--psi1", type=_sign, default=1)
    p.add_argument("--q", type=int, default=None, help="specialise at this prime power")
    p.set_defaults(func=cmd_qcount)

    p = sub.add_parser("hecke", help="Hecke operator on an orbit")
    common(p)
    p.add_argument("--r", type=int)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--orbit", required=True, help="orbit JSON, or @file")
    p.add_argument("--method", choices=("direct", "delta", "both"), default="direct")
    p.set_defaults(func=cmd_hecke)

    p = sub.add_parser("basis", help="list the free-module basis")
    common(p)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("expand", help="expand an element in the basis")
    common(p, case_required=False)
    p.add_argument("--in", dest="inp", required=True)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("transforms", help="check the generating-function identities")
    common(p)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_transforms)

    p = sub.add_parser("confluence", help="check every overlap in a window")
    common(p)
    p.add_argument("--window", type=_window, default=(0, 4))
    p.set_defaults(func=cmd_confluence)

    p = sub.add_parser("oracle", help="brute-force oracles")
    osub = p.add_subparsers(dest="oracle", required=True)
    o = osub.add_parser("ff", help="finite-field subspace counts")
    o.add_argument("--case", choices=("uH", "S", "A"), required=True)
    o.add_argument("--p", type=int, required=True)
    o.add_argument("--dim", type=int)
    o.add_argument("--chi", type=_sign, default=1)
    o.add_argument("--gram", default=None)
    o.add_argument("--out", default=None)
    o.set_defaults(func=cmd_oracle_ff)
    o = osub.add_parser("padic", help="sublattice types over a truncated p-adic ring")
    o.add_argument("--case", choices=("uH", "S", "A"), required=True)
    o.add_argument("--p", type=int, required=True)
    o.add_argument("--N", type=int, default=8)
    o.add_argument("--gram", required=True)
    o.add_argument("--k", type=int, default=None)
    o.add_argument("--out", default=None)
    o.set_defaults(func=cmd_oracle_padic)

    p = sub.add_parser("verify-all", help="run every acceptance suite")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--quick", action="store_true")
    g.add_argument("--full", dest="quick", action="store_false")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="directory for summary.json and tables.txt")
    p.set_defaults(func=cmd_verify_all)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sphmod: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # verification machinery failing counts as a failed check
        from .straighten import FuelExhausted, NonConfluent

        if isinstance(exc, (FuelExhausted, NonConfluent, AssertionError)):
            print(f"sphmod: verification failed: {exc!r}", file=sys.stderr)
            return EXIT_FAIL
        raise


if __name__ == "__main__":
    sys.exit(main())
