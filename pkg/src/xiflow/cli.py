"""Command-line surface: derive, certify, scan, simulate, verify-paper.

Exit codes: 0 success / certificate found, 3 no certificate, 2 usage errors.
Exact quantities appear in JSON as "p/q" strings; numeric ones as floats.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import alphascan, heatsim, verify
from .certify import certify
from .flow import derive_s0
from .ibp import classify_monomials, enumerate_partitions, generators, gram_basis
from .ratcore import rat, rat_str

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_CERTIFICATE = 3


def _parse_rational(text: str) -> Fraction:
    try:
        return rat(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r} ({exc})")


def _load_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="xiflow",
        description="Sign certificates for higher time derivatives of Tsallis entropy "
                    "along the heat flow",
    )
    ap.add_argument("--json", action="store_true", help="emit JSON instead of text")
    ap.add_argument("--seed", type=int, default=0, help="seed for the numeric search")
    ap.add_argument("--threads", type=int, default=1, help="worker threads for scans")
    ap.add_argument("--tol", type=float, default=1e-9, help="numeric feasibility tolerance")
    ap.add_argument("--config", help="key=value config file; flags override")
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("derive", help="show S0, the shift polynomials, and the monomial split")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--counts-only", action="store_true")
    d.add_argument("--show-generators", action="store_true", default=True)

    ce = sub.add_parser("certify", help="search for an exact SOS certificate at one alpha")
    ce.add_argument("--n", type=int, required=True)
    ce.add_argument("--alpha", type=_parse_rational, required=True)
    ce.add_argument("--emit-sos", action="store_true", help="print the squares")
    ce.add_argument("--restarts", type=int, default=32)

    sc = sub.add_parser("scan", help="certify along a grid and report intervals")
    sc.add_argument("--n", type=int, required=True)
    sc.add_argument("--lo", type=_parse_rational, required=True)
    sc.add_argument("--hi", type=_parse_rational, required=True)
    sc.add_argument("--step", type=_parse_rational, required=True)
    sc.add_argument("--no-refine", action="store_true")
    sc.add_argument("--restarts", type=int, default=32)

    si = sub.add_parser("simulate", help="finite-difference sign checks on a Gaussian mixture")
    si.add_argument("--mix", required=True, help="components as w:mu:s triples, comma separated")
    si.add_argument("--alpha", type=float, required=True)
    si.add_argument("--t0", type=float, required=True)
    si.add_argument("--nmax", type=int, default=5)
    si.add_argument("--h", type=float, default=None)
    si.add_argument("--series-csv", help="also write a (t, entropy) series to this CSV file")
    si.add_argument("--series-times", default="",
                    help="comma-separated times for --series-csv (default: 32 points to 4*t0)")

    sub.add_parser("verify-paper", help="re-derive and compare all displayed identities")
    return ap


def cmd_derive(args) -> int:
    n = args.n
    if not 1 <= n <= 6:
        print(f"derive supports 1 <= n <= 6, got {n}", file=sys.stderr)
        return EXIT_USAGE
    gens = generators(n)
    rep, mv = classify_monomials(n)
    basis = gram_basis(n)
    counts = {
        "n": n,
        "generators": len(gens),
        "weight_2n_monomials": len(enumerate_partitions(2 * n)),
        "representable": len(rep),
        "must_vanish": len(mv),
        "gram_basis": len(basis),
    }
    if args.json:
        payload = dict(counts)
        if not args.counts_only:
            payload["s0"] = derive_s0(n).render()
            payload["generators_list"] = [
                {"partition": g.partition.render(), "poly": g.poly.render()} for g in gens
            ]
            payload["must_vanish_list"] = [m.render() for m in mv]
            payload["gram_basis_list"] = [m.render() for m in basis]
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    print(f"order n={n}: {counts['generators']} shift polynomials, "
          f"{counts['weight_2n_monomials']} weight-{2 * n} monomials "
          f"({counts['representable']} representable, {counts['must_vanish']} must vanish), "
          f"Gram basis size {counts['gram_basis']}")
    if args.counts_only:
        return EXIT_OK
    print(f"S0 = {derive_s0(n).render()}")
    for j, g in enumerate(gens, start=1):
        print(f"T{j} [{g.partition.render()}] = {g.poly.render()}")
    print("must vanish:", ", ".join(m.render() for m in mv))
    print("Gram basis:", ", ".join(m.render() for m in basis))
    return EXIT_OK


def cmd_certify(args) -> int:
    try:
        cert = certify(args.n, args.alpha, restarts=args.restarts, seed=args.seed,
                       numeric_tol=args.tol)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps(cert.to_json_dict(), indent=2))
    else:
        print(f"n={cert.n} alpha={rat_str(cert.alpha)} sigma={cert.sigma:+d} "
              f"-> {cert.status.value} (best lambda_min {cert.best_lambda_min:.3e})")
        if cert.feasible and args.emit_sos:
            for w, p in cert.squares:
                print(f"  {rat_str(w)} * ({p.render()})^2")
        if cert.feasible:
            print(cert.relation())
        else:
            print("no certificate found (one-sided method)")
    return EXIT_OK if cert.feasible else EXIT_NO_CERTIFICATE


def cmd_scan(args) -> int:
    report = alphascan.scan(
        args.n, args.lo, args.hi, args.step,
        refine=not args.no_refine, seed=args.seed, restarts=args.restarts,
        threads=args.threads,
    )
    if args.json:
        print(json.dumps(report.to_json_dict(), indent=2))
        return EXIT_OK
    for g in report.grid:
        lam = "" if g.lambda_min is None else f" lambda~{g.lambda_min:+.2e}"
        print(f"alpha={rat_str(g.alpha):>8s}: {g.status.value}{lam}")
    for iv in report.intervals:
        print("interval:", json.dumps(iv.to_json_dict()))
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        mix = heatsim.Mixture.parse(args.mix)
    except ValueError as exc:
        print(f"invalid mixture: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rep = heatsim.derivative_signs(mix, args.alpha, args.t0, args.nmax, h=args.h)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    if args.series_csv:
        if args.series_times:
            times = [float(t) for t in args.series_times.split(",")]
        else:
            times = [args.t0 * (0.25 + 3.75 * k / 31) for k in range(32)]
        heatsim.write_entropy_csv(mix, args.alpha, times, args.series_csv)
    if args.json:
        print(json.dumps(rep.to_json_dict(), indent=2))
        return EXIT_OK
    print(f"alpha={args.alpha} t0={args.t0} h={rep.h} "
          "(original-scale flow u_t = u_xx/2)")
    for e in rep.entries:
        print(f"  d^{e.order}H/dt^{e.order} = {e.value:+.6e}  (err ~{e.error:.1e})  sign: {e.verdict}")
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    checks = verify.run_all_checks()
    ok = verify.verdict(checks)
    if args.json:
        print(json.dumps({"ok": ok, "checks": [c.to_json_dict() for c in checks]}, indent=2))
    else:
        for c in checks:
            tag = {"verified": "ok", "discrepant": "DISCREPANT", "skipped": "skipped"}[c.status.value]
            expected = " (expected)" if c.id in verify.EXPECTED_DISCREPANT and tag == "DISCREPANT" else ""
            print(f"[{tag}{expected}] {c.id}: {c.detail}")
        n_ver = sum(c.status is verify.CheckStatus.VERIFIED for c in checks)
        n_dis = sum(c.status is verify.CheckStatus.DISCREPANT for c in checks)
        print(f"{n_ver} verified, {n_dis} discrepant "
              f"(expected discrepant: {', '.join(sorted(verify.EXPECTED_DISCREPANT))})")
        print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else 1


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = {}
    if args.config:
        try:
            cfg = _load_config(args.config)
        except (OSError, ValueError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    # config supplies defaults for global knobs; explicit flags win
    if "seed" in cfg and args.seed == ap.get_default("seed"):
        args.seed = int(cfg["seed"])
    if "tol" in cfg and args.tol == ap.get_default("tol"):
        args.tol = float(cfg["tol"])
    if "threads" in cfg and args.threads == ap.get_default("threads"):
        args.threads = int(cfg["threads"])

    handlers = {
        "derive": cmd_derive,
        "certify": cmd_certify,
        "scan": cmd_scan,
        "simulate": cmd_simulate,
        "verify-paper": cmd_verify_paper,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
