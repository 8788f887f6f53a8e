"""Command-line entry point: construct, verify, decompose, simulate.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import manifest, statecheck
from .agcode import ParameterError
from .csscode import quantum_params
from .curves import parse_descriptor
from .decoder import build_decoder, choose_degA1
from .distill import ErrorModel, overhead_report, simulate
from .gf2e import UnsupportedFieldError, get_field
from .phasepoly import decomposition, search_min_ccz
from .selfdual import SelfDualBasis, find_self_dual_basis, is_self_dual, paper_basis_s10
from .triortho import construct, is_triorthogonal, preset, structure_checks, transversality_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

PRESETS = {"small": "rational:s=5", "paper": "hermitian:q0=32"}


class UsageError(Exception):
    pass


def default_basis(spec, seed: int) -> SelfDualBasis:
    ref = paper_basis_s10()
    if spec == ref.spec:
        return ref
    return find_self_dual_basis(spec, seed)


def _emit(obj: Any, path: str | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# --- construct ----------------------------------------------------------------


def cmd_construct(args: argparse.Namespace) -> int:
    desc = PRESETS[args.preset] if args.preset else args.curve
    if not desc:
        raise UsageError("give --curve or --preset")
    curve = parse_descriptor(desc)
    a0, k0 = preset(curve)
    a = a0 if args.a is None else args.a
    k = k0 if args.k is None else args.k
    start = time.perf_counter()
    T = construct(curve, a, k, args.seed)
    params = quantum_params(T, args.t)
    deg_a1 = choose_degA1(curve, a, k, params.t)
    basis = default_basis(curve.spec, args.seed)
    body = manifest.build_body(T, basis, params.t, deg_a1, params.d_lower)
    manifest.write(args.out, body, True if args.gzip else None)
    c_conv = decomposition(basis).C
    ov = overhead_report(T, c_conv)
    rows = [
        ("curve", curve.descriptor),
        ("g", curve.genus),
        ("a", a),
        ("n", T.n),
        ("k", T.k),
        ("m", T.m),
        ("N", T.N),
        ("d_lower", params.d_lower),
        ("t", params.t),
        ("degA1", deg_a1),
        ("C_conv", c_conv),
        ("overhead C*n/k", f"{float(ov.ratio):.2f}"),
        ("seconds", f"{time.perf_counter() - start:.1f}"),
    ]
    for key, val in rows:
        print(f"{key:>16}  {val}")
    return EXIT_OK


# --- verify -------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    text = manifest.read_text(args.artifact)
    report: dict[str, Any] = {"artifact": str(args.artifact), "digest_ok": manifest.digest_ok(text)}
    doc = manifest.loads(text, check_digest=False)
    T, basis, par = manifest.to_objects(doc)
    tri = is_triorthogonal(T, args.mode, args.trials, args.seed)
    report["triorthogonality"] = tri.as_dict()
    tt = args.transversality_trials if args.transversality_trials is not None else min(args.trials, 1000)
    report["transversality"] = {"trials": tt, "passed": transversality_check(T, tt, args.seed)}
    report["structure"] = structure_checks(T, args.seed)
    report["basis_self_dual"] = is_self_dual(basis)
    try:
        qp = quantum_params(T, par.get("t"))
        report["params"] = qp.as_dict()
        report["params_match"] = qp.d_lower == par["d_lower"]
    except ParameterError as exc:
        report["params"] = {"error": str(exc)}
        report["params_match"] = False
    report["overhead"] = overhead_report(T, decomposition(basis).C).as_dict()
    checks = [
        report["digest_ok"],
        tri.passed,
        report["transversality"]["passed"],
        all(report["structure"].values()),
        report["basis_self_dual"],
        report["params_match"],
    ]
    if args.states:
        st = {
            "teleport_u": statecheck.teleport_u_check(args.seed, n_states=10),
            "teleport_ccz": statecheck.teleport_ccz_check(args.seed, n_states=10),
            "twirl": statecheck.twirl_check(args.seed, n_densities=10),
        }
        report["states"] = st
        checks.append(st["teleport_u"] < 1e-10 and st["teleport_ccz"] < 1e-10 and st["twirl"] < 1e-12)
    report["passed"] = all(checks)
    _emit(report, args.json)
    if not report["passed"]:
        if tri.violations:
            v = tri.violations[0]
            idx = (v["a"], v["b"], v["c"]) if v["kind"] == "cubic" else (v["a"], v["b"])
            print(f"verification failed: {v['kind']} identity violated at rows {idx}", file=sys.stderr)
        elif not report["digest_ok"]:
            print("verification failed: digest mismatch", file=sys.stderr)
        else:
            print("verification failed", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# --- decompose ----------------------------------------------------------------


def cmd_decompose(args: argparse.Namespace) -> int:
    if args.basis == "paper":
        basis = paper_basis_s10()
    elif args.basis == "file":
        if not args.basis_file:
            raise UsageError("--basis file needs --basis-file")
        data = json.loads(Path(args.basis_file).read_text())
        spec = get_field(int(data["s"]), int(data.get("modulus", "0"), 16))
        basis = SelfDualBasis.from_hex(spec, data["basis"])
        if not is_self_dual(basis):
            print("basis file is not self-dual", file=sys.stderr)
            return EXIT_FAIL
    else:
        spec = get_field(args.s)
        basis, _ = search_min_ccz(spec, args.budget, args.seed)
    d = decomposition(basis)
    out = d.gate_sets()
    out["C"] = d.C
    out["s"] = basis.s
    out["modulus"] = format(basis.spec.modulus, "x")
    out["basis"] = basis.to_hex()
    _emit(out, args.out)
    return EXIT_OK


# --- simulate -----------------------------------------------------------------


def _workers(flag: int | None) -> int:
    if flag is not None:
        return max(1, flag)
    env = os.environ.get("AGDISTILL_THREADS")
    return max(1, int(env)) if env else 1


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    model = ErrorModel("iid", p=args.p) if args.p is not None else ErrorModel("fixed_weight", weight=args.weight)
    T, _, par = manifest.to_objects(manifest.read(args.artifact))
    cfg = build_decoder(T, args.t if args.t is not None else par["t"], par.get("degA1"))
    rep = simulate(T, cfg, model, args.trials, args.seed, _workers(args.workers), args.c_conv)
    if args.json:
        Path(args.json).write_text(rep.to_json())
    if args.csv:
        Path(args.csv).write_text(rep.to_csv())
    if not args.json and not args.csv:
        sys.stdout.write(rep.to_json())
    print(f"wall time {rep.wall_time:.2f}s", file=sys.stderr)
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="agdistill", description="Triorthogonal AG-code distillation toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a triorthogonal matrix artifact")
    c.add_argument("--curve", help="rational:s=<s> or hermitian:q0=<q0>")
    c.add_argument("--preset", choices=sorted(PRESETS))
    c.add_argument("--a", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--t", type=int)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True)
    c.add_argument("--gzip", action="store_true", help="gzip the manifest")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check an artifact")
    v.add_argument("artifact")
    v.add_argument("--mode", choices=["auto", "exhaustive", "sampled"], default="auto")
    v.add_argument("--trials", type=int, default=10_000)
    v.add_argument("--transversality-trials", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--states", action="store_true", help="also run the dense state checks")
    v.add_argument("--json", help="write the report here instead of stdout")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("decompose", help="Z/CZ/CCZ decomposition of the qudit phase gate")
    d.add_argument("--basis", choices=["paper", "file", "search"], default="paper")
    d.add_argument("--basis-file")
    d.add_argument("--budget", type=int, default=100)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--s", type=int, default=10)
    d.add_argument("--out")
    d.set_defaults(func=cmd_decompose)

    s = sub.add_parser("simulate", help="Monte-Carlo block failure rate")
    s.add_argument("artifact")
    grp = s.add_mutually_exclusive_group(required=True)
    grp.add_argument("--p", type=float)
    grp.add_argument("--weight", type=int)
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int)
    s.add_argument("--t", type=int)
    s.add_argument("--c-conv", type=float, default=1.0)
    s.add_argument("--json")
    s.add_argument("--csv")
    s.set_defaults(func=cmd_simulate)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParameterError, UnsupportedFieldError, ValueError) as exc:
        if isinstance(exc, manifest.ManifestError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
