"""Command-line interface with machine-readable JSON reports.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage error,
3 divergence detected.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .charges import CHARGE_NAMES, ChargeSet, compute_charges, derived
from .clifford import ETA, gamma
from .geometry import ModelConstants, QuadratureSpec, SlicePoint
from .initial_data import decay_validate, model_from_config
from .killing import ALL_LABELS, killing_residual, normalize_label
from .qmatrix import (
    assemble_q,
    boundary_identity,
    psd_check,
    rigidity_check,
    sample_momenta,
    theorem_bounds,
)
from .spinors import KillingParams, killing_spinor, killing_spinor_residual

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_DIVERGED = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_quadrature_flags(p):
    p.add_argument("--ntheta", type=int, default=16)
    p.add_argument("--npsi", type=int, default=16)
    p.add_argument("--nphi", type=int, default=16)
    p.add_argument("--radii", type=str, default="4,5,6,7",
                   help="comma-separated increasing radii")
    p.add_argument("--rtol", type=float, default=1e-8)
    p.add_argument("--kappa", type=float, default=1.0)


def _quadrature(args) -> QuadratureSpec:
    radii = tuple(float(x) for x in args.radii.split(","))
    return QuadratureSpec(args.ntheta, args.npsi, args.nphi, radii, args.rtol)


def _resolved_config(args, extra=None):
    cfg = {"version": __version__}
    for key in ("ntheta", "npsi", "nphi", "radii", "rtol", "kappa", "seed",
                "n", "mode", "variant", "samples", "model"):
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    if extra:
        cfg.update(extra)
    return cfg


def _emit(report, args):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            json.dump(report, fh, sort_keys=True, indent=2)
            fh.write("\n")


def _say(args, *parts):
    if not getattr(args, "quiet", False):
        print(*parts)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="adspet",
                     description="Energy-momenta and positivity bounds for "
                                 "(4+1)-dimensional asymptotically AdS data")
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("what", choices=["clifford", "spinors", "killing"])
    pv.add_argument("--samples", type=int, default=100)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--label", type=str, default=None,
                    help="restrict killing verification to one label a,b")
    pv.add_argument("--kappa", type=float, default=1.0)
    pv.add_argument("--out", type=str, default=None)
    pv.add_argument("--quiet", action="store_true")

    pc = sub.add_parser("charges", help="compute the fifteen charges")
    pc.add_argument("--model", type=str, required=True)
    _add_quadrature_flags(pc)
    pc.add_argument("--out", type=str, default=None)
    pc.add_argument("--quiet", action="store_true")

    pq = sub.add_parser("qmatrix", help="assemble Q and evaluate bounds")
    pq.add_argument("--charges", type=str, required=True,
                    help="charges JSON file produced by the charges command")
    pq.add_argument("--variant", choices=["proof", "theorem-text"],
                    default="proof")
    pq.add_argument("--out", type=str, default=None)
    pq.add_argument("--quiet", action="store_true")

    pb = sub.add_parser("bound", help="charges plus bounds in one pass")
    pb.add_argument("--model", type=str, required=True)
    pb.add_argument("--variant", choices=["proof", "theorem-text"],
                    default="proof")
    _add_quadrature_flags(pb)
    pb.add_argument("--out", type=str, default=None)
    pb.add_argument("--quiet", action="store_true")

    pi = sub.add_parser("identity", help="boundary identity check")
    pi.add_argument("--model", type=str, required=True)
    pi.add_argument("--lambda", dest="lam", type=str, required=True,
                    help="four complex parameters re,im,re,im,re,im,re,im")
    pi.add_argument("--mode", choices=["leading", "exact"], default="leading")
    _add_quadrature_flags(pi)
    pi.add_argument("--out", type=str, default=None)
    pi.add_argument("--quiet", action="store_true")

    ps = sub.add_parser("sample-psd", help="property sweep over PSD samples")
    ps.add_argument("--n", type=int, default=1000)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--variant", choices=["proof", "theorem-text"],
                    default="proof")
    ps.add_argument("--out", type=str, default=None)
    ps.add_argument("--quiet", action="store_true")

    pd = sub.add_parser("decay", help="validate decay of a model")
    pd.add_argument("--model", type=str, required=True)
    _add_quadrature_flags(pd)
    pd.add_argument("--out", type=str, default=None)
    pd.add_argument("--quiet", action="store_true")

    return parser


def _load_model(args):
    text = args.model
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    return model_from_config(text, ModelConstants(args.kappa))


def _cmd_verify_clifford(args):
    failures = []
    for a in range(5):
        for b in range(5):
            anti = gamma(a) @ gamma(b) + gamma(b) @ gamma(a)
            expect = -2.0 * ETA[a, b] * np.eye(4)
            ok = np.array_equal(anti, expect)
            _say(args, f"gamma_{a} gamma_{b} + gamma_{b} gamma_{a} = "
                       f"-2 eta[{a}{b}] Id : {'ok' if ok else 'FAIL'}")
            if not ok:
                failures.append((a, b))
    herm_ok = np.array_equal(gamma(0), gamma(0).conj().T) and all(
        np.array_equal(gamma(i), -gamma(i).conj().T) for i in range(1, 5)
    )
    _say(args, f"hermiticity pattern: {'ok' if herm_ok else 'FAIL'}")
    passed = not failures and herm_ok
    report = {
        "config": _resolved_config(args),
        "anticommutator_failures": [list(f) for f in failures],
        "hermiticity": herm_ok,
        "passed": passed,
    }
    _emit(report, args)
    return EXIT_OK if passed else EXIT_FAILED


def _cmd_verify_spinors(args):
    k = ModelConstants(args.kappa)
    rng = np.random.default_rng(args.seed)
    max_rel = 0.0
    ratios = []
    h = 1e-3
    for _ in range(args.samples):
        lam = KillingParams(*(rng.standard_normal(4) + 1j * rng.standard_normal(4)))
        p = SlicePoint(
            r=0.5 + 2.5 * rng.random(),
            theta=0.3 + 2.5 * rng.random(),
            psi=0.3 + 2.5 * rng.random(),
            phi=2 * math.pi * rng.random(),
        )
        d = int(rng.integers(1, 5))
        r1 = killing_spinor_residual(lam, p, d, h, k)
        r2 = killing_spinor_residual(lam, p, d, h / 2, k)
        norm = np.linalg.norm(killing_spinor(lam, p, k))
        max_rel = max(max_rel, r1 / norm)
        if r2 > 1e-13:
            ratios.append(r1 / r2)
    ratios = np.asarray(ratios)
    passed = bool(max_rel < 1e-5 and np.all((ratios > 3.5) & (ratios < 4.5)))
    _say(args, f"samples: {args.samples}")
    _say(args, f"max residual / |Phi0|: {max_rel:.3e}")
    if len(ratios):
        _say(args, f"convergence ratios: min {ratios.min():.3f} "
                   f"max {ratios.max():.3f} (target 4)")
    _say(args, "PASS" if passed else "FAIL")
    report = {
        "config": _resolved_config(args),
        "max_relative_residual": max_rel,
        "ratio_min": float(ratios.min()) if len(ratios) else None,
        "ratio_max": float(ratios.max()) if len(ratios) else None,
        "passed": passed,
    }
    _emit(report, args)
    return EXIT_OK if passed else EXIT_FAILED


def _cmd_verify_killing(args):
    k = ModelConstants(args.kappa)
    rng = np.random.default_rng(args.seed)
    if args.label:
        a, b = (int(x) for x in args.label.split(","))
        labels = [normalize_label((a, b))[0]]
    else:
        labels = list(ALL_LABELS)
    h = 1e-3
    passed = True
    rows = []
    for lab in labels:
        worst = 0.0
        worst_ratio = None
        for _ in range(max(1, args.samples // len(labels))):
            x = np.array(
                [
                    rng.standard_normal(),
                    0.8 + 2.0 * rng.random(),
                    0.3 + 2.5 * rng.random(),
                    0.3 + 2.5 * rng.random(),
                    2 * math.pi * rng.random(),
                ]
            )
            r1 = killing_residual(lab, x, h, k)
            worst = max(worst, r1)
            if r1 < 1e-10:
                ok = True  # symmetry direction, exact up to roundoff
            else:
                ratio = r1 / killing_residual(lab, x, h / 2, k)
                ok = 3.5 < ratio < 4.5
                worst_ratio = ratio
            passed = passed and ok
        rows.append({"label": list(lab), "max_residual": worst,
                     "ratio": worst_ratio})
        _say(args, f"U_{lab[0]}{lab[1]}: max residual {worst:.3e}"
                   + (f", ratio {worst_ratio:.2f}" if worst_ratio else " (exact)"))
    _say(args, "PASS" if passed else "FAIL")
    report = {"config": _resolved_config(args), "fields": rows, "passed": passed}
    _emit(report, args)
    return EXIT_OK if passed else EXIT_FAILED


def _charges_report(cs: ChargeSet, args, q: QuadratureSpec):
    rep = {
        "config": _resolved_config(args, {"radii_resolved": list(q.radii)}),
        "charges": cs.as_dict(),
    }
    return rep


def _cmd_charges(args):
    model = _load_model(args)
    q = _quadrature(args)
    cs = compute_charges(model, q)
    for name, val in zip(CHARGE_NAMES, cs.values()):
        diag = cs.diagnostics.get(name)
        note = " DIVERGED" if diag and diag.diverged else ""
        _say(args, f"{name:>4}: {val: .12e}{note}")
    _emit(_charges_report(cs, args, q), args)
    return EXIT_DIVERGED if cs.any_diverged else EXIT_OK


def _charge_set_from_report(path) -> ChargeSet:
    with open(path) as fh:
        data = json.load(fh)
    ch = data["charges"] if "charges" in data else data
    j = np.array([ch["j"][key] for key in ("12", "13", "14", "23", "24", "34")])
    return ChargeSet(e0=float(ch["e0"]), c=np.asarray(ch["c"]),
                     cp=np.asarray(ch["cp"]), j=j)


def _qreport(cs: ChargeSet, variant: str) -> dict:
    qmat = assemble_q(cs)
    psd = psd_check(qmat)
    bounds = theorem_bounds(cs, variant)
    rigid = rigidity_check(cs)
    return {
        "q": [[[float(z.real), float(z.imag)] for z in row] for row in qmat],
        "eigenvalues": [float(v) for v in psd.eigenvalues],
        "psd": psd.psd,
        "min_eigenvalue": psd.min_eigenvalue,
        "bounds": bounds.as_dict(),
        "verdict": bounds.satisfied,
        "rigidity": rigid.as_dict(),
    }


def _cmd_qmatrix(args):
    cs = _charge_set_from_report(args.charges)
    rep = _qreport(cs, args.variant)
    _say(args, f"PSD: {rep['psd']} (min eigenvalue {rep['min_eigenvalue']:.3e})")
    b = rep["bounds"]
    _say(args, "bounds:", " ".join(f"B{i}={b[f'b{i}']:.6e}" for i in range(1, 6)))
    _say(args, f"E0 = {b['e0']:.6e}, verdict: "
               + ("pass" if rep["verdict"] else "FAIL"))
    rep["config"] = _resolved_config(args)
    _emit(rep, args)
    return EXIT_OK if rep["verdict"] else EXIT_FAILED


def _cmd_bound(args):
    model = _load_model(args)
    q = _quadrature(args)
    cs = compute_charges(model, q)
    rep = _charges_report(cs, args, q)
    rep.update(_qreport(cs, args.variant))
    _say(args, f"E0 = {cs.e0:.6e}")
    b = rep["bounds"]
    _say(args, "bounds:", " ".join(f"B{i}={b[f'b{i}']:.6e}" for i in range(1, 6)))
    _say(args, "verdict: " + ("pass" if rep["verdict"] else "FAIL"))
    _emit(rep, args)
    if cs.any_diverged:
        return EXIT_DIVERGED
    return EXIT_OK if rep["verdict"] else EXIT_FAILED


def _cmd_identity(args):
    model = _load_model(args)
    q = _quadrature(args)
    vals = [float(x) for x in args.lam.split(",")]
    if len(vals) != 8:
        print("error: --lambda needs 8 comma-separated values", file=sys.stderr)
        return EXIT_USAGE
    lam = KillingParams(*(complex(vals[2 * i], vals[2 * i + 1]) for i in range(4)))
    rep = boundary_identity(model, lam, q, args.mode)
    _say(args, f"lhs = {rep.lhs:.10e}")
    _say(args, f"rhs = {rep.rhs:.10e}")
    _say(args, f"relative gap = {rep.gap:.3e}")
    out = rep.as_dict()
    out["config"] = _resolved_config(args)
    _emit(out, args)
    if rep.diverged:
        return EXIT_DIVERGED
    return EXIT_OK if rep.gap < 1e-5 else EXIT_FAILED


def _cmd_sample_psd(args):
    e0, c, cp, j, delta = sample_momenta(args.seed, args.n)
    worst = math.inf
    failures = 0
    boundary_max_q = 0.0
    min_clamped = math.inf
    for i in range(args.n):
        cs = ChargeSet(e0=float(e0[i]), c=c[i], cp=cp[i], j=j[i])
        b = theorem_bounds(cs, args.variant)
        worst = min(worst, b.margin)
        if b.margin < -1e-9:
            failures += 1
        d = derived(cs)
        min_clamped = min(min_clamped, d.a_total - 2 * math.sqrt(2) * b.w)
        if delta[i] == 0.0 and e0[i] < 1e-12:
            boundary_max_q = max(boundary_max_q,
                                 float(np.linalg.norm(assemble_q(cs))))
    passed = failures == 0
    _say(args, f"{args.n - failures}/{args.n} bound checks pass "
               f"(variant {args.variant})")
    _say(args, f"worst margin: {worst:.3e}")
    _say(args, f"empirical min of A - 2 sqrt(2) W: {min_clamped:.6e}")
    report = {
        "config": _resolved_config(args),
        "n": args.n,
        "failures": failures,
        "worst_margin": worst,
        "min_a_minus_2sqrt2_w": min_clamped,
        "boundary_zero_energy_max_qnorm": boundary_max_q,
        "passed": passed,
    }
    _emit(report, args)
    return EXIT_OK if passed else EXIT_FAILED


def _cmd_decay(args):
    model = _load_model(args)
    q = _quadrature(args)
    rep = decay_validate(model, q.radii, args.ntheta, args.npsi, args.nphi)
    _say(args, f"tau = {rep.tau}, sigma_a = {rep.sigma_a}, "
               f"sigma_grad_a = {rep.sigma_grad_a}, sigma_h = {rep.sigma_h}")
    _say(args, "PASS" if rep.passed else "FAIL")
    out = rep.as_dict()
    out["config"] = _resolved_config(args)
    _emit(out, args)
    return EXIT_OK if rep.passed else EXIT_FAILED


_COMMANDS = {
    "charges": _cmd_charges,
    "qmatrix": _cmd_qmatrix,
    "bound": _cmd_bound,
    "identity": _cmd_identity,
    "sample-psd": _cmd_sample_psd,
    "decay": _cmd_decay,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        if args.command == "verify":
            handler = {
                "clifford": _cmd_verify_clifford,
                "spinors": _cmd_verify_spinors,
                "killing": _cmd_verify_killing,
            }[args.what]
            return handler(args)
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
