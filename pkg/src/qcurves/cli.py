"""Command-line front end: ``qcurves <command> ...``.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import re
import sys
import time
from dataclasses import asdict, dataclass, replace
from typing import List, Optional

from . import counting, models
from .arith import decode_fp2, default_delta, is_probable_prime, legendre
from .curve import OpCounter, Point, scalar_mul
from .decomp import babai_round, build_basis, decompose
from .families import (
    FamilyCurve,
    InvalidOrderError,
    endo_params,
    kernel_points,
    order3_point,
    psi,
    verify_psi_square,
)
from .multiexp import mul_with_endo, straus
from .records import CurveSpec, RecordError, bundled, load_records

DEFAULT_SEED = 20110525
SLOW_BITS = 64


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


def parse_int(text: str) -> int:
    """Decimal, 0x-hex, or 2^k +- c."""
    t = text.replace(" ", "")
    m = re.fullmatch(r"(-?)2\^(\d+)(([+-]\d+)?)", t)
    if m:
        v = 2 ** int(m.group(2)) + int(m.group(3) or 0)
        return -v if m.group(1) else v
    try:
        return int(t, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


# ---- curve selection -------------------------------------------------------

def _add_curve_args(sp):
    g = sp.add_argument_group("curve")
    g.add_argument("--example", choices=["1", "2", "3"], help="bundled example curve")
    g.add_argument("--file", help="record file (first record unless --index)")
    g.add_argument("--index", type=int, default=0)
    g.add_argument("--p", type=parse_int)
    g.add_argument("--delta", type=parse_int, help="nonsquare defining F_p^2 (default: first of -1, 2, -2, 3, ...)")
    g.add_argument("--d", type=int, choices=[1, 2, 3], default=2)
    g.add_argument("--s", type=parse_int, default=0)
    g.add_argument("--a4", type=parse_int, help="degree 1 only")
    g.add_argument("--a6", type=parse_int, help="degree 1 only")
    g.add_argument("--twist", action="store_true", help="use the quadratic twist")
    g.add_argument("--order", type=parse_int, help="claimed group order")
    g.add_argument("--n", type=parse_int, help="claimed large prime factor of the order")


def curve_spec(args) -> CurveSpec:
    if args.example or args.file:
        specs = bundled(f"example{args.example}") if args.example else load_records(args.file)
        base = [s for s in specs if s.twisted == args.twist] if args.example else specs
        if not base or args.index >= len(base):
            raise UsageError("no such record")
        spec = base[args.index]
        over = {k: getattr(args, k) for k in ("order", "n") if getattr(args, k) is not None}
        return replace(spec, **over) if over else spec
    if args.p is None:
        raise UsageError("give --example, --file or --p")
    delta = args.delta
    if delta is None:
        delta = default_delta(args.p) if args.p > 3 and is_probable_prime(args.p) else -1
    return CurveSpec(args.p, delta, args.d, args.s, args.twist, "", args.a4, args.a6, args.order, args.n)


def _family_with_params(spec: CurveSpec, rng) -> FamilyCurve:
    F = spec.build()
    if spec.order is None or spec.n is None:
        raise UsageError("this command needs a certificate (--order and --n, or a record that has them)")
    return F.with_params(endo_params(F, spec.order, spec.n, rng))


# ---- output ----------------------------------------------------------------

class Reporter:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.checks = []
        self.data = {}

    def check(self, name: str, ok: bool, detail: str = ""):
        self.checks.append({"check": name, "ok": bool(ok), "detail": detail})
        if not self.as_json:
            print(f"  {'ok  ' if ok else 'FAIL'}  {name}{'  ' + detail if detail else ''}")
        return ok

    def info(self, key, value):
        self.data[key] = value
        if not self.as_json:
            print(f"{key}: {value}")

    def finish(self) -> int:
        ok = all(c["ok"] for c in self.checks)
        if self.as_json:
            out = dict(self.data)
            if self.checks:
                out["checks"] = self.checks
                out["ok"] = ok
            print(json.dumps(out, indent=2, default=str))
        return 0 if ok else 1


def _spec_fields(spec: CurveSpec) -> dict:
    return {"p": spec.p, "delta": spec.delta, "d": spec.d, "s": spec.s, "twisted": spec.twisted}


# ---- commands ----------------------------------------------------------------

def cmd_validate(args, rep: Reporter) -> int:
    spec = curve_spec(args)
    for k, v in _spec_fields(spec).items():
        rep.info(k, v)
    if not rep.check("p is prime", spec.p > 3 and is_probable_prime(spec.p), f"p = {spec.p}"):
        return rep.finish()
    if not rep.check("delta is a nonsquare mod p", legendre(spec.delta, spec.p) == -1, f"(delta/p) = {legendre(spec.delta, spec.p)}"):
        return rep.finish()
    try:
        F = spec.build()
    except ValueError as e:
        rep.check("curve is nonsingular", False, str(e))
        return rep.finish()
    rep.check("curve is nonsingular", bool(F.curve.discriminant()))
    rep.info("eps_p", F.eps_p)
    if F.d > 1:
        rep.check("sqrt(-d) in F_p^2", F.sqrt_md is not None and F.sqrt_md * F.sqrt_md == -F.d)
    rng = random.Random(args.seed)
    pts = [F.random_point(rng) for _ in range(args.points)]
    rep.check(f"psi^2 = [{F.eps * F.d}] on {len(pts)} points", all(verify_psi_square(F, P) for P in pts))
    cert = spec.certificate()
    if cert is not None:
        rep.check("N passes 64-round Miller-Rabin", is_probable_prime(cert.N, 64))
        try:
            P = endo_params(F, cert.order, cert.N, rng)
        except (InvalidOrderError, ValueError) as e:
            rep.check("order is consistent with the family", False, str(e))
            return rep.finish()
        cert = replace(cert, r=P.r, t=P.trace)
        rep.info("r", P.r)
        rep.info("t", P.trace)
        rep.info("lambda", P.lam)
        rep.check(f"certificate verified on {args.trials} points", counting.verify_certificate(F, cert, args.trials, rng))
    return rep.finish()


def _example1_rows(rep: Reporter, rng, trials: int, samples: int):
    for spec in bundled("example1"):
        tag = spec.label
        F = spec.build()
        cert = spec.certificate()
        rep.check(f"{tag}: N prime", is_probable_prime(cert.N, 64))
        P = endo_params(F, cert.order, cert.N, rng)
        F = F.with_params(P)
        cert = replace(cert, r=P.r, t=P.trace)
        rep.check(f"{tag}: d r^2 = 2p + eps t", F.d * P.r ** 2 == 2 * F.p + F.eps * P.trace, f"r = {P.r}")
        rep.check(f"{tag}: order {cert.cofactor}N verified", counting.verify_certificate(F, cert, trials, rng))
        B = build_basis(F)
        ok = True
        for _ in range(samples):
            m = rng.randrange(cert.N)
            a, b = decompose(m, B)
            ok &= (a + b * B.lam - m) % cert.N == 0 and max(abs(a), abs(b)) <= F.p + 1
            ok &= (a, b) == babai_round(m, B.e1, B.e2)
        rep.check(f"{tag}: {samples} decompositions within p + 1", ok)
        Q = scalar_mul(F.random_point(rng), cert.cofactor)
        ok = True
        for _ in range(max(1, samples // 50)):
            m = rng.randrange(cert.N)
            ok &= mul_with_endo(F, Q, m) == scalar_mul(Q, m)
        ok &= straus(Q, psi(F, Q), 3, -5) == scalar_mul(Q, 3) - scalar_mul(psi(F, Q), 5)
        rep.check(f"{tag}: endomorphism multiplication matches double-and-add", ok)


def _relation_rows(rep: Reporter, name: str, rng, points: int):
    for spec in bundled(name):
        F = spec.build()
        ok = all(verify_psi_square(F, F.random_point(rng)) for _ in range(points))
        rep.check(f"{spec.label}: psi^2 = [{F.eps * F.d}] on {points} points", ok)
        if not spec.twisted:
            K = order3_point(F)
            ok = K.x is not None and (K * 3).x is None and psi(F, K).x is None
            rep.check(f"{spec.label}: kernel point (3, 4 - C) of order 3", ok)
        else:
            rep.check(f"{spec.label}: no rational kernel point", not kernel_points(F))


def _tiny_rows(rep: Reporter, rng):
    from .arith import FieldCtx
    from .families import build_family

    ctx = FieldCtx(11, default_delta(11))
    ok = True
    for d in (2, 3):
        for s in range(11):
            for tw in (False, True):
                F = build_family(ctx, d, s, tw)
                cert = counting.exhaustive_count(F)
                ok &= counting.bsgs_recover_r(F, rng=rng) == cert.r
                if cert.N > 3 and cert.order % (cert.N * cert.N) and math.gcd(cert.r, cert.N) == 1:
                    ok &= counting.verify_certificate(F, cert, 8, rng)
    rep.check("p=11: exhaustive count, bsgs and certificates agree", ok)
    c2, c3 = counting.j_census(ctx, 2), counting.j_census(ctx, 3)
    rep.check("p=11: j census", c2.distinct >= 8 and c3.distinct >= 3 and c2.closed_form_ok and c3.closed_form_ok,
              f"d=2: {c2.distinct}, d=3: {c3.distinct}")


def cmd_repro(args, rep: Reporter) -> int:
    rng = random.Random(args.seed)
    if not rep.as_json:
        print("example 1")
    _example1_rows(rep, rng, args.trials, args.samples)
    for name in ("example2", "example3"):
        if not rep.as_json:
            print(name.replace("example", "example "))
        _relation_rows(rep, name, rng, args.points)
    if not rep.as_json:
        print("tiny p")
    _tiny_rows(rep, rng)
    return rep.finish()


def cmd_decompose(args, rep: Reporter) -> int:
    spec = curve_spec(args)
    F = _family_with_params(spec, random.Random(args.seed))
    B = build_basis(F)
    a, b = decompose(args.m, B)
    for k, v in (("m", args.m % B.N), ("a", a), ("b", b), ("lambda", B.lam), ("n", B.N)):
        rep.info(k, v)
    if not rep.as_json:
        print(f"hex: m={args.m % B.N:#x} a={a:#x} b={b:#x}")
    rep.info("a_bits", abs(a).bit_length())
    rep.info("b_bits", abs(b).bit_length())
    rep.check("a + b*lambda = m mod N", (a + b * B.lam - args.m) % B.N == 0)
    rep.check("max(|a|, |b|) <= p + 1", max(abs(a), abs(b)) <= F.p + 1)
    return rep.finish()


def _subgroup_point(F: FamilyCurve, args, rng) -> Point:
    if args.point:
        x, y = args.point.split(",")
        return Point(F.curve, decode_fp2(x, F.ctx), decode_fp2(y, F.ctx))
    return scalar_mul(F.random_point(rng), F.params.cofactor)


def cmd_mul(args, rep: Reporter) -> int:
    spec = curve_spec(args)
    rng = random.Random(args.seed)
    F = _family_with_params(spec, rng)
    P = _subgroup_point(F, args, rng)
    c = OpCounter()
    if args.strategy == "endo":
        R = mul_with_endo(F, P, args.m, c)
    else:
        R = scalar_mul(P, args.m % F.params.N, c)
    rep.info("P", str(P))
    rep.info("result", str(R))
    if args.count_ops:
        rep.info("doublings", c.doublings)
        rep.info("additions", c.additions)
        rep.info("psi_evals", c.psi_evals)
    return rep.finish()


def cmd_models(args, rep: Reporter) -> int:
    spec = curve_spec(args)
    F = spec.build()
    for k, v in _spec_fields(spec).items():
        rep.info(k, v)
    if F.twisted or F.d == 1:
        raise UsageError("models are listed for the untwisted degree-2 or degree-3 curve")
    rep.info("weierstrass", {"a4": str(F.curve.a4), "a6": str(F.curve.a6)})
    if F.d == 2:
        conv = models.to_montgomery(F)
        if conv is None:
            rep.info("montgomery", "none (2C is not a square)")
        else:
            M = conv.target
            rep.info("montgomery", {"A": str(M.A), "B": str(M.B)})
            T = models.to_twisted_edwards(M).target
            rep.info("twisted_edwards", {"a": str(T.a), "d": str(T.d_coeff)})
    dik = models.to_dik(F)
    if dik is None:
        rep.info("dik", "none (scaling root not in F_p^2)")
    else:
        key = "D" if F.d == 2 else "a3"
        rep.info("dik", {"variant": dik.target.variant, key: str(dik.target.coeff)})
    return rep.finish()


def _cert_fields(spec: CurveSpec, cert) -> dict:
    out = _spec_fields(spec)
    out.update(order=cert.order, n=cert.N, h=cert.cofactor, r=cert.r, t=cert.t)
    return out


def cmd_count(args, rep: Reporter) -> int:
    spec = curve_spec(args)
    F = spec.build()
    if args.method == "exhaustive":
        if spec.p > counting.MAX_EXHAUSTIVE_P:
            raise UsageError(f"exhaustive counting needs p <= {counting.MAX_EXHAUSTIVE_P}")
        cert = counting.exhaustive_count(F)
    else:
        if spec.p.bit_length() > SLOW_BITS and not args.slow:
            raise UsageError(f"bsgs above {SLOW_BITS}-bit p needs --slow")
        r = counting.bsgs_recover_r(F, rng=random.Random(args.seed))
        cert = counting.certificate_from_r(F, r)
    for k, v in _cert_fields(spec, cert).items():
        rep.info(k, v)
    rep.info("method", cert.method)
    return rep.finish()


def cmd_recover_r(args, rep: Reporter) -> int:
    spec = curve_spec(args)
    if spec.p.bit_length() > SLOW_BITS and not args.slow:
        raise UsageError(f"p has {spec.p.bit_length()} bits; BSGS needs about 2^{spec.p.bit_length() // 2} steps, pass --slow")
    F = spec.build()
    t0 = time.perf_counter()
    r = counting.bsgs_recover_r(F, rng=random.Random(args.seed))
    rep.info("r", r)
    cert = counting.certificate_from_r(F, r, N=spec.n)
    rep.info("t", cert.t)
    rep.info("order", cert.order)
    rep.info("seconds", round(time.perf_counter() - t0, 3))
    if spec.order is not None:
        rep.check("order matches the record", cert.order == spec.order)
    return rep.finish()


def cmd_verify_cert(args, rep: Reporter) -> int:
    try:
        specs = load_records(args.file)
    except OSError as e:
        raise UsageError(str(e))
    rng = random.Random(args.seed)
    for spec in specs:
        cert = spec.certificate()
        label = spec.label or f"p={spec.p:#x} s={spec.s:#x}"
        if cert is None:
            rep.check(f"{label}: has a certificate", False)
            continue
        F = spec.build()
        if cert.r is None:
            try:
                P = endo_params(F, cert.order, cert.N, rng)
            except (InvalidOrderError, ValueError) as e:
                rep.check(f"{label}: certificate", False, str(e))
                continue
            cert = replace(cert, r=P.r, t=P.trace)
        rep.check(f"{label}: N prime", is_probable_prime(cert.N, 64))
        rep.check(f"{label}: certificate on {args.trials} points", counting.verify_certificate(F, cert, args.trials, rng))
    return rep.finish()


@dataclass
class BenchReport:
    strategy: str
    doublings: int
    additions: int
    psi_evals: int
    wall_ns: int
    iterations: int


def bench(F: FamilyCurve, trials: int, rng) -> List[BenchReport]:
    P = scalar_mul(F.random_point(rng), F.params.cofactor)
    scalars = [rng.randrange(F.params.N) for _ in range(trials)]
    out = []
    for name in ("baseline", "endo"):
        c = OpCounter()
        t0 = time.perf_counter_ns()
        for m in scalars:
            if name == "endo":
                mul_with_endo(F, P, m, c, check=False)
            else:
                scalar_mul(P, m, c)
        out.append(BenchReport(name, c.doublings, c.additions, c.psi_evals, time.perf_counter_ns() - t0, trials))
    return out


def cmd_bench(args, rep: Reporter) -> int:
    spec = curve_spec(args)
    rng = random.Random(args.seed)
    F = _family_with_params(spec, rng)
    reports = bench(F, args.trials, rng)
    if not rep.as_json:
        print(f"{'strategy':<10}{'doublings':>12}{'additions':>12}{'psi':>6}{'ms':>10}")
        for b in reports:
            print(f"{b.strategy:<10}{b.doublings:>12}{b.additions:>12}{b.psi_evals:>6}{b.wall_ns / 1e6:>10.1f}")
    rep.data["reports"] = [asdict(b) for b in reports]
    ratio = reports[1].doublings / max(1, reports[0].doublings)
    rep.info("doubling_ratio", round(ratio, 4))
    bound = (F.p - 1).bit_length() * args.trials
    rep.check("endo doublings <= ceil(log2 p) per multiplication", reports[1].doublings <= bound)
    return rep.finish()


# ---- entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcurves", description="Endomorphism-accelerated curves over F_p^2.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", parents=[common], help="check curve parameters and an optional certificate")
    _add_curve_args(sp)
    sp.add_argument("--points", type=int, default=20)
    sp.add_argument("--trials", type=int, default=20)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("repro", parents=[common], help="rerun the bundled example checks")
    sp.add_argument("--points", type=int, default=1000, help="relation checks per curve")
    sp.add_argument("--trials", type=int, default=100, help="certificate trials")
    sp.add_argument("--samples", type=int, default=1000, help="decompositions per curve")
    sp.set_defaults(func=cmd_repro)

    sp = sub.add_parser("decompose", parents=[common], help="split m as a + b*lambda")
    _add_curve_args(sp)
    sp.add_argument("--m", type=parse_int, required=True)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("mul", parents=[common], help="scalar multiplication in the order-N subgroup")
    _add_curve_args(sp)
    sp.add_argument("--m", type=parse_int, required=True)
    sp.add_argument("--point", help="x,y in record encoding; default is a random subgroup point")
    sp.add_argument("--strategy", choices=["baseline", "endo"], default="endo")
    sp.add_argument("--count-ops", action="store_true")
    sp.set_defaults(func=cmd_mul)

    sp = sub.add_parser("models", parents=[common], help="list Montgomery, Edwards and DIK models")
    _add_curve_args(sp)
    sp.set_defaults(func=cmd_models)

    sp = sub.add_parser("count", parents=[common], help="group order by exhaustive count or bsgs")
    _add_curve_args(sp)
    sp.add_argument("--method", choices=["exhaustive", "bsgs"], default="exhaustive")
    sp.add_argument("--slow", action="store_true")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("verify-cert", parents=[common], help="verify the certificates in a record file")
    sp.add_argument("--file", required=True)
    sp.add_argument("--trials", type=int, default=20)
    sp.set_defaults(func=cmd_verify_cert)

    sp = sub.add_parser("bench", parents=[common], help="baseline vs endomorphism multiplication")
    _add_curve_args(sp)
    sp.add_argument("--trials", type=int, default=100)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("recover-r", parents=[common], help="recover r by baby-step giant-step")
    _add_curve_args(sp)
    sp.add_argument("--slow", action="store_true", help=f"allow p above {SLOW_BITS} bits")
    sp.set_defaults(func=cmd_recover_r)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    rep = Reporter(getattr(args, "json", False))
    try:
        return args.func(args, rep)
    except (UsageError, RecordError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (InvalidOrderError, CheckFailed) as e:
        rep.check("run", False, str(e))
        return rep.finish()
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
