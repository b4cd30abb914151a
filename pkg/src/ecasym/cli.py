"""Command-line entry point: ``ecasym <subcommand> ...``.

Exit codes: 0 success, 1 verification mismatch, 2 usage or domain error,
3 runtime or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from pathlib import Path

from . import __version__
from . import continuum, evolution, rule22, statistics
from .rule_algebra import DomainError, census, classify

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3
DEFAULT_SEED = statistics.DEFAULT_SEED


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ output


def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def json_text(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def provenance(args, trials=None, **params) -> dict:
    out = {"version": __version__, "seed": args.seed}
    if trials is not None:
        out["trials"] = trials
    out.update(params)
    return out


def emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands


def cmd_rule(args) -> int:
    if args.action == "info":
        if args.code is None:
            raise UsageError("rule info needs a rule code")
        spec = classify(args.code)
        if args.json:
            emit(args, json_text(spec.as_dict()))
            return EXIT_OK
        lines = [
            f"rule {spec.code} = {spec.code:08b}b",
            "truth table (abc -> out): "
            + " ".join(f"{k:03b}->{spec.truth_table[k]}" for k in range(7, -1, -1)),
            f"ANF: {spec.anf_string}",
        ]
        for flag in ("s3_symmetric", "left_permutive", "right_permutive", "center_permutive", "linear"):
            lines.append(f"{flag}: {str(getattr(spec, flag)).lower()}")
        emit(args, "\n".join(lines) + "\n")
        return EXIT_OK

    c = census()
    if args.json:
        emit(args, json_text({"rules": [r.as_dict() for r in c.rules], "summary": c.summary()}))
        return EXIT_OK
    header = ["code", "anf", "s3_symmetric", "left_permutive", "right_permutive", "center_permutive", "linear"]
    rows = [[r.code, r.anf_string, int(r.s3_symmetric), int(r.left_permutive), int(r.right_permutive),
             int(r.center_permutive), int(r.linear)] for r in c.rules]
    if args.csv:
        emit(args, csv_text(header, rows))
        return EXIT_OK
    lines = [f"{'code':>4}  {'anf':<22} S3 L R C lin"]
    for r in c.rules:
        lines.append(f"{r.code:>4}  {r.anf_string:<22} {int(r.s3_symmetric)}  {int(r.left_permutive)} "
                     f"{int(r.right_permutive)} {int(r.center_permutive)} {int(r.linear)}")
    s = c.summary()
    lines.append("")
    lines.append(f"s3_symmetric: {s['s3_symmetric']}  s3_symmetric_nonlinear: {s['s3_symmetric_nonlinear']} "
                 f"{s['symmetric_nonlinear_codes']}")
    lines.append(f"linear/affine: {s['linear']}  left_permutive: {s['left_permutive']}  "
                 f"right_permutive: {s['right_permutive']}  center_permutive: {s['center_permutive']}")
    emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_evolve(args) -> int:
    rows = evolution.evolve_single_seed(args.code, args.steps)
    if args.pbm:
        evolution.render_pbm(rows, args.pbm)
    if args.json:
        emit(args, json_text({"code": args.code, "steps": args.steps,
                              "rows": [{"m": r.generation, "positions": r.positions()} for r in rows]}))
    elif args.csv:
        emit(args, csv_text(["m", "position"], ((r.generation, p) for r in rows for p in r.positions())))
    elif not args.pbm:
        lo, hi = -args.steps, args.steps + 1
        emit(args, "".join("".join("#" if c else "." for c in r.window(lo, hi)) + "\n" for r in rows))
    return EXIT_OK


def cmd_support(args) -> int:
    view = evolution.RIGHT_HALF if args.view == "right" else evolution.FULL_ROW
    data = [(r.generation, evolution.support(r, view).positions)
            for r in evolution.iter_single_seed(args.code, args.steps)]
    if args.json:
        emit(args, json_text({"code": args.code, "view": args.view,
                              "rows": [{"m": m, "cardinality": len(p), "positions": list(p)} for m, p in data]}))
    elif args.csv:
        emit(args, csv_text(["m", "cardinality", "positions"], ((m, len(p), " ".join(map(str, p))) for m, p in data)))
    else:
        emit(args, "".join(f"m={m} |S|={len(p)} {{{', '.join(map(str, p))}}}\n" for m, p in data))
    return EXIT_OK


def cmd_card22(args) -> int:
    total = rule22.cardinality22(args.m)
    payload = {"m": args.m, "total": total}
    if args.both:
        payload["right_half"] = rule22.right_half_count22(args.m)
    if args.json:
        emit(args, json_text(payload))
    elif args.csv:
        emit(args, csv_text(list(payload), [list(payload.values())]))
    else:
        emit(args, " ".join(f"{k}={v}" for k, v in payload.items() if k != "m") + "\n")
    return EXIT_OK


def cmd_support22(args) -> int:
    s = rule22.support22(args.m)
    if args.json:
        emit(args, json_text({"m": args.m, "view": "right", "cardinality": len(s), "positions": list(s)}))
    else:
        emit(args, " ".join(map(str, s)) + "\n")
    return EXIT_OK


def cmd_poly22(args) -> int:
    if args.mersenne is not None:
        p, key = rule22.mersenne_poly(args.mersenne), {"mersenne": args.mersenne}
    else:
        p, key = rule22.poly22(args.m), {"m": args.m}
    if args.json:
        emit(args, json_text({**key, "degree": p.degree, "exponents": list(p.exponents), "text": str(p)}))
    else:
        emit(args, str(p) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    report = rule22.verify_closed_forms(args.max_m)
    if args.json:
        emit(args, json_text({"version": __version__, **report.as_dict()}))
    else:
        d = report.as_dict()
        emit(args, f"verified 1..{args.max_m}: {'ok' if report.ok else 'MISMATCH'}\n"
                   f"cardinality mismatches: {d['cardinality_mismatches']}\n"
                   f"support mismatches: {d['support_mismatches']}\n"
                   f"degree mismatches: {d['degree_mismatches']}\n")
    return EXIT_OK if report.ok else EXIT_MISMATCH


def _deviation_payload(max_m: int, view: str):
    points = statistics.deviation(max_m, view)
    c30 = statistics.active_counts(30, max_m, view)
    rows = [(m, c30[m - 1] - e, c30[m - 1], e) for m, e in points]
    return points, rows


def _fit_dict(fit, max_m, view) -> dict:
    return {"version": __version__, "max_m": max_m, "view": view, "slope": fit.slope,
            "intercept": fit.intercept, "r_squared": fit.r_squared, "n_points": fit.n_points,
            "excluded_m": list(fit.excluded), "filter_note": fit.filter_note}


def cmd_deviate(args) -> int:
    points, rows = _deviation_payload(args.max_m, args.view)
    fit = statistics.fit_power_law(points) if args.fit else None
    if args.json:
        payload = {"version": __version__, "max_m": args.max_m, "view": args.view,
                   "points": [{"m": m, "count22": a, "count30": b, "epsilon": e} for m, a, b, e in rows]}
        if fit:
            payload["fit"] = _fit_dict(fit, args.max_m, args.view)
        emit(args, json_text(payload))
    elif args.csv or not fit:
        emit(args, csv_text(["m", "count22", "count30", "epsilon"], rows))
    else:
        emit(args, f"b = {fit.slope:.6f}  intercept = {fit.intercept:.6f}  r^2 = {fit.r_squared:.4f}  "
                   f"n = {fit.n_points} ({fit.filter_note})\n")
    return EXIT_OK


def _stochastic_note(args) -> None:
    print(f"# seed: {args.seed}", file=sys.stderr)


def cmd_sensitivity(args) -> int:
    _stochastic_note(args)
    p = statistics.sensitivity_profile(args.code, args.t, args.trials, args.seed,
                                       exhaustive=args.exhaustive, threads=args.threads)
    if args.json:
        emit(args, json_text({**provenance(args, p.trials, rule=p.rule_code, t=p.t, exhaustive=p.exhaustive),
                              "offsets": list(p.offsets), "estimates": list(p.estimates),
                              "sigma_left": p.sigma_left, "sigma_right": p.sigma_right, "ratio": p.ratio}))
    else:
        emit(args, csv_text(["offset", "estimate"], zip(p.offsets, p.estimates)))
    return EXIT_OK


def cmd_equidist(args) -> int:
    _stochastic_note(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        r = statistics.equidistribution_test(args.code, args.t, args.trials, args.seed,
                                             exhaustive=args.exhaustive, threads=args.threads)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    payload = {**provenance(args, r.trials, rule=r.rule_code, t=r.t, exhaustive=r.exhaustive),
               "ones": r.ones, "p_hat": r.p_hat, "z_score": r.z_score,
               "left_permutive": classify(args.code).left_permutive}
    if args.json:
        emit(args, json_text(payload))
    elif args.csv:
        emit(args, csv_text(["t", "trials", "p_hat", "z_score"], [[r.t, r.trials, r.p_hat, r.z_score]]))
    else:
        emit(args, f"p_hat = {r.p_hat:.6f}  z = {r.z_score:.3f}  ({r.trials} windows)\n")
    return EXIT_OK


def cmd_mi(args) -> int:
    _stochastic_note(args)
    bits, joint = statistics.mutual_information_counts(args.code, args.t, args.trials, args.seed, args.threads)
    if args.json:
        emit(args, json_text({**provenance(args, args.trials, rule=args.code, t=args.t),
                              "mi_bits": bits, "joint_counts": joint.tolist()}))
    elif args.csv:
        emit(args, csv_text(["t", "trials", "mi_bits"], [[args.t, args.trials, bits]]))
    else:
        emit(args, f"I = {bits:.3e} bits\n")
    return EXIT_OK


def _entropy_rows(code: int, steps: int, max_n: int):
    rep = statistics.block_entropy(evolution.center_column(code, steps), max_n)
    return rep, [(e.n, e.H_n, e.H_n / e.n, e.p_n, e.p_n / 2 ** e.n) for e in rep.entries]


ENTROPY_HEADER = ["n", "H_n", "H_n_over_n", "p_n", "p_n_over_2n"]


def cmd_entropy(args) -> int:
    rep, rows = _entropy_rows(args.code, args.steps, args.max_n)
    if args.json:
        emit(args, json_text({"version": __version__, "rule": args.code, "sequence_length": rep.sequence_length,
                              "entries": [dict(zip(ENTROPY_HEADER, r)) for r in rows]}))
    else:
        emit(args, csv_text(ENTROPY_HEADER, rows))
    return EXIT_OK


def cmd_ode(args) -> int:
    tr = continuum.ode_integrate(args.u0, args.m_end, args.dt)
    header = ["m", "u"]
    rows = []
    for m, u in zip(tr.m, tr.u):
        row = [float(m), float(u)]
        if args.closed_form:
            try:
                row.append(continuum.ode_closed_form(args.u0, float(m)))
            except (continuum.BlowUpError, DomainError):
                row.append(math.inf)
        rows.append(row)
    if args.closed_form:
        header.append("closed_form")
    if tr.blown_up:
        print(f"# blow-up at m = {tr.blown_up_at!r}", file=sys.stderr)
    emit(args, csv_text(header, rows[:: args.every] if args.every > 1 else rows))
    return EXIT_OK


def cmd_duffing(args) -> int:
    tr = continuum.duffing_integrate(args.u0, args.v0, args.m_end, args.dt)
    rows = zip(tr.m.tolist(), tr.u.tolist(), tr.v.tolist(), tr.energy.tolist())
    rows = list(rows)[:: max(args.every, 1)]
    emit(args, csv_text(["m", "u", "v", "energy"], rows))
    return EXIT_OK


def _parse_init(spec: str):
    kind, _, rest = spec.partition(":")
    try:
        if kind == "const":
            return kind, (float(rest),)
        if kind == "bump":
            a, w = rest.split(",")
            return kind, (float(a), float(w))
    except ValueError:
        pass
    raise UsageError(f"bad --init {spec!r}; expected const:U or bump:A,W")


def cmd_pde(args) -> int:
    kind, params = _parse_init(args.init)
    if kind == "const":
        grid = continuum.PdeGrid.constant(params[0], args.n, args.dx, args.dt, boundary=args.boundary)
    else:
        grid = continuum.PdeGrid.bump(params[0], params[1], args.n, args.dx, args.dt, boundary=args.boundary)
    try:
        final, snaps = continuum.pde_integrate(grid, args.m_end, enforce_stability=not args.allow_unstable,
                                               advect=args.advect, record_every=max(args.every, 1))
    except continuum.StabilityError as e:
        raise UsageError(str(e)) from e
    if final.blown_up_at is not None:
        print(f"# blow-up at m = {final.blown_up_at!r}", file=sys.stderr)
        if snaps[-1][0] != final.m:
            snaps.append((final.m, final.values))
    header = ["m"] + [f"x{i}" for i in range(args.n)]
    emit(args, csv_text(header, ([m, *v.tolist()] for m, v in snaps)))
    return EXIT_OK


def cmd_diag(args) -> int:
    report = evolution.diagonal_identity_scan(args.max_t)
    if args.json:
        emit(args, json_text({"version": __version__, "max_t": args.max_t, "conventions": report}))
    else:
        emit(args, csv_text(["rule", "side", "offset", "n", "matches", "fraction"],
                            ([r["rule"], r["side"], r["offset"], r["n"], r["matches"], r["fraction"]] for r in report)))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from .reproduce import reproduce

    if not args.out:
        raise UsageError("reproduce needs --out DIR")
    manifest = reproduce(args.out, seed=args.seed, threads=args.threads)
    print(f"wrote {len(manifest['files'])} files to {args.out}", file=sys.stderr)
    return EXIT_OK if manifest["verify_ok"] else EXIT_MISMATCH


# ------------------------------------------------------------------ parser


def _code(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= v <= 255:
        raise argparse.ArgumentTypeError(f"rule code must be in 0..255, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt_group = common.add_mutually_exclusive_group()
    fmt_group.add_argument("--json", action="store_true", help="emit JSON")
    fmt_group.add_argument("--csv", action="store_true", help="emit CSV")
    common.add_argument("--out", metavar="PATH", help="write output to PATH (a directory for reproduce)")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED,
                        help=f"64-bit master seed (default {DEFAULT_SEED:#x})")
    common.add_argument("--threads", type=int, default=1, help="worker threads for sampling")

    p = argparse.ArgumentParser(prog="ecasym", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"ecasym {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("rule", cmd_rule, help="rule info CODE | rule census")
    sp.add_argument("action", choices=["info", "census"])
    sp.add_argument("code", nargs="?", type=_code)

    sp = add("evolve", cmd_evolve, help="single-seed evolution")
    sp.add_argument("code", type=_code)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--pbm", metavar="FILE")

    sp = add("support", cmd_support, help="support sets per generation")
    sp.add_argument("code", type=_code)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--view", choices=["right", "full"], default="right")

    sp = add("card22", cmd_card22, help="Rule 22 closed-form cardinality")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--both", action="store_true", help="also print the right-half count")

    sp = add("support22", cmd_support22, help="Rule 22 support by recursion")
    sp.add_argument("--m", type=int, required=True)

    sp = add("poly22", cmd_poly22, help="Rule 22 generating polynomial")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--m", type=int)
    g.add_argument("--mersenne", type=int, metavar="N")

    sp = add("verify", cmd_verify, help="check closed forms against simulation")
    sp.add_argument("--max-m", type=int, default=64)

    sp = add("deviate", cmd_deviate, help="Rule 30 minus Rule 22 counts")
    sp.add_argument("--max-m", type=int, default=128)
    sp.add_argument("--fit", action="store_true")
    sp.add_argument("--view", choices=["total", "right"], default="total")

    sp = add("sensitivity", cmd_sensitivity, help="Monte Carlo sensitivity profile")
    sp.add_argument("code", type=_code)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--trials", type=int, default=5000)
    sp.add_argument("--exhaustive", action="store_true")

    sp = add("equidist", cmd_equidist, help="P(eta_t(0) = 1) test")
    sp.add_argument("code", type=_code)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--exhaustive", action="store_true")

    sp = add("mi", cmd_mi, help="mutual information of eta_t(-1) and (eta_t(0), eta_t(1))")
    sp.add_argument("code", type=_code)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--trials", type=int, default=100_000)

    sp = add("entropy", cmd_entropy, help="block entropy of the center column")
    sp.add_argument("code", type=_code)
    sp.add_argument("--steps", type=int, default=4096)
    sp.add_argument("--max-n", type=int, default=8)

    sp = add("ode", cmd_ode, help="integrate du/dm = 2u + u^3")
    sp.add_argument("--u0", type=float, required=True)
    sp.add_argument("--m-end", type=float, required=True)
    sp.add_argument("--dt", type=float, default=1e-4)
    sp.add_argument("--closed-form", action="store_true")
    sp.add_argument("--every", type=int, default=1, help="keep every k-th step")

    sp = add("duffing", cmd_duffing, help="integrate u'' + 2u + u^3 = 0")
    sp.add_argument("--u0", type=float, required=True)
    sp.add_argument("--v0", type=float, default=0.0)
    sp.add_argument("--m-end", type=float, default=10.0)
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--every", type=int, default=1)

    sp = add("pde", cmd_pde, help="integrate u_m = u_xx + 2u + u^3")
    sp.add_argument("--dx", type=float, required=True)
    sp.add_argument("--dt", type=float, required=True)
    sp.add_argument("--m-end", type=float, required=True)
    sp.add_argument("--init", required=True, metavar="const:U|bump:A,W")
    sp.add_argument("--n", type=int, default=101, help="grid points")
    sp.add_argument("--boundary", choices=["periodic", "zero"], default="periodic")
    sp.add_argument("--advect", action="store_true", help="add Rule 30 transport -3(u+1) u_x")
    sp.add_argument("--allow-unstable", action="store_true")
    sp.add_argument("--every", type=int, default=100, help="snapshot every k steps")

    sp = add("diag-identity", cmd_diag, help="scan readings of c(t) = [t in S_(t+1)]")
    sp.add_argument("--max-t", type=int, default=64)

    add("reproduce", cmd_reproduce, help="regenerate every figure/table dataset into --out DIR")
    return p


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.fn(args)
    except (DomainError, UsageError, continuum.StabilityError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, continuum.BlowUpError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
