"""Command line entry point: ``run`` scenario sweeps, ``verify`` acceptance checks, ``fit`` power laws."""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

from . import channel, closedform
from .config import METHODS, SchemaError, ScenarioFile, load
from .errors import ConfigurationError, DomainError, NumericalError
from .signal import SignalCoefficients, compute_c2_d2, compute_single_detector

EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_NUMERIC = 0, 1, 2, 3
_NAN = float("nan")


def fmt(x) -> str:
    """17 significant digits, so values round-trip exactly."""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def _cplx(prefix: str, z: complex) -> Dict[str, float]:
    return {f"{prefix}_re": z.real, f"{prefix}_im": z.imag}


def _model_error(sf: ScenarioFile, params, value: float) -> float:
    # finite decay time on the hyperbola biases quadrature by about 1/(a sigma)
    if sf.case in (closedform.ClosedFormCase.ACCEL_3P1, closedform.ClosedFormCase.ACCEL_1P1_LIMIT):
        return 10.0 * abs(value) / (params.a * closedform.horizon_sigma(params))
    return 0.0


def evaluate_point(sf: ScenarioFile, point: Dict[str, float]) -> Dict[str, object]:
    """One CSV row: sweep values, coefficients and the requested channel quantities."""
    row: Dict[str, object] = dict(point)
    scenario, params = sf.build(point)
    quad: Optional[SignalCoefficients] = None
    cf: Optional[SignalCoefficients] = None
    strength_only = sf.case is not None and closedform.is_strength_only(sf.case)
    try:
        if sf.method in ("quadrature", "both"):
            quad = compute_c2_d2(scenario, sf.quadrature)
            row.update(_cplx("c2", quad.c2))
            row.update(_cplx("d2", quad.d2))
            row["strength"] = quad.strength
            row["strength_err"] = quad.strength_err
        if sf.method in ("closed_form", "both"):
            cf = closedform.closed_form(sf.case, params)
            cf_strength = abs(cf.c2) if strength_only else cf.strength
            row.update(_cplx("cf_c2", complex(_NAN, _NAN) if strength_only else cf.c2))
            row.update(_cplx("cf_d2", complex(_NAN, _NAN) if strength_only else cf.d2))
            row["cf_strength"] = cf_strength
        if quad is not None and cf is not None:
            if strength_only:
                gap = abs(quad.strength - cf_strength)
            else:
                gap = max(abs(quad.c2 - cf.c2), abs(quad.d2 - cf.d2))
            row["discrepancy"] = gap
            row["discrepancy_tol"] = quad.strength_err + 1e-12 * cf_strength + _model_error(sf, params, cf_strength)
        coeffs = quad if quad is not None else cf
        if sf.output != "coefficients":
            row.update(_channel_columns(sf, scenario, coeffs, strength_only and quad is None))
        row["status"] = "ok"
    except NumericalError as exc:
        row["status"] = type(exc).__name__
    return row


def _channel_columns(sf: ScenarioFile, scenario, sc: SignalCoefficients, strength_only: bool) -> Dict[str, object]:
    opts = sf.values.get("channel", {})
    out: Dict[str, object] = {}
    if strength_only:
        pair = (abs(sc.c2), 0.0)
    else:
        pair = (sc.c2, sc.d2)
    if sf.output == "channel":
        kappa = float(opts.get("kappa", 1.0))
        if pair[0] == 0 and pair[1] == 0:
            out.update(phi_c=_NAN, phi_d=_NAN, alice_x=_NAN, alice_y=_NAN, trace_distance=0.0)
        else:
            cm = channel.leading_channel_matrix(pair, channel.DetectorState.ground_state())
            alice, _ = channel.optimal_alice_states(pair)
            bob = channel.optimal_bob_state(pair, kappa)
            out.update(
                phi_c=_NAN if strength_only else cm.phi_c,
                phi_d=_NAN if strength_only else cm.phi_d,
                alice_x=alice.x,
                alice_y=alice.y,
                trace_distance=channel.signal_trace_distance(pair, bob, alice),
            )
        return out
    p2 = opts.get("p2")
    if p2 is None and "eps" in opts:
        p2 = compute_single_detector(scenario.resolved().bob, sf.quadrature, float(opts["eps"])).p2.real
    rep = channel.capacities(pair, p2)
    out.update(
        trace_distance=rep.trace_distance,
        p_bit=rep.p_bit,
        p_bit_upper=rep.p_bit_upper,
        shannon=rep.shannon,
        holevo=_NAN if rep.holevo is None else rep.holevo,
        valid=rep.valid,
    )
    return out


def thread_count(flag: Optional[int]) -> int:
    if flag is not None:
        return max(1, flag)
    env = os.environ.get("UDW_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigurationError(f"UDW_THREADS={env!r} is not an integer") from None
    return 1


def run_file(sf: ScenarioFile, threads: int = 1) -> List[Dict[str, object]]:
    """Rows in sweep order; regime warnings are silenced because every row is flagged anyway."""
    points = sf.points()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if threads == 1:
            return [evaluate_point(sf, p) for p in points]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda p: evaluate_point(sf, p), points))


def write_csv(rows: List[Dict[str, object]], stream) -> None:
    header: List[str] = []
    for r in rows:
        header.extend(k for k in r if k not in header)
    header.remove("status")
    header.append("status")
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(r.get(k, _NAN)) for k in header])


def cmd_run(args) -> int:
    try:
        sf = load(args.file)
        if args.method:
            if args.method != "quadrature" and sf.case is None:
                raise SchemaError("closed_form and both need a catalogue case", key="--method", path=args.file)
            sf = replace(sf, method=args.method)
        threads = thread_count(args.threads)
    except (SchemaError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        rows = run_file(sf, threads)
    except (ConfigurationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)
    bad = [r for r in rows if r["status"] != "ok"]
    if bad:
        print(f"error: {len(bad)} of {len(rows)} points failed numerically (see status column)", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_verify(args) -> int:
    from .acceptance import run_criteria

    only = None
    if args.only:
        only = [int(x) for x in args.only.split(",")]
    ok = True
    for res in run_criteria(only=only, strict=args.strict):
        print(json.dumps(res.as_dict()), flush=True)
        ok &= res.passed
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fit(args) -> int:
    from .fit import power_law

    with open(args.csv, newline="") as fh:
        rows = [r for r in csv.DictReader(fh) if r.get("status", "ok") == "ok"]
    if not rows:
        print("error: no usable rows", file=sys.stderr)
        return EXIT_SCHEMA
    xcol = args.x or next((k for k in rows[0] if "." in k), None)
    for col in (xcol, args.column):
        if col is None or col not in rows[0]:
            print(f"error: column {col!r} not found", file=sys.stderr)
            return EXIT_SCHEMA
    try:
        res = power_law([float(r[xcol]) for r in rows], [float(r[args.column]) for r in rows], args.level)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(json.dumps({"x": xcol, "column": args.column, "exponent": res.exponent, "half_width": res.half_width,
                      "level": res.level, "prefactor": res.prefactor, "n": res.n}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="udwsignal", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="evaluate a scenario file and write CSV")
    r.add_argument("file")
    r.add_argument("--out")
    r.add_argument("--method", choices=METHODS)
    r.add_argument("--threads", type=int)
    r.set_defaults(func=cmd_run)
    v = sub.add_parser("verify", help="run the acceptance criteria")
    v.add_argument("--strict", action="store_true", help="rerun quadrature at a tenth of the tolerance")
    v.add_argument("--only", help="comma separated criterion numbers")
    v.set_defaults(func=cmd_verify)
    f = sub.add_parser("fit", help="power-law fit of a CSV column")
    f.add_argument("csv")
    f.add_argument("--column", required=True)
    f.add_argument("--x", help="abscissa column (default: first sweep column)")
    f.add_argument("--level", type=float, default=0.95)
    f.set_defaults(func=cmd_fit)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
