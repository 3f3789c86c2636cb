"""Command-line entry point: ``eprdds <subcommand> [flags]``.

Exit codes: 0 success, 1 failed check or internal error, 2 usage or
validation error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

from . import multipath, verify
from .interferometry import predictability_theta, visibility_asym, visibility_theta
from .numerics import DEFAULT_CHUNK, FitError, fit_visibility, sample_joint, sample_joint_asym
from .output import dumps, provenance, write_csv
from .purification import NoPurificationError, verify_purification
from .states import AsymParams, ThetaParams
from .tables import SCAN_COLUMNS, as_params, density_table, family_meta, scan_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class HelpJson(argparse.Action):
    """``--help-json``: print the parser's flags as JSON and exit."""

    def __init__(self, option_strings, dest=argparse.SUPPRESS, default=argparse.SUPPRESS, help=None):
        super().__init__(option_strings, dest=dest, default=default, nargs=0, help=help)

    def __call__(self, parser, namespace, values, option_string=None):
        print(json.dumps(describe(parser), indent=2))
        parser.exit(EXIT_OK)


def describe(parser: argparse.ArgumentParser) -> dict:
    out = {"prog": parser.prog, "description": parser.description, "options": []}
    for act in parser._actions:
        if isinstance(act, argparse._SubParsersAction):
            out["subcommands"] = {name: describe(sub) for name, sub in act.choices.items()}
            continue
        if isinstance(act, (argparse._HelpAction, HelpJson)):
            continue
        default = act.default if act.default is not argparse.SUPPRESS else None
        out["options"].append({
            "flags": list(act.option_strings),
            "dest": act.dest,
            "type": getattr(act.type, "__name__", None) if act.type else None,
            "default": default,
            "required": act.required,
            "choices": list(act.choices) if act.choices else None,
            "help": act.help,
        })
    return out


# -- flag groups -------------------------------------------------------------

def _theta_flags(p, required_theta=True):
    g = p.add_argument_group("theta-family state")
    g.add_argument("--a", type=float, help="Gaussian width parameter a > 0")
    g.add_argument("--h", type=float, help="slit half separation h >= 0")
    if required_theta:
        g.add_argument("--theta", type=float, help="mixing angle in [0, pi/4]")


def _asym_flags(p):
    g = p.add_argument_group("asymmetric state")
    g.add_argument("--h1", type=float, help="Alice's slit half separation")
    g.add_argument("--b", type=float, help="Bob's Gaussian width parameter")
    g.add_argument("--h2", type=float, help="Bob's slit half separation")


def _grid_flags(p, points, sigmas):
    p.add_argument("--grid-points", type=int, default=points, help="grid points per axis")
    p.add_argument("--range-sigmas", type=float, default=sigmas,
                   help="grid half width in units of sqrt(a)")


def _out_flag(p, formats=None):
    p.add_argument("--out", help="output file (default: stdout)")
    if formats:
        p.add_argument("--format", choices=formats, default=formats[0])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eprdds",
        allow_abbrev=False,
        description="Two-particle double-slit momentum densities, visibilities and checks.",
    )
    parser.add_argument("--help-json", action=HelpJson, help="print all flags as JSON and exit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text, allow_abbrev=False)
        p.add_argument("--help-json", action=HelpJson, help="print this subcommand's flags as JSON")
        return p

    p = add("density", "tabulate the single-particle or joint momentum density")
    _theta_flags(p)
    _asym_flags(p)
    _grid_flags(p, 801, 6.0)
    p.add_argument("--joint", action="store_true", help="emit f(p1, p2) on a square grid")
    _out_flag(p, ["csv", "json"])

    p = add("scan", "visibility and predictability over theta in [0, pi/4]")
    _theta_flags(p, required_theta=False)
    p.add_argument("--points", type=int, default=400, help="number of theta values")
    _out_flag(p, ["csv", "json"])

    p = add("sample", "draw seeded (p1, p2) hits and fit the fringe visibility")
    _theta_flags(p)
    _asym_flags(p)
    p.add_argument("--n", type=int, required=True, help="number of samples (>= 1)")
    p.add_argument("--seed", type=int, required=True, help="64-bit master seed")
    p.add_argument("--workers", type=int, default=1, help="threads; does not change the output")
    p.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK, help=argparse.SUPPRESS)
    p.add_argument("--out", help="CSV file for the samples (summary JSON always goes to stdout)")

    p = add("purify", "find the theta-state purifying the asymmetric state's reduced state")
    p.add_argument("--a", type=float, help="Alice's Gaussian width parameter")
    _asym_flags(p)
    _grid_flags(p, 41, 6.0)
    p.add_argument("--allow-swap", action="store_true",
                   help="purify Bob instead when b*h2^2 > a*h1^2")
    _out_flag(p)

    p = add("multipath", "n-path distinguishability, predictability and coherence")
    p.add_argument("--input", help="JSON file with amplitudes_sq and optional overlaps (default: stdin)")
    _out_flag(p)

    p = add("verify", "run the consistency checks and report pass/fail as JSON")
    p.add_argument("--checks", nargs="+", choices=list(verify.ALL_CHECKS), help="subset to run")
    _out_flag(p)
    return parser


# -- helpers -----------------------------------------------------------------

@contextlib.contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _params(args, family=None):
    try:
        prm = as_params(args.a, getattr(args, "h", None), getattr(args, "theta", None),
                        getattr(args, "h1", None), getattr(args, "b", None), getattr(args, "h2", None))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if family is not None and not isinstance(prm, family):
        raise UsageError(f"this subcommand needs the {family.__name__} flags")
    return prm


def _warnings(prm) -> list[str]:
    hs = [prm.h] if isinstance(prm, ThetaParams) else [prm.h1, prm.h2]
    if any(h == 0 for h in hs):
        return ["h=0: slits coincide; visibility is the formula value, no fringes exist"]
    return []


def _emit_table(args, columns, data, meta):
    with _sink(args.out) as fh:
        if args.format == "json":
            fh.write(dumps({"meta": meta, "columns": list(columns), "rows": data}) + "\n")
        else:
            write_csv(fh, columns, data, meta)


def _emit_json(args, payload):
    with _sink(args.out) as fh:
        fh.write(dumps(payload) + "\n")


def _note(warnings):
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)


# -- subcommands -------------------------------------------------------------

def cmd_density(args) -> int:
    prm = _params(args)
    if args.grid_points < 2 or args.range_sigmas <= 0:
        raise UsageError("need --grid-points >= 2 and --range-sigmas > 0")
    columns, data = density_table(prm, args.grid_points, args.range_sigmas, args.joint)
    warns = _warnings(prm)
    meta = provenance(family_meta(prm), grid_points=args.grid_points,
                      range_sigmas=args.range_sigmas, joint=args.joint,
                      warning="; ".join(warns) or None)
    _note(warns)
    _emit_table(args, columns, data, meta)
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.a is None or args.h is None:
        raise UsageError("scan needs --a and --h")
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    try:
        data = scan_table(args.a, args.h, args.points)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    meta = provenance({"family": "theta", "a": args.a, "h": args.h}, points=args.points)
    _emit_table(args, SCAN_COLUMNS, data, meta)
    return EXIT_OK


def cmd_sample(args) -> int:
    prm = _params(args)
    if args.n < 1:
        raise UsageError("--n must be a positive sample count")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    draw = sample_joint if isinstance(prm, ThetaParams) else sample_joint_asym
    try:
        batch = draw(prm, args.n, args.seed, workers=args.workers, chunk_size=args.chunk_size)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    meta = provenance(family_meta(prm), seed=args.seed, n=args.n)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(fh, ("p1", "p2"), batch.samples, meta)
    warns = _warnings(prm)
    _note(warns)
    fit = fit_visibility(batch, prm)
    closed = (visibility_theta(prm) if isinstance(prm, ThetaParams) else visibility_asym(prm)).visibility
    print(dumps({"meta": meta, "V_hat": fit.visibility_hat, "V_closed_form": closed,
                 "acceptance_rate": batch.acceptance_rate, "residual_rms": fit.residual_rms,
                 "bins": fit.bins, "warnings": warns}))
    return EXIT_OK


def cmd_purify(args) -> int:
    prm = _params(args, AsymParams)
    res = verify_purification(prm, args.grid_points, args.range_sigmas, allow_swap=args.allow_swap)
    tp = res.theta_params(prm)
    _emit_json(args, {
        "meta": provenance(family_meta(prm), grid_points=args.grid_points,
                           range_sigmas=args.range_sigmas),
        "theta": res.theta,
        "sin_two_theta": res.sin_two_theta,
        "visibility": visibility_theta(tp).visibility,
        "predictability": predictability_theta(res.theta),
        "wigner_gap": res.wigner_gap,
        "swapped": res.swapped,
        "warnings": _warnings(prm),
    })
    return EXIT_OK


def _read_ensemble(args):
    try:
        text = open(args.input).read() if args.input else sys.stdin.read()
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "amplitudes_sq" not in doc:
        raise UsageError("input must be a JSON object with an 'amplitudes_sq' list")
    try:
        return multipath.PathEnsemble.from_probabilities(doc["amplitudes_sq"], doc.get("overlaps"))
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_multipath(args) -> int:
    e = _read_ensemble(args)
    c = multipath.coherence(e)
    d = multipath.distinguishability(e)
    p = multipath.predictability_n(e)
    c_free = multipath.coherence(multipath.PathEnsemble(e.amplitudes))
    _emit_json(args, {
        "meta": provenance({"paths": e.n}),
        "D": d,
        "C": c,
        "P": p,
        "residual_D2_plus_C2": abs(d * d + c * c - 1),
        "residual_P2_plus_C2_unit_overlaps": abs(p * p + c_free * c_free - 1),
    })
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = verify.run_all(args.checks)
    ok = all(c.passed for c in checks)
    _emit_json(args, {
        "meta": provenance(),
        "passed": ok,
        "checks": [{"name": c.name, "passed": c.passed, "measured": c.measured,
                    "tolerance": c.tolerance, "detail": c.detail} for c in checks],
    })
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "density": cmd_density,
    "scan": cmd_scan,
    "sample": cmd_sample,
    "purify": cmd_purify,
    "multipath": cmd_multipath,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, NoPurificationError) as exc:
        print(f"eprdds {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FitError as exc:
        print(f"eprdds {args.command}: fit failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"eprdds {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
