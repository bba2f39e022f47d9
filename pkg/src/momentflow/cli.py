"""Command-line front end.

Exit codes: 0 success, 1 check failure, 2 parse/usage error, 3 invariant
violation, 4 flow stagnation or step-budget exhaustion, 5 output IO failure.
All output files are written atomically, and reruns on identical inputs are
byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import checks, kernels, moment, ricci, serialize
from .errors import InvariantError, SchemaError, StagnationError
from .liealg import JACOBI_TOL, require_jacobi, validate_jacobi
from .moment import FlowConfig

JACOBI_DEFAULT = JACOBI_TOL

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_STAGNATION = 4
EXIT_IO = 5


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _tols(args) -> dict:
    out = {}
    for item in args.tol or []:
        if "=" not in item:
            raise SchemaError(f"--tol argument {item!r} is not KEY=VALUE")
        key, val = item.split("=", 1)
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise SchemaError(f"--tol {key.strip()}: {val!r} is not a number") from None
    return out


def _inputs(args, least: int, most: int | None = None) -> list:
    paths = args.input or []
    most = least if most is None else most
    if len(paths) < least or len(paths) > most:
        want = str(least) if least == most else f"{least} to {most}"
        raise SchemaError(f"expected {want} --input file(s), got {len(paths)}")
    return paths

def _emit(report: dict, args) -> None:
    text = serialize.dump_json(report)
    if args.output:
        serialize._atomic_write_text(args.output, text)
    else:
        sys.stdout.write(text)


def _flow_config(args, tols: dict) -> FlowConfig:
    kwargs = {}
    if getattr(args, "max_steps", None) is not None:
        kwargs["max_steps"] = args.max_steps
    for key in ("step_init", "step_min", "grad_norm_stop", "backtrack_factor"):
        if key in tols:
            kwargs[key] = tols[key]
    return FlowConfig(**kwargs)


def cmd_validate(args) -> int:
    tols = _tols(args)
    alg, _ = serialize.load_algebra(_inputs(args, 1)[0])
    rep = validate_jacobi(alg, tols.get("jacobi", JACOBI_DEFAULT))
    _emit({"max_residual": rep.max_residual, "passed": rep.passed, "tol": rep.tol}, args)
    if not rep.passed:
        _err(f"Jacobi identity fails: max residual {rep.max_residual:.3e}")
        return EXIT_INVARIANT
    return EXIT_OK


def _ricci_report(path: str, tols: dict):
    alg, G = serialize.load_algebra(path)
    require_jacobi(alg, tols.get("jacobi", JACOBI_DEFAULT))
    mla = ricci.MetricLieAlgebra(algebra=alg, metric=G)
    return alg, mla, ricci.ricci_left_invariant(mla)


def cmd_ricci(args) -> int:
    tols = _tols(args)
    _, _, rep = _ricci_report(_inputs(args, 1)[0], tols)
    _emit(
        {
            "eigenvalues": rep.eigenvalues,
            "scalar_curvature": rep.scalar_curvature,
            "ric_operator": rep.ric_operator,
        },
        args,
    )
    return EXIT_OK


def cmd_nilsoliton(args) -> int:
    tols = _tols(args)
    _, mla, rep = _ricci_report(_inputs(args, 1)[0], tols)
    fit = ricci.nilsoliton_fit(mla)
    tol = tols.get("soliton", ricci.SOLITON_TOL)
    _emit(
        {
            "eigenvalues": rep.eigenvalues,
            "scalar_curvature": rep.scalar_curvature,
            "soliton": {
                "c": fit.c,
                "D": fit.derivation,
                "residual": fit.residual,
                "is_nilsoliton": fit.is_soliton(tol),
            },
        },
        args,
    )
    if not fit.is_soliton(tol):
        _err(f"soliton residual {fit.residual:.3e} exceeds {tol:.1e}")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_milnor_scan(args) -> int:
    tols = _tols(args)
    if not args.output:
        raise SchemaError("milnor-scan requires --output for the CSV table")
    kwargs = {}
    for key in ("n1", "n2", "n3"):
        if key in tols:
            kwargs[key] = int(tols[key])
    for axis in ("lambda1", "lambda2", "lambda3"):
        lo, hi = f"{axis}_min", f"{axis}_max"
        if lo in tols or hi in tols:
            default = ricci.MilnorGrid.__dataclass_fields__[f"{axis}_range"].default
            kwargs[f"{axis}_range"] = (tols.get(lo, default[0]), tols.get(hi, default[1]))
    grid = ricci.MilnorGrid(**kwargs)
    report = ricci.milnor_min_direction_scan(grid)
    serialize.write_scan_csv(report, args.output)
    print(f"scanned {report.points} frames, {report.counterexamples} counterexamples")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_moment(args) -> int:
    theta = serialize.load_representation(_inputs(args, 1)[0])
    tols = _tols(args)
    m = moment.moment_map(theta)
    norm = moment.moment_norm(theta)
    _emit(
        {
            "moment": m,
            "m_norm": norm,
            "is_minimal": norm <= tols.get("minimal", moment.MINIMAL_TOL),
        },
        args,
    )
    return EXIT_OK


def cmd_flow(args) -> int:
    tols = _tols(args)
    if not args.output:
        raise SchemaError("flow requires --output for the trace CSV")
    theta = serialize.load_representation(_inputs(args, 1)[0])
    config = _flow_config(args, tols)
    limit_path = os.path.splitext(args.output)[0] + ".limit.json"
    try:
        trace = moment.gradient_flow(theta, config)
    except StagnationError as e:
        if e.trace is not None:
            serialize.write_trace_csv(e.trace, args.output)
        _err(str(e))
        return EXIT_STAGNATION
    serialize.write_trace_csv(trace, args.output)
    serialize.write_json(
        {
            "converged": trace.converged,
            "status": trace.status,
            "steps": trace.n_steps,
            "m_norm2": trace.final_m_norm2,
            "limit": serialize.representation_to_dict(trace.limit),
        },
        limit_path,
    )
    print(f"{trace.status} after {trace.n_steps} steps, m_norm2 {trace.final_m_norm2!r}")
    if not trace.converged:
        _err("flow did not reach the stopping norm within max_steps")
        return EXIT_STAGNATION
    return EXIT_OK


def cmd_stabilizer(args) -> int:
    tols = _tols(args)
    theta = serialize.load_representation(_inputs(args, 1)[0])
    basis = moment.stabilizer_algebra(theta)
    adj = moment.self_adjointness_check(
        basis, theta.G_target, tols.get("selfadj", 1e-6)
    )
    _emit(
        {
            "dimension": len(basis),
            "basis": basis,
            "self_adjoint": {
                "passed": adj.passed,
                "max_residual": adj.max_residual,
                "residuals": adj.residuals,
            },
        },
        args,
    )
    return EXIT_OK


def cmd_compat_check(args) -> int:
    tols = _tols(args)
    paths = _inputs(args, 2, 3)
    theta = serialize.load_representation(paths[0])
    central = serialize.load_central_indices(paths[1], theta.domain_dim)
    domain_alg = None
    if len(paths) == 3:
        domain_alg, _ = serialize.load_algebra(paths[2])
        require_jacobi(domain_alg)
    report = moment.compatibility_split_check(
        theta,
        central,
        domain_alg=domain_alg,
        tol=tols.get("check", moment.CHECK_TOL),
        require_minimal=False,
    )
    _emit(
        {
            "minimal": report.minimal,
            "m_norm": report.m_norm,
            "central_indices": [i + 1 for i in report.central_indices],
            "normality_residuals": report.normality_residuals,
            "commutation_residuals": report.commutation_residuals,
            "associated_m_norm": report.associated_m_norm,
            "normal_ok": report.normal_ok,
            "commute_ok": report.commute_ok,
            "reduced_ok": report.reduced_ok,
            "passed": report.passed,
        },
        args,
    )
    if not report.passed:
        _err("compatibility split check failed")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_split(args) -> int:
    alg, _ = serialize.load_algebra(_inputs(args, 1)[0])
    require_jacobi(alg)
    report = checks.compact_noncompact_split(alg, seed=args.seed)
    ideals = []
    for sub, sig in zip(report.ideals, report.killing_signatures):
        ideals.append(
            {
                "vectors": sub.vectors,
                "dimension": sub.dim,
                "compact": sig[0] == 0 and sig[2] == 0,
                "killing_signature": list(sig),
            }
        )
    _emit(
        {
            "seed": report.seed,
            "n_compact": len(report.compact_ideals),
            "n_noncompact": len(report.noncompact_ideals),
            "ideals": ideals,
        },
        args,
    )
    return EXIT_OK


def cmd_skew_check(args) -> int:
    tols = _tols(args)
    paths = _inputs(args, 2)
    theta = serialize.load_representation(paths[0])
    alg, _ = serialize.load_algebra(paths[1])
    require_jacobi(alg)
    split = checks.compact_noncompact_split(alg, seed=args.seed)
    config = _flow_config(args, tols)
    report = checks.skew_at_minimal_check(
        theta, split, config=config, tol=tols.get("skew", checks.SKEW_TOL)
    )
    _emit(
        {
            "converged": report.converged,
            "symmetric_part_max": report.symmetric_part_max,
            "per_ideal": report.per_ideal,
            "passed": report.passed,
        },
        args,
    )
    if not report.converged:
        _err("flow did not converge within max_steps")
        return EXIT_STAGNATION
    if not report.passed:
        _err(f"symmetric part {report.symmetric_part_max:.3e} exceeds tolerance")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_phi(args) -> int:
    tols = _tols(args)
    A, G = serialize.load_matrix(_inputs(args, 1)[0])
    tol = tols.get("phi", checks.PHI_TOL)
    report = checks.phi_orthogonal_part(A, G, tol=tol)
    _emit(
        {
            "phi": report.phi,
            "orthogonality_residual": report.orthogonality_residual,
            "commutation_residual": report.commutation_residual,
            "normality_residual": report.normality_residual,
            "normal": report.normal,
        },
        args,
    )
    if report.orthogonality_residual > tol or report.commutation_residual > tol:
        _err("phi residuals exceed tolerance (input was not normal)")
        return EXIT_CHECK_FAILED
    return EXIT_OK


_COMMANDS = {
    "validate": (cmd_validate, "check the Jacobi identity of an algebra file"),
    "ricci": (cmd_ricci, "Ricci operator and spectrum of a metric algebra"),
    "nilsoliton": (cmd_nilsoliton, "fit Ric = c I + D over derivations (nilpotent only)"),
    "milnor-scan": (cmd_milnor_scan, "grid scan of diagonal Ricci signs, CSV output"),
    "moment": (cmd_moment, "moment map value and minimality of a representation"),
    "flow": (cmd_flow, "norm-square gradient descent; writes trace CSV + limit JSON"),
    "stabilizer": (cmd_stabilizer, "stabilizer subalgebra and its self-adjointness"),
    "compat-check": (cmd_compat_check, "center/bracket split of the minimality conditions"),
    "split": (cmd_split, "compact/noncompact ideal decomposition (semisimple only)"),
    "skew-check": (cmd_skew_check, "flow to a minimal point, check compact part is skew"),
    "phi": (cmd_phi, "orthogonal part A (A*)^{-1} of an invertible matrix"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momentflow",
        description="moment maps, gradient flows and Ricci curvature on structure constants",
    )
    parser.add_argument("--backend", action="store_true",
                        help="print the active kernel backend and exit")
    sub = parser.add_subparsers(dest="command")
    for name, (func, help_text) in _COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", "-i", action="append", metavar="FILE",
                       help="input file (repeatable)")
        p.add_argument("--output", "-o", metavar="FILE", help="output file")
        p.add_argument("--tol", action="append", metavar="KEY=VAL",
                       help="numeric override (repeatable)")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
        p.add_argument("--max-steps", type=int, default=None, dest="max_steps",
                       help="flow step budget")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_PARSE
    if getattr(args, "backend", False) and args.command is None:
        print(kernels.backend_name())
        return EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except SchemaError as e:
        _err(str(e))
        return EXIT_PARSE
    except StagnationError as e:
        _err(str(e))
        return EXIT_STAGNATION
    except InvariantError as e:
        _err(str(e))
        return EXIT_INVARIANT
    except OSError as e:
        _err(f"IO failure: {e}")
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
