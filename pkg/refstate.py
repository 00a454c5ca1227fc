#!/usr/bin/env python3

import argparse
import json
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Dict, IO, Iterator, List, Optional, Sequence

from cnf.core import Cnf, restrict_cnf
from cnf.dimacs import DimacsWriter, emit_dimacs, emit_model, parse_dimacs, parse_model
from config import ConfigParser
from encoders.appendix import am_families
from encoders.layout import AmLayout, VarLayout
from encoders.ref import ClauseFamily, ref_F_families
from encoders.sat import reflection_families, sat_families
from lab.admissible import check_no_falsified_axiom, extend_to_admissible, find_blocked_premise, is_admissible
from lab.events import check_level_bounds, check_patterns
from lab.montecarlo import monte_carlo
from lab.regime import check_parameter_regime
from lab.restriction import RhoParams, restriction_to_dict, sample_rho
from proofs.levelled import (
    check_levelled, decode_witness, encode_witness, levelled_to_text, parse_levelled, simulate,
)
from proofs.report import CheckReport
from proofs.reflection import build_reflection_refutation, size_bound
from proofs.res2 import check_res2, parse_res2, res2_to_text
from proofs.resolution import check_resolution, parse_proof, proof_to_text, restrict_proof
from utils.error_handler import (
    EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, ConfigurationError, ErrorHandler, InvalidProof,
    ParseError, RefstateError, handle_exception,
)
from utils.logger import RefstateLogger, get_logger
from utils.reporter import RunReporter


@dataclass
class Context:
    args: argparse.Namespace
    config: ConfigParser
    logger: RefstateLogger
    layout_version: str


def _read(path: str) -> str:
    with open(path, 'r') as handle:
        return handle.read()


def _read_cnf(path: str) -> Cnf:
    return parse_dimacs(_read(path))


@contextmanager
def _output(path: Optional[str]) -> Iterator[IO[str]]:
    if path is None or path == '-':
        yield sys.stdout
        return
    with open(path, 'w') as handle:
        yield handle


def _write(path: Optional[str], text: str):
    with _output(path) as stream:
        stream.write(text)


def _stream_families(ctx: Context, formula: str, num_vars: int, families: List[ClauseFamily],
                     params: Dict[str, object]) -> int:
    ctx.logger.log_generation_start(formula, params)
    comments = [
        f"refstate {formula}",
        "params " + " ".join(f"{key}={value}" for key, value in params.items()),
        f"layout {ctx.layout_version}",
    ]
    with _output(ctx.args.output) as stream:
        count = DimacsWriter(stream).write_families(num_vars, families, comments)
    ctx.logger.log_generation_complete(formula, num_vars, count)
    return EXIT_OK


def _finish_check(ctx: Context, name: str, report: CheckReport, extra: Optional[Dict] = None) -> int:
    ctx.logger.log_check_result(report.kind, report.ok, len(report.violations))
    result = report.to_dict()
    result.update(extra or {})
    if ctx.args.report:
        reporter = RunReporter(f"refstate {name}")
        reporter.set_start_time()
        reporter.add_result(name, result)
        reporter.set_end_time()
        if ctx.args.report == 'summary':
            print(reporter.generate_summary_report())
        else:
            print(json.dumps(reporter.generate_json_report(), indent=2))
    if report.ok:
        return EXIT_OK
    info = ErrorHandler(ctx.logger.logger).handle_check_failure(report.kind, report)
    print(f"{name}: {info['error_message']}", file=sys.stderr)
    return EXIT_VIOLATION


def _rho_params(ctx: Context) -> RhoParams:
    args, lab = ctx.args, ctx.config.get_lab_settings()
    return RhoParams(
        epsilon=args.eps if args.eps is not None else lab['epsilon'],
        p=args.p,
        w=args.w,
        variant=args.variant or lab['variant'],
        seed=args.seed,
    )


def cmd_gen_ref(ctx: Context) -> int:
    args = ctx.args
    f = _read_cnf(args.cnf)
    layout = VarLayout(f.num_vars, len(f.clauses), args.s, args.t)
    families = ref_F_families(f, args.s, args.t, layout)
    return _stream_families(ctx, "REF^F", layout.num_vars, families,
                            {'n': f.num_vars, 'r': len(f.clauses), 's': args.s, 't': args.t})


def cmd_gen_reflection(ctx: Context) -> int:
    args = ctx.args
    layout = VarLayout(args.n, args.r, args.s, args.t, with_sat=True)
    return _stream_families(ctx, "SAT ∧ REF", layout.num_vars, reflection_families(layout),
                            {'n': args.n, 'r': args.r, 's': args.s, 't': args.t})


def cmd_gen_am(ctx: Context) -> int:
    args = ctx.args
    f = _read_cnf(args.cnf)
    layout = AmLayout(f.num_vars, len(f.clauses), args.s_tilde)
    return _stream_families(ctx, "REF(F, s)", layout.num_vars, am_families(f, layout),
                            {'n': f.num_vars, 'r': len(f.clauses), 's_tilde': args.s_tilde})


def cmd_gen_sat(ctx: Context) -> int:
    args = ctx.args
    layout = VarLayout(args.n, args.r, 2, 1, with_sat=True)
    return _stream_families(ctx, "SAT", layout.num_vars, sat_families(layout),
                            {'n': args.n, 'r': args.r})


def cmd_check_res(ctx: Context) -> int:
    f = _read_cnf(ctx.args.cnf)
    pi = parse_proof(_read(ctx.args.proof), f)
    report = check_resolution(f, pi, expect_refutation=not ctx.args.derivation)
    return _finish_check(ctx, "check-res", report, {'steps': len(pi)})


def cmd_check_levelled(ctx: Context) -> int:
    f = _read_cnf(ctx.args.cnf)
    L = parse_levelled(_read(ctx.args.proof))
    return _finish_check(ctx, "check-levelled", check_levelled(f, L), {'s': L.s, 't': L.t})


def cmd_check_res2(ctx: Context) -> int:
    f = _read_cnf(ctx.args.cnf)
    pi = parse_res2(_read(ctx.args.proof), f)
    report = check_res2(f, pi)
    return _finish_check(ctx, "check-res2", report, {'lines': len(pi), 'size': pi.size})


def cmd_simulate_levelled(ctx: Context) -> int:
    f = _read_cnf(ctx.args.cnf)
    pi = parse_proof(_read(ctx.args.proof), f)
    report = check_resolution(f, pi)
    if not report.ok:
        raise InvalidProof(f"input proof does not check: {report.first()}")
    L = simulate(f, pi)
    ctx.logger.info(f"Levelled refutation with {L.s} levels of {L.t} clauses")
    _write(ctx.args.output, levelled_to_text(L))
    return EXIT_OK


def cmd_build_res2(ctx: Context) -> int:
    args = ctx.args
    pi = build_reflection_refutation(args.n, args.r, args.s, args.t)
    bound = size_bound(args.n, args.r, args.s, args.t)
    ctx.logger.info(
        f"Res(2) refutation: {len(pi)} lines, size {pi.size}, "
        f"size / bound = {pi.size / bound:.3f}, sections {pi.section_sizes}"
    )
    _write(args.output, res2_to_text(pi))
    return EXIT_OK


def cmd_restrict(ctx: Context) -> int:
    args = ctx.args
    f = _read_cnf(args.cnf)
    sigma = parse_model(_read(args.model))
    if args.proof:
        pi = restrict_proof(parse_proof(_read(args.proof), f), sigma)
        _write(args.output, proof_to_text(pi))
        if args.cnf_output:
            _write(args.cnf_output, emit_dimacs(pi.over, ["refstate restricted formula"]))
        return EXIT_OK
    _write(args.output, emit_dimacs(restrict_cnf(f, sigma), ["refstate restricted formula"]))
    return EXIT_OK


def cmd_witness_encode(ctx: Context) -> int:
    f = _read_cnf(ctx.args.cnf)
    L = parse_levelled(_read(ctx.args.proof))
    report = check_levelled(f, L)
    if not report.ok:
        raise InvalidProof(f"levelled refutation does not check: {report.first()}")
    layout = VarLayout(f.num_vars, len(f.clauses), L.s, L.t)
    _write(ctx.args.output, emit_model(encode_witness(L, layout)))
    return EXIT_OK


def cmd_witness_decode(ctx: Context) -> int:
    args = ctx.args
    f = _read_cnf(args.cnf)
    layout = VarLayout(f.num_vars, len(f.clauses), args.s, args.t)
    L = decode_witness(parse_model(_read(args.model)), layout, f)
    _write(args.output, levelled_to_text(L))
    return EXIT_OK


def cmd_sample_rho(ctx: Context) -> int:
    args = ctx.args
    rho = sample_rho(_rho_params(ctx), args.n, args.r, args.s, args.t)
    _write(args.output, json.dumps(restriction_to_dict(rho), indent=2) + "\n")
    return EXIT_OK


def cmd_check_rho(ctx: Context) -> int:
    args = ctx.args
    layout = VarLayout(args.n, args.r, args.s, args.t)
    rho = sample_rho(_rho_params(ctx), args.n, args.r, args.s, args.t, layout)
    report = CheckReport('rho')
    for item, holds in check_level_bounds(rho).items():
        if not holds:
            report.add('level-bounds', f"item ({item}) fails")
    patterns = check_patterns(rho)
    if not patterns.item_i:
        report.add('patterns', f"({args.s},{args.t}) is touched")
    if not patterns.item_ii:
        report.add('patterns', f"dense triple {patterns.witness}")

    extra: Dict[str, object] = {'rho': restriction_to_dict(rho)}
    if args.cnf and patterns.ok:
        f = _read_cnf(args.cnf)
        if layout.n != f.num_vars or layout.r != len(f.clauses):
            raise ConfigurationError("--n and --r must match the formula given by --cnf")
        blocked = find_blocked_premise(rho, f)
        if blocked is not None:
            extra['blocked'] = blocked
        else:
            sigma = extend_to_admissible(rho, f, layout)
            report.violations.extend(is_admissible(sigma, rho, f, layout).violations)
            report.violations.extend(
                check_no_falsified_axiom(sigma, f, args.s, args.t, layout).violations
            )
            extra['extension_size'] = len(sigma)
    if not args.report:
        print(json.dumps({'ok': report.ok, 'violations': [str(v) for v in report.violations],
                          **extra}, indent=2))
    return _finish_check(ctx, "check-rho", report, extra)


def cmd_mc_stats(ctx: Context) -> int:
    args = ctx.args
    lab = ctx.config.get_lab_settings()
    f = _read_cnf(args.cnf) if args.cnf else None
    result = monte_carlo(
        _rho_params(ctx), args.n, args.r, args.s, args.t,
        trials=args.trials or lab['trials'],
        workers=args.workers or lab['workers'],
        z=lab['confidence_z'],
        f=f,
    )
    ctx.logger.log_trial_batch(result['parameters']['trials'], result['parameters']['trials'])
    _write(args.output, json.dumps(result, indent=2) + "\n")
    return EXIT_OK


def cmd_regime(ctx: Context) -> int:
    args = ctx.args
    lab = ctx.config.get_lab_settings()
    report = check_parameter_regime(
        args.n, args.r, args.s, args.t,
        epsilon=args.eps if args.eps is not None else lab['epsilon'],
        delta=args.delta if args.delta is not None else ctx.config.get_regime_settings()['delta'],
        variant=args.variant or lab['variant'],
    )
    for warning in report.warnings:
        ctx.logger.warning(warning)
    _write(args.output, json.dumps(report.to_dict(), indent=2) + "\n")
    return EXIT_OK


COMMANDS: Dict[str, Callable[[Context], int]] = {
    'gen-ref': cmd_gen_ref,
    'gen-reflection': cmd_gen_reflection,
    'gen-am': cmd_gen_am,
    'gen-sat': cmd_gen_sat,
    'check-res': cmd_check_res,
    'check-levelled': cmd_check_levelled,
    'check-res2': cmd_check_res2,
    'simulate-levelled': cmd_simulate_levelled,
    'build-res2': cmd_build_res2,
    'restrict': cmd_restrict,
    'witness-encode': cmd_witness_encode,
    'witness-decode': cmd_witness_decode,
    'sample-rho': cmd_sample_rho,
    'check-rho': cmd_check_rho,
    'mc-stats': cmd_mc_stats,
    'regime': cmd_regime,
}


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="refstate",
        description="Encode, check and build refutations of the refutation-existence formulas",
    )
    parser.add_argument("--config", help="Path to config file")
    parser.add_argument("--verbose", action="store_true", help="Verbose output")
    parser.add_argument("--log-file", help="Log to file")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def command(name: str, help_text: str, output: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        if output:
            p.add_argument("-o", "--output", help="Output file (default: stdout)")
        return p

    def grid(p, n: bool = True, r: bool = True, number=_positive_int):
        if n:
            p.add_argument("--n", type=number, required=True, help="Number of variables")
        if r:
            p.add_argument("--r", type=number, required=True, help="Number of clauses")
        p.add_argument("--s", type=number, required=True, help="Number of levels")
        p.add_argument("--t", type=number, required=True, help="Clauses per level")

    def checking(p):
        p.add_argument("--cnf", required=True, help="DIMACS formula")
        p.add_argument("--proof", required=True, help="Proof file")
        p.add_argument("--report", choices=['summary', 'json'], help="Print a detailed report")

    def sampling(p):
        grid(p)
        p.add_argument("--seed", type=int, required=True, help="Seed for the random generator")
        p.add_argument("--eps", type=_positive_float, help="epsilon (default from config)")
        p.add_argument("--p", type=float, help="Override the inclusion probability")
        p.add_argument("--w", type=_positive_float, help="Override the width bound")
        p.add_argument("--variant", choices=['standard', 'level-scaled'], help="Choice of p and w")

    p = command("gen-ref", "REF^F_{s,t} for a formula F")
    p.add_argument("--cnf", required=True, help="Unsatisfiable DIMACS formula F")
    grid(p, n=False, r=False)

    grid(command("gen-reflection", "SAT^{n,r} ∧ REF^{n,r}_{s,t}"))

    p = command("gen-am", "Sequence-shaped refutation formula REF(F, s)")
    p.add_argument("--cnf", required=True, help="Unsatisfiable DIMACS formula F")
    p.add_argument("--s-tilde", type=_positive_int, required=True, help="Sequence length")

    p = command("gen-sat", "SAT^{n,r}")
    p.add_argument("--n", type=_positive_int, required=True, help="Number of variables")
    p.add_argument("--r", type=_positive_int, required=True, help="Number of clauses")

    p = command("check-res", "Check a resolution proof", output=False)
    checking(p)
    p.add_argument("--derivation", action="store_true", help="Do not require the empty clause")
    checking(command("check-levelled", "Check a levelled refutation", output=False))
    checking(command("check-res2", "Check a Res(2) refutation", output=False))

    p = command("simulate-levelled", "Turn a resolution refutation into a levelled one")
    p.add_argument("--cnf", required=True, help="DIMACS formula")
    p.add_argument("--proof", required=True, help="Resolution refutation")

    grid(command("build-res2", "Res(2) refutation of SAT^{n,r} ∧ REF^{n,r}_{s,t}"))

    p = command("restrict", "Restrict a formula, or a proof with its formula")
    p.add_argument("--cnf", required=True, help="DIMACS formula")
    p.add_argument("--model", required=True, help="Partial assignment as 'v ... 0' lines")
    p.add_argument("--proof", help="Resolution proof over the formula")
    p.add_argument("--cnf-output", help="With --proof: also write the restricted formula here")

    p = command("witness-encode", "Model of REF^F_{s,t} describing a levelled refutation")
    p.add_argument("--cnf", required=True, help="DIMACS formula")
    p.add_argument("--proof", required=True, help="Levelled refutation")

    p = command("witness-decode", "Levelled refutation read from a model of REF^F_{s,t}")
    p.add_argument("--cnf", required=True, help="DIMACS formula")
    p.add_argument("--model", required=True, help="Model as 'v ... 0' lines")
    grid(p, n=False, r=False)

    sampling(command("sample-rho", "Sample a random restriction"))

    p = command("check-rho", "Sample a restriction and check its events", output=False)
    sampling(p)
    p.add_argument("--cnf", help="Also extend to an admissible assignment for this formula")
    p.add_argument("--report", choices=['summary', 'json'], help="Print a detailed report")

    p = command("mc-stats", "Monte Carlo frequencies of the restriction events")
    sampling(p)
    p.add_argument("--trials", type=_positive_int, help="Number of trials (default from config)")
    p.add_argument("--workers", type=_positive_int, help="Worker threads (default from config)")
    p.add_argument("--cnf", help="Count samples with no admissible extension for this formula")

    p = command("regime", "Evaluate the parameter inequalities")
    grid(p, number=_positive_float)
    p.add_argument("--eps", type=_positive_float, help="epsilon (default from config)")
    p.add_argument("--delta", type=_positive_float, help="delta (default from config)")
    p.add_argument("--variant", choices=['standard', 'level-scaled'], help="Choice of p and w")

    return parser


@handle_exception
def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    config_parser = ConfigParser(args.config)
    error_handler = ErrorHandler()
    try:
        settings = config_parser.get_settings()
        layout_version = config_parser.get_layout_version()
    except ConfigurationError as e:
        error_handler.handle_config_error(e, str(config_parser.config_path))
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    log_level = "DEBUG" if args.verbose else settings.get('log_level', 'WARNING')
    logger = get_logger(log_level, args.log_file)
    error_handler = ErrorHandler(logger.logger)
    ctx = Context(args, config_parser, logger, layout_version)

    logger.debug(f"Running {args.command}")
    try:
        return COMMANDS[args.command](ctx)
    except RefstateError as e:
        if isinstance(e, ParseError):
            error_handler.handle_parse_error(e, args.command)
        elif isinstance(e, ConfigurationError):
            error_handler.handle_config_error(e, str(config_parser.config_path))
        else:
            error_handler.handle_parameter_error(e)
        print(f"Error: {e}", file=sys.stderr)
        return error_handler.get_exit_code(e)
    except OSError as e:
        logger.error(f"{e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
