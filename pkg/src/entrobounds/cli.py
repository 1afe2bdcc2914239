"""Command-line front end.

Subcommands: entropy, moment, sup, tv, kl, check, constants, verify,
counterexample.  Exit codes: 0 ok/pass, 1 verification failure,
2 non-member or hypothesis violated, 3 inconclusive, 4 usage or config
error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bounds import (
    HypothesisViolationError,
    OutOfClassError,
    check_continuity_bound,
    check_entropy_bound,
    check_membership,
    theorem_constants,
)
from .config import FORMATS, ConfigError, RunConfig, load_config
from .functionals import (
    alpha_moment,
    differential_entropy,
    ess_sup,
    relative_entropy,
    total_variation,
)
from .verify import SCENARIOS, divergence_sweep_p, divergence_sweep_q, run_scenario

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_OUTSIDE = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 4


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the interface contract says 4
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="entrobounds",
        description=(
            "Entropy, distance, and class-bound computations for declared "
            "densities, plus batch verification scenarios."
        ),
    )
    parser.add_argument("--config", help="path to a run configuration file")
    parser.add_argument("--tol", type=float, help="quadrature tolerance override")
    parser.add_argument("--format", choices=FORMATS, help="output format")
    parser.add_argument("--out", help="write the result to this path")
    parser.add_argument("--seed", type=int, help="seed for randomized sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="differential entropy of a declared density")
    p.add_argument("density")
    p = sub.add_parser("moment", help="alpha-norm moment of a declared density")
    p.add_argument("density")
    p.add_argument("alpha", type=float)
    p = sub.add_parser("sup", help="essential supremum of a declared density")
    p.add_argument("density")
    p = sub.add_parser("tv", help="total variation distance of a declared pair")
    p.add_argument("pair")
    p = sub.add_parser("kl", help="relative entropy of a declared pair")
    p.add_argument("pair")
    p = sub.add_parser("check", help="membership plus entropy-bound check")
    p.add_argument("density")
    p.add_argument("spec")
    p = sub.add_parser("constants", help="bound constants of a declared spec")
    p.add_argument("spec")
    p = sub.add_parser("verify", help="run a verification scenario")
    p.add_argument("scenario", choices=SCENARIOS)
    p = sub.add_parser(
        "counterexample", help="divergence sweep for one counterexample density"
    )
    p.add_argument("which", choices=("p", "q"))
    return parser


def _load(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.tol is not None:
        if not args.tol > 0:
            raise ConfigError("--tol must be positive")
        cfg.tol = args.tol
    if args.format is not None:
        cfg.out_format = args.format
    if args.out is not None:
        cfg.out_path = args.out
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def _resolve(cfg: RunConfig, kind: str, name: str):
    table = {"density": cfg.densities, "spec": cfg.specs, "pair": cfg.pairs}[kind]
    if name not in table:
        raise ConfigError(
            f"unknown {kind} {name!r}; declare it in the config "
            f"(known: {sorted(table) or 'none'})"
        )
    return table[name]


def _emit(cfg: RunConfig, payload: dict, text: str):
    if cfg.out_format == "json":
        body = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif cfg.out_format == "csv":
        keys = sorted(payload)
        header = ",".join(keys)
        row = ",".join(_csv_cell(payload[k]) for k in keys)
        body = header + "\n" + row + "\n"
    else:
        body = text if text.endswith("\n") else text + "\n"
    if cfg.out_path:
        with open(cfg.out_path, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _functional_payload(name: str, fv) -> dict:
    return {
        "quantity": name,
        "value": fv.value,
        "error_estimate": fv.error_estimate,
        "converged": fv.converged,
    }


def _cmd_entropy(cfg: RunConfig, args) -> int:
    d = _resolve(cfg, "density", args.density)
    fv = differential_entropy(d, cfg.tol)
    _emit(
        cfg,
        _functional_payload("entropy", fv),
        f"entropy({args.density}) = {fv.value:.9f} (error <= {fv.error_estimate:.2e})",
    )
    if not fv.converged:
        print(
            "entropy integral did not converge; for the divergent catalog "
            "densities use the `counterexample` subcommand instead",
            file=sys.stderr,
        )
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _cmd_moment(cfg: RunConfig, args) -> int:
    d = _resolve(cfg, "density", args.density)
    if not args.alpha > 0:
        raise ConfigError("alpha must be positive")
    fv = alpha_moment(d, args.alpha, cfg.tol)
    _emit(
        cfg,
        _functional_payload(f"moment[alpha={args.alpha:g}]", fv),
        f"moment({args.density}, alpha={args.alpha:g}) = {fv.value:.9f} "
        f"(error <= {fv.error_estimate:.2e})",
    )
    return EXIT_OK if fv.converged else EXIT_INCONCLUSIVE


def _cmd_sup(cfg: RunConfig, args) -> int:
    d = _resolve(cfg, "density", args.density)
    value, method = ess_sup(d)
    _emit(
        cfg,
        {"quantity": "ess_sup", "value": value, "method": method},
        f"ess_sup({args.density}) = {value:.9g} [{method}]",
    )
    return EXIT_OK


def _cmd_tv(cfg: RunConfig, args) -> int:
    x, y = _resolve(cfg, "pair", args.pair)
    fv = total_variation(cfg.densities[x], cfg.densities[y], cfg.tol)
    _emit(
        cfg,
        _functional_payload("total_variation", fv),
        f"tv({args.pair}) = {fv.value:.9f} (error <= {fv.error_estimate:.2e})",
    )
    return EXIT_OK if fv.converged else EXIT_INCONCLUSIVE


def _cmd_kl(cfg: RunConfig, args) -> int:
    x, y = _resolve(cfg, "pair", args.pair)
    fv = relative_entropy(cfg.densities[x], cfg.densities[y], cfg.tol)
    _emit(
        cfg,
        _functional_payload("relative_entropy", fv),
        f"kl({args.pair}) = {fv.value:.9f} (error <= {fv.error_estimate:.2e})",
    )
    return EXIT_OK if fv.converged else EXIT_INCONCLUSIVE


def _cmd_check(cfg: RunConfig, args) -> int:
    d = _resolve(cfg, "density", args.density)
    spec = _resolve(cfg, "spec", args.spec)
    mem = check_membership(d, spec, cfg.tol)
    payload = {
        "density": args.density,
        "spec": args.spec,
        "alpha_moment": mem.alpha_moment.value,
        "moment_converged": mem.alpha_moment.converged,
        "ess_sup": mem.ess_sup,
        "ess_sup_method": mem.ess_sup_method,
        "margin_v": mem.margin_v,
        "margin_m": mem.margin_m,
        "belongs": mem.belongs,
        "inconclusive": mem.inconclusive,
    }
    if mem.inconclusive:
        _emit(cfg, payload, f"membership inconclusive: {mem.diagnostic}")
        return EXIT_INCONCLUSIVE
    if not mem.belongs:
        note = mem.diagnostic or "strict inequalities not satisfied"
        _emit(
            cfg,
            payload,
            f"not a member of {args.spec} ({note}; margin_v={mem.margin_v:.6g}, "
            f"margin_m={mem.margin_m:.6g})",
        )
        return EXIT_OUTSIDE
    bc = check_entropy_bound(d, spec, cfg.tol)
    payload.update(
        {"entropy_abs": bc.lhs, "entropy_bound": bc.rhs, "bound_margin": bc.margin}
    )
    text = (
        f"member of {args.spec} (margin_v={mem.margin_v:.6g}, "
        f"margin_m={mem.margin_m:.6g})\n"
        f"|entropy| = {bc.lhs:.9f} <= bound {bc.rhs:.9f} "
        f"(margin {bc.margin:.6f}): {'satisfied' if bc.satisfied else 'VIOLATED'}"
    )
    _emit(cfg, payload, text)
    if not bc.converged:
        return EXIT_INCONCLUSIVE
    return EXIT_OK if bc.satisfied else EXIT_FAIL


def _cmd_constants(cfg: RunConfig, args) -> int:
    spec = _resolve(cfg, "spec", args.spec)
    consts = theorem_constants(spec)
    payload = {
        "spec": args.spec,
        "entropy_bound": consts.entropy_bound,
        "c1": consts.c1,
        "c2": consts.c2,
        "b1": consts.b1,
    }
    text = (
        f"constants for {args.spec}: entropy_bound={consts.entropy_bound:.9f}, "
        f"c1={consts.c1:.9f}, c2={consts.c2:.9f}, b1={consts.b1:.9f}"
    )
    _emit(cfg, payload, text)
    return EXIT_OK


def _cmd_verify(cfg: RunConfig, args) -> int:
    report = run_scenario(args.scenario, seed=cfg.seed, tol=cfg.tol)
    fmt = cfg.out_format if cfg.out_format != "text" else "csv"
    out_path = cfg.out_path or f"verification_report.{fmt}"
    body = report.to_json() if fmt == "json" else report.to_csv()
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(body)
    print(report.summary())
    print(f"report written to {out_path}")
    if report.failed > 0:
        return EXIT_FAIL
    if report.inconclusive > 0:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _cmd_counterexample(cfg: RunConfig, args) -> int:
    report = (
        divergence_sweep_p(tol=cfg.tol)
        if args.which == "p"
        else divergence_sweep_q(tol=cfg.tol)
    )
    if cfg.out_format == "json":
        body = report.to_json()
    elif cfg.out_format == "csv":
        body = report.to_csv()
    else:
        lines = [report.summary()]
        for it in report.items:
            lhs = "" if it.lhs is None else f" value={it.lhs:.9f}"
            rhs = "" if it.rhs is None else f" closed_form={it.rhs:.9f}"
            lines.append(f"  {it.item_id}: {it.verdict}{lhs}{rhs}")
        body = "\n".join(lines) + "\n"
    if cfg.out_path:
        with open(cfg.out_path, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return EXIT_OK if report.failed == 0 else EXIT_FAIL


_COMMANDS = {
    "entropy": _cmd_entropy,
    "moment": _cmd_moment,
    "sup": _cmd_sup,
    "tv": _cmd_tv,
    "kl": _cmd_kl,
    "check": _cmd_check,
    "constants": _cmd_constants,
    "verify": _cmd_verify,
    "counterexample": _cmd_counterexample,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _load(args)
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypothesisViolationError as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_OUTSIDE
    except OutOfClassError as exc:
        print(f"outside the class: {exc}", file=sys.stderr)
        return EXIT_OUTSIDE
    except ValueError as exc:
        print(f"invalid request: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
