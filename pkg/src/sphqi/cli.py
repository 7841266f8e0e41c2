"""Command-line interface.

Subcommands
-----------
converge   quasi-interpolation error ladder over n
noise      noisy-data comparison against hyperinterpolation
timing     wall-clock comparison over a node ladder
coeffs     dump a kernel coefficient table
quadcheck  verify quadrature exactness residuals

Exit codes: 0 on success, 1 on configuration errors (bad flags, kernel
spec, files), 2 on numeric failure (non-finite results).

Flags may also come from a plain-text ``key=value`` config file passed via
``--config``; explicit flags override the file, which overrides built-in
defaults.  Keys use underscores (``rho_c=0.7``).
"""

from __future__ import annotations

import argparse
import sys

from .experiments import (
    ConfigError,
    ExperimentConfig,
    NumericFailure,
    format_rows,
    run_convergence,
    run_noise,
    run_timing,
    write_csv,
)
from .kernels import parse_kernel
from .quadrature import load_md_nodes, product_rule_s2, verify_exactness

__all__ = ["main"]

_EXPERIMENT_DEFAULTS = {
    "converge": {
        "kernel": "gaussian",
        "target": "f1",
        "n": "10,20,40,80,160",
    },
    "noise": {
        "kernel": "gaussian",
        "target": "wendland6",
        "n": "5,10,20,40,70",
        "noise": "0.001,0.01,0.1,0.3,0.5",
    },
    "timing": {
        "kernel": "gaussian",
        "target": "wendland6",
        "n": "20,40,80",
    },
}


def _parse_int_list(text):
    try:
        return tuple(int(part) for part in str(text).split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"expected a comma-separated integer list, got {text!r}") from exc


def _parse_float_list(text):
    try:
        return tuple(float(part) for part in str(text).split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"expected a comma-separated number list, got {text!r}") from exc


def _load_config_file(path):
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                stripped = line.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                key, sep, value = stripped.partition("=")
                if not sep:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


def _add_common_flags(sub):
    sub.add_argument("--config", help="key=value config file (flags override it)")
    sub.add_argument("--kernel", help="kernel spec, e.g. gaussian:K=3 or cs:rho=0.2,m=2")
    sub.add_argument("--target", help="target name: f1, f2, f3, wendland6")
    sub.add_argument("--n", help="comma-separated ladder parameters, e.g. 10,20,40")
    sub.add_argument("--rho-c", type=float, help="scale-rule prefactor c in rho = c n^p")
    sub.add_argument("--rho-exp", type=float, help="scale-rule exponent p (default -0.5)")
    sub.add_argument("--noise", help="comma-separated noise levels")
    sub.add_argument("--trials", type=int, help="noise trials per level (default 30)")
    sub.add_argument("--seed", type=int, help="master seed (default 42)")
    sub.add_argument("--md-nodes", help="node file path; may contain the {n} placeholder")
    sub.add_argument("--eval-order", type=int, help="order of the error evaluation rule")
    sub.add_argument("--out", help="write the result CSV to this path")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="sphqi",
        description="Spherical quasi-interpolation experiments",
    )
    subparsers = parser.add_subparsers(dest="command")
    for name, help_text in (
        ("converge", "quasi-interpolation error ladder"),
        ("noise", "noisy-data comparison against hyperinterpolation"),
        ("timing", "wall-clock comparison over a node ladder"),
    ):
        sub = subparsers.add_parser(name, help=help_text)
        _add_common_flags(sub)
    coeffs = subparsers.add_parser("coeffs", help="dump a kernel coefficient table")
    coeffs.add_argument("--config", help="key=value config file (flags override it)")
    coeffs.add_argument("--kernel", help="kernel spec including rho, e.g. gaussian:rho=0.1")
    coeffs.add_argument("--ellmax", type=int, help="largest degree to dump (default 50)")
    coeffs.add_argument("--out", help="write the table CSV to this path")
    quadcheck = subparsers.add_parser("quadcheck", help="verify quadrature exactness")
    quadcheck.add_argument("--config", help="key=value config file (flags override it)")
    quadcheck.add_argument("--n", help="comma-separated rule orders to check")
    quadcheck.add_argument("--md-nodes", help="check this node file instead of product rules")
    return parser


def _resolve(args, key, defaults, convert=None):
    """Precedence: explicit flag > config file > per-command default."""
    value = getattr(args, key, None)
    if value is None:
        value = args._config_values.get(key)
    if value is None:
        value = defaults.get(key)
    if value is None:
        return None
    return convert(value) if convert else value


def _experiment_config(args, command):
    defaults = dict(_EXPERIMENT_DEFAULTS[command])
    kwargs = {
        "experiment": command,
        "kernel": _resolve(args, "kernel", defaults),
        "target": _resolve(args, "target", defaults),
        "n_list": _resolve(args, "n", defaults, _parse_int_list),
        "rho_exp": _resolve(args, "rho_exp", defaults, float) or -0.5,
        "seed": _resolve(args, "seed", defaults, int),
        "md_nodes": _resolve(args, "md_nodes", defaults),
        "out": _resolve(args, "out", defaults),
    }
    if kwargs["seed"] is None:
        kwargs["seed"] = 42
    rho_c = _resolve(args, "rho_c", defaults, float)
    if rho_c is not None:
        kwargs["rho_c"] = rho_c
    trials = _resolve(args, "trials", defaults, int)
    if trials is not None:
        kwargs["trials"] = trials
    noise = _resolve(args, "noise", defaults, _parse_float_list)
    if noise is not None:
        kwargs["noise_levels"] = noise
    eval_order = _resolve(args, "eval_order", defaults, int)
    if eval_order is not None:
        kwargs["eval_order"] = eval_order
    return ExperimentConfig(**kwargs)


def _cmd_experiment(args, command):
    cfg = _experiment_config(args, command)
    runner = {"converge": run_convergence, "noise": run_noise, "timing": run_timing}[
        command
    ]
    rows = runner(cfg)
    print(format_rows(rows))
    if cfg.out:
        write_csv(rows, cfg.out)
        print(f"wrote {cfg.out}")
    return 0


def _cmd_coeffs(args):
    kernel_text = _resolve(args, "kernel", {})
    if not kernel_text:
        raise ConfigError("coeffs requires --kernel with an explicit rho")
    ellmax = _resolve(args, "ellmax", {"ellmax": 50}, int)
    spec = parse_kernel(kernel_text)
    kernel = spec.build()
    table = kernel.coefficient_table(ellmax)
    if not all(map(lambda v: v == v and abs(v) != float("inf"), table)):
        raise NumericFailure("coefficient table contains non-finite entries")
    lines = ["ell,coefficient"]
    lines.extend(f"{ell},{val:.12g}" for ell, val in enumerate(table))
    text = "\n".join(lines) + "\n"
    out = _resolve(args, "out", {})
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"wrote {out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_quadcheck(args):
    md = _resolve(args, "md_nodes", {})
    n_text = _resolve(args, "n", {"n": "24"})
    n_values = _parse_int_list(n_text)
    if md:
        rule = load_md_nodes(md)
        nmax = n_values[0] if n_values else rule.order
        residual = verify_exactness(rule, nmax)
        print(
            f"file {md}: nodes {rule.size}, declared order {rule.order}, "
            f"max residual through degree {nmax}: {residual:.3e}"
        )
        if residual != residual:
            raise NumericFailure("exactness residual is NaN")
        return 0
    for n in n_values:
        rule = product_rule_s2(n)
        residual = verify_exactness(rule, n)
        if residual != residual:
            raise NumericFailure("exactness residual is NaN")
        print(
            f"product rule order {n}: nodes {rule.size}, "
            f"max residual {residual:.3e}"
        )
    return 0


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        args._config_values = (
            _load_config_file(args.config) if getattr(args, "config", None) else {}
        )
        if args.command in _EXPERIMENT_DEFAULTS:
            return _cmd_experiment(args, args.command)
        if args.command == "coeffs":
            return _cmd_coeffs(args)
        return _cmd_quadcheck(args)
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
