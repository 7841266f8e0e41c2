"""Experiment harness: convergence, noise and timing studies plus CSV output.

Every run is driven by an ExperimentConfig and returns a list of ResultRow
records with the fixed schema

    experiment, n, nodes, rho, method, error, rate, time_s

where ``rate`` is the observed order between consecutive rungs of the same
method sequence (empty for the first rung) and ``rho`` is empty for methods
without a kernel scale.  With a fixed config and seed the emitted CSV is
byte-identical across runs except for the ``time_s`` column.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, replace

import numpy as np

from .estimators import Hyperinterpolator, SphericalQuasiInterpolator
from .kernels import KernelSpec, parse_kernel
from .metrics import discrete_l2_error, rmse
from .quadrature import load_md_nodes, product_rule_s2
from .targets import TARGET_NAMES, make_target

__all__ = [
    "ConfigError",
    "NumericFailure",
    "ExperimentConfig",
    "ResultRow",
    "run_convergence",
    "run_noise",
    "run_timing",
    "run_experiment",
    "write_csv",
    "format_rows",
    "CSV_HEADER",
]

CSV_HEADER = ("experiment", "n", "nodes", "rho", "method", "error", "rate", "time_s")

# Scale-rule prefactors rho = c * n^(-1/2) keyed by (base family, order s).
DEFAULT_RHO_C = {
    ("poisson", 1): 1.0,
    ("gaussian", 2): 0.4,
    ("gaussian", 4): 0.7,
    ("gaussian", 6): 1.0,
    ("cs", 2): 1.5,
    ("cs", 4): 3.0,
    ("cs", 6): 4.0,
}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class NumericFailure(RuntimeError):
    """A computed quantity came out non-finite."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Configuration shared by all experiment runners."""

    experiment: str
    kernel: str = "gaussian"
    target: str = "f1"
    n_list: tuple = (10, 20, 40, 80, 160)
    rho_c: float | None = None
    rho_exp: float = -0.5
    noise_levels: tuple = (0.001, 0.01, 0.1, 0.3, 0.5)
    trials: int = 30
    seed: int = 42
    eval_order: int | None = None
    rmse_points: int = 20000
    timing_repeats: int = 3
    timing_points: int = 2000
    md_nodes: str | None = None
    out: str | None = None

    def validated(self):
        if self.experiment not in ("converge", "noise", "timing"):
            raise ConfigError(f"unknown experiment '{self.experiment}'")
        n_list = tuple(int(n) for n in self.n_list)
        if not n_list or any(n < 1 for n in n_list):
            raise ConfigError(f"n_list must contain positive integers, got {n_list}")
        if any(b <= a for a, b in zip(n_list, n_list[1:])):
            raise ConfigError(f"n_list must be strictly increasing, got {n_list}")
        deltas = tuple(float(d) for d in self.noise_levels)
        if any(d < 0 for d in deltas):
            raise ConfigError(f"noise levels must be >= 0, got {deltas}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.target not in TARGET_NAMES:
            raise ConfigError(
                f"unknown target '{self.target}' (choose from {TARGET_NAMES})"
            )
        if self.eval_order is not None and self.eval_order <= max(n_list):
            raise ConfigError(
                f"eval_order={self.eval_order} must exceed max(n_list)={max(n_list)}; "
                f"default is 2 * max(n_list) + 21"
            )
        if self.rho_c is not None and self.rho_c <= 0:
            raise ConfigError(f"rho_c must be positive, got {self.rho_c}")
        try:
            spec = parse_kernel(self.kernel)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return replace(self, n_list=n_list, noise_levels=deltas), spec


@dataclass
class ResultRow:
    """One record of the fixed CSV schema."""

    experiment: str
    n: int
    nodes: int
    rho: float | None
    method: str
    error: float | None
    rate: float | None = None
    time_s: float | None = None


def _rho_prefactor(cfg, spec: KernelSpec):
    if cfg.rho_c is not None:
        return float(cfg.rho_c)
    family = spec.params.get("base", "gaussian") if spec.family == "ho" else spec.family
    try:
        return DEFAULT_RHO_C[(family, spec.order)]
    except KeyError:
        raise ConfigError(
            f"no default scale prefactor for family '{family}' with order "
            f"{spec.order}; pass rho_c explicitly"
        ) from None


def _rule_for(cfg, n):
    """Quadrature rule for ladder parameter n: product rule of order 2n, or MD file.

    An ``md_nodes`` path containing the placeholder ``{n}`` is formatted per
    rung; otherwise the same file backs every rung.
    """
    if cfg.md_nodes:
        path = cfg.md_nodes.replace("{n}", str(n)) if "{n}" in cfg.md_nodes else cfg.md_nodes
        try:
            return load_md_nodes(path)
        except OSError as exc:
            raise ConfigError(f"cannot read node file {path}: {exc}") from exc
    return product_rule_s2(2 * n)


def _require_finite(value, what):
    if value is None:
        return value
    if not math.isfinite(value):
        raise NumericFailure(f"{what} is not finite ({value!r})")
    return float(value)


def _attach_rates(rows):
    """Fill the rate column within each (method) sequence, ordered as emitted."""
    prev = {}
    for row in rows:
        key = row.method
        if key in prev:
            p_n, p_err = prev[key]
            if row.error and p_err and row.error > 0 and p_err > 0 and row.n != p_n:
                row.rate = math.log(p_err / row.error) / math.log(row.n / p_n)
        prev[key] = (row.n, row.error)
    return rows


def _uniform_sphere(rng, count):
    raw = rng.normal(size=(count, 3))
    return raw / np.linalg.norm(raw, axis=1)[:, None]


def run_convergence(cfg):
    """Quasi-interpolation error ladder against a reference evaluation rule.

    The reference rule deliberately has an order offset from every fit rule
    (default 2 * max(n_list) + 21): sharing the exact node set with the
    finest fit rule would let the part of the error the fit rule cannot
    resolve correlate with the evaluation nodes and bias the reported norm.
    """
    cfg, spec = cfg.validated()
    target = make_target(cfg.target, cfg.seed)
    c = _rho_prefactor(cfg, spec)
    eval_order = cfg.eval_order or 2 * max(cfg.n_list) + 21
    eval_rule = product_rule_s2(eval_order)
    ref = target(eval_rule.points)
    rows = []
    for n in cfg.n_list:
        tic = time.perf_counter()
        rule = _rule_for(cfg, n)
        rho = c * n**cfg.rho_exp
        kernel = spec.build(rho=rho)
        qi = SphericalQuasiInterpolator(kernel=kernel).fit_function(rule, target)
        err = discrete_l2_error(qi.predict(eval_rule.points), ref, eval_rule)
        toc = time.perf_counter()
        rows.append(
            ResultRow(
                experiment="converge",
                n=n,
                nodes=rule.size,
                rho=rho,
                method="qi",
                error=_require_finite(err, f"error at n={n}"),
                time_s=toc - tic,
            )
        )
    return _attach_rates(rows)


def run_noise(cfg):
    """Noisy-data comparison of quasi-interpolation against hyperinterpolation.

    For each rung n and noise level delta: sample the target at the rung's
    quadrature nodes, add i.i.d. centered Gaussian noise of standard
    deviation delta (independent per trial, seeds derived from the master
    seed), rebuild both approximants and average the RMSE on a fixed fine
    point set over the trials.  All trials of a rung are evaluated in one
    batched pass.
    """
    cfg, spec = cfg.validated()
    target = make_target(cfg.target, cfg.seed)
    c = _rho_prefactor(cfg, spec)
    ss_points, ss_noise = np.random.SeedSequence(cfg.seed).spawn(2)
    eval_points = _uniform_sphere(np.random.default_rng(ss_points), cfg.rmse_points)
    ref = target(eval_points)
    rung_seeds = ss_noise.spawn(len(cfg.n_list))
    rows = []
    for n, rung_ss in zip(cfg.n_list, rung_seeds):
        rule = _rule_for(cfg, n)
        rho = c * n**cfg.rho_exp
        kernel = spec.build(rho=rho)
        clean = target(rule.points)
        level_seeds = rung_ss.spawn(len(cfg.noise_levels))
        for delta, level_ss in zip(cfg.noise_levels, level_seeds):
            noise = np.empty((rule.size, cfg.trials))
            for tcol, trial_ss in enumerate(level_ss.spawn(cfg.trials)):
                noise[:, tcol] = np.random.default_rng(trial_ss).normal(
                    0.0, 1.0, size=rule.size
                )
            samples = clean[:, None] + delta * noise
            label = f"[d={delta:g}]"

            tic = time.perf_counter()
            qi = SphericalQuasiInterpolator(kernel=kernel).fit(
                rule.points, samples, sample_weight=rule.weights
            )
            qi_pred = qi.predict(eval_points)
            t_qi = time.perf_counter() - tic

            tic = time.perf_counter()
            hyper = Hyperinterpolator(degree=n).fit(
                rule.points, samples, sample_weight=rule.weights
            )
            hyper_pred = hyper.predict(eval_points)
            t_hyper = time.perf_counter() - tic

            qi_err = float(np.mean(np.sqrt(np.mean((qi_pred - ref[:, None]) ** 2, axis=0))))
            hyper_err = float(
                np.mean(np.sqrt(np.mean((hyper_pred - ref[:, None]) ** 2, axis=0)))
            )
            rows.append(
                ResultRow(
                    experiment="noise",
                    n=n,
                    nodes=rule.size,
                    rho=rho,
                    method=f"qi{label}",
                    error=_require_finite(qi_err, f"qi rmse at n={n}, delta={delta}"),
                    time_s=t_qi,
                )
            )
            rows.append(
                ResultRow(
                    experiment="noise",
                    n=n,
                    nodes=rule.size,
                    rho=None,
                    method=f"hyper{label}",
                    error=_require_finite(
                        hyper_err, f"hyper rmse at n={n}, delta={delta}"
                    ),
                    time_s=t_hyper,
                )
            )
    return _attach_rates(rows)


def run_timing(cfg):
    """Median wall-clock comparison of the two methods over a node ladder.

    Each rung builds and evaluates both approximants ``timing_repeats``
    times on the same seeded evaluation set and reports the median time
    together with the RMSE against the clean target.
    """
    cfg, spec = cfg.validated()
    target = make_target(cfg.target, cfg.seed)
    c = _rho_prefactor(cfg, spec)
    (ss_points,) = np.random.SeedSequence(cfg.seed).spawn(1)
    eval_points = _uniform_sphere(np.random.default_rng(ss_points), cfg.timing_points)
    ref = target(eval_points)
    rows = []
    for n in cfg.n_list:
        rule = _rule_for(cfg, n)
        rho = c * n**cfg.rho_exp
        kernel = spec.build(rho=rho)
        times_qi = []
        times_hyper = []
        qi_err = hyper_err = None
        for _ in range(cfg.timing_repeats):
            tic = time.perf_counter()
            qi = SphericalQuasiInterpolator(kernel=kernel).fit_function(rule, target)
            qi_vals = qi.predict(eval_points)
            times_qi.append(time.perf_counter() - tic)

            tic = time.perf_counter()
            hyper = Hyperinterpolator(degree=n).fit_function(rule, target)
            hyper_vals = hyper.predict(eval_points)
            times_hyper.append(time.perf_counter() - tic)
        qi_err = rmse(qi_vals, ref, eval_points)
        hyper_err = rmse(hyper_vals, ref, eval_points)
        rows.append(
            ResultRow(
                experiment="timing",
                n=n,
                nodes=rule.size,
                rho=rho,
                method="qi",
                error=_require_finite(qi_err, f"qi rmse at n={n}"),
                time_s=float(np.median(times_qi)),
            )
        )
        rows.append(
            ResultRow(
                experiment="timing",
                n=n,
                nodes=rule.size,
                rho=None,
                method="hyper",
                error=_require_finite(hyper_err, f"hyper rmse at n={n}"),
                time_s=float(np.median(times_hyper)),
            )
        )
    return _attach_rates(rows)


_RUNNERS = {"converge": run_convergence, "noise": run_noise, "timing": run_timing}


def run_experiment(cfg):
    """Dispatch a validated config to its runner."""
    cfg_checked, _ = cfg.validated()
    return _RUNNERS[cfg_checked.experiment](cfg)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(rows, path_or_file):
    """Write rows in the fixed schema with 12 significant digits and LF endings."""
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", encoding="utf-8", newline="") if own else path_or_file
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(
                [
                    row.experiment,
                    row.n,
                    row.nodes,
                    _fmt(row.rho),
                    row.method,
                    _fmt(row.error),
                    _fmt(row.rate),
                    _fmt(row.time_s),
                ]
            )
    finally:
        if own:
            fh.close()


def csv_text(rows):
    """The CSV document as a string (exactly what write_csv emits)."""
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def format_rows(rows):
    """Visually aligned table for terminal output."""
    header = list(CSV_HEADER)
    cells = [
        [
            row.experiment,
            str(row.n),
            str(row.nodes),
            _fmt(row.rho) if row.rho is None else f"{row.rho:.4g}",
            row.method,
            "" if row.error is None else f"{row.error:.6e}",
            "" if row.rate is None else f"{row.rate:.2f}",
            "" if row.time_s is None else f"{row.time_s:.3f}",
        ]
        for row in rows
    ]
    widths = [max(len(header[i]), *(len(c[i]) for c in cells)) if cells else len(header[i]) for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    for c in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(c, widths)))
    return "\n".join(lines)
