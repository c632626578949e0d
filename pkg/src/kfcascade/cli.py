"""Command-line entry point.

Examples::

    kfcascade fixpoints --setup both
    kfcascade mse --K 1000 --seeds 0-49 --out results
    kfcascade trace --K 10000 --inits 0.1,3.7075,50 --out results
    kfcascade verify --out results

Settings resolve as defaults, then ``--config FILE``, then explicit flags.
A config file holds ``key=value`` lines with ``#`` comments, lists are
comma separated and seed ranges may be written ``lo-hi``. The
``manifest.txt`` written next to every output is itself a valid config file.
"""

from __future__ import annotations

import argparse
import csv
import math
import secrets
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .chain import Setup
from .errors import ParameterError
from .experiments import (AgentComparison, CoverageResult, ExperimentConfig, ExperimentReport,
                          VarianceTrace, coverage_from_results, paired_comparison, run_convergence_trace,
                          _run_seeds, _summarize, validate_config)
from .model import RNG_NAME, ModelParams, Trajectory, simulate, validate
from .riccati import DEFAULT_TOL, FixedPointReport, WomMethod, pp_cascade_fixed_points, wom_fixed_point

SUBCOMMANDS = ("simulate", "fixpoints", "mse", "trace", "coverage", "compare", "verify")
SETUP_ORDER = {Setup.PP: 0, Setup.WOM: 1}
DEFAULT_N_SEEDS = 50

# settings a config file may carry; metadata keys come from manifests and are ignored
CONFIG_KEYS = ("a", "q", "s", "m", "p0", "x0", "K", "seeds", "setup", "inits", "tol",
               "burn_in", "agent", "n_sigma", "workers")
METADATA_KEYS = ("command", "tool_version", "timestamp", "rng", "numpy_version", "out", "config")

DEFAULTS = {
    "a": 0.95, "q": 1.0, "s": "1,1,1", "m": None, "p0": 3.0, "x0": 25.0, "K": 1000,
    "seeds": None, "setup": "both", "inits": "0.1,3.7075,50", "tol": DEFAULT_TOL,
    "burn_in": 0, "agent": None, "n_sigma": 3.0, "workers": 1,
}


class CliError(Exception):
    def __init__(self, message, code=2):
        super().__init__(message)
        self.code = code


def fmt(x) -> str:
    return f"{float(x):.12g}"


# -- configuration -----------------------------------------------------------

def read_config(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key in METADATA_KEYS:
            continue
        if key not in CONFIG_KEYS:
            raise CliError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value
    return values


def parse_float_list(text, name) -> list[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise CliError(f"{name} must be a comma-separated list of numbers") from exc


def parse_seeds(text) -> list[int]:
    seeds = []
    try:
        for part in str(text).split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = part.split("-", 1)
                seeds.extend(range(int(lo), int(hi) + 1))
            elif part:
                seeds.append(int(part))
    except ValueError as exc:
        raise CliError("seeds must be non-negative integers or lo-hi ranges") from exc
    if not seeds:
        raise CliError("seeds list is empty")
    return seeds


def _number(value, name, kind=float):
    try:
        return kind(value)
    except (TypeError, ValueError) as exc:
        raise CliError(f"{name} must be a number") from exc


@dataclass
class RunManifest:
    command: str
    config: ExperimentConfig
    settings: dict
    out: Path | None
    config_path: str | None = None
    seeds_generated: bool = False
    tool_version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    @property
    def params(self) -> ModelParams:
        return self.config.params

    def lines(self) -> list[str]:
        cfg = self.config
        p = cfg.params
        return [
            f"command={self.command}",
            f"tool_version={self.tool_version}",
            f"timestamp={self.timestamp}",
            f"rng={RNG_NAME}",
            f"numpy_version={np.__version__}",
            f"a={fmt(p.a)}",
            f"q={fmt(p.q)}",
            f"s={','.join(fmt(v) for v in p.s)}",
            f"p0={fmt(p.prior_var)}",
            f"x0={fmt(p.prior_mean)}",
            f"K={cfg.K}",
            f"seeds={','.join(str(s) for s in cfg.seeds)}",
            f"setup={self.settings['setup']}",
            f"inits={','.join(fmt(v) for v in cfg.initial_pred_vars)}",
            f"tol={fmt(self.settings['tol'])}",
            f"burn_in={cfg.burn_in}",
            f"n_sigma={fmt(self.settings['n_sigma'])}",
        ] + ([f"agent={self.settings['agent']}"] if self.settings.get("agent") else [])

    def write(self, directory: Path) -> Path:
        path = directory / "manifest.txt"
        path.write_text("\n".join(self.lines()) + "\n", encoding="utf-8")
        return path


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="key=value settings file")
    common.add_argument("--a", help="state transition coefficient, in (-1,1)")
    common.add_argument("--q", help="process-noise variance")
    common.add_argument("--s", help="comma-separated injected-noise variances, one per agent")
    common.add_argument("--m", help="number of agents (replicates a single --s value)")
    common.add_argument("--p0", help="prior variance of x0")
    common.add_argument("--x0", help="prior mean of x0")
    common.add_argument("--K", help="horizon")
    common.add_argument("--seeds", help="seed list, e.g. 0-49 or 1,5,9")
    common.add_argument("--seed", dest="seeds", help="single seed (alias of --seeds)")
    common.add_argument("--setup", choices=["pp", "wom", "both"], type=str.lower)
    common.add_argument("--inits", help="initial prediction variances for traces")
    common.add_argument("--tol", help="fixed-point tolerance")
    common.add_argument("--burn-in", dest="burn_in", help="steps discarded before averaging")
    common.add_argument("--agent", help="agent index for coverage (default: last)")
    common.add_argument("--n-sigma", dest="n_sigma", help="coverage band half-width in std devs")
    common.add_argument("--workers", help="processes for seed-parallel work")
    common.add_argument("--out", metavar="DIR", help="directory for CSV outputs and the manifest")

    parser = argparse.ArgumentParser(prog="kfcascade",
                                     description="PP and WoM cascades of scalar Kalman filter agents")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "simulate": "draw one seeded trajectory and its noise",
        "fixpoints": "stationary variances and gains",
        "mse": "Monte Carlo MSE of predictions and posteriors",
        "trace": "variance and gain paths from several initial conditions",
        "coverage": "n-sigma coverage of one-step-ahead predictions",
        "compare": "paired WoM minus PP MSE per agent",
        "verify": "re-read CSV outputs in --out and check invariants",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def parse_args(argv=None) -> RunManifest:
    args = build_parser().parse_args(argv)
    settings = dict(DEFAULTS)
    config_path = args.config
    if config_path:
        settings.update(read_config(config_path))
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value

    s = parse_float_list(settings["s"], "s")
    if settings["m"] is not None:
        m = _number(settings["m"], "m", int)
        if len(s) == 1:
            s = s * m
        elif len(s) != m:
            raise CliError(f"m={m} does not match the {len(s)} values given for s")
    params = ModelParams(a=_number(settings["a"], "a"), q=_number(settings["q"], "q"), s=tuple(s),
                         prior_mean=_number(settings["x0"], "x0"), prior_var=_number(settings["p0"], "p0"))
    try:
        validate(params)
    except ParameterError as exc:
        raise CliError(str(exc)) from exc

    generated = settings["seeds"] is None
    if generated:
        base = secrets.randbits(31)
        seeds = list(range(base, base + DEFAULT_N_SEEDS))
    else:
        seeds = parse_seeds(settings["seeds"])

    setups = {"pp": (Setup.PP,), "wom": (Setup.WOM,), "both": (Setup.PP, Setup.WOM)}.get(
        str(settings["setup"]).lower())
    if setups is None:
        raise CliError(f"setup must be pp, wom or both, not {settings['setup']!r}")
    settings["tol"] = _number(settings["tol"], "tol")
    settings["n_sigma"] = _number(settings["n_sigma"], "n_sigma")
    if not settings["tol"] > 0:
        raise CliError("tol must be positive")
    if not settings["n_sigma"] > 0:
        raise CliError("n_sigma must be positive")
    if settings["agent"] is not None:
        settings["agent"] = _number(settings["agent"], "agent", int)
        if not 1 <= settings["agent"] <= params.m:
            raise CliError(f"agent must lie in 1..{params.m}")

    config = ExperimentConfig(params=params, K=_number(settings["K"], "K", int), seeds=tuple(seeds),
                              initial_pred_vars=tuple(parse_float_list(settings["inits"], "inits")),
                              setups=setups, burn_in=_number(settings["burn_in"], "burn_in", int),
                              workers=_number(settings["workers"], "workers", int))
    try:
        validate_config(config)
    except ParameterError as exc:
        raise CliError(str(exc)) from exc
    out = Path(args.out) if args.out else None
    return RunManifest(args.command, config, settings, out, config_path, generated)


# -- CSV output --------------------------------------------------------------

def _write_rows(path: Path, header, rows) -> Path:
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}", code=1) from exc
    return path


def _require_setups(items):
    if not items:
        raise CliError("no setup selected")


def emit_csv(report, destination) -> list[Path]:
    """Write the CSV table(s) for ``report`` into directory ``destination``."""
    dest = Path(destination)
    try:
        dest.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create {dest}: {exc.strerror or exc}", code=1) from exc

    if isinstance(report, ExperimentReport):
        _require_setups(report.setups)
        stats = sorted(report.setups.values(), key=lambda st: SETUP_ORDER[st.setup])
        mse_rows = [[st.setup.value, ag.agent, fmt(ag.mse_pred), fmt(ag.mse_post),
                     fmt(ag.stderr_pred), fmt(ag.stderr_post)] for st in stats for ag in st.agents]
        cov_rows = [[st.setup.value, ag.agent, fmt(3.0), fmt(ag.coverage_3sigma), fmt(ag.coverage_stderr)]
                    for st in stats for ag in st.agents]
        return [
            _write_rows(dest / "mse.csv",
                        ["setup", "agent", "mse_pred", "mse_post", "stderr_pred", "stderr_post"], mse_rows),
            _write_rows(dest / "coverage.csv", ["setup", "agent", "n_sigma", "coverage", "stderr"], cov_rows),
        ]
    if isinstance(report, Trajectory):
        m = report.injected_noise.shape[1]
        rows = [[0, fmt(report.initial_state), "", *[""] * m]]
        rows += [[k + 1, fmt(report.states[k]), fmt(report.process_noise[k]),
                  *[fmt(v) for v in report.injected_noise[k]]] for k in range(report.horizon)]
        return [_write_rows(dest / "trajectory.csv",
                            ["k", "state", "process_noise", *[f"v{i + 1}" for i in range(m)]], rows)]
    if isinstance(report, dict):
        items = sorted(report.values(), key=lambda c: SETUP_ORDER[c.setup])
        _require_setups(items)
        if not all(isinstance(c, CoverageResult) for c in items):
            raise TypeError("dict reports must map setups to CoverageResult")
        rows = [[c.setup.value, c.agent, fmt(c.n_sigma), fmt(c.fraction), fmt(c.stderr)] for c in items]
        return [_write_rows(dest / "coverage.csv", ["setup", "agent", "n_sigma", "coverage", "stderr"], rows)]

    items = list(report)
    _require_setups(items)
    first = items[0]
    if isinstance(first, FixedPointReport):
        items.sort(key=lambda r: SETUP_ORDER[r.setup])
        rows = [[r.setup.value, ag.agent, fmt(ag.p_inf), fmt(ag.alpha_inf), fmt(ag.r_inf), fmt(ag.p_post_inf)]
                for r in items for ag in r.agents]
        return [_write_rows(dest / "fixpoints.csv",
                            ["setup", "agent", "p_inf", "alpha_inf", "r_inf", "p_post_inf"], rows)]
    if isinstance(first, VarianceTrace):
        items.sort(key=lambda t: (SETUP_ORDER[t.setup], t.init_id))
        rows = []
        for setup in sorted({t.setup for t in items}, key=SETUP_ORDER.get):
            traces = [t for t in items if t.setup is setup]
            m = traces[0].p_pred.shape[1]
            for i in range(m):
                for k in range(traces[0].p_pred.shape[0]):
                    for t in traces:
                        rows.append([setup.value, i + 1, k + 1, t.init_id, fmt(t.p_pred[k, i]),
                                     fmt(t.gain[k, i]), fmt(t.p_post[k, i])])
        return [_write_rows(dest / "trace.csv", ["setup", "agent", "k", "init_id", "p_pred", "gain", "p_post"], rows)]
    if isinstance(first, AgentComparison):
        rows = [[c.agent, fmt(c.pred_diff), fmt(c.pred_diff_stderr), c.pred_verdict,
                 fmt(c.post_diff), fmt(c.post_diff_stderr), c.post_verdict] for c in items]
        return [_write_rows(dest / "compare.csv",
                            ["agent", "pred_diff", "pred_diff_stderr", "pred_verdict",
                             "post_diff", "post_diff_stderr", "post_verdict"], rows)]
    raise TypeError(f"cannot emit CSV for {type(first).__name__}")


# -- verification of emitted CSVs --------------------------------------------

def _read_csv(path: Path) -> list[dict]:
    with path.open(newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def verify_outputs(directory, params: ModelParams) -> list[str]:
    """Re-read CSVs in ``directory``; return a list of violated invariants."""
    d = Path(directory)
    problems: list[str] = []
    found = False
    a, q = params.a, params.q

    if (d / "fixpoints.csv").exists():
        found = True
        rows = _read_csv(d / "fixpoints.csv")
        by_setup: dict[str, list[dict]] = {}
        for row in rows:
            by_setup.setdefault(row["setup"], []).append(row)
            p, al, post = float(row["p_inf"]), float(row["alpha_inf"]), float(row["p_post_inf"])
            tag = f"fixpoints {row['setup']} agent {row['agent']}"
            if not 0 < al < 1:
                problems.append(f"{tag}: gain {al} outside (0,1)")
            if not -1 < (1 - al) * a < 1:
                problems.append(f"{tag}: (1-alpha) a outside (-1,1)")
            if not math.isclose(post, p * (1 - al), rel_tol=1e-9):
                problems.append(f"{tag}: p_post_inf != p_inf (1 - alpha_inf)")
        pp = sorted(by_setup.get("PP", []), key=lambda r: int(r["agent"]))
        for lo, hi in zip(pp, pp[1:]):
            if not float(lo["p_inf"]) < float(hi["p_inf"]):
                problems.append(f"fixpoints PP: p_inf not increasing at agent {hi['agent']}")
            if not float(lo["r_inf"]) < float(hi["r_inf"]):
                problems.append(f"fixpoints PP: r_inf not increasing at agent {hi['agent']}")
        wom = by_setup.get("WoM", [])
        if wom:
            shared = {row["p_inf"] for row in wom}
            if len(shared) != 1:
                problems.append("fixpoints WoM: agents do not share p_inf")
            p = float(wom[0]["p_inf"])
            if a != 0 and not q < p < q / (1 - a * a):
                problems.append(f"fixpoints WoM: p_inf {p} outside (q, q/(1-a^2))")

    if (d / "mse.csv").exists():
        found = True
        for row in _read_csv(d / "mse.csv"):
            for key in ("mse_pred", "mse_post", "stderr_pred", "stderr_post"):
                if not float(row[key]) >= 0:
                    problems.append(f"mse {row['setup']} agent {row['agent']}: {key} negative")

    if (d / "coverage.csv").exists():
        found = True
        for row in _read_csv(d / "coverage.csv"):
            if not 0 <= float(row["coverage"]) <= 1:
                problems.append(f"coverage {row['setup']} agent {row['agent']}: outside [0,1]")

    if (d / "trace.csv").exists():
        found = True
        shared: dict[tuple, set] = {}
        for row in _read_csv(d / "trace.csv"):
            g, pp_, po = float(row["gain"]), float(row["p_pred"]), float(row["p_post"])
            if not 0 < g < 1:
                problems.append(f"trace {row['setup']} agent {row['agent']} k {row['k']}: gain outside (0,1)")
            if not po < pp_:
                problems.append(f"trace {row['setup']} agent {row['agent']} k {row['k']}: no posterior contraction")
            if row["setup"] == "WoM":
                shared.setdefault((row["init_id"], row["k"]), set()).add(row["p_pred"])
        if any(len(v) > 1 for v in shared.values()):
            problems.append("trace WoM: agents do not share p_pred")

    if (d / "trajectory.csv").exists():
        found = True
        traj = _read_csv(d / "trajectory.csv")
        prev = float(traj[0]["state"]) if traj else 0.0
        for row in traj[1:]:
            x, w = float(row["state"]), float(row["process_noise"])
            # values carry 12 significant digits
            if not math.isclose(x, a * prev + w, rel_tol=1e-9, abs_tol=1e-9 * (abs(prev) + abs(w))):
                problems.append(f"trajectory k {row['k']}: state does not follow the AR(1) recursion")
            prev = x

    if (d / "compare.csv").exists():
        found = True
        for row in _read_csv(d / "compare.csv"):
            float(row["pred_diff"]), float(row["post_diff"])

    if not found:
        problems.append(f"no CSV outputs found in {d}")
    return problems


# -- subcommands -------------------------------------------------------------

def _fixpoint_reports(man: RunManifest) -> list[FixedPointReport]:
    tol = man.settings["tol"]
    reports = []
    for setup in man.config.setups:
        if setup is Setup.PP:
            reports.append(pp_cascade_fixed_points(man.params))
        else:
            bis = wom_fixed_point(man.params, WomMethod.BISECTION, tol=tol)
            it = wom_fixed_point(man.params, WomMethod.CONTRACTION, tol=tol)
            if it.converged and abs(it.p_inf[0] - bis.p_inf[0]) > 1e-9 * max(1.0, bis.p_inf[0]):
                raise CliError("WoM bisection and iteration disagree", code=1)
            reports.append(bis)
    return reports


def _residuals_ok(reports) -> bool:
    return all(r.residual < 1e-10 for r in reports)


def _print_table(title, columns, rows, out):
    print(title, file=out)
    print("agent  " + "  ".join(f"{c:>12}" for c in columns), file=out)
    for agent, values in rows:
        print(f"{agent:<5}  " + "  ".join(f"{v:>12.6f}" for v in values), file=out)


def cmd_fixpoints(man: RunManifest, out) -> int:
    reports = _fixpoint_reports(man)
    names = [r.setup.value for r in reports]
    _print_table("Fixed points - prediction error variance", names,
                 [(i + 1, [r.p_inf[i] for r in reports]) for i in range(man.params.m)], out)
    _print_table("Fixed points - Kalman gain", names,
                 [(i + 1, [r.alpha_inf[i] for r in reports]) for i in range(man.params.m)], out)
    _print_table("Fixed points - posterior variance", names,
                 [(i + 1, [r.p_post_inf[i] for r in reports]) for i in range(man.params.m)], out)
    if man.out:
        emit_csv(reports, man.out)
    return 0 if _residuals_ok(reports) else 1


def cmd_simulate(man: RunManifest, out) -> int:
    seed = man.config.seeds[0]
    traj = simulate(man.params, man.config.K, seed)
    print(f"seed {seed}: K={traj.horizon}, x0={traj.initial_state:.6f}, "
          f"final state={traj.states[-1]:.6f}", file=out)
    if man.out:
        emit_csv(traj, man.out)
    return 0


def cmd_mse(man: RunManifest, out) -> int:
    report = _summarize(man.config, _run_seeds(man.config))
    cols = []
    for setup, st in sorted(report.setups.items(), key=lambda kv: SETUP_ORDER[kv[0]]):
        cols += [(f"{setup.value} pred", st.mse_pred), (f"{setup.value} post", st.mse_post)]
    print(f"{len(man.config.seeds)} seeds, K={man.config.K}", file=out)
    _print_table("MSE", [c[0] for c in cols],
                 [(i + 1, [c[1][i] for c in cols]) for i in range(man.params.m)], out)
    if man.out:
        emit_csv(report, man.out)
    ok = all(st.fixed_points.residual < 1e-10 for st in report.setups.values())
    return 0 if ok else 1


def cmd_trace(man: RunManifest, out) -> int:
    traces = run_convergence_trace(man.config)
    fps = {r.setup: r for r in _fixpoint_reports(man)}
    for t in traces:
        gap = float(np.max(np.abs(t.terminal_pred_var - np.asarray(fps[t.setup].p_inf))))
        print(f"{t.setup.value} init {t.init_pred_var:g}: terminal p_pred "
              f"{', '.join(f'{v:.6f}' for v in t.terminal_pred_var)} (max gap {gap:.2e})", file=out)
    if man.out:
        emit_csv(traces, man.out)
    return 0


def cmd_coverage(man: RunManifest, out) -> int:
    agent = man.settings.get("agent") or man.params.m
    results = coverage_from_results(man.config, _run_seeds(man.config), agent, man.settings["n_sigma"])
    for c in sorted(results.values(), key=lambda c: SETUP_ORDER[c.setup]):
        print(f"{c.setup.value} agent {agent}: {c.n_sigma:g}-sigma coverage {c.fraction:.4f} "
              f"(stderr {c.stderr:.4f})", file=out)
    if man.out:
        emit_csv(results, man.out)
    return 0


def cmd_compare(man: RunManifest, out) -> int:
    if set(man.config.setups) != {Setup.PP, Setup.WOM}:
        raise CliError("compare needs --setup both")
    report = _summarize(man.config, _run_seeds(man.config))
    rows = paired_comparison(man.config, report)
    for c in rows:
        print(f"agent {c.agent}: prediction {c.pred_verdict} ({c.pred_diff:+.4f} +/- {c.pred_diff_stderr:.4f}), "
              f"posterior {c.post_verdict} ({c.post_diff:+.4f} +/- {c.post_diff_stderr:.4f})", file=out)
    if man.out:
        emit_csv(rows, man.out)
    return 0


def cmd_verify(man: RunManifest, out) -> int:
    if man.out is None:
        raise CliError("verify needs --out DIR")
    params = man.params
    manifest = man.out / "manifest.txt"
    if manifest.exists() and not man.config_path:
        values = read_config(manifest)
        params = ModelParams(a=float(values.get("a", params.a)), q=float(values.get("q", params.q)),
                             s=tuple(parse_float_list(values.get("s", "1"), "s")),
                             prior_mean=float(values.get("x0", params.prior_mean)),
                             prior_var=float(values.get("p0", params.prior_var)))
    problems = verify_outputs(man.out, params)
    for msg in problems:
        print(f"FAIL {msg}", file=out)
    if not problems:
        print(f"OK {man.out}", file=out)
    return 1 if problems else 0


COMMANDS = {
    "simulate": cmd_simulate, "fixpoints": cmd_fixpoints, "mse": cmd_mse, "trace": cmd_trace,
    "coverage": cmd_coverage, "compare": cmd_compare, "verify": cmd_verify,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        man = parse_args(argv)
        code = COMMANDS[man.command](man, out)
        if man.out and man.command != "verify":
            man.write(man.out)
        return code
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except CliError as exc:
        print(f"kfcascade: error: {exc}", file=sys.stderr)
        return exc.code
    except ParameterError as exc:
        print(f"kfcascade: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
