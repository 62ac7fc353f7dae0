"""Experiment runner: turns declarative configs into CSV tables and SVG
plots wiring all modules together.

Usage: lab <command> --config <path> [--out <dir>] [--threads N]

Grid cells run independently, each deriving its random stream from
(seed, cell_index); results are gathered and written in canonical cell
order, so output bytes do not depend on the thread count.  On failure all
partially written outputs are removed.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import langevin as lv
from . import mixture as mx
from . import remedies as rm
from . import scorematch as sm
from . import stein as st
from . import svgd as sv
from .config import COMMANDS, ConfigError, ExperimentConfig, load_config
from .numerics import make_stream
from .svgplot import PlotSpec, render_svg


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _csv(columns, rows) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _map_cells(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _tag(value: float) -> str:
    return f"{value:g}"


# ---------------------------------------------------------------------------
# command handlers: each returns ({csv name: content}, [(csv, spec, svg)])


def _run_score_plot(cfg: ExperimentConfig):
    mu1 = cfg.get_float("mu1", -4.0)
    mu2 = cfg.get_float("mu2", 4.0)
    sigma = cfg.get_float("sigma", 1.0)
    pi_grid = cfg.get_floats("pi_grid", "0.1, 0.5, 0.9")
    witness_pi1 = cfg.get_float("witness_pi1", 0.5)
    grid_nodes = cfg.get_int("grid_nodes", 801)

    mixtures = [mx.two_component(p1, mu1, mu2, sigma) for p1 in pi_grid]
    window = mx.quadrature_window(*mixtures)
    xs = np.linspace(window.lower, window.upper, grid_nodes)

    columns = ["x"]
    series = [xs]
    for p1, m in zip(pi_grid, mixtures):
        columns += [f"density_pi{_tag(p1)}", f"score_pi{_tag(p1)}"]
        series += [mx.pdf(m, xs), mx.score(m, xs)]
    curves = _csv(columns, list(zip(*series)))

    p = mx.two_component(witness_pi1, mu1, mu2, sigma)
    q = mx.gaussian(mu1, sigma)
    weighted = st.witness_weighted(q, p, xs)
    unweighted = st.witness_unweighted(q, p, xs)
    witness = _csv(
        ["x", "f_weighted", "f_unweighted", "q_pdf", "p_score", "q_score"],
        list(
            zip(
                xs,
                weighted.normalized(),
                unweighted.normalized(),
                mx.pdf(q, xs),
                mx.score(p, xs),
                mx.score(q, xs),
            )
        ),
    )

    density_cols = tuple(c for c in columns if c.startswith("density_"))
    score_cols = tuple(c for c in columns if c.startswith("score_"))
    plots = [
        (
            "curves.csv",
            PlotSpec("dual_axis", x="x", y=density_cols, y2=score_cols, title="densities and scores"),
            "curves.svg",
        ),
        (
            "witness.csv",
            PlotSpec("lines", x="x", y=("f_weighted", "f_unweighted", "q_pdf"), title="optimal witnesses"),
            "witness.svg",
        ),
    ]
    return {"curves.csv": curves, "witness.csv": witness}, plots


def _run_fisher_sweep(cfg: ExperimentConfig):
    separations = cfg.get_floats("separations", "4, 6, 8, 10")
    pi_pairs = cfg.get_pairs("pi_pairs", "0.5:0.9")
    sigma = cfg.get_float("sigma", 1.0)

    rows = _map_cells(
        lambda s: sm.blindness_sweep([s], pi_pairs, sigma), separations, cfg.threads
    )
    flat = [r for chunk in rows for r in chunk]
    content = _csv(
        ["separation", "pi", "pi_prime", "j_pp_prime", "j_q_p", "method", "nodes"],
        [
            (r.separation, r.pi, r.pi_prime, r.j_pp_prime, r.j_q_p, r.method, r.nodes)
            for r in flat
        ],
    )
    plots = [
        (
            "sweep.csv",
            PlotSpec("lines", x="separation", y=("j_pp_prime", "j_q_p"), title="fisher divergence vs separation"),
            "sweep.svg",
        )
    ]
    return {"sweep.csv": content}, plots


def _run_stein_sweep(cfg: ExperimentConfig):
    separations = cfg.get_floats("separations", "4, 6, 8, 10")
    pi1 = cfg.get_float("pi1", 0.5)
    sigma = cfg.get_float("sigma", 1.0)

    def one(s):
        p = mx.two_component(pi1, -s / 2.0, s / 2.0, sigma)
        q = mx.gaussian(-s / 2.0, sigma)
        spec = mx.quadrature_window(q, p)
        w = st.stein_discrepancy(q, p, st.L2_Q_WEIGHTED, spec)
        u = st.stein_discrepancy(q, p, st.L2_UNWEIGHTED, spec)
        return (s, pi1, w.value, u.value, spec.nodes)

    rows = _map_cells(one, separations, cfg.threads)
    content = _csv(["separation", "pi1", "sd_weighted", "sd_unweighted", "nodes"], rows)
    plots = [
        (
            "stein_sweep.csv",
            PlotSpec("lines", x="separation", y=("sd_weighted", "sd_unweighted"), title="stein discrepancy vs separation"),
            "stein_sweep.svg",
        )
    ]
    return {"stein_sweep.csv": content}, plots


def _run_ksd(cfg: ExperimentConfig):
    if not cfg.models:
        raise ConfigError("ksd-run needs a [models] section with one mixture record per key")
    source = cfg.get_mixture("samples_from")
    n = cfg.get_int("n", 10_000)
    bandwidth = cfg.get_float("bandwidth", 1.0)

    samples = mx.sample(source, n, make_stream(cfg.seed, 0))
    kernel = st.KernelSpec(bandwidth)
    labels = list(cfg.models)

    def one(label):
        try:
            model = mx.from_record(cfg.models[label])
        except ValueError as exc:
            raise ConfigError(f"[models] {label}: {exc}") from None
        est = st.ksd_vstat(samples, model, kernel)
        return est

    estimates = _map_cells(one, labels, cfg.threads)
    content = _csv(
        ["index", "model", "value", "std_error", "n", "bandwidth"],
        [
            (i, label, est.value, est.std_error, est.resolution, bandwidth)
            for i, (label, est) in enumerate(zip(labels, estimates))
        ],
    )
    plots = [
        ("ksd.csv", PlotSpec("lines", x="index", y=("value",), title="ksd by model"), "ksd.svg")
    ]
    return {"ksd.csv": content}, plots


def _run_svgd(cfg: ExperimentConfig):
    mu1 = cfg.get_float("mu1", -4.0)
    mu2 = cfg.get_float("mu2", 4.0)
    sigma = cfg.get_float("sigma", 1.0)
    pi1_grid = cfg.get_floats("pi1_grid", "0.5, 0.1")
    cells = cfg.get_pairs("cells", "-4:1, 0:3, 4:1")
    particles = cfg.get_int("particles", 200)
    step_size = cfg.get_float("step_size", 0.1)
    iterations = cfg.get_int("iterations", 2000)
    bandwidth = cfg.get_float("bandwidth", 1.0)
    snapshot_every = cfg.get_int("snapshot_every", 500)
    threshold = cfg.get_float("threshold", (mu1 + mu2) / 2.0)

    run_cfg = sv.SvgdConfig(
        kernel=st.KernelSpec(bandwidth),
        step_size=step_size,
        iterations=iterations,
        snapshot_every=snapshot_every,
    )
    grid = [(p1, mu0, s0) for p1 in pi1_grid for mu0, s0 in cells]

    def one(item):
        index, (p1, mu0, s0) = item
        target = mx.two_component(p1, mu1, mu2, sigma)
        rng = make_stream(cfg.seed, index)
        init = sv.ParticleEnsemble(mu0 + s0 * rng.standard_normal(particles))
        final, snapshots = sv.svgd_run(init, target, run_cfg)
        return init, final, snapshots

    results = _map_cells(one, list(enumerate(grid)), cfg.threads)

    window = mx.quadrature_window(
        *[mx.two_component(p1, mu1, mu2, sigma) for p1 in pi1_grid]
    )
    files: dict[str, str] = {}
    plots = []
    summary_rows = []
    for (p1, mu0, s0), (init, final, snapshots) in zip(grid, results):
        tag = f"pi{_tag(p1)}_mu{_tag(mu0)}_sd{_tag(s0)}"
        summary_rows.append((cfg.seed, mu0, s0, p1, sv.mode_fraction(final, threshold)))
        files[f"snapshots_{tag}.csv"] = _csv(
            ["iteration", "particle_id", "position"],
            [
                (it, pid, pos)
                for it, positions in snapshots
                for pid, pos in enumerate(positions)
            ],
        )
        files[f"positions_{tag}.csv"] = _csv(
            ["phase", "particle_id", "position"],
            [("initial", pid, pos) for pid, pos in enumerate(init.positions)]
            + [("final", pid, pos) for pid, pos in enumerate(final.positions)],
        )
        plots.append(
            (
                f"positions_{tag}.csv",
                PlotSpec(
                    "histogram",
                    value="position",
                    group="phase",
                    lo=window.lower,
                    hi=window.upper,
                    title=f"svgd particles {tag}",
                ),
                f"hist_{tag}.svg",
            )
        )
    files["summary.csv"] = _csv(
        ["seed", "mu0", "sigma0", "pi1", "final_mode_fraction"], summary_rows
    )
    return files, plots


def _run_langevin(cfg: ExperimentConfig):
    target = cfg.get_mixture(
        "target", "weights=0.3,0.7; means=-4.0,4.0; stds=1.0,1.0; log_offset=0.0"
    )
    particles = cfg.get_int("particles", 5000)
    sigma_max = cfg.get_float("sigma_max", 8.0)
    sigma_min = cfg.get_float("sigma_min", 0.5)
    levels = cfg.get_int("levels", 8)
    steps_per_level = cfg.get_int("steps_per_level", 200)
    base_step = cfg.get_float("base_step", 0.01)
    trace_every = cfg.get_int("trace_every", 10)
    threshold = cfg.get_float(
        "threshold", (float(target.means.min()) + float(target.means.max())) / 2.0
    )

    sched = lv.geometric_schedule(sigma_max, sigma_min, levels, steps_per_level, base_step)
    trace_rows = []

    def observer(level, sigma_j, step, positions):
        if step % trace_every == 0 or step == steps_per_level - 1:
            trace_rows.append((level, sigma_j, step, float(np.mean(positions <= threshold))))

    ensemble = lv.annealed_langevin_run(
        particles, target, sched, make_stream(cfg.seed, 0), observer=observer
    )

    window = mx.quadrature_window(target)
    files = {
        "levels.csv": _csv(["level", "sigma_j", "step", "mode_fraction"], trace_rows),
        "final.csv": _csv(
            ["particle_id", "position"], list(enumerate(ensemble.positions))
        ),
    }
    plots = [
        (
            "final.csv",
            PlotSpec(
                "histogram",
                value="position",
                lo=window.lower,
                hi=window.upper,
                title="annealed langevin final positions",
            ),
            "hist_final.svg",
        ),
        (
            "levels.csv",
            PlotSpec("lines", x="step", y=("mode_fraction",), title="mode fraction during annealing"),
            "trace.svg",
        ),
    ]
    return files, plots


def _run_remedies(cfg: ExperimentConfig):
    data = cfg.get_mixture(
        "data", "weights=0.9,0.1; means=-5.0,5.0; stds=1.0,1.0; log_offset=0.0"
    )
    model = cfg.get_mixture(
        "model", "weights=0.1,0.9; means=-5.0,5.0; stds=1.0,1.0; log_offset=0.0"
    )
    scenario = cfg.get_str("scenario", "pi_swap")
    n_samples = cfg.get_int("n_samples", 2000)
    pairs = cfg.get_int("pairs", 10_000)
    lambdas = cfg.get_floats("lambdas", "0.1, 1.0, 10.0")
    reference = cfg.get_str("reference", "kde")
    if reference not in ("kde", "true"):
        raise ConfigError(f"[params] reference must be kde or true, got {reference!r}")

    samples = mx.sample(data, n_samples, make_stream(cfg.seed, 0))
    ml = rm.kde_fit(samples, "silverman") if reference == "kde" else data
    fisher = sm.fisher_divergence(data, model).value
    moments = rm.moment_discrepancy(model, samples, [1, 2])

    rows = []
    for i, lam in enumerate(lambdas):
        loss = rm.cml_loss(
            model,
            ml,
            samples,
            rm.CmlConfig(lambda_ml=lam, pair_subsample=pairs),
            make_stream(cfg.seed, 1 + i),
        )
        rows.append((scenario, fisher, loss, float(moments[0]), float(moments[1]), lam))
    files = {
        "report.csv": _csv(
            ["scenario", "fisher_divergence", "cml_loss", "moment_diff_1", "moment_diff_2", "lambda_ml"],
            rows,
        )
    }
    plots = [
        (
            "report.csv",
            PlotSpec("lines", x="lambda_ml", y=("cml_loss",), title="pairwise log-ratio loss vs lambda"),
            "report.svg",
        )
    ]
    return files, plots


_HANDLERS = {
    "score-plot": _run_score_plot,
    "fisher-sweep": _run_fisher_sweep,
    "stein-sweep": _run_stein_sweep,
    "ksd-run": _run_ksd,
    "svgd-run": _run_svgd,
    "langevin-run": _run_langevin,
    "remedies-run": _run_remedies,
}


def run(config: ExperimentConfig) -> list[Path]:
    """Execute one experiment; returns the written paths.

    Outputs land in config.out_dir.  If anything fails, files written so far
    are removed (and the directory too, when this run created it), so the
    presence of the output directory marks a completed run.
    """
    if config.out_dir is None:
        raise ConfigError("no output directory: set [experiment] out_dir or pass --out")
    handler = _HANDLERS[config.command]
    files, plots = handler(config)

    out_dir = config.out_dir
    created_dir = not out_dir.exists()
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        for name, content in files.items():
            path = out_dir / name
            path.write_text(content, encoding="utf-8")
            written.append(path)
        for csv_name, spec, svg_name in plots:
            written.append(render_svg(out_dir / csv_name, spec, out_dir / svg_name))
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        if created_dir:
            try:
                out_dir.rmdir()
            except OSError:
                pass
        raise
    return written


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lab", description="score-method experiments on 1-D Gaussian mixtures"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run a {name} experiment")
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        p.add_argument("--threads", type=int, default=None, help="parallel grid cells")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if config.command != args.command:
            raise ConfigError(
                f"config file declares command {config.command!r} but {args.command!r} was invoked"
            )
        if args.out is not None:
            config.out_dir = Path(args.out)
        if args.threads is not None:
            config.threads = max(1, args.threads)
        written = run(config)
    except ConfigError as exc:
        print(f"lab: config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - surface module failures as exit 1
        print(f"lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
