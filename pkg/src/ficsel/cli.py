"""Command-line front end.

Subcommands:

    ficsel run <config.yaml>        fit, score, rank; write table/plot/results/log
    ficsel enumerate <config.yaml>  print the candidate indicator strings
    ficsel simulate <config.yaml>   draw from the post-selection limit law

The configuration is one YAML document (key-value with nested
sections); a handful of flags override individual keys.  Exit codes:
0 success, 1 usage or configuration error, 2 data error, 3 numerical
failure.  Errors print as a single machine-parsable stderr line:
``ficsel: error: <kind>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np
import yaml

from . import families as fam
from .afic import AficRecord
from .dataset import Dataset, read_csv
from .design import CandidateSpec, DesignTemplate, build_design, wide_spec
from .errors import ConfigError, DataError, FicselError, NumericalError
from .fic_local import (
    ArgminFicScheme,
    ExponentialFicScheme,
    FixedModelScheme,
    build_local_frame,
    candidate_subset,
    simulate_post_selection,
)
from .fit import fit_mle
from .focus import FocusSpec
from .search import SearchConfig, enumerate_candidates, run_search
from .svgplot import render_fic_plot

TABLE_NAME = "table.csv"
RESULTS_NAME = "results.jsonl"
PLOT_NAME = "plot.svg"
LOG_NAME = "run.log"
SAMPLES_NAME = "samples.txt"


def _verbose() -> bool:
    return os.environ.get("FICSEL_VERBOSE", "") not in ("", "0")


def _note(msg: str) -> None:
    if _verbose():
        print(f"ficsel: {msg}", file=sys.stderr)


def _fmt(v: float, nd: int) -> str:
    s = f"{v:.{nd}f}"
    if float(s) == 0.0:
        s = f"{0.0:.{nd}f}"
    return s


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def load_config(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file {path} does not exist")
    try:
        with open(p, "r", encoding="utf-8") as fh:
            cfg = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    cfg["_dir"] = p.parent
    return cfg


def _require(cfg: dict, key: str):
    if key not in cfg or cfg[key] is None:
        raise ConfigError(f"missing required config key {key!r}")
    return cfg[key]


def build_inputs(cfg: dict):
    """Resolve dataset, template, protected slots, focus, and search config."""
    data_path = Path(_require(cfg, "data"))
    if not data_path.is_absolute():
        data_path = cfg["_dir"] / data_path
    response = _require(cfg, "response")
    covariates = cfg.get("covariates")
    dataset = read_csv(data_path, response=response, covariates=covariates)

    if cfg.get("interactions", True):
        template = DesignTemplate.with_pairwise_interactions(dataset.covariate_names)
    else:
        template = DesignTemplate.main_effects(dataset.covariate_names)

    protected = _resolve_protected(cfg.get("protected", ["intercept"]), template)
    family = fam.check_family(_require(cfg, "family"))
    focus = _build_focus(cfg, dataset, template)

    criterion = cfg.get("criterion")
    if criterion is None:
        criterion = "afic_adj" if focus.k > 1 else "fic_adj"
    candidates = cfg.get("candidates")
    if candidates is not None:
        candidates = tuple(str(s) for s in candidates)
    config = SearchConfig(
        template=template,
        family=family,
        protected=protected,
        hierarchy=bool(cfg.get("hierarchy", True)),
        framework=cfg.get("framework", "fixed"),
        criterion=criterion,
        candidates=candidates,
        matrix_path=cfg.get("matrix_path", "model"),
        point_index=int(cfg.get("point_index", 0)),
        jobs=int(cfg.get("jobs", 1)),
        allow_huge=bool(cfg.get("allow_huge", False)),
    )
    return dataset, template, focus, config


def _resolve_protected(raw, template: DesignTemplate) -> tuple[int, ...]:
    names = template.slot_names()
    out = []
    for item in raw if isinstance(raw, (list, tuple)) else [raw]:
        if isinstance(item, int):
            out.append(item)
        elif item == "intercept":
            out.append(0)
        elif item in names:
            out.append(names.index(item))
        else:
            raise ConfigError(f"unknown protected slot {item!r}")
    return tuple(sorted(set(out)))


def _build_focus(cfg: dict, dataset: Dataset, template: DesignTemplate) -> FocusSpec:
    section = _require(cfg, "focus")
    if not isinstance(section, dict):
        raise ConfigError("focus section must be a mapping")
    kind = _require(section, "kind")
    points_cfg = section.get("points", "all")
    if kind == "coefficient-combination":
        pts = np.atleast_2d(np.asarray(points_cfg, dtype=float))
        if pts.shape[1] != template.p:
            raise ConfigError(
                f"coefficient-combination points must have template width {template.p}"
            )
    else:
        pts = _resolve_points(points_cfg, dataset, template)
    weights = section.get("weights", "equal")
    if isinstance(weights, str):
        if weights != "equal":
            raise ConfigError(f"unknown weights spec {weights!r}")
        weights = np.ones(pts.shape[0])
    else:
        weights = np.asarray(weights, dtype=float)
    threshold = section.get("threshold")
    return FocusSpec(
        kind=kind,
        eval_points=pts,
        weights=weights,
        threshold=None if threshold is None else float(threshold),
    )


def _resolve_points(points_cfg, dataset: Dataset, template: DesignTemplate) -> np.ndarray:
    if isinstance(points_cfg, str):
        if points_cfg != "all":
            raise ConfigError(f"unknown points selector {points_cfg!r}")
        rows = range(dataset.n)
        return np.vstack([template.design_row(dataset.covariates[i]) for i in rows])
    if not isinstance(points_cfg, list) or not points_cfg:
        raise ConfigError("focus points must be 'all', row labels, or inline vectors")
    if isinstance(points_cfg[0], (list, tuple)):
        return np.vstack([template.design_row(np.asarray(p, dtype=float)) for p in points_cfg])
    idx = []
    for label in points_cfg:
        label = str(label)
        if label not in dataset.row_ids:
            raise ConfigError(f"unknown row label {label!r}")
        idx.append(dataset.row_ids.index(label))
    return np.vstack([template.design_row(dataset.covariates[i]) for i in idx])


# ---------------------------------------------------------------------------
# run subcommand
# ---------------------------------------------------------------------------

def _record_row(rec, template) -> dict:
    if isinstance(rec, AficRecord):
        focus_val = rec.avg_focus
        bias_raw = None
        kappa = None
        sqbias_raw = rec.avg_sqbias_raw
        se = float(np.sqrt(rec.avg_variance))
        fic_u, fic_adj = rec.afic_u, rec.afic_adj
    else:
        focus_val = rec.mu_hat
        bias_raw = rec.bias_hat
        kappa = rec.kappa_sq_over_n
        sqbias_raw = rec.sqbias_raw
        se = rec.se
        fic_u, fic_adj = rec.fic_u, rec.fic_adj
    return {
        "model": rec.model_id,
        "indicators": template.indicator_string(rec.candidate.indicator),
        "focus": focus_val,
        "bias_raw": bias_raw,
        "bias": rec.bias_adj,
        "kappa_sq_over_n": kappa,
        "sqbias_raw": sqbias_raw,
        "se": se,
        "fic_u": fic_u,
        "fic_adj": fic_adj,
        "sqrt_fic_u": rec.rmse_u,
        "sqrt_fic_adj": rec.rmse,
        "aic": rec.aic,
        "bic": rec.bic,
        "rank_fic": rec.rank_fic,
        "rank_aic": rec.rank_aic,
        "rank_bic": rec.rank_bic,
    }


def render_table(rows) -> str:
    header = (
        "model,indicators,focus,bias,se,sqrt_fic_u,sqrt_fic_adj,aic,bic,"
        "rank_fic,rank_aic,rank_bic"
    )
    lines = [header]
    for r in rows:
        lines.append(
            ",".join(
                [
                    str(r["model"]),
                    '"' + r["indicators"] + '"',
                    _fmt(r["focus"], 3),
                    _fmt(r["bias"], 3),
                    _fmt(r["se"], 3),
                    _fmt(r["sqrt_fic_u"], 3),
                    _fmt(r["sqrt_fic_adj"], 3),
                    _fmt(r["aic"], 2),
                    _fmt(r["bic"], 2),
                    str(r["rank_fic"]),
                    str(r["rank_aic"]),
                    str(r["rank_bic"]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def render_results(meta: dict, rows, failures, summary: dict) -> str:
    lines = [json.dumps({"type": "meta", **meta}, sort_keys=True)]
    for r in rows:
        lines.append(json.dumps({"type": "record", **r}, sort_keys=True))
    for f in failures:
        lines.append(
            json.dumps(
                {"type": "failure", "indicators": f.indicator, "reason": f.reason},
                sort_keys=True,
            )
        )
    lines.append(json.dumps({"type": "summary", **summary}, sort_keys=True))
    return "\n".join(lines) + "\n"


def cmd_run(cfg: dict, out_dir: Path | None = None) -> Path:
    dataset, template, focus, config = build_inputs(cfg)
    out_dir = Path(cfg.get("output_dir", "ficsel-out")) if out_dir is None else out_dir
    if not out_dir.is_absolute():
        out_dir = cfg["_dir"] / out_dir

    _note(f"running search: {config.framework} framework, criterion {config.criterion}")
    result = run_search(dataset, config, focus)
    ranked = result.records
    rows = [_record_row(rec, template) for rec in ranked]

    wide_row = next(
        (r for r in rows if "0" not in r["indicators"].replace(",", "")), rows[0]
    )
    aic_row = next(r for r in rows if r["rank_aic"] == 1)
    bic_row = next(r for r in rows if r["rank_bic"] == 1)

    meta = {
        "family": config.family,
        "framework": config.framework,
        "criterion": config.criterion,
        "matrix_path": config.matrix_path,
        "n": dataset.n,
        "n_candidates": len(rows),
        "n_failures": len(result.failures),
        "focus_kind": focus.kind,
        "focus_points": int(focus.k),
        "hierarchy": config.hierarchy,
    }
    summary = {
        "selected": rows[0]["indicators"],
        "selected_focus": rows[0]["focus"],
        "selected_criterion": rows[0]["fic_adj" if config.criterion.endswith("adj") else "fic_u"],
        "wide_indicators": wide_row["indicators"],
        "wide_focus": wide_row["focus"],
        "wide_rank": wide_row["rank_fic"],
        "aic_best": aic_row["indicators"],
        "aic_best_focus": aic_row["focus"],
        "aic_best_rank": aic_row["rank_fic"],
        "bic_best": bic_row["indicators"],
        "bic_best_focus": bic_row["focus"],
        "bic_best_rank": bic_row["rank_fic"],
    }

    by_id = sorted(range(len(rows)), key=lambda i: rows[i]["model"])
    xs = [rows[i]["sqrt_fic_adj"] for i in by_id]
    ys = [rows[i]["focus"] for i in by_id]
    sel_pos = by_id.index(0)
    wide_pos = [rows[i]["indicators"] for i in by_id].index(wide_row["indicators"])
    svg = render_fic_plot(
        xs,
        ys,
        selected_index=sel_pos,
        wide_index=wide_pos,
        xlabel="root " + ("AFIC" if config.averaged else "FIC"),
        ylabel="focus estimate",
        title=f"{focus.kind} focus, {config.framework} framework",
    )

    log_lines = [
        "ficsel run log",
        f"family: {config.family}",
        f"framework: {config.framework}",
        f"criterion: {config.criterion}",
        f"matrix_path: {config.matrix_path}",
        f"n_obs: {dataset.n}",
        f"candidates ranked: {len(rows)}  failed: {len(result.failures)}",
        f"selected: {summary['selected']}  focus {_fmt(rows[0]['focus'], 3)}  "
        f"sqrt_fic_adj {_fmt(rows[0]['sqrt_fic_adj'], 3)}",
        f"wide model: {summary['wide_indicators']}  rank {summary['wide_rank']}  "
        f"focus {_fmt(wide_row['focus'], 3)}",
        f"aic best: {summary['aic_best']}  criterion rank {summary['aic_best_rank']}  "
        f"focus {_fmt(aic_row['focus'], 3)}",
        f"bic best: {summary['bic_best']}  criterion rank {summary['bic_best_rank']}  "
        f"focus {_fmt(bic_row['focus'], 3)}",
    ]
    for f in result.failures:
        log_lines.append(f"failure: {f.indicator}: {f.reason}")
    log = "\n".join(log_lines) + "\n"

    table = render_table(rows)
    results = render_results(meta, rows, result.failures, summary)
    _write_outputs(
        out_dir,
        {TABLE_NAME: table, RESULTS_NAME: results, PLOT_NAME: svg, LOG_NAME: log},
    )
    _note(f"wrote outputs to {out_dir}")
    return out_dir


def _write_outputs(out_dir: Path, contents: dict) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    try:
        for name, text in contents.items():
            path = out_dir / name
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            written.append(path)
    except OSError:
        for path in written:
            try:
                path.unlink()
            except OSError:
                pass
        raise


# ---------------------------------------------------------------------------
# enumerate / simulate subcommands
# ---------------------------------------------------------------------------

def cmd_enumerate(cfg: dict) -> None:
    _, template, _, config = build_inputs(cfg)
    for spec in enumerate_candidates(config):
        print(template.indicator_string(spec.indicator))


def cmd_simulate(cfg: dict, out_dir: Path | None = None) -> Path:
    dataset, template, focus, config = build_inputs(cfg)
    section = cfg.get("simulate") or {}
    out_dir = Path(cfg.get("output_dir", "ficsel-out")) if out_dir is None else out_dir
    if not out_dir.is_absolute():
        out_dir = cfg["_dir"] / out_dir

    wide = wide_spec(template, config.family)
    wide_fit = fit_mle(build_design(dataset, template, wide), dataset.response, config.family)
    frame = build_local_frame(wide_fit, focus, config.point_index, config.protected, wide)

    scheme_name = section.get("scheme", "fixed")
    if scheme_name == "fixed":
        indicator = section.get("subset")
        if indicator is None:
            subset = tuple(range(frame.q))  # wide model
        else:
            spec = CandidateSpec(template.parse_indicator(str(indicator)), config.family)
            subset = candidate_subset(frame, spec)
        scheme = FixedModelScheme(subset)
    elif scheme_name in ("argmin", "exponential"):
        cands_cfg = section.get("candidates", "all")
        if cands_cfg == "all":
            specs = enumerate_candidates(config)
        else:
            specs = [
                CandidateSpec(template.parse_indicator(str(s)), config.family)
                for s in cands_cfg
            ]
        subsets = tuple(candidate_subset(frame, s) for s in specs)
        if scheme_name == "argmin":
            scheme = ArgminFicScheme(subsets, adjusted=bool(section.get("adjusted", True)))
        else:
            scheme = ExponentialFicScheme(
                subsets,
                lam=float(section.get("lambda", 1.0)),
                adjusted=bool(section.get("adjusted", True)),
            )
    else:
        raise ConfigError(f"unknown simulate scheme {scheme_name!r}")

    delta_cfg = section.get("delta", 0)
    if isinstance(delta_cfg, (int, float)):
        delta = np.full(frame.q, float(delta_cfg))
    else:
        delta = np.asarray(delta_cfg, dtype=float)
    draws = int(section.get("draws", 10000))
    seed = int(section.get("seed", cfg.get("seed", 0)))

    samples = simulate_post_selection(frame, scheme, delta, draws, seed)
    body = "\n".join(repr(float(v)) for v in samples) + "\n"
    log = (
        "ficsel simulate log\n"
        f"scheme: {scheme_name}\n"
        f"draws: {draws}\nseed: {seed}\n"
        f"q: {frame.q}\n"
        f"sample_mean: {float(np.mean(samples))!r}\n"
        f"sample_var: {float(np.var(samples))!r}\n"
    )
    _write_outputs(out_dir, {SAMPLES_NAME: body, LOG_NAME: log})
    return out_dir


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _apply_overrides(cfg: dict, args) -> dict:
    for key in ("framework", "criterion", "seed", "jobs", "matrix_path"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if getattr(args, "output_dir", None) is not None:
        cfg["output_dir"] = args.output_dir
    return cfg


def build_parser() -> _Parser:
    parser = _Parser(prog="ficsel", description="Focused model selection for GLMs")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "enumerate", "simulate"):
        p = sub.add_parser(name)
        p.add_argument("config", help="YAML configuration file")
        p.add_argument("--framework", choices=("fixed", "local"))
        p.add_argument("--criterion", choices=("fic_adj", "fic_u", "afic_adj", "afic_u"))
        p.add_argument("--matrix-path", dest="matrix_path", choices=("model", "empirical"))
        p.add_argument("--output-dir", dest="output_dir")
        p.add_argument("--seed", type=int)
        p.add_argument("--jobs", type=int)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _apply_overrides(load_config(args.config), args)
        if args.command == "run":
            cmd_run(cfg)
        elif args.command == "enumerate":
            cmd_enumerate(cfg)
        else:
            cmd_simulate(cfg)
        return 0
    except ConfigError as exc:
        print(f"ficsel: error: config: {_one_line(exc)}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"ficsel: error: data: {_one_line(exc)}", file=sys.stderr)
        return 2
    except (NumericalError, FicselError) as exc:
        print(f"ficsel: error: numeric: {_one_line(exc)}", file=sys.stderr)
        return 3


def _one_line(exc) -> str:
    return " ".join(str(exc).split())


if __name__ == "__main__":
    sys.exit(main())
