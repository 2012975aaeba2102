#!/usr/bin/env python3
"""
session-sentry command line.
Train models, replay traces through the detection engine, sweep scheduler
parameters, generate workloads and benchmark the classifier modes.
"""

import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import typer
from loguru import logger

from src.config import config
from src.core.exceptions import InvalidConfigError, SentryError, exit_code_for
from src.core.settings import ChunkMode, ClassifierMode, LogLevel, SchedulingPolicy, Settings, override_settings
from src.modules.classifier import TrainingConfig, evaluate, load_model, save_model
from src.modules.data import (
    AlertWriter,
    read_trace,
    sessions_from_trace,
    write_gain_table,
    write_metrics,
    write_trace,
)
from src.modules.scheduler import SchedulerConfig
from src.modules.sentiment import SentimentLexicon, load_lexicon
from src.modules.simulation import (
    CostModel,
    DetectionEngine,
    RunSpec,
    TrainedModels,
    WorkloadConfig,
    benchmark_classifier_modes,
    full_session_dataset,
    generate_workload,
    invocation_frame,
    predictor_dataset,
    responsiveness_gain,
    run_spec,
    split_sessions,
    summarize_run,
    sweep_thresholds,
    train_models,
)

app = typer.Typer(
    name="session-sentry",
    help="Streaming cyberbullying detection engine and simulator",
    no_args_is_help=True,
)

PREDICTOR_FILE = "predictor.json"
MAIN_FILE = "main.json"


def configure_logging(level: str = config.log.log_level) -> None:
    """stderr sink at `level`, plus the rotating file sink when enabled."""
    logger.remove()
    logger.add(sys.stderr, level=level, format="{time:HH:mm:ss} {level} {message}")
    if not config.log.log_to_file:
        return
    if config.log.log_format == "json":
        logger.add(
            config.log.log_file_path,
            rotation=config.log.log_rotation,
            retention=config.log.log_retention,
            serialize=True,
            level=level
        )
    else:
        logger.add(
            config.log.log_file_path,
            rotation=config.log.log_rotation,
            retention=config.log.log_retention,
            format="{time} {level} {message}",
            level=level
        )


def parse_list(raw: str, cast, name: str) -> List:
    """Parse a comma list like `0.1,0.2`; empty lists are usage errors."""
    items = [item.strip() for item in (raw or "").split(",") if item.strip()]
    if not items:
        raise InvalidConfigError(name, raw, "non-empty comma-separated list")
    try:
        return [cast(item) for item in items]
    except ValueError:
        raise InvalidConfigError(name, raw, f"comma-separated {cast.__name__} values") from None


def _lexicon(lexicon_path: Optional[Path], negative_words_path: Optional[Path]) -> SentimentLexicon:
    return load_lexicon(
        lexicon_path or config.paths.lexicon_path,
        negative_words_path or config.paths.negative_words_path,
    )


def _trace(trace_path: Optional[Path], workload: Optional[WorkloadConfig]):
    if trace_path is not None:
        return read_trace(trace_path)
    if workload is not None:
        return generate_workload(workload)
    return read_trace(config.paths.sample_trace_path)


def _models(
    predictor_path: Optional[Path],
    main_path: Optional[Path],
    lexicon: SentimentLexicon,
    settings: Settings
) -> TrainedModels:
    """Load model files; with neither given, train on the bundled sample trace."""
    if predictor_path is None and main_path is None:
        logger.info("[CLI] No model files given, training on the bundled sample trace")
        return train_models(
            read_trace(config.paths.sample_trace_path),
            lexicon,
            TrainingConfig.from_settings(settings),
            batch_size=settings.batch_size,
            min_precision=settings.min_predictor_precision,
        )
    return TrainedModels(
        predictor=load_model(predictor_path or Path(config.paths.model_dir) / PREDICTOR_FILE),
        classifier=load_model(main_path or Path(config.paths.model_dir) / MAIN_FILE),
    )


def _run_spec(settings: Settings) -> RunSpec:
    return RunSpec(
        policy=settings.policy,
        classifier_mode=settings.classifier_mode,
        scheduler_config=SchedulerConfig.from_settings(settings),
        cost_model=CostModel.from_settings(settings),
        alert_threshold=settings.alert_threshold,
    )


# ----------------------------------------------------------------------
# Command implementations
# ----------------------------------------------------------------------

def cmd_train(
    trace_path: Optional[Path] = None,
    out_dir: Optional[Path] = None,
    lexicon_path: Optional[Path] = None,
    negative_words_path: Optional[Path] = None,
    which: str = "both",
    holdout: float = 0.2,
    settings: Optional[Settings] = None
) -> Dict[str, Any]:
    """
    Train predictor and/or main classifier and write model JSON.

    Returns:
        Written paths and held-out precision/recall
    """
    settings = settings or Settings()
    if which not in ("both", "predictor", "main"):
        raise InvalidConfigError("which", which, "both, predictor or main")
    lexicon = _lexicon(lexicon_path, negative_words_path)
    sessions = sessions_from_trace(_trace(trace_path, None))
    training, held_out = split_sessions(sessions, holdout, settings.seed)

    models = train_models(
        training,
        lexicon,
        TrainingConfig.from_settings(settings),
        batch_size=settings.batch_size,
        min_precision=settings.min_predictor_precision,
    )

    out_dir = Path(out_dir or config.paths.model_dir)
    summary: Dict[str, Any] = {"train_sessions": len(training), "holdout_sessions": len(held_out)}
    if which in ("both", "predictor"):
        summary["predictor_path"] = str(save_model(models.predictor, out_dir / PREDICTOR_FILE))
        report = evaluate(models.predictor, predictor_dataset(held_out, lexicon))
        summary["predictor_holdout"] = report.to_dict()
    if which in ("both", "main"):
        summary["main_path"] = str(save_model(models.classifier, out_dir / MAIN_FILE))
        report = evaluate(models.classifier, full_session_dataset(held_out, lexicon))
        summary["main_holdout"] = report.to_dict()
    return summary


def cmd_simulate(
    trace_path: Optional[Path] = None,
    workload: Optional[WorkloadConfig] = None,
    predictor_path: Optional[Path] = None,
    main_path: Optional[Path] = None,
    lexicon_path: Optional[Path] = None,
    negative_words_path: Optional[Path] = None,
    out_dir: Optional[Path] = None,
    settings: Optional[Settings] = None
) -> Dict[str, Any]:
    """
    Replay a trace (or generated workload) through the engine.

    Writes metrics.csv, alerts.jsonl and invocations.csv. Gain is measured
    against a round-robin run of the same trace.
    """
    settings = settings or Settings()
    lexicon = _lexicon(lexicon_path, negative_words_path)
    trace = _trace(trace_path, workload)
    models = _models(predictor_path, main_path, lexicon, settings)
    out_dir = Path(out_dir or config.paths.output_dir)

    with AlertWriter(out_dir / "alerts.jsonl") as sink:
        engine = DetectionEngine.from_settings(
            models.predictor, models.classifier, lexicon, settings, alert_sink=sink
        )
        result = engine.run(trace)

    if settings.policy == SchedulingPolicy.ROUND_ROBIN:
        baseline = result
    else:
        baseline = run_spec(
            trace, models, lexicon, _run_spec(settings).replace(policy=SchedulingPolicy.ROUND_ROBIN)
        )
    gain = responsiveness_gain(baseline, result)
    metrics = summarize_run(result, gain.mean)

    metrics_path = write_metrics(out_dir / "metrics.csv", [metrics])
    invocation_frame(result).to_csv(out_dir / "invocations.csv", index=False, lineterminator="\n")
    return {
        "metrics": metrics.to_row(),
        "metrics_path": str(metrics_path),
        "alerts_path": str(out_dir / "alerts.jsonl"),
        "sessions_compared": gain.sessions_compared,
    }


def cmd_sweep(
    thresholds: List[float],
    batch_sizes: List[int],
    trace_path: Optional[Path] = None,
    workload: Optional[WorkloadConfig] = None,
    predictor_path: Optional[Path] = None,
    main_path: Optional[Path] = None,
    lexicon_path: Optional[Path] = None,
    negative_words_path: Optional[Path] = None,
    out_path: Optional[Path] = None,
    workers: int = 1,
    settings: Optional[Settings] = None
) -> Dict[str, Any]:
    """Gain table over a confidence-threshold × batch-size grid."""
    settings = settings or Settings()
    lexicon = _lexicon(lexicon_path, negative_words_path)
    trace = _trace(trace_path, workload)
    models = _models(predictor_path, main_path, lexicon, settings)

    table = sweep_thresholds(
        trace, models, lexicon, thresholds, batch_sizes, spec=_run_spec(settings), workers=workers
    )
    path = write_gain_table(out_path or Path(config.paths.output_dir) / "gain_table.csv", table)
    return {"rows": len(table), "path": str(path), "table": table}


def cmd_generate(workload: WorkloadConfig, out_path: Path) -> Dict[str, Any]:
    """Write a seeded workload trace as JSONL."""
    events = generate_workload(workload)
    count = write_trace(out_path, events)
    return {"events": count, "sessions": workload.session_count, "path": str(out_path)}


def cmd_benchmark(
    sessions: int = 200,
    comments: int = 200,
    batch_size: int = 10,
    seed: int = 7,
    lexicon_path: Optional[Path] = None,
    negative_words_path: Optional[Path] = None,
    main_path: Optional[Path] = None,
    out_path: Optional[Path] = None,
    settings: Optional[Settings] = None
) -> Dict[str, Any]:
    """Wall-clock comparison of incremental and standard classification."""
    settings = settings or Settings()
    lexicon = _lexicon(lexicon_path, negative_words_path)
    if main_path is not None:
        classifier = load_model(main_path)
    else:
        classifier = _models(None, None, lexicon, settings).classifier

    workload = WorkloadConfig(
        session_count=sessions,
        min_comments=comments,
        mean_extra_comments=0.0,
        bully_min_comments=comments,
        rng_seed=seed,
    )
    report = benchmark_classifier_modes(
        sessions_from_trace(generate_workload(workload)), classifier, lexicon, batch_size
    )
    totals = report.totals()
    if out_path is not None:
        Path(out_path).parent.mkdir(parents=True, exist_ok=True)
        report.per_batch_median().to_csv(out_path, lineterminator="\n")
    return {
        "incremental_seconds": totals.get(ClassifierMode.INCREMENTAL.value, 0.0),
        "standard_seconds": totals.get(ClassifierMode.STANDARD.value, 0.0),
        "speedup": report.speedup,
    }


# ----------------------------------------------------------------------
# Typer commands
# ----------------------------------------------------------------------

def _fail(error: SentryError) -> None:
    logger.error(f"[CLI] {error.message}")
    typer.echo(f"Error: {error.message}", err=True)
    raise typer.Exit(code=exit_code_for(error))


def _workload_from_flags(sessions: Optional[int], bully_fraction: float, horizon: int, seed: int) -> Optional[WorkloadConfig]:
    if sessions is None:
        return None
    return WorkloadConfig(
        session_count=sessions, bully_fraction=bully_fraction, creation_horizon=horizon, rng_seed=seed
    )


@app.callback()
def main(
    log_level: LogLevel = typer.Option(LogLevel.INFO, "--log-level", help="Logging level")
):
    configure_logging(log_level.value)


@app.command()
def train(
    trace: Optional[Path] = typer.Option(None, "--trace", help="Labeled trace JSONL (default: bundled sample)"),
    out_dir: Optional[Path] = typer.Option(None, "--out-dir", help="Model output directory"),
    lexicon: Optional[Path] = typer.Option(None, "--lexicon", help="Lexicon TSV"),
    negative_words: Optional[Path] = typer.Option(None, "--negative-words", help="Negative-word list"),
    which: str = typer.Option("both", "--which", help="both, predictor or main"),
    holdout: float = typer.Option(0.2, "--holdout", help="Held-out session fraction"),
    batch_size: int = typer.Option(10, "--batch-size", help="Prefix step for training examples"),
    min_precision: float = typer.Option(0.3, "--min-precision", help="Predictor precision floor"),
    epochs: int = typer.Option(1500, "--epochs"),
    learning_rate: float = typer.Option(0.5, "--learning-rate"),
    l2: float = typer.Option(1e-3, "--l2"),
    seed: int = typer.Option(7, "--seed"),
):
    """Train the initial predictor and the main classifier."""
    try:
        settings = override_settings(
            batch_size=batch_size, min_predictor_precision=min_precision, epochs=epochs,
            learning_rate=learning_rate, l2=l2, seed=seed,
        )
        summary = cmd_train(trace, out_dir, lexicon, negative_words, which, holdout, settings)
    except SentryError as e:
        _fail(e)
    for name in ("predictor", "main"):
        if f"{name}_path" in summary:
            report = summary[f"{name}_holdout"]
            typer.echo(
                f"{name}: {summary[f'{name}_path']} "
                f"(held-out precision {report['precision']:.3f}, recall {report['recall']:.3f})"
            )


@app.command()
def simulate(
    trace: Optional[Path] = typer.Option(None, "--trace", help="Trace JSONL (default: bundled sample)"),
    sessions: Optional[int] = typer.Option(None, "--sessions", help="Generate a workload of this many sessions"),
    bully_fraction: float = typer.Option(0.05, "--bully-fraction"),
    horizon: int = typer.Option(50_000, "--horizon", help="Creation horizon in ticks"),
    predictor: Optional[Path] = typer.Option(None, "--predictor", help="Predictor model JSON"),
    main_model: Optional[Path] = typer.Option(None, "--main", help="Main classifier model JSON"),
    lexicon: Optional[Path] = typer.Option(None, "--lexicon"),
    negative_words: Optional[Path] = typer.Option(None, "--negative-words"),
    out_dir: Optional[Path] = typer.Option(None, "--out-dir"),
    policy: SchedulingPolicy = typer.Option(SchedulingPolicy.DYNAMIC, "--policy"),
    mode: ClassifierMode = typer.Option(ClassifierMode.INCREMENTAL, "--mode"),
    confidence_threshold: float = typer.Option(0.2, "--confidence-threshold"),
    batch_size: int = typer.Option(10, "--batch-size"),
    chunk_mode: ChunkMode = typer.Option(ChunkMode.CAPPED, "--chunk-mode"),
    alert_threshold: int = typer.Option(2, "--alert-threshold"),
    charge_full_recompute: bool = typer.Option(False, "--charge-full-recompute"),
    verify: bool = typer.Option(False, "--verify", help="Check cached features after every step"),
    seed: int = typer.Option(7, "--seed"),
):
    """Replay a trace through the detection engine."""
    try:
        settings = override_settings(
            policy=policy, classifier_mode=mode, confidence_threshold=confidence_threshold,
            batch_size=batch_size, chunk_mode=chunk_mode, alert_threshold=alert_threshold,
            charge_full_recompute=charge_full_recompute, verify_invariants=verify, seed=seed,
        )
        summary = cmd_simulate(
            trace, _workload_from_flags(sessions, bully_fraction, horizon, seed),
            predictor, main_model, lexicon, negative_words, out_dir, settings,
        )
    except SentryError as e:
        _fail(e)
    row = summary["metrics"]
    typer.echo(
        f"{row['policy']}/{row['classifier_mode']}: {row['alerts']} alerts, "
        f"precision {row['precision']:.3f}, recall {row['recall']:.3f}, "
        f"mean gain {row['mean_gain']}, {row['total_ticks']} ticks"
    )
    typer.echo(f"metrics: {summary['metrics_path']}")


@app.command()
def sweep(
    thresholds: str = typer.Option("0.1,0.2,0.3", "--thresholds", help="Comma list of confidence thresholds"),
    batch_sizes: str = typer.Option("10,20,30", "--batch-sizes", help="Comma list of batch sizes"),
    trace: Optional[Path] = typer.Option(None, "--trace"),
    sessions: Optional[int] = typer.Option(None, "--sessions"),
    bully_fraction: float = typer.Option(0.05, "--bully-fraction"),
    horizon: int = typer.Option(50_000, "--horizon"),
    predictor: Optional[Path] = typer.Option(None, "--predictor"),
    main_model: Optional[Path] = typer.Option(None, "--main"),
    lexicon: Optional[Path] = typer.Option(None, "--lexicon"),
    negative_words: Optional[Path] = typer.Option(None, "--negative-words"),
    out: Optional[Path] = typer.Option(None, "--out", help="Gain table CSV"),
    chunk_mode: ChunkMode = typer.Option(ChunkMode.CAPPED, "--chunk-mode"),
    alert_threshold: int = typer.Option(2, "--alert-threshold"),
    workers: int = typer.Option(1, "--workers", min=1),
    seed: int = typer.Option(7, "--seed"),
):
    """Sweep confidence threshold × batch size against round-robin."""
    try:
        grid_t = parse_list(thresholds, float, "thresholds")
        grid_b = parse_list(batch_sizes, int, "batch_sizes")
        settings = override_settings(chunk_mode=chunk_mode, alert_threshold=alert_threshold, seed=seed)
        summary = cmd_sweep(
            grid_t, grid_b, trace, _workload_from_flags(sessions, bully_fraction, horizon, seed),
            predictor, main_model, lexicon, negative_words, out, workers, settings,
        )
    except SentryError as e:
        _fail(e)
    typer.echo(summary["table"].to_string(index=False))
    typer.echo(f"gain table: {summary['path']}")


@app.command()
def generate(
    out: Path = typer.Option(..., "--out", help="Trace JSONL to write"),
    sessions: int = typer.Option(1000, "--sessions"),
    bully_fraction: float = typer.Option(0.05, "--bully-fraction"),
    horizon: int = typer.Option(50_000, "--horizon"),
    seed: int = typer.Option(7, "--seed"),
):
    """Generate a seeded synthetic workload."""
    try:
        summary = cmd_generate(WorkloadConfig(
            session_count=sessions, bully_fraction=bully_fraction, creation_horizon=horizon, rng_seed=seed
        ), out)
    except SentryError as e:
        _fail(e)
    typer.echo(f"{summary['events']} events ({summary['sessions']} sessions) -> {summary['path']}")


@app.command()
def benchmark(
    sessions: int = typer.Option(200, "--sessions"),
    comments: int = typer.Option(200, "--comments", help="Comments per session"),
    batch_size: int = typer.Option(10, "--batch-size"),
    main_model: Optional[Path] = typer.Option(None, "--main"),
    lexicon: Optional[Path] = typer.Option(None, "--lexicon"),
    negative_words: Optional[Path] = typer.Option(None, "--negative-words"),
    out: Optional[Path] = typer.Option(None, "--out", help="Per-batch median timings CSV"),
    seed: int = typer.Option(7, "--seed"),
):
    """Compare incremental and standard classification wall-clock time."""
    try:
        summary = cmd_benchmark(
            sessions, comments, batch_size, seed, lexicon, negative_words, main_model, out,
            override_settings(seed=seed),
        )
    except SentryError as e:
        _fail(e)
    typer.echo(
        f"incremental {summary['incremental_seconds']:.3f}s, "
        f"standard {summary['standard_seconds']:.3f}s, speedup {summary['speedup']:.1f}x"
    )


if __name__ == "__main__":
    app()
