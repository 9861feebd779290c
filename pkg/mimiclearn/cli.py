"""Command-line interface for mimiclearn."""

import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from . import __version__
from .cli_common import (
    EXIT_OK,
    EXIT_RUNTIME,
    EXIT_VALIDATION,
    configure_logging,
    console,
    guarded,
    is_quiet,
    write_json,
    write_run_record,
)
from .config import ConfigLoader
from .data import flatten, impute_missing, load_dataset, synth_generate, temporal_view, write_dataset
from .distill import (
    TEACHER_TYPES,
    MimicModel,
    distill,
    fidelity_report,
    teacher_scores,
)
from .evaluation import (
    MethodSettings,
    MethodSpec,
    aggregate_importance,
    auc,
    fit_method,
    gradcheck_table,
    importance_table,
)
from .evaluation.methods import attach_feature_names
from .models import (
    DistillRunConfig,
    FeatureView,
    Pipeline,
    StudentKind,
    SynthConfig,
    Task,
    TeacherKind,
    TrainRunConfig,
)
from .neural import SdaModel, gradient_check
from .serialization import is_model_file, load_model, save_model
from .trees import GbtEnsemble, Tree, export_dot, most_important_stage
from .utils import derive_seed

logger = logging.getLogger(__name__)


def load_design(dataset_path: str, view: FeatureView, task: Task):
    """Load, impute and flatten a dataset for one view and task."""
    dataset = impute_missing(load_dataset(dataset_path))
    design = flatten(dataset, view)
    return design, temporal_view(dataset, view), dataset.labels[task]


def _history(model: Any) -> List[float]:
    if isinstance(model, MimicModel):
        model = model.student
    return [float(v) for v in (getattr(model, "history", None) or [])]


def _spinner(message: str) -> Progress:
    progress = Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
        disable=is_quiet(),
        transient=True,
    )
    progress.add_task(message, total=None)
    return progress


@click.group(invoke_without_command=True)
@click.option("-v", "--verbose", is_flag=True, help="Verbose output")
@click.option("--quiet", is_flag=True, help="Quiet mode (errors only)")
@click.version_option(version=__version__, prog_name="mimiclearn")
@click.pass_context
def cli(ctx, verbose, quiet):
    """mimiclearn - distill deep clinical models into interpretable trees."""
    configure_logging(verbose, quiet)
    ctx.ensure_object(dict)
    ctx.obj["quiet"] = quiet
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="SynthConfig file")
@click.option("--seed", type=int, help="Generator seed")
@click.option("-o", "--output", default="data.csv", show_default=True, help="CSV file to write")
@click.option("--out", "out_dir", default=".", show_default=True, help="Directory for run.json")
@click.option("--n-samples", type=int, help="Number of patients")
@click.option("--q-static", type=int, help="Static variables")
@click.option("--p-temporal", type=int, help="Temporal variables")
@click.option("--t-steps", type=int, help="Days per temporal variable")
@click.option("--missing-rate", type=float, help="Fraction of unobserved entries")
@guarded
def synth(
    config_path, seed, output, out_dir, n_samples, q_static, p_temporal, t_steps, missing_rate
):
    """Generate a synthetic static + temporal dataset as CSV."""
    cfg = ConfigLoader.resolve(
        SynthConfig,
        config_path,
        {
            "seed": seed,
            "n_samples": n_samples,
            "q_static": q_static,
            "p_temporal": p_temporal,
            "t_steps": t_steps,
            "missing_rate": missing_rate,
        },
    )
    dataset = synth_generate(cfg)
    path = write_dataset(dataset, output)
    write_run_record(Path(out_dir), "synth", cfg.model_dump(mode="json"), {"output": str(output)})

    if not is_quiet():
        console.print(
            f"✅ Wrote {dataset.n_samples} samples "
            f"({dataset.q} static, {dataset.p}x{dataset.t} temporal, "
            f"{dataset.missing_fraction():.2%} missing) to {path}"
        )
    sys.exit(EXIT_OK)


@cli.command()
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="TrainRunConfig file")
@click.option("--seed", type=int, help="Root seed")
@click.option("--out", "out_dir", default=".", show_default=True, help="Output directory")
@click.option("--method", help="Method id, e.g. LR, GBT, LR-SDA, GBTmimic-LSTM")
@click.option("--task", type=click.Choice([t.value for t in Task]), help="Label channel")
@click.option("--view", type=click.Choice([v.value for v in FeatureView]), help="Feature view")
@click.option("--epochs", type=int, help="Training epochs of neural teachers")
@click.option("--learning-rate", type=float, help="Learning rate of neural teachers")
@guarded
def train(dataset, config_path, seed, out_dir, method, task, view, epochs, learning_rate):
    """Fit one method on a whole dataset and save it.

    Writes model.json (plus lr_head.json for LR-* teachers),
    train_log.json and run.json into the output directory.
    """
    cfg = ConfigLoader.resolve(
        TrainRunConfig,
        config_path,
        {
            "seed": seed,
            "method": method,
            "task": task,
            "view": view,
            "train": {"epochs": epochs, "learning_rate": learning_rate},
        },
    )
    try:
        spec = MethodSpec.parse(cfg.method)
    except ValueError as e:
        raise ValueError(f"method: {e}")
    design, x_ts, y = load_design(dataset, cfg.view, cfg.task)
    settings = MethodSettings(train=cfg.train, tree=cfg.tree, linear=cfg.linear)

    with _spinner(f"Training {spec.method_id}..."):
        fitted = fit_method(spec, design.values, x_ts, y, settings, cfg.seed, design.column_names)

    out = Path(out_dir)
    metadata = {
        "method": spec.method_id,
        "task": cfg.task.value,
        "view": cfg.view.value,
        "feature_names": design.column_names,
    }
    save_model(fitted.model, out / "model.json", metadata)
    if fitted.lr_head is not None:
        save_model(fitted.lr_head, out / "lr_head.json", metadata)

    try:
        train_auc: Optional[float] = auc(fitted.score(design.values, x_ts), y)
    except ValueError as e:
        logger.warning(f"Training AUC unavailable: {e}")
        train_auc = None

    log: Dict[str, Any] = {
        "method": spec.method_id,
        "task": cfg.task.value,
        "view": cfg.view.value,
        "n_samples": design.n_samples,
        "n_features": design.d,
        "train_auc": train_auc,
        "history": _history(fitted.model),
    }
    if isinstance(fitted.model, SdaModel):
        log["pretrain_history"] = [[float(v) for v in h] for h in fitted.model.pretrain_history]
    if fitted.lr_head is not None:
        log["lr_head_history"] = _history(fitted.lr_head)
    write_json(out / "train_log.json", log)
    write_run_record(out, "train", cfg.model_dump(mode="json"), {"dataset": str(dataset)})

    if not is_quiet():
        shown = "-" if train_auc is None else f"{train_auc:.4f}"
        console.print(f"✅ {spec.method_id} trained on {design.n_samples} rows x {design.d} features")
        console.print(f"   Training AUC: {shown}")
        console.print(f"   Model written to {out / 'model.json'}")
    sys.exit(EXIT_OK)


@cli.command(name="distill")
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="DistillRunConfig file")
@click.option("--seed", type=int, help="Root seed")
@click.option("--out", "out_dir", default=".", show_default=True, help="Output directory")
@click.option("--teacher", type=click.Choice([k.value for k in TeacherKind]), help="Teacher kind")
@click.option("--pipeline", type=click.Choice([p.value for p in Pipeline]), help="p1 (LR head) or p2")
@click.option("--student", type=click.Choice([s.value for s in StudentKind]), help="gbt or dt")
@click.option("--task", type=click.Choice([t.value for t in Task]), help="Label channel")
@click.option("--view", type=click.Choice([v.value for v in FeatureView]), help="Feature view")
@click.option("--epochs", type=int, help="Teacher training epochs")
@click.option(
    "--teacher-model",
    type=click.Path(exists=True, dir_okay=False),
    help="Pre-trained teacher (model.json from `train`); skips teacher training",
)
@guarded
def distill_command(
    dataset, config_path, seed, out_dir, teacher, pipeline, student, task, view, epochs, teacher_model
):
    """Distill a deep teacher into a tree student.

    Writes mimic.json, fidelity.json and run.json into the output directory.
    """
    cfg = ConfigLoader.resolve(
        DistillRunConfig,
        config_path,
        {
            "seed": seed,
            "teacher": teacher,
            "pipeline": pipeline,
            "student": student,
            "task": task,
            "view": view,
            "train": {"epochs": epochs},
        },
    )
    design, x_ts, y = load_design(dataset, cfg.view, cfg.task)
    spec = cfg.teacher_spec()
    spec = spec.model_copy(
        update={"train_config": cfg.train.model_copy(update={"seed": derive_seed(cfg.seed, "teacher")})}
    )
    tree_cfg = cfg.tree.model_copy(update={"seed": derive_seed(cfg.seed, "tree")})

    pretrained = None
    if teacher_model is not None:
        pretrained = load_model(teacher_model, expected=TEACHER_TYPES[cfg.teacher])

    with _spinner(f"Distilling {cfg.method_id}..."):
        mimic = distill(
            design.values,
            x_ts,
            y,
            spec,
            tree_cfg,
            cfg.student,
            teacher_model=pretrained,
            linear_cfg=cfg.linear,
        )
    attach_feature_names(mimic.student, design.column_names)

    report = fidelity_report(mimic, teacher_scores(mimic, design.values, x_ts), design.values)
    out = Path(out_dir)
    save_model(
        mimic,
        out / "mimic.json",
        {"task": cfg.task.value, "view": cfg.view.value, "feature_names": design.column_names},
    )
    write_json(out / "fidelity.json", report.model_dump(mode="json"))
    inputs = {"dataset": str(dataset), "teacher_model": teacher_model}
    write_run_record(out, "distill", cfg.model_dump(mode="json"), inputs)

    if not is_quiet():
        table = Table(title=f"Fidelity of {mimic.method_id}")
        table.add_column("Rows", justify="right")
        table.add_column("MSE", justify="right")
        table.add_column("Pearson r", justify="right")
        table.add_column("Rank agreement", justify="right")
        table.add_row(
            str(report.n_rows),
            f"{report.mse:.5f}",
            f"{report.pearson_r:.4f}",
            f"{report.rank_agreement:.4f}",
        )
        console.print(table)
        console.print(f"✅ Mimic model written to {out / 'mimic.json'}")
    sys.exit(EXIT_OK)


def _model_files(paths: Sequence[str]) -> List[Path]:
    files: List[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            found = sorted(path.rglob("*.json"))
            models = [f for f in found if is_model_file(f)]
            logger.debug(f"{path}: {len(models)} model file(s) among {len(found)} JSON files")
            files.extend(models)
        elif path.exists():
            files.append(path)
        else:
            raise FileNotFoundError(f"Model path not found: {path}")
    return files


def _tree_model(model: Any, source: Path):
    if isinstance(model, MimicModel):
        return model.student
    if isinstance(model, (Tree, GbtEnsemble)):
        return model
    raise ValueError(f"{source} holds no tree model")


@cli.command()
@click.option(
    "--models",
    "model_paths",
    multiple=True,
    required=True,
    help="Model files or directories of fold models (repeatable)",
)
@click.option("-k", "--top-k", "top_k", type=int, default=10, show_default=True, help="Features to rank")
@click.option("--out", "out_dir", default=".", show_default=True, help="Output directory")
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON")
@guarded
def importance(model_paths, top_k, out_dir, as_json):
    """Aggregate feature importance over tree or mimic fold models."""
    if top_k < 0:
        raise ValueError("top_k: must be non-negative")
    files = _model_files(model_paths)
    if not files:
        raise ValueError("models: no model files found")

    trees = [_tree_model(load_model(path), path) for path in files]
    names = trees[0].feature_names or [f"X[{i}]" for i in range(trees[0].n_features)]
    for path, model in zip(files, trees):
        if model.feature_names and list(model.feature_names) != list(names):
            raise ValueError(f"models: {path} was fitted on a different feature set")
    report = aggregate_importance(trees, names, top_k)

    out = Path(out_dir)
    write_json(out / "importance.json", report.model_dump(mode="json"))
    config = {"models": [str(p) for p in files], "top_k": top_k}
    write_run_record(out, "importance", config)

    if as_json:
        print(report.to_json())
    elif not is_quiet():
        title = f"Top {len(report.top_k)} features over {report.n_models} model(s)"
        console.print(importance_table(report, title), markup=False, highlight=False)
    sys.exit(EXIT_OK)


@cli.command(name="export-tree")
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--stage", type=int, help="Boosting stage (default: the most important one)")
@click.option("-o", "--output", default="tree.dot", show_default=True, help="DOT file to write")
@click.option("--out", "out_dir", default=".", show_default=True, help="Directory for run.json")
@guarded
def export_tree(model_path, stage, output, out_dir):
    """Export one tree of a tree, ensemble or mimic model as Graphviz DOT."""
    model = _tree_model(load_model(model_path), Path(model_path))
    if isinstance(model, GbtEnsemble):
        if stage is None:
            stage = most_important_stage(model)
        if not 0 <= stage < len(model.stages):
            raise ValueError(f"stage: must be in [0, {len(model.stages) - 1}], got {stage}")
        tree = model.stages[stage]
        names = model.feature_names
    else:
        if stage not in (None, 0):
            raise ValueError(f"stage: a single tree only has stage 0, got {stage}")
        stage = 0
        tree = model
        names = model.feature_names

    output_path = Path(output)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text(export_dot(tree, names), encoding="utf-8")
    config = {"model": str(model_path), "stage": stage, "output": str(output)}
    write_run_record(Path(out_dir), "export-tree", config)

    if not is_quiet():
        console.print(
            f"✅ Stage {stage} ({tree.n_leaves} leaves, depth {tree.depth}) written to {output_path}"
        )
    sys.exit(EXIT_OK)


@cli.command(name="gradcheck")
@click.option(
    "--model",
    "kind",
    type=click.Choice([k.value for k in TeacherKind]),
    default=TeacherKind.DNN.value,
    show_default=True,
    help="Network to check",
)
@click.option("--hidden", type=int, help="Hidden units")
@click.option("--inputs", type=int, help="Input width")
@click.option("--steps", type=int, help="Sequence length (lstm)")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed of the random instance")
@click.option("--out", "out_dir", default=".", show_default=True, help="Directory for run.json")
@guarded
def gradcheck(kind, hidden, inputs, steps, seed, out_dir):
    """Compare analytic gradients with central differences.

    Exit codes:
      0 - max relative error below 1e-4
      2 - gradient mismatch
    """
    for name, value in (("hidden", hidden), ("inputs", inputs), ("steps", steps)):
        if value is not None and value < 1:
            raise ValueError(f"{name}: must be positive, got {value}")
    result = gradient_check(TeacherKind(kind), hidden=hidden, inputs=inputs, steps=steps, seed=seed)
    config = {"model": kind, "hidden": hidden, "inputs": inputs, "steps": steps, "seed": seed}
    write_run_record(Path(out_dir), "gradcheck", config)

    if not is_quiet():
        console.print(gradcheck_table(result), markup=False, highlight=False)
    status = "[green]passed[/green]" if result.passed else "[red]FAILED[/red]"
    console.print(
        f"max relative error: {result.max_relative_error:.3e} "
        f"over {result.n_checked} entries ({status})",
        highlight=False,
    )
    sys.exit(EXIT_OK if result.passed else EXIT_RUNTIME)


# Import bench command from cli_bench module
from .cli_bench import bench  # noqa: E402

cli.add_command(bench)


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI on ``argv`` and return its exit code instead of exiting.

    Usage errors exit 1, like validation errors.
    """
    try:
        result = cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="mimiclearn",
            standalone_mode=False,
        )
    except click.ClickException as e:
        e.show()
        return EXIT_VALIDATION
    except click.Abort:
        return EXIT_VALIDATION
    except SystemExit as e:
        if e.code is None:
            return EXIT_OK
        return e.code if isinstance(e.code, int) else EXIT_VALIDATION
    return result if isinstance(result, int) else EXIT_OK


def main():
    """Main entry point."""
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
