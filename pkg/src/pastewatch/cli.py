"""Command-line entry point wiring every stage: corpus synthesis,
dataset building, training, tuning, evaluation (with figures), candidate
scoring, one-shot analysis, Extract Method application, and the HTTP
service."""

from __future__ import annotations

import functools
import itertools
import json
import sys
from pathlib import Path

import click
import numpy as np

from .candidates import rank_candidates, scored_candidates
from .clones import find_duplicates
from .config import load_settings
from .dataset import (build_dataset, dataset_arrays, load_dataset,
                      resolve_fragment, save_dataset, synth_corpus)
from .errors import PastewatchError
from .evaluation import (ConfusionCounts, bootstrap_validate, mcnemar,
                         pca_project, pr_auc, prf)
from .ml import (MODEL_KINDS, TrainConfig, fit_model, load_classifier,
                 save_model, tune_hyperparameters)
from .refactor import (analyze_dataflow, apply_plan, is_extractable,
                       plan_extraction)
from .syntax import SourceFile

EXIT_DOMAIN_ERROR = 1


def handle_errors(fn):
    """Map domain errors to exit 1 with a stable one-line code."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except FileNotFoundError as exc:
            click.echo(f"FILE_NOT_FOUND: {exc}", err=True)
            sys.exit(EXIT_DOMAIN_ERROR)
        except PastewatchError as exc:
            click.echo(f"{exc.code}: {exc}", err=True)
            sys.exit(EXIT_DOMAIN_ERROR)
    return wrapper


def _emit(payload, as_json, human):
    click.echo(json.dumps(payload, indent=2) if as_json else human)


def _load_source(path):
    text = Path(path).read_text(encoding="utf-8")
    return SourceFile.from_text(text, path=str(path))


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="key=value settings file.")
@click.pass_context
def main(ctx, config_path):
    """Just-in-time Extract Method recommendation toolkit."""
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path


def _settings(ctx, **overrides):
    return load_settings(config_path=ctx.obj.get("config_path"),
                         overrides=overrides or None)


@main.group()
def dataset():
    """Build or synthesize labeled datasets."""


@dataset.command("synth")
@click.option("--n", "n_methods", type=int, default=50, show_default=True,
              help="Number of generated methods.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), required=True,
              help="Directory for .java files + manifest.tsv.")
@click.option("--json", "as_json", is_flag=True, help="JSON output.")
@handle_errors
def dataset_synth(n_methods, seed, out_dir, as_json):
    """Generate a seeded synthetic corpus with a positives manifest."""
    files, manifest = synth_corpus(n_methods, seed, out_dir=out_dir)
    payload = {"outDir": str(out_dir), "files": len(files),
               "positives": len(manifest), "seed": seed}
    _emit(payload, as_json,
          f"wrote {len(files)} files, {len(manifest)} manifest rows "
          f"to {out_dir}")


@dataset.command("build")
@click.option("--corpus", "corpus_dir", type=click.Path(exists=True),
              required=True)
@click.option("--manifest", "manifest_path", type=click.Path(exists=True),
              required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True,
              help="Output CSV.")
@click.option("--json", "as_json", is_flag=True, help="JSON output.")
@handle_errors
def dataset_build(corpus_dir, manifest_path, seed, out_path, as_json):
    """Compute metric vectors for manifest positives plus sampled
    negatives and save the balanced CSV."""
    ds = build_dataset(corpus_dir, manifest_path, seed)
    save_dataset(ds, out_path)
    counts = ds.class_counts()
    payload = {"out": str(out_path), "examples": len(ds.examples),
               "positives": counts[1], "negatives": counts[0]}
    _emit(payload, as_json,
          f"wrote {len(ds.examples)} examples ({counts[1]} positive, "
          f"{counts[0]} negative) to {out_path}")


@main.command()
@click.option("--dataset", "dataset_path", type=click.Path(), required=True)
@click.option("--model-kind", "kind", type=click.Choice(MODEL_KINDS),
              default="cnn", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--epochs", type=int, default=3, show_default=True)
@click.option("--batch-size", type=int, default=20, show_default=True)
@click.option("--learning-rate", type=float, default=0.01, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--loss-plot", type=click.Path(), default=None,
              help="Optional per-epoch loss figure (CNN only).")
@click.option("--json", "as_json", is_flag=True, help="JSON output.")
@handle_errors
def train(dataset_path, kind, seed, epochs, batch_size, learning_rate,
          out_path, loss_plot, as_json):
    """Train a model on a dataset CSV and save it."""
    if not Path(dataset_path).exists():
        raise FileNotFoundError(dataset_path)
    ds = load_dataset(dataset_path, seed=seed)
    X, y = dataset_arrays(ds)
    config = TrainConfig(epochs=epochs, batch_size=batch_size,
                         learning_rate=learning_rate, seed=seed)
    model, history = fit_model(kind, X, y, seed=seed, config=config)
    target = model.params if kind == "cnn" else model
    save_model(target, kind, out_path, catalog_version=ds.catalog_version)
    if loss_plot and history:
        from .plots import plot_training_loss
        plot_training_loss(history, loss_plot)
    payload = {"model": kind, "out": str(out_path),
               "examples": len(ds.examples),
               "lossHistory": history or []}
    _emit(payload, as_json, f"trained {kind} on {len(ds.examples)} "
          f"examples -> {out_path}")


@main.command()
@click.option("--dataset", "dataset_path", type=click.Path(exists=True),
              required=True)
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Optional JSON trial log.")
@click.option("--json", "as_json", is_flag=True, help="JSON output.")
@handle_errors
def tune(dataset_path, trials, seed, out_path, as_json):
    """Random search over CNN hyperparameters."""
    ds = load_dataset(dataset_path, seed=seed)
    X, y = dataset_arrays(ds)
    best, log = tune_hyperparameters(X, y, trials=trials, seed=seed)
    rows = [vars(r) for r in log]
    payload = {"best": vars(best), "trials": rows}
    if out_path:
        Path(out_path).write_text(json.dumps(payload, indent=2),
                                  encoding="utf-8")
    _emit(payload, as_json,
          f"best of {trials} trials: batch={best.batch_size} "
          f"deconv={best.deconv_units} dropout={best.dropout_rate:.3f} "
          f"dense={best.dense_units} loss={best.final_loss:.4f}")


def _holdout_split(n, seed, test_fraction=0.3):
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    cut = max(1, int(n * test_fraction))
    return order[cut:], order[:cut]


@main.command("eval")
@click.option("--dataset", "dataset_path", type=click.Path(exists=True),
              required=True)
@click.option("--models", default="cnn,rf,svm,nb,lr", show_default=True,
              help="Comma-separated model kinds.")
@click.option("--iters", type=int, default=0, show_default=True,
              help="Bootstrap iterations per model (0 = holdout only).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True,
              help="Report JSON; TSV and figures land alongside it.")
@click.option("--emit-pca", "pca_path", type=click.Path(), default=None,
              help="Write 2-D PCA points + labels CSV.")
@click.option("--no-figures", is_flag=True, help="Skip PNG rendering.")
@click.option("--json", "as_json", is_flag=True, help="JSON output.")
@handle_errors
def eval_cmd(dataset_path, models, iters, seed, out_path, pca_path,
             no_figures, as_json):
    """Evaluate models on a held-out split, run pairwise McNemar tests,
    and render report figures next to the delimited output."""
    kinds = [k.strip() for k in models.split(",") if k.strip()]
    unknown = set(kinds) - set(MODEL_KINDS)
    if unknown:
        raise click.UsageError(f"unknown model kinds: {sorted(unknown)}")
    ds = load_dataset(dataset_path, seed=seed)
    X, y = dataset_arrays(ds)
    train_idx, test_idx = _holdout_split(len(y), seed)
    rows, hard_preds = [], {}
    for kind in kinds:
        model, _ = fit_model(kind, X[train_idx], y[train_idx], seed=seed)
        probs = model.predict_proba(X[test_idx])
        preds = probs >= 0.5
        hard_preds[kind] = preds
        p, r, f1 = prf(ConfusionCounts.from_predictions(preds, y[test_idx]))
        row = {"model": kind, "precision": p, "recall": r, "f1": f1,
               "pr_auc": pr_auc(list(zip(probs, y[test_idx])))}
        if iters > 0:
            boot = bootstrap_validate(X, y, kind=kind, iterations=iters,
                                      seed=seed)
            row["bootstrap"] = {
                "iterations": iters,
                "mean": vars(boot.mean),
                "ci95": [vars(boot.ci_low), vars(boot.ci_high)],
            }
        rows.append(row)
    pairs = list(itertools.combinations(kinds, 2))
    pairwise = []
    for a, b in pairs:
        res = mcnemar(hard_preds[a], hard_preds[b], y[test_idx],
                      comparisons=max(1, len(pairs)))
        pairwise.append({
            "a": a, "b": b, "bCount": res.b, "cCount": res.c,
            "statistic": res.statistic, "pValue": res.p_value,
            "oddsRatio": (None if res.odds_ratio == float("inf")
                          else res.odds_ratio),
            "adjustedAlpha": res.adjusted_alpha,
            "significant": res.significant,
        })
    report = {"dataset": str(dataset_path), "seed": seed,
              "testExamples": int(len(test_idx)),
              "models": rows, "pairwise": pairwise}
    out_path = Path(out_path)
    out_path.write_text(json.dumps(report, indent=2), encoding="utf-8")
    tsv_path = out_path.with_suffix(".tsv")
    with open(tsv_path, "w", encoding="utf-8") as fh:
        fh.write("model\tprecision\trecall\tf1\tpr_auc\n")
        for row in rows:
            fh.write(f"{row['model']}\t{row['precision']:.6f}\t"
                     f"{row['recall']:.6f}\t{row['f1']:.6f}\t"
                     f"{row['pr_auc']:.6f}\n")
    points = labels_out = None
    if pca_path or not no_figures:
        points, explained, _ = pca_project(
            [e.vector.values for e in ds.examples], seed=seed)
        labels_out = y
    if pca_path:
        with open(pca_path, "w", encoding="utf-8") as fh:
            fh.write("component1,component2,label\n")
            for (c1, c2), label in zip(points, labels_out):
                fh.write(f"{c1:.9g},{c2:.9g},{label}\n")
    if not no_figures:
        from .plots import plot_model_metrics, plot_pca_scatter
        plot_model_metrics(rows, out_path.with_name(
            out_path.stem + "-metrics.png"))
        plot_pca_scatter(points, labels_out, explained, out_path.with_name(
            out_path.stem + "-pca.png"))
    _emit(report, as_json,
          "\n".join(f"{r['model']}: P={r['precision']:.3f} "
                    f"R={r['recall']:.3f} F1={r['f1']:.3f} "
                    f"PR-AUC={r['pr_auc']:.3f}" for r in rows)
          + f"\nreport -> {out_path}")


@main.command("score-candidates")
@click.argument("source", type=click.Path(exists=True))
@click.option("--top", type=int, default=0,
              help="Only the N best-scored candidates (0 = all).")
@click.option("--min-statements", type=int, default=2, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="JSON output.")
@handle_errors
def score_candidates_cmd(source, top, min_statements, as_json):
    """Rank extractable fragments of a Java file (TSV on stdout)."""
    file = _load_source(source)
    pool = []
    for _, method in file.methods():
        pool.extend(scored_candidates(file, method,
                                      min_statements=min_statements))
    ranked = rank_candidates(pool)
    if top:
        ranked = ranked[:top]
    rows = []
    for cand in ranked:
        start, end = cand.fragment.lines()
        rows.append({"path": file.path, "startLine": start, "endLine": end,
                     "method": cand.fragment.enclosing_method.attrs["name"],
                     "lengthScore": cand.scores.length,
                     "depthScore": cand.scores.depth,
                     "areaScore": cand.scores.area,
                     "totalScore": cand.scores.total})
    if as_json:
        _emit({"candidates": rows}, True, "")
        return
    lines = ["path\tstartLine\tendLine\tmethod\tlengthScore\tdepthScore"
             "\tareaScore\ttotalScore"]
    for r in rows:
        lines.append(f"{r['path']}\t{r['startLine']}\t{r['endLine']}\t"
                     f"{r['method']}\t{r['lengthScore']:.6f}\t"
                     f"{r['depthScore']:.6f}\t{r['areaScore']:.6f}\t"
                     f"{r['totalScore']:.6f}")
    click.echo("\n".join(lines))


@main.command()
@click.argument("source", type=click.Path(exists=True))
@click.option("--start", type=int, required=True, help="1-based start line.")
@click.option("--end", type=int, required=True, help="1-based end line.")
@click.option("--name", required=True, help="New method name.")
@click.option("--dry-run", is_flag=True,
              help="Print the diff without writing the file.")
@click.option("--json", "as_json", is_flag=True, help="JSON output.")
@click.pass_context
@handle_errors
def extract(ctx, source, start, end, name, dry_run, as_json):
    """Extract the statement range into a new method, replacing exact
    duplicates with calls. Prints a unified diff."""
    import difflib
    settings = _settings(ctx)
    file = _load_source(source)
    fragment, method, class_node = resolve_fragment(file, start, end)
    matches = find_duplicates(fragment, file, settings.clone_threshold)
    plan = plan_extraction(fragment, method, class_node, name, matches)
    new_file = apply_plan(plan, file)
    diff = "".join(difflib.unified_diff(
        file.content.splitlines(keepends=True),
        new_file.content.splitlines(keepends=True),
        fromfile=str(source), tofile=str(source)))
    if not dry_run:
        Path(source).write_text(new_file.content, encoding="utf-8")
    _emit({"diff": diff, "applied": not dry_run,
           "replacedSites": len(plan.replacement_sites)}, as_json, diff)


@main.command()
@click.argument("source", type=click.Path(exists=True))
@click.option("--model", "model_path", type=click.Path(exists=True),
              default=None,
              help="Classifier file; omit to skip probability gating.")
@click.option("--min-statements", type=int, default=2, show_default=True)
@click.pass_context
@handle_errors
def analyze(ctx, source, model_path, min_statements):
    """One-shot batch mode: print duplicate-backed, extractable
    recommendations for a file as JSON."""
    settings = _settings(ctx)
    classifier = None
    if model_path:
        _, classifier = load_classifier(model_path)
    file = _load_source(source)
    recommendations = []
    for class_node, method in file.methods():
        for cand in scored_candidates(file, method,
                                      min_statements=min_statements):
            fragment = cand.fragment
            matches = find_duplicates(fragment, file,
                                      settings.clone_threshold)
            if not matches:
                continue
            probability = None
            if classifier is not None:
                from .metrics import compute_metrics
                vector = compute_metrics(fragment, method, class_node)
                probability = float(classifier.predict_proba(
                    np.asarray([vector.values]))[0])
                if probability < settings.decision_threshold:
                    continue
            start, end = fragment.lines()
            recommendations.append({
                "path": file.path, "startLine": start, "endLine": end,
                "method": method.attrs["name"],
                "matchCount": len(matches),
                "exactMatchCount": sum(m.kind == "Exact" for m in matches),
                "probability": probability,
                "totalScore": cand.scores.total,
            })
    click.echo(json.dumps({"recommendations": recommendations}, indent=2))


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--model", "model_path", type=click.Path(exists=True),
              default=None)
@click.option("--counters", "counters_path", type=click.Path(), default=None,
              help="XML file persisting the event counters.")
@click.pass_context
@handle_errors
def serve(ctx, port, host, model_path, counters_path):
    """Run the paste-watching HTTP service."""
    import uvicorn

    from .sentinel import SentinelService, create_app
    settings = _settings(
        ctx, **({"model.path": model_path} if model_path else {}))
    service = SentinelService(settings=settings,
                              counters_path=counters_path)
    uvicorn.run(create_app(service), host=host, port=port)


if __name__ == "__main__":
    main()
