"""Report figures rendered next to the delimited evaluation output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

METRIC_COLUMNS = ("precision", "recall", "f1", "pr_auc")


def plot_model_metrics(rows, path):
    """Grouped bar chart of P/R/F1/PR-AUC per model. rows is a list of
    dicts with a 'model' key plus the four metric keys."""
    models = [r["model"] for r in rows]
    x = np.arange(len(models))
    width = 0.8 / len(METRIC_COLUMNS)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for i, metric in enumerate(METRIC_COLUMNS):
        values = [r[metric] for r in rows]
        ax.bar(x + i * width, values, width, label=metric.replace("_", "-"))
    ax.set_xticks(x + 1.5 * width)
    ax.set_xticklabels(models)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("score")
    ax.set_title("Held-out classification metrics per model")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_pca_scatter(points, labels, explained, path):
    """2-D projection scatter, one color per class."""
    points = np.asarray(points)
    labels = np.asarray(labels)
    fig, ax = plt.subplots(figsize=(6, 5))
    for value, color, name in ((0, "tab:purple", "negative"),
                               (1, "tab:olive", "positive")):
        mask = labels == value
        ax.scatter(points[mask, 0], points[mask, 1], s=12, alpha=0.6,
                   c=color, label=name)
    ax.set_xlabel(f"component 1 ({explained[0]:.1%} variance)")
    ax.set_ylabel(f"component 2 ({explained[1]:.1%} variance)")
    ax.set_title("Metric-space projection of labeled fragments")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_training_loss(history, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(range(1, len(history) + 1), history, marker="o")
    ax.set_xlabel("epoch")
    ax.set_ylabel("mean training loss")
    ax.set_title("Training loss per epoch")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
