"""Deterministic result artifacts: CSV telemetry, JSON summaries, and
matplotlib figures rendered to files alongside the delimited output.

CSV and JSON bytes are stable under identical inputs (shortest round-trip
float formatting, sorted JSON keys); figures are a convenience layer on
top of the same data and carry no byte-stability contract."""

import json
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1

CSV_FIELDS = ("iter", "queries", "f_value", "gap", "eta", "tau")


def fmt_float(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_records_csv(path, records) -> None:
    lines = [",".join(CSV_FIELDS)]
    for r in records:
        lines.append(",".join(fmt_float(getattr(r, f)) for f in CSV_FIELDS))
    Path(path).write_text("\n".join(lines) + "\n")


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def queries_to_target(records, rel_target: float, gap0: float):
    """Queries at the first record whose gap meets ``rel_target * gap0``;
    None when no record does. No interpolation."""
    if gap0 is None:
        return None
    for r in records:
        if r.gap is not None and r.gap <= rel_target * gap0:
            return int(r.queries)
    return None


def _new_figure(figsize=(6.0, 4.0)):
    from matplotlib.figure import Figure
    fig = Figure(figsize=figsize)
    return fig, fig.add_subplot(111)


def plot_gap_curves(curves: dict, path, ylabel: str = "optimality gap",
                    title: str | None = None) -> None:
    """Semilog gap-vs-queries curves, one line per method/seed label."""
    fig, ax = _new_figure()
    for label, (queries, values) in sorted(curves.items()):
        q = np.asarray(queries, dtype=float)
        v = np.asarray(values, dtype=float)
        mask = np.isfinite(v) & (v > 0)
        ax.semilogy(q[mask], v[mask], label=label, linewidth=1.2)
    ax.set_xlabel("oracle queries")
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if curves:
        ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.savefig(path, dpi=150, bbox_inches="tight")


def plot_spectrum(eigenvalues, path, title: str | None = None) -> None:
    fig, ax = _new_figure()
    eigs = np.asarray(eigenvalues, dtype=float)
    ax.semilogy(np.arange(1, eigs.size + 1), eigs, linewidth=1.2)
    ax.set_xlabel("index")
    ax.set_ylabel("eigenvalue")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    fig.savefig(path, dpi=150, bbox_inches="tight")


def plot_trace_check(report: dict, path, title: str | None = None) -> None:
    """Success fractions of the trace-concentration event per kind and ell."""
    fig, ax = _new_figure()
    kinds = sorted(report)
    width = 0.8 / max(len(kinds), 1)
    all_ells = sorted({int(e) for k in kinds for e in report[k]})
    xs = np.arange(len(all_ells), dtype=float)
    for j, kind in enumerate(kinds):
        fracs = [report[kind].get(str(e), {}).get("success_frac", np.nan) for e in all_ells]
        ax.bar(xs + j * width, fracs, width=width, label=kind)
    ax.set_xticks(xs + 0.4 - width / 2)
    ax.set_xticklabels([str(e) for e in all_ells])
    ax.set_xlabel("sketch size ell")
    ax.set_ylabel("P(|tau - tr| <= eps * tr)")
    ax.set_ylim(0, 1.05)
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    ax.grid(True, axis="y", alpha=0.3)
    fig.savefig(path, dpi=150, bbox_inches="tight")
