"""Report figures: one PNG per verification suite plus a run summary.

Rendered with the Agg backend so the CLI works headless; figures sit next
to the structured report files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_PASS = "#2e7d32"
_FAIL = "#c62828"
_SKIP = "#9e9e9e"


def _param_line(report):
    parts = []
    for k, v in sorted(report.params.items()):
        if isinstance(v, dict):
            continue
        parts.append(f"{k}={v}")
    return ", ".join(parts)


def report_figure(report, path):
    """Stacked counts of checked/skipped grid points with the verdict."""
    fig, ax = plt.subplots(figsize=(7.0, 2.4))
    color = _PASS if report.status == "pass" else _FAIL
    n_bad = len(report.violations)
    n_ok = report.checked - n_bad
    ax.barh([0], [n_ok], color=color, label=f"checked clean ({n_ok})")
    left = n_ok
    if n_bad:
        ax.barh([0], [n_bad], left=left, color=_FAIL, hatch="//",
                label=f"violations ({n_bad})")
        left += n_bad
    if report.skipped:
        ax.barh([0], [report.skipped], left=left, color=_SKIP,
                label=f"skipped ({report.skipped})")
    ax.set_yticks([])
    ax.set_xlabel("grid points")
    ax.set_title(f"{report.suite}: {report.status.upper()} "
                 f"({report.millis} ms)", color=color)
    ax.legend(loc="upper right", fontsize=8, frameon=False)
    params = _param_line(report)
    if params:
        ax.annotate(params, xy=(0, -0.32), xycoords="axes fraction",
                    fontsize=7, color="#555555")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def summary_figure(reports, path):
    """Per-suite checked counts, colored by verdict."""
    fig, ax = plt.subplots(figsize=(7.0, 0.5 + 0.38 * len(reports)))
    names = [r.suite for r in reports]
    counts = [r.checked for r in reports]
    colors = [_PASS if r.status == "pass" else _FAIL for r in reports]
    ypos = range(len(reports) - 1, -1, -1)
    ax.barh(list(ypos), counts, color=colors)
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xscale("log")
    ax.set_xlabel("grid points checked (log)")
    n_fail = sum(1 for r in reports if r.status != "pass")
    verdict = "ALL PASS" if n_fail == 0 else f"{n_fail} SUITE(S) FAILED"
    ax.set_title(f"verification summary: {verdict}",
                 color=_PASS if n_fail == 0 else _FAIL)
    for y, r in zip(ypos, reports):
        ax.annotate(f"{r.checked} checked, {r.skipped} skipped",
                    xy=(r.checked, y), xytext=(4, -3),
                    textcoords="offset points", fontsize=7, color="#333333")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
