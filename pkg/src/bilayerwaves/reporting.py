"""CSV/JSON report writers and the matplotlib figures rendered next to
them.

Fixed delimited schemas (machine-diffable):
  reports    dx,dt,L,T,epsilon,model_a,model_b,rel_l2_error,wall_time_s
  snapshots  x,eta1,eta2,v1,v2,zeta1,zeta2
Every report CSV is accompanied by a provenance JSON echoing the full
configuration and any derived summary (orders, slopes, distances), so a
run can be reproduced from its outputs alone.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = [
    "ReportRow",
    "ExperimentReport",
    "write_snapshot_csv",
    "write_timeseries_csv",
    "fig_convergence",
    "fig_epsilon_scaling",
    "fig_error_in_time",
    "fig_snapshot",
    "fig_interface_comparison",
    "fig_critical_ratio",
    "fig_regime_map",
]

REPORT_HEADER = ["dx", "dt", "L", "T", "epsilon", "model_a", "model_b",
                 "rel_l2_error", "wall_time_s"]


@dataclass(frozen=True)
class ReportRow:
    dx: float
    dt: float
    L: float
    T: float
    epsilon: float
    model_a: str
    model_b: str
    rel_l2_error: float
    wall_time_s: float


@dataclass
class ExperimentReport:
    """Rows in the fixed schema plus a provenance block (config echo and
    derived summary statistics)."""

    rows: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    def add(self, **kw):
        self.rows.append(ReportRow(**kw))

    def write(self, outdir: str | Path, stem: str) -> Path:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        csv_path = outdir / f"{stem}.csv"
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(REPORT_HEADER)
            for r in self.rows:
                w.writerow([r.dx, r.dt, r.L, r.T, r.epsilon, r.model_a,
                            r.model_b, f"{r.rel_l2_error:.10e}",
                            f"{r.wall_time_s:.4f}"])
        side = {"provenance": self.provenance, "summary": self.summary}
        (outdir / f"{stem}.json").write_text(json.dumps(side, indent=2) + "\n")
        return csv_path


def write_snapshot_csv(path: str | Path, x: np.ndarray, U: np.ndarray) -> Path:
    """Dump a 4-component state with the derived surface/interface columns
    zeta1 = eta1 + eta2, zeta2 = eta2."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    eta1, eta2, v1, v2 = U
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "eta1", "eta2", "v1", "v2", "zeta1", "zeta2"])
        zeta1 = eta1 + eta2
        for i in range(x.size):
            w.writerow([f"{x[i]:.6f}"] + [f"{v:.10e}" for v in
                                          (eta1[i], eta2[i], v1[i], v2[i],
                                           zeta1[i], eta2[i])])
    return path


def write_timeseries_csv(path: str | Path, rows) -> Path:
    """Error-growth series: rows of (family, epsilon, t, rel_l2_error)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["family", "epsilon", "t", "rel_l2_error"])
        for family, eps, t, err in rows:
            w.writerow([family, eps, f"{t:.6f}", f"{err:.10e}"])
    return path


# ---------------------------------------------------------------------------
# figures


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def fig_convergence(path, resolutions, errors_by_label, reference_order=2.0):
    """log-log error vs spacing with a reference slope."""
    fig, ax = plt.subplots(figsize=(5, 4))
    h = np.asarray(resolutions, dtype=float)
    for label, errs in errors_by_label.items():
        ax.loglog(h, errs, "o-", label=label)
    anchor = max(max(e) for e in errors_by_label.values())
    ax.loglog(h, anchor * (h / h.max()) ** reference_order, "k--",
              label=f"order {reference_order:g}")
    ax.set_xlabel("dx = dt")
    ax.set_ylabel("relative L2 error")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    return _save(fig, path)


def fig_epsilon_scaling(path, epsilons, errors_by_label, slopes=None):
    fig, ax = plt.subplots(figsize=(5, 4))
    eps = np.asarray(epsilons, dtype=float)
    for label, errs in errors_by_label.items():
        extra = ""
        if slopes and label in slopes:
            extra = f" (slope {slopes[label]:.2f})"
        ax.loglog(eps, errs, "o-", label=label + extra)
    ax.set_xlabel("epsilon")
    ax.set_ylabel("relative L2 error at fixed time")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    return _save(fig, path)


def fig_error_in_time(path, series_by_family):
    """series_by_family: {family: {epsilon: (t_array, err_array)}}."""
    n = len(series_by_family)
    fig, axes = plt.subplots(1, n, figsize=(5 * n, 4), squeeze=False)
    for ax, (family, per_eps) in zip(axes[0], series_by_family.items()):
        for eps in sorted(per_eps, reverse=True):
            t, err = per_eps[eps]
            ax.plot(t, err, label=f"eps = {eps:g}")
        ax.set_xlabel("t")
        ax.set_ylabel("relative L2 error")
        ax.set_title(family)
        ax.legend()
        ax.grid(True, alpha=0.3)
    return _save(fig, path)


def fig_snapshot(path, x, states_by_model, initial=None, error_scale=10.0):
    """Interface and surface traces of each model at one time, with the
    initial interface and the scaled difference of the first two models."""
    fig, axes = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    for label, U in states_by_model.items():
        axes[0].plot(x, U[0] + U[1], label=label)
        axes[1].plot(x, U[1], label=label)
    if initial is not None:
        axes[1].plot(x, initial[1], "k:", alpha=0.6, label="initial")
    models = list(states_by_model)
    if len(models) >= 2:
        diff = states_by_model[models[0]][1] - states_by_model[models[1]][1]
        axes[1].plot(x, error_scale * diff, alpha=0.5,
                     label=f"{error_scale:g}x interface difference")
    axes[0].set_ylabel("surface zeta1")
    axes[1].set_ylabel("interface zeta2")
    axes[1].set_xlabel("x")
    for ax in axes:
        ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)
    return _save(fig, path)


def fig_interface_comparison(path, x, traces_by_label, title=""):
    fig, ax = plt.subplots(figsize=(8, 4))
    for label, trace in traces_by_label.items():
        ax.plot(x, trace, label=label)
    ax.set_xlabel("x")
    ax.set_ylabel("interface deviation")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def fig_critical_ratio(path, gammas, delta_c, delta_c_rigid):
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(gammas, delta_c, label="free surface")
    ax.plot(gammas, delta_c_rigid, "--", label="rigid lid (sqrt(gamma))")
    ax.set_xlabel("gamma")
    ax.set_ylabel("critical depth ratio")
    ax.legend()
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def fig_regime_map(path, gammas, delta_c, marked_points=None):
    """Polarity / magnitude thresholds in the (gamma, delta) plane."""
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    g = np.asarray(gammas)
    ax.plot(g, delta_c, "b-", label="polarity flip (slow mode)")
    ax.plot(g, 2 * (1 - 2 * g), "g--", label="surface/interface magnitude")
    ax.plot(g, 1 - 2 * g, "r-.", label="fast/slow magnitude (v0 = 0)")
    if marked_points:
        for name, (pg, pd) in marked_points.items():
            ax.plot([pg], [pd], "ko")
            ax.annotate(name, (pg, pd), textcoords="offset points", xytext=(5, 5))
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 2.2)
    ax.set_xlabel("gamma")
    ax.set_ylabel("delta")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    return _save(fig, path)
