"""Figure rendering for sweep outputs: SVG files plus the CSV behind each.

Every figure's data table is written before the figure itself, and SVGs are
kept byte-reproducible: no date metadata, fixed id hash salt.
"""
from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .bounds import nt_curve, optimal_p
from .experiments import ExperimentRecord, atomic_write_text, summarize_records

plt.rcParams["svg.hashsalt"] = "dlabound"
plt.rcParams["figure.dpi"] = 110

# Fixed ordering, colors, and markers per condition group.
GROUP_STYLE = {
    "open/sps": ("tab:blue", "o"),
    "open/ran": ("tab:orange", "s"),
    "closed/sps": ("tab:green", "^"),
    "closed/ran": ("tab:red", "v"),
}


def _write_csv(path: Path, header: list[str], rows: list[list], provenance: dict | None) -> None:
    lines = [f"# {k}={v}" for k, v in (provenance or {}).items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join("" if v is None else (repr(v) if isinstance(v, float) else str(v)) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def _save_svg(fig, path: Path, provenance: dict | None) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    fig.savefig(tmp, format="svg", metadata={"Date": None})
    plt.close(fig)
    text = tmp.read_text(encoding="utf-8")
    if provenance:
        note = " ".join(f"{k}={v}" for k, v in provenance.items())
        pos = text.find("<svg")
        if pos >= 0:
            text = text[:pos] + f"<!-- {note} -->\n" + text[pos:]
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)


def _groups_present(summary: dict) -> list[str]:
    return [g for g in GROUP_STYLE if g in summary["groups"]]


def render_nt_budget(out_dir: Path, provenance: dict | None = None, p_min: float = 0.1, p_max: float = 0.69, points: int = 200) -> list[Path]:
    """Parameter-budget curve with the bisection minimum marked."""
    grid = [p_min + i * (p_max - p_min) / (points - 1) for i in range(points)]
    rows = nt_curve(grid)
    csv_path = out_dir / "fig_nt_budget.csv"
    _write_csv(csv_path, ["p", "nt_budget"], [[p, v] for p, v in rows], provenance)

    p_star, nt_min = optimal_p()
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot([r[0] for r in rows], [r[1] for r in rows], color="tab:blue")
    ax.plot([p_star], [nt_min], "o", color="tab:red")
    ax.annotate(
        f"min ({p_star:.3f}, {nt_min:.2f})",
        xy=(p_star, nt_min),
        xytext=(p_star + 0.04, nt_min + 30),
        arrowprops={"arrowstyle": "->", "lw": 0.8},
        fontsize=9,
    )
    ax.set_yscale("log")
    ax.set_xlabel("per-factor scale p")
    ax.set_ylabel("trainable-parameter budget")
    ax.set_title("Budget 2/((2-e^p)p) + 1")
    ax.grid(alpha=0.3)
    svg_path = out_dir / "fig_nt_budget.svg"
    _save_svg(fig, svg_path, provenance)
    return [csv_path, svg_path]


def _per_n_series(summary: dict, group: str, field: str) -> tuple[list[int], list[float], list[float]]:
    per_n = summary["groups"][group]["per_n"]
    ns, means, stds = [], [], []
    for n_str in sorted(per_n, key=int):
        entry = per_n[n_str]
        if entry.get(f"{field}_mean") is None:
            continue
        ns.append(int(n_str))
        means.append(entry[f"{field}_mean"])
        stds.append(entry.get(f"{field}_std") or 0.0)
    return ns, means, stds


def render_gap_vs_n(summary: dict, out_dir: Path, provenance: dict | None = None) -> list[Path]:
    """Mean positive gap against qubit count with the linear fit per group."""
    rows = []
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for group in _groups_present(summary):
        color, marker = GROUP_STYLE[group]
        ns, means, stds = _per_n_series(summary, group, "gap_pos")
        for n, m, s in zip(ns, means, stds):
            rows.append([group.split("/")[0], group.split("/")[1], n, m, s])
        fit = summary["groups"][group].get("fit_mean_positive_gap")
        label = group
        if fit is not None:
            label = f"{group} (slope {fit['slope']:+.4f}, R$^2$ {fit['r_squared']:.2f})"
        if ns:
            ax.errorbar(ns, means, yerr=stds, color=color, marker=marker, capsize=3, ls="-", label=label)
        if fit is not None and ns:
            xs = [min(ns), max(ns)]
            ax.plot(xs, [fit["slope"] * x + fit["intercept"] for x in xs], color=color, ls="--", lw=0.9, alpha=0.7)
    csv_path = out_dir / "fig_gap_vs_n.csv"
    _write_csv(csv_path, ["boundary", "algo", "n", "gap_pos_mean", "gap_pos_std"], rows, provenance)
    ax.set_xlabel("qubits n")
    ax.set_ylabel("mean positive RMSE gap")
    ax.set_title("Generalization gap vs qubit count")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    svg_path = out_dir / "fig_gap_vs_n.svg"
    _save_svg(fig, svg_path, provenance)
    return [csv_path, svg_path]


def render_rmse_vs_n(summary: dict, out_dir: Path, provenance: dict | None = None) -> list[Path]:
    """Train and test RMSE means against qubit count, one panel per algorithm."""
    rows = []
    fig, axes = plt.subplots(1, 2, figsize=(9.2, 4.2), sharey=True)
    panels = {"sps": axes[0], "ran": axes[1]}
    for group in _groups_present(summary):
        boundary, algo = group.split("/")
        color, marker = GROUP_STYLE[group]
        ax = panels[algo]
        for split, ls in (("train_rmse", "--"), ("test_rmse", "-")):
            ns, means, stds = _per_n_series(summary, group, split)
            for n, m, s in zip(ns, means, stds):
                rows.append([boundary, algo, split, n, m, s])
            if ns:
                ax.errorbar(
                    ns, means, yerr=stds, color=color, marker=marker, ls=ls, capsize=3,
                    label=f"{boundary} {split.split('_')[0]}",
                )
    csv_path = out_dir / "fig_rmse_vs_n.csv"
    _write_csv(csv_path, ["boundary", "algo", "split", "n", "rmse_mean", "rmse_std"], rows, provenance)
    for algo, ax in panels.items():
        ax.set_title(algo)
        ax.set_xlabel("qubits n")
        ax.grid(alpha=0.3)
        ax.legend(fontsize=8)
    axes[0].set_ylabel("RMSE")
    fig.suptitle("Train/test RMSE vs qubit count")
    svg_path = out_dir / "fig_rmse_vs_n.svg"
    _save_svg(fig, svg_path, provenance)
    return [csv_path, svg_path]


def render_cr_vs_n(summary: dict, out_dir: Path, provenance: dict | None = None) -> list[Path]:
    """Mean budget-compliance ratio against qubit count."""
    rows = []
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for group in _groups_present(summary):
        color, marker = GROUP_STYLE[group]
        ns, means, stds = _per_n_series(summary, group, "cr")
        for n, m, s in zip(ns, means, stds):
            rows.append([group.split("/")[0], group.split("/")[1], n, m, s])
        if ns:
            ax.errorbar(ns, means, yerr=stds, color=color, marker=marker, capsize=3, label=group)
    csv_path = out_dir / "fig_cr_vs_n.csv"
    _write_csv(csv_path, ["boundary", "algo", "n", "cr_mean", "cr_std"], rows, provenance)
    ax.set_xlabel("qubits n")
    ax.set_ylabel("compliance ratio")
    ax.set_ylim(-0.05, 1.05)
    ax.set_title("Budget compliance ratio vs qubit count")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    svg_path = out_dir / "fig_cr_vs_n.svg"
    _save_svg(fig, svg_path, provenance)
    return [csv_path, svg_path]


def render_pmax_nmax(summary: dict, out_dir: Path, provenance: dict | None = None) -> list[Path]:
    """Largest trained scale p_max and its budget N_max against qubit count."""
    rows = []
    fig, (ax_p, ax_n) = plt.subplots(1, 2, figsize=(9.2, 4.2))
    ln2 = math.log(2.0)
    for group in _groups_present(summary):
        boundary, algo = group.split("/")
        color, marker = GROUP_STYLE[group]
        ns, p_means, p_stds = _per_n_series(summary, group, "p_max")
        if ns:
            ax_p.errorbar(ns, p_means, yerr=p_stds, color=color, marker=marker, capsize=3, label=group)
        nn, n_means, n_stds = _per_n_series(summary, group, "n_max")
        if nn:
            ax_n.errorbar(nn, n_means, yerr=n_stds, color=color, marker=marker, capsize=3, label=group)
        per_n = summary["groups"][group]["per_n"]
        for n_str in sorted(per_n, key=int):
            e = per_n[n_str]
            rows.append(
                [boundary, algo, int(n_str), e["p_max_mean"], e["p_max_std"], e["n_max_mean"], e["n_max_std"], e["n_max_count"]]
            )
    csv_path = out_dir / "fig_pmax_nmax.csv"
    _write_csv(
        csv_path,
        ["boundary", "algo", "n", "p_max_mean", "p_max_std", "n_max_mean", "n_max_std", "n_max_count"],
        rows,
        provenance,
    )
    ax_p.axhline(ln2, color="gray", ls=":", lw=1, label="ln 2")
    ax_p.set_xlabel("qubits n")
    ax_p.set_ylabel("mean p_max")
    ax_p.set_title("Largest trained scale")
    ax_p.grid(alpha=0.3)
    ax_p.legend(fontsize=8)
    ax_n.set_xlabel("qubits n")
    ax_n.set_ylabel("mean budget at p_max")
    ax_n.set_title("Budget at the largest scale")
    ax_n.grid(alpha=0.3)
    ax_n.legend(fontsize=8)
    svg_path = out_dir / "fig_pmax_nmax.svg"
    _save_svg(fig, svg_path, provenance)
    return [csv_path, svg_path]


def render_reports(records: list[ExperimentRecord], out_dir: Path, provenance: dict | None = None) -> list[Path]:
    """Render every figure family from a record list; [] when nothing usable."""
    out_dir = Path(out_dir)
    ok = [r for r in records if r.status == "ok"]
    if not ok:
        return []
    summary = summarize_records(records)
    paths: list[Path] = []
    paths += render_nt_budget(out_dir, provenance)
    paths += render_gap_vs_n(summary, out_dir, provenance)
    paths += render_rmse_vs_n(summary, out_dir, provenance)
    paths += render_cr_vs_n(summary, out_dir, provenance)
    paths += render_pmax_nmax(summary, out_dir, provenance)
    return paths
