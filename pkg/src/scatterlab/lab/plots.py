"""Plot data and standalone plot scripts for a result directory.

Each emitter writes CSV tables into `<result>/plots/` and one script per figure family. The
scripts only need pandas and matplotlib, read the CSVs next to them and save PNG files.
"""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

import pandas as pd

from scatterlab.lab.manifest import ManifestError, load_manifest
from scatterlab.lab.runner import ROWS_NAME, STATUS_OK
from scatterlab.lab.writer import write_table

if TYPE_CHECKING:
    from collections.abc import Callable

    from scatterlab.lab.manifest import Manifest

PLOTS_DIR = "plots"

_SCRIPT_HEADER = '''"""Generated by scatterlab. Run from this directory: python {name}"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd
'''


def _read(result_dir: Path, name: str) -> pd.DataFrame:
    path = result_dir / name
    if not path.is_file():
        msg = f"result directory {result_dir} has no {name}"
        raise ManifestError(msg)
    return pd.read_csv(path)


def _script(plots: Path, name: str, body: str) -> Path:
    path = plots / name
    path.write_text(_SCRIPT_HEADER.format(name=name) + "\n" + body.strip() + "\n")
    return path


def _level_column(level: float) -> str:
    return f"rho_h{level:g}"


def _emit_sweep(result_dir: Path, plots: Path, manifest: Manifest) -> list[Path]:
    rows = _read(result_dir, ROWS_NAME)
    ok = rows[rows["status"] == STATUS_OK]
    files = []
    waves = sorted(rows["wave"].unique())
    for wave in waves:
        table = ok[ok["wave"] == wave].pivot_table(index="k", columns="level", values="rho").sort_index()
        table = table[sorted(table.columns, reverse=True)]
        table.columns = [_level_column(level) for level in table.columns]
        files.append(write_table(plots / f"rho_{wave}.csv", table.reset_index()))
    floor = manifest.config.get("floor")
    floor_line = f'    ax.axhline({floor!r}, color="k", linestyle="--", label="floor")\n' if floor else ""
    body = f"""
for wave in {waves!r}:
    data = pd.read_csv(f"rho_{{wave}}.csv")
    fig, ax = plt.subplots()
    for column in data.columns[1:]:
        ax.semilogy(data["k"], data[column], label=column)
{floor_line}    ax.set_xlabel("k")
    ax.set_ylabel("rho(k; v)")
    ax.set_title(wave)
    ax.legend()
    fig.savefig(f"rho_{{wave}}.png", dpi=150)
"""
    files.append(_script(plots, "plot_rho.py", body))
    return files


def _emit_jumps(result_dir: Path, plots: Path, manifest: Manifest) -> list[Path]:  # noqa: ARG001
    jumps = _read(result_dir, "jumps.csv")
    files = []
    points = sorted(int(p) for p in jumps["point"].unique())
    for point in points:
        subset = jumps[jumps["point"] == point].copy()
        subset["entry"] = "d" + subset["i"].astype(str) + subset["j"].astype(str)
        subset["abs"] = (subset["re"] ** 2 + subset["im"] ** 2) ** 0.5
        table = subset.pivot_table(index=["eta", "spacing"], columns="entry", values=["re", "im", "abs"])
        table.columns = [f"{entry}_{part}" for part, entry in table.columns]
        table = table[sorted(table.columns)].sort_index(ascending=False)
        files.append(write_table(plots / f"jump_point{point}.csv", table.reset_index()))
    integrals = _read(result_dir, "integrals.csv")
    files.append(write_table(plots / "jump_integrals.csv", integrals))
    body = f"""
for point in {points!r}:
    data = pd.read_csv(f"jump_point{{point}}.csv")
    fig, ax = plt.subplots()
    for column in [c for c in data.columns if c.endswith("_abs")]:
        ax.loglog(data["eta"], data[column], marker="o", label=column[:-4])
    ax.set_xlabel("eta")
    ax.set_ylabel("|jump|")
    ax.set_title(f"point {{point}}")
    ax.legend()
    fig.savefig(f"jump_point{{point}}.png", dpi=150)

integrals = pd.read_csv("jump_integrals.csv")
fig, ax = plt.subplots()
for graph, group in integrals.groupby("graph"):
    ax.semilogx(group["eta"], group["ratio"], marker="o", label=graph)
ax.set_xlabel("eta")
ax.set_ylabel("jump integral / comparison integral")
ax.legend()
fig.savefig("jump_integrals.png", dpi=150)
"""
    files.append(_script(plots, "plot_jumps.py", body))
    return files


def _emit_radial(result_dir: Path, plots: Path, manifest: Manifest) -> list[Path]:  # noqa: ARG001
    files = [
        write_table(plots / "determinant.csv", _read(result_dir, "determinant.csv")),
        write_table(plots / "roots.csv", _read(result_dir, "spectrum.csv")[["order", "k"]]),
    ]
    rows = _read(result_dir, ROWS_NAME)
    ok = rows[rows["status"] == STATUS_OK]
    files.append(write_table(plots / "radial_rho.csv", ok[["level", "order", "root", "k", "rho"]]))
    body = """
determinant = pd.read_csv("determinant.csv")
roots = pd.read_csv("roots.csv")
rho = pd.read_csv("radial_rho.csv")
fig, ax = plt.subplots()
for column in determinant.columns[1:]:
    ax.plot(determinant["k"], determinant[column], label=column)
ax.plot(roots["k"], 0 * roots["k"], "kx", label="roots")
ax.axhline(0, color="0.7", linewidth=0.5)
ax.set_xlabel("k")
ax.set_ylabel("d_l(k)")
ax.legend(loc="upper left")
right = ax.twinx()
for (level, order), group in rho.groupby(["level", "order"]):
    right.semilogy(group["k"], group["rho"], "o", label=f"rho h={level:g} l={order}")
right.set_ylabel("rho")
right.legend(loc="upper right")
fig.savefig("radial.png", dpi=150)
"""
    files.append(_script(plots, "plot_radial.py", body))
    return files


def _emit_stationary(result_dir: Path, plots: Path, manifest: Manifest) -> list[Path]:  # noqa: ARG001
    rows = _read(result_dir, ROWS_NAME)
    table = rows.pivot_table(index="k", columns="density", values="scaled_residual").sort_index()
    table.columns = [f"density{int(d)}" for d in table.columns]
    files = [write_table(plots / "ladder.csv", table.reset_index())]
    body = """
data = pd.read_csv("ladder.csv")
fig, ax = plt.subplots()
for column in data.columns[1:]:
    ax.loglog(data["k"], data[column], marker="o", label=column)
ax.set_xlabel("k")
ax.set_ylabel("sup residual * sqrt(k)")
ax.legend()
fig.savefig("ladder.png", dpi=150)
"""
    files.append(_script(plots, "plot_ladder.py", body))
    return files


def _emit_sources(result_dir: Path, plots: Path, manifest: Manifest) -> list[Path]:  # noqa: ARG001
    rows = _read(result_dir, ROWS_NAME)
    ok = rows[rows["status"] == STATUS_OK]
    table = ok.pivot_table(index="level", columns="source", values="far_norm").sort_index(ascending=False)
    files = [write_table(plots / "source_norms.csv", table.reset_index())]
    body = """
data = pd.read_csv("source_norms.csv")
fig, ax = plt.subplots()
for column in data.columns[1:]:
    ax.loglog(data["level"], data[column], marker="o", label=column)
ax.invert_xaxis()
ax.set_xlabel("h")
ax.set_ylabel("far-field norm")
ax.legend()
fig.savefig("source_norms.png", dpi=150)
"""
    files.append(_script(plots, "plot_sources.py", body))
    return files


PLOT_EMITTER_MAP: dict[str, Callable[[Path, Path, Manifest], list[Path]]] = {
    "corner_scatter": _emit_sweep,
    "jump_probe": _emit_jumps,
    "nonradiating_source": _emit_sources,
    "radial_nonscatter": _emit_radial,
    "stationary_phase": _emit_stationary,
    "sweep": _emit_sweep,
}


def emit_plots(result_dir: str | Path) -> list[Path]:
    """Write plot data and scripts for a finished run.

    Args:
        result_dir: Directory written by run_experiment

    Returns:
        The emitted files, sorted

    Raises:
        ManifestError: If the directory has no valid manifest or lacks a result table
    """
    root = Path(result_dir)
    manifest = load_manifest(root)
    plots = root / PLOTS_DIR
    plots.mkdir(exist_ok=True)
    return sorted(PLOT_EMITTER_MAP[manifest.kind](root, plots, manifest))
