"""Figure rendering for the report path.

Consumes the same JSON atlases and reports the CLI emits and renders
matplotlib figures next to delimited/JSON data files.  Everything is
seeded and deterministic up to matplotlib rasterization.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import sampling as sp  # noqa: E402
from . import topology as tp  # noqa: E402


def render_component_atlas(mbar, n: int, out_dir: Path) -> list[Path]:
    """Bar chart of component dimensions, one bar per multiplicity tuple,
    alongside the JSON atlas."""
    infos = tp.component_atlas(mbar, n)
    tag = f"components_{'-'.join(str(m) for m in mbar)}_to_{n}"
    json_path = out_dir / f"{tag}.json"
    json_path.write_text(
        json.dumps([tp.component_info_to_json(i) for i in infos], indent=1) + "\n"
    )
    labels = ["(" + ",".join(str(s) for s in i.tuple.sbar) + ")" for i in infos]
    dims = [i.real_dimension for i in infos]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.9 * len(infos)), 3.0))
    ax.bar(range(len(infos)), dims, color=["#888888" if i.is_point else "#3465a4" for i in infos])
    ax.set_xticks(range(len(infos)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("component dimension")
    ax.set_title(f"homomorphism components {list(mbar)} -> [{n}]")
    fig.tight_layout()
    png_path = out_dir / f"{tag}.png"
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return [json_path, png_path]


def render_continuity(samples: int, seed: int, out_dir: Path) -> list[Path]:
    """Worst-ratio summary of the sampled continuity bounds."""
    rep = tp.continuity_report(samples=samples, seed=seed)
    json_path = out_dir / "continuity.json"
    json_path.write_text(json.dumps(rep.to_json(), indent=1) + "\n")
    names = ["embedding", "composition", "monoidal"]
    ratios = [rep.embedding_ratio, rep.composition_ratio, rep.monoidal_ratio]
    fig, ax = plt.subplots(figsize=(4.2, 3.0))
    ax.bar(names, ratios, color="#3465a4")
    ax.axhline(1.0, color="#cc0000", linewidth=1, linestyle="--")
    ax.set_ylabel("worst observed ratio")
    ax.set_ylim(0, 1.15)
    ax.set_title(f"continuity bounds ({rep.samples} samples)")
    fig.tight_layout()
    png_path = out_dir / "continuity.png"
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return [json_path, png_path]


def render_homset_geometry(samples: int, seed: int, out_dir: Path) -> list[Path]:
    """Sampled hom-set geometry: the classical interval [1] -> [1,1] and the
    state space [1] -> [2] projected to Bloch coordinates, as CSV + figure."""
    rng = sp.rng_for(seed)
    interval = []
    bloch = []
    for _ in range(samples):
        c = sp.random_cptp(rng, (1,), (1, 1))
        interval.append(float(tp.transfer_matrix(c)[0, 0].real))
        q = sp.random_cptp(rng, (1,), (2,))
        rho = q.block(0, 0)
        x = float(np.real(rho[0, 1] + rho[1, 0]))
        y = float(np.imag(rho[1, 0] - rho[0, 1]))
        z = float(np.real(rho[0, 0] - rho[1, 1]))
        bloch.append((x, y, z))
    csv_path = out_dir / "homsets.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["interval_p", "bloch_x", "bloch_y", "bloch_z"])
        for p, (x, y, z) in zip(interval, bloch):
            writer.writerow([f"{p:.12f}", f"{x:.12f}", f"{y:.12f}", f"{z:.12f}"])
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(7.0, 3.2))
    ax1.hist(interval, bins=20, range=(0.0, 1.0), color="#3465a4")
    ax1.set_xlabel("p")
    ax1.set_title("channels [1] -> [1,1]")
    theta = np.linspace(0, 2 * np.pi, 200)
    ax2.plot(np.cos(theta), np.sin(theta), color="#cc0000", linewidth=1)
    ax2.scatter([b[0] for b in bloch], [b[2] for b in bloch], s=6, color="#3465a4")
    ax2.set_aspect("equal")
    ax2.set_xlabel("x")
    ax2.set_ylabel("z")
    ax2.set_title("states [1] -> [2] (x-z slice)")
    fig.tight_layout()
    png_path = out_dir / "homsets.png"
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return [csv_path, png_path]


def render_all(out_dir, seed: int = 0, samples: int = 200) -> dict:
    """Run the standard report battery into ``out_dir``; returns a manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs: list[Path] = []
    outputs += render_component_atlas((1, 1), 2, out_dir)
    outputs += render_component_atlas((1, 2), 4, out_dir)
    outputs += render_continuity(samples, seed, out_dir)
    outputs += render_homset_geometry(samples, seed, out_dir)
    return {"seed": seed, "samples": samples, "outputs": [str(p) for p in outputs]}
