"""CSV tables and SVG figures for scans and accumulated measures."""
from __future__ import annotations

import csv
import io
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .witnesses import WitnessSample  # noqa: E402

# fixed salt and no timestamp keep the SVG byte-identical across runs
_SVG_RC = {"svg.hashsalt": "choi-witness", "svg.fonttype": "path"}
_SVG_METADATA = {"Date": None, "Creator": None}


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def scan_header(orders: Sequence[int]) -> list[str]:
    return ["t", "gamma", "S_l", "Q"] + [f"S_{a}" for a in orders] + ["lam_min"]


def scan_csv(samples: Sequence[WitnessSample], orders: Sequence[int]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(scan_header(orders))
    for s in samples:
        row = [s.t, s.gamma, s.linear_entropy, s.q] + [s.renyi[a] for a in orders] + [s.lam_min]
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def measures_csv(t0s, ns, ne) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["t0", "N_S", "N_e"])
    for row in zip(t0s, ns, ne):
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _with_gaps(t: np.ndarray, y: np.ndarray, step: float):
    """Insert NaN where consecutive times jump by more than 1.5 grid steps (skipped poles)."""
    if len(t) < 2:
        return t, y
    breaks = np.where(np.diff(t) > 1.5 * step)[0] + 1
    return np.insert(t, breaks, np.nan), np.insert(y, breaks, np.nan)


def _to_svg(fig) -> str:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata=_SVG_METADATA)
    plt.close(fig)
    return buf.getvalue()


def scan_svg(samples: Sequence[WitnessSample], orders: Sequence[int], step: float, title: str = "") -> str:
    t = np.array([s.t for s in samples])
    series = [
        (r"$\gamma(t)$", np.array([s.gamma for s in samples])),
        (r"$10^3\,S_l(C(t))$", 1e3 * np.array([s.linear_entropy for s in samples])),
        (r"$10^2\,Q(A,B,C(t))$", 1e2 * np.array([s.q for s in samples])),
    ]
    series += [(rf"$10^3\,S_{{{a}}}(C(t))$", 1e3 * np.array([s.renyi[a] for s in samples])) for a in orders]
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(7, 4.2))
        for label, y in series:
            ax.plot(*_with_gaps(t, y, step), label=label, lw=1.2)
        ax.axhline(0.0, color="black", lw=0.6)
        finite = np.concatenate([np.abs(y) for _, y in series])
        finite = finite[np.isfinite(finite)]
        if finite.size:
            # poles make gamma unbounded; clip the view to the bulk of the data
            lim = 1.5 * float(np.percentile(finite, 90)) or 1.0
            ax.set_ylim(-lim, lim)
        ax.set_xlabel("t")
        ax.set_title(title)
        ax.legend(fontsize=8, loc="upper left")
        fig.tight_layout()
        return _to_svg(fig)


def measures_svg(t0s, ns, ne, title: str = "") -> str:
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(7, 4.2))
        ax.plot(t0s, ns, label=r"$\mathcal{N}_S$")
        ax.set_xlabel(r"$t_0$")
        ax.set_ylabel(r"$\mathcal{N}_S$")
        ax2 = ax.twinx()
        ax2.plot(t0s, ne, color="tab:red", ls="--", label=r"$\mathcal{N}_e$")
        ax2.set_ylabel(r"$\mathcal{N}_e$")
        lines = ax.get_lines() + ax2.get_lines()
        ax.legend(lines, [line.get_label() for line in lines], loc="upper left")
        ax.set_title(title)
        fig.tight_layout()
        return _to_svg(fig)
