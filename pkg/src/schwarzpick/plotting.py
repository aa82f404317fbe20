"""Figures written next to the CSV sidecars of the CLI."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _figure(width=6.0, height=4.0):
    fig, ax = plt.subplots(figsize=(width, height))
    ax.grid(alpha=0.3)
    return fig, ax


def _save(fig, path):
    fig.tight_layout()
    # fixed metadata keeps repeated renders byte-identical
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def triangle_figure(moduli: np.ndarray, path, title="|D^k_j|"):
    """Heat map of the triangle moduli; rows are j, columns k."""
    fig, ax = _figure(5.0, 4.0)
    ax.grid(False)
    n = moduli.shape[0]
    img = np.full((n, n), np.nan)
    for k in range(n):
        for r in range(k, n):
            img[r, k] = moduli[k, r]
    im = ax.imshow(img, cmap="viridis", vmin=0.0, vmax=max(1.0, float(np.nanmax(img))))
    fig.colorbar(im, ax=ax)
    ax.set_xlabel("level k")
    ax.set_ylabel("row j")
    ax.set_xticks(range(n))
    ax.set_yticks(range(n), [str(j + 1) for j in range(n)])
    ax.set_title(title)
    _save(fig, path)


def series_figure(x, ys: dict, path, xlabel, ylabel, logy=False):
    fig, ax = _figure()
    for label, y in ys.items():
        ax.plot(x, y, marker="o", ms=3, label=label)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if len(ys) > 1:
        ax.legend()
    _save(fig, path)


def disc_figure(points, path, colour=None, title=""):
    """Scatter of points in the unit disc with the boundary circle."""
    fig, ax = _figure(5.0, 5.0)
    t = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(t), np.sin(t), color="k", lw=0.8)
    points = np.asarray(points, dtype=complex)
    sc = ax.scatter(points.real, points.imag, c=colour, s=6, cmap="viridis")
    if colour is not None:
        fig.colorbar(sc, ax=ax)
    ax.set_aspect("equal")
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.set_title(title)
    _save(fig, path)
