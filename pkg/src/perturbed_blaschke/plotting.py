"""Annotated matplotlib figures next to the raw PPM output."""
from __future__ import annotations

from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle  # noqa: E402

from .render import ImageBuffer  # noqa: E402

__all__ = ["save_figure"]


def save_figure(
    image: ImageBuffer,
    path: str | Path,
    *,
    center: complex,
    width: float,
    height: float,
    title: str = "",
    points: Iterable[tuple[str, complex]] = (),
    circles: Iterable[tuple[str, float]] = (),
    xlabel: str = "Re",
    ylabel: str = "Im",
    dpi: int = 150,
) -> Path:
    """Draw ``image`` on its complex window with labelled points and circles.

    ``circles`` are centred at the origin and given by radius.
    """
    extent = (
        center.real - width / 2,
        center.real + width / 2,
        center.imag - height / 2,
        center.imag + height / 2,
    )
    fig, ax = plt.subplots(figsize=(6, 6 * height / width + 0.4))
    ax.imshow(image.pixels, extent=extent, origin="upper", interpolation="nearest")
    for label, r in circles:
        ax.add_patch(Circle((0, 0), r, fill=False, ls="--", lw=0.8, color="tab:blue"))
        ax.annotate(label, (r * 0.7071, r * 0.7071), color="tab:blue", fontsize=8)
    for label, z in points:
        ax.plot(z.real, z.imag, "o", ms=4, mfc="none", color="tab:cyan")
        ax.annotate(label, (z.real, z.imag), xytext=(4, 4), textcoords="offset points", fontsize=8, color="tab:cyan")
    ax.set_xlim(extent[0], extent[1])
    ax.set_ylim(extent[2], extent[3])
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title, fontsize=10)
    ax.ticklabel_format(style="sci", scilimits=(-3, 3))
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=dpi, metadata={"Software": None})
    plt.close(fig)
    return path
