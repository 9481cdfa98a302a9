"""Render the reference figures from a tritronquee run directory.

Reads only the solver CLI's documented files (solution.csv, coeffs_domain_*.csv,
end_domain_*.csv, report.json) and writes static two-panel images:

* ``*_solution`` - Re and Im of Omega against x, middle domain in blue, end
  domains in red;
* ``*_v``        - Re and Im of the remainder v against |s| on both end
  domains (left domain blue, right domain red);
* ``*_coeffs``   - Chebyshev coefficient moduli on a log scale, middle domain
  on the left panel, end domains on the right panel.

The ``imag_``/``stokes_`` prefix states which bundled configuration the input
directory is expected to come from; the reading logic is the same.  Rendering
is a pure function of the CSV inputs: with a pinned matplotlib and the Agg
backend, identical inputs give identical files.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)
import numpy as np  # noqa: E402

FIGURE_IDS = ("imag_solution", "imag_v", "imag_coeffs",
              "stokes_solution", "stokes_v", "stokes_coeffs")

MIDDLE_COLOR = "tab:blue"
END_COLOR = "tab:red"
_PNG_METADATA = {"Software": "tritronquee-figures"}


class RenderError(RuntimeError):
    """Missing or malformed input for the requested figure."""


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    input_dir: Path
    output_path: Path

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise RenderError(
                f"unknown figure id {self.figure_id!r}; expected one of {', '.join(FIGURE_IDS)}")
        object.__setattr__(self, "input_dir", Path(self.input_dir))
        object.__setattr__(self, "output_path", Path(self.output_path))


def _read_table(path: Path, expected_header: list[str]) -> np.ndarray:
    if not path.is_file():
        raise RenderError(f"required input {path} is missing")
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise RenderError(f"cannot read {path}: {exc}") from None
    if not rows or rows[0] != expected_header:
        raise RenderError(f"{path} does not start with header {','.join(expected_header)}")
    try:
        data = np.array([[float(cell) for cell in row] for row in rows[1:]], dtype=float)
    except ValueError as exc:
        raise RenderError(f"{path} contains a non-numeric cell: {exc}") from None
    if data.size == 0:
        raise RenderError(f"{path} holds no data rows")
    return data


def _read_junctions(input_dir: Path) -> tuple[float, float]:
    path = input_dir / "report.json"
    if not path.is_file():
        raise RenderError(f"required input {path} is missing")
    try:
        layout = json.loads(path.read_text(encoding="utf-8"))["config"]["layout"]
        return float(layout["x_l"]), float(layout["x_r"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise RenderError(f"cannot read junction abscissas from {path}: {exc}") from None


def _solution_figure(input_dir: Path):
    data = _read_table(input_dir / "solution.csv",
                       ["x", "re_omega", "im_omega", "re_domega_dx", "im_domega_dx"])
    x_l, x_r = _read_junctions(input_dir)
    x = data[:, 0]
    middle = (x >= x_l) & (x <= x_r)

    fig, axes = plt.subplots(1, 2, figsize=(11, 4))
    for ax, column, label in zip(axes, (1, 2), (r"Re $\Omega$", r"Im $\Omega$")):
        for mask, color in ((middle, MIDDLE_COLOR), (x < x_l, END_COLOR), (x > x_r, END_COLOR)):
            if np.any(mask):
                ax.plot(x[mask], data[mask, column], color=color, lw=1.2)
        ax.set_xlabel("$x$")
        ax.set_ylabel(label)
        ax.set_xlim(x.min(), x.max())
    fig.tight_layout()
    return fig


def _remainder_figure(input_dir: Path):
    header = ["l", "re_s", "im_s", "re_v", "im_v"]
    left = _read_table(input_dir / "end_domain_I.csv", header)
    right = _read_table(input_dir / "end_domain_III.csv", header)

    fig, axes = plt.subplots(1, 2, figsize=(11, 4))
    for ax, column, label in zip(axes, (3, 4), ("Re $v$", "Im $v$")):
        for data, color, name in ((left, MIDDLE_COLOR, "left end"),
                                  (right, END_COLOR, "right end")):
            s_mag = np.hypot(data[:, 1], data[:, 2])
            ax.plot(s_mag, data[:, column], color=color, lw=1.2, label=name)
        ax.set_xlabel("$|s|$")
        ax.set_ylabel(label)
    axes[0].legend(frameon=False)
    fig.tight_layout()
    return fig


def _middle_spectra(input_dir: Path) -> list[np.ndarray]:
    single = input_dir / "coeffs_domain_II.csv"
    paths = [single] if single.is_file() else sorted(input_dir.glob("coeffs_domain_II_*.csv"))
    if not paths:
        raise RenderError(f"no middle-domain coefficient file in {input_dir}")
    return [_read_table(p, ["n", "abs_c"]) for p in paths]


def _coefficients_figure(input_dir: Path):
    middles = _middle_spectra(input_dir)
    ends = [(_read_table(input_dir / f"coeffs_domain_{label}.csv", ["n", "abs_c"]),
             color, name)
            for label, color, name in (("I", MIDDLE_COLOR, "left end"),
                                       ("III", END_COLOR, "right end"))]

    fig, (ax_mid, ax_end) = plt.subplots(1, 2, figsize=(11, 4))
    for data in middles:
        ax_mid.semilogy(data[:, 0], np.maximum(data[:, 1], 1e-300),
                        color=MIDDLE_COLOR, lw=1.0)
    ax_mid.set_xlabel("$n$")
    ax_mid.set_ylabel("$|c_n|$")
    ax_mid.set_title("middle domain")
    for data, color, name in ends:
        ax_end.semilogy(data[:, 0], np.maximum(data[:, 1], 1e-300),
                        color=color, lw=1.0, label=name)
    ax_end.set_xlabel("$n$")
    ax_end.set_ylabel("$|c_n|$")
    ax_end.set_title("end domains")
    ax_end.legend(frameon=False)
    fig.tight_layout()
    return fig


_BUILDERS = {"solution": _solution_figure, "v": _remainder_figure, "coeffs": _coefficients_figure}


def render(spec: FigureSpec):
    """Write the requested figure; returns the matplotlib Figure."""
    kind = spec.figure_id.split("_", 1)[1]
    fig = _BUILDERS[kind](spec.input_dir)
    try:
        spec.output_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.output_path, dpi=150, metadata=_PNG_METADATA)
    except OSError as exc:
        raise RenderError(f"cannot write {spec.output_path}: {exc}") from None
    return fig


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="tritronquee-render",
        description="Render a reference figure from a tritronquee run directory.")
    parser.add_argument("--figure", required=True, help=f"one of {', '.join(FIGURE_IDS)}")
    parser.add_argument("--in", dest="input_dir", required=True,
                        help="run directory with the solver's CSV/JSON output")
    parser.add_argument("--out", dest="output_path", required=True,
                        help="image file to write (e.g. figure.png)")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(figure_id=args.figure, input_dir=Path(args.input_dir),
                          output_path=Path(args.output_path))
        fig = render(spec)
        plt.close(fig)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
