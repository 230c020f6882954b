"""
Output files with provenance headers: CSV tables, JSON documents, SVG plots
and plain-text reports.

Every file carries the tool version, the command, the seed, the full run
configuration and a content hash of the command's inputs. Identical
configuration and cache give byte-identical files.
"""

import io
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from cli.config import TOOL_VERSION, RunConfig  # noqa: E402
from core.models import StatCurve  # noqa: E402
from core.utils import atomic_write_text, generate_hash, json_encode, write_table  # noqa: E402

logger = logging.getLogger(__name__)

STAT_COLUMNS = ["x", "value", "stderr", "n_samples"]
SVG_HASH_SALT = "billiards"

# (label, x, y, yerr or None)
Series = Tuple[str, Sequence[float], Sequence[float], Optional[Sequence[float]]]


def input_hash(**parts: Any) -> str:
    """Content hash of the arrays and values a command consumed."""
    canonical = {}
    for key, value in parts.items():
        if isinstance(value, (np.ndarray, list, tuple)):
            value = np.asarray(value, dtype=float).tolist()
        canonical[key] = value
    return generate_hash(canonical)


def curve_series(curve: StatCurve, label: str) -> Series:
    return (label, curve.abscissa, curve.values, curve.stderr)


class OutputWriter:
    """Write one command's files under the configured output directory."""

    def __init__(self, config: RunConfig, command: str, directory: Optional[Path] = None):
        self.config = config
        self.command = command
        self.directory = Path(directory or config.output_dir)
        self.written: List[Path] = []

    def header(self, inputs: str = "") -> List[str]:
        return [
            f"billiards {TOOL_VERSION} {self.command}",
            f"seed: {self.config.seed}",
            f"config_hash: {self.config.config_hash}",
            f"input_hash: {inputs}",
            "config: " + json_encode(self.config.provenance(), indent=None),
        ]

    def _record(self, path: Path) -> Path:
        self.written.append(path)
        logger.info(f"Wrote {path}")
        return path

    def csv(
        self, name: str, columns: Sequence[str], rows: Iterable[Sequence[Any]], inputs: str = ""
    ) -> Path:
        """CSV table with '#'-prefixed provenance lines."""
        path = write_table(self.directory / name, columns, rows, self.header(inputs))
        return self._record(path)

    def curve(self, name: str, curve: StatCurve, inputs: str = "") -> Path:
        """StatCurve as (x, value, stderr, n_samples) rows; curve meta joins the header."""
        header = self.header(inputs)
        header.insert(1, f"statistic: {curve.statistic.value}")
        for key, value in sorted(curve.meta.items()):
            if key != "spacings":
                header.append(f"{key}: {json_encode(value, indent=None)}")
        path = write_table(self.directory / name, STAT_COLUMNS, curve.rows(), header)
        return self._record(path)

    def json(self, name: str, data: Dict[str, Any], inputs: str = "") -> Path:
        """JSON document; the provenance header is its first key."""
        document = {
            "provenance": {
                "tool": f"billiards {TOOL_VERSION}",
                "command": self.command,
                "seed": self.config.seed,
                "config_hash": self.config.config_hash,
                "input_hash": inputs,
                "config": self.config.provenance(),
            },
            **data,
        }
        path = atomic_write_text(self.directory / name, json_encode(document) + "\n")
        return self._record(path)

    def text(self, name: str, body: str, inputs: str = "") -> Path:
        lines = [f"# {line}" for line in self.header(inputs)]
        path = atomic_write_text(self.directory / name, "\n".join(lines + [body, ""]))
        return self._record(path)

    def svg(
        self,
        name: str,
        series: Sequence[Series],
        xlabel: str,
        ylabel: str,
        title: str = "",
        inputs: str = "",
        log: bool = False,
    ) -> Path:
        """Line plot of the series, written as deterministic SVG."""
        with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
            fig, ax = plt.subplots(figsize=(6.4, 4.8))
            try:
                for label, x, y, err in series:
                    ax.plot(x, y, label=label, linewidth=1.2)
                    if err is not None and np.any(np.asarray(err) > 0):
                        y, err = np.asarray(y, dtype=float), np.asarray(err, dtype=float)
                        ax.fill_between(x, y - err, y + err, alpha=0.25, linewidth=0)
                if log:
                    ax.set_xscale("log")
                    ax.set_yscale("log")
                ax.set_xlabel(xlabel)
                ax.set_ylabel(ylabel)
                if title:
                    ax.set_title(title)
                if len(series) > 1:
                    ax.legend()
                ax.grid(True, alpha=0.3)
                fig.tight_layout()
                buffer = io.StringIO()
                fig.savefig(
                    buffer,
                    format="svg",
                    metadata={"Date": None, "Description": "\n".join(self.header(inputs))},
                )
            finally:
                plt.close(fig)
        path = atomic_write_text(self.directory / name, buffer.getvalue())
        return self._record(path)


def shape_tag(shape) -> str:
    """File-name tag of a billiard: rectangle_AxB, circle or ellipse_sSIGMA."""
    if shape.kind.value == "rectangle":
        return f"rectangle_{shape.a:.6g}x{shape.b:.6g}"
    if shape.is_circle:
        return "circle"
    return f"ellipse_s{shape.sigma:.6g}"
