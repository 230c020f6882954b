"""
On-disk spectrum cache.

One CSV file per parameter set, named by the content hash of the
parameters. Lookups are exact-match only; unreadable or inconsistent files
are treated as misses and rebuilt.
"""

import logging
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Union

import numpy as np

from core.models import BilliardShape, Spectrum, SymmetryClass
from core.utils import generate_hash, json_decode, json_encode, read_table, write_table

logger = logging.getLogger(__name__)

CACHE_FORMAT_VERSION = 1


def cache_key(params: Dict[str, Any]) -> str:
    """Content hash of the parameters that determine a spectrum."""
    return generate_hash({"format": CACHE_FORMAT_VERSION, **params})


def spectrum_to_rows(spectrum: Spectrum):
    """Rows (index, energy, momentum, converged) of a spectrum CSV."""
    for i, value in enumerate(spectrum.eigenvalues):
        yield (i, float(value), float(np.sqrt(value)), int(i < spectrum.converged_count))


class SpectrumCache:
    """Exact-match spectrum cache in a directory."""

    def __init__(self, directory: Union[str, Path]):
        """Initialize cache.

        Args:
            directory: Cache directory (created on first write)
        """
        self.directory = Path(directory)
        self.hits = 0
        self.misses = 0

    def path_for(self, key: str) -> Path:
        return self.directory / f"spectrum-{key}.csv"

    def load(self, key: str) -> Optional[Spectrum]:
        """Load a cached spectrum, or None on a miss or a corrupt file."""
        path = self.path_for(key)
        if not path.exists():
            return None
        try:
            header, columns, rows = read_table(path)
            meta_line = next(line for line in header if line.startswith("spectrum: "))
            info = json_decode(meta_line[len("spectrum: "):])
            if info.get("key") != key:
                raise ValueError("cache key mismatch")
            values = np.array([float(row["energy"]) for row in rows])
            converged = sum(int(row["converged"]) for row in rows)
            if values.size != info["count"] or converged != info["converged_count"]:
                raise ValueError("row count mismatch")
            symmetry = info["symmetry"]
            shape = BilliardShape.from_dict(info["shape"]) if info["shape"] else None
            if "-" in symmetry:
                symmetry = SymmetryClass.parse(symmetry)
            return Spectrum(shape, symmetry, values, converged, info["meta"])
        except (OSError, ValueError, KeyError, StopIteration, TypeError) as exc:
            logger.warning(f"Spectrum cache entry {path.name} is corrupt ({exc}); rebuilding")
            return None

    def store(self, key: str, spectrum: Spectrum, header=()) -> Path:
        """Write a spectrum atomically."""
        info = {**spectrum.to_dict(), "key": key}
        lines = list(header) + [f"spectrum: {json_encode(info, indent=None)}"]
        return write_table(
            self.path_for(key),
            ["index", "energy", "momentum", "converged"],
            spectrum_to_rows(spectrum),
            lines,
        )

    def get_or_build(self, params: Dict[str, Any], build: Callable[[], Spectrum]) -> Spectrum:
        """Return the cached spectrum for ``params``, building it on a miss."""
        key = cache_key(params)
        spectrum = self.load(key)
        if spectrum is not None:
            self.hits += 1
            logger.debug(f"Spectrum cache hit {key[:12]}")
            return spectrum
        self.misses += 1
        spectrum = build()
        self.store(key, spectrum)
        return spectrum
