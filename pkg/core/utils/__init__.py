"""
Core utilities for the billiard toolkit.
"""

from .dict_utils import (
    generate_hash,
    json_decode,
    json_encode,
    merge_dicts,
)
from .tables import atomic_write_text, format_table, read_table, write_table

__all__ = [
    # dict_utils
    "generate_hash",
    "json_decode",
    "json_encode",
    "merge_dicts",
    # tables
    "atomic_write_text",
    "format_table",
    "read_table",
    "write_table",
]
