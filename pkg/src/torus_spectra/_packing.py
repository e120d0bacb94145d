"""Radix packing of small integer vectors into int64 sort keys.

Row (c_0, ..., c_{d-1}) with every |c_i| <= bias maps to
sum_i (c_i + bias) * radix^(d-1-i), radix = 2*bias + 1. The map is
injective and order-preserving (numeric key order == lexicographic row
order), which lets membership tests and difference-vector deduplication
run through sorted int64 arrays instead of tuple hashing. Returns None
from `pack_spec` when the key would not fit in int64; callers fall back
to an exact slow path.
"""

from __future__ import annotations

import numpy as np


def pack_spec(dim: int, max_abs: int) -> tuple[int, int] | None:
    radix = 2 * max_abs + 1
    if radix**dim >= 2**62:
        return None
    return max_abs, radix


def pack_rows(rows: np.ndarray, bias: int, radix: int) -> np.ndarray:
    """Keys for rows known to satisfy |c| <= bias componentwise."""
    keys = np.zeros(rows.shape[0], dtype=np.int64)
    for d in range(rows.shape[1]):
        keys = keys * radix + (rows[:, d] + bias)
    return keys


def pack_rows_checked(rows: np.ndarray, bias: int, radix: int) -> tuple[np.ndarray, np.ndarray]:
    """Like pack_rows but also returns a validity mask; out-of-range rows get key -1."""
    keys = np.zeros(rows.shape[0], dtype=np.int64)
    ok = np.ones(rows.shape[0], dtype=bool)
    for d in range(rows.shape[1]):
        c = rows[:, d]
        ok &= (c >= -bias) & (c <= bias)
        keys = keys * radix + (c + bias)
    return np.where(ok, keys, -1), ok


def unpack_keys(keys: np.ndarray, dim: int, bias: int, radix: int) -> np.ndarray:
    rows = np.empty((len(keys), dim), dtype=np.int64)
    k = keys.copy()
    for d in range(dim - 1, -1, -1):
        rows[:, d] = k % radix - bias
        k //= radix
    return rows
