"""Size caps.  ``EQUIHOM_MAX_CELLS`` overrides the cell/simplex caps."""

from __future__ import annotations

import os

from .errors import SizeCapError

MAX_GROUP_ORDER = 256
MAX_POSET_SIZE = 10_000
MAX_SNF_SIZE = 2000
MAX_CELLS = 500_000
MAX_DENSE_ENTRIES = 60_000_000


def cell_cap() -> int:
    env = os.environ.get("EQUIHOM_MAX_CELLS")
    if env:
        return int(env)
    return MAX_CELLS


def poset_cap() -> int:
    env = os.environ.get("EQUIHOM_MAX_CELLS")
    if env:
        return int(env)
    return MAX_POSET_SIZE


def check(name: str, limit: int, requested: int) -> None:
    if requested > limit:
        raise SizeCapError(name, limit, requested)
