"""Numeric tolerances and size limits shared by every module."""

import os
from dataclasses import dataclass

TOL = 1e-7
TOL_POINT = 1e-7
TOL_ME = 1e-8
ME_MAX_ITER = 100_000
ATOM_CAP = 12


@dataclass(frozen=True)
class Settings:
    tol: float = TOL
    tol_point: float = TOL_POINT
    tol_me: float = TOL_ME
    me_max_iter: int = ME_MAX_ITER
    atom_cap: int = ATOM_CAP


def default_atom_cap() -> int:
    """Atom cap, honouring the ``NPR_ATOM_CAP`` environment override."""
    raw = os.environ.get("NPR_ATOM_CAP")
    if raw is None:
        return ATOM_CAP
    try:
        cap = int(raw)
    except ValueError:
        return ATOM_CAP
    return cap if cap >= 0 else ATOM_CAP
