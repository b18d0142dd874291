"""Deterministic CSV output: `# key: value` header lines, then a pandas table."""

import logging
import os

import numpy as np
import pandas as pd

from app.coefficients import DiffusionMatrix
from app.maxwell_stefan import MixtureState, Snapshot
from app.models.mixture import MixtureSpec
from app.models.solver import Grid1D

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _ensure_parent(path: str):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def _write(df: pd.DataFrame, metadata: dict, path: str, index: bool):
    _ensure_parent(path)
    with open(path, "w", newline="") as f:
        for key in sorted(metadata):
            f.write(f"# {key}: {metadata[key]}\n")
        df.to_csv(f, index=index, float_format=FLOAT_FORMAT, lineterminator="\n", na_rep="")
    logger.debug("Wrote %s (%d rows)", path, len(df))


def write_matrix_csv(matrix, metadata: dict, path: str, labels=None):
    """I x I matrix with an empty diagonal, labelled rows and columns."""
    if isinstance(matrix, DiffusionMatrix):
        values = matrix.as_array(diagonal=np.nan)
    else:
        values = np.array(matrix, dtype=float)
    if values.size == 0 or values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError(f"Expected a nonempty square matrix (got shape {values.shape})")
    n = values.shape[0]
    np.fill_diagonal(values, np.nan)
    labels = list(labels) if labels is not None else [str(i + 1) for i in range(n)]
    df = pd.DataFrame(values, index=pd.Index(labels, name="species"), columns=labels)
    _write(df, metadata, path, index=True)


def write_table_csv(df: pd.DataFrame, metadata: dict, path: str):
    _write(df, metadata, path, index=False)


def snapshot_frame(state, grid: Grid1D, spec: MixtureSpec) -> pd.DataFrame:
    """One row per cell: x, c_<name>..., then F_<name> (face average) or u_<name>."""
    columns = {"x": grid.centers()}
    for i, name in enumerate(spec.names):
        columns[f"c_{name}"] = state.concentrations[i]
    if isinstance(state, MixtureState):
        f = state.fluxes
        for i, name in enumerate(spec.names):
            columns[f"F_{name}"] = 0.5 * (f[i, :-1] + f[i, 1:])
    else:
        for i, name in enumerate(spec.names):
            columns[f"u_{name}"] = state.velocities[i]
    return pd.DataFrame(columns)


def write_snapshots(
    trajectory: list[Snapshot], grid: Grid1D, spec: MixtureSpec, out_dir: str, metadata: dict
) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for index, snap in enumerate(trajectory):
        meta = dict(metadata)
        meta["step"] = str(snap.step)
        meta["t"] = f"{snap.time:.17g}"
        path = os.path.join(out_dir, f"snapshot_{index:05d}.csv")
        write_table_csv(snapshot_frame(snap.state, grid, spec), meta, path)
        paths.append(path)
    logger.info("Wrote %d snapshots to %s", len(paths), out_dir)
    return paths
