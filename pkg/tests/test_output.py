import math

import numpy as np
import pandas as pd
import pytest

from app.coefficients import DiffusionMatrix
from app.maxwell_stefan import make_state, run, stable_dt
from app.models import Grid1D
from app.moments import at_rest
from app.output import snapshot_frame, write_matrix_csv, write_snapshots, write_table_csv
from tests.conftest import make_spec


def test_matrix_csv_layout(tmp_path):
    path = tmp_path / "D.csv"
    d = DiffusionMatrix.from_pairs(2, {(0, 1): 1.0 / math.pi})
    write_matrix_csv(d, {"kernel": "phi[1]", "c": "1"}, str(path), labels=["A", "B"])
    lines = path.read_text().splitlines()
    assert lines[:2] == ["# c: 1", "# kernel: phi[1]"]
    assert lines[2] == "species,A,B"
    assert lines[3] == "A,,0.31830988618379069"
    assert lines[4] == "B,0.31830988618379069,"


def test_empty_matrix_rejected(tmp_path):
    with pytest.raises(ValueError, match="nonempty"):
        write_matrix_csv(np.zeros((0, 0)), {}, str(tmp_path / "D.csv"))


def test_matrix_csv_is_byte_identical_on_rewrite(tmp_path):
    d = DiffusionMatrix.from_pairs(3, {(0, 1): 0.1, (0, 2): 1 / 3, (1, 2): math.e})
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    write_matrix_csv(d, {"x": "1"}, str(first))
    write_matrix_csv(d, {"x": "1"}, str(second))
    assert first.read_bytes() == second.read_bytes()
    back = pd.read_csv(first, comment="#", index_col=0, float_precision="round_trip")
    assert back.loc[2, "3"] == math.e


def test_table_csv_leaves_nan_blank(tmp_path):
    path = tmp_path / "t.csv"
    write_table_csv(pd.DataFrame({"eps": [0.1, 0.0], "order": [math.nan, 2.0]}), {}, str(path))
    assert path.read_text().splitlines() == ["eps,order", "0.10000000000000001,", "0,2"]


def test_snapshots_for_both_solvers(tmp_path):
    spec = make_spec([1.0, 1.0])
    grid = Grid1D(n_cells=8)
    d = DiffusionMatrix.from_pairs(2, {(0, 1): 1.0 / math.pi})
    c1 = 0.5 + 0.25 * np.sin(2 * math.pi * grid.centers())
    c = np.vstack([c1, 1.0 - c1])
    trajectory = run(make_state(c, grid, d, 1.0), grid, d, 0.01, stable_dt(grid, d), output_every=5)
    paths = write_snapshots(trajectory, grid, spec, str(tmp_path / "ms"), {"kind": "ms"})
    assert [p.rsplit("/", 1)[-1] for p in paths][:2] == ["snapshot_00000.csv", "snapshot_00001.csv"]
    df = pd.read_csv(paths[-1], comment="#")
    assert list(df.columns) == ["x", "c_A", "c_B", "F_A", "F_B"]
    np.testing.assert_allclose(df["F_A"] + df["F_B"], 0.0, atol=1e-15)

    frame = snapshot_frame(at_rest(c, 0.1), grid, spec)
    assert list(frame.columns) == ["x", "c_A", "c_B", "u_A", "u_B"]
