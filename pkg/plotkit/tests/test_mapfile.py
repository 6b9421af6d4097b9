import pytest

from plotkit import SchemaError, load_map, load_transitions


def test_load_jointspace(csv_dir):
    mf = load_map(csv_dir / "js2.csv")
    assert mf.kind == "jointspace"
    assert mf.mode == 2
    assert mf.res == (128, 128)
    grid = mf.grid("n_fk")
    assert grid.shape == (128, 128)
    assert set(grid.ravel().tolist()) <= {0.0, 2.0, 4.0}


def test_load_workspace(csv_dir):
    mf = load_map(csv_dir / "ws3.csv")
    assert mf.kind == "workspace"
    assert mf.axes == ("x", "alpha")
    lo1, hi1, lo2, hi2 = mf.extent
    assert lo1 < 0 < hi1
    assert mf.grid("aspect_id").max() >= 1


def test_row_count_mismatch_rejected(tmp_path, csv_dir):
    text = (csv_dir / "js1.csv").read_text()
    lines = text.strip().split("\n")
    broken = tmp_path / "short.csv"
    broken.write_text("\n".join(lines[:-5]) + "\n")
    with pytest.raises(SchemaError):
        load_map(broken)


def test_missing_header_keys_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("# kind=jointspace\nrho2,rho3,n_fk\n0,0,2\n")
    with pytest.raises(SchemaError):
        load_map(bad)


def test_unknown_column_rejected(csv_dir):
    mf = load_map(csv_dir / "js1.csv")
    with pytest.raises(SchemaError):
        mf.grid("does_not_exist")


def test_load_transitions(csv_dir):
    tf = load_transitions(csv_dir / "transitions.csv")
    assert tf.modes == (2, 3, 4)
    assert tf.boundaries(2) == pytest.approx((-0.225,), abs=1e-9)
    assert tf.boundaries(3) == ()
    assert len(tf.samples(2)) == 96


def test_empty_transitions_rejected(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("# kind=transitions\nmode,axis,t,aspect_id\n")
    with pytest.raises(SchemaError):
        load_transitions(empty)
