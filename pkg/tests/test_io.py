import numpy as np
import pytest

from advect2d import ScalarField2D, make_grid, sample
from advect2d.io import read_field, write_field, write_heatmap, write_table


def test_field_dump_round_trip(tmp_path):
    g = make_grid(-5, 5, -2, 3, 12, 10)
    rng = np.random.RandomState(0)
    f = ScalarField2D(g, rng.randn(10, 12))
    path = tmp_path / "field.dump"
    write_field(f, path)
    back = read_field(path)
    assert back.grid == g
    np.testing.assert_array_equal(back.values, f.values)


def test_field_dump_layout(tmp_path):
    g = make_grid(0, 2, 0, 1, 2, 2)
    f = ScalarField2D(g, np.array([[1.0, 2.0], [3.0, 4.0]]))
    path = tmp_path / "field.dump"
    write_field(f, path)
    lines = path.read_text().splitlines()
    head = lines[0].split()
    assert head[:2] == ["2", "2"]
    assert [float(v) for v in head[2:]] == [0.0, 2.0, 0.0, 1.0]
    # row-major: y-row 0 first, x varying fastest
    assert [float(v) for v in lines[1].split()] == [1.0, 2.0]
    assert [float(v) for v in lines[2].split()] == [3.0, 4.0]


def test_read_field_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.dump"
    path.write_text("1 2 3\n")
    with pytest.raises(ValueError, match="header"):
        read_field(path)


def test_write_table_formats_six_significant_digits(tmp_path):
    rows = [{"Scheme": "lw", "e": 0.0123456789, "n": 160}]
    path = tmp_path / "t.csv"
    write_table(rows, path)
    assert path.read_text() == "Scheme,e,n\nlw,0.0123457,160\n"


def test_write_table_empty_rows_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    write_table([], path, columns=("A", "B", "C"))
    assert path.read_text() == "A,B,C\n"


def test_write_table_requires_consistent_keys(tmp_path):
    rows = [{"A": 1.0}, {"B": 2.0}]
    with pytest.raises(ValueError, match="header"):
        write_table(rows, tmp_path / "t.csv")


def test_write_table_empty_without_columns_rejected(tmp_path):
    with pytest.raises(ValueError, match="columns"):
        write_table([], tmp_path / "t.csv")


def _read_pgm(path):
    data = path.read_bytes()
    magic, dims, maxval, pixels = data.split(b"\n", 3)
    w, h = (int(t) for t in dims.split())
    assert magic == b"P5" and maxval == b"255"
    return np.frombuffer(pixels, dtype=np.uint8).reshape(h, w)


def test_heatmap_constant_field_is_mid_gray(tmp_path):
    g = make_grid(0, 1, 0, 1, 5, 4)
    f = ScalarField2D(g, np.full((4, 5), 7.7))
    path = tmp_path / "c.pgm"
    write_heatmap(f, path)
    img = _read_pgm(path)
    assert img.shape == (4, 5)
    assert (img == 128).all()


def test_heatmap_maps_range_and_puts_y_up(tmp_path):
    g = make_grid(0, 1, 0, 1, 3, 3)
    f = sample(lambda x, y: y, g)
    path = tmp_path / "g.pgm"
    write_heatmap(f, path)
    img = _read_pgm(path)
    assert img[0].tolist() == [255, 255, 255]  # top image row = largest y
    assert img[-1].tolist() == [0, 0, 0]
