import numpy as np
import pytest

from traceless.matio import (
    MatrixFormatError,
    format_matrix,
    read_matrix,
    read_points,
    write_matrix,
    write_points,
)

from conftest import random_complex


def test_roundtrip_exact(tmp_path, rng):
    a = random_complex(rng, 5)
    a[0, 0] = 1.0 / 3.0 + 1j * np.pi
    a[1, 2] = 1e-300 - 1j * 2.0**-52
    path = tmp_path / "a.txt"
    write_matrix(path, a)
    back = read_matrix(path)
    assert back.shape == a.shape
    assert np.array_equal(back, a)  # bit-exact round trip


def test_rectangular(tmp_path, rng):
    a = rng.standard_normal((3, 5)) + 0j
    path = tmp_path / "r.txt"
    write_matrix(path, a)
    assert np.array_equal(read_matrix(path), a)


def test_header_format():
    text = format_matrix(np.eye(2))
    lines = text.strip().split("\n")
    assert lines[0] == "2 2"
    assert lines[1].split()[0] == "1,0"


def test_parse_errors(tmp_path):
    cases = {
        "empty.txt": "",
        "badhead.txt": "2\n1,0 0,0\n0,0 1,0\n",
        "shortrow.txt": "2 2\n1,0\n0,0 1,0\n",
        "badentry.txt": "1 1\n1+2j\n",
        "extra_rows.txt": "1 1\n1,0\n2,0\n",
        "nonfinite.txt": "1 1\ninf,0\n",
        "zerodim.txt": "0 0\n",
    }
    for name, payload in cases.items():
        path = tmp_path / name
        path.write_text(payload)
        with pytest.raises(MatrixFormatError):
            read_matrix(path)


def test_points_roundtrip(tmp_path, rng):
    pts = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    path = tmp_path / "pts.txt"
    write_points(path, pts)
    assert path.read_text().splitlines()[0] == "7 1"
    assert np.array_equal(read_points(path), pts)


def test_points_rejects_matrix(tmp_path):
    path = tmp_path / "m.txt"
    write_matrix(path, np.eye(2))
    with pytest.raises(MatrixFormatError):
        read_points(path)
