"""Binary and CSV matrix serialization."""

import numpy as np
import pytest

from branchcs.matio import read_matrix, write_csv, write_matrix


class TestBinaryFormat:
    def test_real_round_trip(self, tmp_path):
        arr = np.random.default_rng(0).normal(size=(5, 7))
        path = tmp_path / "real.bpm"
        write_matrix(path, arr)
        back = read_matrix(path)
        assert back.dtype == np.float64
        assert np.array_equal(back, arr)

    def test_complex_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        arr = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        path = tmp_path / "cpx.bpm"
        write_matrix(path, arr)
        back = read_matrix(path)
        assert np.iscomplexobj(back)
        assert np.array_equal(back, arr)

    def test_header_layout(self, tmp_path):
        path = tmp_path / "h.bpm"
        write_matrix(path, np.zeros((2, 3)))
        raw = path.read_bytes()
        assert raw[:4] == b"BPM1"
        assert len(raw) == 16 + 2 * 3 * 8

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.bpm"
        path.write_bytes(b"NOPE" + b"\x00" * 20)
        with pytest.raises(ValueError):
            read_matrix(path)

    def test_non_2d_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            write_matrix(tmp_path / "x.bpm", np.zeros(5))


class TestCsv:
    def test_real_round_trip(self, tmp_path):
        arr = np.arange(12, dtype=float).reshape(3, 4) / 7
        path = tmp_path / "m.csv"
        write_csv(path, arr)
        back = np.loadtxt(path, delimiter=",")
        assert np.array_equal(back, arr)

    def test_size_cap(self, tmp_path):
        with pytest.raises(ValueError):
            write_csv(tmp_path / "big.csv", np.zeros((257, 2)))

    def test_complex_written(self, tmp_path):
        path = tmp_path / "c.csv"
        write_csv(path, np.array([[1 + 2j, 3 - 4j]]))
        text = path.read_text()
        assert "j" in text
