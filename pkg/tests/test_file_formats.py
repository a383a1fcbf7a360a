import json
import struct

import numpy as np
import pytest

from common.errors import DatasetError, FormatError
from connectors import (
    decode_codes,
    decode_matrix,
    load_codes,
    load_dataset,
    load_matrix,
    load_rankings,
    read_csv_matrix,
    save_codes,
    save_dataset,
    save_matrix,
    save_rankings,
)
from dataset import Dataset
from tools import pack


class TestMatrixFile:

    def test_roundtrip(self, tmp_path):
        m = np.array([[1.0, -2.5], [3.25, 0.0], [1e300, -1e-300]])
        save_matrix(tmp_path / "m.edshmat", m)
        loaded = load_matrix(tmp_path / "m.edshmat")
        assert loaded.shape == (3, 2)
        np.testing.assert_array_equal(loaded, m)

    def test_layout(self, tmp_path):
        save_matrix(tmp_path / "m.edshmat", [[1.0, 2.0]])
        data = (tmp_path / "m.edshmat").read_bytes()
        assert data[:8] == b"EDSHMAT1"
        assert struct.unpack("<II", data[8:16]) == (1, 2)
        assert struct.unpack("<2d", data[16:]) == (1.0, 2.0)

    def test_bad_magic(self):
        data = b"EDSHMATX" + struct.pack("<II", 1, 1) + struct.pack("<d", 1.0)
        with pytest.raises(FormatError) as info:
            decode_matrix(data)
        assert info.value.offset == 0

    def test_truncated_payload(self):
        data = b"EDSHMAT1" + struct.pack("<II", 2, 2) + struct.pack("<3d", 1.0, 2.0, 3.0)
        with pytest.raises(FormatError, match="payload holds 3") as info:
            decode_matrix(data)
        assert info.value.offset == len(data)

    def test_short_header(self):
        with pytest.raises(FormatError):
            decode_matrix(b"EDSH")

    def test_trailing_bytes(self):
        data = b"EDSHMAT1" + struct.pack("<II", 1, 1) + struct.pack("<2d", 1.0, 2.0)
        with pytest.raises(FormatError) as info:
            decode_matrix(data)
        assert info.value.offset == 24

    def test_non_finite_value_offset(self):
        data = b"EDSHMAT1" + struct.pack("<II", 1, 3) + struct.pack("<3d", 1.0, float("inf"), 2.0)
        with pytest.raises(FormatError) as info:
            decode_matrix(data)
        assert info.value.offset == 16 + 8

    def test_empty_matrix(self, tmp_path):
        save_matrix(tmp_path / "e.edshmat", np.zeros((3, 0)))
        assert load_matrix(tmp_path / "e.edshmat").shape == (3, 0)


class TestCodesFile:

    @pytest.mark.parametrize("k", [1, 63, 64, 65, 128])
    def test_roundtrip(self, tmp_path, rng, k):
        codes = pack(np.where(rng.random((k, 7)) < 0.5, -1.0, 1.0))
        save_codes(tmp_path / "c.edshbin", codes)
        loaded = load_codes(tmp_path / "c.edshbin")
        assert (loaded.n, loaded.k) == (7, k)
        np.testing.assert_array_equal(loaded.words, codes.words)

    def test_bad_magic(self):
        with pytest.raises(FormatError) as info:
            decode_codes(b"EDSHBIN2" + struct.pack("<II", 0, 8))
        assert info.value.offset == 0

    def test_zero_bits(self):
        with pytest.raises(FormatError) as info:
            decode_codes(b"EDSHBIN1" + struct.pack("<II", 0, 0))
        assert info.value.offset == 12

    def test_truncated(self):
        data = b"EDSHBIN1" + struct.pack("<II", 2, 65) + struct.pack("<3Q", 0, 0, 0)
        with pytest.raises(FormatError, match="truncated"):
            decode_codes(data)

    def test_padding_bits(self):
        data = b"EDSHBIN1" + struct.pack("<II", 2, 3) + struct.pack("<2Q", 0b111, 0b1000)
        with pytest.raises(FormatError) as info:
            decode_codes(data)
        assert info.value.offset == 16 + 8


class TestDatasetStore:

    def test_roundtrip(self, tmp_path, small_dataset):
        save_dataset(tmp_path / "ds", small_dataset)
        loaded = load_dataset(tmp_path / "ds")
        np.testing.assert_array_equal(loaded.x1, small_dataset.x1)
        np.testing.assert_array_equal(loaded.x2, small_dataset.x2)
        np.testing.assert_array_equal(loaded.labels, small_dataset.labels)

    def test_missing_file(self, tmp_path, small_dataset):
        save_dataset(tmp_path / "ds", small_dataset)
        (tmp_path / "ds" / "x2.edshmat").unlink()
        with pytest.raises(DatasetError):
            load_dataset(tmp_path / "ds")

    def test_mismatched_columns(self, tmp_path):
        (tmp_path / "ds").mkdir()
        save_matrix(tmp_path / "ds" / "x1.edshmat", np.zeros((2, 3)))
        save_matrix(tmp_path / "ds" / "x2.edshmat", np.zeros((2, 4)))
        save_matrix(tmp_path / "ds" / "labels.edshmat", np.ones((1, 3)))
        with pytest.raises(DatasetError):
            load_dataset(tmp_path / "ds")

    def test_unlabelled_sample(self, tmp_path):
        ds = Dataset(np.zeros((2, 2)), np.zeros((1, 2)), np.array([[1.0, 0.0]]))
        save_dataset(tmp_path / "ds", ds)
        with pytest.raises(DatasetError, match="sample 1"):
            load_dataset(tmp_path / "ds")


class TestCsvImport:

    def test_one_sample_per_row(self, tmp_path):
        (tmp_path / "f.csv").write_text("1,2,3\n4,5,6\n")
        np.testing.assert_array_equal(read_csv_matrix(tmp_path / "f.csv"), [[1, 4], [2, 5], [3, 6]])

    def test_no_transpose(self, tmp_path):
        (tmp_path / "f.csv").write_text("1,2,3\n4,5,6\n")
        assert read_csv_matrix(tmp_path / "f.csv", transpose=False).shape == (2, 3)

    def test_non_numeric(self, tmp_path):
        (tmp_path / "f.csv").write_text("1,a\n2,3\n")
        with pytest.raises(FormatError):
            read_csv_matrix(tmp_path / "f.csv")


class TestRankingsFile:

    def write(self, path, **changes):
        document = {"k": 8, "top_m": 2, "db_size": 3,
                    "rankings": [{"query_index": 0, "neighbors": [[2, 0], [0, 3]]}]}
        document.update(changes)
        path.write_text(json.dumps(document))
        return path

    def test_roundtrip(self, tmp_path):
        save_rankings(tmp_path / "r.json", [[(2, 0), (0, 3)], [(1, 1), (2, 4)]], k=8, top_m=2, db_size=3)
        rankings, header = load_rankings(tmp_path / "r.json")
        assert rankings == [[(2, 0), (0, 3)], [(1, 1), (2, 4)]]
        assert header == {"k": 8, "top_m": 2, "db_size": 3}

    def test_query_index_out_of_order(self, tmp_path):
        path = self.write(tmp_path / "r.json", rankings=[{"query_index": 4, "neighbors": [[0, 1]]}])
        with pytest.raises(FormatError, match="query_index 4"):
            load_rankings(path)

    @pytest.mark.parametrize("index", [3, -1, 100])
    def test_neighbor_outside_database(self, tmp_path, index):
        path = self.write(tmp_path / "r.json", rankings=[{"query_index": 0, "neighbors": [[index, 1]]}])
        with pytest.raises(FormatError, match="outside"):
            load_rankings(path)

    @pytest.mark.parametrize("db_size", [None, -2, "3", True])
    def test_bad_db_size(self, tmp_path, db_size):
        with pytest.raises(FormatError, match="db_size"):
            load_rankings(self.write(tmp_path / "r.json", db_size=db_size))

    def test_malformed_entry(self, tmp_path):
        path = self.write(tmp_path / "r.json", rankings=[{"query_index": 0, "neighbors": [[0]]}])
        with pytest.raises(FormatError, match="malformed"):
            load_rankings(path)
