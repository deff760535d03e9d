import numpy as np
import pytest

from ns_apriori.fieldio import FieldFormatError, read_array, read_field, write_array, write_field
from ns_apriori.function_spaces import Grid, ScalarField, VectorField


def test_scalar_roundtrip(tmp_path):
    u = ScalarField.from_function(Grid(5), lambda x, y, z: x + 10 * y + 100 * z)
    write_field(tmp_path / "u.nsf", u)
    back = read_field(tmp_path / "u.nsf")
    assert isinstance(back, ScalarField)
    np.testing.assert_array_equal(back.values, u.values)


def test_vector_roundtrip(tmp_path):
    v = VectorField.from_function(Grid(9), lambda x, y, z: (x, y * z, np.sin(x)))
    write_field(tmp_path / "v.nsf", v)
    back = read_field(tmp_path / "v.nsf")
    np.testing.assert_array_equal(back.values, v.values)


def test_layout_is_x_fastest_little_endian(tmp_path):
    u = ScalarField.from_function(Grid(5), lambda x, y, z: 4 * x + 20 * y + 100 * z)
    write_field(tmp_path / "u.nsf", u)
    raw = (tmp_path / "u.nsf").read_bytes()
    head, body = raw.split(b"\n", 1)
    assert head == b"NSFLD1 5 5 5 1"
    vals = np.frombuffer(body, dtype="<f8")
    # node (i, j, k) has value i + 5 j + 25 k and sits at flat index i + 5 j + 25 k
    np.testing.assert_array_equal(vals, np.arange(125.0))


def test_truncated_and_bad_headers(tmp_path):
    p = tmp_path / "u.nsf"
    write_array(p, np.zeros((5, 5, 5)))
    data = p.read_bytes()
    p.write_bytes(data[:-8])
    with pytest.raises(FieldFormatError):
        read_array(p)
    p.write_bytes(b"NSFLD2 5 5 5 1\n" + data.split(b"\n", 1)[1])
    with pytest.raises(FieldFormatError):
        read_array(p)
    p.write_bytes(b"no newline at all")
    with pytest.raises(FieldFormatError):
        read_array(p)


def test_noncubic_or_two_component_rejected_as_field(tmp_path):
    p = tmp_path / "a.nsf"
    write_array(p, np.zeros((5, 5, 9)))
    with pytest.raises(FieldFormatError):
        read_field(p)
    write_array(p, np.zeros((2, 5, 5, 5)))
    with pytest.raises(FieldFormatError):
        read_field(p)
