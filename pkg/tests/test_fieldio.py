import numpy as np
import pytest

from beamquant.fieldio import (
    field_from_bytes, field_from_csv, field_to_bytes, field_to_csv, load_field, save_field,
)
from beamquant.spectral import Grid, random_resolved_field


@pytest.mark.parametrize("dim,n", [(1, 16), (2, 8)])
def test_csv_round_trip_is_exact(rng, dim, n):
    g = Grid(dim, n, 3.5)
    psi = random_resolved_field(g, rng)
    back = field_from_csv(field_to_csv(psi), 3.5)
    assert back.grid == g
    assert np.array_equal(back.values, psi.values)


def test_csv_header():
    g = Grid(2, 4)
    text = field_to_csv(random_resolved_field(g, np.random.default_rng(0)))
    assert text.splitlines()[0] == "i0,i1,real,imag"
    assert len(text.splitlines()) == 17


def test_binary_round_trip_is_exact(rng):
    g = Grid(2, 8, 5.0)
    psi = random_resolved_field(g, rng)
    data = field_to_bytes(psi)
    assert data[:8] == b"BQFIELD1"
    assert len(data) == 32 + 16 * 64
    back = field_from_bytes(data)
    assert back.grid == g
    assert np.array_equal(back.values, psi.values)


def test_binary_rejects_corruption(rng):
    data = field_to_bytes(random_resolved_field(Grid(1, 8), rng))
    with pytest.raises(ValueError):
        field_from_bytes(b"NOTFIELD" + data[8:])
    with pytest.raises(ValueError):
        field_from_bytes(data[:-4])


def test_save_and_load_by_suffix(tmp_path, rng):
    g = Grid(1, 8, 2.0)
    psi = random_resolved_field(g, rng)
    for name in ("f.csv", "f.bin"):
        save_field(psi, tmp_path / name)
        back = load_field(tmp_path / name, length=2.0)
        assert np.array_equal(back.values, psi.values)
