import numpy as np
import pytest

from levyfields.errors import DomainError, LatticeMismatch, OffLattice
from levyfields.lattice import (LatticeField, LatticeSpec, constant_field, delta_field,
                                gaussian_bump, read_field, write_field)


def test_spec_validation():
    for bad in [(0, 8, 0.1), (1, 6, 0.1), (1, 1, 0.1), (1, 8, 0.0)]:
        with pytest.raises(DomainError):
            LatticeSpec(*bad)
    s = LatticeSpec(2, 8, 0.5)
    assert s.side_length == 4.0 and s.volume == 0.25 and s.shape == (8, 8)


def test_origin_and_index():
    s = LatticeSpec(1, 8, 0.5)
    assert s.axis_coords()[s.origin[0]] == 0.0
    assert s.index_of([1.0]) == (6,)
    with pytest.raises(OffLattice):
        s.index_of([0.3])
    with pytest.raises(OffLattice):
        s.index_of([-2.0])  # the ghost slice


def test_weights_skip_ghost_layer():
    s = LatticeSpec(2, 4, 1.0)
    w = s.weights()
    assert w[0].sum() == 0 and w[:, 0].sum() == 0 and w.sum() == 9


def test_field_checks():
    s = LatticeSpec(1, 8, 0.5)
    with pytest.raises(LatticeMismatch):
        LatticeField(s, np.zeros(4))
    with pytest.raises(DomainError):
        LatticeField(s, np.full(8, np.nan))
    f = constant_field(s, 2.0)
    with pytest.raises(ValueError):
        f.values[0] = 1.0
    with pytest.raises(LatticeMismatch):
        f.pair(constant_field(LatticeSpec(1, 8, 0.25)))


def test_bumps_and_deltas():
    s = LatticeSpec(2, 32, 0.1)
    b = gaussian_bump(s, [0.5, 0.0], 0.2, mass=3.0, positive_time=True)
    assert b.integrate() == pytest.approx(3.0)
    assert np.all(b.values[s.coords()[0] <= 0] == 0)
    assert delta_field(s).integrate() == pytest.approx(1.0)


def test_field_roundtrip(tmp_path):
    s = LatticeSpec(2, 8, 0.125)
    f = LatticeField(s, np.random.default_rng(0).normal(size=(8, 8)), "noise sample")
    write_field(tmp_path / "f.bin", f)
    raw = (tmp_path / "f.bin").read_bytes()
    assert raw.startswith(b"2\n8\n0.125\nnoise sample\n")
    g = read_field(tmp_path / "f.bin")
    assert g.spec == s and g.name == "noise sample"
    assert np.array_equal(g.values, f.values)
