import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from teichlab import (AffineTeichMap, DeformationParameter, apply_deformation, beltrami,
                      dilatation, disk_from_half_plane, geodesic_dilatation, geodesic_map,
                      half_plane_from_disk, rotate_parameter)
from teichlab.errors import ConfigError
from teichlab.teich import affine_beltrami, dilatation_from_beltrami, parse_parameter

half_plane = st.builds(complex, st.floats(1e-3, 1e3), st.floats(-1e3, 1e3))


def test_chart_examples():
    assert disk_from_half_plane(1.0) == 0
    assert abs(disk_from_half_plane(1e-12) - 1) < 1e-11
    assert half_plane_from_disk(-0.5) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        disk_from_half_plane(-1 + 1j)
    with pytest.raises(ValueError):
        half_plane_from_disk(1.0)


@given(half_plane)
def test_charts_are_inverse(w):
    lam = disk_from_half_plane(w)
    back = half_plane_from_disk(lam)
    assert abs(back - w) <= 1e-9 * max(1.0, abs(w) ** 2)
    assert back.real == pytest.approx((1 - abs(lam) ** 2) / abs(1 + lam) ** 2, rel=1e-12)


def test_rotate_parameter_examples():
    assert rotate_parameter(0.0, 0.3 + 0.1j) == pytest.approx(-0.3 - 0.1j)
    assert rotate_parameter(np.pi, 0.3 + 0.1j) == pytest.approx(0.3 + 0.1j)
    assert rotate_parameter(np.pi / 2, 0.4j) == pytest.approx(-0.4)
    # B_theta sends e^{i theta} to -1
    assert rotate_parameter(1.3, np.exp(1.3j)) == pytest.approx(-1)


def test_deformation_examples():
    f = AffineTeichMap(DeformationParameter.from_half_plane(2, 0))
    assert apply_deformation(f, 1 + 1j) == 0.5 + 1j
    g = AffineTeichMap(DeformationParameter.from_half_plane(1, 1))
    assert apply_deformation(g, 1 + 1j) == 1j
    ident = AffineTeichMap(DeformationParameter.from_half_plane(1, 0))
    z = np.array([0.3 - 2j, 5 + 1j])
    assert np.array_equal(ident(z), z)


@given(half_plane, st.complex_numbers(max_magnitude=10))
def test_deformation_preserves_imaginary_part(w, z):
    f = AffineTeichMap(DeformationParameter.from_half_plane(w.real, w.imag))
    assert apply_deformation(f, z).imag == z.imag


def test_beltrami_examples():
    assert beltrami(1.0) == 0
    assert beltrami(3.0) == pytest.approx(-0.5)
    assert abs(beltrami(complex(1e-12, 1.0)) - (-1j)) < 1e-11
    with pytest.raises(ValueError):
        beltrami(1j)


def test_dilatation_examples():
    assert dilatation(1.0) == pytest.approx(1.0)
    assert dilatation(4.0) == pytest.approx(4.0)
    # radical quotient evaluated at high precision
    assert dilatation(3 + 4j) == pytest.approx(8.54970354689117, rel=1e-13)


# the Beltrami route loses about K * eps, so keep K below ~1e5 here
moderate = st.builds(complex, st.floats(0.05, 50), st.floats(-50, 50))


@given(moderate)
def test_dilatation_matches_beltrami(w):
    K = dilatation(w)
    assert K >= 1
    assert abs(K - dilatation_from_beltrami(beltrami(w))) <= 1e-10 * K


@given(half_plane)
def test_affine_map_beltrami_is_A(w):
    f = AffineTeichMap(DeformationParameter.from_half_plane(w.real, w.imag))
    assert affine_beltrami(f.matrix) == pytest.approx(beltrami(w), abs=1e-12)


def _ratios(w):
    p = DeformationParameter.from_half_plane(w.real, w.imag)
    return dilatation(w) * p.normalizer, (1 / p.normalizer) / (2 / (1 - abs(p.disk)))


@pytest.mark.parametrize("w", [complex(200, 0), complex(150, 150), complex(2, 22),
                               complex(2, 24), complex(1 / 12, 12), complex(1 / 20, 20)])
def test_asymptotic_normalization_on_paths(w):
    assert (w.real ** 2 + w.imag ** 2) / w.real >= 200
    for ratio in _ratios(w):
        assert 0.99 <= ratio <= 1.01


def test_tangential_normalization_converges_slowly():
    # along s = 1/|t| the ratio is 1 + 1/t^2 + ..., so (s^2+t^2)/s >= 200 is not
    # yet enough for 1%; the ratio still tends to 1
    ks = [_ratios(complex(1 / t, t))[0] for t in (4.0, 6.5, 10.0, 40.0)]
    assert ks[1] > 1.01 and (1 / 6.5 ** 2 + 6.5 ** 2) * 6.5 >= 200
    assert all(b < a for a, b in zip(ks, ks[1:])) and ks[-1] < 1.001


def test_geodesic_family():
    assert geodesic_map(0.0, 1 + 2j) == 1 + 2j
    assert geodesic_dilatation(0.0) == 1
    assert geodesic_dilatation(1 / 3) == pytest.approx(2.0)
    assert geodesic_dilatation(0.9) == pytest.approx(19.0)
    for t in (0.2, 1 / 3, 0.9):
        m = np.array([[1.0, 0.0], [0.0, (1 - t) / (1 + t)]])
        assert affine_beltrami(m) == pytest.approx(t)
    with pytest.raises(ValueError):
        geodesic_map(1.0, 0)


def test_parameter_validation_and_parsing():
    p = DeformationParameter.from_disk(-0.5)
    assert p.s == pytest.approx(3.0) and p.normalizer == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        DeformationParameter(3.0, 0.1)
    assert parse_parameter({"half_plane": [3, 4]}).t == 4
    assert parse_parameter({"lambda": [-0.5, 0]}).s == pytest.approx(3)
    with pytest.raises(ConfigError):
        parse_parameter({"lambda": [2, 0]})
    with pytest.raises(ConfigError):
        parse_parameter({"mu": [0, 0]})
