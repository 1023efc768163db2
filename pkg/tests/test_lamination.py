import json

import numpy as np
import pytest

from teichlab import GeodesicBox, QuadraticDifferential, atom_scan, lamination_mass, liouville_box
from teichlab.lamination import mass_from_leaves, sample_leaves
from teichlab.modulus import vertical_strip_box
from teichlab.validation import random_box

PI12 = np.pi / 12  # int_0^{1/2} dx / (2 sqrt(1 - x^2))


@pytest.fixture(scope="module")
def unit_leaves(one):
    return sample_leaves(one, 0.0, 4096), sample_leaves(one, 0.0, 2048)


@pytest.fixture(scope="module")
def psi_leaves(psi):
    return sample_leaves(psi, 0.4, 2048), sample_leaves(psi, 0.4, 1024)


def test_slab_matches_arcsin(one):
    m = lamination_mass(one, 0.0, vertical_strip_box(0.0, 0.5), 4096)
    assert abs(m.value - PI12) <= 1e-3
    assert m.samples_used == 4096 and not m.coverage_warning
    assert 0 <= m.error_estimate <= 1e-3


def test_upper_semicircle_box_is_empty(one):
    m = lamination_mass(one, 0.0, GeodesicBox(0.2, 1.0, 1.5, 2.8), 256)
    assert m.value == 0.0 and m.coverage_warning


def test_full_box(unit_leaves):
    # leaves tangent to the boundary at x = +-1 make the midpoint rule
    # converge like sqrt(dx), so this box is only good to about 1e-2
    box = GeodesicBox(1e-9, np.pi - 1e-9, np.pi + 1e-9, 2 * np.pi - 1e-9)
    m = mass_from_leaves(*unit_leaves, box, 0.0)
    assert abs(m.value - np.pi / 2) <= 0.02


def test_leaf_lengths_for_constant(unit_leaves):
    fine, _ = unit_leaves
    assert np.allclose(fine.length, 2 * np.sqrt(1 - fine.x ** 2), atol=1e-6)


@pytest.mark.parametrize("x1,x2", [(-0.8, 0.3), (0.1, 0.9), (-0.5, 0.5)])
def test_slabs_against_closed_form(unit_leaves, x1, x2):
    m = mass_from_leaves(*unit_leaves, vertical_strip_box(x1, x2), 0.0)
    assert abs(m.value - 0.5 * (np.arcsin(x2) - np.arcsin(x1))) <= max(m.error_estimate, 1e-3)


def test_additivity(psi_leaves, rng):
    for _ in range(10):
        box = random_box(rng, 0.3)
        a, b = (p.angle for p in (box.a, box.b))
        split = a + rng.uniform(0.2, 0.8) * ((b - a) % (2 * np.pi))
        parts = [mass_from_leaves(*psi_leaves, GeodesicBox(*x), 0.4)
                 for x in ((a, split, box.c.angle, box.d.angle),
                           (split, b, box.c.angle, box.d.angle))]
        whole = mass_from_leaves(*psi_leaves, box, 0.4)
        slack = whole.error_estimate + sum(p.error_estimate for p in parts) + 1e-12
        assert abs(parts[0].value + parts[1].value - whole.value) <= slack


def test_rotation_consistency(psi):
    box = GeodesicBox(0.7, 2.0, 4.6, 5.6)
    m1 = lamination_mass(psi, 0.7, box, 1024)
    m2 = lamination_mass(psi.rotated(0.7), 0.0, box, 1024)
    assert abs(m1.value - m2.value) <= m1.error_estimate + m2.error_estimate + 1e-12


def test_scale_invariance(psi):
    box = GeodesicBox(0.7, 2.0, 4.6, 5.6)
    base = lamination_mass(psi, 0.4, box, 1024)
    scaled = lamination_mass(psi.scaled(9.0), 0.4, box, 1024)
    assert base.value > 0.05 and not base.coverage_warning
    assert abs(base.value - scaled.value) <= base.error_estimate + scaled.error_estimate + 1e-9


def test_boundedness(psi_leaves, rng):
    worst = 0.0
    for _ in range(40):
        box = random_box(rng, 0.05)
        if liouville_box(box) <= 1.0:
            worst = max(worst, mass_from_leaves(*psi_leaves, box, 0.4).value)
    assert worst <= np.pi / 2


def test_doubling_within_error(psi):
    box = GeodesicBox(0.7, 2.0, 4.6, 5.6)
    coarse = lamination_mass(psi, 0.4, box, 1024)
    fine = lamination_mass(psi, 0.4, box, 2048)
    assert abs(fine.value - coarse.value) <= coarse.error_estimate + 1e-12


def test_atom_scan_decay(one):
    widths = [0.4 / 2 ** k for k in range(11)]
    masses = atom_scan(one, 0.0, (np.pi / 2, 3 * np.pi / 2), widths)
    # widths are angular half-widths, so each box holds the chords |x| <= sin w
    assert np.allclose(masses, widths, atol=2e-3)
    assert masses[-1] < 1e-3
    assert all(b <= a for a, b in zip(masses, masses[1:]))


def test_atom_scan_outside_support(one):
    assert atom_scan(one, 0.0, (0.3, 1.2), [0.2, 0.1, 0.05], 512) == [0.0, 0.0, 0.0]


def test_atom_scan_scaled_differential_same_profile(one):
    widths = [0.4, 0.2, 0.1]
    a = atom_scan(one, 0.0, (np.pi / 2, 3 * np.pi / 2), widths, 1024)
    b = atom_scan(QuadraticDifferential.constant(4.0), 0.0, (np.pi / 2, 3 * np.pi / 2), widths, 1024)
    assert np.allclose(a, b, atol=1e-3)


def test_validation_of_inputs(one):
    with pytest.raises(ValueError):
        lamination_mass(one, 0.0, vertical_strip_box(0, 0.5), 8)
    with pytest.raises(ValueError):
        atom_scan(one, 0.0, (0.0, np.pi), [0.1, 0.2])


def test_json(one):
    m = lamination_mass(one, 0.0, vertical_strip_box(0.0, 0.5), 256)
    data = json.loads(m.to_json())
    assert set(data) == {"box", "theta", "value", "error_estimate", "samples_used"}
    assert GeodesicBox.from_json(data["box"]) == m.box or np.allclose(data["box"], m.box.to_json())
