import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from teichlab import (AccuracyError, BoundaryPoint, CircleMap, GeodesicBox, InvalidBoxError,
                      MoebiusMap, ResolutionError, apply_moebius, liouville_box,
                      liouville_integral, pullback_liouville)
from teichlab.disk_geometry import in_arc, normalize_angle

SQUARE = GeodesicBox(0.0, np.pi / 2, np.pi, 3 * np.pi / 2)
# m(z) = (z + 1/2) / (1 + z/2) as a normalized disk automorphism
HALF = MoebiusMap.normalized(1.0, 0.5)


@st.composite
def boxes(draw, min_gap=0.02):
    gaps = [draw(st.floats(min_gap, 1.0)) for _ in range(4)]
    gaps = np.array(gaps) / sum(gaps) * 2 * np.pi
    if gaps.min() < min_gap:
        gaps = np.full(4, np.pi / 2)
    start = draw(st.floats(0, 2 * np.pi))
    return GeodesicBox(*(start + np.cumsum(np.r_[0.0, gaps[:3]])))


@st.composite
def moebius_maps(draw):
    r = draw(st.floats(0, 0.95))
    arg = draw(st.floats(0, 2 * np.pi))
    theta = draw(st.floats(0, 2 * np.pi))
    return MoebiusMap.from_point(r * np.exp(1j * arg), theta)


def test_boundary_point_normalizes_and_compares_mod_two_pi():
    p = BoundaryPoint(-np.pi / 2)
    assert p.angle == pytest.approx(3 * np.pi / 2)
    assert p == BoundaryPoint(3 * np.pi / 2 + 4 * np.pi)
    assert p != BoundaryPoint(0.0)
    assert BoundaryPoint(-1e-18).angle == 0.0


def test_normalize_angle_arrays():
    out = normalize_angle(np.array([-np.pi, 7.0, 0.0]))
    assert np.allclose(out, [np.pi, 7.0 - 2 * np.pi, 0.0])


@pytest.mark.parametrize("angles", [(0, 0, 1, 2), (0, 2, 1, 3), (0, 1, 2, 2 * np.pi)])
def test_invalid_boxes_rejected(angles):
    with pytest.raises(InvalidBoxError):
        GeodesicBox(*angles)


def test_box_accepts_wrapped_order_and_json_roundtrip():
    b = GeodesicBox(5.5, 0.2, 2.0, 4.0)
    assert GeodesicBox.from_json(b.to_json()) == b
    lifted = b.lifted()
    assert np.all(np.diff(lifted) > 0) and lifted[-1] - lifted[0] < 2 * np.pi


def test_liouville_square_box_is_log_two():
    assert liouville_box(SQUARE) == pytest.approx(np.log(2), abs=1e-15)
    assert liouville_box(SQUARE.rotated(np.pi / 2)) == pytest.approx(np.log(2), abs=1e-15)


def test_liouville_integral_square_box():
    assert liouville_integral(SQUARE, 1e-6) == pytest.approx(0.693147180559945, abs=1e-6)


def test_liouville_integral_reports_budget_failure():
    # adjacent arcs with a tiny gap make the integrand nearly singular
    box = GeodesicBox(0.0, 1.0, 1.0 + 1e-9, 2.0)
    with pytest.raises(AccuracyError) as info:
        liouville_integral(box, 1e-12, limit=3)
    assert info.value.estimate is not None


def test_liouville_degenerate_limits():
    shrinking = [liouville_box(GeodesicBox(0, w, np.pi, np.pi + w)) for w in (0.1, 0.01, 0.001)]
    assert shrinking[0] > shrinking[1] > shrinking[2] > 0
    assert shrinking[2] < 1e-6
    # b -> c makes the measure blow up
    growing = [liouville_box(GeodesicBox(0, np.pi - g, np.pi, 3 * np.pi / 2))
               for g in (1e-1, 1e-3, 1e-6)]
    assert growing[0] < growing[1] < growing[2] and growing[2] > 10


def test_collapsing_second_arc_tends_to_zero():
    vals = [liouville_box(GeodesicBox(0, np.pi / 2, np.pi, np.pi + w)) for w in (1e-2, 1e-5)]
    assert vals[1] < vals[0] and vals[1] < 1e-5


@given(boxes())
def test_liouville_symmetric_under_swap(box):
    assert liouville_box(box.swapped()) == pytest.approx(liouville_box(box), rel=1e-12)
    assert liouville_box(box) > 0


@given(boxes(), moebius_maps())
def test_moebius_invariance(box, m):
    image = apply_moebius(m, box)
    assert abs(liouville_box(image) - liouville_box(box)) <= 1e-10


@given(boxes(min_gap=0.1))
def test_monotone_in_first_arc(box):
    a, b, c, d = box.lifted()
    wider = GeodesicBox(a, b + 0.5 * (c - b), c, d)
    assert liouville_box(wider) > liouville_box(box)


def test_formula_equivalence_random(rng):
    from teichlab.validation import random_box
    for _ in range(10):
        box = random_box(rng, 0.1)
        assert abs(liouville_integral(box, 1e-7) - liouville_box(box)) <= 1e-7


def test_moebius_group_operations():
    m = MoebiusMap.from_point(0.3 - 0.2j, 0.7)
    z = np.array([0.1 + 0.5j, -0.4, 0.9j])
    assert np.allclose(m.inverse()(m(z)), z)
    n = MoebiusMap.rotation(1.1)
    assert np.allclose(m.compose(n)(z), m(n(z)))
    assert abs(m(0.3 - 0.2j)) < 1e-15
    with pytest.raises(AttributeError):
        m.p = 2


def test_apply_moebius_identity_and_rotation():
    assert apply_moebius(MoebiusMap.identity(), SQUARE) == SQUARE
    rot = apply_moebius(MoebiusMap.rotation(0.3), SQUARE)
    assert np.allclose(rot.lifted(), np.array(SQUARE.lifted()) + 0.3)


def test_apply_moebius_half_map():
    image = apply_moebius(HALF, SQUARE)
    # arg((i + 1/2) / (1 + i/2)) = arctan(3/4), frozen from high-precision evaluation
    expected = [0.0, 0.643501108793284, np.pi, 5.6396841983863]
    assert np.allclose(image.angles(), expected, atol=1e-12)


def test_in_arc_classification():
    assert in_arc(0.5, 0.0, 1.0) == 1
    assert in_arc(1.5, 0.0, 1.0) == -1
    assert in_arc(1.0, 0.0, 1.0) == 0
    assert in_arc(6.2, 6.0, 1.0) == 1
    assert in_arc(0.5, 6.0, 1.0) == 1


def test_circle_map_checks_monotone_lift():
    with pytest.raises(ValueError):
        CircleMap([0.0, 1.0, 2.0], [0.0, 2.0, 1.0])
    h = CircleMap.identity(8)
    assert h(7.0) == pytest.approx(7.0)
    assert h(-1.0) == pytest.approx(-1.0)


def test_pullback_identity_and_moebius():
    box = GeodesicBox(0.3, 1.2, 2.9, 4.4)
    assert pullback_liouville(CircleMap.identity(), box) == pytest.approx(liouville_box(box))
    m = MoebiusMap.from_point(0.4 + 0.1j, 2.0)
    h = CircleMap.from_moebius(m, 20000)
    # linear interpolation of the lift costs O(n^-2)
    assert pullback_liouville(h, box) == pytest.approx(liouville_box(box), abs=1e-6)


def test_pullback_half_map_composed_with_rotation():
    m = MoebiusMap.rotation(0.8).compose(HALF)
    box = GeodesicBox(0.3, 1.2, 2.9, 4.4)
    h = CircleMap.from_function(lambda a: np.unwrap(np.angle(m(np.exp(1j * a)))), 40000)
    assert pullback_liouville(h, box) == pytest.approx(liouville_box(apply_moebius(m, box)),
                                                       abs=1e-6)


def test_pullback_resolution_error():
    # a map crushing a whole arc into one sample interval
    h = CircleMap([0.0, 0.1, 6.0], [0.0, 1e-14, 2e-14])
    with pytest.raises(ResolutionError):
        pullback_liouville(h, GeodesicBox(1.0, 2.0, 3.0, 4.0))
