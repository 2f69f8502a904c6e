import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from algcensus.lattice import (
    STANDARD_REGIONS,
    Region,
    count_points,
    count_primitive,
    count_primitive_bruteforce,
    lattice_main_term,
    lattice_report,
    measure_estimate,
    mobius,
    normalized_deviation,
    positive_quadrant,
    simplex,
    square,
    unit_ball,
)


def test_point_count_examples():
    assert count_points(square(2), 3) == 48
    assert count_points(unit_ball(2), 2) == 12
    assert count_points(positive_quadrant(2), 5) == 35


def test_primitive_examples():
    assert count_primitive(square(2), 3) == 32
    # 19 coprime pairs in [1, 5]^2 plus (1, 0) and (0, 1)
    assert count_primitive(positive_quadrant(2), 5) == 21
    for make in STANDARD_REGIONS.values():
        r = make(2)
        assert count_primitive(r, 1) == count_points(r, 1)


def test_mobius():
    assert [mobius(k) for k in (1, 6, 12, 30, 7)] == [1, 1, 0, -1, -1]
    with pytest.raises(ValueError):
        mobius(0)


def test_measure_estimates():
    assert measure_estimate(square(2)) == pytest.approx(4, abs=1e-3)
    assert measure_estimate(unit_ball(2)) == pytest.approx(math.pi, abs=5e-3)
    assert measure_estimate(simplex(2)) == pytest.approx(0.5, abs=1e-3)


@pytest.mark.parametrize("name", sorted(STANDARD_REGIONS))
@pytest.mark.parametrize("d, Q", [(2, 17), (3, 6)])
def test_mobius_matches_gcd_scan(name, d, Q):
    r = STANDARD_REGIONS[name](d)
    assert count_primitive(r, Q) == count_primitive_bruteforce(r, Q)
    assert count_primitive(r, Q) <= count_points(r, Q)


@pytest.mark.parametrize("name", ["ball", "annulus_slice", "slab", "simplex"])
def test_known_measures_agree_with_qmc(name):
    r = STANDARD_REGIONS[name](2)
    assert measure_estimate(r) == pytest.approx(r.measure, rel=5e-3)


@settings(max_examples=20)
@given(st.sampled_from(sorted(STANDARD_REGIONS)), st.permutations([0, 1, 2]), st.integers(1, 7))
def test_permutation_invariance(name, perm, Q):
    r = STANDARD_REGIONS[name](3)
    assert count_primitive(r.permuted(tuple(perm)), Q) == count_primitive(r, Q)


def test_json_round_trip(tmp_path):
    path = tmp_path / "ball.json"
    path.write_text(json.dumps(unit_ball(2).to_dict()))
    r = Region.load(path)
    assert count_primitive(r, 9) == count_primitive(unit_ball(2), 9)
    raw = {"dim": 2, "inequalities": [{"coeffs": [[1, [0, 0]], [-1, [2, 0]], [-1, [0, 2]]]}]}
    assert count_points(Region.from_dict(raw), 2) == 12


def test_bad_exponent_rejected():
    with pytest.raises(ValueError):
        Region.from_dict({"dim": 2, "inequalities": [{"coeffs": [[1, [1]]]}]})


def test_report_and_main_term():
    rep = lattice_report(square(2), 20)
    assert rep.total_points == 41 ** 2 - 1
    assert rep.main_term == pytest.approx(400 * 4 / (math.pi ** 2 / 6))
    assert lattice_main_term(unit_ball(3), 10) > 0
    assert normalized_deviation(square(2), 50) < 2
