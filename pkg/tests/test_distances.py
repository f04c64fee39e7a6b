import numpy as np
import pytest

from optstab.distances import (IDENTITY, NONNEGATIVE, SYMMETRIC, TRIANGLE,
                               absolute, binding_energy,
                               check_documented_properties, constant_infinite,
                               energy_ladder, euclidean, eval_distance,
                               gauge_distance)
from optstab.extreal import INF
from optstab.gauges import GaugeSet


def test_euclidean_basics():
    d = euclidean(2)
    assert eval_distance(d, [0.0, 0.0], [3.0, 4.0]) == pytest.approx(5.0)
    assert eval_distance(d, [1.0, 1.0], [1.0, 1.0]) == 0.0


def test_dimension_mismatch_rejected():
    d = euclidean(2)
    with pytest.raises(ValueError):
        eval_distance(d, [0.0, 0.0, 0.0], [1.0, 1.0, 1.0])


def test_absolute():
    d = absolute()
    assert eval_distance(d, 2.0, -1.0) == 3.0


def test_energy_ladder_is_signed_and_asymmetric():
    d = energy_ladder()
    up = eval_distance(d, 1, 2)
    assert up == pytest.approx(10.2)
    assert eval_distance(d, 2, 1) == pytest.approx(-10.2)
    assert eval_distance(d, 3, 3) == 0.0
    assert binding_energy(1) == -13.6


def test_energy_ladder_triangle_equality():
    d = energy_ladder()
    # the signed transition cost is additive along any path
    for (x, y, z) in [(1, 3, 2), (2, 5, 4), (1, 2, 6)]:
        assert eval_distance(d, x, y) == pytest.approx(
            eval_distance(d, x, z) + eval_distance(d, z, y))


def test_gauge_distance_asymmetric():
    C = GaugeSet.from_vertices([[-2.0, 0.0], [1.0, 0.0]])
    d = gauge_distance(C)
    assert eval_distance(d, [0.0, 0.0], [1.0, 0.0]) == pytest.approx(1.0, abs=1e-10)
    assert eval_distance(d, [1.0, 0.0], [0.0, 0.0]) == pytest.approx(0.5, abs=1e-10)
    assert eval_distance(d, [0.0, 0.0], [0.0, 1.0]) == INF


def test_constant_infinite():
    d = constant_infinite()
    assert eval_distance(d, 0.0, 0.0) == INF


def test_property_spot_checks():
    rng = np.random.default_rng(0)
    triples = [(rng.standard_normal(2), rng.standard_normal(2),
                rng.standard_normal(2)) for _ in range(50)]
    res = check_documented_properties(euclidean(2), triples)
    assert res == {SYMMETRIC: True, NONNEGATIVE: True, TRIANGLE: True,
                   IDENTITY: True}


def test_property_check_detects_violation():
    from optstab.distances import PseudoDistance
    d = PseudoDistance(name="signed", fn=lambda x, y: float(y) - float(x),
                       ambient_dim=1, properties=frozenset({NONNEGATIVE}))
    res = check_documented_properties(d, [(1.0, 0.0, 0.5)])
    assert res[NONNEGATIVE] is False
