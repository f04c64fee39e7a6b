"""Minkowski gauges of non-symmetric, lower-dimensional sets.

The gauge of C at x is the smallest r > 0 with x in r * C (infinite when no
such r exists). For the segment C = [-2, 1] x {0} the gauge is asymmetric
(different scaling forward and backward along the axis) and infinite off
the axis, which makes the induced pseudo-distance asymmetric and partial.
"""

import numpy as np

from optstab.distances import gauge_distance
from optstab.extreal import INF
from optstab.gauges import GaugeSet, conjugate_gauge, minkowski_gauge


def main():
    C = GaugeSet.from_vertices([[-2.0, 0.0], [1.0, 0.0]])
    print("segment C = [-2, 1] x {0}:")
    for x in ([3.0, 0.0], [-4.0, 0.0], [1.0, 1.0]):
        v = minkowski_gauge(C, x)
        print(f"  gauge({x}) = {v if v != INF else '+inf'}")

    print("\nconjugate gauge S(-x) swaps the two slopes:")
    for x in ([3.0, 0.0], [-4.0, 0.0]):
        print(f"  conj_gauge({x}) = {conjugate_gauge(C, x)}")

    d = gauge_distance(C)
    print("\ninduced pseudo-distance d(x, y) = gauge(y - x) is asymmetric:")
    x, y = np.array([0.0, 0.0]), np.array([2.0, 0.0])
    print(f"  d({x}, {y}) = {d.fn(x, y)}")
    print(f"  d({y}, {x}) = {d.fn(y, x)}")

    ball = GaugeSet.from_ball(2.0, 3)
    print("\nball of radius 2 in R^3: gauge is ||x|| / 2")
    x = [1.0, 2.0, 2.0]
    print(f"  gauge({x}) = {minkowski_gauge(ball, x)} (||x|| = 3)")

    H = GaugeSet.from_halfspaces([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0],
                                  [0.0, -1.0]], [1.0, 2.0, 1.0, 1.0])
    print("\nbox [-2, 1] x [-1, 1] via halfspaces: closed-form max ratio")
    for x in ([2.0, 0.0], [-2.0, 0.0], [0.0, 3.0]):
        print(f"  gauge({x}) = {minkowski_gauge(H, x)}")


if __name__ == "__main__":
    main()
