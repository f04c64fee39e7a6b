"""Why optimal values are not continuous in the Hausdorff distance.

Walks the two counterexample families from the instance catalog: a tiny,
shrinking perturbation of the feasible set moves sup f from 0 to 1 and
inf f from 0 to -1, no matter how small the Hausdorff distance gets.
"""

from optstab.distances import absolute, euclidean
from optstab.instances import (axis_segment_family, oscillating_blocks,
                               oscillating_objective, segment_sine_objective)
from optstab.optima import inf_over, sup_over
from optstab.sets import hausdorff


def main():
    K = 60

    print("=== interval-union family on the line ===")
    f = oscillating_objective(K)
    d = absolute()
    A = oscillating_blocks(K)
    print(f"baseline set: inf = {inf_over(f, A).value}, "
          f"sup = {sup_over(f, A).value}")
    print(f"{'j':>4} {'D_H(A, A_j)':>14} {'inf f(A_j)':>12} {'sup f(A_j)':>12}")
    for j in (2, 5, 10, 25, 50):
        A_j = oscillating_blocks(K, extended_j=j)
        dh = hausdorff(d, A, A_j).value
        print(f"{j:>4} {dh:>14.6f} {inf_over(f, A_j).value:>12} "
              f"{sup_over(f, A_j).value:>12}")
    print("D_H -> 0 while the optimal values stay pinned at -1 and +1.\n")

    print("=== axis-segment family in 60 dimensions ===")
    g = segment_sine_objective(K)
    d2 = euclidean(K)
    B = axis_segment_family(K)
    print(f"baseline set: inf = {inf_over(g, B).value}, "
          f"sup = {sup_over(g, B).value}")
    print(f"{'j':>4} {'D_H(A, A_j)':>14} {'inf f(A_j)':>12} {'sup f(A_j)':>12}")
    for j in (2, 5, 10, 25, 50):
        B_j = axis_segment_family(K, extended_j=j)
        dh = hausdorff(d2, B, B_j).value
        print(f"{j:>4} {dh:>14.6f} {inf_over(g, B_j).value:>12} "
              f"{sup_over(g, B_j).value:>12}")
    print("Same jump: the extension tip packs a full oscillation of a sine\n"
          "into an interval of length 1/j.")


if __name__ == "__main__":
    main()
