"""Watch scaled sums of projection arrays converge to a free Poisson law.

Each row variable is a rank-lambda/N projection; summing N free copies
and reading off cumulants shows the 1/N error decay toward the limit
kappa_m = lambda * alpha^m.  Everything is exact rational arithmetic, so
the table below is the true error, not a float estimate.
"""

from fractions import Fraction as F

from freeprob.limits import poisson_limit_check
from freeprob.models import PoissonSpec
from freeprob.limits import multi_poisson_limit_check


def main():
    report = poisson_limit_check(1, 1, (10, 100, 1000), order=6)
    print("single rate, lambda = alpha = 1, order 6")
    print(report.to_text())
    print()

    # two rates with different jump sizes on orthogonal ranges: mixed
    # cumulants vanish in the limit, pure ones pick up lambda_i alpha_i^m
    spec = PoissonSpec.of((F(1), F(2)), (F(1), F(1, 2)))
    report = multi_poisson_limit_check(spec, "orthogonal", (10, 100, 1000), 4)
    print("two orthogonal rates, order 4")
    print(report.to_text())


if __name__ == "__main__":
    main()
