"""Certify or refute infinite divisibility from cumulant Gram matrices.

A law is freely infinitely divisible exactly when its shifted cumulant
kernel is positive semidefinite.  The check is exact: a PASS comes with
a pivot trace, a FAIL with a rational witness vector you can re-evaluate
by hand.
"""

from fractions import Fraction as F

from freeprob.infdiv import check_infdiv
from freeprob.models import bernoulli, free_poisson, semicircle


def main():
    laws = [
        ("semicircle, radius 2", semicircle(2, 8)),
        ("free Poisson, rate 1", free_poisson(1, 1, 8)),
        ("symmetric Bernoulli", bernoulli(F(1, 2), 1, -1, 8)),
    ]
    for label, law in laws:
        verdict = check_infdiv(law, degree=3)
        print(
            "%-22s %s  (Gram dim %d, rank %d)"
            % (label, verdict.verdict, verdict.dimension, verdict.rank)
        )
        if not verdict.passed:
            combo = " + ".join("(%s)*[%s]" % (c, w) for w, c in verdict.witness)
            print("  witness vector :", combo)
            print("  quadratic form :", verdict.witness_value)


if __name__ == "__main__":
    main()
