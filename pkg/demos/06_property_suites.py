"""The randomized checks behind the correctness claims, at a small scale.

Each suite draws random rules, terms and graphs from a fixed seed and
reports counterexamples with enough text to replay them.
"""
import random
import sys

from pbpo_trs.checks import categorical_suite, run_all, zoning_suite
from pbpo_trs.fixtures import ab_trs

SEED = 20240601


def main(samples=30):
    for res in run_all(None, SEED, samples=samples):
        print(res.summary())
    for res in run_all(ab_trs(), SEED, samples=samples):
        print("a(b(x)) -> b(a(x)):", res.summary())
    print(categorical_suite(random.Random(SEED), samples).summary())
    print(zoning_suite(random.Random(SEED), samples).summary())


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 30)
