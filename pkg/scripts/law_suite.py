"""Run the projection-law checker over every projection kind and print a table."""

import argparse
from fractions import Fraction

import numpy as np

from funclust.generators import random_weight
from funclust.projections import Discretize, Identity, Intersection, PathMetric, check_projection_laws
from funclust.weights import INF, ASpace, QMetric, RhoInframetric, Ultrametric

KINDS = [Identity(), Ultrametric(), PathMetric(), QMetric(Fraction(3, 2)), QMetric(2), QMetric(INF),
         RhoInframetric(Fraction(3, 2)), RhoInframetric(2), ASpace(), Discretize(step=1),
         Discretize(step=1, path_metric=True), Intersection((PathMetric(), RhoInframetric(Fraction(3, 2))))]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=200)
    ap.add_argument("--maps", type=int, default=100)
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    suite = [random_weight(rng, int(rng.integers(1, args.max_n + 1)), exact=bool(k % 2))
             for k in range(args.instances)]
    bad = 0
    for kind in KINDS:
        rep = check_projection_laws(kind, suite, n_maps=args.maps, seed=args.seed)
        bad += not rep.ok
        print(("ok   " if rep.ok else "FAIL ") + rep.summary())
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
