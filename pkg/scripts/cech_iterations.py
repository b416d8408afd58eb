"""Count rounds of J o Cech until the weight stops changing, on random inputs."""

import argparse
from collections import Counter

import numpy as np

from funclust.generators import random_weight
from funclust.sieves import cech_sieve, iterate_to_stable, sieve_to_weight, sl_sieve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=300)
    ap.add_argument("--max-n", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    rounds = Counter()
    for _ in range(args.samples):
        u = random_weight(rng, int(rng.integers(1, args.max_n + 1)), exact=True, high=4)
        fixed, k = iterate_to_stable(cech_sieve, u)
        assert fixed == sieve_to_weight(sl_sieve(u))
        rounds[k] += 1
    for k in sorted(rounds):
        print(f"{k} round(s): {rounds[k]}")


if __name__ == "__main__":
    main()
