"""Purify seeded random cirquents and audit the results.

Checks purity of the output, replay of the derivation, rank decrease of each
stage rewrite and the overall rank bound.
"""

import argparse
import json

from cirquent.corpus import random_corpus
from cirquent.experiments import purity


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rep = purity(random_corpus(count=args.count, seed=args.seed))
    print(json.dumps(rep.to_dict(), sort_keys=True, indent=2))


if __name__ == "__main__":
    main()
