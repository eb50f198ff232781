"""Cross-check decide against the game-search oracle.

    python scripts/agreement.py                 # exhaustive height-3 corpus
    python scripts/agreement.py --random 1000   # seeded random instances
"""

import argparse
import json
import time

from cirquent.corpus import CorpusSpec, exhaustive, random_corpus
from cirquent.experiments import agreement


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--random", type=int, metavar="N", help="use N random instances instead")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-height", type=int, default=3)
    args = ap.parse_args()
    start = time.perf_counter()
    if args.random:
        rep = agreement(random_corpus(count=args.random, seed=args.seed))
    else:
        rep = agreement(exhaustive(CorpusSpec(max_height=args.max_height)))
    print(json.dumps(rep.to_dict(), sort_keys=True, indent=2))
    print(f"# {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
