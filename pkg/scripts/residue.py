"""Compare the win relation with the truth of the residue.

Random (cirquent, run, interpretation) triples, then every legal run and
every interpretation for the exhaustive height-3 corpus.
"""

import argparse
import json

from cirquent.corpus import CorpusSpec, exhaustive
from cirquent.experiments import residue_exhaustive, residue_random


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=2)
    ap.add_argument("--max-height", type=int, default=3)
    args = ap.parse_args()
    out = {"random": residue_random(args.count, args.seed).to_dict(),
           "exhaustive": residue_exhaustive(exhaustive(CorpusSpec(max_height=args.max_height))).to_dict()}
    print(json.dumps(out, sort_keys=True, indent=2))


if __name__ == "__main__":
    main()
