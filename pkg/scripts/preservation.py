"""Check that sampled rule applications preserve validity, as judged by the oracle."""

import argparse
import json

from cirquent.experiments import preservation, sample_applications


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rep = preservation(sample_applications(args.count, args.seed))
    print(json.dumps(rep.to_dict(), sort_keys=True, indent=2))


if __name__ == "__main__":
    main()
