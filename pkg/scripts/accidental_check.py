"""Compare simulated accidental coincidences with the analytic estimate."""

import argparse

from eberhard.model import PUBLISHED_CONFIG
from eberhard.validation import simulated_accidental_checks


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seconds", type=float, default=30.0, help="block length per seed")
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()
    for c in simulated_accidental_checks(PUBLISHED_CONFIG, args.seconds, args.seeds):
        flag = "PASS" if c.passed else "FAIL"
        print(f"[{flag}] {c.label:<36} {c.value:>12.4g}  expected {c.expected:>10.4g}  [{c.lo:.4g}, {c.hi:.4g}]")


if __name__ == "__main__":
    main()
