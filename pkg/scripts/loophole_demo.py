"""Always-pass local source with a setting-dependent production rate.

Shows the raw J going negative at many sigma while J' stays near zero.
"""

import argparse
import math

from eberhard.counts import accumulate
from eberhard.drift import j_prime_series, j_prime_sigma
from eberhard.inequality import eberhard_j, eberhard_j_sigma
from eberhard.model import PUBLISHED_CONFIG
from eberhard.sim import IntensityProfile, LhvStrategy, Schedule, simulate_lhv_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g22", type=float, nargs="+", default=[1.0, 0.99, 0.95, 0.9])
    ap.add_argument("--rate", type=float, default=PUBLISHED_CONFIG.r0)
    ap.add_argument("--rounds", type=int, default=5)
    ap.add_argument("--seconds", type=float, default=60.0)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    print(f"{'g22':>6} {'J':>12} {'J/sigma':>9} {'J_prime':>10} {'J_prime/sigma':>14}")
    for g in args.g22:
        strategy = LhvStrategy.always_pass(IntensityProfile({(2, 2): g}))
        ds = simulate_lhv_experiment(strategy, args.rate, Schedule(args.rounds, args.seconds), args.seed)
        total = accumulate(ds.rounds)
        j = eberhard_j(total)
        jp = sum(j_prime_series(ds.rounds))
        sjp = math.sqrt(sum(j_prime_sigma(r) ** 2 for r in ds.rounds))
        print(f"{g:>6.3f} {j:>12,.0f} {j / eberhard_j_sigma(total):>9.1f} {jp:>10.1f} {jp / max(sjp, 1.0):>14.2f}")


if __name__ == "__main__":
    main()
