"""Print the model row, per-round J and J', factors and singles deviations."""

from eberhard.counts import SEQUENCE, combo_label
from eberhard.drift import BaselinePolicy, adversarial_series, compute_factors, j_prime, normalize_total
from eberhard.fixtures import MEASURED_ROW, published_rounds, published_totals
from eberhard.inequality import eberhard_j, series_stats, singles_deviations
from eberhard.model import PUBLISHED_CONFIG, compare_model, predict_counts


def main():
    pred = predict_counts(PUBLISHED_CONFIG)
    print("model vs data")
    for e in compare_model(MEASURED_ROW, pred.observed).entries:
        print(f"  {e.label:<8} data {e.data:>12,.0f}  model {e.model:>12,.0f}  {e.deviation:+6.2f} %")
    print("accidentals / observed coincidences")
    for c in SEQUENCE:
        print(f"  {combo_label(c)}  {100 * pred.accidental_fraction(c):7.3f} %")

    rounds = published_rounds()
    print("\nround  f(a1b1) f(a1b2) f(a2b2) f(a2b1)        J        J'")
    js, jps = [], []
    for k, r in enumerate(rounds, 1):
        f = compute_factors(r).percent()
        js.append(eberhard_j(r))
        jps.append(j_prime(r))
        print(f"{k:>5}  " + " ".join(f"{f[c]:7.2f}" for c in SEQUENCE) + f"  {js[-1]:>8}  {jps[-1]:>8.0f}")
    for name, vals in (("J", js), ("J'", jps)):
        s = series_stats(vals)
        print(f"{name:<3} sum {s.sum:>10.0f}  mean {s.mean:>9.0f}  std {s.std:>6.0f}  mean/std {s.mean_significance:6.2f}")
    adv = adversarial_series(rounds)
    print(f"max(J, J') sum {adv.sum:.0f}  mean {adv.mean:.0f}  std {adv.std:.0f}")
    print(f"total-count J' {normalize_total(rounds):.0f}")
    print(f"fixed a1b1 total J' {normalize_total(rounds, policy=BaselinePolicy.fixed((1, 1))):.0f}")

    print("\nsingles deviations of the totals")
    for k, v in singles_deviations(published_totals()).as_dict().items():
        print(f"  {k}  {v:+.2f} %")


if __name__ == "__main__":
    main()
