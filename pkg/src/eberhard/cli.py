"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from .counts import SEQUENCE, StructureError, combo_label
from .data_io import (
    DatasetError,
    builtin_published_dataset,
    load_config,
    load_dataset,
    dumps_dataset,
    save_events,
)
from .drift import (
    BaselinePolicy,
    NormalizationPath,
    adversarial_series,
    compute_factors,
    j_prime,
    normalize_total,
)
from .inequality import eberhard_j, poisson_relative_fluctuation, series_stats, singles_deviations
from .model import (
    PUBLISHED_CONFIG,
    ROW_LABELS,
    ExperimentConfig,
    ParameterError,
    StateParams,
    predict_counts,
    row_quantities,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class ReportRow:
    label: str
    data: Optional[float] = None
    model: Optional[float] = None
    deviation: Optional[float] = None
    passed: Optional[bool] = None

    def __post_init__(self):
        both = self.data is not None and self.model is not None
        if both and self.deviation is None and self.data != 0:
            object.__setattr__(self, "deviation", 100.0 * (self.model - self.data) / abs(self.data))
        if not both and self.deviation is not None:
            raise ValueError("deviation requires both data and model values")

    @classmethod
    def from_json(cls, d: dict) -> "ReportRow":
        return cls(**{k: d.get(k) for k in ("label", "data", "model", "deviation", "passed")})


def _emit(rows: list[ReportRow], as_json: bool, title: str = "") -> None:
    if as_json:
        print(json.dumps([asdict(r) for r in rows], indent=2))
        return
    if title:
        print(title)
    for r in rows:
        parts = [f"{r.label:<28}"]
        for v in (r.data, r.model):
            parts.append(f"{_fmt(r.label, v):>14}" if v is not None else " " * 14)
        if r.deviation is not None:
            parts.append(f"{r.deviation:>9.2f} %")
        if r.passed is not None:
            parts.append("  PASS" if r.passed else "  FAIL")
        print("".join(parts).rstrip())


def _fmt(label: str, v: float) -> str:
    if label.startswith("f ") or label.endswith("[%]") or "/std" in label:
        return f"{v:.2f}"
    return f"{round(v):,d}".replace(",", " ")


# ------------------------------------------------------------------ config


def _config_from_args(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else PUBLISHED_CONFIG
    state = StateParams(
        r=args.r if args.r is not None else cfg.state.r,
        V=args.visibility if args.visibility is not None else cfg.state.V,
    )
    angles = dict(alpha1=cfg.alpha1, alpha2=cfg.alpha2, beta1=cfg.beta1, beta2=cfg.beta2)
    if args.angles:
        vals = [float(x) for x in args.angles.split(",")]
        if len(vals) != 4:
            raise ParameterError("--angles needs four comma-separated values a1,a2,b1,b2")
        angles = dict(zip(("alpha1", "alpha2", "beta1", "beta2"), vals))

    def pick(name, attr):
        v = getattr(args, name)
        return v if v is not None else getattr(cfg, attr)

    return ExperimentConfig(
        state=state,
        eta_a=pick("eta_a", "eta_a"),
        eta_b=pick("eta_b", "eta_b"),
        r0=pick("r0", "r0"),
        t=pick("t", "t"),
        zeta=pick("dark", "zeta"),
        tau_c=pick("tau_c", "tau_c"),
        **angles,
    )


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON experiment config (defaults to the published parameters)")
    p.add_argument("--r", type=float, help="amplitude ratio r of the state")
    p.add_argument("--visibility", "--V", dest="visibility", type=float, help="off-diagonal damping V")
    p.add_argument("--eta-a", type=float, help="Alice's total arm efficiency")
    p.add_argument("--eta-b", type=float, help="Bob's total arm efficiency")
    p.add_argument("--r0", type=float, help="pair production rate (1/s)")
    p.add_argument("--t", type=float, help="measurement time per setting (s)")
    p.add_argument("--dark", type=float, help="dark-count rate per party (1/s)")
    p.add_argument("--tau-c", type=float, help="coincidence window width (s)")
    p.add_argument("--angles", help="a1,a2,b1,b2 in degrees")


# ------------------------------------------------------------------ commands


def cmd_predict(args) -> int:
    cfg = _config_from_args(args)
    pred = predict_counts(cfg)
    q = row_quantities(pred.observed)
    rows = [ReportRow(k, model=q[k]) for k in ROW_LABELS]
    rows += [ReportRow(f"accidentals {combo_label(c)} [%]", model=100 * pred.accidental_fraction(c)) for c in SEQUENCE]
    _emit(rows, args.json, "quantum model prediction")
    return EXIT_OK


def _load(args):
    return builtin_published_dataset() if args.dataset in (None, "paper") else load_dataset(args.dataset)


def cmd_analyze(args) -> int:
    ds = _load(args)
    if not ds.rounds:
        print("dataset has no rounds", file=sys.stderr)
        return EXIT_FAIL
    js = [eberhard_j(r) for r in ds.rounds]
    rows = [ReportRow(f"J round {k + 1}", data=j) for k, j in enumerate(js)]
    st = series_stats(js)
    rows.append(ReportRow("J sum", data=st.sum))
    rows.append(ReportRow("J mean", data=st.mean))
    if st.n > 1:
        rows.append(ReportRow("J std", data=st.std))
        rows.append(ReportRow("mean/std", data=st.mean_significance))
    rows.append(ReportRow("J accumulated", data=eberhard_j(ds.accumulated())))
    totals = ds.accumulated()
    for k, v in singles_deviations(totals).as_dict().items():
        rows.append(ReportRow(f"Delta {k} [%]", data=v))
    for label, n in (("S_A(a1)", totals.block(1, 2).s_a), ("S_B(b1)", totals.block(2, 1).s_b),
                     ("S_A(a2)", totals.block(2, 2).s_a), ("S_B(b2)", totals.block(2, 2).s_b)):
        if n > 0:
            rows.append(ReportRow(f"1/sqrt {label} [%]", data=100 * poisson_relative_fluctuation(n)))
    _emit(rows, args.json, f"Eberhard analysis: {ds.source or args.dataset}")
    return EXIT_OK


def cmd_normalize(args) -> int:
    ds = _load(args)
    if not ds.rounds:
        print("dataset has no rounds", file=sys.stderr)
        return EXIT_FAIL
    path = NormalizationPath.parse(args.path)
    policy = BaselinePolicy.parse(args.baseline)
    if args.variant == "fixed-combo" and policy.combo is None:
        policy = BaselinePolicy.fixed((1, 1))
    rows = []
    if args.variant in ("per-round", "fixed-combo", "adversarial"):
        jps = []
        for k, r in enumerate(ds.rounds):
            f = compute_factors(r, path, policy).percent()
            rows += [ReportRow(f"f round {k + 1} {combo_label(c)}", data=f[c]) for c in SEQUENCE]
            jp = j_prime(r, path, policy)
            jps.append(jp)
            rows.append(ReportRow(f"J round {k + 1}", data=eberhard_j(r)))
            rows.append(ReportRow(f"J' round {k + 1}", data=jp))
        if args.variant == "adversarial":
            st = adversarial_series(ds.rounds, path, policy)
            name = "max(J, J')"
        else:
            st = series_stats(jps)
            name = "J'"
        rows.append(ReportRow(f"{name} sum", data=st.sum))
        rows.append(ReportRow(f"{name} mean", data=st.mean))
        if st.n > 1:
            rows.append(ReportRow(f"{name} std", data=st.std))
    if args.variant in ("total", "fixed-combo"):
        total = ds.accumulated()
        f = compute_factors(total, path, policy).percent()
        rows += [ReportRow(f"f total {combo_label(c)}", data=f[c]) for c in SEQUENCE]
        rows.append(ReportRow("J total", data=eberhard_j(total)))
        rows.append(ReportRow("J' total", data=normalize_total(ds.rounds, path, policy)))
    _emit(rows, args.json, f"drift normalization ({args.variant}, path {path}, baseline {policy})")
    return EXIT_OK


def cmd_simulate(args) -> int:
    from .sim import IntensityProfile, LhvStrategy, Schedule, simulate_experiment, simulate_lhv_experiment

    schedule = Schedule(args.rounds, args.seconds_per_block)
    profile = IntensityProfile.parse(args.profile)
    want_events = args.events is not None
    if args.lhv:
        if args.lhv == "always-pass":
            strategy = LhvStrategy.always_pass(profile)
        else:
            strategy = LhvStrategy.from_json(json.loads(Path(args.lhv).read_text(encoding="utf-8")))
            if args.profile.strip() not in ("", "flat"):
                strategy = LhvStrategy(strategy.tables, strategy.probs, profile)
        cfg = _config_from_args(args)
        res = simulate_lhv_experiment(
            strategy, cfg.r0, schedule, args.seed, tau_c=args.tau_c or 0.0, return_events=want_events
        )
    else:
        cfg = _config_from_args(args)
        res = simulate_experiment(cfg, schedule, profile, args.seed, return_events=want_events)
    ds, events = res if want_events else (res, None)
    text = dumps_dataset(ds)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if events is not None:
        save_events(events, args.events)
    return EXIT_OK


def cmd_validate_paper(args) -> int:
    from .validation import run_all

    rounds = None if args.dataset in (None, "paper") else list(load_dataset(args.dataset).rounds)
    checks = run_all(rounds, simulate=args.simulate)
    if args.json:
        print(json.dumps([c.to_json() for c in checks], indent=2))
    else:
        for c in checks:
            print(f"[{'PASS' if c.passed else 'FAIL'}] criterion {c.criterion}: {c.label:<36} "
                  f"value={c.value:.6g} expected={c.expected:.6g} range=[{c.lo:.6g}, {c.hi:.6g}]")
        n_fail = sum(not c.passed for c in checks)
        print(f"{len(checks) - n_fail}/{len(checks)} checks passed")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eberhard", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("predict", help="model singles, coincidences and J")
    _add_config_flags(s)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("analyze", help="per-round J, statistics and singles deviations")
    s.add_argument("dataset", nargs="?", default="paper", help="dataset JSON or 'paper'")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("normalize", help="drift correction factors and J'")
    s.add_argument("dataset", nargs="?", default="paper", help="dataset JSON or 'paper'")
    s.add_argument("--path", default="default", help="e.g. a1b1>a1b2:A,a1b2>a2b2:B,a2b2>a2b1:A")
    s.add_argument("--baseline", default="smallest", help="'smallest' or a combination such as a1b1")
    s.add_argument("--variant", default="per-round", choices=("per-round", "adversarial", "total", "fixed-combo"))
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("simulate", help="Monte Carlo dataset from the quantum or an LHV source")
    _add_config_flags(s)
    s.add_argument("--rounds", type=int, default=5)
    s.add_argument("--seconds-per-block", type=float, default=60.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--profile", default="flat", help="rate multipliers, e.g. g22=0.9")
    s.add_argument("--lhv", help="'always-pass' or an LHV strategy JSON file")
    s.add_argument("--out", help="dataset output path (stdout if omitted)")
    s.add_argument("--events", help="also write raw click streams to this CSV")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("validate-paper", help="check every published number")
    s.add_argument("--dataset", default="paper", help="dataset to validate instead of the embedded one")
    s.add_argument("--simulate", action="store_true", help="include the Monte Carlo checks")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_validate_paper)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, ValueError) as exc:
        # DatasetError and StructureError are ValueErrors too
        kind = "validation error" if isinstance(exc, (DatasetError, StructureError)) else "parameter error"
        print(f"{kind}: {exc}", file=sys.stderr)
        return EXIT_FAIL if kind == "validation error" else EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
