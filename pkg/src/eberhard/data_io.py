"""JSON count datasets, CSV event streams and JSON experiment configs.

Counts dataset (UTF-8 JSON)::

    {
      "format_version": 1,
      "metadata": {"source": ..., "durationSeconds": 60.0,
                   "sequence": ["a1b1", "a1b2", "a2b2", "a2b1"],
                   "anglesDegrees": {"alpha1": ..., ...} | null,
                   "sim": {...} | null},
      "rounds": [{"blocks": [{"setting": "a1b1", "alpha": 85.6, "beta": -5.4,
                              "sA": ..., "sB": ..., "cOO": ...,
                              "durationSeconds": 60.0}, ...]}, ...],
      "totals": {"blocks": [...]} | null
    }

Event streams (CSV) have the header ``time_ns,party,block_id`` with
integer nanoseconds from the start of each block.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

import numpy as np

from .counts import (
    SEQUENCE,
    Combo,
    CountsBlock,
    RoundData,
    StructureError,
    accumulate,
    combo_label,
    parse_combo,
)
from .model import ExperimentConfig, StateParams

FORMAT_VERSION = 1
ANGLE_KEYS = ("alpha1", "alpha2", "beta1", "beta2")


class DatasetError(ValueError):
    """A file failed validation; the message names the offending location."""


@dataclass(frozen=True)
class Dataset:
    rounds: tuple[RoundData, ...] = ()
    source: str = ""
    block_seconds: Optional[float] = None
    sequence: tuple[Combo, ...] = SEQUENCE
    angles: Optional[Mapping[str, float]] = None
    totals: Optional[RoundData] = None
    sim: Optional[Mapping[str, Any]] = None

    def __post_init__(self):
        object.__setattr__(self, "rounds", tuple(self.rounds))
        object.__setattr__(self, "sequence", tuple(tuple(c) for c in self.sequence))
        if self.totals is not None:
            diff = totals_mismatch(self.rounds, self.totals)
            if diff:
                raise DatasetError("totals do not equal the sum of rounds: " + "; ".join(diff))

    def accumulated(self) -> RoundData:
        return accumulate(self.rounds)


def totals_mismatch(rounds, totals: RoundData) -> list[str]:
    """Human-readable differences between ``totals`` and the summed rounds."""
    if not rounds:
        return ["totals given for a dataset without rounds"]
    acc = accumulate(rounds)
    diff = []
    for b in totals.blocks:
        a = acc.block(*b.combo)
        for name, key in (("s_a", "sA"), ("s_b", "sB"), ("c_oo", "cOO")):
            got, want = getattr(b, name), getattr(a, name)
            if not math.isclose(got, want, rel_tol=1e-12, abs_tol=1e-9):
                diff.append(f"{combo_label(b.combo)}.{key}: totals={got!r} sum={want!r}")
    return diff


# ---------------------------------------------------------------- counts


def _block_to_json(b: CountsBlock, angles, seconds) -> dict:
    return {
        "setting": combo_label(b.combo),
        "alpha": angles[f"alpha{b.alpha}"] if angles else None,
        "beta": angles[f"beta{b.beta}"] if angles else None,
        "sA": b.s_a,
        "sB": b.s_b,
        "cOO": b.c_oo,
        "durationSeconds": seconds,
    }


def dataset_to_json(ds: Dataset) -> dict:
    angles = dict(ds.angles) if ds.angles else None

    def rnd(r: RoundData) -> dict:
        return {"blocks": [_block_to_json(b, angles, ds.block_seconds) for b in r.blocks]}

    return {
        "format_version": FORMAT_VERSION,
        "metadata": {
            "source": ds.source,
            "durationSeconds": ds.block_seconds,
            "sequence": [combo_label(c) for c in ds.sequence],
            "anglesDegrees": angles,
            "sim": dict(ds.sim) if ds.sim is not None else None,
        },
        "rounds": [rnd(r) for r in ds.rounds],
        "totals": rnd(ds.totals) if ds.totals is not None else None,
    }


def _count(obj: Mapping, key: str, where: str) -> float:
    if key not in obj:
        raise DatasetError(f"{where}: missing field {key!r}")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v < 0:
        raise DatasetError(f"{where}.{key}: expected a non-negative number, got {v!r}")
    return v


def _round_from_json(obj: Any, where: str, angles) -> RoundData:
    if not isinstance(obj, Mapping) or not isinstance(obj.get("blocks"), list):
        raise DatasetError(f"{where}: expected an object with a 'blocks' list")
    blocks = []
    for k, bj in enumerate(obj["blocks"]):
        loc = f"{where}.blocks[{k}]"
        if not isinstance(bj, Mapping):
            raise DatasetError(f"{loc}: expected an object")
        try:
            combo = parse_combo(str(bj.get("setting", "")))
        except ValueError as exc:
            raise DatasetError(f"{loc}.setting: {exc}") from None
        if angles:
            for key, idx in (("alpha", f"alpha{combo[0]}"), ("beta", f"beta{combo[1]}")):
                v = bj.get(key)
                if v is not None and not math.isclose(v, angles[idx], abs_tol=1e-9):
                    raise DatasetError(f"{loc}.{key}: {v} disagrees with metadata {idx}={angles[idx]}")
        blocks.append(
            CountsBlock(combo[0], combo[1], _count(bj, "sA", loc), _count(bj, "sB", loc), _count(bj, "cOO", loc))
        )
    try:
        return RoundData(tuple(blocks))
    except StructureError as exc:
        raise DatasetError(f"{where}: {exc}") from None


def dataset_from_json(obj: Any) -> Dataset:
    if not isinstance(obj, Mapping):
        raise DatasetError("top level: expected an object")
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise DatasetError(f"format_version: unsupported value {version!r}")
    meta = obj.get("metadata") or {}
    if not isinstance(meta, Mapping):
        raise DatasetError("metadata: expected an object")
    angles = meta.get("anglesDegrees")
    if angles is not None:
        if not isinstance(angles, Mapping) or set(angles) != set(ANGLE_KEYS):
            raise DatasetError(f"metadata.anglesDegrees: expected keys {ANGLE_KEYS}")
        angles = {k: angles[k] for k in ANGLE_KEYS}
    try:
        sequence = tuple(parse_combo(s) for s in meta.get("sequence", [combo_label(c) for c in SEQUENCE]))
    except ValueError as exc:
        raise DatasetError(f"metadata.sequence: {exc}") from None
    rounds_json = obj.get("rounds", [])
    if not isinstance(rounds_json, list):
        raise DatasetError("rounds: expected a list")
    rounds = tuple(_round_from_json(r, f"rounds[{i}]", angles) for i, r in enumerate(rounds_json))
    totals = obj.get("totals")
    if totals is not None:
        totals = _round_from_json(totals, "totals", angles)
    return Dataset(
        rounds=rounds,
        source=meta.get("source", ""),
        block_seconds=meta.get("durationSeconds"),
        sequence=sequence,
        angles=angles,
        totals=totals,
        sim=meta.get("sim"),
    )


def dumps_dataset(ds: Dataset) -> str:
    return json.dumps(dataset_to_json(ds), indent=2) + "\n"


def save_dataset(ds: Dataset, path) -> None:
    Path(path).write_text(dumps_dataset(ds), encoding="utf-8")


def load_dataset(path) -> Dataset:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from None
    return dataset_from_json(obj)


def builtin_published_dataset() -> Dataset:
    from .fixtures import BLOCK_SECONDS, published_rounds, published_totals
    from .model import PUBLISHED_CONFIG

    return Dataset(
        rounds=tuple(published_rounds()),
        source="published 5-round Eberhard test data",
        block_seconds=BLOCK_SECONDS,
        angles={k: getattr(PUBLISHED_CONFIG, k) for k in ANGLE_KEYS},
        totals=published_totals(),
    )


# ---------------------------------------------------------------- configs


def config_to_json(cfg: ExperimentConfig) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "r": cfg.state.r,
        "V": cfg.state.V,
        "etaA": cfg.eta_a,
        "etaB": cfg.eta_b,
        "r0": cfg.r0,
        "t": cfg.t,
        "zeta": cfg.zeta,
        "tauC": cfg.tau_c,
        **{k: getattr(cfg, k) for k in ANGLE_KEYS},
    }


def config_from_json(obj: Mapping) -> ExperimentConfig:
    keys = ("r", "V", "etaA", "etaB", "r0", "t", "zeta", "tauC") + ANGLE_KEYS
    missing = [k for k in keys if k not in obj]
    if missing:
        raise DatasetError(f"config: missing fields {missing}")
    return ExperimentConfig(
        state=StateParams(r=obj["r"], V=obj["V"]),
        eta_a=obj["etaA"],
        eta_b=obj["etaB"],
        r0=obj["r0"],
        t=obj["t"],
        zeta=obj["zeta"],
        tau_c=obj["tauC"],
        **{k: obj[k] for k in ANGLE_KEYS},
    )


def load_config(path) -> ExperimentConfig:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from None
    return config_from_json(obj)


def save_config(cfg: ExperimentConfig, path) -> None:
    Path(path).write_text(json.dumps(config_to_json(cfg), indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------- events

EVENT_HEADER = ("time_ns", "party", "block_id")


@dataclass
class EventStreams:
    """Sorted integer-nanosecond click times per block and party."""

    blocks: dict[str, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, EventStreams) or list(self.blocks) != list(other.blocks):
            return False
        return all(
            np.array_equal(a, oa) and np.array_equal(b, ob)
            for (a, b), (oa, ob) in zip(self.blocks.values(), other.blocks.values())
        )


def save_events(streams: EventStreams, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(EVENT_HEADER)
        for block_id, (a, b) in streams.blocks.items():
            for party, ts in (("A", a), ("B", b)):
                w.writerows((int(t), party, block_id) for t in ts)


def load_events(path) -> EventStreams:
    raw: dict[str, dict[str, list[int]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return EventStreams()
        if tuple(h.strip() for h in header) != EVENT_HEADER:
            raise DatasetError(f"{path}:1: expected header {','.join(EVENT_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise DatasetError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            t_s, party, block_id = row
            try:
                t = int(t_s)
            except ValueError:
                raise DatasetError(f"{path}:{lineno}: time_ns {t_s!r} is not an integer") from None
            if t < 0:
                raise DatasetError(f"{path}:{lineno}: negative time_ns")
            if party not in ("A", "B"):
                raise DatasetError(f"{path}:{lineno}: party must be A or B, got {party!r}")
            ts = raw.setdefault(block_id, {"A": [], "B": []})[party]
            if ts and t < ts[-1]:
                raise DatasetError(f"{path}:{lineno}: timestamps out of order in {block_id}/{party}")
            ts.append(t)
    return EventStreams(
        {
            k: (np.asarray(v["A"], dtype=np.int64), np.asarray(v["B"], dtype=np.int64))
            for k, v in raw.items()
        }
    )
