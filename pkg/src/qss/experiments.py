"""Seeded multi-trial experiments, error-rate estimates and table verification.

Everything here returns plain dict records ready for line-delimited JSON; see
``qss.schema`` for their layout.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Optional

import numpy as np
from scipy.stats import binomtest

from .adversary import AdversaryKind, AdversaryStrategy
from .codec import bits_to_str
from .core import (
    ALL_OPS,
    CANONICAL_LABELS,
    TRANSFORM_TABLE,
    Basis,
    CanonicalState,
    Slot,
    apply_local,
    classify,
)
from .errors import ConfigError
from .protocol import ProtocolConfig, Role, SessionResult, StandardSession, run_any

CONFIDENCE = 0.95
ADVERSARY_CHOICES = ("none", "intercept-resend", "insider")


def hex_to_bits(text: str) -> np.ndarray:
    """Each hex digit contributes four bits, most significant first."""
    text = text.strip().lower()
    if text.startswith("0x"):
        text = text[2:]
    try:
        nibbles = [int(c, 16) for c in text]
    except ValueError:
        raise ConfigError(f"not a hex string: {text!r}") from None
    return np.array([(n >> s) & 1 for n in nibbles for s in (3, 2, 1, 0)], dtype=np.uint8)


def bytes_to_bits(data: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def binomial_ci(successes: int, n: int, level: float = CONFIDENCE) -> tuple[float, float]:
    ci = binomtest(int(successes), int(n)).proportion_ci(confidence_level=level, method="wilson")
    return float(ci.low), float(ci.high)


def trial_seed(master: int, trial: int) -> int:
    """Counter-based split of the master seed: trial ``i`` gets spawn key ``(i,)``."""
    seq = np.random.SeedSequence(master, spawn_key=(trial,))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def build_adversary(name: str, n_parties: int, single_basis: bool = False) -> AdversaryStrategy:
    """Map a CLI adversary name onto a strategy for a chain of ``n_parties``.

    With a single checking basis the eavesdropper knows that basis and sits on
    the link into the measuring sharer.
    """
    if name == "none":
        return AdversaryStrategy.none()
    if name == "intercept-resend":
        if single_basis:
            return AdversaryStrategy.intercept_resend(links=(n_parties - 2,), basis=Basis.DIAGONAL)
        return AdversaryStrategy.intercept_resend(links=(0,))
    if name == "insider":
        return AdversaryStrategy.insider_fake_sequence(sharer=n_parties - 1)
    raise ConfigError(f"unknown adversary {name!r}; choose from {', '.join(ADVERSARY_CHOICES)}")


def adversary_label(strategy: AdversaryStrategy) -> str:
    return {
        AdversaryKind.NONE: "none",
        AdversaryKind.INTERCEPT_RESEND: "intercept-resend",
        AdversaryKind.INSIDER: "insider",
    }[strategy.kind]


@dataclass
class RunSpec:
    config: ProtocolConfig
    adversary: AdversaryStrategy = field(default_factory=AdversaryStrategy.none)
    trials: int = 1
    message_hex: Optional[str] = None
    message_file: Optional[Path] = None
    out: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if (self.message_hex is None) == (self.message_file is None):
            raise ConfigError("give exactly one of a hex message or a message file")

    def message_bits(self) -> np.ndarray:
        if self.message_hex is not None:
            bits = hex_to_bits(self.message_hex)
        else:
            try:
                bits = bytes_to_bits(Path(self.message_file).read_bytes())
            except OSError as exc:
                raise ConfigError(f"cannot read message file {self.message_file}: {exc.strerror}") from exc
        if bits.size == 0 or bits.size % 2:
            raise ConfigError(f"message must decode to a positive even bit count, got {bits.size}")
        return bits


@dataclass
class ExperimentReport:
    trials: list[dict]
    aggregate: dict
    duration_s: float
    seed: int

    @property
    def detection_rate(self) -> float:
        return self.aggregate["detection_rate"]

    @property
    def records(self) -> list[dict]:
        return [*self.trials, self.aggregate]


def announcement_records(result: SessionResult, trial: int) -> Iterable[dict]:
    for seq, item in enumerate(result.transcript):
        yield {"record": "announcement", "trial": trial, "seq": seq, **item.to_dict()}


def trial_record(result: SessionResult, trial: int, seed: int, message: np.ndarray) -> dict:
    return {
        "record": "trial",
        "trial": trial,
        "seed": seed,
        "status": result.status.value,
        "transit_error_rate": result.transit_error_rate,
        "auth_error_rate": result.auth_error_rate,
        "recovered_bits": bits_to_str(result.recovered_bits),
        "message_recovered": bool(result.completed and np.array_equal(result.recovered_bits, message)),
        "warnings": list(result.warnings),
    }


def run_experiment(spec: RunSpec, sink=None) -> ExperimentReport:
    """Execute ``spec.trials`` independent sessions.

    Each trial's generator is seeded by :func:`trial_seed`. If ``sink`` is a
    callable it receives every record (announcements, trial summary, final
    aggregate) in trial order.
    """
    message = spec.message_bits()
    base = replace(spec.config, n_pairs=message.size // 2)
    emit = sink or (lambda record: None)
    start = time.perf_counter()
    summaries = []
    for t in range(spec.trials):
        seed = trial_seed(base.seed, t)
        cfg = replace(base, seed=seed)
        result = run_any(cfg, message, spec.adversary, np.random.default_rng(seed))
        for rec in announcement_records(result, t):
            emit(rec)
        summary = trial_record(result, t, seed, message)
        emit(summary)
        summaries.append(summary)

    n = len(summaries)
    detected = sum(s["status"] != "completed" for s in summaries)
    lo, hi = binomial_ci(detected, n)
    aggregate = {
        "record": "aggregate",
        "trials": n,
        "seed": base.seed,
        "parties": base.n_parties,
        "variant": base.variant,
        "adversary": adversary_label(spec.adversary),
        "n_pairs": base.n_pairs,
        "k": base.k,
        "j": base.j,
        "threshold": base.error_threshold,
        "completed": sum(s["status"] == "completed" for s in summaries),
        "aborted_transit_check": sum(s["status"] == "aborted_transit_check" for s in summaries),
        "aborted_authentication": sum(s["status"] == "aborted_authentication" for s in summaries),
        "messages_recovered": sum(s["message_recovered"] for s in summaries),
        "detection_rate": detected / n,
        "detection_ci": [lo, hi],
        "mean_transit_error_rate": float(np.mean([s["transit_error_rate"] for s in summaries])),
        "mean_auth_error_rate": float(np.mean([s["auth_error_rate"] for s in summaries])),
    }
    emit(aggregate)
    return ExperimentReport(summaries, aggregate, time.perf_counter() - start, base.seed)


def dumps(record: Mapping) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def estimate_error_rate(adversary: str, pairs: int, seed: int, single_basis: bool = False,
                        four_op_set: bool = False, n_parties: int = 3) -> dict:
    """Empirical per-pair transit error rate over ``pairs`` independent checking pairs.

    Runs the standard protocol's transmission and checking stages with every
    pair used for checking.
    """
    if pairs < 1:
        raise ConfigError(f"pairs must be >= 1, got {pairs}")
    config = ProtocolConfig(n_parties=n_parties, n_pairs=1, k=pairs, j=0, error_threshold=1.0, seed=seed,
                            four_op_set=four_op_set, single_basis=single_basis)
    strategy = build_adversary(adversary, n_parties, single_basis)
    session = StandardSession(config, "00", strategy)
    session.transmit_y()
    session.checking_round(session.positions(Role.CHECK_K))
    errors = int(session.check_errors.sum())
    lo, hi = binomial_ci(errors, pairs)
    return {
        "record": "error_rate",
        "adversary": adversary,
        "pairs": pairs,
        "errors": errors,
        "error_rate": errors / pairs,
        "ci": [lo, hi],
        "seed": seed,
        "parties": n_parties,
        "single_basis": single_basis,
        "four_op_set": four_op_set,
    }


@dataclass(frozen=True)
class CellCheck:
    op: str
    state: str
    expected: str
    computed: str

    @property
    def ok(self) -> bool:
        return self.expected == self.computed


def verify_tables(table: Mapping = TRANSFORM_TABLE) -> list[CellCheck]:
    """Check every transform-table cell against the amplitude engine."""
    cells = []
    for op in ALL_OPS:
        for label in CANONICAL_LABELS:
            source = CanonicalState(label)
            computed = classify(apply_local(op, Slot.Y, source.to_state()))
            expected = table[(op, label)]
            cells.append(CellCheck(op.value, label.value, str(expected),
                                   "outside" if computed is None else str(computed)))
    return cells

