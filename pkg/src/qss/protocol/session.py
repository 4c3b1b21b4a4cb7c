"""Pieces shared by the standard and variant session drivers."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

from ..adversary import AdversaryStrategy
from ..codec import BitsLike, as_bits, encode_message
from ..core import (
    ALL_OPS,
    BELL_LABELS,
    LABEL_INDEX,
    OP_INDEX,
    PAULI_OPS,
    Slot,
    apply_ops,
)
from ..core.states import CANONICAL_MATRIX
from ..core.symbolic import PARITY
from ..errors import ConfigError, RoundAborted
from .records import (
    Denial,
    PhotonPairRecord,
    ProtocolConfig,
    Role,
    SessionResult,
    Status,
    Transcript,
    empty_bits,
)

log = logging.getLogger(__name__)

SENDER = "alice"
NO_AUTH_WARNING = "j=0: no authentication pairs, delivered message is unchecked"


def sharer_name(index: int) -> str:
    return f"sharer{index}"


def op_set(config: ProtocolConfig) -> tuple:
    return PAULI_OPS if config.four_op_set else ALL_OPS


def sharer_encrypt(states: np.ndarray, rng: np.random.Generator, ops=ALL_OPS) -> np.ndarray:
    """Apply a uniformly drawn op from ``ops`` to every Y photon, in place.

    Returns the private record of op indices (into ``ALL_OPS``), one per photon.
    """
    choices = np.array([OP_INDEX[o] for o in ops])
    record = choices[rng.integers(0, len(choices), size=states.shape[0])]
    states[:] = apply_ops(record, Slot.Y, states)
    return record


@dataclass
class Sharer:
    name: str
    index: int
    ops: Optional[np.ndarray] = field(default=None, repr=False)
    withhold: bool = False

    def encrypt(self, states: np.ndarray, rng: np.random.Generator, ops=ALL_OPS) -> None:
        self.ops = sharer_encrypt(states, rng, ops)

    def declare_ops(self, positions: np.ndarray) -> Optional[np.ndarray]:
        if self.withhold or self.ops is None:
            return None
        return self.ops[positions]


def prepare_sequence(message_bits: BitsLike, k: int, j: int, rng: np.random.Generator
                     ) -> tuple[list[PhotonPairRecord], np.ndarray]:
    """Build the sender's ordered pair sequence.

    Message pairs keep their order; each of the ``k + j`` checking pairs gets a
    uniformly random Bell state and is inserted one at a time at a uniformly
    random slot. Returns the records in sequence order and the ``(M, 4)``
    amplitude register their ``state`` fields view into.
    """
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    if j < 0:
        raise ConfigError(f"j must be >= 0, got {j}")
    labels = encode_message(message_bits)
    seq = [(pid, Role.MESSAGE, lab) for pid, lab in enumerate(labels)]
    for c in range(k + j):
        role = Role.CHECK_K if c < k else Role.CHECK_J
        initial = BELL_LABELS[int(rng.integers(0, 4))]
        seq.insert(int(rng.integers(0, len(seq) + 1)), (len(labels) + c, role, initial))
    amps = CANONICAL_MATRIX[[LABEL_INDEX[lab] for _, _, lab in seq]].copy()
    records = [
        PhotonPairRecord(pid, role, pos, lab, amps[pos])
        for pos, (pid, role, lab) in enumerate(seq)
    ]
    return records, amps


def count_errors(final_codes: np.ndarray, x_bases: np.ndarray, y_bases: np.ndarray,
                 x_bits: np.ndarray, y_bits: np.ndarray) -> np.ndarray:
    """Flag pairs whose two outcomes break the correlation of their computed state."""
    parity = PARITY[final_codes, x_bases, y_bases]
    if np.any(parity < 0):
        raise AssertionError("basis choice left a checked pair uncorrelated")
    return (x_bits ^ y_bits) != parity


class BaseSession:
    variant = False

    def __init__(self, config: ProtocolConfig, message_bits: BitsLike,
                 adversary: Optional[AdversaryStrategy] = None,
                 rng: Optional[np.random.Generator] = None):
        if config.variant != self.variant:
            raise ConfigError(f"config.variant={config.variant} does not match {type(self).__name__}")
        bits = as_bits(message_bits)
        if bits.size != 2 * config.n_pairs:
            raise ConfigError(f"message has {bits.size} bits, config expects {2 * config.n_pairs}")
        self.config = config
        self.message_bits = bits
        self.adversary = adversary or AdversaryStrategy.none()
        self.adversary.validate(config.n_parties, config.variant)
        self.rng = rng if rng is not None else np.random.default_rng(config.seed)
        self.transcript = Transcript()
        self.sharers = [Sharer(sharer_name(i), i) for i in range(1, config.n_parties)]
        self.extraction_log: list[tuple[int, str]] = []
        self.warnings: list[str] = []
        self.records: list[PhotonPairRecord] = []
        self.amps = np.zeros((0, 4), dtype=complex)
        self.remaining = np.zeros(0, dtype=np.int64)
        self.check_errors = np.zeros(0, dtype=bool)

    @property
    def last(self) -> Sharer:
        return self.sharers[-1]

    @property
    def encrypting(self) -> list[Sharer]:
        return self.sharers[:-1]

    def positions(self, role: Role) -> np.ndarray:
        return np.array([r.position for r in self.records if r.role is role], dtype=np.int64)

    def role_counts(self) -> dict[Role, int]:
        return {role: sum(r.role is role for r in self.records) for role in Role}

    def _basis_codes(self, n: int) -> np.ndarray:
        if self.config.single_basis:
            return np.zeros(n, dtype=np.int64)
        return self.rng.integers(0, 2, size=n)

    def _collect_ops(self, positions: np.ndarray, sharers: Iterable[Sharer]) -> list[np.ndarray]:
        layers = []
        for sharer in sharers:
            ops = sharer.declare_ops(positions)
            if ops is None:
                raise RoundAborted(f"{sharer.name} did not declare its operations")
            layers.append(ops)
        return layers

    def _missing(self, collaboration) -> tuple[str, ...]:
        names = set()
        for member in collaboration:
            names.add(sharer_name(member) if isinstance(member, (int, np.integer)) else str(member))
        return tuple(s.name for s in self.sharers if s.name not in names)

    def authenticate_message(self, raw_bits: np.ndarray, step: str) -> tuple[float, np.ndarray]:
        """Compare the authentication pairs against the sender's announced values.

        ``raw_bits`` are the decoded bits of the remaining pairs in sequence
        order. Returns the error rate and the message with check bits stripped.
        """
        j_positions = self.positions(Role.CHECK_J)
        truth = self._announced_check_bits(j_positions)
        self.transcript.announce(
            SENDER, step, "auth_pairs",
            positions=[int(p) for p in j_positions],
            values=[f"{a}{b}" for a, b in truth],
        )
        pairs = np.asarray(raw_bits, dtype=np.uint8).reshape(-1, 2)
        slot = np.searchsorted(self.remaining, j_positions)
        is_check = np.zeros(len(self.remaining), dtype=bool)
        is_check[slot] = True
        if len(j_positions):
            wrong = np.any(pairs[slot] != np.asarray(truth, dtype=np.uint8).reshape(-1, 2), axis=1)
            rate = float(wrong.mean())
        else:
            rate = 0.0
            self.warnings.append(NO_AUTH_WARNING)
            log.info(NO_AUTH_WARNING)
        self.transcript.announce("sharers", step, "auth_error_rate", rate=rate)
        return rate, pairs[~is_check].ravel()

    def _announced_check_bits(self, j_positions: np.ndarray) -> list[tuple[int, int]]:
        raise NotImplementedError

    def _result(self, status: Status, transit: float, auth: float = 0.0,
                bits: Optional[np.ndarray] = None) -> SessionResult:
        return SessionResult(
            status=status,
            transit_error_rate=transit,
            auth_error_rate=auth,
            recovered_bits=bits if bits is not None and status is Status.COMPLETED else empty_bits(),
            transcript=self.transcript,
            warnings=list(self.warnings),
            extraction_log=list(self.extraction_log),
        )

    def _abort(self, step: str, reason: str, rate: float) -> SessionResult:
        self.transcript.announce(SENDER, step, "abort", reason=reason, rate=rate)
        return self._result(Status.ABORTED_TRANSIT_CHECK, rate)

    def extract_message(self, collaboration) -> Union[np.ndarray, Denial]:
        raise NotImplementedError

    def run(self) -> SessionResult:
        raise NotImplementedError
