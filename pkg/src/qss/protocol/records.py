"""Configuration, pair records, transcripts and session outcomes."""
from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field
from typing import Any, Iterator

import numpy as np

from ..core import Bell
from ..errors import ConfigError

DEFAULT_ERROR_THRESHOLD = 0.02


class Role(str, enum.Enum):
    MESSAGE = "message"
    CHECK_K = "check_k"
    CHECK_J = "check_j"


class Status(str, enum.Enum):
    COMPLETED = "completed"
    ABORTED_TRANSIT_CHECK = "aborted_transit_check"
    ABORTED_AUTHENTICATION = "aborted_authentication"


@dataclass(frozen=True)
class ProtocolConfig:
    """Parameters of one protocol session.

    ``n_parties`` counts the sender plus ``n_parties - 1`` sharers. ``n_pairs``
    is the number of message pairs (two bits each), ``k`` and ``j`` the
    transit-check and authentication pair counts.
    """

    n_parties: int = 3
    n_pairs: int = 1
    k: int = 64
    j: int = 32
    error_threshold: float = DEFAULT_ERROR_THRESHOLD
    variant: bool = False
    seed: int = 0
    four_op_set: bool = False
    single_basis: bool = False

    def __post_init__(self) -> None:
        if self.n_parties < 3:
            raise ConfigError(f"n_parties must be >= 3, got {self.n_parties}")
        if self.n_pairs < 1:
            raise ConfigError(f"n_pairs must be >= 1, got {self.n_pairs}")
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.j < 0:
            raise ConfigError(f"j must be >= 0, got {self.j}")
        if not 0.0 <= self.error_threshold <= 1.0:
            raise ConfigError(f"error_threshold must lie in [0, 1], got {self.error_threshold}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def n_sharers(self) -> int:
        return self.n_parties - 1

    @property
    def total_pairs(self) -> int:
        return self.n_pairs + self.k + self.j


@dataclass
class PhotonPairRecord:
    pair_id: int
    role: Role
    position: int
    initial: Bell
    # row view into the session's amplitude register; updates in place
    state: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class Announcement:
    speaker: str
    step: str
    kind: str
    payload: dict[str, Any]

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


class Transcript:
    """Append-only log of public classical messages and photon transmissions."""

    def __init__(self) -> None:
        self._items: list[Announcement] = []

    def announce(self, speaker: str, step: str, kind: str, **payload: Any) -> Announcement:
        item = Announcement(speaker, step, kind, payload)
        self._items.append(item)
        return item

    def __iter__(self) -> Iterator[Announcement]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __getitem__(self, i):
        return self._items[i]

    def of_kind(self, kind: str) -> list[Announcement]:
        return [a for a in self._items if a.kind == kind]


@dataclass(frozen=True)
class Denial:
    """Returned by extraction when some sharers did not take part."""

    missing: tuple[str, ...]


@dataclass
class SessionResult:
    status: Status
    transit_error_rate: float
    auth_error_rate: float
    recovered_bits: np.ndarray
    transcript: Transcript
    warnings: list[str] = field(default_factory=list)
    extraction_log: list[tuple[int, str]] = field(default_factory=list)

    @property
    def completed(self) -> bool:
        return self.status is Status.COMPLETED

    @property
    def detected(self) -> bool:
        return self.status is not Status.COMPLETED


def empty_bits() -> np.ndarray:
    return np.zeros(0, dtype=np.uint8)
