"""Channel taps and the dishonest-sharer fake-sequence attack.

Links along the first (Y) transmission chain are numbered from 0 in the order
photons traverse them. ``RETURN_LINK`` names the second transmission: the
retained X photons in the standard protocol, the encoded Y photons in the
variant.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .codec import alice_encoding_op, bell_to_bits
from .core import (
    BASES,
    BELL_LABELS,
    BELL_MATRIX,
    OP_INDEX,
    Basis,
    Slot,
    apply_ops,
    bell_measure_many,
    measure_single_many,
)
from .errors import ConfigError

RETURN_LINK = "return"
Link = Union[int, str]


class AdversaryKind(str, enum.Enum):
    NONE = "none"
    INTERCEPT_RESEND = "intercept_resend"
    INSIDER = "insider_fake_sequence"


@dataclass(frozen=True)
class AdversaryStrategy:
    kind: AdversaryKind = AdversaryKind.NONE
    links: tuple[Link, ...] = ()
    # None means each photon's basis is drawn uniformly from both protocol bases
    basis: Optional[Basis] = None
    insider: Optional[int] = None

    @classmethod
    def none(cls) -> "AdversaryStrategy":
        return cls()

    @classmethod
    def intercept_resend(cls, links=(0,), basis: Optional[Basis] = None) -> "AdversaryStrategy":
        return cls(AdversaryKind.INTERCEPT_RESEND, tuple(links), None if basis is None else Basis(basis))

    @classmethod
    def insider_fake_sequence(cls, sharer: int = 2) -> "AdversaryStrategy":
        """Sharer ``sharer`` (1-based) swaps the sender's Y sequence for a fake one."""
        return cls(AdversaryKind.INSIDER, (0,), insider=sharer)

    def validate(self, n_parties: int, variant: bool) -> None:
        n_links = n_parties - 1
        for link in self.links:
            if link != RETURN_LINK and not (isinstance(link, int) and 0 <= link < n_links):
                raise ConfigError(f"link {link!r} does not exist in a {n_parties}-party chain")
        if self.kind is AdversaryKind.INSIDER:
            if variant or n_parties != 3:
                raise ConfigError("the insider attack is modelled for the three-party standard protocol only")
            if self.insider != n_parties - 1:
                raise ConfigError(f"insider must be sharer {n_parties - 1}, the one after the attacked link")
        elif self.insider is not None:
            raise ConfigError("insider identity given for a non-insider strategy")

    def taps(self, link: Link) -> bool:
        return self.kind is AdversaryKind.INTERCEPT_RESEND and link in self.links


def tap_intercept_resend(states: np.ndarray, basis: Optional[Basis], rng: np.random.Generator,
                         slot: Slot = Slot.Y) -> np.ndarray:
    """Measure each in-flight photon and forward a fresh copy of what was seen.

    The returned stack is the pair state after the resend: a product state with
    the forwarded photon in the observed basis state.
    """
    states = np.asarray(states)
    n = states.shape[0]
    if basis is None:
        codes = rng.integers(0, 2, size=n)
    else:
        codes = np.full(n, BASES.index(Basis(basis)))
    _, collapsed = measure_single_many(states, slot, codes, rng)
    return collapsed


# Bell outcome on a fake phi+ pair -> op index that produces it from phi+
_INFERRED_OP = np.array([OP_INDEX[alice_encoding_op(bell_to_bits(b))] for b in BELL_LABELS])


@dataclass
class InsiderState:
    """What the dishonest sharer holds while running the fake-sequence attack.

    ``retained`` is the live register of true pairs (X with the sender, Y
    intercepted by the insider); ``fake`` are the insider's own phi+ pairs whose
    Y halves were sent on in place of the true ones.
    """

    retained: np.ndarray = field(repr=False)
    fake: np.ndarray = field(repr=False)
    inference: Optional[np.ndarray] = None
    inferred_ops: Optional[np.ndarray] = None

    def on_return(self, rng: np.random.Generator) -> np.ndarray:
        """Bell-measure the encrypted fakes and copy the inferred ops onto the true photons."""
        codes, collapsed = bell_measure_many(self.fake, rng)
        self.fake[:] = collapsed
        self.inference = codes
        self.inferred_ops = _INFERRED_OP[codes]
        self.retained[:] = apply_ops(self.inferred_ops, Slot.Y, self.retained)
        return self.inferred_ops


def insider_substitute(true_states: np.ndarray, rng: np.random.Generator) -> InsiderState:
    """Intercept the true Y photons and return the fake pairs to forward instead.

    ``true_states`` must be the session's live register; it is kept, not copied.
    """
    del rng  # phi+ preparation is deterministic
    fake = np.repeat(BELL_MATRIX[:1], true_states.shape[0], axis=0)
    return InsiderState(retained=true_states, fake=fake)


def insider_checking_behavior(insider: InsiderState, positions: np.ndarray, basis_codes: np.ndarray,
                              rng: np.random.Generator) -> np.ndarray:
    """Measure the retained photons at ``positions`` in the requested bases and report the bits."""
    bits, collapsed = measure_single_many(insider.retained[positions], Slot.Y, basis_codes, rng)
    insider.retained[positions] = collapsed
    return bits
