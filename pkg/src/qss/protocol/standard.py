"""Sender-prepared protocol: Y photons travel the sharer chain, X photons follow."""
from __future__ import annotations

from typing import Optional, Union

import numpy as np

from ..adversary import (
    RETURN_LINK,
    AdversaryKind,
    AdversaryStrategy,
    insider_checking_behavior,
    insider_substitute,
    tap_intercept_resend,
)
from ..codec import BELL_BITS, BitsLike, bell_to_bits, decode_outcome
from ..core import (
    ALL_OPS,
    BASES,
    BELL_LABELS,
    LABEL_INDEX,
    OP_INDEX,
    Op,
    Slot,
    apply_ops,
    bell_measure_many,
    compose_many,
    measure_single_many,
)
from ..core.states import OP_MATRICES, apply_matrices
from ..errors import RoundAborted
from .records import Denial, ProtocolConfig, Role, SessionResult, Status
from .session import SENDER, BaseSession, count_errors, op_set, prepare_sequence

_H = OP_INDEX[Op.H]


class StandardSession(BaseSession):
    """One run of the sender-prepared protocol for any number of sharers.

    The last sharer in the chain receives the Y photons without encrypting
    them; every earlier sharer applies one random op per photon.
    """

    def __init__(self, config: ProtocolConfig, message_bits: BitsLike,
                 adversary: Optional[AdversaryStrategy] = None,
                 rng: Optional[np.random.Generator] = None):
        super().__init__(config, message_bits, adversary, rng)
        self.records, self.amps = prepare_sequence(self.message_bits, config.k, config.j, self.rng)
        self.initial_codes = np.array([LABEL_INDEX[r.initial] for r in self.records], dtype=np.int64)
        self.insider = None

    @property
    def insider_active(self) -> bool:
        return self.adversary.kind is AdversaryKind.INSIDER

    def transmit_y(self) -> None:
        target = self.amps
        if self.insider_active:
            self.insider = insider_substitute(self.amps, self.rng)
            target = self.insider.fake
        senders = [SENDER] + [s.name for s in self.encrypting]
        for link, (sender, receiver) in enumerate(zip(senders, self.sharers)):
            self.transcript.announce(sender, "c" if link == 0 else "d", "transmit",
                                     sequence="Y", to=receiver.name, count=len(target))
            if self.adversary.taps(link):
                target[:] = tap_intercept_resend(target, self.adversary.basis, self.rng)
            if receiver is not self.last:
                receiver.encrypt(target, self.rng, op_set(self.config))
        if self.insider is not None:
            self.insider.on_return(self.rng)

    def checking_round(self, positions: np.ndarray) -> float:
        """Run the transit check on ``positions`` and return the error rate.

        Raises :class:`RoundAborted` if a sharer withholds its op declarations.
        """
        positions = np.asarray(positions, dtype=np.int64)
        tr = self.transcript
        tr.announce(SENDER, "e", "check_positions", positions=[int(p) for p in positions])

        y_bases = self._basis_codes(len(positions))
        if self.insider is not None:
            y_bits = insider_checking_behavior(self.insider, positions, y_bases, self.rng)
        else:
            y_bits, self.amps[positions] = measure_single_many(self.amps[positions], Slot.Y, y_bases, self.rng)

        declared: dict[str, Optional[np.ndarray]] = {s.name: s.declare_ops(positions) for s in self.encrypting}
        for i, pos in enumerate(positions):
            tr.announce(SENDER, "e", "basis_request", position=int(pos), to=self.last.name,
                        basis=BASES[y_bases[i]].value)
            tr.announce(self.last.name, "e", "outcome", position=int(pos),
                        basis=BASES[y_bases[i]].value, outcome=int(y_bits[i]))
            for name, ops in declared.items():
                if ops is None:
                    tr.announce(name, "e", "op_withheld", position=int(pos))
                    raise RoundAborted(f"{name} did not declare its operation for position {pos}")
                tr.announce(name, "e", "declare_op", position=int(pos), op=ALL_OPS[ops[i]].value)

        final, _ = compose_many(self.initial_codes[positions], list(declared.values()))
        # Bell-set final states are checked in matching bases, rotation-set ones in crossed bases
        x_bases = np.where(final < 4, y_bases, 1 - y_bases)
        x_bits, self.amps[positions] = measure_single_many(self.amps[positions], Slot.X, x_bases, self.rng)
        self.check_errors = count_errors(final, x_bases, y_bases, x_bits, y_bits)
        rate = float(self.check_errors.mean())
        tr.announce(SENDER, "e", "transit_error_rate", rate=rate, checked=len(positions))
        return rate

    def send_x(self) -> None:
        self.transcript.announce(SENDER, "e", "transmit", sequence="X", to=self.last.name,
                                 count=len(self.remaining))
        if self.adversary.taps(RETURN_LINK):
            rows = self.remaining
            self.amps[rows] = tap_intercept_resend(self.amps[rows], self.adversary.basis, self.rng, Slot.X)

    def extract_message(self, collaboration) -> Union[np.ndarray, Denial]:
        """Decode the remaining pairs if every sharer takes part, else deny.

        Three parties: undo H only where it was used, then decode with the op
        history. More parties: apply the adjoint of every sharer's op, last
        applied first, and read the Bell outcome directly.
        """
        missing = self._missing(collaboration)
        if missing:
            return Denial(missing)
        rows = self.remaining
        layers = [s.ops[rows] for s in self.encrypting]
        if len(layers) == 1:
            ops = layers[0]
            h_rows = rows[ops == _H]
            self.amps[h_rows] = apply_matrices(OP_MATRICES[Op.H], Slot.Y, self.amps[h_rows])
            self.extraction_log.extend((int(p), "H") for p in h_rows)
            codes, self.amps[rows] = bell_measure_many(self.amps[rows], self.rng)
            bits = [decode_outcome(BELL_LABELS[c], (ALL_OPS[o],), o == _H) for c, o in zip(codes, ops)]
            return np.array(bits, dtype=np.uint8).ravel()
        for layer in reversed(layers):
            self.amps[rows] = apply_ops(layer, Slot.Y, self.amps[rows], adjoint=True)
            self.extraction_log.extend((int(p), f"{ALL_OPS[o].value}^+") for p, o in zip(rows, layer))
        codes, self.amps[rows] = bell_measure_many(self.amps[rows], self.rng)
        return BELL_BITS[codes].ravel()

    def _announced_check_bits(self, j_positions):
        return [bell_to_bits(self.records[p].initial) for p in j_positions]

    def run(self) -> SessionResult:
        self.transmit_y()
        k_positions = self.positions(Role.CHECK_K)
        try:
            rate = self.checking_round(k_positions)
        except RoundAborted as exc:
            return self._abort("e", str(exc), 1.0)
        if rate > self.config.error_threshold:
            return self._abort("e", "transit error rate above threshold", rate)
        self.remaining = np.setdiff1d(np.arange(len(self.records)), k_positions)
        self.send_x()
        raw = self.extract_message(s.name for s in self.sharers)
        auth, message = self.authenticate_message(raw, "g")
        if auth > self.config.error_threshold:
            self.transcript.announce(SENDER, "g", "abort", reason="authentication error rate above threshold",
                                     rate=auth)
            return self._result(Status.ABORTED_AUTHENTICATION, rate, auth)
        return self._result(Status.COMPLETED, rate, auth, message)


def run_session(config: ProtocolConfig, message_bits: BitsLike,
                adversary: Optional[AdversaryStrategy] = None,
                rng: Optional[np.random.Generator] = None) -> SessionResult:
    """Drive the sender-prepared protocol end to end."""
    return StandardSession(config, message_bits, adversary, rng).run()
