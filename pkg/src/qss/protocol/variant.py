"""Reverse-direction variant: the last sharer prepares phi+ pairs, the sender encodes.

Because the sender encodes after all sharer encryptions, extraction only ever
needs a conditional H on the Y photon, never an inverse of a sharer op.
"""
from __future__ import annotations

from typing import Optional, Union

import numpy as np

from ..adversary import RETURN_LINK, AdversaryStrategy, tap_intercept_resend
from ..codec import BitsLike, alice_encoding_op, decode_encoding
from ..core import (
    ALL_OPS,
    BASES,
    BELL_LABELS,
    CANONICAL_LABELS,
    LABEL_INDEX,
    OP_INDEX,
    Bell,
    CanonicalState,
    Op,
    Slot,
    apply_ops,
    bell_measure_many,
    compose_many,
    measure_single_many,
)
from ..core.states import BELL_MATRIX, OP_MATRICES, apply_matrices
from ..errors import RoundAborted
from .records import Denial, PhotonPairRecord, ProtocolConfig, Role, SessionResult, Status
from .session import SENDER, BaseSession, count_errors, op_set

_PHI_PLUS = LABEL_INDEX[Bell.PHI_PLUS]


class VariantSession(BaseSession):
    variant = True

    def __init__(self, config: ProtocolConfig, message_bits: BitsLike,
                 adversary: Optional[AdversaryStrategy] = None,
                 rng: Optional[np.random.Generator] = None):
        super().__init__(config, message_bits, adversary, rng)
        # chain order of encryption: the sharer just before the preparer first, sharer1 last
        self.chain = list(reversed(self.encrypting))
        self.encodings: dict[int, tuple[int, int]] = {}
        self._prepare()

    @property
    def preparer(self):
        return self.last

    def _prepare(self) -> None:
        cfg = self.config
        m = cfg.total_pairs
        self.amps = np.repeat(BELL_MATRIX[:1], m, axis=0)
        # the sender fixes which slots she will check and which carry auth bits
        order = self.rng.permutation(m)
        roles = np.empty(m, dtype=object)
        roles[:] = Role.MESSAGE
        roles[order[:cfg.k]] = Role.CHECK_K
        roles[order[cfg.k:cfg.k + cfg.j]] = Role.CHECK_J
        self.records = [PhotonPairRecord(pos, roles[pos], pos, Bell.PHI_PLUS, self.amps[pos]) for pos in range(m)]
        self.transcript.announce(self.preparer.name, "2", "prepare", count=m, state=Bell.PHI_PLUS.value)

    def transmit_y(self) -> None:
        names = [self.preparer.name] + [s.name for s in self.chain] + [SENDER]
        receivers = self.chain + [None]
        for link, (sender, receiver) in enumerate(zip(names, receivers)):
            self.transcript.announce(sender, "3" if link == 0 else "4", "transmit", sequence="Y",
                                     to=names[link + 1], count=len(self.amps))
            if self.adversary.taps(link):
                self.amps[:] = tap_intercept_resend(self.amps, self.adversary.basis, self.rng)
            if receiver is not None:
                receiver.encrypt(self.amps, self.rng, op_set(self.config))

    def _pre_encoding(self, positions: np.ndarray, layers: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
        return compose_many(np.full(len(positions), _PHI_PLUS), layers)

    def checking_round(self, positions: np.ndarray) -> float:
        positions = np.asarray(positions, dtype=np.int64)
        tr = self.transcript
        tr.announce(SENDER, "5", "check_positions", positions=[int(p) for p in positions])

        x_bases = self._basis_codes(len(positions))
        x_bits, self.amps[positions] = measure_single_many(self.amps[positions], Slot.X, x_bases, self.rng)

        declared = {s.name: s.declare_ops(positions) for s in self.chain}
        everyone = [self.preparer.name] + [s.name for s in self.chain]
        for i, pos in enumerate(positions):
            order = [everyone[t] for t in self.rng.permutation(len(everyone))]
            tr.announce(SENDER, "5", "query_order", position=int(pos), order=order)
            for name in order:
                if name == self.preparer.name:
                    tr.announce(name, "5", "outcome", position=int(pos), basis=BASES[x_bases[i]].value,
                                outcome=int(x_bits[i]))
                    continue
                ops = declared[name]
                if ops is None:
                    tr.announce(name, "5", "op_withheld", position=int(pos))
                    raise RoundAborted(f"{name} did not declare its operation for position {pos}")
                tr.announce(name, "5", "declare_op", position=int(pos), op=ALL_OPS[ops[i]].value)

        final, _ = self._pre_encoding(positions, [declared[s.name] for s in self.chain])
        y_bases = np.where(final < 4, x_bases, 1 - x_bases)
        y_bits, self.amps[positions] = measure_single_many(self.amps[positions], Slot.Y, y_bases, self.rng)
        self.check_errors = count_errors(final, x_bases, y_bases, x_bits, y_bits)
        rate = float(self.check_errors.mean())
        tr.announce(SENDER, "5", "transit_error_rate", rate=rate, checked=len(positions))
        return rate

    def encode_and_return(self) -> None:
        """Encode message and auth bits on the remaining Y photons and send them to the preparer."""
        rows = self.remaining
        message = iter(self.message_bits.reshape(-1, 2))
        ops = np.empty(len(rows), dtype=np.int64)
        for i, pos in enumerate(rows):
            if self.records[pos].role is Role.CHECK_J:
                bits = tuple(int(b) for b in self.rng.integers(0, 2, size=2))
            else:
                bits = tuple(int(b) for b in next(message))
            self.encodings[int(pos)] = bits
            ops[i] = OP_INDEX[alice_encoding_op(bits)]
        self.amps[rows] = apply_ops(ops, Slot.Y, self.amps[rows])
        self.transcript.announce(SENDER, "5", "transmit", sequence="Y_encoded", to=self.preparer.name,
                                 count=len(rows))
        if self.adversary.taps(RETURN_LINK):
            self.amps[rows] = tap_intercept_resend(self.amps[rows], self.adversary.basis, self.rng)

    def extract_message(self, collaboration) -> Union[np.ndarray, Denial]:
        missing = self._missing(collaboration)
        if missing:
            return Denial(missing)
        rows = self.remaining
        pre_codes, pre_signs = self._pre_encoding(rows, [s.ops[rows] for s in self.chain])
        rotated = pre_codes >= 4
        h_rows = rows[rotated]
        self.amps[h_rows] = apply_matrices(OP_MATRICES[Op.H], Slot.Y, self.amps[h_rows])
        self.extraction_log.extend((int(p), "H") for p in h_rows)
        codes, self.amps[rows] = bell_measure_many(self.amps[rows], self.rng)
        bits = [
            decode_encoding(BELL_LABELS[c], CanonicalState(CANONICAL_LABELS[pc], int(ps)), bool(rot))
            for c, pc, ps, rot in zip(codes, pre_codes, pre_signs, rotated)
        ]
        return np.array(bits, dtype=np.uint8).ravel()

    def _announced_check_bits(self, j_positions):
        return [self.encodings[int(p)] for p in j_positions]

    def run(self) -> SessionResult:
        self.transmit_y()
        k_positions = self.positions(Role.CHECK_K)
        try:
            rate = self.checking_round(k_positions)
        except RoundAborted as exc:
            return self._abort("5", str(exc), 1.0)
        if rate > self.config.error_threshold:
            return self._abort("5", "transit error rate above threshold", rate)
        self.remaining = np.setdiff1d(np.arange(len(self.records)), k_positions)
        self.encode_and_return()
        raw = self.extract_message(s.name for s in self.sharers)
        auth, message = self.authenticate_message(raw, "7")
        if auth > self.config.error_threshold:
            self.transcript.announce(SENDER, "7", "abort", reason="authentication error rate above threshold",
                                     rate=auth)
            return self._result(Status.ABORTED_AUTHENTICATION, rate, auth)
        return self._result(Status.COMPLETED, rate, auth, message)


def run_variant_session(config: ProtocolConfig, message_bits: BitsLike,
                        adversary: Optional[AdversaryStrategy] = None,
                        rng: Optional[np.random.Generator] = None) -> SessionResult:
    """Drive the reverse-direction variant end to end."""
    return VariantSession(config, message_bits, adversary, rng).run()
