"""Two-bit <-> Bell-state dense coding and decoding of encrypted pairs."""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .core import BELL_LABELS, PAULI_OPS, Bell, CanonicalState, Op, compose, table_transform

BitPair = tuple[int, int]
BitsLike = Union[str, Sequence[int], np.ndarray]

_BITS_TO_BELL: dict[BitPair, Bell] = {
    (0, 0): Bell.PHI_PLUS,
    (0, 1): Bell.PHI_MINUS,
    (1, 0): Bell.PSI_PLUS,
    (1, 1): Bell.PSI_MINUS,
}
_BELL_TO_BITS: dict[Bell, BitPair] = {v: k for k, v in _BITS_TO_BELL.items()}

# Chosen so that op applied to phi+ gives bits_to_bell(bits) up to sign.
_ENCODING_OPS: dict[BitPair, Op] = {(0, 0): Op.U1, (0, 1): Op.U2, (1, 0): Op.U3, (1, 1): Op.U4}
_OP_TO_BITS: dict[Op, BitPair] = {v: k for k, v in _ENCODING_OPS.items()}

# BELL_BITS[code] -> the two bits carried by BELL_LABELS[code]
BELL_BITS = np.array([_BELL_TO_BITS[b] for b in BELL_LABELS], dtype=np.uint8)


def as_bits(bits: BitsLike) -> np.ndarray:
    """Normalize a ``"0101"`` string or 0/1 sequence into a uint8 array."""
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise ValueError(f"bit string may only contain 0 and 1: {bits!r}")
        return np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")
    arr = np.asarray(bits, dtype=np.int64).ravel()
    if arr.size and (arr.min() < 0 or arr.max() > 1):
        raise ValueError("bits must be 0 or 1")
    return arr.astype(np.uint8)


def bits_to_str(bits: Iterable[int]) -> str:
    return "".join(str(int(b)) for b in bits)


def _pair(b) -> BitPair:
    if isinstance(b, str):
        b = tuple(int(c) for c in b)
    hi, lo = (int(x) for x in b)
    if hi not in (0, 1) or lo not in (0, 1):
        raise ValueError(f"not a bit pair: {b!r}")
    return hi, lo


def bits_to_bell(b) -> Bell:
    return _BITS_TO_BELL[_pair(b)]


def bell_to_bits(label: Bell) -> BitPair:
    return _BELL_TO_BITS[Bell(label)]


def encode_message(bits: BitsLike) -> list[Bell]:
    arr = as_bits(bits)
    if arr.size % 2:
        raise ValueError(f"message must have an even number of bits, got {arr.size}")
    return [bits_to_bell(p) for p in arr.reshape(-1, 2)]


def decode_labels(labels: Iterable[Bell]) -> np.ndarray:
    return np.array([bit for lab in labels for bit in bell_to_bits(lab)], dtype=np.uint8)


def alice_encoding_op(b) -> Op:
    return _ENCODING_OPS[_pair(b)]


def encoding_op_to_bits(op: Op) -> BitPair:
    return _OP_TO_BITS[Op(op)]


@lru_cache(maxsize=None)
def _decode(measured: Bell, history: tuple[Op, ...], hadamard_undone: bool) -> BitPair:
    n_h = sum(op is Op.H for op in history)
    if (n_h % 2 == 1) != hadamard_undone:
        raise ValueError(
            f"history {[str(o) for o in history]} with hadamard_undone={hadamard_undone} "
            "cannot end in the Bell set"
        )
    for initial in BELL_LABELS:
        out = compose(CanonicalState(initial), history)
        if hadamard_undone:
            out = table_transform(Op.H, out)
        if out.label is measured:
            return bell_to_bits(initial)
    raise AssertionError("transform table is not a bijection")  # pragma: no cover


def decode_outcome(measured: Bell, history: Sequence[Op], hadamard_undone: bool) -> BitPair:
    """Infer the bits sent on a pair from its Bell outcome and encryption history.

    ``hadamard_undone`` says whether an extra H was applied to the Y photon
    right before the Bell measurement; it must be set exactly when the history
    holds an odd number of H operations.
    """
    return _decode(Bell(measured), tuple(Op(o) for o in history), bool(hadamard_undone))


@lru_cache(maxsize=None)
def decode_encoding(measured: Bell, pre_encoding: CanonicalState, hadamard_applied: bool) -> BitPair:
    """Recover which encoding op was applied to a pair whose prior state is known.

    The pair was in ``pre_encoding`` before the sender's U1..U4 encoding; if
    ``hadamard_applied`` an H hit the Y photon afterwards and before measurement.
    """
    if pre_encoding.in_bell_set == hadamard_applied:
        raise ValueError("H must be applied exactly when the pre-encoding state is a rotation state")
    for op in PAULI_OPS:
        out = table_transform(op, pre_encoding)
        if hadamard_applied:
            out = table_transform(Op.H, out)
        if out.label is measured:
            return encoding_op_to_bits(op)
    raise AssertionError("transform table is not a bijection")  # pragma: no cover
