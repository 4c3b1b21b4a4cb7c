"""Brute-force reference computations, written against raw numpy only.

Nothing here imports the package under test: states, operators and Born
probabilities are rebuilt from scratch so the checks stay independent.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

r = 1 / np.sqrt(2)
KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KETH = (KET0 + KET1) * r
KETV = (KET0 - KET1) * r
BASIS_KETS = {"diagonal": (KET0, KET1), "rectilinear": (KETH, KETV)}


def kron(a, b):
    return np.kron(a, b)


BELL = {
    "phi+": (kron(KET0, KET0) + kron(KET1, KET1)) * r,
    "phi-": (kron(KET0, KET0) - kron(KET1, KET1)) * r,
    "psi+": (kron(KET1, KET0) + kron(KET0, KET1)) * r,
    "psi-": (kron(KET1, KET0) - kron(KET0, KET1)) * r,
}
# brute-force amplitude addition of the defining Bell combinations
ROTATION = {
    "xi": (BELL["phi-"] + BELL["psi+"]) * r,
    "eta": (BELL["phi+"] - BELL["psi-"]) * r,
    "chi": (BELL["psi-"] + BELL["phi+"]) * r,
    "zeta": (BELL["psi+"] - BELL["phi-"]) * r,
}
CANONICAL = {**BELL, **ROTATION}

OPS = {
    "U1": np.outer(KET0, KET0) + np.outer(KET1, KET1),
    "U2": np.outer(KET0, KET0) - np.outer(KET1, KET1),
    "U3": np.outer(KET0, KET1) + np.outer(KET1, KET0),
    "U4": np.outer(KET0, KET1) - np.outer(KET1, KET0),
    "H": (np.outer(KET0, KET0) - np.outer(KET1, KET1) + np.outer(KET0, KET1) + np.outer(KET1, KET0)) * r,
}
PAULI = ("U1", "U2", "U3", "U4")
I2 = np.eye(2)


def on_y(op: str, state):
    return kron(I2, OPS[op]) @ state


def on_x(op: str, state):
    return kron(OPS[op], I2) @ state


def signed_label(state, tol=1e-9):
    for name, vec in CANONICAL.items():
        for sign in (1, -1):
            if np.allclose(state, sign * vec, atol=tol):
                return name, sign
    return None


def joint_probs(state, x_basis: str, y_basis: str) -> np.ndarray:
    """P[x outcome, y outcome] for measuring both photons."""
    out = np.zeros((2, 2))
    for i, kx in enumerate(BASIS_KETS[x_basis]):
        for j, ky in enumerate(BASIS_KETS[y_basis]):
            out[i, j] = abs(np.vdot(kron(kx, ky), state)) ** 2
    return out


def correlation(state, x_basis, y_basis):
    """Deterministic parity of (x, y) outcomes, or None if not deterministic."""
    p = joint_probs(state, x_basis, y_basis)
    same, diff = p[0, 0] + p[1, 1], p[0, 1] + p[1, 0]
    if np.isclose(same, 1):
        return 0
    if np.isclose(diff, 1):
        return 1
    return None


def in_bell_set(state) -> bool:
    return max(abs(np.vdot(b, state)) ** 2 for b in BELL.values()) > 1 - 1e-9


def other(basis):
    return "rectilinear" if basis == "diagonal" else "diagonal"


def project(state, slot: str, ket):
    """Unnormalized post-measurement state and its probability."""
    proj = np.outer(ket, ket.conj())
    full = kron(proj, I2) if slot == "X" else kron(I2, proj)
    out = full @ state
    p = float(np.vdot(out, out).real)
    return out, p


def check_error_probability(actual_state, believed_state, y_basis):
    """Error probability of one checking measurement.

    The measuring sharer uses ``y_basis`` on Y; the checker picks the X basis
    and expected parity from ``believed_state``.
    """
    x_basis = y_basis if in_bell_set(believed_state) else other(y_basis)
    parity = correlation(believed_state, x_basis, y_basis)
    assert parity is not None
    p = joint_probs(actual_state, x_basis, y_basis)
    return sum(p[i, j] for i in range(2) for j in range(2) if (i ^ j) != parity)


def intercept_resend_error(op_set=("U1", "U2", "U3", "U4", "H"), eve_bases=("diagonal", "rectilinear"),
                           check_bases=("diagonal", "rectilinear"), eve_after_ops=False):
    """Average checking error with an eavesdropper measuring Y, three parties."""
    total = 0.0
    cases = list(itertools.product(BELL, op_set, eve_bases, check_bases))
    for b, op, eb, cb in cases:
        believed = on_y(op, BELL[b])
        start = believed if eve_after_ops else BELL[b]
        for ket in BASIS_KETS[eb]:
            post, p = project(start, "Y", ket)
            if p < 1e-15:
                continue
            post = post / np.sqrt(p)
            actual = post if eve_after_ops else on_y(op, post)
            total += p * check_error_probability(actual, believed, cb)
    return total / len(cases)


def infer_op_from_fake(label: str) -> str:
    """Which U1..U4 sends phi+ to ``label``."""
    for op in PAULI:
        lab = signed_label(on_y(op, BELL["phi+"]))
        if lab[0] == label:
            return op
    raise ValueError(label)


def insider_error(op_set=("U1", "U2", "U3", "U4", "H")):
    """Average checking error of the fake-sequence insider, three parties."""
    total = 0.0
    cases = list(itertools.product(BELL, op_set, ("diagonal", "rectilinear")))
    for b, op, cb in cases:
        believed = on_y(op, BELL[b])
        fake = on_y(op, BELL["phi+"])
        for f, vec in BELL.items():
            pf = abs(np.vdot(vec, fake)) ** 2
            if pf < 1e-15:
                continue
            actual = on_y(infer_op_from_fake(f), BELL[b])
            total += pf * check_error_probability(actual, believed, cb)
    return total / len(cases)


def single_sharer_guess_success(op_set=("U1", "U2", "U3", "U4", "H")) -> Fraction:
    """Best per-pair success of guessing the bits from a direct Bell measurement
    when one sharer's op is unknown (uniform message and op)."""
    weight = {}
    n = len(BELL) * len(op_set)
    for b, op in itertools.product(BELL, op_set):
        s = on_y(op, BELL[b])
        for m, vec in BELL.items():
            p = abs(np.vdot(vec, s)) ** 2
            if p > 1e-12:
                frac = Fraction(round(p * 4), 4) / n
                weight[(m, b)] = weight.get((m, b), Fraction(0)) + frac
    return sum(max(weight.get((m, b), Fraction(0)) for b in BELL) for m in BELL)
