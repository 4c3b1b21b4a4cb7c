import itertools

import numpy as np
import pytest

import oracles
from qss.core import (
    ALL_OPS,
    CANONICAL_LABELS,
    Bell,
    CanonicalState,
    Op,
    Rotation,
    Slot,
    apply_local,
    classify,
    compose,
    compose_many,
    expected_parity,
    partner_basis,
    table_transform,
)
from qss.core.states import LABEL_INDEX, OP_INDEX, Basis

CASES = list(itertools.product(ALL_OPS, CANONICAL_LABELS))


def test_table_examples():
    assert table_transform(Op.U2, CanonicalState(Rotation.XI)) == CanonicalState(Rotation.CHI)
    assert table_transform(Op.U4, CanonicalState(Rotation.XI)) == CanonicalState(Rotation.ZETA, -1)
    assert table_transform(Op.U1, CanonicalState(Rotation.ETA)) == CanonicalState(Rotation.ETA)


def test_input_sign_composes():
    assert table_transform(Op.U3, CanonicalState(Bell.PHI_MINUS, -1)) == CanonicalState(Bell.PSI_MINUS, 1)


@pytest.mark.parametrize("op, label", CASES, ids=[f"{o.value}-{lab.value}" for o, lab in CASES])
@pytest.mark.parametrize("sign", [1, -1])
def test_table_matches_amplitude_engine(op, label, sign):
    c = CanonicalState(label, sign)
    assert classify(apply_local(op, Slot.Y, c.to_state())) == table_transform(op, c)


@pytest.mark.parametrize("op, label", CASES, ids=[f"{o.value}-{lab.value}" for o, lab in CASES])
def test_table_matches_oracle(op, label):
    out = oracles.signed_label(oracles.on_y(op.value, oracles.CANONICAL[label.value]))
    expect = table_transform(op, CanonicalState(label))
    assert out == (expect.label.value, expect.sign)


def test_compose_many_matches_scalar():
    rng = np.random.default_rng(11)
    labels = rng.integers(0, 8, 200)
    layers = [rng.integers(0, 5, 200) for _ in range(4)]
    codes, signs = compose_many(labels, layers)
    for i in range(200):
        ref = compose(CanonicalState(CANONICAL_LABELS[labels[i]]), [ALL_OPS[layer[i]] for layer in layers])
        assert (codes[i], signs[i]) == (LABEL_INDEX[ref.label], ref.sign)


def test_ops_never_leave_the_two_sets():
    for op, label in CASES:
        assert table_transform(op, CanonicalState(label)).label in CANONICAL_LABELS


@pytest.mark.parametrize("label", CANONICAL_LABELS)
@pytest.mark.parametrize("y_basis", [Basis.DIAGONAL, Basis.RECTILINEAR])
def test_correlation_table_matches_oracle(label, y_basis):
    x_basis = partner_basis(label, y_basis)
    expect = oracles.correlation(oracles.CANONICAL[label.value], x_basis.value, y_basis.value)
    assert expected_parity(label, x_basis, y_basis) == expect


@pytest.mark.parametrize("label", CANONICAL_LABELS)
@pytest.mark.parametrize("y_basis", [Basis.DIAGONAL, Basis.RECTILINEAR])
def test_wrong_partner_basis_is_uncorrelated(label, y_basis):
    x_basis = partner_basis(label, y_basis).other()
    assert expected_parity(label, x_basis, y_basis) is None
    assert oracles.correlation(oracles.CANONICAL[label.value], x_basis.value, y_basis.value) is None


def test_three_party_basis_rule_is_h_rule():
    # with one sharer, the final state leaves the Bell set exactly when the op is H
    for op in ALL_OPS:
        for b in CANONICAL_LABELS[:4]:
            out = table_transform(op, CanonicalState(b))
            assert out.in_bell_set == (op is not Op.H)
    assert OP_INDEX[Op.H] == 4
