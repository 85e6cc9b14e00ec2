import numpy as np
import pytest

from weakhopf.duality import (
    algebra_level_self_duality, double_dual_check, dualize,
    verify_adjoint_action, verify_dual,
)
from weakhopf.hopf import (
    Groupoid, classify, cyclic_group_table, full_verify, function_algebra,
    group_algebra, groupoid_algebra, symmetric_group_table,
)


EXAMPLES = {
    "z2": group_algebra(cyclic_group_table(2)),
    "z3": group_algebra(cyclic_group_table(3)),
    "s3": group_algebra(symmetric_group_table(3)),
    "f_z4": function_algebra(cyclic_group_table(4)),
    "pair2": groupoid_algebra(Groupoid.pair(2)),
    "pair3": groupoid_algebra(Groupoid.pair(3)),
}


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_dual_dimension_and_axioms(name):
    W = EXAMPLES[name]
    pair = dualize(W)
    assert pair.dual.algebra.dim == W.algebra.dim
    bad = [c for c in full_verify(pair.dual) if not c.passed]
    assert not bad, [str(c) for c in bad]
    assert verify_dual(pair)


def test_dual_of_z2_group_is_functions():
    pair = dualize(EXAMPLES["z2"])
    assert sorted(pair.dual.algebra.block_sizes) == [1, 1]
    assert classify(pair.dual).verdict == "True"


def test_dual_of_s3_group_blocks():
    pair = dualize(EXAMPLES["s3"])
    # functions on six points
    assert sorted(pair.dual.algebra.block_sizes) == [1] * 6


def test_dual_of_pair_groupoid_is_functions_on_morphisms():
    # Mat_2 as a groupoid algebra dualizes to the commutative algebra of
    # functions on the four morphisms, not to Mat_2 again
    pair = dualize(EXAMPLES["pair2"])
    assert sorted(pair.dual.algebra.block_sizes) == [1, 1, 1, 1]
    same, blocks_p, blocks_d = algebra_level_self_duality(EXAMPLES["pair2"])
    assert not same


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_double_dual(name):
    ok, residual, J = double_dual_check(EXAMPLES[name])
    assert ok
    assert residual < 1e-8


def test_pairing_nondegenerate():
    for W in EXAMPLES.values():
        pair = dualize(W)
        assert pair.condition_number < 1e6


@pytest.mark.parametrize("name", ["z2", "s3", "pair2"])
def test_adjoint_action(name):
    pair = dualize(EXAMPLES[name])
    ok, checks = verify_adjoint_action(pair)
    assert ok, [str(c) for c in checks if not c.passed]


def test_adjoint_rule_on_basis_triples():
    # <q |> qhat, p> = <qhat, p q> entrywise on all basis triples
    pair = dualize(EXAMPLES["z2"])
    from weakhopf.duality import adjoint_action_matrices
    P = pair.pairing
    Ad = adjoint_action_matrices(pair)
    A = pair.primal.algebra
    worst = 0.0
    for i in range(A.dim):
        R = A.right_mult_matrix(A.basis_element(i))
        worst = max(worst, float(np.max(np.abs(Ad[i].T @ P - P @ R))))
    assert worst < 1e-9
