import numpy as np
import pytest

from weakhopf.algebra import InvalidAlgebraError
from weakhopf.sectors import (
    FusionRing, cyclic_ring, depth_two_test, fibonacci_ring,
    frobenius_identity_check, ising_ring, quantum_dimensions, report,
    sigma_oplus, sigma_reg, symmetry_dimension, trivial_ring, verify_fusion,
)

PHI = (1 + np.sqrt(5)) / 2

ALL_RINGS = {
    "fibonacci": fibonacci_ring(),
    "ising": ising_ring(),
    "z2": cyclic_ring(2),
    "z3": cyclic_ring(3),
    "trivial": trivial_ring(),
}


@pytest.mark.parametrize("name", sorted(ALL_RINGS))
def test_fusion_axioms(name):
    checks = verify_fusion(ALL_RINGS[name])
    assert all(c.passed for c in checks), [str(c) for c in checks]


def test_flipped_entry_fails():
    bad = cyclic_ring(2).N.copy()
    bad[1, 1, 0] = 0
    bad[1, 1, 1] = 1
    checks = verify_fusion(FusionRing(("1", "g"), bad, (0, 1)))
    failed = [c for c in checks if not c.passed]
    assert failed
    assert "witness" in failed[0].name


def test_associativity_witness():
    # an asymmetric corruption of the Ising table breaks associativity
    bad = ising_ring().N.copy()
    bad[1, 1, 2] = 2
    checks = verify_fusion(FusionRing(("1", "s", "p"), bad, (0, 1, 2)))
    assert any("associativity" in c.name and not c.passed for c in checks)


def test_quantum_dimensions():
    dims, res = quantum_dimensions(fibonacci_ring())
    assert abs(dims[1] - PHI) < 1e-9
    assert res < 1e-9
    dims, res = quantum_dimensions(ising_ring())
    assert abs(dims[1] - np.sqrt(2)) < 1e-9
    assert dims[2] == 1.0
    for name in ("z2", "z3", "trivial"):
        dims, _ = quantum_dimensions(ALL_RINGS[name])
        assert np.array_equal(dims, np.ones(len(dims)))


def test_fibonacci_sigma_oplus():
    data = sigma_oplus(fibonacci_ring())
    assert data.n.tolist() == [2, 3]
    assert data.symmetry_dim == 13
    assert abs(data.dims[1] - 1.6180340) < 1e-6
    assert abs(data.extension_index - PHI ** 4) < 1e-6


def test_ising_sigma_oplus():
    data = sigma_oplus(ising_ring())
    assert data.n.tolist() == [3, 4, 3]
    assert data.symmetry_dim == 34
    assert abs(data.extension_index - (2 + np.sqrt(2)) ** 2) < 1e-6


def test_z2_regular_equals_oplus():
    reg = sigma_reg(cyclic_ring(2))
    op = sigma_oplus(cyclic_ring(2))
    assert np.array_equal(reg.sigma, op.sigma)
    assert tuple(reg.z_weights) == (1.0, 1.0)
    assert op.symmetry_dim == 8


def test_sigma_reg_needs_integer_dims():
    with pytest.raises(InvalidAlgebraError):
        sigma_reg(fibonacci_ring())
    with pytest.raises(InvalidAlgebraError):
        sigma_reg(ising_ring())


def test_brute_force_multiplicity_oracle():
    # N_s from the bilinear contraction must equal the multiplicity read off
    # an explicit product of fusion matrices applied to the unit
    for fr in ALL_RINGS.values():
        m = np.ones(fr.size, dtype=np.int64)
        M_sigma = sum(int(m[a]) * fr.fusion_matrix(a) for a in range(fr.size))
        brute = M_sigma @ (M_sigma @ np.eye(fr.size, dtype=np.int64)[0])
        data = sigma_oplus(fr)
        assert np.array_equal(np.asarray(data.n), brute)
        assert symmetry_dimension(fr, m) == int(brute @ brute)


def test_regular_case_identity():
    # for integer-dimension rings, N_s(sigma_reg^2) = d_s * sum_a d_a^2
    for name in ("z2", "z3", "trivial"):
        fr = ALL_RINGS[name]
        reg = sigma_reg(fr)
        assert np.max(np.abs(reg.n - reg.dims * reg.global_dim)) < 1e-9


@pytest.mark.parametrize("name", sorted(ALL_RINGS))
def test_depth_two_full_support(name):
    fr = ALL_RINGS[name]
    passed, witnesses = depth_two_test(fr, sigma_oplus(fr))
    assert passed and not witnesses


def test_depth_two_single_sector_choices():
    passed, witnesses = depth_two_test(fibonacci_ring(), np.array([0, 1]))
    assert not passed
    assert witnesses == ["1"]
    passed, witnesses = depth_two_test(ising_ring(), np.array([0, 1, 0]))
    assert passed and not witnesses


def test_frobenius_identity():
    for fr in ALL_RINGS.values():
        assert frobenius_identity_check(fr) < 1e-9
    assert frobenius_identity_check(cyclic_ring(3)) == 0.0


def test_trivial_ring_report():
    fr = trivial_ring()
    out = report(fr, sigma_oplus(fr))
    assert out["dim_q"] == 1
    assert out["dims"] == [1.0]
    assert out["extension_index"] == 1.0
    assert out["depth_two"]


def test_report_keys_stable():
    out = report(fibonacci_ring(), sigma_oplus(fibonacci_ring()))
    for key in ("labels", "dims", "n_table", "dim_q", "extension_index",
                "z_weights", "depth_two", "frobenius_residual"):
        assert key in out
    assert out["dim_q"] == 13
    assert abs(out["extension_index"] - 6.8541) < 1e-3
    out2 = report(cyclic_ring(2), sigma_oplus(cyclic_ring(2)))
    assert out2["regular_equals_oplus"] is True
