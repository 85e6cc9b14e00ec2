"""Fusion-ring calculus for sector data.

Works at the Grothendieck-ring level only: sectors are labels with
nonnegative-integer fusion multiplicities N[a][b][c], and a field content
sigma is a multiplicity vector over the labels.  Quantum dimensions,
symmetry-algebra sizes, z-weights and the depth-2 fusion criterion are all
computed from this data alone.  Braiding/statistics phases are not visible
at this level and are deliberately out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import InvalidAlgebraError
from .hopf import CheckResult


@dataclass(frozen=True)
class FusionRing:
    """Fusion ring: labels, cubic multiplicity table, conjugation.

    ``N[a, b, c]`` is the multiplicity of sector c inside a.b; label 0 is the
    unit; ``dual`` is the conjugation involution on label indices.
    """

    labels: tuple
    N: np.ndarray
    dual: tuple

    def __post_init__(self):
        object.__setattr__(self, "N", np.asarray(self.N, dtype=np.int64))

    @property
    def size(self):
        return len(self.labels)

    def fusion_matrix(self, a: int) -> np.ndarray:
        """(N_a)_{bc} = N[a][b][c]."""
        return self.N[a]

    def index_of(self, label) -> int:
        return self.labels.index(label)


def verify_fusion(fr: FusionRing, raise_on_fail: bool = False):
    """Exact integer checks of the fusion axioms.

    Unit law, associativity, Frobenius reciprocity and dual involutivity;
    failures carry witness indices in the check name.  Residuals are the
    largest integer discrepancies.
    """
    n = fr.size
    N = fr.N
    checks = []

    if N.shape != (n, n, n) or (N < 0).any():
        checks.append(CheckResult("table shape/nonnegativity", False, 1.0))
        if raise_on_fail:
            raise InvalidAlgebraError("fusion table malformed")
        return checks
    checks.append(CheckResult("table shape/nonnegativity", True, 0.0))

    du = np.asarray(fr.dual, dtype=np.int64)
    invol = int(np.max(np.abs(du[du] - np.arange(n))))
    checks.append(CheckResult("conjugation involutive", invol == 0, float(invol)))

    eye = np.eye(n, dtype=np.int64)
    unit_res = max(np.max(np.abs(N[0] - eye)),
                   np.max(np.abs(N[:, 0, :] - eye)))
    checks.append(CheckResult("unit law", unit_res == 0, float(unit_res)))

    assoc = np.einsum("abe,ecd->abcd", N, N) - np.einsum("bcf,afd->abcd", N, N)
    if assoc.any():
        a, b, c, d = np.unravel_index(int(np.argmax(np.abs(assoc))), assoc.shape)
        name = f"associativity (witness a={a} b={b} c={c} d={d})"
        checks.append(CheckResult(name, False, float(np.max(np.abs(assoc)))))
    else:
        checks.append(CheckResult("associativity", True, 0.0))

    frob1 = N - N[du][:, :, :].transpose(0, 2, 1)          # N_ab^c = N_{a-bar c}^b
    frob2 = N - N.transpose(2, 1, 0)[:, du, :]             # N_ab^c = N_{c b-bar}^a
    frob = np.maximum(np.abs(frob1), np.abs(frob2))
    if frob.any():
        a, b, c = np.unravel_index(int(np.argmax(frob)), frob.shape)
        name = f"Frobenius reciprocity (witness a={a} b={b} c={c})"
        checks.append(CheckResult(name, False, float(np.max(frob))))
    else:
        checks.append(CheckResult("Frobenius reciprocity", True, 0.0))

    if raise_on_fail and not all(c.passed for c in checks):
        bad = next(c for c in checks if not c.passed)
        raise InvalidAlgebraError(f"fusion axiom violated: {bad.name}")
    return checks


def _pf_eigenvalue(M: np.ndarray, tol: float = 1e-12, max_iter: int = 100000):
    """Perron-Frobenius eigenvalue of a nonnegative matrix by power iteration.

    Iterates on M + 1l so that peripheral spectrum (e.g. permutation
    matrices) cannot stall the iteration.
    """
    n = M.shape[0]
    shifted = M.astype(float) + np.eye(n)
    v = np.full(n, 1.0 / np.sqrt(n))
    lam = 0.0
    for _ in range(max_iter):
        w = shifted @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0, v
        w = w / nw
        new_lam = float(w @ shifted @ w)
        if abs(new_lam - lam) < tol and np.linalg.norm(w - v) < tol:
            return new_lam - 1.0, w
        lam, v = new_lam, w
    return lam - 1.0, v


def quantum_dimensions(fr: FusionRing):
    """d_s = Perron-Frobenius eigenvalue of the fusion matrix N_s.

    Returns (dims, residual) where residual is the worst violation of the
    consistency law sum_c N[a][b][c] d_c = d_a d_b.
    """
    dims = np.array([_pf_eigenvalue(fr.fusion_matrix(a))[0] for a in range(fr.size)])
    near = np.round(dims)
    dims = np.where(np.abs(dims - near) < 1e-9, near, dims)  # exact integer dims
    residual = float(np.max(np.abs(np.einsum("abc,c->ab", fr.N, dims)
                                   - np.outer(dims, dims))))
    return dims, residual


@dataclass(frozen=True)
class SectorData:
    """Numeric sector data for a field content sigma = (+) m_a . a.

    n[s] is the multiplicity N_s of s within sigma^2 (the block size of the
    symmetry algebra Q = (+) Mat_{N_s}); z_weights[s] = sqrt(m_s / d_s) uses
    the multiplicity of s within sigma itself, so the regular choice
    m_s = d_s carries trivial weights.
    """

    labels: tuple
    sigma: np.ndarray          # multiplicity vector m_a
    dims: np.ndarray           # d_s
    n: np.ndarray              # N_s = multiplicity of s in sigma^2
    z_weights: np.ndarray      # sqrt(m_s / d_s) on the support of sigma
    global_dim: float          # sum d_s^2

    @property
    def d_sigma(self) -> float:
        return float(self.sigma @ self.dims)

    @property
    def extension_index(self) -> float:
        return self.d_sigma ** 2

    @property
    def symmetry_dim(self):
        return int(np.round(self.n @ self.n))

    @property
    def support(self):
        return tuple(int(s) for s in np.nonzero(self.sigma)[0])


def _sector_data(fr: FusionRing, m: np.ndarray) -> SectorData:
    dims, residual = quantum_dimensions(fr)
    if residual > 1e-9:
        raise InvalidAlgebraError(f"dimension consistency residual {residual:.2e}")
    n = np.einsum("a,b,abs->s", m, m, fr.N)
    if np.issubdtype(np.asarray(m).dtype, np.integer):
        n = n.astype(np.int64)
    z = np.sqrt(np.where(m > 0, m / dims, np.ones(fr.size)))
    return SectorData(fr.labels, np.asarray(m), dims, n, z, float(dims @ dims))


def sigma_oplus(fr: FusionRing) -> SectorData:
    """Every sector once: sigma = (+)_a a."""
    return _sector_data(fr, np.ones(fr.size, dtype=np.int64))


def sigma_reg(fr: FusionRing, tol: float = 1e-9) -> SectorData:
    """The regular choice sigma = (+)_a d_a . a; needs integer dimensions."""
    dims, _ = quantum_dimensions(fr)
    rounded = np.round(dims)
    if np.max(np.abs(dims - rounded)) > tol:
        raise InvalidAlgebraError(
            "regular field content needs integer sector dimensions; got "
            + np.array2string(dims, precision=6))
    data = _sector_data(fr, rounded.astype(np.int64))
    assert np.max(np.abs(data.z_weights - 1.0)) <= 1e-7, "regular z-weights must be 1"
    return data


def symmetry_dimension(fr: FusionRing, sigma) -> int:
    """dim Q = sum_s N_s^2 with N_s the multiplicity of s in sigma^2."""
    m = sigma.sigma if isinstance(sigma, SectorData) else np.asarray(sigma)
    n = np.einsum("a,b,abs->s", m, m, fr.N)
    return int(np.round(float(n @ n)))


def depth_two_test(fr: FusionRing, sigma):
    """Depth-2 criterion: every subsector of sigma sigma-bar sigma lies in sigma.

    Returns (passed, witnesses) where witnesses are the labels appearing in
    sigma sigma-bar sigma but not in sigma.  Exact integer computation.
    """
    m = sigma.sigma if isinstance(sigma, SectorData) else np.asarray(sigma)
    m = np.asarray(np.round(m), dtype=np.int64)
    mbar = m[list(fr.dual)]
    v1 = np.einsum("a,b,abc->c", m, mbar, fr.N)       # sigma sigma-bar
    v2 = np.einsum("c,e,ced->d", v1, m, fr.N)         # (sigma sigma-bar) sigma
    support = set(np.nonzero(m)[0])
    witnesses = [fr.labels[s] for s in np.nonzero(v2)[0] if s not in support]
    return (not witnesses), witnesses


def frobenius_identity_check(fr: FusionRing) -> float:
    """max over a, s of |sum_b d_b N[a][b][s] - d_a d_s|."""
    dims, _ = quantum_dimensions(fr)
    lhs = np.einsum("b,abs->as", dims, fr.N)
    return float(np.max(np.abs(lhs - np.outer(dims, dims))))


def report(fr: FusionRing, sigma: SectorData):
    """Key/value summary of the sector calculus for one choice of sigma.

    Keys are stable so machine reports diff cleanly.  For integer-dimension
    rings the regular comparison (index and dimension ratios against the
    multiplicity-one choice) is included.
    """
    checks = verify_fusion(fr)
    dims, residual = quantum_dimensions(fr)
    passed, witnesses = depth_two_test(fr, sigma)
    out = {
        "labels": list(fr.labels),
        "fusion_axioms": "pass" if all(c.passed for c in checks) else "fail",
        "dims": [float(d) for d in dims],
        "dim_residual": residual,
        "sigma": [float(x) for x in sigma.sigma],
        "n_table": [int(x) for x in np.round(sigma.n)],
        "dim_q": sigma.symmetry_dim,
        "d_sigma": sigma.d_sigma,
        "extension_index": sigma.extension_index,
        "z_weights": [float(z) for z in sigma.z_weights],
        "global_dim": sigma.global_dim,
        "depth_two": passed,
        "depth_two_witnesses": [str(w) for w in witnesses],
        "frobenius_residual": frobenius_identity_check(fr),
    }
    if np.max(np.abs(dims - np.round(dims))) <= 1e-9:
        reg = sigma_reg(fr)
        oplus = sigma_oplus(fr)
        out["regular_equals_oplus"] = bool(
            np.array_equal(reg.sigma, oplus.sigma))
        out["regular_index_ratio"] = reg.extension_index / oplus.extension_index
        out["regular_dim_ratio"] = reg.symmetry_dim / oplus.symmetry_dim
    return out


LOCALITY_NOTICE = (
    "locality/statistics data (braiding operators, statistics phases) is not "
    "derivable from fusion multiplicities alone and is not modeled here")


# -- stock rings -------------------------------------------------------------


def fibonacci_ring() -> FusionRing:
    """Labels 1, tau with tau.tau = 1 + tau."""
    N = np.zeros((2, 2, 2), dtype=np.int64)
    N[0] = np.eye(2)
    N[:, 0, :] = np.eye(2)
    N[1, 1, 0] = 1
    N[1, 1, 1] = 1
    return FusionRing(("1", "tau"), N, (0, 1))


def ising_ring() -> FusionRing:
    """Labels 1, sigma, psi with sigma^2 = 1 + psi, sigma.psi = sigma, psi^2 = 1."""
    N = np.zeros((3, 3, 3), dtype=np.int64)
    N[0] = np.eye(3)
    N[:, 0, :] = np.eye(3)
    N[1, 1, 0] = 1
    N[1, 1, 2] = 1
    N[1, 2, 1] = 1
    N[2, 1, 1] = 1
    N[2, 2, 0] = 1
    return FusionRing(("1", "sigma", "psi"), N, (0, 1, 2))


def cyclic_ring(n: int) -> FusionRing:
    """Group-like ring of Z_n: a.b = a + b mod n."""
    N = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            N[a, b, (a + b) % n] = 1
    return FusionRing(tuple(f"g{k}" for k in range(n)),
                      N, tuple((-k) % n for k in range(n)))


def trivial_ring() -> FusionRing:
    return cyclic_ring(1)


STOCK_RINGS = {
    "fibonacci": fibonacci_ring,
    "ising": ising_ring,
    "z2": lambda: cyclic_ring(2),
    "z3": lambda: cyclic_ring(3),
    "trivial": trivial_ring,
}
