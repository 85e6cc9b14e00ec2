"""Finite-dimensional inclusion towers: inclusion matrices, Markov traces,
the Jones basic construction, index and depth, canonical-triple verification,
and extraction of the dual pair of weak Hopf algebras from a depth-2
inclusion.

The extraction realizes the depth-2 reconstruction on the Jones tower: the
symmetry algebra is the relative commutant A' n B2 acting on B by
q |> b = lambda E_B(q iota2(b) e1); coproduct, counit and antipode are solved
from the straightening relation and the module-algebra law as linear systems
and then certified by the full axiom battery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    InvalidAlgebraError,
    LinearMap,
    MultiMatrixAlgebra,
    Subalgebra,
    TraceState,
    conditional_expectation,
    decompose_subalgebra,
    generate_star_subalgebra,
    relative_commutant,
)
from .hopf import CheckResult, WeakHopfAlgebra, full_verify
from .actions import Action, invariants, verify_action


# -- inclusions --------------------------------------------------------------


def _check_embedding(A, B, emb, tol=1e-9):
    if emb.shape != (B.dim, A.dim):
        raise InvalidAlgebraError("embedding matrix has wrong shape")
    if np.linalg.matrix_rank(emb, tol=1e-10) < A.dim:
        raise InvalidAlgebraError("embedding is not injective")
    if np.abs(emb @ A.unit().coords - B.unit().coords).max() > tol:
        raise InvalidAlgebraError("embedding is not unital")
    res = np.abs(np.einsum("ijk,mk->mij", A.structure_constants, emb, optimize=True)
                 - np.einsum("ai,bj,abm->mij", emb, emb, B.structure_constants,
                             optimize=True)).max()
    if res > tol:
        raise InvalidAlgebraError(f"embedding is not multiplicative ({res:.2e})")
    if np.abs(emb @ A.star_permutation - B.star_permutation @ emb.conj()).max() > tol:
        raise InvalidAlgebraError("embedding does not preserve the star")


def inclusion_matrix(A, B, emb):
    """Multiplicity matrix of a unital embedding (rows = B blocks, columns =
    A blocks), counted by traces of embedded minimal projections."""
    Lam = np.zeros((len(B.block_sizes), len(A.block_sizes)), dtype=int)
    for j in range(len(A.block_sizes)):
        p = B.from_coords(emb @ A.matrix_unit(j, 0, 0).coords)
        for i, blk in enumerate(p.blocks):
            t = float(np.trace(blk).real)
            if abs(t - round(t)) > 1e-6:
                raise InvalidAlgebraError("embedded projection has non-integer rank")
            Lam[i, j] = int(round(t))
    # dimension consistency
    for i, n in enumerate(B.block_sizes):
        if n != sum(Lam[i, j] * m for j, m in enumerate(A.block_sizes)):
            raise InvalidAlgebraError("inclusion matrix inconsistent with block sizes")
    return Lam


def is_connected(Lam):
    """No zero rows/columns and the bipartite block graph is connected."""
    Lam = np.asarray(Lam)
    if (Lam.sum(axis=0) == 0).any() or (Lam.sum(axis=1) == 0).any():
        return False
    nb, na = Lam.shape
    seen_b, seen_a = {0}, set()
    frontier = [("b", 0)]
    while frontier:
        side, v = frontier.pop()
        if side == "b":
            for j in range(na):
                if Lam[v, j] and j not in seen_a:
                    seen_a.add(j)
                    frontier.append(("a", j))
        else:
            for i in range(nb):
                if Lam[i, v] and i not in seen_b:
                    seen_b.add(i)
                    frontier.append(("b", i))
    return len(seen_b) == nb and len(seen_a) == na


def perron_trace(Lam, B):
    """The Markov trace on B: block weights from the Perron-Frobenius
    eigenvector of Lam Lam^T, normalized to a state."""
    Lam = np.asarray(Lam, dtype=float)
    vals, vecs = np.linalg.eigh(Lam @ Lam.T)
    t = np.abs(vecs[:, -1])
    if t.min() <= 1e-12:
        raise InvalidAlgebraError("no strictly positive Markov trace (disconnected?)")
    t = t / sum(w * n for w, n in zip(t, B.block_sizes))
    return TraceState(B, t)


@dataclass
class Inclusion:
    A: MultiMatrixAlgebra
    B: MultiMatrixAlgebra
    embed: LinearMap
    Lam: np.ndarray
    trace: TraceState

    def embedded(self):
        return Subalgebra.from_elements(
            self.B, [self.B.from_coords(self.embed.matrix[:, k])
                     for k in range(self.A.dim)])


def make_inclusion(A, B, emb, trace=None):
    emb = np.asarray(emb, dtype=complex)
    _check_embedding(A, B, emb)
    Lam = inclusion_matrix(A, B, emb)
    if trace is None:
        if not is_connected(Lam):
            raise InvalidAlgebraError("inclusion matrix is disconnected")
        trace = perron_trace(Lam, B)
    return Inclusion(A, B, LinearMap(A, B, emb), Lam, trace)


def index(inc):
    """Squared Perron-Frobenius norm of the inclusion matrix."""
    if not is_connected(inc.Lam):
        raise InvalidAlgebraError("index undefined: disconnected inclusion matrix")
    return float(np.linalg.norm(inc.Lam.astype(float), 2) ** 2)


# -- depth (integer path counting) ------------------------------------------


def derived_tower_matrices(Lam, k_max):
    """Inclusion matrices of A into B_k for k = 0..k_max (B_0 = A, B_1 = B);
    the single-step matrix alternates between Lam and its transpose."""
    Lam = np.asarray(Lam, dtype=object)  # exact integer arithmetic
    Ms = [np.eye(Lam.shape[1], dtype=object), Lam]
    while len(Ms) <= k_max:
        step = Lam if len(Ms) % 2 == 1 else Lam.T
        Ms.append(step @ Ms[-1])
    return Ms


def relative_commutant_dimension(Lam, k):
    """dim(A' n B_k) by exact path counting."""
    M = derived_tower_matrices(Lam, k)[k]
    return int(sum(int(x) ** 2 for x in np.asarray(M).ravel()))


def depth(inc, k_max=24):
    """Smallest k >= 1 such that no new irreducible components appear at step
    k+1 of the derived tower: support(M_{k+1}) = support(M_{k-1})."""
    if not is_connected(inc.Lam):
        raise InvalidAlgebraError("depth undefined: disconnected inclusion matrix")
    Ms = derived_tower_matrices(inc.Lam, k_max + 1)
    for k in range(1, k_max + 1):
        a = np.asarray(Ms[k + 1], dtype=float) != 0
        b = np.asarray(Ms[k - 1], dtype=float) != 0
        if a.shape == b.shape and (a == b).all():
            return k
    raise InvalidAlgebraError("depth did not stabilize (path counting)")


def is_depth_two(inc):
    return depth(inc) <= 2


# -- basic construction ------------------------------------------------------


@dataclass
class BasicConstruction:
    algebra: MultiMatrixAlgebra          # B2 in multimatrix form
    e1: object                           # Jones projection, element of B2
    trace: TraceState                    # extended Markov trace on B2
    embed: LinearMap                     # B -> B2
    Lam: np.ndarray                      # inclusion matrix of B in B2
    to_operators: np.ndarray             # B2 coords -> operators on L2(B)
    from_operators: np.ndarray           # operator coords -> B2 coords
    expect_to_B: np.ndarray              # B2 coords -> B coords (E_B)

    def inclusion(self):
        return Inclusion(self.embed.source, self.algebra, self.embed,
                         self.Lam, self.trace)


def basic_construction(inc, rng=None):
    """Jones extension on the GNS space of (B, tau): B2 = <B, e1> with e1 the
    tau-orthogonal projection onto the embedded copy of A."""
    A, B, tau = inc.A, inc.B, inc.trace
    scale = np.sqrt(tau.metric)          # orthonormalize the GNS coordinates
    T, Tinv = np.diag(scale), np.diag(1.0 / scale)
    lam = index(inc)

    def op(mat):
        return T @ mat @ Tinv

    e1_gns = op(conditional_expectation(B, inc.embed, tau).matrix)
    ambient = MultiMatrixAlgebra((B.dim,))
    gens = [ambient.from_coords(op(B.left_mult_matrix(B.basis_element(k))).reshape(-1))
            for k in range(B.dim)]
    gens.append(ambient.from_coords(e1_gns.reshape(-1)))
    sub = generate_star_subalgebra(gens)
    B2, to_abs, from_abs = decompose_subalgebra(sub, rng=rng)

    emb_cols = [to_abs @ op(B.left_mult_matrix(B.basis_element(k))).reshape(-1)
                for k in range(B.dim)]
    emb2 = np.column_stack(emb_cols)
    _check_embedding(B, B2, emb2)
    Lam2 = inclusion_matrix(B, B2, emb2)
    # Bratteli reflection: the new inclusion matrix is the transpose up to a
    # relabeling of the new blocks
    if sorted(map(tuple, Lam2)) != sorted(map(tuple, inc.Lam.T)):
        raise InvalidAlgebraError("basic construction does not reflect the "
                                  "inclusion matrix")
    tau2 = perron_trace(Lam2, B2)
    e1 = B2.from_coords(to_abs @ e1_gns.reshape(-1))
    # Markov property: tau2(e1 b) = lam^-1 tau(b)
    worst = 0.0
    for k in range(B.dim):
        b2 = B2.from_coords(emb2[:, k])
        worst = max(worst, abs(tau2(e1 * b2) - tau(B.basis_element(k)) / lam))
    if worst > 1e-9:
        raise InvalidAlgebraError(f"Markov property fails (residual {worst:.3e})")
    CE = conditional_expectation(B2, LinearMap(B, B2, emb2), tau2)
    pull = np.linalg.pinv(emb2)
    return BasicConstruction(B2, e1, tau2, LinearMap(B, B2, emb2), Lam2,
                             from_abs, to_abs, pull @ CE.matrix)


@dataclass
class TowerContext:
    inclusion: Inclusion
    index: float
    steps: list                          # [BasicConstruction for B2, for B3]

    @property
    def B2(self):
        return self.steps[0].algebra

    @property
    def B3(self):
        return self.steps[1].algebra

    @property
    def jones_projections(self):
        return [self.steps[0].e1, self.steps[1].e1]


def jones_tower(inc, rng=None, length=2):
    steps = []
    cur = inc
    for _ in range(length):
        bc = basic_construction(cur, rng=rng)
        steps.append(bc)
        cur = bc.inclusion()
    return TowerContext(inc, index(inc), steps)


# -- canonical triples -------------------------------------------------------


@dataclass
class QSystem:
    A: MultiMatrixAlgebra
    rho: LinearMap
    w: object
    x: object
    lam: float


def verify_qsystem(qs, tol=DEFAULT_TOL):
    """The six canonical-triple relations, preceded by the isometry checks."""
    A, rho, w, x, lam = qs.A, qs.rho, qs.w, qs.x, qs.lam
    out = []

    def check(name, left, right):
        r = (left - right).norm()
        out.append(CheckResult(name, r <= tol, float(r)))

    one = A.unit()
    check("w isometry", w.adjoint() * w, one)
    check("x isometry", x.adjoint() * x, one)
    res1 = res2 = 0.0
    for k in range(A.dim):
        a = A.basis_element(k)
        ra = A.from_coords(rho.matrix @ a.coords)
        rra = A.from_coords(rho.matrix @ ra.coords)
        res1 = max(res1, float((w * a - ra * w).norm()))
        res2 = max(res2, float((x * ra - rra * x).norm()))
    out.append(CheckResult("w intertwines rho", res1 <= tol, res1))
    out.append(CheckResult("x intertwines rho^2", res2 <= tol, res2))
    rx = A.from_coords(rho.matrix @ x.coords)
    rxs = A.from_coords(rho.matrix @ x.adjoint().coords)
    rws = A.from_coords(rho.matrix @ w.adjoint().coords)
    check("x x = rho(x) x", x * x, rx * x)
    check("x x* = rho(x*) x", x * x.adjoint(), rxs * x)
    check("w* x = lam^-1/2", w.adjoint() * x, lam ** -0.5 * one)
    check("rho(w*) x = lam^-1/2", rws * x, lam ** -0.5 * one)
    return out


def canonical_triple(tower):
    """The canonical triple distilled from a tower.

    Isometries in a finite-dimensional C* algebra are unitaries, so
    w* x = lam^-1/2 1l forces lam = 1: a faithful canonical triple exists on
    multimatrix algebras only at index one.  For lam = 1
    the triple is (rho = the embedding read as an automorphism, w = x = 1l).
    """
    inc = tower.inclusion if isinstance(tower, TowerContext) else tower
    lam = index(inc)
    if abs(lam - 1.0) > 1e-9:
        raise InvalidAlgebraError(
            "no canonical triple on multimatrix algebras for index "
            f"{lam:.6g} > 1: isometries are unitaries in finite dimension, "
            "so w* x = lam^-1/2 1l is unsatisfiable")
    rho = LinearMap.identity(inc.A)
    return QSystem(inc.A, rho, inc.A.unit(), inc.A.unit(), lam)


# -- depth-2 extraction ------------------------------------------------------


@dataclass
class SectorRow:
    label: int
    n: int        # block size of iota(A)' n B
    d: float      # PF norm of the reduced inclusion p(A)p in pBp
    z: float      # sqrt(n/d)


@dataclass
class ExtractionResult:
    Q: WeakHopfAlgebra
    Qhat: WeakHopfAlgebra
    pair: object                  # DualPair
    action: Action                # of Q on B
    tower: TowerContext
    q_space: Subalgebra           # A' n B2 inside B2
    to_q: np.ndarray              # B2 coords -> Q coords
    from_q: np.ndarray            # Q coords -> B2 coords
    sector_table: list
    solve_report: dict
    dressing_note: str = ""


def _reduced_pf_norm(B, p, a_elems):
    """PF norm of the inclusion p a p in p B p for a projection p commuting
    with the a's."""
    corner_A = Subalgebra.from_elements(B, [a * p for a in a_elems])
    b_els = [B.from_coords(col) for col in np.eye(B.dim).T]
    corner_B = Subalgebra.from_elements(
        B, [p * b * p for b in b_els if (p * b * p).norm() > 1e-12])
    MA, toA, fromA = decompose_subalgebra(corner_A)
    MB, toB, fromB = decompose_subalgebra(corner_B)
    emb = toB @ fromA
    Lam = inclusion_matrix(MA, MB, emb)
    return float(np.linalg.norm(Lam.astype(float), 2))


def sector_table(inc, rng=None):
    """Per-block data of the relative commutant iota(A)' n B: multiplicity
    n_s, reduced PF weight d_s, and the dressing weight z_s = sqrt(n_s/d_s)."""
    B = inc.B
    a_elems = [B.from_coords(inc.embed.matrix[:, k]) for k in range(inc.A.dim)]
    comm = relative_commutant(a_elems, B)
    MC, toC, fromC = decompose_subalgebra(comm, rng=rng)
    rows = []
    for s, n in enumerate(MC.block_sizes):
        zc = sum((MC.matrix_unit(s, a, a) for a in range(n)), start=MC.zero())
        p = B.from_coords(fromC @ zc.coords)
        d = _reduced_pf_norm(B, p, a_elems)
        rows.append(SectorRow(s, n, d, float(np.sqrt(n / d))))
    return rows


def extract_weak_hopf(inc, rng=None, tol=1e-8):
    """Extract the weak Hopf symmetry of a depth <= 2 inclusion.

    Q is the relative commutant A' n B2 acting on B with invariants iota(A);
    its structure maps are solved from the straightening relation and the
    module-algebra law, then certified by the full axiom battery.  Qhat is
    the dual; its block data can be checked against B' n B3 path counting.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    dep = depth(inc)
    if dep > 2:
        raise InvalidAlgebraError(f"extraction requires depth <= 2, got {dep}")
    lam = index(inc)
    tower = jones_tower(inc, rng=rng)
    bc = tower.steps[0]
    A, B, B2 = inc.A, inc.B, bc.algebra

    a_in_b2 = [B2.from_coords(bc.embed.matrix @ inc.embed.matrix[:, k])
               for k in range(A.dim)]
    q_space = relative_commutant(a_in_b2, B2)
    Qalg, to_q, from_q = decompose_subalgebra(q_space, rng=rng)
    k = Qalg.dim

    # the action q |> b = lam E_B(q iota2(b) e1)
    e1r = B2.right_mult_matrix(bc.e1)
    rep = np.zeros((k, B.dim, B.dim), dtype=complex)
    for i in range(k):
        qt = B2.left_mult_matrix(B2.from_coords(from_q[:, i]))
        rep[i] = lam * bc.expect_to_B @ qt @ e1r @ bc.embed.matrix

    # solve the coproduct tensor from (a) straightening
    # q iota2(b) = sum (q_(1)|>b)~ q_(2) and (b) the module-algebra law
    cB = B.structure_constants
    qt_elems = [B2.from_coords(from_q[:, i]) for i in range(k)]
    D = np.zeros((k, k, k), dtype=complex)
    cols = []
    for p in range(k):
        repb = [B.from_coords(rep[p] @ np.eye(B.dim)[:, j]) for j in range(B.dim)]
        for q in range(k):
            block_a = np.concatenate(
                [(B2.from_coords(bc.embed.matrix @ rb.coords) * qt_elems[q]).coords
                 for rb in repb])
            block_b = np.einsum("ua,vb,uvm->mab", rep[p], rep[q], cB,
                                optimize=True).reshape(-1)
            cols.append(np.concatenate([block_a, block_b]))
    K = np.column_stack(cols)
    null_dim = K.shape[1] - np.linalg.matrix_rank(K, tol=1e-9)
    solve_report = {"coproduct_nullity": int(null_dim)}
    max_res = 0.0
    for i in range(k):
        rhs_a = np.concatenate(
            [(qt_elems[i] * B2.from_coords(bc.embed.matrix[:, j])).coords
             for j in range(B.dim)])
        rhs_b = np.einsum("abm,nm->nab", cB, rep[i], optimize=True).reshape(-1)
        rhs = np.concatenate([rhs_a, rhs_b])
        sol, *_ = np.linalg.lstsq(K, rhs, rcond=None)
        max_res = max(max_res, float(np.linalg.norm(K @ sol - rhs)))
        D[:, :, i] = sol.reshape(k, k)
    solve_report["coproduct_residual"] = max_res
    if max_res > 1e-7:
        raise InvalidAlgebraError(
            f"straightening relation has no coproduct solution ({max_res:.3e})")

    # counit from (eps x id) Delta = id = (id x eps) Delta
    rows = np.vstack([D.transpose(1, 2, 0).reshape(k * k, k),
                      D.transpose(0, 2, 1).reshape(k * k, k)])
    rhs = np.concatenate([np.eye(k).reshape(-1), np.eye(k).reshape(-1)])
    eps, *_ = np.linalg.lstsq(rows, rhs, rcond=None)
    solve_report["counit_residual"] = float(np.linalg.norm(rows @ eps - rhs))

    # antipode from the two weak antipode identities (linear in S)
    c = Qalg.structure_constants
    unit_q = Qalg.unit().coords
    T1 = np.einsum("pqk,k->pq", D, unit_q)
    D3 = np.einsum("pqm,mri->pqri", D, D, optimize=True)
    coeff1 = np.einsum("pqbi,sqa->abisp", D3, c, optimize=True).reshape(k * k * k, k * k)
    rhs1 = np.einsum("aq,iqb->abi", T1, c, optimize=True).reshape(-1)
    coeff2 = np.einsum("fqri,qsg->fgisr", D3, c, optimize=True).reshape(k * k * k, k * k)
    rhs2 = np.einsum("ag,aif->fgi", T1, c, optimize=True).reshape(-1)
    Svec, *_ = np.linalg.lstsq(np.vstack([coeff1, coeff2]),
                               np.concatenate([rhs1, rhs2]), rcond=None)
    S = Svec.reshape(k, k)
    solve_report["antipode_residual"] = float(np.linalg.norm(
        np.vstack([coeff1, coeff2]) @ Svec - np.concatenate([rhs1, rhs2])))

    Q = WeakHopfAlgebra(Qalg, D, eps, S)
    checks = full_verify(Q, tol=max(tol, 1e-8))
    if not all(checks):
        bad = "; ".join(str(ch) for ch in checks if not ch)
        raise InvalidAlgebraError(f"extracted structure fails verification: {bad}")

    action = Action(Q, B, rep)
    act_checks = verify_action(action, tol=max(tol, 1e-8))
    if not all(act_checks):
        raise InvalidAlgebraError("extracted action fails the action axioms")
    inv = invariants(action)
    if inv.dim != A.dim:
        raise InvalidAlgebraError(
            f"invariants have dimension {inv.dim}, expected {A.dim}")
    for j in range(A.dim):
        a = B.from_coords(inc.embed.matrix[:, j])
        if not inv.contains(a, tol=1e-7):
            raise InvalidAlgebraError("embedded A is not contained in the invariants")

    from .duality import dualize
    pair = dualize(Q, rng=rng)
    table = sector_table(inc, rng=rng)
    dressing = ("z-weights all 1: dressed and undressed data coincide"
                if all(abs(r.z - 1) < 1e-9 for r in table)
                else "nontrivial z-weights present")
    return ExtractionResult(Q, pair.dual, pair, action, tower, q_space,
                            to_q, from_q, table, solve_report, dressing)


# -- derived maps ------------------------------------------------------------


def minimal_expectation(res):
    """mu: B -> B via the tower: b -> lam E_B(e1 iota2(b) e1)."""
    bc = res.tower.steps[0]
    lam = res.tower.index
    e1m = bc.algebra.left_mult_matrix(bc.e1)
    e1r = bc.algebra.right_mult_matrix(bc.e1)
    B = res.action.target
    mat = lam * bc.expect_to_B @ e1m @ e1r @ bc.embed.matrix
    return LinearMap(B, B, mat)


def inner_part(res, tol=1e-8):
    """P = image in Q of iota(A)' n B, Pbar = S(P); checks commutation, the
    inner-coproduct identity Delta(p) = Delta(1l)(p x 1l)Delta(1l), and that
    every p pbar acts by two-sided multiplication with solvable implementers.
    Returns (P_basis, Pbar_basis, checks)."""
    inc = res.tower.inclusion
    B = inc.B
    bc = res.tower.steps[0]
    Q = res.Q
    a_elems = [B.from_coords(inc.embed.matrix[:, j]) for j in range(inc.A.dim)]
    comm = relative_commutant(a_elems, B)
    P_basis = []
    for idx in range(comm.dim):
        u = comm.basis_elements()[idx]
        qc = res.to_q @ bc.embed.matrix @ u.coords
        if np.abs(res.from_q @ qc - bc.embed.matrix @ u.coords).max() > 1e-7:
            raise InvalidAlgebraError("iota(A)' n B does not embed into Q")
        P_basis.append(Q.algebra.from_coords(qc))
    Pbar_basis = [Q.apply_antipode(p) for p in P_basis]
    checks = []
    r_comm = max(((p * pb - pb * p).norm()
                  for p in P_basis for pb in Pbar_basis), default=0.0)
    checks.append(CheckResult("[P, Pbar] = 0", r_comm <= tol, float(r_comm)))
    # Delta(p) = Delta(1l)(p x 1l)Delta(1l) on P, with the mirrored leg on Pbar
    T1 = Q.delta_unit
    r_inner = 0.0
    for p, leg in [(p, 0) for p in P_basis] + [(pb, 1) for pb in Pbar_basis]:
        dp = np.einsum("pqk,k->pq", Q.D, p.coords)
        simple = (np.outer(p.coords, Q.unit_coords) if leg == 0
                  else np.outer(Q.unit_coords, p.coords))
        rhs = Q.t2_mult(Q.t2_mult(T1, simple), T1)
        r_inner = max(r_inner, float(np.abs(dp - rhs).max()))
    checks.append(CheckResult("inner coproduct identity", r_inner <= tol,
                              float(r_inner)))
    # p pbar |> b = u b u' for solvable implementers u, u'
    r_impl = 0.0
    for p in P_basis:
        for pb in Pbar_basis:
            op = res.action.operator(p * pb)
            # op = L(u) R(u') is linear in u x u': solve for the coefficient
            # matrix X[a, b] with op = sum X[a,b] L(e_a) R(e_b), then factor
            cols = [(B.left_mult_matrix(B.basis_element(a))
                     @ B.right_mult_matrix(B.basis_element(b))).reshape(-1)
                    for a in range(B.dim) for b in range(B.dim)]
            sol, *_ = np.linalg.lstsq(np.column_stack(cols), op.reshape(-1),
                                      rcond=None)
            fit = float(np.linalg.norm(np.column_stack(cols) @ sol - op.reshape(-1)))
            X = sol.reshape(B.dim, B.dim)
            u_, s_, v_ = np.linalg.svd(X)
            rank1_defect = float(s_[1]) if len(s_) > 1 else 0.0
            r_impl = max(r_impl, fit, rank1_defect)
    checks.append(CheckResult("inner implementers solvable", r_impl <= 1e-7,
                              float(r_impl)))
    return P_basis, Pbar_basis, checks
