"""Actions of weak Hopf algebras on multimatrix C* algebras: verification,
invariant subalgebras, isotypic/multiplet decomposition, the averaging
expectation, and the crossed product realized inside linear operators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from .algebra import (
    DEFAULT_TOL,
    AlgebraError,
    InvalidAlgebraError,
    LinearMap,
    MultiMatrixAlgebra,
    Subalgebra,
    _orthonormal_span,
    decompose_subalgebra,
    generate_star_subalgebra,
    nullspace,
)
from .hopf import CheckResult, WeakHopfAlgebra


class Action:
    """An action of a weak Hopf algebra Q on a multimatrix algebra B.

    rep[i] is the operator (e_i |> .) on B's coordinate space, one matrix per
    canonical basis element of Q.
    """

    def __init__(self, symmetry, target, rep):
        self.symmetry = symmetry
        self.target = target
        self.rep = np.asarray(rep, dtype=complex).reshape(
            symmetry.dim, target.dim, target.dim)

    def operator(self, q):
        return np.einsum("i,imn->mn", q.coords, self.rep)

    def __call__(self, q, b):
        return self.target.from_coords(self.operator(q) @ b.coords)


def verify_action(act, tol=DEFAULT_TOL):
    """Unital-homomorphism, module-algebra and star laws of the action."""
    Q, B, R = act.symmetry, act.target, act.rep
    cB = B.structure_constants
    # q |-> (q |> .) multiplicative and unital
    prod = np.einsum("ijk,kmn->ijmn", Q.c, R, optimize=True)
    comp = np.einsum("imk,jkn->ijmn", R, R, optimize=True)
    r_hom = float(np.abs(prod - comp).max())
    one_op = np.einsum("i,imn->mn", Q.unit_coords, R)
    r_unit = float(np.abs(one_op - np.eye(B.dim)).max())
    hom = CheckResult("action homomorphism (unital)", max(r_hom, r_unit) <= tol,
                      max(r_hom, r_unit))
    # q |> (b c) = (q_(1) |> b)(q_(2) |> c)
    lhs = np.einsum("abk,imk->iabm", cB, R, optimize=True)
    rhs = np.einsum("pqi,pua,qvb,uvm->iabm", Q.D, R, R, cB, optimize=True)
    r_mod = float(np.abs(lhs - rhs).max())
    mod = CheckResult("module-algebra law", r_mod <= tol, r_mod)
    # (q* |> b*)* = S^-1(q) |> b
    PB = B.star_permutation
    Sinv = np.linalg.inv(Q.S)
    r_star = 0.0
    for i in range(Q.dim):
        qstar = Q.star[:, i]  # coords of e_i^*, real
        T = PB @ (np.einsum("k,kmn->mn", qstar, R) @ PB).conj()
        want = np.einsum("k,kmn->mn", Sinv[:, i], R)
        r_star = max(r_star, float(np.abs(T - want).max()))
    star = CheckResult("action star law", r_star <= tol, r_star)
    return [hom, mod, star]


def counital_rep(act):
    """Operators for eps_t(e_i) |> . on B's coordinate space."""
    Et = act.symmetry.counital_target_matrix()
    return np.einsum("ti,tmn->imn", Et, act.rep, optimize=True)


def invariants(act, tol=1e-8):
    """The invariant *-subalgebra B^Q: solutions of q |> a = eps_t(q) |> a."""
    Rt = counital_rep(act)
    rows = np.vstack([act.rep[i] - Rt[i] for i in range(act.symmetry.dim)])
    ns = nullspace(rows)
    sub = Subalgebra(act.target, _orthonormal_span([ns[:, k] for k in range(ns.shape[1])]))
    # invariants always span a unital *-closed algebra; verify rather than trust
    els = sub.basis_elements()
    regen = generate_star_subalgebra(els) if els else sub
    if regen.dim != sub.dim:
        raise InvalidAlgebraError("invariant space is not a *-subalgebra")
    if not sub.contains(act.target.unit(), tol=tol):
        raise InvalidAlgebraError("invariant space does not contain the unit")
    return sub


@dataclass
class Multiplet:
    """A single irreducible Q-submodule of B, tagged by the Q-block acting."""
    charge_label: int
    basis: list
    size: int


def isotypic_decomposition(act, tol=1e-8):
    """Split B into irreducible Q-multiplets grouped by the blocks of Q.

    Returns (multiplets, multiplicity) with multiplicity[s] the number of
    multiplets of charge s.
    """
    Q, B = act.symmetry.algebra, act.target
    multiplets = []
    multiplicity = {}
    total = 0
    for s, n in enumerate(Q.block_sizes):
        e11 = np.einsum("k,kmn->mn", Q.matrix_unit(s, 0, 0).coords, act.rep)
        # range of the idempotent e11 = its fixed space
        u, sv, _ = np.linalg.svd(e11)
        m = int(np.sum(sv > tol * max(1.0, sv[0] if len(sv) else 1.0)))
        W = u[:, :m]
        multiplicity[s] = W.shape[1]
        lowers = [np.einsum("k,kmn->mn", Q.matrix_unit(s, a, 0).coords, act.rep)
                  for a in range(n)]
        for alpha in range(W.shape[1]):
            vecs = [L @ W[:, alpha] for L in lowers]
            multiplets.append(Multiplet(s, [B.from_coords(v) for v in vecs], n))
            total += n
    if total != B.dim:
        raise InvalidAlgebraError(
            f"multiplet dimensions sum to {total}, expected {B.dim}")
    return multiplets, multiplicity


def averaging_expectation(act, tol=1e-8):
    """Projection of B onto the invariants along the span of all action
    defects q |> b - eps_t(q) |> b.

    This is the isotypic averaging: trivial-charge multiplets are averaged
    (projected onto their invariant vectors), nontrivial ones are annihilated.
    """
    B = act.target
    A = invariants(act, tol=tol)
    Rt = counital_rep(act)
    cols = np.hstack([act.rep[i] - Rt[i] for i in range(act.symmetry.dim)])
    K = _orthonormal_span([cols[:, k] for k in range(cols.shape[1])])
    if A.dim + K.shape[1] != B.dim:
        raise InvalidAlgebraError("invariants and defect span do not split B")
    full = np.hstack([A.basis_matrix, K])
    proj = np.hstack([A.basis_matrix, np.zeros_like(K)]) @ np.linalg.inv(full)
    if np.abs(proj @ proj - proj).max() > max(tol, 1e-9):
        raise InvalidAlgebraError("averaging map failed idempotency")
    return LinearMap(B, B, proj)


def trivial_action(B):
    """The trivial group acting identically on B."""
    from .hopf import cyclic_group_table, group_algebra
    W = group_algebra(cyclic_group_table(1))
    return Action(W, B, np.eye(B.dim)[None, :, :])


@dataclass
class CrossedProduct:
    """B = A x| Q^ realized inside the linear operators on A."""
    ambient: MultiMatrixAlgebra          # End(A) as a full matrix algebra
    sub: Subalgebra                      # the generated *-subalgebra
    algebra: MultiMatrixAlgebra          # its multimatrix form
    to_block: np.ndarray                 # ambient coords -> algebra coords
    from_block: np.ndarray               # algebra coords -> ambient coords
    iota: np.ndarray                     # A coords -> ambient coords
    jmap: np.ndarray                     # Q^ coords -> ambient coords
    relation_residual: float = 0.0

    def iota_elem(self, a):
        return self.ambient.from_coords(self.iota @ a.coords)

    def j_elem(self, qhat):
        return self.ambient.from_coords(self.jmap @ qhat.coords)


def crossed_product(A, Wd, act, rng=None, tol=1e-8):
    """Crossed product of A by the weak Hopf algebra Wd acting via act.

    Generated inside End(A) by left multiplications iota(a) and the action
    operators j(q^); the straightening relation
    q^ . iota(a) = iota(q^_(1) |> a) . q^_(2) is verified on basis pairs.
    """
    if act.target is not A or act.symmetry is not Wd:
        raise AlgebraError("action does not match the crossed-product data")
    flags = verify_action(act, tol=max(tol, 1e-8))
    if not all(flags):
        raise InvalidAlgebraError("action failed verification: " +
                                  "; ".join(str(f) for f in flags if not f))
    d = A.dim
    ambient = MultiMatrixAlgebra((d,))
    iota = np.column_stack([A.left_mult_matrix(A.basis_element(k)).reshape(-1)
                            for k in range(d)])
    jmap = np.column_stack([act.rep[i].reshape(-1) for i in range(Wd.dim)])
    gens = [ambient.from_coords(iota[:, k]) for k in range(d)]
    gens += [ambient.from_coords(jmap[:, i]) for i in range(Wd.dim)]
    sub = generate_star_subalgebra(gens)
    # straightening relation on basis pairs
    res = 0.0
    for i in range(Wd.dim):
        for k in range(d):
            L = A.left_mult_matrix(A.basis_element(k))
            lhs = act.rep[i] @ L
            rhs = np.zeros_like(lhs)
            for p in range(Wd.dim):
                for q in range(Wd.dim):
                    w = Wd.D[p, q, i]
                    if abs(w) > 1e-14:
                        rhs += w * A.left_mult_matrix(
                            A.from_coords(act.rep[p] @ A.basis_element(k).coords)
                        ) @ act.rep[q]
            res = max(res, float(np.abs(lhs - rhs).max()))
    if res > max(tol, 1e-9):
        raise InvalidAlgebraError(
            f"crossed-product straightening relation fails (residual {res:.3e})")
    M, to_abs, from_abs = decompose_subalgebra(sub, rng=rng)
    return CrossedProduct(ambient, sub, M, to_abs, from_abs, iota, jmap, res)


def dual_action_from_embedding(act, pair, theta, tol=1e-8):
    """Action of the dual symmetry on the invariants, induced by an embedding
    theta: Q^ -> B satisfying the straightening relation:
        q^ |> a := theta(q^_(1)) a theta(S^(q^_(2))).
    Returns an Action of pair.dual on the invariant subalgebra brought to
    multimatrix form, together with the identification maps.
    """
    B = act.target
    A_sub = invariants(act)
    Wd = pair.dual
    M, to_abs, from_abs = decompose_subalgebra(A_sub)
    rep = np.zeros((Wd.dim, M.dim, M.dim), dtype=complex)
    for i in range(Wd.dim):
        op = np.zeros((B.dim, B.dim), dtype=complex)
        for p in range(Wd.dim):
            for q in range(Wd.dim):
                w = Wd.D[p, q, i]
                if abs(w) > 1e-14:
                    tp = B.from_coords(theta @ np.eye(Wd.dim)[:, p])
                    tq = B.from_coords(theta @ (Wd.S @ np.eye(Wd.dim)[:, q]))
                    op += w * (B.left_mult_matrix(tp) @ B.right_mult_matrix(tq))
        # restrict to A and express in M coordinates
        restricted = op @ from_abs
        if np.abs(restricted - from_abs @ (to_abs @ restricted)).max() > 1e-7:
            raise InvalidAlgebraError("dual action does not preserve the invariants")
        rep[i] = to_abs @ restricted
    return Action(Wd, M, rep), (M, to_abs, from_abs)


def solve_symmetry_embedding(act, pair, rng=None, tol=1e-7):
    """Find theta: Q^ -> B with q |> theta(q^) = theta(q |> q^) (adjoint
    action on the right), theta(1^) = 1, theta a *-homomorphism.

    The intertwiner space is linear; unitality is affine; multiplicativity and
    star-compatibility are imposed by least squares over the remaining gauge
    freedom.  Returns the (dim B x dim Q^) coordinate matrix or None.
    """
    from .duality import adjoint_action_matrices
    if rng is None:
        rng = np.random.default_rng(0)
    Q, B = act.symmetry, act.target
    Wd = pair.dual
    Ad = adjoint_action_matrices(pair)
    dB, dD = B.dim, Wd.dim
    rows = [np.kron(np.eye(dD), act.rep[i]) - np.kron(Ad[i].T, np.eye(dB))
            for i in range(Q.dim)]
    ns = nullspace(np.vstack(rows))
    if ns.shape[1] == 0:
        return None
    # affine constraint theta(1^) = 1l
    u = np.kron(Wd.unit_coords.reshape(1, -1), np.eye(dB))  # picks theta @ unit
    sol, *_ = np.linalg.lstsq(u @ ns, B.unit().coords, rcond=None)
    theta0 = (ns @ sol).reshape(dD, dB).T
    if np.linalg.norm(theta0 @ Wd.unit_coords - B.unit().coords) > 1e-8:
        return None
    hom = nullspace(np.vstack([np.vstack(rows), u]))

    cD = Wd.c
    PB, PD = B.star_permutation, Wd.algebra.star_permutation
    cB = B.structure_constants

    def unpack(x):
        k = hom.shape[1]
        coeff = x[:k] + 1j * x[k:]
        return theta0 + (hom @ coeff).reshape(dD, dB).T

    def residuals(x):
        th = unpack(x)
        r1 = (np.einsum("ijk,mk->mij", cD, th, optimize=True)
              - np.einsum("ai,bj,abm->mij", th, th, cB, optimize=True))
        r2 = th @ PD - PB @ th.conj()
        out = np.concatenate([r1.ravel(), r2.ravel()])
        return np.concatenate([out.real, out.imag])

    k = hom.shape[1]
    if k == 0:
        err = float(np.abs(residuals(np.zeros(0))).max())
        return theta0 if err < tol else None
    best = None
    for attempt in range(12):
        x0 = np.zeros(2 * k) if attempt == 0 else rng.standard_normal(2 * k)
        res = scipy.optimize.least_squares(residuals, x0, xtol=1e-15, ftol=1e-15,
                                           gtol=1e-15)
        err = float(np.abs(res.fun).max())
        if best is None or err < best[0]:
            best = (err, unpack(res.x))
        if err < tol:
            break
    return best[1] if best[0] < tol else None


def verify_reconstruction(act, pair=None, rng=None, tol=1e-8):
    """Check B ~= A x| Q^ for an action of Q on B with invariants A.

    Solves for the symmetry embedding theta: Q^ -> B, induces the dual action
    on A, forms the crossed product and matches it with B block-by-block via a
    constructed intertwiner on generators.
    Returns (passed, detail dict).
    """
    from .duality import dualize
    flags = verify_action(act)
    if not all(flags):
        return False, {"reason": "action failed verification"}
    if pair is None:
        pair = dualize(act.symmetry)
    theta = solve_symmetry_embedding(act, pair, rng=rng)
    if theta is None:
        return False, {"reason": "dual action unavailable: "
                                 "no symmetry embedding solves the adjoint rule"}
    try:
        dual_act, (M_A, toA, fromA) = dual_action_from_embedding(act, pair, theta)
    except InvalidAlgebraError as exc:
        return False, {"reason": str(exc)}
    act_flags = verify_action(dual_act, tol=1e-7)
    if not all(act_flags):
        return False, {"reason": "induced dual action fails the action axioms",
                       "flags": act_flags}
    try:
        cp = crossed_product(M_A, pair.dual, dual_act, rng=rng)
    except InvalidAlgebraError as exc:
        return False, {"reason": f"crossed product failed: {exc}"}
    B = act.target
    detail = {"crossed_blocks": cp.algebra.block_sizes, "target_blocks": B.block_sizes,
              "theta": theta}
    if sorted(cp.algebra.block_sizes) != sorted(B.block_sizes):
        detail["reason"] = "block multisets differ"
        return False, detail
    # intertwiner on generators: iota_c(a) -> embedded a, j_c(q^) -> theta(q^)
    src_cols, dst_cols = [], []
    for k in range(M_A.dim):
        a = M_A.basis_element(k)
        src_cols.append(cp.to_block @ cp.iota @ a.coords)
        dst_cols.append(fromA @ a.coords)
        for i in range(pair.dual.dim):
            w = cp.ambient.from_coords(cp.iota @ a.coords) * \
                cp.ambient.from_coords(cp.jmap @ np.eye(pair.dual.dim)[:, i])
            src_cols.append(cp.to_block @ w.coords)
            tgt = B.from_coords(fromA @ a.coords) * B.from_coords(theta[:, i])
            dst_cols.append(tgt.coords)
    S = np.column_stack(src_cols)
    T = np.column_stack(dst_cols)
    Phi, res, *_ = np.linalg.lstsq(S.T, T.T, rcond=None)
    Phi = Phi.T
    fit = float(np.abs(Phi @ S - T).max())
    detail["intertwiner_residual"] = fit
    if fit > 1e-8 or np.linalg.matrix_rank(Phi, tol=1e-8) < B.dim:
        detail["reason"] = "no bijective intertwiner on generators"
        return False, detail
    # homomorphism and star compatibility of the constructed intertwiner
    hom_res = 0.0
    Bc = cp.algebra
    for i in range(Bc.dim):
        for j in range(Bc.dim):
            prod = Bc.basis_element(i) * Bc.basis_element(j)
            lhs = Phi @ prod.coords
            rhs = (B.from_coords(Phi @ np.eye(Bc.dim)[:, i])
                   * B.from_coords(Phi @ np.eye(Bc.dim)[:, j])).coords
            hom_res = max(hom_res, float(np.abs(lhs - rhs).max()))
    star_res = float(np.abs(Phi @ Bc.star_permutation - B.star_permutation @ Phi.conj()).max())
    detail["homomorphism_residual"] = hom_res
    detail["star_residual"] = star_res
    passed = hom_res <= 1e-7 and star_res <= 1e-7
    if not passed:
        detail["reason"] = "intertwiner is not a *-homomorphism"
    return passed, detail
