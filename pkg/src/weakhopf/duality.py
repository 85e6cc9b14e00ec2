"""Dual weak C* Hopf algebras via the canonical pairing: product dualizes the
coproduct and vice versa, the dual star comes from <q^*, q> = conj<q^, S(q)*>,
and the dual algebra is brought to multimatrix form constructively."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_TOL, InvalidAlgebraError, wedderburn_decompose
from .hopf import CheckResult, WeakHopfAlgebra, full_verify, transport_structure


@dataclass(frozen=True)
class DualPair:
    primal: WeakHopfAlgebra
    dual: WeakHopfAlgebra
    pairing: np.ndarray  # P[i][j] = <e^_i, e_j> over the final bases

    @property
    def condition_number(self):
        return float(np.linalg.cond(self.pairing))

    def pair(self, qhat, q):
        return complex(qhat.coords @ self.pairing @ q.coords)


def dualize(W, rng=None, tol=DEFAULT_TOL):
    """The dual weak C* Hopf algebra of W, with the pairing matrix.

    Structure exchange: dual product <- coproduct tensor, dual coproduct <-
    structure constants, dual unit <- counit, dual counit <- evaluation at 1l,
    dual antipode <- transpose, dual star defined by <q^*, q> = conj<q^, S(q)*>.
    """
    d = W.dim
    if np.linalg.matrix_rank(W.S, tol=1e-10) < d:
        raise InvalidAlgebraError("antipode not invertible; cannot dualize")
    c_hat = W.D.copy()                 # product on the dual
    D_hat = W.c.astype(complex)        # coproduct on the dual
    eps_hat = W.unit_coords.copy()     # counit = evaluation at 1l
    S_hat = W.S.T.copy()
    star_hat = (W.star @ W.S).T        # coords(q^*) = star_hat @ conj(coords)
    inv_check = float(np.abs(star_hat @ star_hat.conj() - np.eye(d)).max())
    if inv_check > 1e-8:
        raise InvalidAlgebraError(
            f"dual star fails involutivity (residual {inv_check:.3e}); "
            "input is not a weak C* Hopf algebra")
    try:
        M, iso = wedderburn_decompose(c_hat, star_hat, rng=rng)
    except InvalidAlgebraError as exc:
        raise InvalidAlgebraError(
            f"input is not a weak C* Hopf algebra (dual decomposition: {exc})")
    iso_inv = np.linalg.inv(iso)
    Dn, en, Sn = transport_structure(D_hat, eps_hat, S_hat, iso, iso_inv)
    dual = WeakHopfAlgebra(M, Dn, en, Sn)
    # natural pairing <e^_i, e_j> = delta_ij; transport the dual leg
    pairing = iso_inv.T
    return DualPair(W, dual, pairing)


def double_dual_check(W, rng=None, tol=1e-8):
    """The canonical evaluation map W -> dual(dual(W)) intertwines all
    structure.  Returns (passed, residual, J) with J the coordinate matrix."""
    pair1 = dualize(W, rng=rng)
    pair2 = dualize(pair1.dual, rng=rng)
    Wdd = pair2.dual
    # q as a functional on the dual: <J q, .> matches q under pair1's pairing;
    # in pair2 coordinates the evaluation map is J with pairing2(J q, q^) =
    # pairing1(q^, q).
    J = np.linalg.solve(pair2.pairing.T, pair1.pairing)
    # J must push every structure tensor of W to Wdd
    rs = []
    rs.append(np.abs(np.einsum("ijk,mk->mij", W.c, J, optimize=True)
                     - np.einsum("ai,bj,abm->mij", J, J, Wdd.c, optimize=True)).max())
    rs.append(np.abs(np.einsum("pqk,ap,bq->abk", W.D, J, J, optimize=True)
                     - np.einsum("abm,mk->abk", Wdd.D, J, optimize=True)).max())
    rs.append(np.abs(W.eps - Wdd.eps @ J).max())
    rs.append(np.abs(J @ W.S - Wdd.S @ J).max())
    rs.append(np.abs(J @ W.star - Wdd.star @ J.conj()).max())
    rs.append(np.abs(J @ W.unit_coords - Wdd.unit_coords).max())
    residual = float(max(rs))
    return residual <= tol, residual, J


def adjoint_action_matrices(pair):
    """Operators of the primal adjoint action on dual coordinates, solved from
    <q |> q^, p> = <q^, p q>."""
    W = pair.primal
    P = pair.pairing
    Pinv_T = np.linalg.inv(P.T)
    mats = []
    for i in range(W.dim):
        R = W.algebra.right_mult_matrix(W.algebra.basis_element(i))
        mats.append(Pinv_T @ R.T @ P.T)
    return np.array(mats)


def verify_adjoint_action(pair, act=None, tol=1e-8):
    """Check the adjoint rule <q |> q^, p> = <q^, p q> on basis triples.

    With act=None the action is solved from the rule (unique by nondegeneracy
    of the pairing) and then checked against the module-algebra axioms.
    Returns (passed, checks).
    """
    from .actions import Action, verify_action
    W, Wd = pair.primal, pair.dual
    P = pair.pairing
    if np.linalg.cond(P) > 1e10:
        raise InvalidAlgebraError("pairing is numerically degenerate")
    if act is None:
        act = Action(W, Wd.algebra, adjoint_action_matrices(pair))
    r = 0.0
    for i in range(W.dim):
        R = W.algebra.right_mult_matrix(W.algebra.basis_element(i))
        # <e_i |> e^_j, e_k> = <e^_j, e_k e_i> for all j, k
        r = max(r, float(np.abs(act.rep[i].T @ P - P @ R).max()))
    rule = CheckResult("adjoint rule", r <= tol, r)
    checks = [rule] + verify_action(act, tol=max(tol, 1e-8))
    return all(checks), checks


def algebra_level_self_duality(W, rng=None):
    """Compare the block-size multisets of W and its dual (algebra-level
    self-duality only).  Returns (passed, primal_blocks, dual_blocks)."""
    pair = dualize(W, rng=rng)
    a = sorted(W.algebra.block_sizes)
    b = sorted(pair.dual.algebra.block_sizes)
    return a == b, a, b


def verify_dual(pair, tol=DEFAULT_TOL):
    """Full verifier battery on the dual side."""
    return full_verify(pair.dual, tol=tol)
