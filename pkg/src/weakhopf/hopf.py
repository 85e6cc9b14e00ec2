"""Weak C* Hopf algebras: structure container, axiom verifiers, classifier,
and stock constructors (group algebras, function algebras, groupoid algebras).

The coproduct is kept as a tensor D with Delta(e_k) = sum_{p,q} D[p,q,k] e_p x e_q
over the canonical matrix-unit basis; all verifiers are einsum contractions
against the structure constants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from .algebra import (
    DEFAULT_TOL,
    AlgebraError,
    InvalidAlgebraError,
    LinearMap,
    MultiMatrixAlgebra,
    nullspace,
    tensor,
    tensor_permutation,
    wedderburn_decompose,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float

    def __bool__(self):
        return self.passed

    def __str__(self):
        tag = "pass" if self.passed else "FAIL"
        return f"{self.name}: {tag} (residual {self.residual:.3e})"


class WeakHopfAlgebra:
    """A multimatrix algebra with coproduct, counit and antipode as linear data.

    Nothing is assumed about the structure maps at construction time; the
    verify_* functions decide whether the data is (weak) Hopf.
    """

    def __init__(self, algebra, coproduct, counit, antipode):
        d = algebra.dim
        self.algebra = algebra
        self.D = np.asarray(coproduct, dtype=complex).reshape(d, d, d)
        self.eps = np.asarray(counit, dtype=complex).reshape(d)
        self.S = np.asarray(antipode, dtype=complex).reshape(d, d)

    @property
    def dim(self):
        return self.algebra.dim

    @cached_property
    def c(self):
        return self.algebra.structure_constants

    @cached_property
    def star(self):
        return self.algebra.star_permutation

    @cached_property
    def unit_coords(self):
        return self.algebra.unit().coords

    @cached_property
    def delta_unit(self):
        """Delta(1l) as a (d, d) tensor-square array."""
        return np.einsum("pqk,k->pq", self.D, self.unit_coords)

    # tensor-square helpers -------------------------------------------------

    def t2_mult(self, T, U):
        return np.einsum("pq,rs,prm,qsn->mn", T, U, self.c, self.c, optimize=True)

    def t2_star(self, T):
        return np.einsum("pa,qb,ab->pq", self.star, self.star, T.conj(), optimize=True)

    # linear-map views ------------------------------------------------------

    @cached_property
    def tensor_square(self):
        return tensor(self.algebra, self.algebra)

    def coproduct_map(self):
        """Coproduct as a LinearMap into the canonical tensor-square algebra."""
        d = self.dim
        P = tensor_permutation(self.algebra, self.algebra)
        return LinearMap(self.algebra, self.tensor_square, P @ self.D.reshape(d * d, d))

    def counit_map(self):
        return LinearMap(self.algebra, MultiMatrixAlgebra((1,)), self.eps.reshape(1, -1))

    def antipode_map(self):
        return LinearMap(self.algebra, self.algebra, self.S)

    # elementwise operations ------------------------------------------------

    def apply_antipode(self, x):
        return self.algebra.from_coords(self.S @ x.coords)

    def counital_target_matrix(self):
        """Matrix of eps_t: q -> q_(1) S(q_(2))."""
        return np.einsum("pqi,sq,pst->ti", self.D, self.S, self.c, optimize=True)

    def counital_target(self, q):
        return self.algebra.from_coords(self.counital_target_matrix() @ q.coords)


# -- verifiers ---------------------------------------------------------------


def verify_coassociativity(W, tol=DEFAULT_TOL):
    lhs = np.einsum("pqm,mri->pqri", W.D, W.D, optimize=True)
    rhs = np.einsum("pmi,qrm->pqri", W.D, W.D, optimize=True)
    res = float(np.abs(lhs - rhs).max())
    return CheckResult("coassociativity", res <= tol, res)


def verify_coproduct_star_hom(W, tol=DEFAULT_TOL):
    d = W.dim
    # Delta(e_i e_j) vs Delta(e_i) Delta(e_j)
    lhs = np.einsum("ijk,pqk->pqij", W.c, W.D, optimize=True)
    rhs = np.einsum("abi,cdj,acm,bdn->mnij", W.D, W.D, W.c, W.c, optimize=True)
    res_mult = float(np.abs(lhs - rhs).max())
    # Delta(e_i*) vs Delta(e_i)*
    star_img = np.einsum("pqk,ki->pqi", W.D, W.star)  # Delta(e_i^*) (real perm star)
    star_of = np.einsum("pa,qb,abi->pqi", W.star, W.star, W.D.conj(), optimize=True)
    res_star = float(np.abs(star_img - star_of).max())
    res = max(res_mult, res_star)
    return CheckResult("coproduct *-homomorphism", res <= tol, res)


def verify_counit_compatibility(W, tol=DEFAULT_TOL):
    """(eps x id) Delta = id = (id x eps) Delta."""
    left = np.einsum("pqi,p->qi", W.D, W.eps)
    right = np.einsum("pqi,q->pi", W.D, W.eps)
    eye = np.eye(W.dim)
    res = float(max(np.abs(left - eye).max(), np.abs(right - eye).max()))
    return CheckResult("counit compatibility", res <= tol, res)


def verify_weak_axioms(W, tol=DEFAULT_TOL):
    """The three weak axioms: Delta(1l) a projection; weak counit
    factorization; weak antipode identity."""
    T1 = W.delta_unit
    r1 = float(np.abs(W.t2_mult(T1, T1) - T1).max())
    r1 = max(r1, float(np.abs(W.t2_star(T1) - T1).max()))
    ax1 = CheckResult("weak axiom: Delta(1l) projection", r1 <= tol, r1)

    # eps(qp) = eps(q 1_(1)) eps(1_(2) p) on basis pairs
    lhs = np.einsum("ijk,k->ij", W.c, W.eps)
    rhs = np.einsum("pq,ipa,a,qjb,b->ij", T1, W.c, W.eps, W.c, W.eps, optimize=True)
    r2 = float(np.abs(lhs - rhs).max())
    ax2 = CheckResult("weak axiom: counit factorization", r2 <= tol, r2)

    # S(q_(1)) q_(2) x q_(3) = (1l x q) Delta(1l)
    D3 = np.einsum("pqm,mri->pqri", W.D, W.D, optimize=True)
    lhs3 = np.einsum("pqri,sp,sqt->tri", D3, W.S, W.c, optimize=True)
    rhs3 = np.einsum("pq,iqt->pti", T1, W.c, optimize=True)
    r3 = float(np.abs(lhs3 - rhs3).max())
    ax3 = CheckResult("weak axiom: antipode identity", r3 <= tol, r3)
    return [ax1, ax2, ax3]


def verify_antipode(W, tol=DEFAULT_TOL):
    """Anti-homomorphism, anti-cohomomorphism, and S^-1(q) = S(q*)*."""
    d = W.dim
    if np.linalg.matrix_rank(W.S, tol=1e-10) < d:
        raise InvalidAlgebraError("antipode matrix is singular")
    # S(e_i e_j) = S(e_j) S(e_i)
    lhs = np.einsum("ijk,tk->tij", W.c, W.S, optimize=True)
    rhs = np.einsum("pj,qi,pqt->tij", W.S, W.S, W.c, optimize=True)
    r1 = float(np.abs(lhs - rhs).max())
    c1 = CheckResult("antipode anti-homomorphism", r1 <= tol, r1)
    # (S x S) Delta = flip Delta S
    lhs2 = np.einsum("pqi,ap,bq->abi", W.D, W.S, W.S, optimize=True)
    rhs2 = np.einsum("pqk,ki->qpi", W.D, W.S, optimize=True)
    r2 = float(np.abs(lhs2 - rhs2).max())
    c2 = CheckResult("antipode anti-cohomomorphism", r2 <= tol, r2)
    # S^-1(q) = S(q*)*: equivalently star . S . star . S = id
    comp = W.star @ (W.S @ (W.star @ W.S.conj())).conj()
    r3 = float(np.abs(comp - np.eye(d)).max())
    c3 = CheckResult("antipode inverted by star", r3 <= tol, r3)
    return [c1, c2, c3]


def verify_counit_positivity(W, tol=DEFAULT_TOL):
    """The form (q, p) -> eps(q* p) is positive semidefinite."""
    d = W.dim
    G = np.einsum("pi,pjk,k->ij", W.star.conj(), W.c, W.eps, optimize=True)
    # G[i,j] = eps(e_i^* e_j); star of basis is a real permutation
    G = 0.5 * (G + G.conj().T)
    lam = float(np.linalg.eigvalsh(G).min())
    return CheckResult("counit positivity", lam >= -tol, max(0.0, -lam))


def full_verify(W, tol=DEFAULT_TOL):
    """Run every structural check; returns the list of CheckResults."""
    out = [
        verify_coassociativity(W, tol),
        verify_coproduct_star_hom(W, tol),
        verify_counit_compatibility(W, tol),
    ]
    out += verify_weak_axioms(W, tol)
    out += verify_antipode(W, tol)
    out.append(verify_counit_positivity(W, tol))
    return out


@dataclass(frozen=True)
class ClassificationReport:
    is_coassociative: bool
    is_star_hom: bool
    weak_axioms: tuple          # three booleans
    true_axioms: tuple          # three booleans
    verdict: str                # "True" | "Weak" | "Invalid"
    residuals: dict

    def __str__(self):
        return f"verdict {self.verdict} (true axioms {self.true_axioms})"


def classify(W, tol=DEFAULT_TOL):
    """Decide True Hopf vs Weak Hopf vs Invalid.

    When the weak axioms hold, the three strengthened axioms are equivalent;
    this coherence is asserted.
    """
    coass = verify_coassociativity(W, tol)
    shom = verify_coproduct_star_hom(W, tol)
    weak = verify_weak_axioms(W, tol)
    residuals = {r.name: r.residual for r in [coass, shom] + weak}

    T1 = W.delta_unit
    unit2 = np.outer(W.unit_coords, W.unit_coords)
    t1 = float(np.abs(T1 - unit2).max())
    lhs = np.einsum("ijk,k->ij", W.c, W.eps)
    t2 = float(np.abs(lhs - np.outer(W.eps, W.eps)).max())
    st = np.einsum("pqi,sp,sqt->ti", W.D, W.S, W.c, optimize=True)
    t3 = float(np.abs(st - np.outer(W.unit_coords, W.eps)).max())
    true_flags = (t1 <= tol, t2 <= tol, t3 <= tol)
    residuals.update({"true: Delta(1l)=1x1": t1, "true: eps multiplicative": t2,
                      "true: antipode convolution": t3})

    weak_ok = coass.passed and shom.passed and all(w.passed for w in weak)
    if not weak_ok:
        verdict = "Invalid"
    else:
        if len(set(true_flags)) != 1:
            raise AssertionError(
                f"classification incoherence: true-axiom flags disagree {true_flags}"
            )
        verdict = "True" if all(true_flags) else "Weak"
    return ClassificationReport(coass.passed, shom.passed,
                                tuple(w.passed for w in weak), true_flags,
                                verdict, residuals)


def antipode_square_conjugator(W, rng=None, tol=DEFAULT_TOL):
    """Invertible g with S^2(q) = g q g^-1, or None if no invertible solution.

    Solves the linear system S^2(e_i) g - g e_i = 0 over g in the algebra and
    searches the solution space for a well-conditioned invertible element.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    A = W.algebra
    S2 = W.S @ W.S
    rows = []
    for i in range(A.dim):
        s2e = A.from_coords(S2[:, i])
        rows.append(A.left_mult_matrix(s2e) - A.right_mult_matrix(A.basis_element(i)))
    ns = nullspace(np.vstack(rows))
    if ns.shape[1] == 0:
        return None
    for _ in range(40):
        coeff = rng.standard_normal(ns.shape[1]) + 1j * rng.standard_normal(ns.shape[1])
        g = A.from_coords(ns @ coeff)
        try:
            ginv_blocks = [np.linalg.inv(b) for b in g.blocks]
        except np.linalg.LinAlgError:
            continue
        if max(np.linalg.cond(b) for b in g.blocks) > 1e8:
            continue
        ginv = A.element(ginv_blocks)
        ok = all(
            (A.from_coords(S2[:, i]) - g * A.basis_element(i) * ginv).norm() <= 100 * tol
            for i in range(A.dim)
        )
        if ok:
            return g
    return None


# -- transport and constructors ---------------------------------------------


def transport_structure(D, eps, S, iso, iso_inv=None):
    """Push coproduct/counit/antipode tensors through a basis change
    (iso: old coords -> new coords)."""
    if iso_inv is None:
        iso_inv = np.linalg.inv(iso)
    Dn = np.einsum("pa,qb,abc,ck->pqk", iso, iso, D, iso_inv, optimize=True)
    en = eps @ iso_inv
    Sn = iso @ S @ iso_inv
    return Dn, en, Sn


def _validate_group_table(table):
    table = np.asarray(table, dtype=int)
    n = table.shape[0]
    if table.shape != (n, n):
        raise InvalidAlgebraError("multiplication table must be square")
    # unit
    unit = None
    for e in range(n):
        if all(table[e, g] == g and table[g, e] == g for g in range(n)):
            unit = e
            break
    if unit is None:
        raise InvalidAlgebraError("table has no unit")
    # associativity and inverses
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if table[table[a, b], c] != table[a, table[b, c]]:
                    raise InvalidAlgebraError("non-associative table")
    inv = [None] * n
    for g in range(n):
        for h in range(n):
            if table[g, h] == unit and table[h, g] == unit:
                inv[g] = h
        if inv[g] is None:
            raise InvalidAlgebraError(f"element {g} has no inverse")
    return table, unit, inv


def group_algebra(table, rng=None):
    """Weak (in fact true) Hopf algebra C[G] with Delta g = g x g, S g = g^-1,
    eps g = 1, brought to multimatrix form."""
    table, unit, inv = _validate_group_table(table)
    n = table.shape[0]
    c = np.zeros((n, n, n), dtype=complex)
    star = np.zeros((n, n))
    D = np.zeros((n, n, n), dtype=complex)
    S = np.zeros((n, n))
    eps = np.ones(n, dtype=complex)
    for g in range(n):
        for h in range(n):
            c[g, h, table[g, h]] = 1.0
        star[inv[g], g] = 1.0
        S[inv[g], g] = 1.0
        D[g, g, g] = 1.0
    M, iso = wedderburn_decompose(c, star, rng=rng)
    Dn, en, Sn = transport_structure(D, eps, S, iso)
    return WeakHopfAlgebra(M, Dn, en, Sn)


def function_algebra(table):
    """Functions on a finite group: pointwise product (already multimatrix
    C^n), convolution coproduct, eps = evaluation at the unit, S f = f(.^-1)."""
    table, unit, inv = _validate_group_table(table)
    n = table.shape[0]
    M = MultiMatrixAlgebra((1,) * n)
    D = np.zeros((n, n, n), dtype=complex)
    S = np.zeros((n, n))
    eps = np.zeros(n, dtype=complex)
    for g in range(n):
        S[inv[g], g] = 1.0
        for h in range(n):
            D[g, h, table[g, h]] = 1.0  # Delta(delta_k) = sum_{gh=k} d_g x d_h
    eps[unit] = 1.0
    return WeakHopfAlgebra(M, D, eps, S)


class Groupoid:
    """A finite groupoid given by objects, morphism (source, target) data and
    a composition table.  Morphisms are indices 0..m-1."""

    def __init__(self, objects, source, target, compose, identities):
        self.objects = list(objects)
        self.source = list(source)
        self.target = list(target)
        self.compose = dict(compose)  # (g, h) -> g.h when target(h) == source(g)
        self.identities = list(identities)  # per object, the identity morphism
        self._validate()

    @property
    def num_morphisms(self):
        return len(self.source)

    def _validate(self):
        m = self.num_morphisms
        for (g, h), k in self.compose.items():
            if self.source[g] != self.target[h]:
                raise InvalidAlgebraError("composite defined for non-composable pair")
            if self.source[k] != self.source[h] or self.target[k] != self.target[g]:
                raise InvalidAlgebraError("composite has wrong endpoints")
        for g in range(m):
            for h in range(m):
                if self.source[g] == self.target[h] and (g, h) not in self.compose:
                    raise InvalidAlgebraError("missing composite")
        for x, e in zip(self.objects, self.identities):
            if self.source[e] != x or self.target[e] != x:
                raise InvalidAlgebraError("bad identity morphism")
        # units and associativity
        for g in range(m):
            if self.compose[(g, self.identities[self.source[g]])] != g:
                raise InvalidAlgebraError("identity fails on the right")
            if self.compose[(self.identities[self.target[g]], g)] != g:
                raise InvalidAlgebraError("identity fails on the left")
        for g in range(m):
            for h in range(m):
                if (g, h) not in self.compose:
                    continue
                for k in range(m):
                    if (h, k) not in self.compose:
                        continue
                    if self.compose[(self.compose[(g, h)], k)] != self.compose[(g, self.compose[(h, k)])]:
                        raise InvalidAlgebraError("non-associative composition")
        # inverses
        self.inverse = [None] * m
        for g in range(m):
            for h in range(m):
                if (self.source[h] == self.target[g] and self.source[g] == self.target[h]
                        and self.compose.get((h, g)) == self.identities[self.source[g]]
                        and self.compose.get((g, h)) == self.identities[self.target[g]]):
                    self.inverse[g] = h
            if self.inverse[g] is None:
                raise InvalidAlgebraError(f"morphism {g} has no inverse")

    @staticmethod
    def pair(n):
        """The pair groupoid on n objects; its algebra is Mat_n."""
        morphs = [(i, j) for i in range(n) for j in range(n)]  # morphism j -> i
        idx = {m: k for k, m in enumerate(morphs)}
        source = [j for (i, j) in morphs]
        target = [i for (i, j) in morphs]
        compose = {}
        for (i, j) in morphs:
            for (k, l) in morphs:
                if j == k:  # (i<-j) . (j<-l)
                    compose[(idx[(i, j)], idx[(k, l)])] = idx[(i, l)]
        identities = [idx[(i, i)] for i in range(n)]
        return Groupoid(list(range(n)), source, target, compose, identities)


def groupoid_algebra(gpd, rng=None):
    """Groupoid algebra with Delta g = g x g, eps = 1, S g = g^-1.

    Genuinely weak whenever the groupoid has more than one object:
    Delta(1l) = sum_x id_x x id_x is then a proper projection.
    """
    m = gpd.num_morphisms
    c = np.zeros((m, m, m), dtype=complex)
    star = np.zeros((m, m))
    D = np.zeros((m, m, m), dtype=complex)
    S = np.zeros((m, m))
    eps = np.ones(m, dtype=complex)
    for g in range(m):
        star[gpd.inverse[g], g] = 1.0
        S[gpd.inverse[g], g] = 1.0
        D[g, g, g] = 1.0
        for h in range(m):
            if (g, h) in gpd.compose:
                c[g, h, gpd.compose[(g, h)]] = 1.0
    M, iso = wedderburn_decompose(c, star, rng=rng)
    Dn, en, Sn = transport_structure(D, eps, S, iso)
    return WeakHopfAlgebra(M, Dn, en, Sn)


def cyclic_group_table(n):
    return np.fromfunction(lambda i, j: (i + j) % n, (n, n), dtype=int)


def symmetric_group_table(n):
    perms = list(itertools.permutations(range(n)))
    idx = {p: i for i, p in enumerate(perms)}
    table = np.zeros((len(perms), len(perms)), dtype=int)
    for p in perms:
        for q in perms:
            table[idx[p], idx[q]] = idx[tuple(p[q[i]] for i in range(n))]
    return table
