"""Finite-dimensional C* algebras as direct sums of complex matrix rings.

Everything downstream (Hopf structures, towers, crossed products) reduces to
dense linear algebra over the canonical matrix-unit basis fixed here:
block-major, then row-major within each block.  Coordinates of an element are
the stacked row-major entries of its blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

DEFAULT_TOL = 1e-9


class AlgebraError(Exception):
    pass


class OwnerMismatchError(AlgebraError):
    """Raised when elements of different algebras are combined."""


class InvalidAlgebraError(AlgebraError):
    """Raised when input data does not define a C*-able algebra."""


def _as_blocks(sizes):
    sizes = tuple(int(n) for n in sizes)
    if len(sizes) < 1 or any(n < 1 for n in sizes):
        raise InvalidAlgebraError(f"bad block sizes {sizes}")
    return sizes


@dataclass(frozen=True)
class MultiMatrixAlgebra:
    """Direct sum of full matrix rings Mat_{n_1} + ... + Mat_{n_k}."""

    block_sizes: tuple
    labels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "block_sizes", _as_blocks(self.block_sizes))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != len(self.block_sizes):
                raise InvalidAlgebraError("one label per block required")

    @property
    def num_blocks(self):
        return len(self.block_sizes)

    @cached_property
    def dim(self):
        return int(sum(n * n for n in self.block_sizes))

    @cached_property
    def block_offsets(self):
        offs = np.cumsum([0] + [n * n for n in self.block_sizes])
        return tuple(int(o) for o in offs[:-1])

    def basis_index(self, block, row, col):
        n = self.block_sizes[block]
        return self.block_offsets[block] + row * n + col

    def index_triple(self, k):
        """Inverse of basis_index."""
        for i, n in enumerate(self.block_sizes):
            off = self.block_offsets[i]
            if k < off + n * n:
                r, c = divmod(k - off, n)
                return i, r, c
        raise IndexError(k)

    # -- element construction ------------------------------------------------

    def element(self, blocks):
        return AlgebraElement(self, blocks)

    def zero(self):
        return AlgebraElement(
            self, [np.zeros((n, n), dtype=complex) for n in self.block_sizes]
        )

    def unit(self):
        return AlgebraElement(
            self, [np.eye(n, dtype=complex) for n in self.block_sizes]
        )

    def from_coords(self, v):
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.shape != (self.dim,):
            raise AlgebraError(f"coordinate vector has length {len(v)}, need {self.dim}")
        blocks = []
        for i, n in enumerate(self.block_sizes):
            off = self.block_offsets[i]
            blocks.append(v[off:off + n * n].reshape(n, n))
        return AlgebraElement(self, blocks)

    def basis_element(self, k):
        v = np.zeros(self.dim, dtype=complex)
        v[k] = 1.0
        return self.from_coords(v)

    def matrix_unit(self, block, row, col):
        return self.basis_element(self.basis_index(block, row, col))

    def basis(self):
        return [self.basis_element(k) for k in range(self.dim)]

    def random_element(self, rng):
        v = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
        return self.from_coords(v)

    def random_selfadjoint(self, rng):
        a = self.random_element(rng)
        return (a + a.adjoint()) * 0.5

    # -- structure data ------------------------------------------------------

    @cached_property
    def structure_constants(self):
        """c[i, j, :] = coords of (basis_i * basis_j)."""
        d = self.dim
        c = np.zeros((d, d, d), dtype=complex)
        for i in range(d):
            bi, ri, ci = self.index_triple(i)
            for j in range(d):
                bj, rj, cj = self.index_triple(j)
                if bi == bj and ci == rj:
                    c[i, j, self.basis_index(bi, ri, cj)] = 1.0
        return c

    @cached_property
    def star_permutation(self):
        """Permutation P with coords(x*) = P @ conj(coords(x))."""
        d = self.dim
        P = np.zeros((d, d))
        for k in range(d):
            b, r, c = self.index_triple(k)
            P[self.basis_index(b, c, r), k] = 1.0
        return P

    def left_mult_matrix(self, a):
        """Matrix of x -> a x on coordinates."""
        cols = [(a * self.basis_element(k)).coords for k in range(self.dim)]
        return np.column_stack(cols)

    def right_mult_matrix(self, a):
        cols = [(self.basis_element(k) * a).coords for k in range(self.dim)]
        return np.column_stack(cols)

    def __repr__(self):
        return f"MultiMatrixAlgebra{list(self.block_sizes)}"


class AlgebraElement:
    """Element of a MultiMatrixAlgebra, stored blockwise."""

    __slots__ = ("owner", "blocks")

    def __init__(self, owner, blocks):
        blocks = [np.asarray(b, dtype=complex) for b in blocks]
        if len(blocks) != owner.num_blocks:
            raise AlgebraError("wrong number of blocks")
        for b, n in zip(blocks, owner.block_sizes):
            if b.shape != (n, n):
                raise AlgebraError(f"block of shape {b.shape}, expected ({n},{n})")
        self.owner = owner
        self.blocks = blocks

    @property
    def coords(self):
        return np.concatenate([b.reshape(-1) for b in self.blocks])

    def _check(self, other):
        if self.owner != other.owner:
            raise OwnerMismatchError("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.owner, [x + y for x, y in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.owner, [x - y for x, y in zip(self.blocks, other.blocks)])

    def __mul__(self, other):
        if np.isscalar(other):
            return AlgebraElement(self.owner, [x * other for x in self.blocks])
        self._check(other)
        return AlgebraElement(self.owner, [x @ y for x, y in zip(self.blocks, other.blocks)])

    def __rmul__(self, scalar):
        return self.__mul__(scalar)

    def __neg__(self):
        return self * (-1.0)

    def adjoint(self):
        return AlgebraElement(self.owner, [b.conj().T for b in self.blocks])

    def norm(self):
        return float(np.linalg.norm(self.coords))

    def is_close(self, other, tol=DEFAULT_TOL):
        self._check(other)
        return (self - other).norm() <= tol

    def min_eigenvalue(self):
        """Smallest eigenvalue over all blocks (element assumed self-adjoint)."""
        return min(float(np.linalg.eigvalsh(0.5 * (b + b.conj().T)).min()) for b in self.blocks)

    def __repr__(self):
        return f"AlgebraElement({self.owner}, norm={self.norm():.3g})"


def multiply(a, b):
    """Blockwise product; raises OwnerMismatchError on owner mismatch."""
    return a * b


@dataclass(frozen=True)
class LinearMap:
    """Linear map between multimatrix algebras, as a dense matrix over the
    canonical bases (shape dim(target) x dim(source))."""

    source: MultiMatrixAlgebra
    target: MultiMatrixAlgebra
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.target.dim, self.source.dim):
            raise AlgebraError(
                f"matrix shape {m.shape}, expected ({self.target.dim},{self.source.dim})"
            )
        object.__setattr__(self, "matrix", m)

    def __call__(self, x):
        if x.owner != self.source:
            raise OwnerMismatchError("element not in source algebra")
        return self.target.from_coords(self.matrix @ x.coords)

    def compose(self, other):
        """self after other."""
        if other.target != self.source:
            raise AlgebraError("composition mismatch")
        return LinearMap(other.source, self.target, self.matrix @ other.matrix)

    @staticmethod
    def identity(A):
        return LinearMap(A, A, np.eye(A.dim))


@dataclass(frozen=True)
class TraceState:
    """Trace functional given by a positive weight per block (the trace of a
    minimal projection in that block)."""

    owner: MultiMatrixAlgebra
    weights: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if len(w) != self.owner.num_blocks or any(x <= 0 for x in w):
            raise AlgebraError("need one positive weight per block")
        object.__setattr__(self, "weights", w)

    def __call__(self, x):
        if x.owner != self.owner:
            raise OwnerMismatchError("element not in trace domain")
        return complex(sum(w * np.trace(b) for w, b in zip(self.weights, x.blocks)))

    @property
    def is_normalized(self):
        total = sum(w * n for w, n in zip(self.weights, self.owner.block_sizes))
        return abs(total - 1.0) <= 1e-12

    def normalized(self):
        total = sum(w * n for w, n in zip(self.weights, self.owner.block_sizes))
        return TraceState(self.owner, tuple(w / total for w in self.weights))

    @cached_property
    def metric(self):
        """Diagonal of the inner product <x,y> = tau(x* y) on the canonical basis."""
        diag = np.zeros(self.owner.dim)
        for k in range(self.owner.dim):
            b, _, _ = self.owner.index_triple(k)
            diag[k] = self.weights[b]
        return diag

    def inner(self, x, y):
        return complex(np.vdot(x.coords * self.metric, y.coords))

    @staticmethod
    def hilbert_schmidt(A):
        return TraceState(A, (1.0,) * A.num_blocks)

    @staticmethod
    def normalized_hs(A):
        return TraceState.hilbert_schmidt(A).normalized()


# -- tensor products ---------------------------------------------------------


def tensor(A, B):
    """Tensor product algebra with blocks n_i * m_j in lexicographic block
    order; use tensor_index/tensor_elem for the element-level product."""
    sizes = [n * m for n in A.block_sizes for m in B.block_sizes]
    return MultiMatrixAlgebra(tuple(sizes))


def tensor_index(A, B, p, q):
    """Index in tensor(A, B)'s canonical basis of (matrix unit p) x (matrix unit q)."""
    T = tensor(A, B)
    i, a, b = A.index_triple(p)
    j, c, d = B.index_triple(q)
    m = B.block_sizes[j]
    block = i * B.num_blocks + j
    return T.basis_index(block, a * m + c, b * m + d)


def tensor_permutation(A, B):
    """Permutation matrix mapping the pair-flat ordering (p, q) -> p*dimB + q
    to the canonical basis ordering of tensor(A, B)."""
    dA, dB = A.dim, B.dim
    P = np.zeros((dA * dB, dA * dB))
    for p in range(dA):
        for q in range(dB):
            P[tensor_index(A, B, p, q), p * dB + q] = 1.0
    return P


def tensor_elem(a, b):
    """Element-level tensor product: satisfies (a x b)(c x d) = ac x bd."""
    A, B = a.owner, b.owner
    T = tensor(A, B)
    blocks = [np.kron(x, y) for x in a.blocks for y in b.blocks]
    return T.element(blocks)


# -- center ------------------------------------------------------------------


def center(A):
    """Basis of the center: the block identity elements."""
    out = []
    for i, n in enumerate(A.block_sizes):
        blocks = [
            np.eye(m, dtype=complex) if j == i else np.zeros((m, m), dtype=complex)
            for j, m in enumerate(A.block_sizes)
        ]
        out.append(A.element(blocks))
    return out


def minimal_central_projections(A):
    """Minimal central projections, one per block, summing to the unit."""
    return center(A)


# -- subalgebras -------------------------------------------------------------


def nullspace(M, atol=1e-9, rcond=1e-11):
    """Orthonormal nullspace basis with an *absolute* singular-value cutoff.

    ``scipy.linalg.null_space`` thresholds relative to the largest singular
    value, which misreads a near-zero constraint matrix (e.g. the commutator
    system of a commutative algebra) as full rank.  Here anything below
    ``max(atol, rcond * s_max)`` counts as zero.
    """
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if M.size == 0:
        return np.eye(M.shape[1], dtype=complex)
    # full V is only needed when the matrix is wide (m < n)
    _, s, vh = np.linalg.svd(M, full_matrices=M.shape[0] < M.shape[1])
    cut = max(atol, rcond * (s[0] if len(s) else 1.0))
    keep = int((s > cut).sum())
    return vh[keep:].conj().T


def _orthonormal_span(columns, tol=1e-10):
    """Orthonormal basis (columns) of the span of the given coordinate columns."""
    M = np.column_stack(columns) if columns else np.zeros((0, 0))
    if M.size == 0:
        return M
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    keep = s > tol * max(1.0, s[0] if len(s) else 1.0)
    return u[:, keep]


class Subalgebra:
    """*-closed subalgebra of a multimatrix algebra, stored as an orthonormal
    coordinate basis of its span (Hilbert-Schmidt inner product)."""

    def __init__(self, ambient, basis_matrix):
        self.ambient = ambient
        self.basis_matrix = np.asarray(basis_matrix, dtype=complex)

    @property
    def dim(self):
        return self.basis_matrix.shape[1]

    def basis_elements(self):
        return [self.ambient.from_coords(self.basis_matrix[:, k]) for k in range(self.dim)]

    def contains(self, x, tol=DEFAULT_TOL):
        v = x.coords
        proj = self.basis_matrix @ (self.basis_matrix.conj().T @ v)
        return bool(np.linalg.norm(proj - v) <= tol * max(1.0, np.linalg.norm(v)))

    def project_coords(self, v):
        return self.basis_matrix @ (self.basis_matrix.conj().T @ v)

    def coords_in_basis(self, x):
        """Coefficients of x over the stored orthonormal basis."""
        return self.basis_matrix.conj().T @ x.coords

    @classmethod
    def from_elements(cls, ambient, elements, tol=1e-10):
        cols = [e.coords for e in elements]
        return cls(ambient, _orthonormal_span(cols, tol))

    def unit(self, tol=1e-8):
        """The unit of the subalgebra itself (may differ from the ambient unit)."""
        els = self.basis_elements()
        rows = []
        rhs = []
        for s in els:
            rows.append(np.column_stack([(b * s).coords for b in els]))
            rhs.append(s.coords)
            rows.append(np.column_stack([(s * b).coords for b in els]))
            rhs.append(s.coords)
        Amat = np.vstack(rows)
        bvec = np.concatenate(rhs)
        sol, *_ = np.linalg.lstsq(Amat, bvec, rcond=None)
        u = self.ambient.zero()
        for c, b in zip(sol, els):
            u = u + c * b
        resid = max(((u * s) - s).norm() + ((s * u) - s).norm() for s in els)
        if resid > tol * max(1.0, max(s.norm() for s in els)):
            raise InvalidAlgebraError("subalgebra has no unit (not an algebra?)")
        return u


def generate_star_subalgebra(gens, ambient=None):
    """Smallest *-closed algebra span containing the generators.

    Empty generator lists yield the scalar multiples of the ambient unit;
    in that case `ambient` must be given.
    """
    if not gens:
        if ambient is None:
            raise AlgebraError("ambient required for empty generator list")
        return Subalgebra.from_elements(ambient, [ambient.unit()])
    ambient = gens[0].owner
    for g in gens:
        if g.owner != ambient:
            raise OwnerMismatchError("generators have different owners")
    seed = list(gens) + [g.adjoint() for g in gens]
    span = _orthonormal_span([g.coords for g in seed])
    while True:
        els = [ambient.from_coords(span[:, k]) for k in range(span.shape[1])]
        cols = [span[:, k] for k in range(span.shape[1])]
        for x in els:
            for y in els:
                cols.append((x * y).coords)
        new_span = _orthonormal_span(cols)
        if new_span.shape[1] == span.shape[1]:
            return Subalgebra(ambient, new_span)
        span = new_span


def relative_commutant(S, B):
    """All b in B commuting with every element of S (a Subalgebra or a list of
    elements of B).  Solved as the nullspace of the commutator system."""
    if isinstance(S, Subalgebra):
        els = S.basis_elements()
    else:
        els = list(S)
    if not els:
        return Subalgebra(B, np.eye(B.dim, dtype=complex))
    rows = []
    for s in els:
        rows.append(B.left_mult_matrix(s) - B.right_mult_matrix(s))
    M = np.vstack(rows)
    ns = nullspace(M)
    return Subalgebra(B, ns)


def conditional_expectation(B, A, tau):
    """Trace-orthogonal projection of B onto the subalgebra A.

    A may be a Subalgebra of B or a LinearMap embedding another algebra into B.
    Returns a LinearMap B -> B whose image is A.
    """
    if isinstance(A, LinearMap):
        W = _orthonormal_span([A.matrix[:, k] for k in range(A.source.dim)])
    elif isinstance(A, Subalgebra):
        W = A.basis_matrix
    else:
        W = _orthonormal_span([a.coords for a in A])
    m = tau.metric
    if np.any(m <= 0):
        raise AlgebraError("trace not faithful")
    # orthogonal projection w.r.t. <x,y> = tau(x* y) = conj(x).M.y
    G = W.conj().T @ (m[:, None] * W)
    P = W @ np.linalg.solve(G, W.conj().T * m[None, :])
    return LinearMap(B, B, P)


# -- Wedderburn decomposition -----------------------------------------------


def _cluster(vals, gap):
    """Group sorted real values into clusters separated by more than gap."""
    order = np.argsort(vals)
    clusters = [[order[0]]]
    for idx in order[1:]:
        if vals[idx] - vals[clusters[-1][-1]] <= gap:
            clusters[-1].append(idx)
        else:
            clusters.append([idx])
    return clusters


def _spectral_projections_within(x, support, gap=1e-6):
    """Spectral projections of a self-adjoint element inside the range of the
    projection `support` (x = support x support assumed).  The orthogonal
    complement of the support is shifted far away and discarded."""
    A = x.owner
    shift = 3.0 + 2.0 * max(np.abs(np.linalg.eigvalsh(b)).max(initial=0.0) for b in x.blocks)
    y = x - shift * (A.unit() - support)
    projs = _spectral_projections(y, gap)
    if projs is None:
        return None
    kept = [q for q in projs if (q * support).norm() > 1e-6]
    return kept


def _spectral_projections(x, gap=1e-6):
    """Spectral projections of a self-adjoint element, or None on near-degeneracy
    at cluster boundaries."""
    A = x.owner
    evals = []
    evecs = []
    for b in x.blocks:
        w, v = np.linalg.eigh(0.5 * (b + b.conj().T))
        evals.append(w)
        evecs.append(v)
    allvals = np.concatenate(evals)
    clusters = _cluster(allvals, gap)
    # reject if any two clusters are closer than 10*gap (ambiguous split)
    reps = sorted(np.mean(allvals[c]) for c in clusters)
    for u, v in zip(reps, reps[1:]):
        if v - u < 10 * gap:
            return None
    projs = []
    for cl in clusters:
        rep = np.mean(allvals[cl])
        blocks = []
        for w, v in zip(evals, evecs):
            sel = np.abs(w - rep) <= 5 * gap
            V = v[:, sel]
            blocks.append(V @ V.conj().T)
        projs.append(A.element(blocks))
    return projs


def decompose_subalgebra(sub, rng=None, tol=1e-8, max_tries=12):
    """Bring a *-closed subalgebra into multimatrix form.

    Returns (M, to_abstract, from_abstract): M a MultiMatrixAlgebra and a pair
    of mutually inverse *-isomorphisms given as coordinate matrices between the
    subalgebra's ambient coordinates and M's canonical coordinates.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    ambient = sub.ambient
    k = sub.dim
    els = sub.basis_elements()
    unit = sub.unit()

    def random_sa(space):
        coeffs = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
        x = ambient.zero()
        for c, b in zip(coeffs, space.basis_elements()):
            x = x + c * b
        return 0.5 * (x + x.adjoint())

    zsub = relative_commutant(sub, ambient)
    # center = sub  intersect  commutant(sub): intersect spans
    M = np.hstack([sub.basis_matrix, -zsub.basis_matrix])
    ns = nullspace(M)
    cen_cols = [sub.basis_matrix @ ns[:k, j] for j in range(ns.shape[1])]
    cen = Subalgebra(ambient, _orthonormal_span(cen_cols))

    projs = None
    for _ in range(max_tries):
        z = random_sa(cen)
        z = unit * z * unit
        projs = _spectral_projections_within(z, unit)
        if projs is not None and len(projs) == cen.dim:
            break
        projs = None
    if projs is None:
        raise InvalidAlgebraError("failed to split the center (degenerate spectra)")

    block_sizes = []
    unit_data = []  # per central block: list of matrix units E_ab (ambient elements)
    for p in projs:
        # corner p S p
        corner_els = [p * e * p for e in els]
        corner = Subalgebra.from_elements(ambient, corner_els)
        n = int(round(np.sqrt(corner.dim)))
        if n * n != corner.dim:
            raise InvalidAlgebraError("corner dimension is not a perfect square")
        mus = None
        for _ in range(max_tries):
            y = p * random_sa(corner) * p
            sp = _spectral_projections_within(y, p)
            if sp is None or len(sp) != n:
                continue
            # partial isometries q_1 -> q_a
            y2 = p * random_sa(corner) * p
            ok = True
            units = {}
            w = [None] * n
            w[0] = sp[0]
            for a in range(1, n):
                t = sp[0] * y2 * sp[a]
                # polar: v = t (t* t)^(-1/2) restricted to support
                tt = (t.adjoint() * t)
                # invert on support via eigh per block
                inv_blocks = []
                for bb in tt.blocks:
                    wv, vv = np.linalg.eigh(0.5 * (bb + bb.conj().T))
                    inv = np.zeros_like(bb)
                    for lam, vec in zip(wv, vv.T):
                        if lam > 1e-12 * max(1.0, wv.max(initial=0.0)):
                            inv += (lam ** -0.5) * np.outer(vec, vec.conj())
                    inv_blocks.append(inv)
                root = ambient.element(inv_blocks)
                v = t * root
                # require v* v = sp[a] (full support), else retry
                if not (v.adjoint() * v).is_close(sp[a], 1e-7 * max(1.0, sp[a].norm())):
                    ok = False
                    break
                w[a] = v
            if not ok:
                continue
            for a in range(n):
                for b in range(n):
                    units[(a, b)] = w[a].adjoint() * w[b]
            mus = units
            break
        if mus is None:
            raise InvalidAlgebraError("failed to build matrix units (degenerate spectra)")
        block_sizes.append(n)
        unit_data.append(mus)

    M_alg = MultiMatrixAlgebra(tuple(block_sizes))
    # ambient-coords of the image of each canonical basis element of M_alg
    cols = []
    for i, mus in enumerate(unit_data):
        n = block_sizes[i]
        for a in range(n):
            for b in range(n):
                cols.append(mus[(a, b)].coords)
    from_abstract = np.column_stack(cols)  # ambient_dim x M.dim

    # to_abstract: x -> coefficients over the matrix units, via HS pairing
    # normalized by the ambient rank of the minimal projections of each block.
    rows = []
    idx = 0
    for i, mus in enumerate(unit_data):
        n = block_sizes[i]
        rank = float(np.real(np.sum(np.concatenate(
            [np.diagonal(bb).copy() for bb in mus[(0, 0)].blocks]))))
        for a in range(n):
            for b in range(n):
                rows.append(mus[(a, b)].coords.conj() / rank)
                idx += 1
    to_abstract = np.vstack(rows)  # M.dim x ambient_dim

    # sanity: mutually inverse on the subalgebra, unit to unit
    resid = np.linalg.norm(to_abstract @ from_abstract - np.eye(M_alg.dim))
    if resid > 1e-6:
        raise InvalidAlgebraError(f"decomposition inconsistent (residual {resid:.2e})")
    return M_alg, to_abstract, from_abstract


def structure_constants_of(elements, tol=1e-8):
    """Structure constants of a family of elements assumed to span a closed
    algebra; raises if products leave the span."""
    sub = Subalgebra.from_elements(elements[0].owner, elements)
    k = len(elements)
    c = np.zeros((k, k, k), dtype=complex)
    B = np.column_stack([e.coords for e in elements])
    for i in range(k):
        for j in range(k):
            v = (elements[i] * elements[j]).coords
            sol, res, *_ = np.linalg.lstsq(B, v, rcond=None)
            if np.linalg.norm(B @ sol - v) > tol * max(1.0, np.linalg.norm(v)):
                raise InvalidAlgebraError("family is not multiplicatively closed")
            c[i, j] = sol
    return c


def wedderburn_decompose(structure, star, rng=None, tol=1e-8):
    """Multimatrix form of an abstract *-algebra given by structure constants.

    `structure` is the cubic array c[i,j,k] with b_i b_j = sum_k c[i,j,k] b_k;
    `star` is the conjugate-linear involution matrix: coords(x*) = star @ conj(coords).
    Returns (M, iso) where iso is the coordinate matrix of a *-isomorphism onto
    M (abstract coords -> M coords).
    """
    c = np.asarray(structure, dtype=complex)
    d = c.shape[0]
    if c.shape != (d, d, d):
        raise InvalidAlgebraError("structure constants must be a cubic array")
    # associativity
    lhs = np.einsum("ijm,mkl->ijkl", c, c)
    rhs = np.einsum("jkm,iml->ijkl", c, c)
    if np.abs(lhs - rhs).max() > 1e-8:
        raise InvalidAlgebraError("non-associative structure constants")
    star = np.asarray(star, dtype=complex)
    inv = star @ star.conj()
    if np.abs(inv - np.eye(d)).max() > 1e-8:
        raise InvalidAlgebraError("star is not involutive")
    # left regular representation
    L = [c[i].T.copy() for i in range(d)]  # L[i][k,j]: coords of b_i b_j
    # canonical trace functional and GNS inner product <x,y> = phi(x* y)
    phi = np.array([np.trace(L[i]) for i in range(d)])
    starc = star.conj()

    def phi_of(v):
        return phi @ v

    G = np.zeros((d, d), dtype=complex)
    for i in range(d):
        si = star @ np.eye(d)[:, i].conj()
        for j in range(d):
            prod = np.einsum("p,q,pqk->k", si, np.eye(d)[:, j], c)
            G[i, j] = phi_of(prod)
    G = 0.5 * (G + G.conj().T)
    evals, evecs = np.linalg.eigh(G)
    if evals.min() < -1e-8 * max(1.0, evals.max()):
        raise InvalidAlgebraError("trace form not positive (no C* structure)")
    if evals.min() < 1e-10 * max(1.0, evals.max()):
        raise InvalidAlgebraError("degenerate trace form (non-semisimple input)")
    # orthonormalize: columns of C are GNS-orthonormal combinations
    C = evecs @ np.diag(evals ** -0.5)
    Cinv = np.diag(evals ** 0.5) @ evecs.conj().T
    ambient = MultiMatrixAlgebra((d,))
    rep_els = []
    for i in range(d):
        rep_els.append(ambient.element([Cinv @ L[i] @ C]))
    sub = Subalgebra.from_elements(ambient, rep_els)
    if sub.dim != d:
        raise InvalidAlgebraError("regular representation not faithful")
    M_alg, to_abs, _ = decompose_subalgebra(sub, rng=rng)
    rep_matrix = np.column_stack([e.coords for e in rep_els])  # ambient x d
    iso = to_abs @ rep_matrix  # abstract coords -> M coords
    return M_alg, iso
