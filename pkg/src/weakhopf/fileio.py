"""Textual file formats: algebras, weak Hopf data, inclusions, actions,
fusion rings.

All formats are line oriented UTF-8.  Floats are written with ``repr`` so a
parse/serialize/parse cycle reproduces the parsed value exactly; integers are
written as integers.  Parse errors carry the offending line number.
"""

from __future__ import annotations

import os

import numpy as np

from .algebra import MultiMatrixAlgebra
from .actions import Action
from .hopf import WeakHopfAlgebra
from .sectors import FusionRing
from .towers import Inclusion, make_inclusion


class ParseError(Exception):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class _Lines:
    """Token stream over non-blank, non-comment lines, tracking line numbers."""

    def __init__(self, text):
        self.items = []
        for no, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.strip()
            if stripped and not stripped.startswith("#"):
                self.items.append((no, stripped))
        self.pos = 0

    def peek(self):
        return self.items[self.pos][1] if self.pos < len(self.items) else None

    def next(self, what="line"):
        if self.pos >= len(self.items):
            last = self.items[-1][0] if self.items else 0
            raise ParseError(f"unexpected end of file, expected {what}", last)
        no, line = self.items[self.pos]
        self.pos += 1
        return no, line

    def expect(self, keyword):
        no, line = self.next(keyword)
        parts = line.split()
        if parts[0] != keyword:
            raise ParseError(f"expected '{keyword}', got '{parts[0]}'", no)
        return no, parts[1:]

    def done(self):
        if self.pos < len(self.items):
            no, line = self.items[self.pos]
            raise ParseError(f"trailing content '{line}'", no)


def _fmt(x: float) -> str:
    return repr(float(x))


def _parse_float(token, no):
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"bad number '{token}'", no) from None


def _fmt_entry(z: complex) -> str:
    return f"{_fmt(z.real)}:{_fmt(z.imag)}"


def _parse_entry(token, no) -> complex:
    parts = token.split(":")
    if len(parts) != 2:
        raise ParseError(f"bad entry '{token}' (want re:im)", no)
    return complex(_parse_float(parts[0], no), _parse_float(parts[1], no))


def _dump_matrix(rows):
    out = []
    for row in np.atleast_2d(np.asarray(rows, dtype=complex)):
        out.append(" ".join(_fmt_entry(z) for z in row))
    return out


def _parse_matrix(lines, nrows, ncols, what):
    mat = np.zeros((nrows, ncols), dtype=complex)
    for r in range(nrows):
        no, line = lines.next(f"{what} row {r}")
        tokens = line.split()
        if len(tokens) != ncols:
            raise ParseError(
                f"{what} row {r} has {len(tokens)} entries, expected {ncols}", no)
        mat[r] = [_parse_entry(t, no) for t in tokens]
    return mat


# -- algebra files -----------------------------------------------------------


def dump_algebra(alg: MultiMatrixAlgebra, name="A", elements=None) -> str:
    """`algebra <name>` / `blocks ...`, then optional named elements with one
    `block row col re im` line per nonzero entry."""
    out = [f"algebra {name}", "blocks " + " ".join(str(n) for n in alg.block_sizes)]
    for ename, el in (elements or {}).items():
        out.append(f"element {ename}")
        for k, z in enumerate(el.coords):
            if z != 0:
                b, r, c = alg.index_triple(k)
                out.append(f"{b} {r} {c} {_fmt(z.real)} {_fmt(z.imag)}")
    return "\n".join(out) + "\n"


def _parse_algebra_header(lines):
    no, args = lines.expect("algebra")
    name = args[0] if args else "A"
    no, args = lines.expect("blocks")
    try:
        sizes = tuple(int(t) for t in args)
    except ValueError:
        raise ParseError("block sizes must be integers", no) from None
    if not sizes or any(n <= 0 for n in sizes):
        raise ParseError("block sizes must be positive", no)
    return MultiMatrixAlgebra(sizes), name


def _parse_elements(lines, alg):
    elements = {}
    while lines.peek() is not None and lines.peek().startswith("element "):
        no, args = lines.expect("element")
        coords = np.zeros(alg.dim, dtype=complex)
        while lines.peek() is not None and lines.peek().split()[0].lstrip("-").isdigit():
            no, line = lines.next("entry")
            tok = line.split()
            if len(tok) != 5:
                raise ParseError("entry wants 'block row col re im'", no)
            b, r, c = (int(t) for t in tok[:3])
            if not (0 <= b < len(alg.block_sizes)) or not (
                    0 <= r < alg.block_sizes[b] and 0 <= c < alg.block_sizes[b]):
                raise ParseError(f"entry index out of range: {b} {r} {c}", no)
            k = alg.basis_index(b, r, c)
            coords[k] = complex(_parse_float(tok[3], no), _parse_float(tok[4], no))
        elements[args[0]] = alg.from_coords(coords)
    return elements


def load_algebra(text: str):
    lines = _Lines(text)
    alg, name = _parse_algebra_header(lines)
    elements = _parse_elements(lines, alg)
    lines.done()
    return alg, name, elements


# -- weak Hopf files ---------------------------------------------------------


def dump_whopf(W: WeakHopfAlgebra, name="Q") -> str:
    """Algebra header then `coproduct` (d^2 x d, rows indexed p*d+q),
    `counit` (1 x d) and `antipode` (d x d) dense sections."""
    d = W.algebra.dim
    out = [dump_algebra(W.algebra, name).rstrip("\n")]
    out.append("coproduct")
    out.extend(_dump_matrix(W.D.reshape(d * d, d)))
    out.append("counit")
    out.extend(_dump_matrix(W.eps.reshape(1, d)))
    out.append("antipode")
    out.extend(_dump_matrix(W.S))
    return "\n".join(out) + "\n"


def load_whopf(text: str):
    lines = _Lines(text)
    alg, name = _parse_algebra_header(lines)
    d = alg.dim
    lines.expect("coproduct")
    D = _parse_matrix(lines, d * d, d, "coproduct").reshape(d, d, d)
    lines.expect("counit")
    eps = _parse_matrix(lines, 1, d, "counit").reshape(d)
    lines.expect("antipode")
    S = _parse_matrix(lines, d, d, "antipode")
    lines.done()
    return WeakHopfAlgebra(alg, D, eps, S), name


# -- inclusion files ---------------------------------------------------------


def dump_inclusion(inc: Inclusion, name="A_in_B") -> str:
    out = [f"inclusion {name}",
           dump_algebra(inc.A, "A").rstrip("\n"),
           dump_algebra(inc.B, "B").rstrip("\n"),
           "embedding"]
    out.extend(_dump_matrix(inc.embed.matrix))
    return "\n".join(out) + "\n"


def load_inclusion(text: str):
    lines = _Lines(text)
    no, args = lines.expect("inclusion")
    name = args[0] if args else "A_in_B"
    A, _ = _parse_algebra_header(lines)
    B, _ = _parse_algebra_header(lines)
    lines.expect("embedding")
    emb = _parse_matrix(lines, B.dim, A.dim, "embedding")
    lines.done()
    return make_inclusion(A, B, emb), name


# -- action files ------------------------------------------------------------


def dump_action(act: Action, symmetry_path: str, target_path: str) -> str:
    """References the symmetry/target files, then one dense dB x dB operator
    matrix per Q-basis element."""
    out = [f"symmetry {symmetry_path}", f"target {target_path}"]
    for i in range(act.symmetry.algebra.dim):
        out.append(f"operator {i}")
        out.extend(_dump_matrix(act.rep[i]))
    return "\n".join(out) + "\n"


def load_action(text: str, base_dir="."):
    lines = _Lines(text)
    no, args = lines.expect("symmetry")
    with open(os.path.join(base_dir, args[0]), encoding="utf-8") as fh:
        Q, _ = load_whopf(fh.read())
    no, args = lines.expect("target")
    with open(os.path.join(base_dir, args[0]), encoding="utf-8") as fh:
        B, _, _ = load_algebra(fh.read())
    rep = np.zeros((Q.algebra.dim, B.dim, B.dim), dtype=complex)
    for i in range(Q.algebra.dim):
        no, args = lines.expect("operator")
        if int(args[0]) != i:
            raise ParseError(f"expected operator {i}, got {args[0]}", no)
        rep[i] = _parse_matrix(lines, B.dim, B.dim, f"operator {i}")
    lines.done()
    return Action(Q, B, rep)


# -- fusion ring files -------------------------------------------------------


def dump_fusion_ring(fr: FusionRing, name="F") -> str:
    out = [f"fusion {name}",
           "labels " + " ".join(str(l) for l in fr.labels),
           "dual " + " ".join(str(d) for d in fr.dual)]
    for (a, b, c), m in np.ndenumerate(fr.N):
        if m:
            out.append(f"{a} {b} {c} {int(m)}")
    return "\n".join(out) + "\n"


def load_fusion_ring(text: str):
    lines = _Lines(text)
    no, args = lines.expect("fusion")
    name = args[0] if args else "F"
    no, labels = lines.expect("labels")
    n = len(labels)
    no, dual_toks = lines.expect("dual")
    try:
        dual = tuple(int(t) for t in dual_toks)
    except ValueError:
        raise ParseError("dual line must list label indices", no) from None
    if len(dual) != n or any(not 0 <= d < n for d in dual):
        raise ParseError("dual involution must cover all labels", no)
    N = np.zeros((n, n, n), dtype=np.int64)
    while lines.peek() is not None:
        no, line = lines.next("fusion entry")
        tok = line.split()
        if len(tok) != 4:
            raise ParseError("fusion entry wants 'a b c m'", no)
        try:
            a, b, c, m = (int(t) for t in tok)
        except ValueError:
            raise ParseError(f"bad fusion entry '{line}'", no) from None
        if not all(0 <= x < n for x in (a, b, c)) or m < 0:
            raise ParseError(f"fusion entry out of range '{line}'", no)
        N[a, b, c] = m
    return FusionRing(tuple(labels), N, dual), name


# -- pairing matrix (dualize output) -----------------------------------------


def dump_pairing(P: np.ndarray, name="pairing") -> str:
    out = [f"pairing {name} {P.shape[0]} {P.shape[1]}"]
    out.extend(_dump_matrix(P))
    return "\n".join(out) + "\n"


def load_pairing(text: str):
    lines = _Lines(text)
    no, args = lines.expect("pairing")
    rows, cols = int(args[1]), int(args[2])
    P = _parse_matrix(lines, rows, cols, "pairing")
    lines.done()
    return P, args[0]


# -- round trips -------------------------------------------------------------

_LOADERS = {
    ".alg": load_algebra,
    ".whopf": load_whopf,
    ".incl": load_inclusion,
    ".fr": load_fusion_ring,
    ".pairing": load_pairing,
}


def _dump_any(value, name):
    if isinstance(value, WeakHopfAlgebra):
        return dump_whopf(value, name)
    if isinstance(value, Inclusion):
        return dump_inclusion(value, name)
    if isinstance(value, FusionRing):
        return dump_fusion_ring(value, name)
    if isinstance(value, np.ndarray):
        return dump_pairing(value, name)
    alg, nm, elements = value if isinstance(value, tuple) else (value, name, {})
    return dump_algebra(alg, nm, elements)


def round_trip(path: str) -> bool:
    """parse -> serialize -> parse must reproduce the value exactly."""
    ext = os.path.splitext(path)[1]
    if ext not in _LOADERS:
        raise ParseError(f"unknown file extension '{ext}'")
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if ext == ".alg":
        alg, name, elements = load_algebra(text)
        text2 = dump_algebra(alg, name, elements)
        alg2, _, elements2 = load_algebra(text2)
        return (alg == alg2 and set(elements) == set(elements2)
                and all(np.array_equal(elements[k].coords, elements2[k].coords)
                        for k in elements))
    if ext == ".whopf":
        W, name = load_whopf(text)
        W2, _ = load_whopf(dump_whopf(W, name))
        return (W.algebra == W2.algebra and np.array_equal(W.D, W2.D)
                and np.array_equal(W.eps, W2.eps) and np.array_equal(W.S, W2.S))
    if ext == ".incl":
        inc, name = load_inclusion(text)
        inc2, _ = load_inclusion(dump_inclusion(inc, name))
        return (inc.A == inc2.A and inc.B == inc2.B
                and np.array_equal(inc.embed.matrix, inc2.embed.matrix))
    if ext == ".fr":
        fr, name = load_fusion_ring(text)
        fr2, _ = load_fusion_ring(dump_fusion_ring(fr, name))
        return (fr.labels == fr2.labels and fr.dual == fr2.dual
                and np.array_equal(fr.N, fr2.N))
    P, name = load_pairing(text)
    P2, _ = load_pairing(dump_pairing(P, name))
    return np.array_equal(P, P2)
