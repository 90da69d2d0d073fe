"""The subspace lattice of V = F_q^v, i.e. the projective geometry PG(v-1, q).

Subspaces are kept in reduced row-echelon form with leftmost pivots, so
equality of subspaces is equality of canonical matrices and subspaces can
be hashed and placed in sets.  Points (1-subspaces) additionally get dense
integer ids by the lexicographic rank of their normalized vector; all
incidence data downstream is bit-packed over these ids.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    AmbientMismatchError,
    BudgetExceededError,
    DegenerateFormError,
    NotContainedError,
    NotIncidentError,
)
from .gf import FieldSpec, field_new, ops_for_order, prime_power_decomposition

ENUMERATION_BUDGET = 10 ** 7


# ----------------------------------------------------------------------
# Counting
# ----------------------------------------------------------------------

def gaussian_binomial(v: int, k: int, q: int) -> int:
    """Number of k-subspaces of F_q^v; 0 when k is outside {0, ..., v}.

    Exact integer arithmetic throughout.
    """
    if v < 0:
        raise ValueError("ambient dimension must be >= 0")
    if prime_power_decomposition(q) is None:
        raise ValueError(f"q={q} is not a prime power")
    if k < 0 or k > v:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (v - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def q_number(v: int, q: int) -> int:
    """[v]_q, the number of points of PG(v-1, q)."""
    return gaussian_binomial(v, 1, q)


# ----------------------------------------------------------------------
# Row reduction over F_q
# ----------------------------------------------------------------------

def rref(rows, q: int) -> tuple[tuple[int, ...], ...]:
    """Reduced row-echelon form (nonzero rows only) of integer-index rows."""
    ops = ops_for_order(q)
    sub, mul, inv = ops.sub, ops.mul, ops.inv
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        if m[r][c] != 1:
            f = inv(m[r][c])
            m[r] = [mul(f, x) for x in m[r]]
        lead = m[r]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [sub(x, mul(f, y)) for x, y in zip(m[i], lead)]
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in m[:r])


def _pivot_cols(basis) -> tuple[int, ...]:
    return tuple(next(c for c, x in enumerate(row) if x) for row in basis)


# ----------------------------------------------------------------------
# Subspaces
# ----------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Subspace:
    """A k-subspace of F_q^v as its unique RREF basis matrix.

    The geometric names follow k = 1, 2, 3, 4, v-1: point, line, plane,
    solid, hyperplane.
    """

    v: int
    k: int
    q: int
    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not 0 <= self.k <= self.v:
            raise ValueError(f"dimension k={self.k} outside [0, {self.v}]")
        if len(self.basis) != self.k or any(len(r) != self.v for r in self.basis):
            raise ValueError("basis shape does not match (k, v)")
        pivots = []
        for row in self.basis:
            p = next((c for c, x in enumerate(row) if x), None)
            if p is None or row[p] != 1:
                raise ValueError("basis is not in reduced row-echelon form")
            pivots.append(p)
        if any(a >= b for a, b in zip(pivots, pivots[1:])):
            raise ValueError("pivot columns must strictly increase")
        for i, p in enumerate(pivots):
            if any(self.basis[j][p] != 0 for j in range(self.k) if j != i):
                raise ValueError("pivot columns must be cleared")

    def __repr__(self):
        rows = ",".join("".join(map(str, r)) for r in self.basis)
        return f"Subspace({self.k}<{self.v} q={self.q} [{rows}])"


def subspace_from_rows(rows, v: int, q: int) -> Subspace:
    """Canonical subspace spanned by the given coordinate rows."""
    basis = rref(rows, q)
    return Subspace(v=v, k=len(basis), q=q, basis=basis)


def zero_subspace(v: int, q: int) -> Subspace:
    return Subspace(v=v, k=0, q=q, basis=())


def full_space(v: int, q: int) -> Subspace:
    ident = tuple(tuple(1 if i == j else 0 for j in range(v)) for i in range(v))
    return Subspace(v=v, k=v, q=q, basis=ident)


def enumerate_subspaces(v: int, k: int, spec: FieldSpec) -> list[Subspace]:
    """All k-subspaces of F_q^v in lexicographic RREF order.

    Generation runs over pivot-column patterns with the non-pivot
    entries filled from F_q, then sorts canonically.  Guarded by
    ENUMERATION_BUDGET to fail fast on desk-scale overruns.  Results are
    cached per (v, k, q); a fresh list over the shared immutable
    subspaces is returned each call.
    """
    return list(_enumerate_cached(v, k, spec.q))


@lru_cache(maxsize=None)
def _enumerate_cached(v: int, k: int, q: int) -> tuple[Subspace, ...]:
    count = gaussian_binomial(v, k, q)
    if count > ENUMERATION_BUDGET:
        raise BudgetExceededError(
            f"{count} subspaces exceed the enumeration budget {ENUMERATION_BUDGET}")
    if k == 0:
        return (zero_subspace(v, q),)
    out = []
    for pivots in itertools.combinations(range(v), k):
        pivot_set = set(pivots)
        free = [(i, c) for i in range(k) for c in range(pivots[i] + 1, v)
                if c not in pivot_set]
        template = [[0] * v for _ in range(k)]
        for i, p in enumerate(pivots):
            template[i][p] = 1
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [row[:] for row in template]
            for (i, c), x in zip(free, vals):
                rows[i][c] = x
            out.append(Subspace(v=v, k=k, q=q,
                                basis=tuple(tuple(r) for r in rows)))
    out.sort()
    return tuple(out)


def contains(outer: Subspace, inner: Subspace) -> bool:
    """Whether inner <= outer (same ambient required)."""
    if (outer.v, outer.q) != (inner.v, inner.q):
        raise AmbientMismatchError("subspaces live in different ambient spaces")
    if inner.k > outer.k:
        return False
    ops = ops_for_order(outer.q)
    sub, mul = ops.sub, ops.mul
    pivots = _pivot_cols(outer.basis)
    for row in inner.basis:
        vec = list(row)
        for brow, p in zip(outer.basis, pivots):
            f = vec[p]
            if f:
                vec = [sub(x, mul(f, y)) for x, y in zip(vec, brow)]
        if any(vec):
            return False
    return True


def meet(U: Subspace, W: Subspace) -> Subspace:
    """Intersection of two subspaces."""
    if (U.v, U.q) != (W.v, W.q):
        raise AmbientMismatchError("subspaces live in different ambient spaces")
    cu = _kernel(U.basis, U.v, U.q)
    cw = _kernel(W.basis, W.v, W.q)
    return subspace_from_rows(_kernel(cu + cw, U.v, U.q), U.v, U.q)


def join(U: Subspace, W: Subspace) -> Subspace:
    """Sum of two subspaces."""
    if (U.v, U.q) != (W.v, W.q):
        raise AmbientMismatchError("subspaces live in different ambient spaces")
    return subspace_from_rows(U.basis + W.basis, U.v, U.q)


def _kernel(rows, v: int, q: int) -> tuple[tuple[int, ...], ...]:
    """Basis of {x : M x^T = 0} for the matrix with the given rows."""
    ops = ops_for_order(q)
    reduced = rref(rows, q)
    pivots = _pivot_cols(reduced)
    free = [c for c in range(v) if c not in pivots]
    basis = []
    for f in free:
        vec = [0] * v
        vec[f] = 1
        for row, p in zip(reduced, pivots):
            vec[p] = ops.neg(row[f])
        basis.append(tuple(vec))
    return rref(basis, q)


# ----------------------------------------------------------------------
# Points
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PointId:
    """A point of PG(v-1, q): normalized vector plus dense integer id."""

    vector: tuple[int, ...]
    index: int


@lru_cache(maxsize=None)
def _point_data(v: int, q: int):
    field_new(q)  # validate q
    vectors = []
    for lead in range(v):
        for tail in itertools.product(range(q), repeat=v - lead - 1):
            vectors.append((0,) * lead + (1,) + tail)
    vectors.sort()
    points = tuple(PointId(vector=vec, index=i) for i, vec in enumerate(vectors))
    return points, {vec: i for i, vec in enumerate(vectors)}


def all_points(v: int, spec: FieldSpec) -> tuple[PointId, ...]:
    """The [v]_q points of PG(v-1, q) in lexicographic order of their
    normalized representative."""
    return _point_data(v, spec.q)[0]


def normalize_vector(vec, q: int) -> tuple[int, ...]:
    """Scale a nonzero vector so that its first nonzero entry is 1."""
    ops = ops_for_order(q)
    lead = next((x for x in vec if x), None)
    if lead is None:
        raise ValueError("cannot normalize the zero vector")
    if lead == 1:
        return tuple(vec)
    f = ops.inv(lead)
    return tuple(ops.mul(f, x) for x in vec)


def point_index(vec, v: int, q: int) -> int:
    return _point_data(v, q)[1][normalize_vector(vec, q)]


def point_of_vector(vec, v: int, q: int) -> PointId:
    return _point_data(v, q)[0][point_index(vec, v, q)]


def point_to_subspace(P: PointId, v: int, q: int) -> Subspace:
    return Subspace(v=v, k=1, q=q, basis=(P.vector,))


def subspace_points(U: Subspace) -> tuple[PointId, ...]:
    """The [k]_q points lying on U, as PointIds of the ambient space."""
    if U.k == 0:
        return ()
    ops = ops_for_order(U.q)
    points, index = _point_data(U.v, U.q)
    coords, _ = _point_data(U.k, U.q)
    out = []
    for c in coords:
        vec = [0] * U.v
        for ci, row in zip(c.vector, U.basis):
            if ci:
                for j, x in enumerate(row):
                    if x:
                        vec[j] = ops.add(vec[j], ops.mul(ci, x))
        out.append(points[index[normalize_vector(vec, U.q)]])
    return tuple(sorted(out, key=lambda p: p.index))


def point_mask(U: Subspace) -> int:
    """Bit-packed point-id set of U."""
    mask = 0
    for p in subspace_points(U):
        mask |= 1 << p.index
    return mask


def subspaces_within(W: Subspace, k: int) -> list[Subspace]:
    """All k-subspaces of the ambient space contained in W, canonical order."""
    if k > W.k:
        return []
    spec = field_new(W.q)
    ops = ops_for_order(W.q)
    out = []
    for T in enumerate_subspaces(W.k, k, spec):
        rows = []
        for c in T.basis:
            vec = [0] * W.v
            for ci, row in zip(c, W.basis):
                if ci:
                    for j, x in enumerate(row):
                        if x:
                            vec[j] = ops.add(vec[j], ops.mul(ci, x))
            rows.append(vec)
        out.append(subspace_from_rows(rows, W.v, W.q))
    out.sort()
    return out


# ----------------------------------------------------------------------
# Bilinear forms and duality
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BilinearForm:
    """A bilinear form on F_q^v given by its Gram matrix."""

    gram: tuple[tuple[int, ...], ...]
    kind: str = "generic"

    def __post_init__(self):
        v = len(self.gram)
        if any(len(r) != v for r in self.gram):
            raise ValueError("Gram matrix must be square")
        if self.kind not in ("symmetric", "alternating", "generic"):
            raise ValueError(f"unknown form kind {self.kind!r}")


def dot_form(v: int, q: int) -> BilinearForm:
    """The standard symmetric form with identity Gram matrix."""
    gram = tuple(tuple(1 if i == j else 0 for j in range(v)) for i in range(v))
    return BilinearForm(gram=gram, kind="symmetric")


def symplectic_form(q: int) -> BilinearForm:
    """The alternating form b(x, y) = x1 y2 - x2 y1 + x3 y4 - x4 y3 on F_q^4."""
    ops = ops_for_order(q)
    n1 = ops.neg(1)
    gram = ((0, 1, 0, 0), (n1, 0, 0, 0), (0, 0, 0, 1), (0, 0, n1, 0))
    return BilinearForm(gram=gram, kind="alternating")


def form_value(form: BilinearForm, x, y, q: int) -> int:
    ops = ops_for_order(q)
    acc = 0
    for xi, grow in zip(x, form.gram):
        if xi:
            for gij, yj in zip(grow, y):
                if gij and yj:
                    acc = ops.add(acc, ops.mul(xi, ops.mul(gij, yj)))
    return acc


def dualize(U: Subspace, form: BilinearForm) -> Subspace:
    """U^perp = {x : b(x, u) = 0 for all u in U} for a nondegenerate form."""
    v, q = U.v, U.q
    if len(form.gram) != v:
        raise AmbientMismatchError("form dimension does not match the subspace")
    if len(rref(form.gram, q)) != v:
        raise DegenerateFormError("Gram matrix is singular")
    ops = ops_for_order(q)
    constraints = []
    for u in U.basis:
        constraints.append(tuple(_row_dot(grow, u, ops) for grow in form.gram))
    return subspace_from_rows(_kernel(constraints, v, q), v, q)


def _row_dot(a, b, ops):
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = ops.add(acc, ops.mul(x, y))
    return acc


# ----------------------------------------------------------------------
# Quotients, filters, pencils
# ----------------------------------------------------------------------

def quotient(B: Subspace, P: Subspace) -> Subspace:
    """B/P as a subspace of the fixed coordinate frame on V/P.

    The frame completes P's basis with the unit vectors of its non-pivot
    columns in ascending order, so the frame (and every derived-design
    output) depends only on P.
    """
    if not contains(B, P):
        raise NotContainedError("quotient requires P <= B")
    v, q = B.v, B.q
    pivots = set(_pivot_cols(P.basis))
    completion = [tuple(1 if j == c else 0 for j in range(v))
                  for c in range(v) if c not in pivots]
    frame = list(P.basis) + completion
    inv = _matrix_inverse(frame, q)
    ops = ops_for_order(q)
    qrows = []
    for x in B.basis:
        coords = [_row_dot(x, tuple(inv[r][j] for r in range(v)), ops)
                  for j in range(v)]
        qrows.append(coords[P.k:])
    return subspace_from_rows(qrows, v - P.k, q)


def _matrix_inverse(rows, q: int):
    v = len(rows)
    aug = [list(r) + [1 if i == j else 0 for j in range(v)] for i, r in enumerate(rows)]
    red = rref(aug, q)
    if len(red) != v or any(red[i][i] != 1 for i in range(v)):
        raise ValueError("matrix is singular")
    return [list(r[v:]) for r in red]


def restrict_filter(S, U: Subspace, W: Subspace) -> list[Subspace]:
    """Members B of S with U <= B <= W, order preserved."""
    return [B for B in S if contains(B, U) and contains(W, B)]


def line_pencil(P: Subspace, E: Subspace) -> list[Subspace]:
    """The q+1 lines through the point P inside the plane E."""
    if P.k != 1 or E.k != 3:
        raise ValueError("line_pencil expects a point and a plane")
    if not contains(E, P):
        raise NotIncidentError("the point does not lie in the plane")
    lines = set()
    for Q in subspace_points(E):
        if Q.vector != P.basis[0]:
            lines.add(join(P, point_to_subspace(Q, E.v, E.q)))
    return sorted(lines)


# ----------------------------------------------------------------------
# JSON form (the wire format shared by all CLI commands)
# ----------------------------------------------------------------------

def subspace_to_json(U: Subspace) -> dict:
    return {"v": U.v, "k": U.k, "q": U.q, "rows": [list(r) for r in U.basis]}


def subspace_from_json(obj: dict) -> Subspace:
    return Subspace(v=obj["v"], k=obj["k"], q=obj["q"],
                    basis=tuple(tuple(r) for r in obj["rows"]))
