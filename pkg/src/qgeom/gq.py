"""Finite generalized quadrangles as abstract incidence structures.

Provides axiom and order verification, dualization, backtracking
isomorphism testing with certified negatives, spread/ovoid predicates,
and the two classical constructions of order (q, q): the symplectic
quadrangle W(q) on the totally isotropic lines of PG(3, q), and the
parabolic quadric Q(4, q) in PG(4, q).

The order convention is the standard one: order (s, t) means s+1 points
per line and t+1 lines per point.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    BudgetExceededError,
    MissingLabelsError,
    OutOfRangeError,
    UnknownIdError,
)
from .gf import field_new, ops_for_order
from .projspace import (
    Subspace,
    all_points,
    contains,
    enumerate_subspaces,
    form_value,
    join,
    subspace_from_json,
    subspace_points,
    subspace_to_json,
    symplectic_form,
)


@dataclass(frozen=True)
class GQOrder:
    s: int  # s+1 points per line
    t: int  # t+1 lines per point


@dataclass(frozen=True)
class IncidenceStructure:
    """A finite point-line incidence structure with adjacency both ways.

    ``line_points[j]`` lists the point ids on line j (sorted), and
    ``point_lines[i]`` the line ids through point i.  Optional labels
    tie points/lines back to the subspaces of a geometric construction.
    """

    line_points: tuple[tuple[int, ...], ...]
    point_lines: tuple[tuple[int, ...], ...]
    point_labels: tuple[Subspace, ...] | None = None
    line_labels: tuple[Subspace, ...] | None = None

    @property
    def n_points(self) -> int:
        return len(self.point_lines)

    @property
    def n_lines(self) -> int:
        return len(self.line_points)

    def incidence_matrix(self) -> np.ndarray:
        """Dense point x line incidence bit matrix."""
        m = np.zeros((self.n_points, self.n_lines), dtype=bool)
        for j, pts in enumerate(self.line_points):
            m[list(pts), j] = True
        return m

    def line_masks(self) -> tuple[int, ...]:
        return tuple(_mask(pts) for pts in self.line_points)

    def point_masks(self) -> tuple[int, ...]:
        return tuple(_mask(ls) for ls in self.point_lines)


def _mask(ids) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def incidence_from_lines(n_points: int, lines,
                         point_labels=None, line_labels=None) -> IncidenceStructure:
    """Build a structure from the point sets of its lines.

    Enforces that no two lines share a point set and no two points share
    a line pencil (no repeated rows or columns of the bit matrix).
    """
    line_points = []
    seen = set()
    for pts in lines:
        pts = tuple(sorted(set(pts)))
        if any(p < 0 or p >= n_points for p in pts):
            raise UnknownIdError("line contains a point id outside the structure")
        if pts in seen:
            raise ValueError(f"two lines share the point set {pts}")
        seen.add(pts)
        line_points.append(pts)
    per_point = [[] for _ in range(n_points)]
    for j, pts in enumerate(line_points):
        for p in pts:
            per_point[p].append(j)
    point_lines = tuple(tuple(ls) for ls in per_point)
    if len(set(point_lines)) != n_points:
        raise ValueError("two points lie on exactly the same lines")
    return IncidenceStructure(
        line_points=tuple(line_points),
        point_lines=point_lines,
        point_labels=tuple(point_labels) if point_labels is not None else None,
        line_labels=tuple(line_labels) if line_labels is not None else None,
    )


# ----------------------------------------------------------------------
# Classical constructions
# ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def build_w(q: int) -> IncidenceStructure:
    """W(q): points of PG(3,q) with the totally isotropic lines of the
    alternating form x1 y2 - x2 y1 + x3 y4 - x4 y3."""
    spec = field_new(q)  # raises OutOfRangeError beyond 16
    form = symplectic_form(q)
    points = all_points(4, spec)
    iso_lines = []
    for L in enumerate_subspaces(4, 2, spec):
        b0, b1 = L.basis
        if form_value(form, b0, b1, q) == 0:
            iso_lines.append(L)
    line_points = [tuple(p.index for p in subspace_points(L)) for L in iso_lines]
    point_labels = tuple(Subspace(v=4, k=1, q=q, basis=(p.vector,)) for p in points)
    return incidence_from_lines(len(points), line_points,
                                point_labels=point_labels,
                                line_labels=tuple(iso_lines))


def _parabolic_value(vec, q: int) -> int:
    # q(x) = x1 x2 + x3 x4 + x5^2
    ops = ops_for_order(q)
    return ops.add(ops.add(ops.mul(vec[0], vec[1]), ops.mul(vec[2], vec[3])),
                   ops.mul(vec[4], vec[4]))


@lru_cache(maxsize=None)
def build_q4(q: int) -> IncidenceStructure:
    """Q(4,q): projective zeroes of x1 x2 + x3 x4 + x5^2 in PG(4,q),
    with all the lines of PG(4,q) inside the zero set."""
    spec = field_new(q)
    pg_points = all_points(5, spec)
    quadric = [p for p in pg_points if _parabolic_value(p.vector, q) == 0]
    idx = {p.index: i for i, p in enumerate(quadric)}
    on_quadric = set(idx)
    lines = []
    for L in enumerate_subspaces(5, 2, spec):
        pts = subspace_points(L)
        if all(p.index in on_quadric for p in pts):
            lines.append((L, tuple(idx[p.index] for p in pts)))
    point_labels = tuple(Subspace(v=5, k=1, q=q, basis=(p.vector,)) for p in quadric)
    return incidence_from_lines(len(quadric), [pts for _, pts in lines],
                                point_labels=point_labels,
                                line_labels=tuple(L for L, _ in lines))


# ----------------------------------------------------------------------
# Axiom checking
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class GQCheck:
    """Verdict of the generalized-quadrangle axioms.

    ``order`` is set only when the axioms hold with constant line size
    and point degree.  Degeneracy (some point collinear with every
    point) is flagged separately.
    """

    axioms_ok: bool
    order: GQOrder | None
    degenerate: bool
    reason: str | None = None


def check_gq(structure: IncidenceStructure) -> GQCheck:
    np_, nl = structure.n_points, structure.n_lines
    if np_ == 0 or nl == 0:
        return GQCheck(False, None, False, "point and line sets must be non-empty")
    lm = structure.line_masks()
    # axioms (i)+(ii): no two points on two common lines
    for j in range(nl):
        for j2 in range(j + 1, nl):
            inter = lm[j] & lm[j2]
            if inter.bit_count() > 1:
                return GQCheck(False, None, False,
                               f"lines {j} and {j2} share two points")
    coll = []
    for i in range(np_):
        m = 0
        for j in structure.point_lines[i]:
            m |= lm[j]
        coll.append(m)
    full = (1 << np_) - 1
    degenerate = any(coll[i] | (1 << i) == full and structure.point_lines[i]
                     for i in range(np_))
    # axiom (iii): unique projection of a point onto a non-incident line
    for i in range(np_):
        bit = 1 << i
        ci = coll[i]
        for j in range(nl):
            if lm[j] & bit:
                continue
            c = (lm[j] & ci).bit_count()
            if c != 1:
                return GQCheck(False, None, degenerate,
                               f"point {i} has {c} projections onto line {j}")
    sizes = {len(pts) for pts in structure.line_points}
    degrees = {len(ls) for ls in structure.point_lines}
    order = None
    if len(sizes) == 1 and len(degrees) == 1:
        order = GQOrder(s=sizes.pop() - 1, t=degrees.pop() - 1)
    return GQCheck(True, order, degenerate)


def dualize_structure(structure: IncidenceStructure) -> IncidenceStructure:
    """Swap the roles of points and lines; an involution."""
    return IncidenceStructure(
        line_points=structure.point_lines,
        point_lines=structure.line_points,
        point_labels=structure.line_labels,
        line_labels=structure.point_labels,
    )


# ----------------------------------------------------------------------
# Isomorphism
# ----------------------------------------------------------------------

def is_isomorphic(a: IncidenceStructure, b: IncidenceStructure,
                  node_limit: int = 10 ** 7):
    """Search for an incidence-preserving bijection pair.

    Returns (point_map, line_map) with point_map[i] the b-point image of
    a-point i, or None when the exhausted search certifies there is no
    isomorphism.  Backtracking over the bipartite incidence graph with
    degree pruning and exact adjacency consistency against the mapped
    prefix; adequate for structures up to a few hundred points.

    Raises BudgetExceededError past node_limit candidate tries, which is
    distinct from a certified negative.
    """
    if (a.n_points, a.n_lines) != (b.n_points, b.n_lines):
        return None
    npts = a.n_points
    adj_a = _bipartite_adjacency(a)
    adj_b = _bipartite_adjacency(b)
    deg_a = [m.bit_count() for m in adj_a]
    deg_b = [m.bit_count() for m in adj_b]
    n = len(adj_a)
    kind = [0] * npts + [1] * (a.n_lines)
    if sorted(zip(kind, deg_a)) != sorted(zip(kind, deg_b)):
        return None

    order = _connectivity_order(adj_a, deg_a)
    by_kind = [[y for y in range(n) if kind[y] == 0],
               [y for y in range(n) if kind[y] == 1]]

    mapping = [-1] * n
    used_b = 0
    nodes = 0

    def extend(depth: int) -> bool:
        nonlocal used_b, nodes
        if depth == n:
            return True
        x = order[depth]
        required = 0
        for y in _bits(adj_a[x]):
            if mapping[y] >= 0:
                required |= 1 << mapping[y]
        for cand in by_kind[kind[x]]:
            if used_b >> cand & 1:
                continue
            if deg_b[cand] != deg_a[x]:
                continue
            if adj_b[cand] & used_b != required:
                continue
            nodes += 1
            if nodes > node_limit:
                raise BudgetExceededError(
                    f"isomorphism search exceeded {node_limit} nodes")
            mapping[x] = cand
            used_b |= 1 << cand
            if extend(depth + 1):
                return True
            used_b &= ~(1 << cand)
            mapping[x] = -1
        return False

    if not extend(0):
        return None
    point_map = tuple(mapping[:npts])
    line_map = tuple(m - npts for m in mapping[npts:])
    # paranoia: re-verify the certificate before handing it out
    for j, pts in enumerate(a.line_points):
        image = tuple(sorted(point_map[p] for p in pts))
        if image != b.line_points[line_map[j]]:
            raise RuntimeError("internal: isomorphism verification failed")
    return point_map, line_map


def _bipartite_adjacency(s: IncidenceStructure) -> list[int]:
    npts = s.n_points
    adj = [0] * (npts + s.n_lines)
    for j, pts in enumerate(s.line_points):
        for p in pts:
            adj[p] |= 1 << (npts + j)
            adj[npts + j] |= 1 << p
    return adj


def _connectivity_order(adj: list[int], deg: list[int]) -> list[int]:
    """Visit order maximizing mapped-neighbor counts (greedy)."""
    n = len(adj)
    order = []
    visited = 0
    remaining = set(range(n))
    while remaining:
        best = max(remaining,
                   key=lambda x: ((adj[x] & visited).bit_count(), deg[x], -x))
        order.append(best)
        visited |= 1 << best
        remaining.remove(best)
    return order


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ----------------------------------------------------------------------
# Spreads, ovoids, elliptic sections
# ----------------------------------------------------------------------

def is_gq_spread(structure: IncidenceStructure, lineset) -> bool:
    """Whether each point is incident with exactly one chosen line."""
    chosen = set(lineset)
    for j in chosen:
        if not 0 <= j < structure.n_lines:
            raise UnknownIdError(f"line id {j} outside the structure")
    for ls in structure.point_lines:
        if sum(1 for j in ls if j in chosen) != 1:
            return False
    return True


def is_gq_ovoid(structure: IncidenceStructure, pointset) -> bool:
    """Whether each line is incident with exactly one chosen point."""
    chosen = set(pointset)
    for p in chosen:
        if not 0 <= p < structure.n_points:
            raise UnknownIdError(f"point id {p} outside the structure")
    for pts in structure.line_points:
        if sum(1 for p in pts if p in chosen) != 1:
            return False
    return True


def is_elliptic_quadric_ovoid(q4: IncidenceStructure, pointset) -> bool:
    """Whether an ovoid of Q(4,q) is an elliptic hyperplane section.

    True iff the ovoid equals the quadric points inside some hyperplane
    of PG(4,q) containing no line of the quadric.  Needs the coordinate
    labels from build_q4.
    """
    if q4.point_labels is None or q4.line_labels is None:
        raise MissingLabelsError("structure carries no coordinate labels")
    ids = sorted(set(pointset))
    if not is_gq_ovoid(q4, ids):
        raise ValueError("point set is not an ovoid of the structure")
    span = q4.point_labels[ids[0]]
    for i in ids[1:]:
        span = join(span, q4.point_labels[i])
    if span.k != 4:
        return False
    section = {i for i, lab in enumerate(q4.point_labels) if contains(span, lab)}
    if section != set(ids):
        return False
    if any(contains(span, lab) for lab in q4.line_labels):
        return False
    return True


# ----------------------------------------------------------------------
# JSON form
# ----------------------------------------------------------------------

def structure_to_json(s: IncidenceStructure) -> dict:
    out = {
        "schema_version": 1,
        "points": s.n_points,
        "lines": s.n_lines,
        "incidence": [list(ls) for ls in s.point_lines],
    }
    if s.point_labels is not None or s.line_labels is not None:
        out["labels"] = {
            "points": [subspace_to_json(x) for x in s.point_labels]
            if s.point_labels is not None else None,
            "lines": [subspace_to_json(x) for x in s.line_labels]
            if s.line_labels is not None else None,
        }
    return out


def structure_from_json(obj: dict) -> IncidenceStructure:
    n_points = obj["points"]
    n_lines = obj["lines"]
    per_line = [[] for _ in range(n_lines)]
    for p, ls in enumerate(obj["incidence"]):
        for j in ls:
            per_line[j].append(p)
    labels = obj.get("labels") or {}
    point_labels = labels.get("points")
    line_labels = labels.get("lines")
    return incidence_from_lines(
        n_points, per_line,
        point_labels=[subspace_from_json(x) for x in point_labels]
        if point_labels else None,
        line_labels=[subspace_from_json(x) for x in line_labels]
        if line_labels else None,
    )
