"""Certified exhaustive search: exact cover and the partition questions.

The solver is Knuth's Algorithm X over dancing links (array-backed).
Column choice is minimum-remaining-options with ties broken by lowest
element id; rows are visited in the instance's option order.  Given the
same option order the search tree, the discovery order of solutions and
the node count are all reproducible, which is what the certificates
record: a completed run with zero solutions is a certified nonexistence
whose exact tree a re-run can replay.

Randomized option orders take an explicit seed; there is no global
randomness.  Multi-worker runs split the root branching across
processes; the merged solution list and count are independent of the
worker count (node budgets then apply per root branch, see
solve_exact_cover).
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import random
import warnings
from dataclasses import dataclass

import numpy as np

from .designs import BlockSet, block_set, spread_holes
from .errors import BudgetExceededError, UnknownIdError
from .gf import FieldSpec
from .gq import IncidenceStructure, check_gq, is_gq_ovoid, is_gq_spread
from .projspace import enumerate_subspaces, point_mask, q_number

MODES = ("first", "all", "count")


@dataclass(frozen=True)
class ExactCoverInstance:
    """Universe of n_elements ids plus bit-packed option sets."""

    n_elements: int
    options: tuple[int, ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        limit = 1 << self.n_elements
        for i, mask in enumerate(self.options):
            if mask == 0:
                raise ValueError(f"option {i} is empty")
            if mask >= limit:
                raise UnknownIdError(f"option {i} uses element ids >= {self.n_elements}")
        if self.names is not None and len(self.names) != len(self.options):
            raise ValueError("names must match options one to one")

    def option_ids(self, opt: int) -> tuple[int, ...]:
        return tuple(_bit_ids(self.options[opt]))


def _bit_ids(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def exact_cover_instance(n_elements: int, option_sets, names=None) -> ExactCoverInstance:
    """Canonical instance from iterables of element ids."""
    masks = []
    for s in option_sets:
        m = 0
        for e in s:
            m |= 1 << e
        masks.append(m)
    return ExactCoverInstance(n_elements=n_elements, options=tuple(masks),
                              names=tuple(names) if names is not None else None)


def instance_digest(instance: ExactCoverInstance) -> str:
    """Content hash of the canonical instance serialization."""
    payload = {
        "n_elements": instance.n_elements,
        "options": [sorted(_bit_ids(m)) for m in instance.options],
        "names": list(instance.names) if instance.names is not None else None,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True)
class SearchCertificate:
    """Reproducible record of one exact-cover run.

    ``solutions`` holds option-id tuples in discovery order; every
    emitted solution has been re-verified as an exact cover.  ``mode``
    is the requested mode, except that a completed run with zero
    solutions is recorded as "nonexistence".  ``completed`` means the
    tree was exhausted with neither the node budget nor the solution
    cap binding.
    """

    digest: str
    mode: str
    solutions: tuple[tuple[int, ...], ...]
    nodes_visited: int
    option_order: tuple[int, ...]
    completed: bool
    solution_count: int
    seed: int | None = None

    @property
    def nonexistence_certified(self) -> bool:
        return self.completed and self.solution_count == 0


# ----------------------------------------------------------------------
# Dancing links core
# ----------------------------------------------------------------------

class _Stop(Exception):
    pass


class _Budget(Exception):
    pass


class _Dlx:
    """Array-backed dancing links matrix for one search run."""

    def __init__(self, instance: ExactCoverInstance, option_order):
        n = instance.n_elements
        # node 0 is the root; nodes 1..n the column headers
        self.L = list(range(-1, n))
        self.R = list(range(1, n + 1)) + [0]
        self.L[0] = n
        self.U = list(range(n + 1))
        self.D = list(range(n + 1))
        self.C = list(range(n + 1))
        self.ROW = [-1] * (n + 1)
        self.size = [0] * (n + 1)
        self.RL = list(range(n + 1))  # row links (circular within an option)
        self.RR = list(range(n + 1))
        self.first_node = {}
        for opt in option_order:
            first = None
            prev = None
            for e in _bit_ids(instance.options[opt]):
                col = e + 1
                node = len(self.U)
                self.U.append(self.U[col])
                self.D.append(col)
                self.D[self.U[col]] = node
                self.U[col] = node
                self.C.append(col)
                self.ROW.append(opt)
                self.size[col] += 1
                self.RL.append(node)
                self.RR.append(node)
                if first is None:
                    first = node
                    self.first_node[opt] = node
                else:
                    self.RL[node] = prev
                    self.RR[node] = first
                    self.RR[prev] = node
                    self.RL[first] = node
                prev = node

    def cover(self, col):
        L, R, U, D, C, size, RR = self.L, self.R, self.U, self.D, self.C, self.size, self.RR
        L[R[col]] = L[col]
        R[L[col]] = R[col]
        i = D[col]
        while i != col:
            j = RR[i]
            while j != i:
                U[D[j]] = U[j]
                D[U[j]] = D[j]
                size[C[j]] -= 1
                j = RR[j]
            i = D[i]

    def uncover(self, col):
        L, R, U, D, C, size, RL = self.L, self.R, self.U, self.D, self.C, self.size, self.RL
        i = U[col]
        while i != col:
            j = RL[i]
            while j != i:
                size[C[j]] += 1
                U[D[j]] = j
                D[U[j]] = j
                j = RL[j]
            i = U[i]
        L[R[col]] = col
        R[L[col]] = col

    def select_option(self, opt):
        """Cover every column of the given option (forced root choice)."""
        node = self.first_node[opt]
        self.cover(self.C[node])
        j = self.RR[node]
        while j != node:
            self.cover(self.C[j])
            j = self.RR[j]

    def choose_column(self):
        best, best_size = 0, None
        c = self.R[0]
        while c != 0:
            if best_size is None or self.size[c] < best_size:
                best, best_size = c, self.size[c]
                if best_size == 0:
                    break
            c = self.R[c]
        return best  # 0 when no columns remain


class _Run:
    """Driver state: node counting, budgets and solution collection."""

    def __init__(self, dlx, store_solutions, max_solutions, node_limit):
        self.dlx = dlx
        self.store = store_solutions
        self.max_solutions = max_solutions
        self.node_limit = node_limit
        self.nodes = 0
        self.count = 0
        self.solutions = []
        self.stack = []

    def emit(self):
        self.count += 1
        if self.store:
            self.solutions.append(tuple(sorted(self.stack)))
        if self.max_solutions is not None and self.count >= self.max_solutions:
            raise _Stop

    def search(self):
        dlx = self.dlx
        col = dlx.choose_column()
        if col == 0:
            self.emit()
            return
        if dlx.size[col] == 0:
            return
        dlx.cover(col)
        r = dlx.D[col]
        while r != col:
            self.nodes += 1
            if self.node_limit is not None and self.nodes > self.node_limit:
                raise _Budget
            self.stack.append(dlx.ROW[r])
            j = dlx.RR[r]
            while j != r:
                dlx.cover(dlx.C[j])
                j = dlx.RR[j]
            self.search()
            j = dlx.RL[r]
            while j != r:
                dlx.uncover(dlx.C[j])
                j = dlx.RL[j]
            self.stack.pop()
            r = dlx.D[r]
        dlx.uncover(col)


def _run_subtree(instance, option_order, forced, store, max_solutions, node_limit):
    """Search the subtree with one root option preselected.

    Returns (solutions, count, nodes, completed, budget_hit); the forced
    root try counts as one node, matching the sequential count."""
    dlx = _Dlx(instance, option_order)
    run = _Run(dlx, store, max_solutions, node_limit)
    run.nodes = 1
    if node_limit is not None and run.nodes > node_limit:
        return [], 0, run.nodes, False, True
    run.stack.append(forced)
    dlx.select_option(forced)
    try:
        run.search()
        return run.solutions, run.count, run.nodes, True, False
    except _Stop:
        return run.solutions, run.count, run.nodes, False, False
    except _Budget:
        return run.solutions, run.count, run.nodes, False, True


def _pool_task(args):
    (n_elements, options, names, option_order, forced, store,
     max_solutions, node_limit) = args
    instance = ExactCoverInstance(n_elements, options, names)
    return _run_subtree(instance, option_order, forced, store,
                        max_solutions, node_limit)


# ----------------------------------------------------------------------
# Public solver
# ----------------------------------------------------------------------

def solve_exact_cover(instance: ExactCoverInstance, mode: str = "all", *,
                      node_limit: int | None = None,
                      max_solutions: int | None = None,
                      seed: int | None = None,
                      option_order=None,
                      workers: int = 1) -> SearchCertificate:
    """Run Algorithm X on the instance and certify the outcome.

    mode "first" stops after max_solutions (default 1) solutions; "all"
    enumerates everything (an optional max_solutions cap marks the
    certificate incomplete when it binds); "count" is "all" without
    storing the solutions.  A node is one option try; exceeding
    node_limit raises BudgetExceededError carrying the partial
    certificate.  With workers > 1 the root branching is split across
    processes and node_limit applies to each root branch separately;
    solution sets and counts do not depend on the worker count.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == "first" and max_solutions is None:
        max_solutions = 1
    if option_order is not None and seed is not None:
        raise ValueError("give either option_order or seed, not both")
    if option_order is None:
        option_order = list(range(len(instance.options)))
        if seed is not None:
            random.Random(seed).shuffle(option_order)
    option_order = tuple(option_order)
    if sorted(option_order) != list(range(len(instance.options))):
        raise ValueError("option_order must be a permutation of all option ids")
    store = mode != "count"
    digest = instance_digest(instance)

    def finish(solutions, count, nodes, completed, budget_hit):
        solutions = tuple(solutions)
        for sol in solutions:
            if not _verify_cover(instance, sol):
                raise RuntimeError("internal: emitted solution is not an exact cover")
        final_mode = "nonexistence" if (completed and count == 0) else mode
        cert = SearchCertificate(
            digest=digest, mode=final_mode, solutions=solutions,
            nodes_visited=nodes, option_order=option_order,
            completed=completed, solution_count=count, seed=seed)
        if budget_hit:
            raise BudgetExceededError(
                f"node budget {node_limit} exceeded", certificate=cert)
        return cert

    if instance.n_elements == 0:
        return finish([()], 1, 0, True, False)

    if workers <= 1:
        dlx = _Dlx(instance, option_order)
        run = _Run(dlx, store, max_solutions, node_limit)
        completed, budget_hit = True, False
        try:
            run.search()
        except _Stop:
            completed = False
        except _Budget:
            completed, budget_hit = False, True
        return finish(run.solutions, run.count, run.nodes, completed, budget_hit)

    # Parallel: deterministic root split.  The tasks traverse exactly
    # the subtrees the sequential search would, in the same order.
    probe = _Dlx(instance, option_order)
    col = probe.choose_column()
    if probe.size[col] == 0:
        return finish([], 0, 0, True, False)
    branch = []
    r = probe.D[col]
    while r != col:
        branch.append(probe.ROW[r])
        r = probe.D[r]
    args = [(instance.n_elements, instance.options, instance.names,
             option_order, forced, store, max_solutions, node_limit)
            for forced in branch]
    with multiprocessing.Pool(processes=workers) as pool:
        results = pool.map(_pool_task, args)
    solutions, count, nodes, completed, budget_hit = [], 0, 0, True, False
    for sols, c, nd, comp, bud in results:
        solutions.extend(sols)
        count += c
        nodes += nd
        completed = completed and comp
        budget_hit = budget_hit or bud
    if max_solutions is not None and count >= max_solutions:
        # mirror the sequential stop-at-cap semantics
        solutions = solutions[:max_solutions]
        count = max_solutions
        completed = False
    return finish(solutions, count, nodes, completed, budget_hit)


def _verify_cover(instance: ExactCoverInstance, solution) -> bool:
    acc = 0
    for opt in solution:
        m = instance.options[opt]
        if acc & m:
            return False
        acc |= m
    return acc == (1 << instance.n_elements) - 1


# ----------------------------------------------------------------------
# Generalized quadrangle searches
# ----------------------------------------------------------------------

def gq_spread_instance(structure: IncidenceStructure) -> ExactCoverInstance:
    """Universe = points, options = lines (option id = line id)."""
    return ExactCoverInstance(
        n_elements=structure.n_points,
        options=structure.line_masks(),
        names=tuple(f"line-{j}" for j in range(structure.n_lines)))


def gq_ovoid_instance(structure: IncidenceStructure) -> ExactCoverInstance:
    """Universe = lines, options = points (option id = point id)."""
    return ExactCoverInstance(
        n_elements=structure.n_lines,
        options=structure.point_masks(),
        names=tuple(f"point-{i}" for i in range(structure.n_points)))


def _warn_if_not_gq(structure):
    verdict = check_gq(structure)
    if not verdict.axioms_ok:
        warnings.warn(f"structure is not a generalized quadrangle: {verdict.reason}",
                      stacklevel=3)


def enumerate_gq_spreads(structure: IncidenceStructure, mode: str = "all",
                         **kwargs) -> SearchCertificate:
    """All line sets covering every point exactly once."""
    _warn_if_not_gq(structure)
    cert = solve_exact_cover(gq_spread_instance(structure), mode, **kwargs)
    for sol in cert.solutions:
        if not is_gq_spread(structure, sol):
            raise RuntimeError("internal: solution fails the spread predicate")
    return cert


def enumerate_gq_ovoids(structure: IncidenceStructure, mode: str = "all",
                        **kwargs) -> SearchCertificate:
    """All point sets meeting every line exactly once."""
    _warn_if_not_gq(structure)
    cert = solve_exact_cover(gq_ovoid_instance(structure), mode, **kwargs)
    for sol in cert.solutions:
        if not is_gq_ovoid(structure, sol):
            raise RuntimeError("internal: solution fails the ovoid predicate")
    return cert


def partition_into_spreads(structure: IncidenceStructure, mode: str = "all",
                           **kwargs) -> SearchCertificate:
    """Second-level search: partition the full line set into spreads.

    Materializes every spread first (feasible at desk scale), then runs
    exact cover with universe = lines and options = spreads.  Option ids
    of the returned certificate index into the solution list of
    enumerate_gq_spreads(structure).
    """
    spreads = enumerate_gq_spreads(structure, "all", **_strip_cap(kwargs))
    return _partition_level(structure.n_lines, spreads.solutions, "spread",
                            mode, kwargs)


def partition_into_ovoids(structure: IncidenceStructure, mode: str = "all",
                          **kwargs) -> SearchCertificate:
    """Dual second-level search: partition the point set into ovoids."""
    ovoids = enumerate_gq_ovoids(structure, "all", **_strip_cap(kwargs))
    return _partition_level(structure.n_points, ovoids.solutions, "ovoid",
                            mode, kwargs)


def _partition_level(n_elements, first_level_solutions, label, mode, kwargs):
    instance = ExactCoverInstance(
        n_elements=n_elements,
        options=tuple(_mask_of(sol) for sol in first_level_solutions),
        names=tuple(f"{label}-{i}" for i in range(len(first_level_solutions))))
    if not instance.options:
        # no first-level solutions at all certifies nonexistence outright
        return SearchCertificate(
            digest=instance_digest(instance), mode="nonexistence",
            solutions=(), nodes_visited=0, option_order=(),
            completed=True, solution_count=0, seed=kwargs.get("seed"))
    return solve_exact_cover(instance, mode, **kwargs)


def _strip_cap(kwargs):
    out = dict(kwargs)
    out.pop("max_solutions", None)
    return out


def _mask_of(ids):
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def pairwise_intersection_matrix(certificate: SearchCertificate,
                                 kind: str = "ovoid") -> np.ndarray:
    """M[i][j] = size of the intersection of solutions i and j.

    All off-diagonal entries >= 1 already rules out any partition, a
    cheaper certificate than the second-level search.
    """
    if kind not in ("ovoid", "spread"):
        raise ValueError("kind must be 'ovoid' or 'spread'")
    sols = [set(s) for s in certificate.solutions]
    n = len(sols)
    m = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            c = len(sols[i] & sols[j])
            m[i, j] = m[j, i] = c
    return m


# ----------------------------------------------------------------------
# Line spreads of PG(v-1, q)
# ----------------------------------------------------------------------

_FULL_ENUMERATION = {(4, 2), (4, 3)}
_SAMPLING_ONLY = {(6, 2)}


def pg_line_spread_instance(v: int, spec: FieldSpec) -> ExactCoverInstance:
    lines = enumerate_subspaces(v, 2, spec)
    return ExactCoverInstance(
        n_elements=q_number(v, spec.q),
        options=tuple(point_mask(L) for L in lines),
        names=tuple(f"pg-line-{j}" for j in range(len(lines))))


def enumerate_pg_line_spreads(v: int, spec: FieldSpec, mode: str = "all",
                              **kwargs) -> SearchCertificate:
    """Search for line spreads of PG(v-1, q).

    Full enumeration is allowed only for (v, q) in {(4,2), (4,3)}; for
    (6, 2) a first-N sample (mode "first" with max_solutions) must be
    requested; anything larger is refused outright.  This provides
    samples and witnesses, not a classification.
    """
    key = (v, spec.q)
    if key not in _FULL_ENUMERATION:
        if key in _SAMPLING_ONLY:
            if mode != "first" or kwargs.get("max_solutions") is None:
                raise BudgetExceededError(
                    f"PG({v - 1},{spec.q}) allows only first-N sampling "
                    "(mode='first' with max_solutions)")
        else:
            raise BudgetExceededError(
                f"line-spread search of PG({v - 1},{spec.q}) is out of the "
                "desk-scale budget")
    cert = solve_exact_cover(pg_line_spread_instance(v, spec), mode, **kwargs)
    lines = enumerate_subspaces(v, 2, spec)
    for sol in cert.solutions:
        blocks = block_set([lines[j] for j in sol], v=v, q=spec.q, k=2)
        if spread_holes(blocks):
            raise RuntimeError("internal: solution is not a spread")
    return cert


def pg_spread_blocks(v: int, spec: FieldSpec, solution) -> BlockSet:
    """Convert a certificate solution (line indices) back to blocks."""
    lines = enumerate_subspaces(v, 2, spec)
    return block_set([lines[j] for j in solution], v=v, q=spec.q, k=2)


# ----------------------------------------------------------------------
# JSON form
# ----------------------------------------------------------------------

def certificate_to_json(cert: SearchCertificate) -> dict:
    return {
        "schema_version": 1,
        "digest": cert.digest,
        "mode": cert.mode,
        "solutions": [list(s) for s in cert.solutions],
        "nodes": cert.nodes_visited,
        "option_order": list(cert.option_order),
        "completed": cert.completed,
        "solution_count": cert.solution_count,
        "seed": cert.seed,
    }


def certificate_from_json(obj: dict) -> SearchCertificate:
    return SearchCertificate(
        digest=obj["digest"], mode=obj["mode"],
        solutions=tuple(tuple(s) for s in obj["solutions"]),
        nodes_visited=obj["nodes"],
        option_order=tuple(obj["option_order"]),
        completed=obj["completed"],
        solution_count=obj["solution_count"],
        seed=obj.get("seed"),
    )
