"""Graph edit distance between a test graph and a concept graph.

Exact edit distance is intractable in general, so classification uses an
anytime best-first search over partial node assignments with an admissible
lower bound and a hard wall-clock budget.  Interrupting the search returns
the cheapest complete edit path discovered so far — an upper bound on the
true distance — so a result always exists.  Substitution costs are
range-aware: a test value inside a concept attribute's learned range is
free, and cost grows with the distance to the nearest range boundary.

``exact_ged`` is an independent brute-force oracle for small instances; the
test suite checks the search against it.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import _kernels
from .errors import TooLarge
from .graph_core import (
    POINT,
    Category,
    ContourGraph,
    NodeRecord,
    canonical_traversal,
    edge_key,
    natural_key,
    numeric_bounds,
    numeric_value,
)

# Fixed attribute evaluation order; both the packed kernel and the reference
# function below accumulate in this order, which keeps them bit-identical.
NUMERIC_ATTR_ORDER = (
    "angle",
    "length",
    "mid_x",
    "mid_y",
    "normalized_mid_x",
    "normalized_mid_y",
    "normalized_x",
    "normalized_y",
    "x",
    "y",
)
CATEGORICAL_ATTR_ORDER = ("horizontal_direction", "quadrant", "vertical_direction")

DEFAULT_ATTR_WEIGHTS: Mapping[str, float] = {"angle": 0.5}


@dataclass(frozen=True)
class CostConfig:
    node_insert_cost: float = 1.0
    node_delete_cost: float = 1.0
    edge_insert_cost: float = 0.1
    edge_delete_cost: float = 0.1
    attr_weight: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_ATTR_WEIGHTS))
    default_attr_weight: float = 1.0
    presence_penalty: float = 0.25
    infinity: float = 1e9

    def __post_init__(self):
        finite = (
            self.node_insert_cost,
            self.node_delete_cost,
            self.edge_insert_cost,
            self.edge_delete_cost,
        )
        if any(c <= 0 or not np.isfinite(c) for c in finite):
            raise ValueError("edit costs must be finite and positive")
        if max(self.edge_insert_cost, self.edge_delete_cost) >= min(
            self.node_insert_cost, self.node_delete_cost
        ):
            raise ValueError("edge costs must stay below node costs")

    def weight(self, name: str) -> float:
        return self.attr_weight.get(name, self.default_attr_weight)

    def scaled(self, factor: float) -> "CostConfig":
        return CostConfig(
            self.node_insert_cost * factor,
            self.node_delete_cost * factor,
            self.edge_insert_cost * factor,
            self.edge_delete_cost * factor,
            {k: v * factor for k, v in self.attr_weight.items()},
            self.default_attr_weight * factor,
            self.presence_penalty,
            self.infinity,
        )


@dataclass(frozen=True)
class EditOp:
    op: str  # substitute-node | delete-node | insert-node | delete-edge | insert-edge
    source: str | tuple[str, str] | None
    target: str | tuple[str, str] | None
    cost: float

    def to_json_dict(self) -> dict:
        return {
            "op": self.op,
            "source": list(self.source) if isinstance(self.source, tuple) else self.source,
            "target": list(self.target) if isinstance(self.target, tuple) else self.target,
            "cost": self.cost,
        }


@dataclass(frozen=True)
class GedResult:
    distance: float
    edit_path: tuple[EditOp, ...]
    exact: bool
    elapsed: float

    def to_json_dict(self, include_timing: bool = False) -> dict:
        doc = {
            "distance": self.distance,
            "exact": self.exact,
            "edit_path": [op.to_json_dict() for op in self.edit_path],
        }
        if include_timing:
            doc["elapsed"] = self.elapsed
        return doc


def canonical_total(costs) -> float:
    """Sum a multiset of operation costs in ascending order.

    Any two computations of the same edit path then agree bit-for-bit.
    """
    return float(sum(sorted(costs)))


# --- node substitution cost -----------------------------------------------------

def node_subst_cost(u: NodeRecord, v: NodeRecord, cfg: CostConfig) -> float:
    """Cost of substituting test node u by concept node v.

    Incompatible base kinds (Point vs Line) cost the infinity sentinel.  Per
    numeric attribute the cost is zero inside v's range and the weighted
    distance to the nearest bound outside it; categorical attributes are
    free on a match and infinite on a mismatch; an attribute present on only
    one side adds a weighted presence penalty.
    """
    if u.kind != v.kind:
        return cfg.infinity
    total = 0.0
    for name in NUMERIC_ATTR_ORDER:
        in_u = name in u.attrs
        in_v = name in v.attrs
        if in_u and in_v:
            val = numeric_value(u.attrs[name])
            lo, hi = numeric_bounds(v.attrs[name])
            if val < lo:
                dev = lo - val
            elif val > hi:
                dev = val - hi
            else:
                dev = 0.0
            total = total + cfg.weight(name) * dev
        elif in_u or in_v:
            total = total + cfg.weight(name) * cfg.presence_penalty
    for name in CATEGORICAL_ATTR_ORDER:
        a = u.attrs.get(name)
        b = v.attrs.get(name)
        if a is not None and b is not None:
            if a.label != b.label:
                total = total + cfg.infinity
        elif a is not None or b is not None:
            total = total + cfg.weight(name) * cfg.presence_penalty
    total = total + _tag_cost(u, v, cfg)
    return total


def _tag_cost(u: NodeRecord, v: NodeRecord, cfg: CostConfig) -> float:
    a = u.attrs.get("tags")
    b = v.attrs.get("tags")
    if a is None and b is None:
        return 0.0
    if a is None or b is None:
        return cfg.weight("tags") * cfg.presence_penalty
    if a.labels == b.labels:
        return 0.0
    union = a.labels | b.labels
    jaccard = len(a.labels & b.labels) / len(union)
    return cfg.weight("tags") * (1.0 - jaccard)


def _pack_graphs(g: ContourGraph, c: ContourGraph, g_ids, c_ids, cfg: CostConfig):
    na = len(NUMERIC_ATTR_ORDER)
    nk = len(CATEGORICAL_ATTR_ORDER)
    labels = set()
    for graph, ids in ((g, g_ids), (c, c_ids)):
        for nid in ids:
            for name in CATEGORICAL_ATTR_ORDER:
                val = graph.nodes[nid].attrs.get(name)
                if isinstance(val, Category):
                    labels.add(val.label)
    code = {lab: i for i, lab in enumerate(sorted(labels))}

    def pack(graph, ids, is_concept):
        n = len(ids)
        kind = np.zeros(n, dtype=np.int8)
        num_lo = np.zeros((n, na))
        num_hi = np.zeros((n, na))
        num_val = np.zeros((n, na))
        num_mask = np.zeros((n, na), dtype=bool)
        cat = np.full((n, nk), -1, dtype=np.int64)
        for i, nid in enumerate(ids):
            rec = graph.nodes[nid]
            kind[i] = 0 if rec.kind == POINT else 1
            for a, name in enumerate(NUMERIC_ATTR_ORDER):
                val = rec.attrs.get(name)
                if val is not None:
                    num_mask[i, a] = True
                    if is_concept:
                        num_lo[i, a], num_hi[i, a] = numeric_bounds(val)
                    else:
                        num_val[i, a] = numeric_value(val)
            for k, name in enumerate(CATEGORICAL_ATTR_ORDER):
                val = rec.attrs.get(name)
                if isinstance(val, Category):
                    cat[i, k] = code[val.label]
        return kind, num_val, num_lo, num_hi, num_mask, cat

    kind_g, num_val_g, _, _, mask_g, cat_g = pack(g, g_ids, is_concept=False)
    kind_c, _, num_lo_c, num_hi_c, mask_c, cat_c = pack(c, c_ids, is_concept=True)
    num_w = np.array([cfg.weight(name) for name in NUMERIC_ATTR_ORDER])
    cat_w = np.array([cfg.weight(name) for name in CATEGORICAL_ATTR_ORDER])
    return (
        kind_g, kind_c, num_val_g, mask_g, num_lo_c, num_hi_c, mask_c,
        num_w, cat_g, cat_c, cat_w,
    )


def substitution_matrix(
    g: ContourGraph, c: ContourGraph, g_ids: list[str], c_ids: list[str], cfg: CostConfig
) -> np.ndarray:
    """Dense [len(g_ids), len(c_ids)] node-substitution cost matrix."""
    if not g_ids or not c_ids:
        return np.zeros((len(g_ids), len(c_ids)))
    packed = _pack_graphs(g, c, g_ids, c_ids, cfg)
    matrix = _kernels.cost_matrix(*packed, cfg.presence_penalty, cfg.infinity)
    tagged = any(
        "tags" in graph.nodes[nid].attrs for graph, ids in ((g, g_ids), (c, c_ids)) for nid in ids
    )
    if tagged:
        kind_g, kind_c = packed[0], packed[1]
        for i, gid in enumerate(g_ids):
            for j, cid in enumerate(c_ids):
                if kind_g[i] == kind_c[j]:
                    matrix[i, j] = matrix[i, j] + _tag_cost(g.nodes[gid], c.nodes[cid], cfg)
    return matrix


# --- definitional cost of a complete mapping --------------------------------------

def mapping_cost(
    g: ContourGraph, c: ContourGraph, mapping: Mapping[str, str | None], cfg: CostConfig
) -> tuple[float, tuple[EditOp, ...]]:
    """Edit path and total cost implied by a complete node mapping.

    This is the plain definition — node substitutions/deletions/insertions
    plus unmatched-edge deletions/insertions — computed directly from the
    two graphs.  Both the search and the brute-force oracle report through
    it, so their results are comparable exactly.
    """
    ops: list[EditOp] = []
    inverse: dict[str, str] = {}
    for gid in sorted(g.nodes, key=natural_key):
        target = mapping.get(gid)
        if target is None:
            ops.append(EditOp("delete-node", gid, None, cfg.node_delete_cost))
        else:
            inverse[target] = gid
            ops.append(
                EditOp("substitute-node", gid, target, node_subst_cost(g.nodes[gid], c.nodes[target], cfg))
            )
    for cid in sorted(c.nodes, key=natural_key):
        if cid not in inverse:
            ops.append(EditOp("insert-node", None, cid, cfg.node_insert_cost))
    for a, b in sorted(g.edges):
        ma, mb = mapping.get(a), mapping.get(b)
        if not (ma is not None and mb is not None and edge_key(ma, mb) in c.edges):
            ops.append(EditOp("delete-edge", (a, b), None, cfg.edge_delete_cost))
    for x, y in sorted(c.edges):
        pa, pb = inverse.get(x), inverse.get(y)
        if not (pa is not None and pb is not None and edge_key(pa, pb) in g.edges):
            ops.append(EditOp("insert-edge", None, (x, y), cfg.edge_insert_cost))
    return canonical_total(op.cost for op in ops), tuple(ops)


# --- brute-force oracle ------------------------------------------------------------

ORACLE_NODE_LIMIT = 12


def exact_ged(g: ContourGraph, c: ContourGraph, cfg: CostConfig | None = None) -> GedResult:
    """Guaranteed-minimum edit distance by exhaustive mapping enumeration.

    Only instances with at most `ORACLE_NODE_LIMIT` nodes in total are
    accepted.  Used as the verification oracle for the anytime search.
    """
    cfg = cfg or CostConfig()
    if len(g.nodes) + len(c.nodes) > ORACLE_NODE_LIMIT:
        raise TooLarge(
            f"{len(g.nodes)} + {len(c.nodes)} nodes exceeds the oracle limit of {ORACLE_NODE_LIMIT}"
        )
    started = time.monotonic()
    g_ids = sorted(g.nodes, key=natural_key)
    c_ids = sorted(c.nodes, key=natural_key)
    best: list = [np.inf, None]

    def descend(k: int, used: set[str], node_cost: float, mapping: dict[str, str | None]):
        if node_cost >= best[0]:
            return
        if k == len(g_ids):
            total, _ = mapping_cost(g, c, mapping, cfg)
            if total < best[0]:
                best[0] = total
                best[1] = dict(mapping)
            return
        gid = g_ids[k]
        for cid in c_ids:
            if cid in used:
                continue
            mapping[gid] = cid
            used.add(cid)
            descend(k + 1, used, node_cost + node_subst_cost(g.nodes[gid], c.nodes[cid], cfg), mapping)
            used.discard(cid)
        mapping[gid] = None
        descend(k + 1, used, node_cost + cfg.node_delete_cost, mapping)
        del mapping[gid]

    descend(0, set(), 0.0, {})
    distance, ops = mapping_cost(g, c, best[1] if best[1] is not None else {}, cfg)
    return GedResult(distance, ops, True, time.monotonic() - started)


# --- anytime best-first search -------------------------------------------------------

def _node_order(g: ContourGraph) -> list[str]:
    if g.start_point() is not None:
        return canonical_traversal(g)
    return sorted(g.nodes, key=natural_key)


def _adjacency_matrix(g: ContourGraph, ids: list[str]) -> np.ndarray:
    index = {nid: i for i, nid in enumerate(ids)}
    adj = np.zeros((len(ids), len(ids)), dtype=bool)
    for a, b in g.edges:
        ia, ib = index[a], index[b]
        adj[ia, ib] = adj[ib, ia] = True
    return adj


class _Search:
    """Internal state for one budgeted search instance."""

    def __init__(self, g: ContourGraph, c: ContourGraph, cfg: CostConfig):
        self.cfg = cfg
        self.g_ids = _node_order(g)
        self.c_ids = sorted(c.nodes, key=natural_key)
        self.n = len(self.g_ids)
        self.m = len(self.c_ids)
        self.M = substitution_matrix(g, c, self.g_ids, self.c_ids, cfg)
        self.gadj = _adjacency_matrix(g, self.g_ids)
        self.cadj = _adjacency_matrix(c, self.c_ids)
        self.gdeg = self.gadj.sum(axis=1)
        self.total_c_edges = int(self.cadj.sum()) // 2
        self.suffix_edges = np.zeros(self.n + 1, dtype=np.int64)
        idx = {nid: i for i, nid in enumerate(self.g_ids)}
        for a, b in g.edges:
            self.suffix_edges[: min(idx[a], idx[b]) + 1] += 1
        self.min_edge_cost = min(cfg.edge_delete_cost, cfg.edge_insert_cost)

    def prefix_info(self, assign: tuple[int, ...]):
        prev_real = [j for j, v in enumerate(assign) if v < self.m]
        imgs = np.array([assign[j] for j in prev_real], dtype=np.int64)
        used = np.zeros(self.m, dtype=bool)
        used[imgs] = True
        prev_eps = [j for j, v in enumerate(assign) if v == self.m]
        return prev_real, imgs, used, prev_eps

    def deltas(self, i: int, assign, prev_real, imgs, unused, prev_eps):
        """Incremental cost of assigning g-node i to each unused c-node or to
        deletion, given the decided prefix."""
        cfg = self.cfg
        if len(prev_real):
            g_row = self.gadj[i, prev_real]
            ce = self.cadj[np.ix_(unused, imgs)]
            del_cnt = (g_row & ~ce).sum(axis=1)
            ins_cnt = (~g_row & ce).sum(axis=1)
        else:
            del_cnt = np.zeros(len(unused), dtype=np.int64)
            ins_cnt = del_cnt
        delta_real = (
            self.M[i, unused]
            + cfg.edge_delete_cost * del_cnt
            + cfg.edge_insert_cost * ins_cnt
        )
        eps_edges = int(self.gdeg[i])
        if prev_eps:
            eps_edges -= int(self.gadj[i, prev_eps].sum())
        delta_eps = cfg.node_delete_cost + cfg.edge_delete_cost * eps_edges
        return delta_real, float(delta_eps)

    def insert_phase(self, imgs, extra_img: int | None):
        cfg = self.cfg
        used_count = len(imgs) + (1 if extra_img is not None else 0)
        if len(imgs):
            resolved = int(self.cadj[np.ix_(imgs, imgs)].sum()) // 2
            if extra_img is not None:
                resolved += int(self.cadj[extra_img, imgs].sum())
        else:
            resolved = 0
        return (
            cfg.node_insert_cost * (self.m - used_count)
            + cfg.edge_insert_cost * (self.total_c_edges - resolved)
        )

    def child_heuristics(self, i: int, unused: np.ndarray):
        """Admissible lower bounds for each child of a state at depth i.

        Returns (h_for_real_candidates aligned with `unused`, h_for_epsilon).
        """
        cfg = self.cfg
        rem = self.n - i - 1
        u = len(unused)
        # node terms
        if rem == 0:
            node_eps = 0.0
            node_real = np.zeros(u)
        elif u == 0:
            node_eps = cfg.node_delete_cost * rem
            node_real = np.zeros(0)
        else:
            sub = self.M[i + 1 :, :][:, unused]
            min1 = sub.min(axis=1)
            arg1 = sub.argmin(axis=1)
            clipped = np.minimum(min1, cfg.node_delete_cost)
            base = float(clipped.sum())
            node_eps = base
            if u >= 2:
                part = np.partition(sub, 1, axis=1)
                min2 = part[:, 1]
            else:
                min2 = np.full(rem, np.inf)
            diff = np.minimum(min2, cfg.node_delete_cost) - clipped
            adjust = np.bincount(arg1, weights=diff, minlength=u)
            node_real = base + adjust
        # unavoidable insertions
        extra_eps = max(0, u - rem)
        extra_real = np.maximum(0, (u - 1) - rem) if u else np.zeros(0)
        # edge-count bound
        e_g = int(self.suffix_edges[i + 1]) if i + 1 <= self.n else 0
        if u:
            ec_all = int(self.cadj[np.ix_(unused, unused)].sum()) // 2
            ec_real = ec_all - self.cadj[unused][:, unused].sum(axis=1)
        else:
            ec_all = 0
            ec_real = np.zeros(0)
        h_eps = node_eps + self.cfg.node_insert_cost * extra_eps + abs(e_g - ec_all) * self.min_edge_cost
        h_real = (
            node_real
            + self.cfg.node_insert_cost * extra_real
            + np.abs(e_g - ec_real) * self.min_edge_cost
        )
        return h_real, float(h_eps)

    def greedy_complete(self, assign: tuple[int, ...], gcost: float):
        assign = list(assign)
        total = gcost
        while len(assign) < self.n:
            i = len(assign)
            prev_real, imgs, used, prev_eps = self.prefix_info(tuple(assign))
            unused = np.flatnonzero(~used)
            delta_real, delta_eps = self.deltas(i, assign, prev_real, imgs, unused, prev_eps)
            choice, cost = self.m, delta_eps
            if len(unused):
                t = int(np.argmin(delta_real))
                if float(delta_real[t]) < cost:
                    choice, cost = int(unused[t]), float(delta_real[t])
            assign.append(choice)
            total += cost
        _, imgs, _, _ = self.prefix_info(tuple(assign))
        total += self.insert_phase(imgs, None)
        return total, tuple(assign)

    def assign_cost(self, assign: tuple[int, ...]) -> float:
        """True incremental-model cost of a complete assignment, one shot."""
        cfg = self.cfg
        vec = np.asarray(assign, dtype=np.int64)
        real = vec < self.m
        total = float(self.M[np.flatnonzero(real), vec[real]].sum()) if real.any() else 0.0
        total += cfg.node_delete_cost * int((~real).sum())
        total += cfg.node_insert_cost * (self.m - int(real.sum()))
        matched_g = 0
        ga, gb = np.nonzero(np.triu(self.gadj, 1))
        if len(ga):
            va, vb = vec[ga], vec[gb]
            ok = (va < self.m) & (vb < self.m)
            matched_g = int(self.cadj[va[ok], vb[ok]].sum())
        total += cfg.edge_delete_cost * (int(self.gadj.sum()) // 2 - matched_g)
        total += cfg.edge_insert_cost * (self.total_c_edges - matched_g)
        return total

    def lsa_bound(self, i: int, assign: tuple[int, ...], unused: np.ndarray):
        """Assignment-relaxation lower bound on the remaining node costs,
        plus the complete mapping realizing it (a strong upper bound once
        its true cost is evaluated)."""
        rem = self.n - i
        u = len(unused)
        big = self.cfg.infinity
        size = rem + u
        if size == 0:
            return 0.0, tuple(assign)
        cost = np.full((size, size), big)
        if rem and u:
            cost[:rem, :u] = self.M[i:, :][:, unused]
        for r in range(rem):
            cost[r, u + r] = self.cfg.node_delete_cost
        for t in range(u):
            cost[rem + t, t] = self.cfg.node_insert_cost
        if rem and u:
            cost[rem:, u:] = 0.0
        rows, cols = linear_sum_assignment(cost)
        bound = float(cost[rows, cols].sum())
        # scipy returns row indices in ascending order, so cols[r] pairs row r
        completion = list(assign)
        for r in range(rem):
            j = int(cols[r])
            completion.append(int(unused[j]) if j < u else self.m)
        return bound, tuple(completion)

    def mapping_of(self, assign: tuple[int, ...]) -> dict[str, str | None]:
        return {
            self.g_ids[j]: (self.c_ids[v] if v < self.m else None)
            for j, v in enumerate(assign)
        }


def ged_search(
    g: ContourGraph, c_graph_or_concept, cfg: CostConfig | None = None, budget: float = 60.0
) -> GedResult:
    """Anytime upper-bound edit distance within a wall-clock budget (seconds).

    Best-first search over node-assignment prefixes, tie-broken by the
    assignment prefix itself so runs are reproducible.  `exact` is true only
    when the search provably finished; on budget expiry the best complete
    edit path found so far is returned.
    """
    cfg = cfg or CostConfig()
    c = c_graph_or_concept.graph if hasattr(c_graph_or_concept, "graph") else c_graph_or_concept
    started = time.monotonic()
    s = _Search(g, c, cfg)

    best_cost, best_assign = s.greedy_complete((), 0.0)
    exact = False

    if s.n == 0:
        exact = True
    else:
        # Heap entries: (lower bound f, assignment prefix, cost so far,
        # certified).  Ties on f break on the assignment prefix itself, so
        # the expansion order is reproducible.  A popped uncertified state is
        # re-scored with the (tighter) assignment-relaxation bound and pushed
        # back if that bound worsened its f; the relaxation's own matching
        # doubles as a strong incumbent candidate.
        heap: list[tuple[float, tuple[int, ...], float, bool]] = []
        heapq.heappush(heap, (0.0, (), 0.0, False))
        while heap:
            if time.monotonic() - started > budget:
                f, assign, gc, _ = heap[0]
                prev_real, imgs, used, prev_eps = s.prefix_info(assign)
                _, completion = s.lsa_bound(len(assign), assign, np.flatnonzero(~used))
                total = s.assign_cost(completion)
                if total < best_cost:
                    best_cost, best_assign = total, completion
                break
            f, assign, gc, certified = heapq.heappop(heap)
            if f >= best_cost:
                continue
            i = len(assign)
            if i == s.n:
                best_cost, best_assign = gc, assign
                exact = True
                break
            prev_real, imgs, used, prev_eps = s.prefix_info(assign)
            unused = np.flatnonzero(~used)
            if not certified:
                lsa, completion = s.lsa_bound(i, assign, unused)
                total = s.assign_cost(completion)
                if total < best_cost:
                    best_cost, best_assign = total, completion
                e_g = int(s.suffix_edges[i])
                e_c = int(s.cadj[np.ix_(unused, unused)].sum()) // 2 if len(unused) else 0
                f_new = gc + lsa + abs(e_g - e_c) * s.min_edge_cost
                if f_new >= best_cost:
                    continue
                if f_new > f:
                    heapq.heappush(heap, (f_new, assign, gc, True))
                    continue
            delta_real, delta_eps = s.deltas(i, assign, prev_real, imgs, unused, prev_eps)
            if i + 1 == s.n:
                for t, v in enumerate(unused):
                    child_g = gc + float(delta_real[t]) + s.insert_phase(imgs, int(v))
                    if child_g < best_cost:
                        heapq.heappush(heap, (child_g, assign + (int(v),), child_g, True))
                child_g = gc + delta_eps + s.insert_phase(imgs, None)
                if child_g < best_cost:
                    heapq.heappush(heap, (child_g, assign + (s.m,), child_g, True))
            else:
                h_real, h_eps = s.child_heuristics(i, unused)
                for t, v in enumerate(unused):
                    child_g = gc + float(delta_real[t])
                    child_f = child_g + float(h_real[t])
                    if child_f < best_cost:
                        heapq.heappush(heap, (child_f, assign + (int(v),), child_g, False))
                child_g = gc + delta_eps
                child_f = child_g + h_eps
                if child_f < best_cost:
                    heapq.heappush(heap, (child_f, assign + (s.m,), child_g, False))
        else:
            exact = True

    mapping = s.mapping_of(best_assign)
    distance, ops = mapping_cost(g, c, mapping, cfg)
    return GedResult(distance, ops, exact, time.monotonic() - started)
