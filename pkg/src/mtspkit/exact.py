"""Exact solving: constraint model, branch-and-bound, brute-force oracle.

The model mirrors the classic single-depot integer program with MTZ-style
order variables: m routes leave and re-enter the depot, every customer is
entered and left exactly once, each route carries between ``min_customers``
and ``max_customers`` customers, and (when ``min_customers > 2``) no route
may consist of a single out-and-back customer. ``check_solution`` verifies
a plan both through those counting rules and through the literal linear
inequalities evaluated on the plan's induced arc/order variables.

The solver is a combinatorial best-first branch-and-bound over partial
route extensions rather than an LP relaxation; the linear model is the
correctness semantics, not the search machinery.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from enum import Enum
from heapq import heappush, heappop

import numpy as np

from .instance import Instance, RoutePlan, evaluate_plan
from .heuristics import nearest_node

_EPS = 1e-9


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    FEASIBLE_TIME_LIMIT = "feasible_time_limit"
    INFEASIBLE = "infeasible"


class InfeasibleModelError(ValueError):
    """The balance window cannot cover the customers: m*K > n-1 or m*L < n-1."""


@dataclass(frozen=True)
class ExactModel:
    instance: Instance
    m: int
    min_customers: int
    max_customers: int
    warm_start: RoutePlan | None = None
    max_route_distance: float | None = None
    max_total_distance: float | None = None


@dataclass(frozen=True)
class ExactResult:
    status: SolveStatus
    best: RoutePlan | None
    objective: float
    lower_bound: float
    nodes_explored: int
    wall_time: float


def build_model(
    instance: Instance,
    m: int,
    min_customers: int,
    max_customers: int,
    warm_start: RoutePlan | None = None,
    heuristic_cuts: bool = False,
) -> ExactModel:
    """Assemble and validate the constraint system.

    ``heuristic_cuts`` turns on the optional pruning caps derived from the
    warm-start plan (per-route cap = its longest route, total cap = its
    total); when no warm start is given the nearest-node plan is used.
    """
    n = instance.n
    if m < 1:
        raise ValueError("need at least one salesman")
    if min_customers < 1:
        raise ValueError("min_customers must be at least 1")
    if min_customers > max_customers:
        raise ValueError("min_customers exceeds max_customers")
    if m * min_customers > n - 1 or m * max_customers < n - 1:
        raise InfeasibleModelError(
            f"window [{min_customers}, {max_customers}] with {m} routes cannot "
            f"cover {n - 1} customers"
        )
    route_cap = total_cap = None
    if heuristic_cuts:
        if warm_start is None:
            warm_start = nearest_node(instance, m)
        route_cap = warm_start.max_route_distance
        total_cap = warm_start.total_distance
    return ExactModel(
        instance, m, min_customers, max_customers, warm_start, route_cap, total_cap
    )


def check_solution(model: ExactModel, plan: RoutePlan):
    """Return ``(ok, violations)`` for a plan against the model.

    Structural defects (bad depot usage, repeated or missing nodes) raise
    ``PlanError``; model-constraint violations are collected and returned.
    """
    plan = evaluate_plan(model.instance, plan.routes)  # structural rejection
    violations = []
    if plan.m != model.m:
        violations.append(f"plan has {plan.m} routes, model requires {model.m}")
    for idx, count in enumerate(plan.customer_counts(), start=1):
        if count < model.min_customers:
            violations.append(
                f"route {idx} visits {count} customers, below minimum "
                f"{model.min_customers}"
            )
        if count > model.max_customers:
            violations.append(
                f"route {idx} visits {count} customers, above maximum "
                f"{model.max_customers}"
            )
        if model.min_customers > 2 and count == 1:
            violations.append(f"route {idx} is a forbidden two-node tour")
    violations.extend(_linear_violations(model, plan))
    return not violations, violations


def _linear_violations(model: ExactModel, plan: RoutePlan):
    """Evaluate the linear inequalities on the plan's induced variables.

    Arc variables x[i][j] are 1 exactly for consecutive route hops; order
    variables carry each customer's 1-based position within its route.
    Redundant with the counting checks for any structurally valid plan, but
    kept as the literal reading of the model.
    """
    if plan.m != model.m:
        return []  # counting check already reported; degree sums would be noise
    n = model.instance.n
    upper = model.max_customers
    lower = model.min_customers
    x = np.zeros((n + 1, n + 1), dtype=np.int64)
    u = np.zeros(n + 1, dtype=np.int64)
    for route in plan.routes:
        for a, b in zip(route[:-1], route[1:]):
            x[a, b] += 1
        for position, node in enumerate(route[1:-1], start=1):
            u[node] = position
    out = []
    if x[1, 2:].sum() != model.m or x[2:, 1].sum() != model.m:
        out.append("depot degree differs from m")
    for j in range(2, n + 1):
        if x[:, j].sum() != 1 or x[j, :].sum() != 1:
            out.append(f"node {j} not entered and left exactly once")
    for i in range(2, n + 1):
        if u[i] + (upper - 2) * x[1, i] - x[i, 1] > upper - 1:
            out.append(f"route-size upper bound violated at node {i}")
        if u[i] + x[1, i] + (2 - lower) * x[i, 1] < 2:
            out.append(f"route-size lower bound violated at node {i}")
        if lower > 2 and x[1, i] + x[i, 1] > 1:
            out.append(f"two-node tour through node {i}")
    for i in range(2, n + 1):
        for j in range(2, n + 1):
            if i != j and u[i] - u[j] + upper * x[i, j] + (upper - 2) * x[j, i] > upper - 1:
                out.append(f"order inconsistency on arc ({i}, {j})")
    return out


# ---------------------------------------------------------------------------
# branch and bound

def completion_bound(dist, ends, counts, closed, unvisited, min_customers):
    """Admissible completion cost for a partial state (0-based nodes).

    Every unvisited customer still needs one outgoing arc (to another
    unvisited customer or the depot); every open route end needs one
    continuation (a customer, or the depot once the route reached the
    minimum). Summing each term's cheapest option never overestimates.
    """
    uv = unvisited
    bound = 0.0
    for v in uv:
        best = dist[v, 0]
        for w in uv:
            if w != v and dist[v, w] < best:
                best = dist[v, w]
        bound += best
    for k, end in enumerate(ends):
        if closed[k]:
            continue
        best = np.inf
        if counts[k] >= min_customers:
            best = dist[end, 0]
        for w in uv:
            if dist[end, w] < best:
                best = dist[end, w]
        if not np.isfinite(best):
            return np.inf  # open route below minimum with nothing left to visit
        bound += best
    return bound


def solve_exact(model: ExactModel, time_limit: float | None = None) -> ExactResult:
    """Best-first branch and bound over partial route extensions.

    A search node holds m partially built routes. The route with the
    fewest customers (lowest index on ties) is active; branching appends
    one unvisited customer (candidates in ascending arc cost) or closes
    the route once it reached the minimum size. Routes are interchangeable,
    so first customers are forced into ascending order across routes, which
    prunes label-permuted duplicates only. Single-threaded and
    deterministic.
    """
    if time_limit is not None and time_limit <= 0:
        raise ValueError("time_limit must be positive")
    dist = model.instance.matrix
    n = model.instance.n
    m = model.m
    kmin, kmax = model.min_customers, model.max_customers
    route_cap = model.max_route_distance
    total_cap = model.max_total_distance

    incumbent_cost = np.inf
    incumbent_routes = None
    if model.warm_start is not None:
        ok, violations = check_solution(model, model.warm_start)
        if not ok:
            raise ValueError(f"warm start violates the model: {violations[0]}")
        incumbent_cost = model.warm_start.total_distance
        incumbent_routes = tuple(tuple(v - 1 for v in r[1:-1]) for r in model.warm_start.routes)

    start_time = time.perf_counter()
    root = (
        0.0,                      # cost of fixed arcs
        (0.0,) * m,               # per-route fixed cost
        ((),) * m,                # customer sequences (0-based)
        (0,) * m,                 # current end of each route (depot = 0)
        (False,) * m,             # closed flags
        frozenset(range(1, n)),   # unvisited customers
    )
    counter = itertools.count()
    heap = [(0.0, next(counter), root)]
    explored = 0
    best_bound_seen = 0.0
    timed_out = False

    while heap:
        bound, _, state = heappop(heap)
        if bound >= incumbent_cost - _EPS:
            best_bound_seen = incumbent_cost
            break
        best_bound_seen = max(best_bound_seen, bound)
        explored += 1
        if time_limit is not None and explored % 256 == 0:
            if time.perf_counter() - start_time > time_limit:
                timed_out = True
                break

        cost, route_costs, seqs, ends, closed, unvisited = state
        open_routes = [k for k in range(m) if not closed[k]]
        # feasibility of any completion under the size window
        if sum(kmax - len(seqs[k]) for k in open_routes) < len(unvisited):
            continue
        if sum(max(kmin - len(seqs[k]), 0) for k in open_routes) > len(unvisited):
            continue
        if not open_routes:
            if not unvisited and cost < incumbent_cost - _EPS:
                incumbent_cost = cost
                incumbent_routes = seqs
            continue
        active = min(open_routes, key=lambda k: (len(seqs[k]), k))
        end = ends[active]

        children = []
        if len(seqs[active]) < kmax and unvisited:
            floor = -1
            if not seqs[active] and active > 0:
                floor = seqs[active - 1][0]  # label symmetry: first customers ascend
            for node in sorted(unvisited, key=lambda v: (dist[end, v], v)):
                if node <= floor:
                    continue
                arc = dist[end, node]
                new_route_cost = route_costs[active] + arc
                if route_cap is not None and new_route_cost > route_cap + _EPS:
                    continue
                children.append(
                    (
                        cost + arc,
                        _replace(route_costs, active, new_route_cost),
                        _replace(seqs, active, seqs[active] + (node,)),
                        _replace(ends, active, node),
                        closed,
                        unvisited - {node},
                    )
                )
        if len(seqs[active]) >= kmin:
            arc = dist[end, 0]
            closing_route_cost = route_costs[active] + arc
            if route_cap is None or closing_route_cost <= route_cap + _EPS:
                children.append(
                    (
                        cost + arc,
                        _replace(route_costs, active, closing_route_cost),
                        seqs,
                        _replace(ends, active, 0),
                        _replace(closed, active, True),
                        unvisited,
                    )
                )

        for child in children:
            c_cost = child[0]
            if total_cap is not None and c_cost > total_cap + _EPS:
                continue
            c_closed, c_unvisited = child[4], child[5]
            if all(c_closed) and not c_unvisited:
                if c_cost < incumbent_cost - _EPS:
                    incumbent_cost = c_cost
                    incumbent_routes = child[2]
                continue
            child_bound = c_cost + completion_bound(
                dist, child[3], [len(s) for s in child[2]], c_closed,
                c_unvisited, kmin,
            )
            if child_bound < incumbent_cost - _EPS:
                heappush(heap, (child_bound, next(counter), child))

    wall = time.perf_counter() - start_time
    if incumbent_routes is None:
        status = SolveStatus.FEASIBLE_TIME_LIMIT if timed_out else SolveStatus.INFEASIBLE
        return ExactResult(status, None, np.inf, best_bound_seen, explored, wall)
    plan = evaluate_plan(
        model.instance, [(1, *[v + 1 for v in seq], 1) for seq in incumbent_routes]
    )
    if timed_out:
        return ExactResult(
            SolveStatus.FEASIBLE_TIME_LIMIT, plan, plan.total_distance,
            best_bound_seen, explored, wall,
        )
    return ExactResult(
        SolveStatus.OPTIMAL, plan, plan.total_distance, plan.total_distance,
        explored, wall,
    )


def _replace(tup, idx, value):
    return tup[:idx] + (value,) + tup[idx + 1 :]


# ---------------------------------------------------------------------------
# brute force

def brute_force_oracle(
    instance: Instance, m: int, min_customers: int, max_customers: int
) -> ExactResult:
    """Enumerate every feasible plan; only sane for tiny instances (n <= 11).

    All permutations of the customers are split into m consecutive segments
    with sizes inside the window; segment-label duplicates are skipped by
    requiring segment heads in ascending order.
    """
    n = instance.n
    if n > 11:
        raise ValueError("brute force is limited to n <= 11")
    model = build_model(instance, m, min_customers, max_customers)  # window check
    dist = instance.matrix
    customers = list(range(1, n))
    sizes = [
        comp
        for comp in _compositions(n - 1, m)
        if all(model.min_customers <= part <= model.max_customers for part in comp)
    ]
    if not sizes:
        raise InfeasibleModelError("no route sizes fit the window")
    best_cost = np.inf
    best_routes = None
    evaluated = 0
    start_time = time.perf_counter()
    for perm in itertools.permutations(customers):
        for comp in sizes:
            routes = []
            offset = 0
            heads_ascend = True
            for part in comp:
                seg = perm[offset : offset + part]
                if routes and seg[0] < routes[-1][0]:
                    heads_ascend = False
                    break
                routes.append(seg)
                offset += part
            if not heads_ascend:
                continue
            evaluated += 1
            cost = 0.0
            for seg in routes:
                cost += dist[0, seg[0]]
                for a, b in zip(seg[:-1], seg[1:]):
                    cost += dist[a, b]
                cost += dist[seg[-1], 0]
            if cost < best_cost - _EPS:
                best_cost = cost
                best_routes = routes
    wall = time.perf_counter() - start_time
    plan = evaluate_plan(
        instance, [(1, *[v + 1 for v in seg], 1) for seg in best_routes]
    )
    return ExactResult(
        SolveStatus.OPTIMAL, plan, plan.total_distance, plan.total_distance,
        evaluated, wall,
    )


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)
