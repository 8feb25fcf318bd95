"""Exact solvers for six covering invariants, with witnesses.

tau, tau_t, tau_strong, gamma, gamma_t on hypergraphs and ec_t on graphs all
reduce to one problem: pick a minimum set of items meeting coverage
requirements (each a candidate mask plus a demand of 1 or 2), optionally under
the side constraint that every picked item has a picked neighbor.  One
branch-and-bound core solves that; thin wrappers build the encodings, and a
separate brute-force oracle checks the textbook definitions subset by subset.

Vertex sets are Python ints used as bit vectors, so width never caps n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .hcore import Hypergraph, neighborhood_masks
from .xform import Graph


class InfeasibleError(ValueError):
    """No selection of any size satisfies the instance."""


@dataclass(frozen=True)
class SolveResult:
    invariant: str   # tau | tau_t | tau_strong | gamma | gamma_t | ec_t
    value: int
    witness: tuple   # vertices, or (u, v) edge pairs for ec_t
    nodes: int
    method: str      # branch_and_bound | brute_force


def _bits(mask: int):
    while mask:
        b = mask & -mask
        mask ^= b
        yield b


def _min_selection(nitems: int, reqs, adj):
    """Minimum item set with >= need items inside each requirement mask.

    adj is None, or per-item neighbor masks (symmetric); when given, every
    selected item must see another selected item.  Returns (size, mask,
    nodes) or raises InfeasibleError.
    """
    if adj is None:
        allowed = (1 << nitems) - 1
    else:
        # an item with no neighbor can never satisfy the side constraint
        allowed = 0
        for i in range(nitems):
            if adj[i]:
                allowed |= 1 << i
    for mask, need in reqs:
        if (mask & allowed).bit_count() < need:
            raise InfeasibleError(
                f"requirement {bin(mask)} wants {need} usable items, "
                f"only {(mask & allowed).bit_count()} exist"
            )

    # drop requirements implied by a tighter one (subset with >= demand)
    eff = sorted(
        ((mask & allowed, need) for mask, need in reqs),
        key=lambda r: (r[0].bit_count(), -r[1]),
    )
    kept: list[tuple[int, int]] = []
    for mask, need in eff:
        if not any(km & ~mask == 0 and kn >= need for km, kn in kept):
            kept.append((mask, need))
    # restore original ordering so branching tie-breaks stay index-based
    order = {r: i for i, r in enumerate((m & allowed, nd) for m, nd in reqs)}
    kept.sort(key=lambda r: order[r])
    reqs = kept

    nodes = 0

    def greedy() -> int:
        sel = 0
        while True:
            deficits = [
                (mask, need - (mask & sel).bit_count()) for mask, need in reqs
            ]
            if all(d <= 0 for _, d in deficits):
                break
            best_gain, best_item = 0, -1
            for b in _bits(allowed & ~sel):
                gain = sum(
                    min(d, 1) for mask, d in deficits if d > 0 and mask & b
                )
                if gain > best_gain:
                    best_gain, best_item = gain, b
            sel |= best_item
        if adj is not None:
            while True:
                lonely = next(
                    (b for b in _bits(sel) if adj[b.bit_length() - 1] & sel == 0),
                    0,
                )
                if not lonely:
                    break
                cand = adj[lonely.bit_length() - 1] & allowed & ~sel
                sel |= cand & -cand
        return sel

    best_mask = greedy()
    best_size = best_mask.bit_count()

    def dfs(sel: int, size: int, banned: int):
        nonlocal nodes, best_mask, best_size
        nodes += 1
        active = []   # (candidates, deficit), cover constraints first
        for mask, need in reqs:
            d = need - (mask & sel).bit_count()
            if d <= 0:
                continue
            cand = mask & allowed & ~banned & ~sel
            if cand.bit_count() < d:
                return
            active.append((cand, d))
        if adj is not None:
            for b in _bits(sel):
                if adj[b.bit_length() - 1] & sel:
                    continue
                cand = adj[b.bit_length() - 1] & allowed & ~banned & ~sel
                if not cand:
                    return
                active.append((cand, 1))
        if not active:
            best_mask, best_size = sel, size
            return
        # disjoint requirements need disjoint picks: matching lower bound
        lb = 0
        used = 0
        for cand, d in sorted(active, key=lambda a: a[0].bit_count()):
            if cand & used == 0:
                lb += d
                used |= cand
        if size + lb >= best_size:
            return
        cand, d = min(active, key=lambda a: a[0].bit_count())
        out = banned
        rest = cand
        for b in _bits(cand):
            rest ^= b
            dfs(sel | b, size + 1, out)
            if size + 1 >= best_size:   # every later branch is at least as big
                return
            out |= b
            if rest.bit_count() < d:    # too few candidates left for the demand
                return

    dfs(0, 0, 0)
    return best_size, best_mask, nodes


def _vertices(mask: int) -> tuple[int, ...]:
    return tuple(b.bit_length() - 1 for b in _bits(mask))


# definitional predicates: deliberately set-based and encoding-free, used to
# re-check every witness and to drive the brute-force oracle

def is_transversal(H: Hypergraph, S) -> bool:
    s = set(S)
    return all(s.intersection(e) for e in H.edges)


def is_strong_transversal(H: Hypergraph, S) -> bool:
    s = set(S)
    return all(len(s.intersection(e)) >= 2 for e in H.edges)


def is_total_transversal(H: Hypergraph, S) -> bool:
    s = set(S)
    if not all(s.intersection(e) for e in H.edges):
        return False
    for v in s:
        if not any(v in e and s.intersection(e) - {v} for e in H.edges):
            return False
    return True


def is_dominating(H: Hypergraph, S) -> bool:
    s = set(S)
    covered = set(s)
    for e in H.edges:
        if s.intersection(e):
            covered.update(e)
    return len(covered) == H.n


def is_total_dominating(H: Hypergraph, S) -> bool:
    s = set(S)
    covered = set()
    for e in H.edges:
        for v in e:
            if s.intersection(e) - {v}:
                covered.add(v)
    return len(covered) == H.n


def is_total_edge_cover(G: Graph, F) -> bool:
    chosen = set(tuple(sorted(e)) for e in F)
    if not chosen.issubset(set(G.edges)):
        return False
    covered = {v for e in chosen for v in e}
    if len(covered) != G.n:
        return False
    for e in chosen:
        if not any(f != e and set(f) & set(e) for f in chosen):
            return False
    return True


_PREDICATES = {
    "tau": is_transversal,
    "tau_t": is_total_transversal,
    "tau_strong": is_strong_transversal,
    "gamma": is_dominating,
    "gamma_t": is_total_dominating,
    "ec_t": is_total_edge_cover,
}


def _finish(invariant, H_or_G, size, mask, nodes, to_witness):
    witness = to_witness(mask)
    if not _PREDICATES[invariant](H_or_G, witness):
        raise RuntimeError(
            f"solver produced an invalid {invariant} witness {witness}"
        )
    return SolveResult(invariant, size, witness, nodes, "branch_and_bound")


def tau(H: Hypergraph) -> SolveResult:
    size, mask, nodes = _min_selection(
        H.n, [(m, 1) for m in H.edge_masks()], None
    )
    return _finish("tau", H, size, mask, nodes, _vertices)


def tau_strong(H: Hypergraph) -> SolveResult:
    size, mask, nodes = _min_selection(
        H.n, [(m, 2) for m in H.edge_masks()], None
    )
    return _finish("tau_strong", H, size, mask, nodes, _vertices)


def tau_t(H: Hypergraph) -> SolveResult:
    size, mask, nodes = _min_selection(
        H.n, [(m, 1) for m in H.edge_masks()], neighborhood_masks(H)
    )
    return _finish("tau_t", H, size, mask, nodes, _vertices)


def gamma(H: Hypergraph) -> SolveResult:
    nb = neighborhood_masks(H)
    reqs = [(nb[v] | (1 << v), 1) for v in range(H.n)]
    size, mask, nodes = _min_selection(H.n, reqs, None)
    return _finish("gamma", H, size, mask, nodes, _vertices)


def gamma_t(H: Hypergraph) -> SolveResult:
    """Total domination, solved as a hitting set of the open neighborhoods:
    a set meeting every N(v) totally dominates, members included."""
    nb = neighborhood_masks(H)
    for v in range(H.n):
        if nb[v] == 0:
            raise InfeasibleError(f"vertex {v} is isolated, nothing can dominate it")
    size, mask, nodes = _min_selection(H.n, [(m, 1) for m in nb], None)
    return _finish("gamma_t", H, size, mask, nodes, _vertices)


def ec_t(G: Graph) -> SolveResult:
    """Minimum edge set covering every vertex with no chosen edge isolated."""
    deg = G.degrees()
    for v in range(G.n):
        if deg[v] == 0:
            raise InfeasibleError(f"vertex {v} is isolated, no edge covers it")
    incident = [0] * G.n
    for i, (u, v) in enumerate(G.edges):
        incident[u] |= 1 << i
        incident[v] |= 1 << i
    adj = [
        (incident[u] | incident[v]) & ~(1 << i)
        for i, (u, v) in enumerate(G.edges)
    ]
    for i in range(G.m):
        if adj[i] == 0:
            raise InfeasibleError(
                f"edge {G.edges[i]} is its own component, it would stay isolated"
            )
    size, mask, nodes = _min_selection(G.m, [(m, 1) for m in incident], adj)
    return _finish(
        "ec_t", G, size, mask, nodes,
        lambda m: tuple(G.edges[b.bit_length() - 1] for b in _bits(m)),
    )


_SOLVERS = {
    "tau": tau,
    "tau_t": tau_t,
    "tau_strong": tau_strong,
    "gamma": gamma,
    "gamma_t": gamma_t,
    "ec_t": ec_t,
}


def solve(obj, invariant: str) -> SolveResult:
    """Dispatch by invariant name; ec_t takes a Graph, the rest a Hypergraph."""
    if invariant not in _SOLVERS:
        raise ValueError(f"unknown invariant {invariant!r}")
    return _SOLVERS[invariant](obj)


def brute_force_oracle(obj, invariant: str, cap: int = 24) -> SolveResult:
    """Smallest witness by exhaustive subsets in (size, lex) order.

    Checks the raw definitions, sharing nothing with the branch-and-bound
    encoding.  Ground set: vertices, or edge indices for ec_t.
    """
    if invariant not in _PREDICATES:
        raise ValueError(f"unknown invariant {invariant!r}")
    pred = _PREDICATES[invariant]
    if invariant == "ec_t":
        ground = list(range(obj.m))
        materialize = lambda combo: tuple(obj.edges[i] for i in combo)
    else:
        ground = list(range(obj.n))
        materialize = tuple
    if len(ground) > cap:
        raise ValueError(f"{len(ground)} items exceeds the oracle cap {cap}")
    tested = 0
    for size in range(len(ground) + 1):
        for combo in itertools.combinations(ground, size):
            tested += 1
            witness = materialize(combo)
            if pred(obj, witness):
                return SolveResult(invariant, size, witness, tested, "brute_force")
    raise InfeasibleError(
        f"no {invariant} selection exists (all {tested} subsets checked)"
    )
