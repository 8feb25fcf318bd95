"""Canonical forms, enumeration, ratio search, theorem harness, sweep."""

import itertools
import math
import random
from fractions import Fraction

import pytest

from hypertrans.hcore import Hypergraph, class_check, hypergraph
from hypertrans.solve import tau_t
from hypertrans.xform import family_Fk
from hypertrans.xsearch import (
    asymptotic_sweep,
    canonical_form,
    canonical_key,
    enumerate_Hk,
    estimate_bk,
    invariant_signature,
    is_canonical,
    random_hypergraph,
    verify_bounds,
)


def _relabel(H, perm):
    return hypergraph(H.n, [[perm[v] for v in e] for e in H.edges])


def _isomorphic(A, B):
    # brute force on purpose: independent of canonical_key
    if (A.n, A.m) != (B.n, B.m):
        return False
    if invariant_signature(A) != invariant_signature(B):
        return False
    target = set(B.edges)
    for perm in itertools.permutations(range(A.n)):
        if all(tuple(sorted(perm[v] for v in e)) in target for e in A.edges):
            return True
    return False


def _labeled_instances(k, n, m_max):
    """Every labeled instance on exactly n vertices: no isolated vertex or
    edge, at least two edges, at most m_max."""
    pool = list(itertools.combinations(range(n), k))
    out = []
    for m in range(2, m_max + 1):
        for edges in itertools.combinations(pool, m):
            covered = {v for e in edges for v in e}
            if len(covered) != n:
                continue
            sets = [set(e) for e in edges]
            if any(
                not any(a & b for j, b in enumerate(sets) if i != j)
                for i, a in enumerate(sets)
            ):
                continue
            out.append(Hypergraph(n, tuple(edges)))
    return out


def _iso_class_count(instances):
    reps = []
    for H in instances:
        if not any(_isomorphic(H, R) for R in reps):
            reps.append(H)
    return len(reps)


# ---------------------------------------------------------------- canonical


def test_canonical_invariant_under_relabeling():
    rng = random.Random(40)
    for _ in range(30):
        k = rng.choice([2, 3])
        H = random_hypergraph(k, rng.randint(k + 1, 6), rng.randint(2, 4),
                              rng.getrandbits(64), require_class=True)
        key = canonical_key(H)
        perm = list(range(H.n))
        rng.shuffle(perm)
        assert canonical_key(_relabel(H, perm)) == key
        C = canonical_form(H)
        assert is_canonical(C)
        assert canonical_form(C).edges == C.edges
        assert C.edges[0] == tuple(range(len(C.edges[0])))
        # relabeling preserves the invariant being searched over
        assert tau_t(C).value == tau_t(H).value


def test_signature_separates_and_respects_iso():
    P3 = hypergraph(3, [[0, 1], [1, 2]])
    K3 = hypergraph(3, [[0, 1], [0, 2], [1, 2]])
    assert invariant_signature(P3) != invariant_signature(K3)
    assert invariant_signature(P3) == invariant_signature(
        hypergraph(3, [[2, 1], [0, 2]])
    )


# -------------------------------------------------------------- enumeration


def test_enumerate_two_triples_single_class():
    got = list(enumerate_Hk(3, 4, 2))
    assert len(got) == 1
    assert got[0].edges == ((0, 1, 2), (0, 1, 3))


def test_enumerate_smallest_graphs():
    got = list(enumerate_Hk(2, 3, 3))
    assert [H.edges for H in got] == [
        ((0, 1), (0, 2)),                   # path
        ((0, 1), (0, 2), (1, 2)),           # triangle
    ]


def test_enumerate_deterministic():
    a = list(enumerate_Hk(2, 5, 4))
    b = list(enumerate_Hk(2, 5, 4))
    assert [H.edges for H in a] == [H.edges for H in b]
    keys = [(H.n, H.m) for H in a]
    assert keys == sorted(keys)  # streamed smallest shapes first


def test_enumerate_matches_brute_force_classes():
    # class counts per (n, m) against brute-force isomorphism partitioning
    for k, n, m_max in [(2, 3, 3), (2, 4, 6), (2, 5, 3), (3, 4, 3), (3, 5, 3)]:
        ours = [H for H in enumerate_Hk(k, n, m_max) if H.n == n]
        for m in range(2, m_max + 1):
            mine = [H for H in ours if H.m == m]
            ref = _iso_class_count(
                [H for H in _labeled_instances(k, n, m_max) if H.m == m]
            )
            assert len(mine) == ref, (k, n, m)
            assert all(is_canonical(H) for H in mine)
            for A, B in itertools.combinations(mine, 2):
                assert not _isomorphic(A, B)


def test_enumerate_rejects_bad_k():
    with pytest.raises(ValueError):
        list(enumerate_Hk(1, 4, 3))


# ------------------------------------------------------------ random draws


def test_random_hypergraph_reproducible():
    a = random_hypergraph(3, 8, 5, seed=99)
    b = random_hypergraph(3, 8, 5, seed=99)
    assert a.edges == b.edges and a.n == b.n
    c = random_hypergraph(3, 8, 5, seed=100)
    assert a.edges != c.edges  # 56 choose 5 space, collision would be a bug


def test_random_hypergraph_class_repair():
    for s in range(10):
        H = random_hypergraph(3, 7, 3, seed=s, require_class=True)
        cc = class_check(H)
        assert cc.in_Hk and cc.k == 3
        assert H.n <= 7  # isolated vertices repaired away, never added
    loose = random_hypergraph(2, 12, 2, seed=4)
    assert loose.n == 12  # without the flag the order is kept as asked


def test_random_hypergraph_domain():
    with pytest.raises(ValueError, match="distinct"):
        random_hypergraph(3, 4, 5, seed=1)  # comb(4,3) = 4 < 5
    with pytest.raises(ValueError):
        random_hypergraph(3, 8, 0, seed=1)


# ------------------------------------------------------------- ratio search


def test_estimate_b2_hits_known_supremum():
    est = estimate_bk(2, budget=120, seed=7)
    assert est.best_ratio == Fraction(2, 5)
    assert est.mode == "exhaustive"
    # earliest witness is the 3-vertex path
    assert _isomorphic(est.witness, hypergraph(3, [[0, 1], [1, 2]]))
    assert est.instances_tested <= 120


def test_estimate_b3_hits_known_supremum():
    est = estimate_bk(3, budget=200, seed=7)
    assert est.best_ratio == Fraction(1, 3)
    assert est.mode == "exhaustive"
    assert class_check(est.witness).in_Hk


def test_estimate_monotone_in_budget():
    vals = [estimate_bk(3, budget=b, seed=5).best_ratio
            for b in (1, 2, 4, 8, 16)]
    assert all(x <= y for x, y in zip(vals, vals[1:]))
    assert vals[-1] == Fraction(1, 3)


def test_estimate_random_mode():
    # n_max below k+1 empties the enumeration, leaving random draws only
    est = estimate_bk(3, budget=10, seed=3, n_max=3, m_max=4)
    assert est.mode == "random"
    assert est.best_ratio == Fraction(1, 3)  # two triples of a 4-set
    assert est.instances_tested == 10


def test_estimate_empty_budget():
    with pytest.raises(ValueError, match="budget"):
        estimate_bk(3, budget=0, seed=1, n_max=3, m_max=2)


# ---------------------------------------------------------- theorem harness


def test_verify_bounds_cycle_tight():
    C5 = hypergraph(5, [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]])
    rep = verify_bounds(C5)
    assert rep.all_hold
    rows = {r.theorem: r for r in rep.rows}
    assert rows["T_b2"].lhs == 4 and rows["T_b2"].rhs == 4
    assert rows["T_b2"].slack == 0
    assert rows["T_main2"].lhs == 3  # total domination of the 5-cycle
    assert rows["chain_tau"].holds and rows["chain_strong"].holds
    assert {"O2_n", "O2_m", "O2_maxdeg", "O2_n1"} <= rows.keys()
    skipped = dict(rep.skipped)
    for tid in ("T_k3", "T_k4", "T_k5", "T_main3", "T_main1A", "T_main1B"):
        assert tid in skipped and skipped[tid]
    assert len(rep.instance_id) == 12


def test_verify_bounds_expansion_tight():
    base = hypergraph(4, [[0, 1, 2], [1, 2, 3]])
    H = family_Fk(base, 3).hypergraph
    rep = verify_bounds(H)
    assert rep.all_hold
    rows = {r.theorem: r for r in rep.rows}
    assert rows["T_main2"].slack == 0 and rows["T_main2"].lhs == 8
    assert rows["T_main1A"].slack == 0
    assert rows["T_main1A"].basis == "exact"
    assert rows["T_main2"].lhs_provenance == "solver"
    assert rows["T_main2"].rhs_provenance == "formula"


def test_verify_bounds_star_class_rows():
    H = hypergraph(8, [[0, 1, 2, 3], [2, 3, 4, 5], [4, 5, 6, 7], [0, 1, 6, 7]])
    cc = class_check(H)
    assert cc.in_Hk_star and cc.k == 4
    rep = verify_bounds(H)
    assert rep.all_hold
    rows = {r.theorem: r for r in rep.rows}
    assert rows["T_main3"].lhs == 2 and rows["T_main3"].rhs == Fraction(8, 3)
    assert rows["T_main1B"].holds and rows["T_main1B"].basis == "exact"
    assert "T_k4" in rows and "T_k5" not in rows


def test_verify_bounds_wide_instance():
    H = random_hypergraph(5, 8, 4, seed=21, require_class=True)
    rep = verify_bounds(H)
    assert rep.all_hold
    names = {r.theorem for r in rep.rows}
    assert {"T_k3", "T_k4", "T_k5", "T_main2", "T_main1A"} <= names
    row = {r.theorem: r for r in rep.rows}["T_main1A"]
    assert row.basis == "bound-based"  # best constant at k-1 = 4 is a bound
    for tid, reason in rep.skipped:
        assert isinstance(reason, str) and reason


def test_verify_bounds_random_class_members():
    rng = random.Random(77)
    for _ in range(20):
        k = rng.choice([2, 3, 4])
        H = random_hypergraph(k, rng.randint(k + 1, 8), rng.randint(2, 5),
                              rng.getrandbits(64), require_class=True)
        rep = verify_bounds(H)
        assert rep.all_hold, (H.edges, [r.as_dict() for r in rep.rows])


# ------------------------------------------------------------------- sweep


def test_sweep_brackets_logarithmic_decay():
    rows = asymptotic_sweep([5, 8], c=2.0, trials=60, seed=11)
    assert [r.k for r in rows] == [5, 8]
    for r in rows:
        ref = math.log(r.k) / r.k
        assert r.mc_valid
        assert r.mc_mean_per_nm <= r.upper_per_nm + 1e-12
        assert float(r.best_ratio) <= r.upper_per_nm
        assert r.upper_per_nm <= 3.0 * ref
        assert float(r.best_ratio) >= ref / 3.0
        assert r.best_shape[0] >= r.k + 1
        d = r.as_dict()
        assert d["k"] == r.k and isinstance(d["best_ratio"], str)


def test_sweep_deterministic():
    a = asymptotic_sweep([4], c=2.0, trials=40, seed=3)
    b = asymptotic_sweep([4], c=2.0, trials=40, seed=3)
    assert a == b
