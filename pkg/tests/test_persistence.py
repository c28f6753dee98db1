import itertools
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from oracle import closed_orders
from strategies import filters, monotone_maps
from phfiber import library
from phfiber.barcode import INF, Barcode, push_forward
from phfiber.complex import ComplexError
from phfiber.field import GF2, QQ, Field, rank
from phfiber.persistence import (
    BLOCKED,
    ZERO,
    DeltaState,
    betti_numbers,
    compute_barcode,
    rank_boundary,
    reduce_standard,
)

FIELDS = [GF2, Field(3), QQ]
SMALL = ["EDGE", "PATH3", "CIRC_CW", "RP2_CW", "TORUS_CW", "KLEIN_CW", "DUNCE_CW", "HOLLOWTRI", "FULLTRI"]


def names(C, pairs):
    return [(C.names[a], C.names[b]) for a, b in pairs]


def test_reduce_examples():
    E = library.edge()
    red = reduce_standard(E, [0, 1, 2])
    assert names(E, red.pairs) == [("b", "ab")]
    assert red.barcode == Barcode([(0, 1, INF), (0, 2, 3)])
    C = library.circle_cw()
    assert reduce_standard(C, [0, 1]).barcode == Barcode([(0, 1, INF), (1, 2, INF)])
    R = library.rp2_cw()
    red = reduce_standard(R, [0, 1, 2], QQ)
    assert names(R, red.pairs) == [("e", "f")]
    assert red.barcode == Barcode([(0, 1, INF), (1, 2, 3)])
    with pytest.raises(ValueError):
        reduce_standard(E, [2, 0, 1])


def test_compute_barcode_examples():
    E = library.edge()
    assert compute_barcode(E, [1, 2, 3]) == Barcode([(0, 1, INF), (0, 2, 3)])
    assert compute_barcode(E, [1, 2, 2]) == Barcode([(0, 1, INF)])
    assert compute_barcode(E, [1, 1, 1]) == Barcode([(0, 1, INF)])
    with pytest.raises(ComplexError, match="ab"):
        compute_barcode(E, {"a": 1, "b": 3, "ab": 2})


def test_ranks_and_betti():
    assert rank_boundary(library.edge(), 1) == 1
    R = library.rp2_cw()
    assert rank_boundary(R, 2, GF2) == 0 and rank_boundary(R, 2, QQ) == 1
    assert betti_numbers(R, GF2) == [1, 1, 1]
    assert betti_numbers(R, QQ) == [1, 0, 0]
    assert betti_numbers(library.torus_cw()) == [1, 2, 1]
    assert betti_numbers(library.klein_cw(), QQ) == [1, 1, 0]


def persistent_betti(C, order, field, p, i, j):
    """Rank of H_p(K_i) -> H_p(K_j) from matrix ranks only (prefix lengths i <= j)."""
    Ki, Kj = set(order[:i]), set(order[:j])
    cyc_cols = [dict(C.boundary[c]) for c in Ki if C.dims[c] == p]
    z = len(cyc_cols) - rank(cyc_cols, field)
    bcols = [dict(C.boundary[c]) for c in Kj if C.dims[c] == p + 1]
    outside = [{r: v for r, v in col.items() if r not in Ki} for col in bcols]
    inside = rank(bcols, field) - rank(outside, field)
    return z - inside


def rank_formula_barcode(C, order, field):
    n = len(C)
    ivs = []
    for p in range(C.dim + 1):
        def r(i, j):
            if i < 1:
                return 0
            return persistent_betti(C, order, field, p, i, min(j, n))
        for i in range(1, n + 1):
            for j in range(i + 1, n + 2):
                mult = r(i, j - 1) - r(i, j) - r(i - 1, j - 1) + r(i - 1, j)
                if j == n + 1:
                    mult = r(i, n) - r(i - 1, n)
                ivs += [(p, i, INF if j == n + 1 else j)] * mult
    return Barcode(ivs)


@pytest.mark.parametrize("field", FIELDS, ids=repr)
@pytest.mark.parametrize("name", ["EDGE", "PATH3", "RP2_CW", "KLEIN_CW", "HOLLOWTRI", "FULLTRI"])
def test_reduction_matches_rank_formula(name, field):
    C = library.get(name)
    for order in itertools.islice(closed_orders(C, field), 60):
        assert reduce_standard(C, order, field).barcode == rank_formula_barcode(C, order, field)


def _xi(state, r):
    p = state.pos[r]
    return p if p is not None else state.n + r


def _check_invariants(state, C, field):
    for i in range(len(C)):
        acc = {}
        for k, v in state.V[i].items():
            field.axpy(acc, v, {r: field(c) for r, c in C.boundary[k]})
        assert acc == state.cols[i]
        assert state.V[i].get(i) == field.one
        assert all(_xi(state, k) < _xi(state, i) for k in state.V[i] if k != i)


@pytest.mark.parametrize("field", FIELDS, ids=repr)
@pytest.mark.parametrize("name", SMALL)
def test_delta_state_along_every_order(name, field):
    C = library.get(name)
    for order in itertools.islice(closed_orders(C, field), 40):
        ref = reduce_standard(C, order, field)
        partner = {d: b for b, d in ref.pairs}
        st_ = DeltaState(C, field, track_v=True)
        for c in order:
            code = st_.status(c)
            # blocked iff the boundary reaches an uncommitted cell
            reaches = any(st_.pos[r] is None for r in C.support(c, field))
            assert (code == BLOCKED) == reaches
            assert code != BLOCKED
            if c in partner:
                assert code == partner[c]
                st_.commit_death(c, code)
            else:
                assert code == ZERO
                st_.commit_birth(c)
            _check_invariants(st_, C, field)
        assert sorted(st_.pairs) == sorted(ref.pairs)


def test_delta_examples():
    E = library.edge()
    s = DeltaState(E)
    assert s.cols[2] == {0: 1, 1: 1}
    assert s.status(2) == BLOCKED
    assert s.candidate_status(2).kind == "blocked"
    s.commit_birth(0)
    s.commit_birth(1)
    assert s.status(2) == 1
    assert s.candidate_status(2).partner == 1
    s.commit_death(2, 1)
    assert s.pairs == [(1, 2)]
    assert all(not col for col in DeltaState(library.circle_cw()).cols)
    T = library.full_triangle()
    ts = DeltaState(T)
    assert [dict(c) for c in ts.cols] == [{r: GF2(v) for r, v in T.boundary[i]} for i in range(7)]


def test_delta_eager_elimination():
    T = library.full_triangle()
    a, b, c, ab, ac, bc = (T.cell_id(x) for x in ("a", "b", "c", "ab", "ac", "bc"))
    s = DeltaState(T)
    for v in (a, b, c):
        s.commit_birth(v)
    s.commit_death(ab, b)
    assert b not in s.cols[bc]
    assert s.cols[ac] == {a: 1, c: 1}
    assert s.status(bc) == c


def test_commit_errors():
    E = library.edge()
    s = DeltaState(E)
    with pytest.raises(ValueError):
        s.commit_birth(2)
    s.commit_birth(0)
    with pytest.raises(ValueError):
        s.status(0)


def test_snapshot_restore_and_fork():
    T = library.full_triangle()
    s = DeltaState(T, track_v=True)
    before = s.fingerprint()
    t1 = s.snapshot()
    for v in (0, 1, 2):
        s.commit_birth(v)
    mid = s.fingerprint()
    live = s.live_entries()
    t2 = s.snapshot()
    s.commit_death(T.cell_id("ab"), 1)
    other = s.fork()
    with pytest.raises(RuntimeError):
        s.restore(t1)
    s.restore(t2)
    assert s.fingerprint() == mid
    assert s.live_entries() == live
    s.restore(t1)
    assert s.fingerprint() == before
    assert other.pairs == [(1, T.cell_id("ab"))]
    other.commit_death(T.cell_id("ac"), 2)
    assert len(other.pairs) == 2
    assert s.fingerprint() == before


@settings(max_examples=60, deadline=None)
@given(data=st.data(), name=st.sampled_from(["EDGE", "PATH3", "HOLLOWTRI", "FULLTRI", "TORUS_CW", "RP2_CW"]))
def test_equivariance_property(data, name):
    C = library.get(name)
    f = data.draw(filters(C))
    psi = data.draw(monotone_maps(f))
    g = [psi[v] for v in f]
    assert compute_barcode(C, g) == push_forward(psi, compute_barcode(C, f))
