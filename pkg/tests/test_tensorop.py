import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from golden import K_2110, R_314
from qtetra.kmat import k_conserved
from qtetra.qpoly import ONE, LaurentPoly, TruncPoly, trunc_reduce
from qtetra.rmat import r_conserved
from qtetra.tensorop import (INTERTWINING, SlotError, SlotSignature, SparseVec, apply_k, apply_r,
                             check_intertwining, check_r_recursions, ket, osc_apply, parse_ket)

small = st.integers(0, 3)


def test_ket_parsing():
    assert parse_ket("314516") == (3, 1, 4, 5, 1, 6)
    assert parse_ket("3,1,14") == (3, 1, 14)
    assert ket((3, 1, 14)) == "3,1,14" and ket((3, 1, 4)) == "314"
    with pytest.raises(ValueError):
        parse_ket("3,-1,4")
    with pytest.raises(ValueError):
        parse_ket("abc")


def test_apply_r_examples():
    v = SparseVec.basis((3, 1, 4, 5, 1, 6))
    assert apply_r(v, (1, 2, 3), mode="comb") == SparseVec.basis((1, 3, 2, 5, 1, 6))
    assert len(apply_r(SparseVec(), (1, 2, 3))) == 0
    assert dict(apply_r(SparseVec.basis((3, 1, 4)), (1, 2, 3))) == R_314


def test_apply_k_examples():
    v = SparseVec.basis((2, 1, 1, 0, 3, 4, 2, 1, 2))
    assert apply_k(v, (1, 2, 3, 4), mode="comb") == SparseVec.basis((3, 0, 1, 1, 3, 4, 2, 1, 2))
    assert len(apply_k(SparseVec(), (1, 2, 3, 4))) == 0
    assert dict(apply_k(SparseVec.basis((2, 1, 1, 0)), (1, 2, 3, 4))) == K_2110


def test_reversed_k_is_type_b():
    v = SparseVec.basis((0, 1, 1, 2))
    w = apply_k(v, (1, 2, 3, 4), "reversed")
    assert w[(3, 0, 0, 4)] == LaurentPoly.monomial(4)


def test_slot_signature_validation():
    sig = SlotSignature.from_q2_slots(4, (1, 3))
    v = SparseVec.basis((1, 0, 1, 0))
    apply_k(v, (1, 2, 3, 4), signature=sig)
    with pytest.raises(SlotError):
        apply_k(v, (1, 2, 3, 4), "reversed", signature=sig)
    with pytest.raises(SlotError):
        apply_r(v, (1, 2, 3), signature=sig)
    apply_r(v, (1, 3, 2), "R", signature=SlotSignature(["q"] * 4))
    with pytest.raises(SlotError):
        apply_r(v, (1, 2, 5))
    with pytest.raises(SlotError):
        apply_r(v, (1, 1, 2))
    with pytest.raises(ValueError):
        SlotSignature(["q3"])


def test_osc_actions():
    assert osc_apply("k", "q", 2) == (2, LaurentPoly.monomial(2))
    assert osc_apply("a-", "q", 0) is None
    assert osc_apply("a-", "q2", 1) == (0, ONE - LaurentPoly.monomial(4))
    assert osc_apply("a+", "q", 3) == (4, ONE)
    assert osc_apply("k", "q2", 3) == (3, LaurentPoly.monomial(6))


@given(small, small, small)
def test_apply_r_conserves_and_is_involutive(i, j, k):
    v = SparseVec.basis((i, j, k))
    w = apply_r(v, (1, 2, 3))
    assert all(r_conserved((i, j, k), s) for s in w)
    assert apply_r(w, (1, 2, 3)) == v


@settings(max_examples=40)
@given(small, small, small, small)
def test_apply_k_conserves(a, i, b, j):
    w = apply_k(SparseVec.basis((a, i, b, j)), (1, 2, 3, 4))
    assert all(k_conserved((a, i, b, j), s) for s in w)


@settings(max_examples=30, deadline=None)
@given(st.tuples(small, small, small, small, small, small, small))
def test_disjoint_slots_commute(st7):
    v = SparseVec.basis(st7)
    a = apply_k(apply_r(v, (5, 6, 7)), (1, 2, 3, 4))
    b = apply_r(apply_k(v, (1, 2, 3, 4)), (5, 6, 7))
    assert a == b


@settings(max_examples=30, deadline=None)
@given(small, small, small, small, st.integers(1, 10))
def test_truncation_commutes(a, i, b, j, n):
    full = apply_k(SparseVec.basis((a, i, b, j)), (1, 2, 3, 4))
    trunc = apply_k(SparseVec.basis((a, i, b, j), TruncPoly(n, [1])), (1, 2, 3, 4), trunc=n)
    assert trunc == full.truncate(n)
    for s, c in trunc.items():
        assert c == trunc_reduce(full[s], n)


def test_intertwining_relation_count():
    assert len(INTERTWINING) == 16
    with pytest.raises(ValueError):
        check_intertwining((1, 2), 2)


@pytest.mark.parametrize("rel", [(2, 5), (5, 5)])
def test_intertwining_bound_3(rel):
    assert check_intertwining(rel, 3)["pass"]


def test_wrong_operator_string_is_caught():
    # dropping one term of <23> must break it (swapping sides would not:
    # that is <32>, which also holds since K is an involution)
    from qtetra import tensorop
    left, right = tensorop.INTERTWINING[(2, 3)]
    saved = tensorop.INTERTWINING[(2, 3)]
    try:
        tensorop.INTERTWINING[(2, 3)] = (left, right[:-1])
        assert not check_intertwining((2, 3), 2)["pass"]
    finally:
        tensorop.INTERTWINING[(2, 3)] = saved


def test_r_recursions_bound_4():
    rep = check_r_recursions(4)
    assert rep["pass"] and set(rep["recursions"]) == {"t32", "t33", "pr"}


def test_sparsevec_invariants():
    v = SparseVec({(1, 2): ONE, (0, 0): LaurentPoly()})
    assert len(v) == 1
    assert (v - v) == SparseVec()
    assert v.scale(LaurentPoly.monomial(1))[(1, 2)] == LaurentPoly.monomial(1)
    with pytest.raises(ValueError):
        SparseVec.basis((1, -1))
