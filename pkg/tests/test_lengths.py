import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polytc import _kernels
from polytc.lengths import (
    ChamberSignature,
    LengthInputError,
    LengthVector,
    PreconditionError,
    chamber_signature,
    enumerate_chambers,
    genericity_witness,
    is_generic,
    is_long,
    is_nondegenerate,
    is_short,
    subset_sum,
)
from polytc.ring import mask_of

from conftest import L


rationals = st.fractions(min_value=Fraction(1, 7), max_value=7, max_denominator=7).filter(lambda x: x > 0)
vectors = st.lists(rationals, min_size=3, max_size=7).map(lambda xs: LengthVector(tuple(xs)))


def brute_signature(ell):
    n = ell.n
    total = sum(ell.entries)
    out = []
    for k in range(n):
        for S in itertools.combinations(range(1, n), k):
            s = sum(ell.entries[i - 1] for i in S) + ell.entries[-1]
            if 2 * s < total:
                out.append(tuple(S) + (n,))
    return sorted(out, key=lambda s: (len(s), s))


def test_parse():
    ell = L(" 1, 1,1/2 ,2")
    assert ell.entries == (1, 1, Fraction(1, 2), 2)
    assert ell.n == 4
    assert ell.total == Fraction(9, 2)
    assert str(ell) == "1,1,1/2,2"


@pytest.mark.parametrize("text", ["1,0,1", "1,-1,2", "1,x,1", "1,1", "1,1/0,1", ""])
def test_parse_rejects(text):
    with pytest.raises(LengthInputError):
        L(text)


def test_subset_sum_examples():
    assert subset_sum(L("1,1,1,1"), mask_of([1, 2])) == 2
    assert subset_sum(L("1,1,1,1,1"), 0) == 0
    assert subset_sum(L("1/2,1/3,1/6,1"), [1, 2, 3]) == 1


def test_subset_sum_out_of_range():
    with pytest.raises(LengthInputError):
        subset_sum(L("1,1,1"), [4])
    with pytest.raises(LengthInputError):
        subset_sum(L("1,1,1"), 1 << 3)


def test_short_long_examples():
    five = L("1,1,1,1,1")
    assert is_short(five, [5]) and not is_long(five, [5])
    assert is_long(five, [1, 2, 3]) and not is_short(five, [1, 2, 3])
    four = L("1,1,1,1")
    assert not is_short(four, [1, 2]) and not is_long(four, [1, 2])


@pytest.mark.parametrize(
    "text,expected",
    [("1,1,1,1", False), ("1,1,1,1,1", True), ("1,2,4,8,16", True), ("1/2,1/3,1/6,1", False)],
)
def test_is_generic_examples(text, expected):
    assert is_generic(L(text)) is expected


def test_binary_weights_have_distinct_subset_sums():
    # independent check of the (1,2,4,8,16) example
    w = [1, 2, 4, 8, 16]
    sums = [sum(c) for k in range(6) for c in itertools.combinations(w, k)]
    assert len(set(sums)) == 32
    assert all(2 * s != 31 for s in sums)


def test_witness():
    assert genericity_witness(L("1,1,1,1")) == mask_of([1, 2])
    assert genericity_witness(L("1,1,1,1,1")) is None


@pytest.mark.parametrize("text,expected", [("1,1,1,4", False), ("1,1,1,1,1", True), ("1,1,1,3", False)])
def test_is_nondegenerate_examples(text, expected):
    assert is_nondegenerate(L(text)) is expected


def test_signature_equilateral_five():
    sig = chamber_signature(L("1,1,1,1,1"))
    expected = [(5,)] + [(i, 5) for i in range(1, 5)]
    assert list(sig.short_sets) == expected
    assert all(len(s) <= 2 for s in sig.short_sets)


def test_signature_1112():
    # total 5: {4} has 2*2 < 5, but {i,4} has 2*3 > 5
    assert brute_signature(L("1,1,1,2")) == [(4,)]
    assert chamber_signature(L("1,1,1,2")).short_sets == ((4,),)


def test_signature_rejects_walls():
    with pytest.raises(PreconditionError):
        chamber_signature(L("1,1,1,1"))


def test_signature_json_roundtrip():
    sig = chamber_signature(L("3,3,3,1"))
    assert sig.to_json() == "[[4],[1,4],[2,4],[3,4]]"
    assert ChamberSignature.from_json(4, sig.to_json()) == sig


@settings(max_examples=150, deadline=None)
@given(vectors)
def test_signature_brute_and_downward_closed(ell):
    if not is_generic(ell):
        return
    sig = chamber_signature(ell)
    assert list(sig.short_sets) == brute_signature(ell)
    listed = set(sig.short_sets)
    for S in listed:
        assert ell.n in S
        for k in range(len(S)):
            for T in itertools.combinations([i for i in S if i != ell.n], k):
                assert tuple(T) + (ell.n,) in listed


@settings(max_examples=150, deadline=None)
@given(vectors, st.randoms(use_true_random=False), rationals)
def test_invariance(ell, rnd, scale):
    perm = list(ell.entries)
    rnd.shuffle(perm)
    assert is_generic(LengthVector(tuple(perm))) == is_generic(ell)
    scaled = LengthVector(tuple(e * scale for e in ell.entries))
    assert is_generic(scaled) == is_generic(ell)
    assert is_nondegenerate(scaled) == is_nondegenerate(ell)
    if is_generic(ell):
        assert chamber_signature(scaled) == chamber_signature(ell)


@settings(max_examples=100, deadline=None)
@given(vectors)
def test_singletons_and_big_sets(ell):
    n = ell.n
    singles_ok = all(not is_long(ell, [i]) and is_short(ell, [i]) for i in range(1, n + 1))
    if is_generic(ell):
        assert is_nondegenerate(ell) == singles_ok
    if is_generic(ell) and is_nondegenerate(ell):
        for S in itertools.combinations(range(1, n + 1), n - 1):
            assert is_long(ell, S)


def test_enumerate_small():
    out = enumerate_chambers(3, 1)
    assert len(out) == 1
    sig, rep = out[0]
    assert rep.entries == (1, 1, 1)
    assert sig == chamber_signature(L("1,1,1"))


def test_enumerate_n4():
    out = enumerate_chambers(4, 3)
    sigs = [s for s, _ in out]
    assert chamber_signature(L("1,1,1,2")) in sigs
    assert len(set(sigs)) == len(sigs)
    assert sigs == sorted(sigs, key=ChamberSignature.sort_key)
    for sig, rep in out:
        assert is_generic(rep) and is_nondegenerate(rep)
        assert chamber_signature(rep) == sig


def test_enumerate_representative_is_lexicographically_first():
    out = enumerate_chambers(4, 3)
    for sig, rep in out:
        for cand in itertools.product(range(1, 4), repeat=4):
            ell = LengthVector(cand)
            if is_generic(ell) and is_nondegenerate(ell) and chamber_signature(ell) == sig:
                assert tuple(int(e) for e in rep.entries) == cand
                break


def test_enumerate_chunking_does_not_change_result():
    assert enumerate_chambers(5, 3, chunk=7) == enumerate_chambers(5, 3)


@pytest.mark.parametrize("n,bound", [(3, 3), (4, 4), (5, 3), (6, 2)])
def test_kernel_backends_agree(n, bound):
    cands = _kernels.candidates(n, bound, 0, bound**n)
    ref_ok, ref_short = _kernels.scan(cands, "python")
    np_ok, np_short = _kernels.scan(cands, "numpy")
    assert (ref_ok == np_ok).all() and (ref_short == np_short).all()
    if _kernels.HAVE_NUMBA:
        nb_ok, nb_short = _kernels.scan(cands, "numba")
        assert (ref_ok == nb_ok).all() and (ref_short == nb_short).all()


def test_kernel_matches_exact_path():
    cands = _kernels.candidates(5, 3, 0, 3**5)
    ok, short = _kernels.scan(cands)
    for row, good, sh in zip(cands, ok, short):
        ell = LengthVector(tuple(int(x) for x in row))
        assert good == (is_generic(ell) and is_nondegenerate(ell))
        if good:
            masks = np.flatnonzero(sh)
            assert len(masks) == len(chamber_signature(ell).short_sets)


def test_candidates_order():
    c = _kernels.candidates(3, 2, 0, 8)
    assert [tuple(r) for r in c] == list(itertools.product([1, 2], repeat=3))
