"""Property-based invariants for normal forms and random instances."""

from hypothesis import given, settings
from hypothesis import strategies as st

from cubetact import median as md
from cubetact import ragroups as rg

C5 = rg.builtin_defining_graph("C5")
P4 = rg.builtin_defining_graph("P4")


def words(gamma, kind, max_len=6):
    if kind == rg.COXETER:
        letter = st.sampled_from([(g, 1) for g in gamma.vertices])
    else:
        letter = st.sampled_from(
            [(g, s) for g in gamma.vertices for s in (1, -1)]
        )
    return st.lists(letter, max_size=max_len)


@given(words(C5, rg.COXETER))
def test_normal_form_idempotent_coxeter(w):
    nf = rg.normal_form(C5, rg.COXETER, w)
    assert rg.normal_form(C5, rg.COXETER, nf) == nf


@given(words(P4, rg.ARTIN))
def test_normal_form_idempotent_artin(w):
    nf = rg.normal_form(P4, rg.ARTIN, w)
    assert rg.normal_form(P4, rg.ARTIN, nf) == nf


@given(words(C5, rg.COXETER))
def test_inverse_cancels_coxeter(w):
    nf = rg.normal_form(C5, rg.COXETER, w)
    inv = rg.nf_inverse(rg.COXETER, nf)
    assert rg.nf_mult(C5, rg.COXETER, nf, inv) == ()
    assert rg.nf_mult(C5, rg.COXETER, inv, nf) == ()


@given(words(P4, rg.ARTIN))
def test_inverse_cancels_artin(w):
    nf = rg.normal_form(P4, rg.ARTIN, w)
    inv = rg.nf_inverse(rg.ARTIN, nf)
    assert rg.nf_mult(P4, rg.ARTIN, nf, inv) == ()


@given(words(P4, rg.ARTIN, 4), words(P4, rg.ARTIN, 4), words(P4, rg.ARTIN, 4))
def test_multiplication_associative(w1, w2, w3):
    a = rg.normal_form(P4, rg.ARTIN, w1)
    b = rg.normal_form(P4, rg.ARTIN, w2)
    c = rg.normal_form(P4, rg.ARTIN, w3)
    left = rg.nf_mult(P4, rg.ARTIN, rg.nf_mult(P4, rg.ARTIN, a, b), c)
    right = rg.nf_mult(P4, rg.ARTIN, a, rg.nf_mult(P4, rg.ARTIN, b, c))
    assert left == right


@given(words(C5, rg.COXETER, 5), words(C5, rg.COXETER, 5))
def test_length_subadditive(w1, w2):
    a = rg.normal_form(C5, rg.COXETER, w1)
    b = rg.normal_form(C5, rg.COXETER, w2)
    prod = rg.nf_mult(C5, rg.COXETER, a, b)
    la, lb = rg.word_length(rg.COXETER, a), rg.word_length(rg.COXETER, b)
    lp = rg.word_length(rg.COXETER, prod)
    assert lp <= la + lb
    assert (la + lb - lp) % 2 == 0


@settings(max_examples=25, deadline=None)
@given(
    st.integers(min_value=2, max_value=6),
    st.integers(min_value=2, max_value=6),
    st.integers(min_value=0, max_value=10_000),
)
def test_random_instances_are_median_and_convex(dim, seeds, seed):
    X = md.random_median_complex(dim, seeds, seed)
    # construction already validates; the hyperplane structure must be sound
    assert md.convexity_check(X) == []
    assert md.helly_check(X) == []
    for h in X.hyperplanes:
        assert md.is_convex_set(X, h.side_a)
        assert md.is_convex_set(X, h.side_b)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_random_instance_medians_unique(seed):
    X = md.random_median_complex(5, 4, seed)
    verts = list(X.vertices)
    # spot-check the median property on the first few triples
    for i in range(0, max(0, len(verts) - 2), 7):
        a, b, c = verts[i], verts[i + 1], verts[i + 2]
        count = sum(
            1
            for v in verts
            if X.d(a, v) + X.d(v, b) == X.d(a, b)
            and X.d(b, v) + X.d(v, c) == X.d(b, c)
            and X.d(a, v) + X.d(v, c) == X.d(a, c)
        )
        assert count == 1
