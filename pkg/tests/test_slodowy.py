import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from foldquiver.exactmath import (
    Matrix,
    Partition,
    commutator,
    jordan_type_nilpotent,
    make_rng,
    random_matrix,
)
from foldquiver.slodowy import (
    SKEW,
    SYMMETRIC,
    SliceSpec,
    build_form,
    build_triple,
    expected_form_kind,
    half_dims,
    in_slice,
    labels_orbit,
    nonempty_dims,
    nonempty_typeA,
    s_values,
    symmetric_dims,
    theta_big,
)


def all_specs(max_n):
    for n in range(1, max_n + 1):
        for k in range(1, n + 1):
            if k < n:
                yield SliceSpec(n, k)
            else:
                for sig in ((2, 0), (1, 1), (0, 2)):
                    yield SliceSpec(n, k, sig)


SPECS = list(all_specs(5))


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_base_triple_is_an_sl2_triple_of_the_right_type(spec):
    t = build_triple(spec)
    assert t.relation_defects() == []
    assert jordan_type_nilpotent(t.E) == spec.base_partition()
    assert t.E.trace() == 0 and t.H.trace() == 0


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_form_kind_and_orbit_label(spec):
    form = build_form(spec)
    assert form.kind == expected_form_kind(spec)
    assert form.gram.is_invertible()
    assert labels_orbit(spec.base_partition(), form.kind)
    t = build_triple(spec)
    for m in (t.E, t.H, t.F):
        assert theta_big(form, m) == m


@pytest.mark.parametrize("spec", [s for s in SPECS if s.n <= 3], ids=str)
@given(seed=st.integers(0, 2**31))
def test_form_involution_is_an_involutive_lie_automorphism(spec, seed):
    form = build_form(spec)
    rng = make_rng(seed)
    x = random_matrix(rng, spec.size, spec.size)
    y = random_matrix(rng, spec.size, spec.size)
    assert theta_big(form, theta_big(form, x)) == x
    assert theta_big(form, commutator(x, y)) == commutator(theta_big(form, x), theta_big(form, y))
    # fixed points preserve the form infinitesimally
    z = x + theta_big(form, x)
    assert z.T @ form.gram + form.gram @ z == Matrix.zeros(spec.size, spec.size)


def test_orbit_labels_for_rank_four():
    skew = {(4,), (2, 2), (2, 1, 1), (1, 1, 1, 1)}
    symmetric = {(3, 1), (2, 2), (1, 1, 1, 1)}
    for parts in [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]:
        assert labels_orbit(Partition(parts), SKEW) == (parts in skew)
        assert labels_orbit(Partition(parts), SYMMETRIC) == (parts in symmetric)


@pytest.mark.parametrize("spec", [s for s in SPECS if 2 <= s.n <= 3], ids=str)
def test_slice_membership(spec):
    t = build_triple(spec)
    assert in_slice(spec, t.E)
    assert not in_slice(spec, t.E + t.F)
    with pytest.raises(ValueError):
        in_slice(spec, Matrix.identity(spec.size))
    with pytest.raises(ValueError):
        in_slice(spec, Matrix.zeros(spec.size + 1, spec.size + 1))


def test_spec_validation():
    for bad in [(2, 3, None), (2, 0, None), (2, 2, None), (2, 2, (1, 0)), (3, 1, (1, 1))]:
        with pytest.raises(ValueError):
            SliceSpec(*bad)


def test_framing_vectors():
    assert SliceSpec(3, 1).w() == {1: 1, 2: 0, 3: 0, 4: 0, 5: 1}
    assert SliceSpec(2, 2, (1, 1)).w() == {1: 0, 2: 2, 3: 0}


@pytest.mark.parametrize("spec, half, s, ell, ok", [
    (SliceSpec(2, 2, (1, 1)), (1, 2), (0, 0), 0, True),
    (SliceSpec(2, 2, (1, 1)), (1, 1), (0, 1), 1, True),
    (SliceSpec(2, 2, (1, 1)), (0, 0), (1, 1), 2, True),
    (SliceSpec(2, 1), (1, 1), (0, 0), 0, True),
    (SliceSpec(2, 1), (0, 1), (1, -1), 2, False),
    (SliceSpec(3, 2), (1, 2, 2), (0, 0, 0), 0, True),
    (SliceSpec(3, 2), (2, 2, 2), (-1, 1, 0), 2, True),
    (SliceSpec(3, 2), (0, 2, 2), (1, -1, 0), 2, True),
    (SliceSpec(3, 2), (3, 2, 2), (-2, 2, 0), 2, False),
])
def test_nonemptiness_examples(spec, half, s, ell, ok):
    report = nonempty_typeA(spec, half)
    assert report.s == s == s_values(spec, symmetric_dims(spec.n, list(half)))
    assert report.ell == ell
    assert report.nonempty == ok


@pytest.mark.parametrize("spec", [SliceSpec(2, 1), SliceSpec(3, 2), SliceSpec(3, 3, (1, 1))],
                         ids=str)
def test_nonempty_dims_filters_the_box(spec):
    found = set(nonempty_dims(spec, 3))
    box = set(itertools.product(range(4), repeat=spec.n))
    assert found <= box
    assert found == {h for h in box if nonempty_typeA(spec, h).nonempty}
    assert tuple(min(i, spec.k) for i in range(1, spec.n + 1)) in found


def test_half_dims_rejects_asymmetric_vectors():
    assert half_dims(2, [1, 2, 1]) == [1, 2]
    assert half_dims(2, {1: 1, 2: 2, 3: 1}) == [1, 2]
    with pytest.raises(ValueError):
        half_dims(2, [1, 2, 3])
    with pytest.raises(ValueError):
        half_dims(2, {1: 1, 2: 2, 3: 0})
    with pytest.raises(ValueError):
        half_dims(3, [1, 2])


def weight_oracle(spec, half) -> bool:
    """lambda - sum v_i alpha_i is a weight of V(omega_k + omega_2n-k): its sorted
    epsilon-coordinates are dominated by those of lambda."""
    n, k = spec.n, spec.k
    size = 2 * n
    full = symmetric_dims(n, list(half))
    v = [0] + [full[i] for i in range(1, size)] + [0]
    lam = [(j < k) + (j < size - k) for j in range(size)]
    mu = sorted((lam[j] - v[j + 1] + v[j] for j in range(size)), reverse=True)
    return all(sum(mu[:j]) <= sum(lam[:j]) for j in range(1, size + 1))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(1, n), st.lists(st.integers(0, 5), min_size=n, max_size=n))))
def test_nonemptiness_matches_the_weight_criterion(case):
    n, k, half = case
    spec = SliceSpec(n, k, (1, 1) if k == n else None)
    assert nonempty_typeA(spec, half).nonempty == weight_oracle(spec, half)
