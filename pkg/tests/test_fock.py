from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from voacalc.fock import (GradedVector, build_heisenberg, partitions,
                          partitions_upto)
from voacalc.series import Window


def brute_partitions(n):
    """Independent partition enumeration by direct filtering."""
    if n == 0:
        return {()}
    out = set()

    def go(rest, mx, acc):
        if rest == 0:
            out.add(tuple(acc))
            return
        for p in range(min(rest, mx), 0, -1):
            go(rest - p, p, acc + [p])

    go(n, n, [])
    return out


@pytest.fixture(scope="module")
def V6():
    return build_heisenberg(6)


def test_weight_dimensions(V6):
    assert [V6.dim(n) for n in range(7)] == [1, 1, 2, 3, 5, 7, 11]
    for n in range(7):
        assert set(V6.basis(n)) == brute_partitions(n)


def test_oscillator_commutator(V6):
    a = GradedVector.basis((1,))
    assert V6.apply_mode(a, 1, a) == V6.vacuum
    # alpha(0) annihilates the whole space
    assert V6.apply_mode(a, 0, a).is_zero()
    assert V6.apply_mode(a, 0, GradedVector.basis((2, 1))).is_zero()


def test_vacuum_modes(V6):
    v = GradedVector.basis((2, 1))
    for n in range(-4, 4):
        got = V6.apply_mode(V6.vacuum, n, v)
        assert got == (v if n == -1 else GradedVector())


def test_conformal_vector(V6):
    om = V6.omega
    assert V6.virasoro(2, om) == V6.vacuum.scale(Fraction(1, 2))
    assert V6.virasoro(1, om).is_zero()
    for n in range(3, 7):
        assert V6.virasoro(n, om).is_zero()
    assert V6.virasoro(0, om) == om.scale(2)


def test_grading_operator(V6):
    for lab in partitions_upto(6):
        v = GradedVector.basis(lab)
        assert V6.virasoro(0, v) == v.scale(sum(lab))


def test_translation_annihilates_vacuum(V6):
    assert V6.virasoro(-1, V6.vacuum).is_zero()


def test_creation_property(V6):
    for lab in partitions_upto(5):
        v = GradedVector.basis(lab)
        ys = V6.vertex_series(v, V6.vacuum, Window.of(x=(-14, 14)))
        assert all(e[0] >= 0 for e in ys.coeff)
        assert ys.coefficient((0,)) == v
        got = ys.coefficient((1,)) or GradedVector()
        assert got == V6.virasoro(-1, v)


def test_lower_truncation(V6):
    for lu in partitions_upto(4):
        for lv in partitions_upto(4):
            u, v = GradedVector.basis(lu), GradedVector.basis(lv)
            bound = sum(lu) + sum(lv)
            for n in range(bound, bound + 4):
                assert V6.apply_mode(u, n, v, ceiling=20).is_zero()


@given(st.integers(min_value=0, max_value=2 ** 30))
@settings(max_examples=30, deadline=None)
def test_mode_weight_shift(seed):
    import random
    rng = random.Random(seed)
    V = build_heisenberg(6)
    labs = partitions_upto(4)
    lu = rng.choice(labs)
    lv = rng.choice(labs)
    n = rng.randint(-6, 6)
    got = V.apply_mode(GradedVector.basis(lu), n, GradedVector.basis(lv),
                       ceiling=20)
    want = sum(lu) + sum(lv) - n - 1
    for lab in got.coeff:
        assert sum(lab) == want


def test_bilinearity(V6):
    a = GradedVector.basis((1,))
    b = GradedVector.basis((2,))
    w = GradedVector.basis((1, 1))
    u = a.scale(Fraction(2, 3)) + b.scale(-1)
    got = V6.apply_mode(u, -1, w)
    want = V6.apply_mode(a, -1, w).scale(Fraction(2, 3)) \
        - V6.apply_mode(b, -1, w)
    assert got == want


def test_truncation_overflow_flag(V6):
    v = GradedVector.basis((6,))
    _, lost = V6.apply_mode_flagged(GradedVector.basis((1,)), -1, v)
    assert lost
    full, lost2 = V6.apply_mode_flagged(GradedVector.basis((1,)), -1, v,
                                        ceiling=7)
    assert not lost2 and full == GradedVector.basis((6, 1))


def test_virasoro_bracket_extended(V6):
    c = V6.central_charge
    for m in range(-3, 4):
        for n in range(-3, 4):
            for lab in partitions_upto(3):
                v = GradedVector.basis(lab)
                top = 12
                lhs = V6.virasoro(m, V6.virasoro(n, v, top), top) \
                    - V6.virasoro(n, V6.virasoro(m, v, top), top)
                rhs = V6.virasoro(m + n, v, top).scale(Fraction(m - n))
                if m + n == 0:
                    rhs = rhs + v.scale(c * Fraction(m ** 3 - m, 12))
                assert lhs.clip(6)[0] == rhs.clip(6)[0], (m, n, lab)


def test_corruption_is_reversible(V6):
    V = build_heisenberg(4)
    a = GradedVector.basis((1,))
    clean = V.apply_mode(a, 1, a)
    V.corrupt((1,), 1, (1,), (), 5)
    assert V.apply_mode(a, 1, a) == V.vacuum.scale(6)
    V.clear_corruptions()
    assert V.apply_mode(a, 1, a) == clean


def test_vertex_series_matches_modes(V6):
    u = GradedVector.basis((2,))
    v = GradedVector.basis((1, 1))
    win = Window.of(x=(-10, 10))
    ys = V6.vertex_series(u, v, win)
    for n in V6.mode_range(u, v):
        want = V6.apply_mode(u, n, v)
        got = ys.coefficient((-n - 1,)) or GradedVector()
        assert got == want
