import random
from fractions import Fraction as Q

import pytest

from chamberwalk.lattice import Lattice, is_root, root_norm_menu
from chamberwalk.vinberg import (
    DEFAULT_TABLE_ROWS,
    approval_filter,
    compare_priority,
    fundamental_unit,
    pell_fundamental,
    priority_sq,
    rank2_second_root,
    vinberg_run,
)
from conftest import priority_interval_compare, random_lattice


L12 = Lattice([[1, 0], [0, -2]])
L106 = Lattice([[1, 0], [0, -106]])
E3 = Lattice([[1, 0, 0], [0, 1, 0], [0, 0, -1]])


def test_compare_priority_examples():
    # alpha=(2,1) (norm 2, k.a=-2) before beta=(3,2) (norm 1, k.b=-4): 4/2 < 16/1
    assert compare_priority(L12, (0, 1), (2, 1), (3, 2)) == -1
    assert compare_priority(L12, (0, 1), (2, 1), (2, 1)) == 0
    # doubling keeps the priority; the smaller norm goes first
    assert compare_priority(L12, (0, 1), (2, 1), (4, 2)) == -1
    with pytest.raises(ValueError):
        compare_priority(L12, (0, 1), (-2, -1), (2, 1))


def test_compare_priority_interval_oracle():
    rng = random.Random(4242)
    done = 0
    while done < 1000:
        lat = random_lattice(rng, rng.randint(2, 3), 8)
        k = tuple(rng.randint(-4, 4) for _ in range(lat.rank))
        a = tuple(rng.randint(-5, 5) for _ in range(lat.rank))
        b = tuple(rng.randint(-5, 5) for _ in range(lat.rank))
        try:
            if lat.inner(k, a) >= 0 or lat.inner(k, b) >= 0:
                continue
            if lat.norm(a) <= 0 or lat.norm(b) <= 0:
                continue
        except ValueError:
            continue
        got = compare_priority(lat, k, a, b)
        want = priority_interval_compare(lat, k, a, b)
        if want == 0:
            assert priority_sq(lat, k, a) == priority_sq(lat, k, b)
        else:
            # compare_priority breaks priority ties by norm, so only compare
            # when the real priorities differ
            assert got == want
        done += 1


def test_approval_filter_basics():
    assert approval_filter(L12, (0, 1), [(-1, 0)], [(2, 1)]) == ((2, 1),)
    # a double right after its half is rejected
    assert approval_filter(L12, (0, 1), [(-1, 0)], [(2, 1), (4, 2)]) == ((2, 1),)
    with pytest.raises(ValueError, match="sorted"):
        approval_filter(L12, (0, 1), [(-1, 0)], [(3, 2), (2, 1)])
    with pytest.raises(ValueError, match="batch 0"):
        approval_filter(L12, (0, 1), [(1, 0)], [(2, 1)])


def test_approval_filter_truncated_run():
    # all roots with negative control product and priority <= 2, by brute force
    cands = []
    for x in range(-30, 31):
        for y in range(1, 21):
            v = (x, y)
            if L12.norm(v) > 0 and is_root(L12, v) and L12.inner((0, 1), v) < 0:
                if priority_sq(L12, (0, 1), v) <= 4:
                    if L12.inner(v, (-1, 0)) <= 0:
                        cands.append(v)
    cands.sort(key=lambda v: (priority_sq(L12, (0, 1), v), L12.norm(v), v))
    approved = approval_filter(L12, (0, 1), [(-1, 0)], cands)
    assert approved == ((2, 1),)


def test_approval_filter_tie_shuffle_independence():
    rng = random.Random(9)
    base = []
    for x in range(-30, 31):
        for y in range(1, 26):
            v = (x, y)
            if L12.norm(v) > 0 and is_root(L12, v) and L12.inner((0, 1), v) < 0:
                if priority_sq(L12, (0, 1), v) <= 30 and L12.inner(v, (-1, 0)) <= 0:
                    base.append(v)
    key = lambda v: (priority_sq(L12, (0, 1), v), L12.norm(v))
    base.sort(key=lambda v: (key(v), v))
    reference = approval_filter(L12, (0, 1), [(-1, 0)], base)
    for _ in range(10):
        groups = {}
        for v in base:
            groups.setdefault(key(v), []).append(v)
        shuffled = []
        for k in sorted(groups):
            vs = groups[k][:]
            rng.shuffle(vs)
            shuffled.extend(vs)
        assert approval_filter(L12, (0, 1), [(-1, 0)], shuffled) == reference


def test_vinberg_run_triangle():
    res = vinberg_run(E3, (0, 0, 1), [(0, -1, 0), (-1, 1, 0)], max_priority_sq=Q(1))
    assert res.roots == ((1, 1, 1),)
    assert not res.exhausted
    full = [(0, -1, 0), (-1, 1, 0), (1, 1, 1)]
    for a in full:
        for b in full:
            if a != b:
                assert E3.inner(a, b) <= 0


def test_vinberg_run_slow_lattice():
    res = vinberg_run(L106, (0, 1), [(-1, 0)], max_batches=20000)
    assert (41234, 4005) in res.roots
    assert res.roots == ((41234, 4005),)
    e = 106
    for v in res.roots:
        assert (2 * e) % L106.norm(v) == 0  # root norms divide twice the exponent


def test_vinberg_run_norm_restricted_empty_batches():
    res = vinberg_run(L106, (0, 1), [(-1, 0)], max_batches=10**4, norms=[1])
    assert res.roots == ()
    assert res.batches_examined == 10**4
    assert res.exhausted


def test_vinberg_run_validation():
    with pytest.raises(ValueError, match="timelike"):
        vinberg_run(L12, (1, 0), [(-1, 0)], max_batches=1)
    with pytest.raises(ValueError, match="orthogonal"):
        vinberg_run(L12, (0, 1), [(2, 1)], max_batches=1)
    with pytest.raises(ValueError, match="max_batches"):
        vinberg_run(L12, (0, 1), [(-1, 0)])
    with pytest.raises(ValueError, match="cannot be a root norm"):
        vinberg_run(L12, (0, 1), [(-1, 0)], max_batches=1, norms=[5])


def test_vinberg_accepted_roots_pairwise_nonpositive():
    lat = Lattice([[1, 0, 0], [0, 2, 0], [0, 0, -3]])
    cornerless = vinberg_run(lat, (0, 0, 1), [], max_batches=60)
    roots = cornerless.roots
    for i, a in enumerate(roots):
        assert is_root(lat, a)
        for b in roots[i + 1 :]:
            assert lat.inner(a, b) <= 0


def test_pell_fundamental():
    assert pell_fundamental(106) == (32080051, 3115890)
    assert pell_fundamental(2) == (3, 2)
    assert pell_fundamental(3) == (2, 1)
    for n in (5, 13, 61):
        x, y = pell_fundamental(n)
        assert x * x - n * y * y == 1
        for yy in range(1, y):
            assert not _is_square(n * yy * yy + 1)
    with pytest.raises(ValueError):
        pell_fundamental(9)
    with pytest.raises(ValueError):
        pell_fundamental(1)


def _is_square(n):
    from math import isqrt

    return isqrt(n) ** 2 == n


def test_fundamental_unit_examples():
    d2 = fundamental_unit(2)
    assert d2.u == (1, 1) and d2.v == (3, 2) and not d2.has_half_integers
    d5 = fundamental_unit(5)
    assert d5.u == (Q(1, 2), Q(1, 2)) and d5.v == (Q(3, 2), Q(1, 2))
    assert d5.has_half_integers
    d106 = fundamental_unit(106)
    assert d106.v == (32080051, 3115890)
    assert d106.pell == (32080051, 3115890)
    d19 = fundamental_unit(19)
    assert d19.u == (170, 39)  # known fundamental unit of Q(sqrt 19)
    with pytest.raises(ValueError, match="square-free"):
        fundamental_unit(12)


def test_fundamental_unit_is_a_unit_and_minimal():
    for n in (2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 29, 33):
        data = fundamental_unit(n)
        x, y = data.u
        norm = x * x - n * y * y
        assert norm in (1, -1)
        assert x > 0 and y > 0
        # minimality scan over the sqrt coefficient
        step = Q(1, 2) if data.has_half_integers else 1
        yy = step
        while yy < y:
            xx2 = n * yy * yy + 1
            xx2m = n * yy * yy - 1
            for target in (xx2, xx2m):
                r = _rational_sqrt(target)
                if r is not None and (r - yy).denominator <= 2:
                    ok_ring = (
                        (r.denominator == 1 and Q(yy).denominator == 1)
                        or (data.has_half_integers and (2 * r).denominator == 1 and (2 * Q(yy)).denominator == 1 and int(2 * r - 2 * Q(yy)) % 2 == 0)
                    )
                    assert not ok_ring, f"smaller unit {r}+{yy} sqrt{n} exists"
            yy += step


def _rational_sqrt(q):
    from chamberwalk._linalg import rational_sqrt

    return rational_sqrt(q)


def test_rank2_second_root_examples():
    r106 = rank2_second_root(106)
    assert r106.alpha == (41234, 4005)
    assert r106.alpha_norm == 106
    assert r106.batch_number == 4005
    r5 = rank2_second_root(5)
    assert r5.alpha == (Q(5, 2), Q(1, 2))
    assert r5.alpha_norm == 5 and r5.batch_number == 1
    r769 = rank2_second_root(769)
    assert r769.alpha == (453881183125633513, 16367374077549540)
    assert r769.batch_number == 32734748155099080


TABLE = {
    2: (2, Q(2), Q(1), 1),
    3: (6, Q(3), Q(1), 1),
    5: (5, Q(5, 2), Q(1, 2), 1),
    6: (3, Q(3), Q(1), 1),
    7: (2, Q(3), Q(1), 1),
    19: (38, Q(57), Q(13), 13),
    67: (134, Q(1809), Q(221), 221),
    73: (73, Q(9125), Q(1068), 2136),
    97: (97, Q(55193), Q(5604), 11208),
    193: (193, Q(24508105), Q(1764132), 3528264),
    241: (241, Q(1102388225), Q(71011068), 142022136),
    337: (337, Q(18648111017), Q(1015827336), 2031654672),
    409: (409, Q(2263478264165), Q(111921796968), 223843593936),
    601: (601, Q(3419107492676845), Q(139468303679532), 278936607359064),
    769: (769, Q(453881183125633513), Q(16367374077549540), 32734748155099080),
}


def test_full_table():
    assert set(TABLE) == set(DEFAULT_TABLE_ROWS)
    for n, (norm, c1, c2, batch) in TABLE.items():
        row = rank2_second_root(n)
        assert row.alpha_norm == norm
        assert row.alpha == (c1, c2)
        assert row.batch_number == batch
        # the second root really is a root of the corresponding lattice
        if not fundamental_unit(n).has_half_integers:
            lat = Lattice([[1, 0], [0, -n]])
            v = (int(c1), int(c2))
            assert is_root(lat, v) and lat.norm(v) == norm
