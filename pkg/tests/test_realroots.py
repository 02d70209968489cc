import random
from fractions import Fraction

from concord.realroots import (
    evaluate,
    isolate_roots,
    squarefree,
    sturm_chain,
    count_roots_half_open,
)


def F(a, b=1):
    return Fraction(a, b)


def test_isolates_known_roots():
    # (x-1)(x+1/2)(x-5/3) = x^3 - 13/6 x^2 + ... expanded via constructor
    roots = [F(1), F(-1, 2), F(5, 3)]
    p = [F(1)]
    for r in roots:
        p = [c * (-r) for c in p] + [F(0)]
        for i, c in enumerate(p[:-1]):
            pass
    # build properly: multiply (x - r)
    p = [F(1)]
    for r in roots:
        new = [F(0)] * (len(p) + 1)
        for i, c in enumerate(p):
            new[i + 1] += c
            new[i] += c * (-r)
        p = new
    found = isolate_roots(p, F(-2), F(2))
    assert len(found) == 3
    for r, iso in zip(sorted(roots), found):
        assert iso.lo <= r <= iso.hi
        if not iso.is_exact():
            assert evaluate(list(iso.poly), iso.lo) * evaluate(list(iso.poly), iso.hi) < 0


def test_exact_rational_root_collapses():
    p = [F(-1), F(0), F(1)]  # x^2 - 1, roots at +-1
    found = isolate_roots(p, F(-2), F(2))
    assert len(found) == 2
    refined = [r.refine(F(1, 64)) for r in found]
    # dyadic bisection lands exactly on the rational roots
    assert all(r.is_exact() for r in refined)
    assert [r.lo for r in refined] == [F(-1), F(1)]


def test_refinement_narrows():
    p = [F(-2), F(0), F(1)]  # x^2 - 2
    found = isolate_roots(p, F(-2), F(2))
    assert len(found) == 2
    r = found[1].refine(F(1, 10**12))
    assert r.width() <= F(1, 10**12)
    assert evaluate([F(-2), F(0), F(1)], r.lo) < 0 or r.is_exact()
    assert r.lo <= F(14142135623730951, 10**16) <= r.hi


def test_random_products_count():
    rng = random.Random(77)
    for _ in range(40):
        roots = sorted(set(Fraction(rng.randrange(-30, 31), rng.randrange(1, 16)) for _ in range(rng.randrange(1, 5))))
        p = [F(1)]
        for r in roots:
            new = [F(0)] * (len(p) + 1)
            for i, c in enumerate(p):
                new[i + 1] += c
                new[i] += c * (-r)
            p = new
        lo, hi = F(-40), F(40)
        found = isolate_roots(p, lo, hi)
        assert len(found) == len(roots)
        for r, iso in zip(roots, found):
            assert iso.lo <= r <= iso.hi

        chain = sturm_chain(p)
        assert count_roots_half_open(chain, lo, hi) == len(roots)


def test_squarefree():
    # (x-1)^2 (x+2) -> squarefree part has roots {1, -2}
    p = [F(1)]
    for r in [F(1), F(1), F(-2)]:
        new = [F(0)] * (len(p) + 1)
        for i, c in enumerate(p):
            new[i + 1] += c
            new[i] += c * (-r)
        p = new
    sf = squarefree(p)
    found = isolate_roots(sf, F(-3), F(3))
    assert len(found) == 2
