import random
from fractions import Fraction

import pytest

from reldelcech.predicates import (
    det_exact,
    det_exact_int,
    det_sign_exact,
    filtered_det_sign,
    sos_sign,
)


def minor_expansion_det(rows):
    """Independent exact determinant: first-row expansion with column-set
    memoization (no elimination)."""
    n = len(rows)
    memo = {}

    def go(i, cols):
        if i == n:
            return Fraction(1)
        key = (i, cols)
        if key in memo:
            return memo[key]
        total = Fraction(0)
        sign = 1
        for c in sorted(cols):
            x = rows[i][c]
            if x:
                total += sign * Fraction(x) * go(i + 1, cols - {c})
            sign = -sign
        memo[key] = total
        return total

    return go(0, frozenset(range(n)))


def rand_matrix(rng, n, scale=4):
    return [[Fraction(rng.randint(-scale, scale)) for _ in range(n)] for _ in range(n)]


def test_det_exact_matches_minor_expansion():
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randint(1, 6)
        m = rand_matrix(rng, n)
        assert det_exact(m) == minor_expansion_det(m)


def test_det_exact_int_matches_fraction_path():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.randint(1, 6)
        m = [[rng.randint(-(2**60), 2**60) for _ in range(n)] for _ in range(n)]
        assert Fraction(det_exact_int(m)) == minor_expansion_det(m)


def test_filtered_sign_never_contradicts_exact():
    rng = random.Random(2)
    checked = certain = 0
    for _ in range(3000):
        n = rng.randint(2, 5)
        if rng.random() < 0.5:
            m = [[rng.uniform(-1, 1) for _ in range(n)] for _ in range(n)]
        else:
            # nearly singular: duplicate a row up to noise
            m = [[rng.uniform(-1, 1) for _ in range(n)] for _ in range(n)]
            i, j = rng.sample(range(n), 2)
            m[i] = [x + rng.uniform(-1e-14, 1e-14) for x in m[j]]
        s = filtered_det_sign(m)
        checked += 1
        if s is not None:
            certain += 1
            exact = det_sign_exact([[Fraction(x) for x in row] for row in m])
            assert s == exact
    assert certain > checked // 2  # the filter must actually decide things


# -- symbolic perturbation -----------------------------------------------------


def numeric_perturbed_sign(rows, ranks, eps_pow):
    """Evaluate the moment-curve perturbation at an explicit tiny rational
    epsilon = 2**-eps_pow and take the exact sign."""
    n = len(rows)
    ncoords = n - 1
    base = ncoords + 2
    order = {r: p for p, r in enumerate(sorted(r for r in ranks if r is not None))}
    eps = Fraction(1, 2**eps_pow)
    pert = []
    for i, row in enumerate(rows):
        row = [Fraction(x) for x in row]
        if ranks[i] is not None:
            t = eps ** (base ** order[ranks[i]])
            for c in range(ncoords):
                row[c] += t ** (c + 1)
        pert.append(row)
    return det_sign_exact(pert)


def homog(pts):
    return [list(p) + [1] for p in pts]


def test_sos_matches_numeric_substitution_on_degenerate_cases():
    cases = [
        # three collinear points in the plane
        ([(0, 0), (1, 0), (2, 0)], [0, 1, 2]),
        ([(0, 0), (1, 0), (2, 0)], [2, 0, 1]),
        ([(0, 0), (2, 0), (1, 0)], [0, 1, 2]),
        # duplicate-looking rows
        ([(1, 1), (1, 1), (0, 3)], [0, 1, 2]),
        ([(1, 1), (1, 1), (1, 1)], [0, 1, 2]),
        ([(1, 1), (1, 1), (1, 1)], [5, 3, 4]),
        # coplanar in 3d
        ([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)], [0, 1, 2, 3]),
        ([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)], [3, 2, 1, 0]),
        ([(2, 1, 3), (2, 1, 3), (0, 1, 0), (4, 4, 4)], [1, 0, 3, 2]),
    ]
    for pts, ranks in cases:
        rows = homog(pts)
        got = sos_sign(rows, ranks)
        assert got != 0
        # small enough epsilon: two powers must agree with each other and us
        s64 = numeric_perturbed_sign(rows, ranks, 64)
        s96 = numeric_perturbed_sign(rows, ranks, 96)
        assert s64 == s96 == got, (pts, ranks, got, s64, s96)


def test_sos_random_degenerate_against_substitution():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(3, 4)
        # random integer points forced into an affine degeneracy
        pts = [[rng.randint(-3, 3) for _ in range(n - 1)] for _ in range(n - 1)]
        lam = [rng.randint(0, 2) for _ in range(n - 1)]
        tot = sum(lam) or 1
        dep = [
            sum(lam[k] * pts[k][c] for k in range(n - 1)) / Fraction(tot)
            for c in range(n - 1)
        ]
        rows = homog(pts + [dep])
        ranks = list(range(n))
        rng.shuffle(ranks)
        got = sos_sign(rows, ranks)
        assert got != 0
        s = numeric_perturbed_sign(rows, ranks, 80)
        s2 = numeric_perturbed_sign(rows, ranks, 120)
        if s == s2:  # epsilon small enough to trust the substitution
            assert got == s


def test_sos_row_swap_antisymmetry():
    rng = random.Random(3)
    for _ in range(40):
        pts = [(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(3)]
        rows = homog(pts)
        ranks = [0, 1, 2]
        s = sos_sign(rows, ranks)
        swapped_rows = [rows[1], rows[0], rows[2]]
        swapped_ranks = [1, 0, 2]
        assert sos_sign(swapped_rows, swapped_ranks) == -s


def test_sos_agrees_with_exact_when_nondegenerate():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(2, 5)
        m = rand_matrix(rng, n - 1, scale=5)
        rows = homog([tuple(r) for r in m])
        exact = det_sign_exact(rows)
        if exact != 0:
            assert sos_sign(rows, list(range(n))) == exact


def test_sos_unperturbed_direction_row():
    # vertical wall: two points sharing the x coordinate plus a downward
    # direction row must still resolve (covered by point perturbations)
    rows = [[1, 5, 1], [1, 7, 1], [0, -1, 0]]
    s = sos_sign(rows, [0, 1, None])
    assert s in (-1, 1)


def test_filter_zero_matrix():
    assert filtered_det_sign([[0.0, 0.0], [0.0, 0.0]]) is None
    assert det_sign_exact([[0, 0], [0, 0]]) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_identity_dets(n):
    eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    assert det_exact_int(eye) == 1
    assert filtered_det_sign([[float(x) for x in row] for row in eye]) == 1
