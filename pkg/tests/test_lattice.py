import pytest
from hypothesis import given, strategies as st

from discwaves.lattice import (
    MOORE, NotRepresentableError, check_radius, circle_points, convex_hull, dihedral_images,
    disc_points, distinct_radii, in_octant, is_representable, nearest_representable,
)

from oracles import disc, representable

SMALL = [r2 for r2 in range(401) if representable(r2)]


@pytest.mark.parametrize("n, expected", [(0, True), (3, False), (5, True), (7, False), (25, True), (21, False)])
def test_representable_examples(n, expected):
    assert is_representable(n) is expected


def test_representable_matches_brute_force():
    assert [n for n in range(500) if is_representable(n)] == [n for n in range(500) if representable(n)]
    assert not is_representable(-1)


def test_distinct_radii():
    assert distinct_radii(16) == [1, 2, 4, 5, 8, 9, 10, 13, 16]
    assert distinct_radii(0) == []
    assert distinct_radii(3) == [1, 2]
    with pytest.raises(ValueError):
        distinct_radii(-1)


@given(st.integers(0, 600))
def test_distinct_radii_is_sums_of_squares(limit):
    want = {a * a + b * b for a in range(limit + 1) for b in range(limit + 1)
            if 0 < a * a + b * b <= limit}
    assert distinct_radii(limit) == sorted(want)


def test_not_representable_message():
    with pytest.raises(NotRepresentableError, match="3 is not a sum of two squares; nearest representable: 2, 4"):
        check_radius(3)
    assert nearest_representable(7) == (5, 8)
    assert nearest_representable(0) == (None, 1)
    with pytest.raises(ValueError):
        check_radius(-4)
    with pytest.raises(TypeError):
        check_radius(2.0)


def test_disc_sizes():
    assert disc_points(1).points == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}
    assert len(disc_points(2)) == 9
    assert len(disc_points(9)) == 29
    assert disc_points(0).points == {(0, 0)}


@pytest.mark.parametrize("r2", SMALL)
def test_disc_matches_brute_force_and_is_symmetric(r2):
    pts = disc_points(r2).points
    assert pts == disc(r2)
    assert all(q in pts for p in pts for q in dihedral_images(p))


def test_circle_examples():
    assert circle_points(1).boundary == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert circle_points(2).boundary == disc_points(2).points - {(0, 0)}
    assert sorted(p for p in circle_points(45).boundary if in_octant(p)) == [
        (0, 6), (1, 6), (2, 6), (3, 6), (4, 5)]
    # the 8-neighbour test also flags the centre of the radius-1 disc
    assert (0, 0) in circle_points(1, "moore")
    with pytest.raises(ValueError):
        circle_points(1, "hex")


@pytest.mark.parametrize("r2", SMALL[::7])
def test_interior_points_have_all_moore_neighbours(r2):
    pts = disc_points(r2).points
    boundary = circle_points(r2, "moore").boundary
    assert boundary <= pts
    for x, y in pts - boundary:
        assert all((x + dx, y + dy) in pts for dx, dy in MOORE)


def test_convex_hull_examples():
    assert convex_hull({(0, 0)}) == [(0, 0)]
    assert convex_hull(disc_points(1).points) == [(-1, 0), (0, -1), (1, 0), (0, 1)]
    hull = convex_hull(disc_points(9).points)
    assert set(hull) == {(3, 0), (-3, 0), (0, 3), (0, -3), (2, 2), (2, -2), (-2, 2), (-2, -2)}
    assert hull[0] == min(hull)
    with pytest.raises(ValueError, match="empty point set"):
        convex_hull([])


@given(st.sets(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=3, max_size=30))
def test_convex_hull_contains_everything_counter_clockwise(points):
    hull = convex_hull(points)
    if len(hull) < 3:
        return
    for i, o in enumerate(hull):
        a = hull[(i + 1) % len(hull)]
        for p in points:
            assert (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) >= 0


def test_octants_cover_the_plane():
    for p in [(x, y) for x in range(-4, 5) for y in range(-4, 5)]:
        assert any(in_octant(p, n) for n in range(1, 9))
    with pytest.raises(ValueError):
        in_octant((0, 0), 9)
