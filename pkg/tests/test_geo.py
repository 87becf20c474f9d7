import math
import random

import h3
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zklp.geo import (
    EARTH_RADIUS_KM, GeoPoint, IjkCoord, cell_center, cell_vertices, face_data, generate_corpus,
    h3_cell_id, haversine, min_distance_to_hex, read_corpus, reference_latlng_to_ijk, write_corpus,
)

PARIS = GeoPoint.from_degrees(48.8566, 2.3522)
LONDON = GeoPoint.from_degrees(51.5074, -0.1278)

lat = st.floats(-math.pi / 2, math.pi / 2)
lng = st.floats(-math.pi, math.pi)
points = st.builds(GeoPoint, lat, lng)


def great_circle(p1, p2, radius=EARTH_RADIUS_KM):
    """Angle between unit vectors via atan2(|u x v|, u . v)."""
    def vec(p):
        return np.array([math.cos(p.lat) * math.cos(p.lng), math.cos(p.lat) * math.sin(p.lng), math.sin(p.lat)])
    u, v = vec(p1), vec(p2)
    return radius * math.atan2(np.linalg.norm(np.cross(u, v)), float(u @ v))


@given(points, points)
def test_haversine_symmetric(p, q):
    assert haversine(p, q) == haversine(q, p)


@given(points)
def test_haversine_zero_on_identical_points(p):
    assert haversine(p, p) == 0.0


@given(points, points)
def test_haversine_matches_vector_formula(p, q):
    assert haversine(p, q) == pytest.approx(great_circle(p, q), abs=1e-6)


def test_antipodal_is_half_circumference():
    p = GeoPoint(0.3, 1.0)
    q = GeoPoint(-0.3, 1.0 - math.pi)
    assert haversine(p, q) == pytest.approx(math.pi * EARTH_RADIUS_KM, rel=1e-12)
    assert haversine(p, q, radius=1.0) == pytest.approx(math.pi, rel=1e-12)


def test_paris_london():
    d = haversine(PARIS, LONDON)
    assert 343 <= d <= 344
    assert abs(d - great_circle(PARIS, LONDON)) <= 0.5


def test_face_centres_map_to_origin_cells():
    for f, (la, ln) in enumerate(face_data().center_geo):
        c = reference_latlng_to_ijk(GeoPoint(la, ln), 0)
        assert (c.face, c.i, c.j, c.k) == (f, 0, 0, 0)


def test_reference_matches_h3_on_paris():
    c = reference_latlng_to_ijk(PARIS, 9)
    assert h3_cell_id(c) == h3.latlng_to_cell(48.8566, 2.3522, 9)


def test_reference_matches_h3_on_random_points():
    rng = random.Random(4)
    for _ in range(500):
        la, ln = math.degrees(math.asin(rng.uniform(-1, 1))), rng.uniform(-180, 180)
        res = rng.randrange(16)
        c = reference_latlng_to_ijk(GeoPoint.from_degrees(la, ln), res)
        assert min(c.i, c.j, c.k) == 0
        assert h3_cell_id(c) == h3.latlng_to_cell(la, ln, res)


def test_vertices_match_h3_boundary():
    cell = reference_latlng_to_ijk(PARIS, 7)
    vs = cell_vertices(cell)
    hb = h3.cell_to_boundary(h3.latlng_to_cell(48.8566, 2.3522, 7))
    got = [x for v in vs for x in (math.degrees(v.lat), math.degrees(v.lng))]
    assert got == pytest.approx([x for ll in hb for x in ll], abs=1e-12)


def test_min_distance_at_a_vertex_is_zero():
    cell = reference_latlng_to_ijk(PARIS, 9)
    v = cell_vertices(cell)[2]
    assert min_distance_to_hex(v, cell) == pytest.approx(0.0, abs=1e-9)


def test_min_distance_matches_brute_force():
    rng = random.Random(9)
    for _ in range(50):
        p = GeoPoint.from_degrees(rng.uniform(-80, 80), rng.uniform(-180, 180))
        q = GeoPoint.from_degrees(rng.uniform(-80, 80), rng.uniform(-180, 180))
        cell = reference_latlng_to_ijk(q, rng.randrange(16))
        brute = min(great_circle(p, v) for v in cell_vertices(cell))
        assert min_distance_to_hex(p, cell) == pytest.approx(brute, abs=1e-6)


def test_centre_distance_within_circumradius_bound():
    prev = math.inf
    for res in range(16):
        cell = reference_latlng_to_ijk(PARIS, res)
        d = min_distance_to_hex(cell_center(cell), cell)
        # hexagon circumradius equals its edge; allow for the size spread across the globe
        bound = 2 * h3.average_hexagon_edge_length(res, unit="km")
        assert 0 < d <= bound < prev
        prev = bound


def test_corpus_shape(corpus):
    assert len(corpus) == 16 * 16 * 100
    counts = {}
    for r in corpus:
        counts[(r.res, r.dist_index)] = counts.get((r.res, r.dist_index), 0) + 1
    assert set(counts.values()) == {100} and len(counts) == 256


def test_corpus_expected_cells_match_h3(corpus):
    for r in corpus:
        e = r.expected
        assert min(e.i, e.j, e.k) == 0 and 0 <= e.face < 20
        assert h3_cell_id(e) == h3.latlng_to_cell(math.degrees(r.point.lat), math.degrees(r.point.lng), r.res)


def test_corpus_is_reproducible(tmp_path, corpus):
    a = generate_corpus(0, [3, 11])
    assert a == [r for r in corpus if r.res in (3, 11)]
    write_corpus(a, tmp_path / "a.txt", 0)
    write_corpus(generate_corpus(0, [3, 11]), tmp_path / "b.txt", 0)
    assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()
    assert list(read_corpus(tmp_path / "a.txt")) == a
    assert generate_corpus(1, [3]) != generate_corpus(0, [3])


def test_corpus_version_is_checked(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("# zklp-corpus v0 seed=0\n")
    with pytest.raises(ValueError, match="version"):
        list(read_corpus(p))


def test_ijk_record_format():
    assert IjkCoord(3, 1, 0, 2, 9).record() == "{res: 9, face: 3, i: 1, j: 0, k: 2}"
