"""Plain-float reference oracles.

This module holds the native double-precision version of the H3
geo -> (face, i, j, k) transform (with real trigonometry), the inverse
mapping used to place test points, Haversine proximity, and the seeded
test-corpus generator.
"""

from __future__ import annotations

import json
import math
import random
import struct
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, Iterator

import h3

EARTH_RADIUS_KM = 6371.0088
CORPUS_VERSION = "zklp-corpus v1"
NUM_DISTANCES = 16
POINTS_PER_DISTANCE = 100


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lng: float

    @classmethod
    def from_degrees(cls, lat: float, lng: float) -> "GeoPoint":
        return cls(math.radians(lat), math.radians(lng))


@dataclass(frozen=True)
class IjkCoord:
    face: int
    i: int
    j: int
    k: int
    res: int

    def record(self) -> str:
        return f"{{res: {self.res}, face: {self.face}, i: {self.i}, j: {self.j}, k: {self.k}}}"


@dataclass(frozen=True)
class FaceData:
    center_geo: tuple[tuple[float, float], ...]
    center_point: tuple[tuple[float, float, float], ...]
    axes_az: tuple[float, ...]
    constants: dict


@lru_cache(maxsize=None)
def face_data() -> FaceData:
    """Load the checked-in H3 face constants (see h3_faces.json)."""
    raw = json.loads(resources.files("zklp").joinpath("h3_faces.json").read_text())
    return FaceData(
        center_geo=tuple((float(a), float(b)) for a, b in raw["face_center_geo"]),
        center_point=tuple(tuple(float(c) for c in xyz) for xyz in raw["face_center_point"]),
        axes_az=tuple(float(a) for a in raw["face_axes_az_cii"]),
        constants={k: float(v) for k, v in raw["constants"].items()},
    )


_C = face_data().constants
M_SQRT7 = _C["M_SQRT7"]
M_RSQRT7 = _C["M_RSQRT7"]
M_SQRT3_2 = _C["M_SQRT3_2"]
M_RSIN60 = _C["M_RSIN60"]
M_AP7_ROT_RADS = _C["M_AP7_ROT_RADS"]
M_2PI = _C["M_2PI"]
RES0_U_GNOMONIC = _C["RES0_U_GNOMONIC"]
INV_RES0_U_GNOMONIC = _C["INV_RES0_U_GNOMONIC"]
EPSILON = _C["EPSILON"]


# --- forward transform ---------------------------------------------------

def geo_to_vec3d(p: GeoPoint) -> tuple[float, float, float]:
    r = math.cos(p.lat)
    return (math.cos(p.lng) * r, math.sin(p.lng) * r, math.sin(p.lat))


def point_square_dist(v1: tuple[float, float, float], v2: tuple[float, float, float]) -> float:
    return (v1[0] - v2[0]) ** 2 + (v1[1] - v2[1]) ** 2 + (v1[2] - v2[2]) ** 2


def closest_face(p: GeoPoint) -> tuple[int, float]:
    """Closest icosahedron face centre and its squared chord distance.

    Strict comparison, so the lowest index wins ties.
    """
    v = geo_to_vec3d(p)
    face, sqd = 0, 5.0
    for f, c in enumerate(face_data().center_point):
        d = point_square_dist(c, v)
        if d < sqd:
            face, sqd = f, d
    return face, sqd


def pos_angle(a: float) -> float:
    tmp = a + M_2PI if a < 0.0 else a
    if tmp >= M_2PI:
        tmp -= M_2PI
    return tmp


def constrain_lng(lng: float) -> float:
    while lng > math.pi:
        lng -= 2 * math.pi
    while lng < -math.pi:
        lng += 2 * math.pi
    return lng


def geo_azimuth(p1: GeoPoint, p2: GeoPoint) -> float:
    return math.atan2(
        math.cos(p2.lat) * math.sin(p2.lng - p1.lng),
        math.cos(p1.lat) * math.sin(p2.lat)
        - math.sin(p1.lat) * math.cos(p2.lat) * math.cos(p2.lng - p1.lng),
    )


def geo_to_hex2d(p: GeoPoint, res: int) -> tuple[int, tuple[float, float]]:
    face, sqd = closest_face(p)
    r = math.acos(1 - sqd * 0.5)
    if r < EPSILON:
        return face, (0.0, 0.0)
    fd = face_data()
    center = GeoPoint(*fd.center_geo[face])
    theta = pos_angle(fd.axes_az[face] - pos_angle(geo_azimuth(center, p)))
    if res % 2 == 1:
        theta = pos_angle(theta - M_AP7_ROT_RADS)
    r = math.tan(r)
    r *= INV_RES0_U_GNOMONIC
    for _ in range(res):
        r *= M_SQRT7
    return face, (r * math.cos(theta), r * math.sin(theta))


def ijk_normalize(i: int, j: int, k: int) -> tuple[int, int, int]:
    if i < 0:
        j -= i
        k -= i
        i = 0
    if j < 0:
        i -= j
        k -= j
        j = 0
    if k < 0:
        i -= k
        j -= k
        k = 0
    m = min(i, j, k)
    if m > 0:
        i, j, k = i - m, j - m, k - m
    return i, j, k


def hex2d_to_ijk(x: float, y: float) -> tuple[int, int, int]:
    """Quantize planar coordinates to the containing hexagon (H3 layout)."""
    a1 = abs(x)
    a2 = abs(y)
    x2 = a2 * M_RSIN60
    x1 = a1 + x2 / 2.0
    m1 = int(x1)
    m2 = int(x2)
    r1 = x1 - m1
    r2 = x2 - m2

    if r1 < 0.5:
        if r1 < 1.0 / 3.0:
            i = m1
            j = m2 if r2 < (1.0 + r1) / 2.0 else m2 + 1
        else:
            j = m2 if r2 < (1.0 - r1) else m2 + 1
            i = m1 + 1 if (1.0 - r1) <= r2 and r2 < (2.0 * r1) else m1
    else:
        if r1 < 2.0 / 3.0:
            j = m2 if r2 < (1.0 - r1) else m2 + 1
            i = m1 if (2.0 * r1 - 1.0) < r2 and r2 < (1.0 - r1) else m1 + 1
        else:
            i = m1 + 1
            j = m2 if r2 < (r1 / 2.0) else m2 + 1

    if x < 0.0:
        if j % 2 == 0:
            axisi = j // 2
            i = int(i - 2.0 * (i - axisi))
        else:
            axisi = (j + 1) // 2
            i = int(i - (2.0 * (i - axisi) + 1))
    if y < 0.0:
        i = i - (2 * j + 1) // 2
        j = -j
    return ijk_normalize(i, j, 0)


def reference_latlng_to_ijk(p: GeoPoint, res: int) -> IjkCoord:
    """Ground-truth geo -> (face, i, j, k) in native doubles with real trig."""
    face, (x, y) = geo_to_hex2d(p, res)
    return IjkCoord(face, *hex2d_to_ijk(x, y), res)


# --- inverse transform -----------------------------------------------------

def ijk_to_hex2d(i: int, j: int, k: int) -> tuple[float, float]:
    i, j = i - k, j - k
    return (i - 0.5 * j, j * M_SQRT3_2)


def geo_az_distance(p1: GeoPoint, az: float, distance: float) -> GeoPoint:
    if distance < EPSILON:
        return p1
    az = pos_angle(az)
    half_pi = math.pi / 2
    if az < EPSILON or abs(az - math.pi) < EPSILON:
        lat = p1.lat + distance if az < EPSILON else p1.lat - distance
        if abs(lat - half_pi) < EPSILON:
            return GeoPoint(half_pi, 0.0)
        if abs(lat + half_pi) < EPSILON:
            return GeoPoint(-half_pi, 0.0)
        return GeoPoint(lat, constrain_lng(p1.lng))
    sinlat = math.sin(p1.lat) * math.cos(distance) + math.cos(p1.lat) * math.sin(distance) * math.cos(az)
    lat = math.asin(min(1.0, max(-1.0, sinlat)))
    if abs(lat - half_pi) < EPSILON:
        return GeoPoint(half_pi, 0.0)
    if abs(lat + half_pi) < EPSILON:
        return GeoPoint(-half_pi, 0.0)
    sinlng = math.sin(az) * math.sin(distance) / math.cos(lat)
    coslng = (math.cos(distance) - math.sin(p1.lat) * math.sin(lat)) / math.cos(p1.lat) / math.cos(lat)
    sinlng = min(1.0, max(-1.0, sinlng))
    coslng = min(1.0, max(-1.0, coslng))
    return GeoPoint(lat, constrain_lng(p1.lng + math.atan2(sinlng, coslng)))


def hex2d_to_geo(x: float, y: float, face: int, res: int) -> GeoPoint:
    """Inverse gnomonic projection of a face-plane point back to the sphere."""
    fd = face_data()
    center = GeoPoint(*fd.center_geo[face])
    r = math.hypot(x, y)
    if r < EPSILON:
        return center
    theta = math.atan2(y, x)
    for _ in range(res):
        r *= M_RSQRT7
    r *= RES0_U_GNOMONIC
    r = math.atan(r)
    if res % 2 == 1:
        theta = pos_angle(theta + M_AP7_ROT_RADS)
    theta = pos_angle(fd.axes_az[face] - theta)
    return geo_az_distance(center, theta, r)


def cell_center(cell: IjkCoord) -> GeoPoint:
    return hex2d_to_geo(*ijk_to_hex2d(cell.i, cell.j, cell.k), cell.face, cell.res)


# Unit hexagon in face-plane units: neighbouring centres are 1 apart, so
# the inradius is 1/2 and vertices sit at 30 + 60k degrees.
HEX_CIRCUMRADIUS = 1.0 / math.sqrt(3.0)


def hex_boundary_2d(cell: IjkCoord) -> list[tuple[float, float]]:
    cx, cy = ijk_to_hex2d(cell.i, cell.j, cell.k)
    out = []
    for n in range(6):
        a = math.radians(30 + 60 * n)
        out.append((cx + HEX_CIRCUMRADIUS * math.cos(a), cy + HEX_CIRCUMRADIUS * math.sin(a)))
    return out


def cell_boundary(cell: IjkCoord) -> list[GeoPoint]:
    """Boundary vertices of a cell, projected from its home face plane.

    Matches the H3 library for hexagons lying inside one icosahedron face;
    cells cut by a face edge or centred on a pentagon differ, which is why
    proximity uses `cell_vertices`.
    """
    return [hex2d_to_geo(x, y, cell.face, cell.res) for x, y in hex_boundary_2d(cell)]


def boundary_distance_2d(bearing: float) -> float:
    """Distance from a unit hexagon's centre to its boundary along `bearing`."""
    # edge normals point at multiples of 60 degrees, each edge at distance 1/2
    off = (bearing % (math.pi / 3))
    if off > math.pi / 6:
        off -= math.pi / 3
    return 0.5 / math.cos(off)


# --- proximity -----------------------------------------------------------

def haversine(p1: GeoPoint, p2: GeoPoint, radius: float = EARTH_RADIUS_KM) -> float:
    dlat = p2.lat - p1.lat
    dlng = p2.lng - p1.lng
    a = math.sin(dlat / 2) ** 2 + math.cos(p1.lat) * math.cos(p2.lat) * math.sin(dlng / 2) ** 2
    # symmetric in p1/p2: both squared sines are even and the cosine product commutes
    a = min(1.0, max(0.0, a))
    return radius * 2 * math.atan2(math.sqrt(a), math.sqrt(1 - a))


def h3_cell_id(cell: IjkCoord) -> str:
    c = cell_center(cell)
    return h3.latlng_to_cell(math.degrees(c.lat), math.degrees(c.lng), cell.res)


def cell_vertices(cell: IjkCoord) -> list[GeoPoint]:
    """Boundary vertices as the H3 library reports them (5 or 6 corners,
    plus extra distortion vertices where an edge crosses a face edge)."""
    return [GeoPoint.from_degrees(lat, lng) for lat, lng in h3.cell_to_boundary(h3_cell_id(cell))]


def min_distance_to_hex(p: GeoPoint, cell: IjkCoord, radius: float = EARTH_RADIUS_KM) -> float:
    """Smallest Haversine distance from p to any boundary vertex of cell."""
    return min(haversine(p, v, radius) for v in cell_vertices(cell))


# --- test corpus -----------------------------------------------------------

@dataclass(frozen=True)
class CorpusRecord:
    res: int
    dist_index: int
    point: GeoPoint
    expected: IjkCoord

    def line(self) -> str:
        e = self.expected
        return (f"{e.res} {e.face} {e.i} {e.j} {e.k} "
                f"{float_hex64(self.point.lat)} {float_hex64(self.point.lng)} {self.dist_index}")


def float_hex64(x: float) -> str:
    return format(struct.unpack("<Q", struct.pack("<d", x))[0], "016x")


def hex64_float(s: str) -> float:
    return struct.unpack("<d", struct.pack("<Q", int(s, 16)))[0]


def random_unit_point(rng: random.Random) -> GeoPoint:
    z = rng.uniform(-1.0, 1.0)
    return GeoPoint(math.asin(z), rng.uniform(-math.pi, math.pi))


def sample_near_cell(rng: random.Random, res: int, dist_index: int) -> tuple[GeoPoint, IjkCoord]:
    """One corpus point: a random cell centre, a random bearing, and a
    radius of (1 - 2^-i) times the centre-to-boundary distance."""
    home = reference_latlng_to_ijk(random_unit_point(rng), res)
    cx, cy = ijk_to_hex2d(home.i, home.j, home.k)
    bearing = rng.uniform(0.0, 2 * math.pi)
    rho = (1.0 - 2.0 ** -dist_index) * boundary_distance_2d(bearing)
    p = hex2d_to_geo(cx + rho * math.cos(bearing), cy + rho * math.sin(bearing), home.face, res)
    return p, home


def generate_corpus(seed: int, resolutions: Iterable[int] = range(16)) -> list[CorpusRecord]:
    """Deterministic corpus: 16 distances x 100 points per resolution.

    The PRNG is Python's `random.Random` (MT19937) seeded per
    (seed, res, distance) so slices can be regenerated independently.
    """
    out = []
    for res in resolutions:
        for i in range(NUM_DISTANCES):
            rng = random.Random(f"{seed}:{res}:{i}")
            for _ in range(POINTS_PER_DISTANCE):
                p, _home = sample_near_cell(rng, res, i)
                out.append(CorpusRecord(res, i, p, reference_latlng_to_ijk(p, res)))
    return out


def write_corpus(records: list[CorpusRecord], path: str, seed: int) -> None:
    with open(path, "w") as fh:
        fh.write(f"# {CORPUS_VERSION} seed={seed}\n")
        fh.write("# res face i j k lat_hexbits lng_hexbits dist_index\n")
        for rec in records:
            fh.write(rec.line() + "\n")


def read_corpus(path: str) -> Iterator[CorpusRecord]:
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith(f"# {CORPUS_VERSION}"):
            raise ValueError(f"{path}: corpus version mismatch: {header.strip()!r}")
        for lineno, line in enumerate(fh, start=2):
            if line.startswith("#") or not line.strip():
                continue
            parts = line.split()
            if len(parts) != 8:
                raise ValueError(f"{path}:{lineno}: expected 8 fields, got {len(parts)}")
            res, face, i, j, k = (int(v) for v in parts[:5])
            p = GeoPoint(hex64_float(parts[5]), hex64_float(parts[6]))
            yield CorpusRecord(res, int(parts[7]), p, IjkCoord(face, i, j, k, res))


# re-exported so every test-data generator is reachable from this module
from .vectors import generate_float_vectors  # noqa: E402,F401
