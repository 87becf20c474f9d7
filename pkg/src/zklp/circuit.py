"""Trig-free location circuit: private (lat, lng) plus half-angle hints in,
public H3 cell coordinate (face, i, j, k) out.

The circuit replays the H3 geo -> face IJK path with float gadgets only:

* Cartesian coordinates come from hinted sines and cosines, checked against
  half-angle hints through the trigonometric identities.
* The closest icosahedron face is an in-circuit argmin over 20 squared
  distances, with ties going to the lowest index.
* The gnomonic radius is tan(acos(1 - d^2/2)) = sqrt((4 - d^2) d^2) / (2 - d^2).
* The azimuth only enters through its cosine and sine, so (x, y) on the face
  plane come from precomputed per-face rotation constants.
* Resolution scaling is square-and-multiply over the bits of the public
  resolution, so the constraint count does not depend on it.

`mirror_latlng_to_ijk` is a plain numpy replay of the same operation
sequence and serves as the bit-exact oracle for the circuit.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import float_gadgets as fg
from . import int_gadgets as ig
from .field_cs import COUNT, WITNESS, LC, ConstraintSystem, SatisfactionReport, signed
from .float_gadgets import FloatVar
from .geo import M_AP7_ROT_RADS, M_RSIN60, M_SQRT7, INV_RES0_U_GNOMONIC, face_data
from .ieee import FP32, FP64, FloatParams, encode, to_bits

NUM_FACES = 20
RES_BITS = 4


@dataclass(frozen=True)
class ZklpConstants:
    """Per-precision constants, rounded once to the target format."""

    fp: FloatParams
    face_xyz: tuple[tuple[float, float, float], ...]
    # cos/sin of the face-center latitude and longitude
    face_trig: tuple[tuple[float, float, float, float], ...]
    # cos/sin of the face i-axis azimuth, without and with the odd-res rotation
    axis_even: tuple[tuple[float, float], ...]
    axis_odd: tuple[tuple[float, float], ...]
    # square-and-multiply factors: bit 0 carries the res-0 gnomonic scale
    scale_bit0: tuple[float, float]
    scale_sq: tuple[float, float, float]
    tau: float
    Q: int

    def cast(self, x: float):
        return self.fp.dtype(x)


@lru_cache(maxsize=None)
def zklp_constants(fp: FloatParams) -> ZklpConstants:
    if fp not in (FP32, FP64):
        raise ValueError("the location circuit supports fp32 and fp64")
    dt = fp.dtype
    fd = face_data()
    face_xyz = tuple(tuple(float(dt(c)) for c in v) for v in fd.center_point)
    face_trig = tuple(
        tuple(float(dt(f(a))) for f, a in ((math.cos, lat), (math.sin, lat), (math.cos, lng), (math.sin, lng)))
        for lat, lng in fd.center_geo
    )
    axis_even = tuple((float(dt(math.cos(z))), float(dt(math.sin(z)))) for z in fd.axes_az)
    axis_odd = tuple((float(dt(math.cos(z - M_AP7_ROT_RADS))), float(dt(math.sin(z - M_AP7_ROT_RADS))))
                     for z in fd.axes_az)
    inv = dt(INV_RES0_U_GNOMONIC)
    s7 = dt(M_SQRT7)
    c1 = s7 * s7
    c2 = c1 * c1
    c3 = c2 * c2
    return ZklpConstants(
        fp=fp,
        face_xyz=face_xyz,
        face_trig=face_trig,
        axis_even=axis_even,
        axis_odd=axis_odd,
        scale_bit0=(float(inv), float(inv * s7)),
        scale_sq=(float(c1), float(c2), float(c3)),
        tau=2.0 ** -44 if fp is FP64 else 2.0 ** -17,
        Q=min(fp.M, 30),
    )


# --- witness preparation --------------------------------------------------------------

def prepare_angles(lat_deg, lng_deg) -> tuple[np.ndarray, np.ndarray]:
    """Degrees -> radians (double), rejecting out-of-range input.

    Longitude -180 is moved to the largest double below pi, since the
    half-angle tangent is undefined at -pi.
    """
    lat = np.atleast_1d(np.asarray(lat_deg, dtype=np.float64))
    lng = np.atleast_1d(np.asarray(lng_deg, dtype=np.float64))
    if lat.shape != lng.shape:
        raise ValueError("latitude and longitude batches differ in length")
    if not (np.isfinite(lat).all() and np.isfinite(lng).all()):
        raise ValueError("coordinates must be finite")
    if (np.abs(lat) > 90).any() or (np.abs(lng) > 180).any():
        raise ValueError("latitude must be in [-90, 90] and longitude in [-180, 180]")
    phi = np.radians(lat)
    lam = np.radians(lng)
    return phi, normalize_lng(lam)


def normalize_lng(lam: np.ndarray) -> np.ndarray:
    lam = np.asarray(lam, dtype=np.float64)
    return np.where(lam <= -math.pi, np.nextafter(math.pi, 0.0), lam)


def half_angle_hints(ang: np.ndarray, fp: FloatParams) -> tuple[np.ndarray, ...]:
    """(alpha, beta, gamma, delta, kappa) for each angle x:
    tan(x/2), sin(x), sin(x/2), cos(x/2), cos(x).

    beta = 2 gamma delta and kappa = delta^2 - gamma^2 hold exactly over the
    reals; taking sin(x) and cos(x) straight from libm makes the Cartesian
    coordinates bit-identical to the reference, so face ties break the same
    way.
    """
    dt = fp.dtype
    xs = [float(v) for v in np.atleast_1d(np.asarray(ang, dtype=np.float64))]
    cols = [[math.tan(x / 2) for x in xs], [math.sin(x) for x in xs],
            [math.sin(x / 2) for x in xs], [math.cos(x / 2) for x in xs], [math.cos(x) for x in xs]]
    return tuple(np.array(c, dtype=np.float64).astype(dt) for c in cols)


# --- native mirror ------------------------------------------------------------------

def mirror_latlng_to_ijk(phi, lam, res, fp: FloatParams = FP64, trace: bool = False):
    """Replay the circuit's float operation sequence with numpy.

    phi, lam are radians; res is an int or an array. Returns (face, i, j, k)
    integer arrays, plus a dict of intermediates when `trace` is set.
    """
    C = zklp_constants(fp)
    dt = fp.dtype
    phi = np.atleast_1d(np.asarray(phi, dtype=np.float64)).astype(dt)
    lam = np.atleast_1d(np.asarray(normalize_lng(lam), dtype=np.float64)).astype(dt)
    n = len(phi)
    res = np.broadcast_to(np.asarray(res, dtype=np.int64), (n,))
    one, two, four, half = dt(1), dt(2), dt(4), dt(0.5)
    with np.errstate(all="ignore"):
        _, bp, _, _, kp = half_angle_hints(phi, fp)
        _, bl, _, _, kl = half_angle_hints(lam, fp)
        z = bp
        x = kl * kp
        y = bl * kp
        best = None
        face = np.zeros(n, dtype=np.int64)
        for f, (fx, fy, fz) in enumerate(C.face_xyz):
            dx, dy, dz = x - dt(fx), y - dt(fy), z - dt(fz)
            d2 = (dx * dx + dy * dy) + dz * dz
            if best is None:
                best = d2
            else:
                lt = d2 < best
                best = np.where(lt, d2, best)
                face = np.where(lt, f, face)
        d2 = best
        t = np.sqrt((four - d2) * d2) / (two - d2)
        b0 = (res & 1).astype(bool)
        s = np.where(b0, dt(C.scale_bit0[1]), dt(C.scale_bit0[0]))
        for k in range(1, RES_BITS):
            s = s * np.where((res >> k) & 1, dt(C.scale_sq[k - 1]), one)
        r = t * s
        trig = np.array(C.face_trig, dtype=dt)[face]
        cp1, sp1, cl1, sl1 = trig.T
        p = x * cl1 + y * sl1
        a = y * cl1 - x * sl1
        b = cp1 * z - sp1 * p
        h = np.sqrt(a * a + b * b)
        k_r = r / np.where(h == 0, one, h)
        ax = np.where(b0[:, None], np.array(C.axis_odd, dtype=dt)[face], np.array(C.axis_even, dtype=dt)[face])
        cz, sz = ax.T
        x2d = k_r * (cz * b + sz * a)
        y2d = k_r * (sz * b - cz * a)
        i, j, kk = _mirror_hex2d_to_ijk(x2d, y2d, dt)
    if trace:
        return (face, i, j, kk), dict(x=x, y=y, z=z, d2=d2, r=r, x2d=x2d, y2d=y2d)
    return face, i, j, kk


def _mirror_hex2d_to_ijk(x2d, y2d, dt):
    one, two, half = dt(1), dt(2), dt(0.5)
    a1 = np.abs(x2d)
    a2 = np.abs(y2d)
    x2 = a2 * dt(M_RSIN60)
    x1 = a1 + x2 * half
    m1 = np.floor(x1)
    m2 = np.floor(x2)
    r1 = x1 - m1
    r2 = x2 - m2
    m1 = m1.astype(np.int64)
    m2 = m2.astype(np.int64)
    lt_half = r1 < half
    lt_third = r1 < dt(1.0 / 3.0)
    lt_2third = r1 < dt(2.0 / 3.0)
    A = r2 < (one + r1) * half
    B = r2 < one - r1
    Cc = r2 < two * r1
    D = two * r1 - one < r2
    Eh = r2 < r1 * half
    dj = np.where(lt_half, np.where(lt_third, ~A, ~B), np.where(lt_2third, ~B, ~Eh))
    di = np.where(lt_half, np.where(lt_third, False, ~B & Cc), np.where(lt_2third, ~(D & B), True))
    i = m1 + di
    j = m2 + dj
    i = np.where(x2d < 0, j - i, i)
    neg_y = y2d < 0
    i = np.where(neg_y, i - j, i)
    j = np.where(neg_y, -j, j)
    mn = np.minimum(np.minimum(i, j), 0)
    return i - mn, j - mn, -mn


# --- circuit ------------------------------------------------------------------------

def _enc(x: float, fp: FloatParams) -> tuple[int, int, int, int]:
    return encode(to_bits(x, fp), fp)


def float_mux(cs: ConstraintSystem, sel: list[LC], values: list[float], fp: FloatParams) -> FloatVar:
    """Linear selection of constant floats by a one-hot vector (no constraints)."""
    comps = [cs.const(0) for _ in range(4)]
    for w, v in zip(sel, values):
        for k, c in enumerate(_enc(v, fp)):
            if c:
                comps[k] = comps[k] + w * c
    return FloatVar(*comps, fp)


def _bit_mux(cs: ConstraintSystem, b: LC, if0: float, if1: float, fp: FloatParams) -> FloatVar:
    return float_mux(cs, [cs.const(1) - b, b], [if0, if1], fp)


@dataclass
class ZklpWires:
    res: LC
    face: LC
    i: LC
    j: LC
    k: LC
    x2d: FloatVar
    y2d: FloatVar


def latlng_to_xyz(cs: ConstraintSystem, hints: dict[str, list[FloatVar]], C: ZklpConstants):
    """Check the half-angle hints and derive unit-sphere Cartesian coordinates."""
    fp = C.fp
    one = fg.float_const(cs, 1.0, fp)
    two = fg.float_const(cs, 2.0, fp)
    tau = fg.float_const(cs, C.tau, fp)
    for name in ("phi", "lam"):
        alpha, beta, gamma, delta, kappa = hints[name]
        g2 = fg.mul(cs, gamma, gamma)
        d2 = fg.mul(cs, delta, delta)
        fg.assert_eq_fuzzy(cs, fg.add(cs, g2, d2), one, tau)
        fg.assert_eq_fuzzy(cs, fg.mul(cs, delta, alpha), gamma, tau)
        fg.assert_eq_fuzzy(cs, fg.mul(cs, fg.mul(cs, two, gamma), delta), beta, tau)
        fg.assert_eq_fuzzy(cs, fg.sub(cs, d2, g2), kappa, tau)
    _, bp, _, _, kp = hints["phi"]
    _, bl, _, _, kl = hints["lam"]
    return fg.mul(cs, kl, kp), fg.mul(cs, bl, kp), bp


def closest_face(cs: ConstraintSystem, xyz, C: ZklpConstants) -> tuple[LC, list[LC], FloatVar]:
    """Argmin over the 20 face-center squared distances; lowest index wins ties."""
    fp = C.fp
    x, y, z = xyz
    best = None
    idx = cs.const(0)
    for f, (fx, fy, fz) in enumerate(C.face_xyz):
        dx = fg.sub(cs, x, fg.float_const(cs, fx, fp))
        dy = fg.sub(cs, y, fg.float_const(cs, fy, fp))
        dz = fg.sub(cs, z, fg.float_const(cs, fz, fp))
        d2 = fg.add(cs, fg.add(cs, fg.mul(cs, dx, dx), fg.mul(cs, dy, dy)), fg.mul(cs, dz, dz))
        if best is None:
            best = d2
            continue
        lt = fg.less_than(cs, d2, best)
        best = fg.float_select(cs, lt, d2, best)
        idx = ig.select(cs, lt, f, idx)
    onehot = [ig.is_eq(cs, idx, f) for f in range(NUM_FACES)]
    return idx, onehot, best


def radial_distance(cs: ConstraintSystem, d2: FloatVar, res_bits: list[LC], C: ZklpConstants) -> FloatVar:
    """Gnomonic radius in hex units at the resolution given by res_bits."""
    fp = C.fp
    two = fg.float_const(cs, 2.0, fp)
    four = fg.float_const(cs, 4.0, fp)
    t = fg.div(cs, fg.sqrt(cs, fg.mul(cs, fg.sub(cs, four, d2), d2)), fg.sub(cs, two, d2))
    s = _bit_mux(cs, res_bits[0], *C.scale_bit0, fp)
    for k in range(1, RES_BITS):
        s = fg.mul(cs, s, _bit_mux(cs, res_bits[k], 1.0, C.scale_sq[k - 1], fp))
    return fg.mul(cs, t, s)


def planar_xy(cs: ConstraintSystem, r: FloatVar, xyz, onehot: list[LC], odd: LC,
              C: ZklpConstants) -> tuple[FloatVar, FloatVar]:
    """(x, y) on the face plane from the cosine and sine of the azimuth."""
    fp = C.fp
    x, y, z = xyz
    cp1, sp1, cl1, sl1 = (float_mux(cs, onehot, [t[q] for t in C.face_trig], fp) for q in range(4))
    p = fg.add(cs, fg.mul(cs, x, cl1), fg.mul(cs, y, sl1))
    a = fg.sub(cs, fg.mul(cs, y, cl1), fg.mul(cs, x, sl1))
    b = fg.sub(cs, fg.mul(cs, cp1, z), fg.mul(cs, sp1, p))
    h = fg.sqrt(cs, fg.add(cs, fg.mul(cs, a, a), fg.mul(cs, b, b)))
    # at the face center a = b = 0; divide by 1 so both outputs come out 0
    h_is_0 = ig.is_zero(cs, h.m)
    h = fg.float_select(cs, h_is_0, fg.float_const(cs, 1.0, fp), h)
    kr = fg.div(cs, r, h)
    ce = [cs.mul(w, cs.const(1) - odd) for w in onehot]
    co = [cs.mul(w, odd) for w in onehot]
    cz = float_mux(cs, ce + co, [v[0] for v in C.axis_even] + [v[0] for v in C.axis_odd], fp)
    sz = float_mux(cs, ce + co, [v[1] for v in C.axis_even] + [v[1] for v in C.axis_odd], fp)
    x2d = fg.mul(cs, kr, fg.add(cs, fg.mul(cs, cz, b), fg.mul(cs, sz, a)))
    y2d = fg.mul(cs, kr, fg.sub(cs, fg.mul(cs, sz, b), fg.mul(cs, cz, a)))
    return x2d, y2d


def hex2d_to_ijk(cs: ConstraintSystem, x2d: FloatVar, y2d: FloatVar, C: ZklpConstants) -> tuple[LC, LC, LC]:
    """Quantize planar coordinates to a normalized (i, j, k), following the
    H3 reference branch structure."""
    fp = C.fp
    c = lambda v: fg.float_const(cs, v, fp)  # noqa: E731
    one, two, half = c(1.0), c(2.0), c(0.5)
    a1 = fg.fabs(x2d)
    a2 = fg.fabs(y2d)
    x2 = fg.mul(cs, a2, c(M_RSIN60))
    x1 = fg.add(cs, a1, fg.mul(cs, x2, half))
    m1, r1 = fg.floor_frac(cs, x1, C.Q)
    m2, r2 = fg.floor_frac(cs, x2, C.Q)
    lt = lambda u, v: fg.less_than(cs, u, v)  # noqa: E731
    lt_half = lt(r1, half)
    lt_third = lt(r1, c(1.0 / 3.0))
    lt_2third = lt(r1, c(2.0 / 3.0))
    two_r1 = fg.mul(cs, two, r1)
    nA = ig.not_(cs, lt(r2, fg.mul(cs, fg.add(cs, one, r1), half)))
    B = lt(r2, fg.sub(cs, one, r1))
    nB = ig.not_(cs, B)
    Cc = lt(r2, two_r1)
    D = lt(fg.sub(cs, two_r1, one), r2)
    nE = ig.not_(cs, lt(r2, fg.mul(cs, r1, half)))
    dj = ig.select(cs, lt_half, ig.select(cs, lt_third, nA, nB), ig.select(cs, lt_2third, nB, nE))
    di_lo = ig.select(cs, lt_third, 0, ig.and_(cs, nB, Cc))
    di_hi = ig.select(cs, lt_2third, ig.not_(cs, ig.and_(cs, D, B)), 1)
    di = ig.select(cs, lt_half, di_lo, di_hi)
    i = m1 + di
    j = m2 + dj
    # fold across the axes
    neg_x = ig.and_(cs, x2d.s, ig.not_(cs, ig.is_zero(cs, x2d.m)))
    neg_y = ig.and_(cs, y2d.s, ig.not_(cs, ig.is_zero(cs, y2d.m)))
    i = ig.select(cs, neg_x, j - i, i)
    i = ig.select(cs, neg_y, i - j, i)
    j = ig.select(cs, neg_y, -j, j)
    return normalize_ijk(cs, i, j, C.Q + 4)


def normalize_ijk(cs: ConstraintSystem, i: LC, j: LC, L: int, k: LC | None = None) -> tuple[LC, LC, LC]:
    """Shift (i, j, k) by its minimum so that all parts are >= 0 and one is 0.

    k defaults to 0, which is what the quantization step produces.
    """
    if k is not None:
        i, j = i - k, j - k
    mn = ig.min_(cs, ig.min_(cs, i, j, L), cs.const(0), L)
    return i - mn, j - mn, cs.const(0) - mn


def _domain_checks(cs: ConstraintSystem, phi: FloatVar, lam: FloatVar, fp: FloatParams) -> None:
    c = lambda v: fg.float_const(cs, v, fp)  # noqa: E731
    for v, lim in ((phi, math.pi / 2), (lam, math.pi)):
        cs.assert_equal(fg.less_equal(cs, v, c(lim)), 1)
        cs.assert_equal(fg.less_equal(cs, c(-lim), v), 1)


@dataclass
class ZklpResult:
    face: np.ndarray
    i: np.ndarray
    j: np.ndarray
    k: np.ndarray
    res: np.ndarray
    report: SatisfactionReport
    cs: ConstraintSystem
    wires: ZklpWires

    def records(self) -> list[str]:
        return [public_record(int(r), int(f), int(a), int(b), int(c))
                for r, f, a, b, c in zip(self.res, self.face, self.i, self.j, self.k)]


def public_record(res: int, face: int, i: int, j: int, k: int) -> str:
    return f"res={res} face={face} i={i} j={j} k={k}"


class ZklpCircuit:
    """Builder for the location circuit at one precision.

    `run` generates witnesses for a batch of points (radians) and checks
    them; `constraint_counts` builds the structure only.
    """

    def __init__(self, fp: FloatParams = FP64, chunk_bits: int = 8):
        self.fp = fp
        self.C = zklp_constants(fp)
        self.chunk_bits = chunk_bits

    def build(self, cs: ConstraintSystem, phi_bits, lam_bits, res_vals,
              claimed: dict[str, np.ndarray] | None = None) -> ZklpWires:
        fp, C = self.fp, self.C
        wm = cs.witness_mode
        res = cs.public(res_vals if wm else None)
        bits = cs.hint("bits", [res], RES_BITS, L=RES_BITS)
        for b in bits:
            cs.assert_bool(b)
        cs.assert_equal(res, sum((b * (1 << q) for q, b in enumerate(bits)), cs.const(0)))
        phi = fg.float_input(cs, phi_bits, fp)
        lam = fg.float_input(cs, lam_bits, fp)
        _domain_checks(cs, phi, lam, fp)
        hints = {}
        for name, ang in (("phi", phi_bits), ("lam", lam_bits)):
            if wm:
                vals = half_angle_hints(np.array(ang, dtype=fp.udtype).view(fp.dtype), fp)
                hints[name] = [fg.float_input(cs, v.view(fp.udtype).tolist(), fp) for v in vals]
            else:
                hints[name] = [fg.float_input(cs, None, fp) for _ in range(5)]
        xyz = latlng_to_xyz(cs, hints, C)
        idx, onehot, d2 = closest_face(cs, xyz, C)
        r = radial_distance(cs, d2, bits, C)
        x2d, y2d = planar_xy(cs, r, xyz, onehot, bits[0], C)
        i, j, k = hex2d_to_ijk(cs, x2d, y2d, C)
        outs = {}
        for name, lc in (("face", idx), ("i", i), ("j", j), ("k", k)):
            if wm:
                val = np.array([signed(int(v)) for v in cs.values(lc)], dtype=object)
                if claimed and name in claimed:
                    val = np.asarray(claimed[name], dtype=object)
            else:
                val = None
            pub = cs.public(val)
            cs.assert_equal(pub, lc)
            outs[name] = pub
        return ZklpWires(res, outs["face"], outs["i"], outs["j"], outs["k"], x2d, y2d)

    def run(self, phi, lam, res, claimed: dict[str, np.ndarray] | None = None,
            tamper: dict | None = None) -> ZklpResult:
        fp = self.fp
        dt = fp.dtype
        phi = np.atleast_1d(np.asarray(phi, dtype=np.float64))
        lam = normalize_lng(np.atleast_1d(np.asarray(lam, dtype=np.float64)))
        n = len(phi)
        res = np.broadcast_to(np.asarray(res, dtype=np.int64), (n,)).copy()
        if ((res < 0) | (res > 15)).any():
            raise ValueError("resolution must be in [0, 15]")
        phi_bits = phi.astype(dt).view(fp.udtype).tolist()
        lam_bits = lam.astype(dt).view(fp.udtype).tolist()
        cs = ConstraintSystem(WITNESS, batch=n, chunk_bits=self.chunk_bits, k_max=fp.k_max,
                              tamper=tamper)
        w = self.build(cs, phi_bits, lam_bits, res.tolist(), claimed)
        rep = cs.finalize()
        get = lambda lc: np.array([signed(int(v)) for v in cs.values(lc)], dtype=np.int64)  # noqa: E731
        return ZklpResult(get(w.face), get(w.i), get(w.j), get(w.k), res, rep, cs, w)

    def run_degrees(self, lat_deg, lng_deg, res, **kw) -> ZklpResult:
        phi, lam = prepare_angles(lat_deg, lng_deg)
        return self.run(phi, lam, res, **kw)

    def constraint_counts(self) -> SatisfactionReport:
        cs = ConstraintSystem(COUNT, batch=1, chunk_bits=self.chunk_bits, k_max=self.fp.k_max)
        self.build(cs, None, None, None)
        return cs.finalize()


def build_zklp_circuit(fp: FloatParams = FP64, chunk_bits: int = 8) -> ZklpCircuit:
    return ZklpCircuit(fp, chunk_bits)


@dataclass
class SuiteReport:
    """Per-resolution agreement with the reference for one precision."""

    precision: str
    total: dict[int, int]
    agree: dict[int, int]
    satisfied: dict[int, int]
    mirror_agree: dict[int, int]
    seconds: float
    mismatches: list[tuple]

    def rate(self, res: int) -> float:
        return self.agree[res] / self.total[res] if self.total.get(res) else float("nan")

    def all_agree(self, resolutions=None) -> bool:
        rs = resolutions if resolutions is not None else self.total.keys()
        return all(self.agree[r] == self.total[r] for r in rs if self.total.get(r))

    def all_satisfied(self) -> bool:
        return all(self.satisfied[r] == self.total[r] for r in self.total)

    def table(self) -> str:
        lines = [f"# zklp-suite v1 precision={self.precision}",
                 "res  points  agree  rate     satisfied  mirror"]
        for r in sorted(self.total):
            lines.append(f"{r:>3}  {self.total[r]:>6}  {self.agree[r]:>5}  {100 * self.rate(r):6.2f}%  "
                         f"{self.satisfied[r]:>9}  {self.mirror_agree[r]:>6}")
        n = sum(self.total.values())
        lines.append(f"all  {n:>6}  {sum(self.agree.values()):>5}  "
                     f"{100 * sum(self.agree.values()) / max(n, 1):6.2f}%  "
                     f"{sum(self.satisfied.values()):>9}  {sum(self.mirror_agree.values()):>6}")
        return "\n".join(lines) + "\n"


def evaluate_corpus(records, fp: FloatParams = FP64, batch: int = 256, progress=None) -> SuiteReport:
    """Run the circuit over corpus records and compare with their expected
    cells and with the native mirror."""
    circ = build_zklp_circuit(fp)
    total: dict[int, int] = {}
    agree: dict[int, int] = {}
    sat: dict[int, int] = {}
    mir: dict[int, int] = {}
    bad: list[tuple] = []
    t0 = time.perf_counter()
    for start in range(0, len(records), batch):
        part = records[start:start + batch]
        phi = np.array([r.point.lat for r in part])
        lam = np.array([r.point.lng for r in part])
        res = np.array([r.res for r in part])
        out = circ.run(phi, lam, res)
        mf, mi, mj, mk = mirror_latlng_to_ijk(phi, lam, res, fp)
        for n, r in enumerate(part):
            got = (int(out.face[n]), int(out.i[n]), int(out.j[n]), int(out.k[n]))
            want = (r.expected.face, r.expected.i, r.expected.j, r.expected.k)
            total[r.res] = total.get(r.res, 0) + 1
            agree[r.res] = agree.get(r.res, 0) + (got == want)
            sat[r.res] = sat.get(r.res, 0) + bool(out.report.satisfied_each[n])
            mir[r.res] = mir.get(r.res, 0) + (got == (int(mf[n]), int(mi[n]), int(mj[n]), int(mk[n])))
            if got != want and len(bad) < 50:
                bad.append((r.line(), got))
        if progress:
            progress(min(start + batch, len(records)), len(records))
    return SuiteReport(fp.name, total, agree, sat, mir, time.perf_counter() - t0, bad)
