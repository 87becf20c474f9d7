"""Native IEEE 754 binary-format helpers: bit packing and the
(s, e, m, a) circuit-friendly encoding used by the float gadgets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FloatParams:
    E: int
    M: int
    name: str = ""

    @property
    def bias(self) -> int:
        return (1 << (self.E - 1)) - 1

    @property
    def width(self) -> int:
        return 1 + self.E + self.M

    @property
    def e_zero(self) -> int:
        """Exponent used for +-0."""
        return -(1 << (self.E - 1)) + 1 - self.M

    @property
    def e_min(self) -> int:
        """Exponent of the smallest normal number."""
        return -(1 << (self.E - 1)) + 2

    @property
    def e_abn(self) -> int:
        """Exponent shared by infinities and NaN."""
        return 1 << (self.E - 1)

    @property
    def k_max(self) -> int:
        return 64 if self.M > 23 else 32

    @property
    def dtype(self):
        return {16: np.float16, 32: np.float32, 64: np.float64}[self.width]

    @property
    def udtype(self):
        return {16: np.uint16, 32: np.uint32, 64: np.uint64}[self.width]

    @property
    def canonical_nan(self) -> int:
        return ((1 << self.E) - 1) << self.M | (1 << (self.M - 1))


FP16 = FloatParams(5, 10, "fp16")
FP32 = FloatParams(8, 23, "fp32")
FP64 = FloatParams(11, 52, "fp64")
PRECISIONS = {"fp16": FP16, "fp32": FP32, "fp64": FP64}


def split_bits(bits: int, fp: FloatParams) -> tuple[int, int, int]:
    return bits >> (fp.E + fp.M), (bits >> fp.M) & ((1 << fp.E) - 1), bits & ((1 << fp.M) - 1)


def pack_bits(s: int, e_hat: int, m_hat: int, fp: FloatParams) -> int:
    return (s << (fp.E + fp.M)) | (e_hat << fp.M) | m_hat


def is_nan_bits(bits: int, fp: FloatParams) -> bool:
    _, e, m = split_bits(bits, fp)
    return e == (1 << fp.E) - 1 and m != 0


def encode(bits: int, fp: FloatParams) -> tuple[int, int, int, int]:
    """IEEE bits -> (s, e, m, a) with the leading bit explicit and
    subnormals normalized."""
    s, eh, mh = split_bits(bits, fp)
    if eh == (1 << fp.E) - 1:
        if mh:
            return (0, fp.e_abn, 0, 1)
        return (s, fp.e_abn, 1 << fp.M, 1)
    if eh == 0:
        if mh == 0:
            return (s, fp.e_zero, 0, 0)
        d = fp.M + 1 - mh.bit_length()
        return (s, fp.e_min - d, mh << d, 0)
    return (s, eh - fp.bias, mh | (1 << fp.M), 0)


def decode(s: int, e: int, m: int, a: int, fp: FloatParams) -> int:
    """(s, e, m, a) -> IEEE bits; raises if the tuple is not well formed."""
    top = 1 << fp.M
    if a:
        if m == 0:
            if s != 0 or e != fp.e_abn:
                raise ValueError("non-canonical NaN")
            return fp.canonical_nan
        if m != top or e != fp.e_abn:
            raise ValueError("malformed infinity")
        return pack_bits(s, (1 << fp.E) - 1, 0, fp)
    if m == 0:
        if e != fp.e_zero:
            raise ValueError("zero with non-zero exponent")
        return pack_bits(s, 0, 0, fp)
    if not (top <= m < 2 * top):
        raise ValueError("mantissa not normalized")
    if e >= fp.e_min:
        if e > fp.bias:
            raise ValueError("finite exponent out of range")
        return pack_bits(s, e + fp.bias, m - top, fp)
    shift = fp.e_min - e
    if shift > fp.M or m & ((1 << shift) - 1):
        raise ValueError("subnormal loses bits")
    return pack_bits(s, 0, m >> shift, fp)


def to_bits(x, fp: FloatParams) -> int:
    return int(np.array(x, dtype=fp.dtype).view(fp.udtype))


def from_bits(bits: int, fp: FloatParams):
    return np.array(bits, dtype=fp.udtype).view(fp.dtype)[()]


def same_result(got: int, want: int, fp: FloatParams) -> bool:
    """Bit equality, with every NaN treated as one class."""
    if is_nan_bits(want, fp):
        return is_nan_bits(got, fp)
    return got == want
