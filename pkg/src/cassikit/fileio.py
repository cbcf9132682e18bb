"""Minimal binary containers for cubes, apertures, and measurements.

All integers are 32-bit unsigned little-endian; all floats are 32-bit
little-endian IEEE-754.

  cube file:        "HSC1" | M N L      | M*N*L f32, band-major
  aperture file:    "APT1" | M N        | M*N bytes in {0,1}, row-major
  measurement file: "MSR1" | m K order  | m f32 in solver layout
                    (order tag: 0 = standard, 1 = higher-order)

Reads reject bad magic, truncation, and invariant violations with the
specific exception classes from errors.py; write followed by read is a
byte-for-byte identity.
"""

from __future__ import annotations

import struct

import numpy as np

from .cube import CodedAperture, HyperCube, MeasurementVector, make_cube
from .errors import BadMagicError, InvalidFieldError, TruncatedFileError
from .operator import Order

CUBE_MAGIC = b"HSC1"
APERTURE_MAGIC = b"APT1"
MEASUREMENT_MAGIC = b"MSR1"

_ORDER_TAG = {Order.STANDARD: 0, Order.HIGHER_ORDER: 1}
_TAG_ORDER = {v: k for k, v in _ORDER_TAG.items()}

_MAX_DIM = 2**31  # dimension overflow guard


def _read_header(raw: bytes, magic: bytes, n_fields: int, path) -> tuple:
    if raw[:4] != magic:
        raise BadMagicError(f"{path}: expected magic {magic!r}, found {raw[:4]!r}")
    need = 4 + 4 * n_fields
    if len(raw) < need:
        raise TruncatedFileError(f"{path}: header needs {need} bytes, file has {len(raw)}")
    fields = struct.unpack(f"<{n_fields}I", raw[4:need])
    for v in fields:
        if v >= _MAX_DIM:
            raise InvalidFieldError(f"{path}: header field {v} overflows")
    return fields


def _check_payload(raw: bytes, header_len: int, expected: int, path):
    actual = len(raw) - header_len
    if actual != expected:
        kind = TruncatedFileError if actual < expected else InvalidFieldError
        raise kind(f"{path}: expected {expected} payload bytes, found {actual}")


def write_cube(path, cube: HyperCube) -> None:
    with open(path, "wb") as fh:
        fh.write(CUBE_MAGIC)
        fh.write(struct.pack("<3I", cube.m_rows, cube.n_cols, cube.bands))
        fh.write(cube.flat().astype("<f4").tobytes())


def read_cube(path) -> HyperCube:
    with open(path, "rb") as fh:
        raw = fh.read()
    m, n, L = _read_header(raw, CUBE_MAGIC, 3, path)
    if min(m, n, L) == 0:
        raise InvalidFieldError(f"{path}: zero dimension in header")
    _check_payload(raw, 16, 4 * m * n * L, path)
    values = np.frombuffer(raw, dtype="<f4", offset=16).astype(np.float64)
    return make_cube(m, n, L, values)


def write_aperture(path, aperture: CodedAperture) -> None:
    with open(path, "wb") as fh:
        fh.write(APERTURE_MAGIC)
        fh.write(struct.pack("<2I", aperture.m_rows, aperture.n_cols))
        fh.write(aperture.mask.tobytes())  # row-major


def read_aperture(path) -> CodedAperture:
    with open(path, "rb") as fh:
        raw = fh.read()
    m, n = _read_header(raw, APERTURE_MAGIC, 2, path)
    if m == 0 or n == 0:
        raise InvalidFieldError(f"{path}: zero dimension in header")
    _check_payload(raw, 12, m * n, path)
    mask = np.frombuffer(raw, dtype=np.uint8, offset=12)
    if not np.isin(mask, (0, 1)).all():
        raise InvalidFieldError(f"{path}: aperture payload byte outside {{0, 1}}")
    return CodedAperture(mask.reshape(m, n).copy())


def write_measurements(path, g: MeasurementVector, n_shots: int, order: Order) -> None:
    with open(path, "wb") as fh:
        fh.write(MEASUREMENT_MAGIC)
        fh.write(struct.pack("<3I", len(g), n_shots, _ORDER_TAG[order]))
        fh.write(g.values.astype("<f4").tobytes())


def read_measurements(path) -> tuple[MeasurementVector, int, Order]:
    """Returns (measurements, shot count, model order)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    m, k, tag = _read_header(raw, MEASUREMENT_MAGIC, 3, path)
    if m == 0 or k == 0:
        raise InvalidFieldError(f"{path}: zero measurement count or shot count")
    if tag not in _TAG_ORDER:
        raise InvalidFieldError(f"{path}: unknown order tag {tag}")
    _check_payload(raw, 16, 4 * m, path)
    values = np.frombuffer(raw, dtype="<f4", offset=16).astype(np.float64)
    return MeasurementVector(values), k, _TAG_ORDER[tag]
