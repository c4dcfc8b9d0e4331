"""Minimal PNG reader/writer with deterministic 8/16-bit output.

The common imaging libraries available here cannot write 16-bit RGB PNGs,
which is the default output depth (8-bit quantization causes visible banding
in compensated images).  This codec covers exactly what the tool needs:

* write: 8- or 16-bit, grayscale or RGB, non-interlaced, filter type 0,
  fixed zlib level, so identical arrays produce identical bytes.
* read: non-interlaced PNGs with bit depth 8 or 16 and color types 0
  (gray), 2 (RGB), 4 (gray+alpha) or 6 (RGBA), with all five scanline
  filters.  Palette images and bit depths below 8 are rejected.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_ZLIB_LEVEL = 6
_CHANNELS = {0: 1, 2: 3, 4: 2, 6: 4}


class PngError(IOError):
    """Malformed or unsupported PNG data."""


def _chunk(tag: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + tag
        + payload
        + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
    )


def encode_png(arr: np.ndarray) -> bytes:
    """Encode a uint8/uint16 array of shape (H, W) or (H, W, 3) as PNG bytes."""
    arr = np.asarray(arr)
    if arr.dtype == np.uint8:
        depth = 8
    elif arr.dtype == np.uint16:
        depth = 16
    else:
        raise PngError(f"unsupported dtype {arr.dtype}; expected uint8 or uint16")
    if arr.ndim == 2:
        color_type = 0
    elif arr.ndim == 3 and arr.shape[2] == 3:
        color_type = 2
    else:
        raise PngError(f"unsupported shape {arr.shape}; expected (H, W) or (H, W, 3)")
    h, w = arr.shape[:2]

    raw = arr.astype(">u2").tobytes() if depth == 16 else arr.tobytes()
    row_bytes = w * _CHANNELS[color_type] * (depth // 8)
    rows = np.frombuffer(raw, dtype=np.uint8).reshape(h, row_bytes)
    filtered = np.zeros((h, row_bytes + 1), dtype=np.uint8)
    filtered[:, 1:] = rows  # filter type 0 on every scanline

    ihdr = struct.pack(">IIBBBBB", w, h, depth, color_type, 0, 0, 0)
    idat = zlib.compress(filtered.tobytes(), _ZLIB_LEVEL)
    return _SIGNATURE + _chunk(b"IHDR", ihdr) + _chunk(b"IDAT", idat) + _chunk(b"IEND", b"")


def _paeth(a: int, b: int, c: int) -> int:
    p = a + b - c
    pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
    if pa <= pb and pa <= pc:
        return a
    if pb <= pc:
        return b
    return c


def _unfilter(data: bytes, h: int, row_bytes: int, bpp: int) -> np.ndarray:
    stride = row_bytes + 1
    if len(data) < h * stride:
        raise PngError("truncated image data")
    out = np.zeros((h, row_bytes), dtype=np.uint8)
    prev = np.zeros(row_bytes, dtype=np.uint8)
    for y in range(h):
        ftype = data[y * stride]
        raw = np.frombuffer(data, dtype=np.uint8, count=row_bytes, offset=y * stride + 1)
        if ftype == 0:
            recon = raw.copy()
        elif ftype == 1:  # Sub: prefix sums per byte position within a pixel
            recon = raw.astype(np.int64).copy()
            for j in range(bpp):
                recon[j::bpp] = np.cumsum(recon[j::bpp])
            recon = (recon & 0xFF).astype(np.uint8)
        elif ftype == 2:  # Up
            recon = raw + prev
        elif ftype == 3:  # Average
            recon = np.zeros(row_bytes, dtype=np.uint8)
            for j in range(row_bytes):
                left = int(recon[j - bpp]) if j >= bpp else 0
                recon[j] = (int(raw[j]) + (left + int(prev[j])) // 2) & 0xFF
        elif ftype == 4:  # Paeth
            recon = np.zeros(row_bytes, dtype=np.uint8)
            for j in range(row_bytes):
                left = int(recon[j - bpp]) if j >= bpp else 0
                up_left = int(prev[j - bpp]) if j >= bpp else 0
                recon[j] = (int(raw[j]) + _paeth(left, int(prev[j]), up_left)) & 0xFF
        else:
            raise PngError(f"unknown scanline filter type {ftype}")
        out[y] = recon
        prev = out[y]
    return out


def decode_png(data: bytes) -> np.ndarray:
    """Decode PNG bytes to a uint8/uint16 array of shape (H, W[, channels])."""
    if data[:8] != _SIGNATURE:
        raise PngError("not a PNG file (bad signature)")
    pos = 8
    ihdr = None
    idat = []
    while pos + 8 <= len(data):
        (length,) = struct.unpack(">I", data[pos : pos + 4])
        tag = data[pos + 4 : pos + 8]
        payload = data[pos + 8 : pos + 8 + length]
        if len(payload) != length:
            raise PngError(f"truncated {tag!r} chunk")
        (crc,) = struct.unpack(">I", data[pos + 8 + length : pos + 12 + length])
        if crc != zlib.crc32(tag + payload) & 0xFFFFFFFF:
            raise PngError(f"CRC mismatch in {tag!r} chunk")
        if tag == b"IHDR":
            ihdr = struct.unpack(">IIBBBBB", payload)
        elif tag == b"IDAT":
            idat.append(payload)
        elif tag == b"IEND":
            break
        pos += 12 + length
    if ihdr is None:
        raise PngError("missing IHDR chunk")
    if not idat:
        raise PngError("missing IDAT chunks")

    w, h, depth, color_type, compression, filter_method, interlace = ihdr
    if compression != 0 or filter_method != 0:
        raise PngError("unsupported compression or filter method")
    if interlace != 0:
        raise PngError("interlaced PNGs are not supported")
    if color_type not in _CHANNELS:
        raise PngError(f"unsupported color type {color_type} (palette images not supported)")
    if depth not in (8, 16):
        raise PngError(f"unsupported bit depth {depth}; only 8 and 16 are supported")
    if w < 1 or h < 1:
        raise PngError("empty image")

    channels = _CHANNELS[color_type]
    bpp = channels * (depth // 8)
    row_bytes = w * bpp
    try:
        raw = zlib.decompress(b"".join(idat))
    except zlib.error as exc:
        raise PngError(f"corrupt image data: {exc}") from exc
    rows = _unfilter(raw, h, row_bytes, bpp)
    if depth == 16:
        arr = rows.reshape(h, -1).view(">u2").astype(np.uint16)
        arr = arr.reshape(h, w, channels)
    else:
        arr = rows.reshape(h, w, channels)
    if channels == 1:
        return arr[..., 0]
    return arr


def quantize(img: np.ndarray, depth: int = 16) -> np.ndarray:
    """Map [0, 1] floats to uint8/uint16 grid values."""
    if depth == 8:
        scale, dtype = 255.0, np.uint8
    elif depth == 16:
        scale, dtype = 65535.0, np.uint16
    else:
        raise ValueError(f"depth must be 8 or 16, got {depth}")
    return np.round(np.clip(img, 0.0, 1.0) * scale).astype(dtype)


def dequantize(arr: np.ndarray) -> np.ndarray:
    """Integer samples back to [0, 1] floats."""
    if arr.dtype == np.uint8:
        return arr.astype(np.float64) / 255.0
    if arr.dtype == np.uint16:
        return arr.astype(np.float64) / 65535.0
    raise ValueError(f"unsupported dtype {arr.dtype}")


def image_to_png_bytes(img: np.ndarray, depth: int = 16) -> bytes:
    """Encode a float (H, W, 3) image in [0, 1] as PNG bytes."""
    return encode_png(quantize(img, depth))


def png_bytes_to_image(data: bytes) -> np.ndarray:
    """Decode PNG bytes to a float (H, W, 3) image in [0, 1].

    Grayscale is expanded to RGB; an alpha channel, if present, is dropped.
    """
    arr = decode_png(data)
    img = dequantize(arr)
    if img.ndim == 2:
        img = np.repeat(img[..., None], 3, axis=2)
    elif img.shape[2] == 2:  # gray + alpha
        img = np.repeat(img[..., :1], 3, axis=2)
    elif img.shape[2] == 4:  # RGBA
        img = img[..., :3]
    return img


def load_image(path: str | Path) -> np.ndarray:
    """Read a PNG file as a float (H, W, 3) image in [0, 1]."""
    return png_bytes_to_image(Path(path).read_bytes())


def save_image(path: str | Path, img: np.ndarray, depth: int = 16):
    """Write a float (H, W, 3) image in [0, 1] as an 8- or 16-bit PNG."""
    Path(path).write_bytes(image_to_png_bytes(img, depth))
