"""Bounded signed-integer encoding into the scalar field."""
from __future__ import annotations

from .field import R

DEFAULT_M = 2**32


class EncodingError(ValueError):
    pass


def encode_int(v: int, M: int = DEFAULT_M) -> int:
    if abs(v) > M:
        raise EncodingError(f"|{v}| exceeds bound {M}")
    return v % R


def decode_int(x: int, M: int = DEFAULT_M) -> int:
    x %= R
    if x <= M:
        return x
    if x >= R - M:
        return x - R
    raise EncodingError("field element outside the signed image")


def decode_wide(x: int) -> int:
    """Centered lift; valid whenever the true integer has magnitude < R/2."""
    x %= R
    return x - R if x > R // 2 else x
