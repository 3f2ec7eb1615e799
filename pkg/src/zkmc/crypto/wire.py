"""Canonical byte encodings.

Every artifact starts with a magic tag and a version byte. Integers are
little-endian; group elements use the library's compressed form; field
elements are 32 bytes little-endian; sequences carry a u32 length prefix.
"""
from __future__ import annotations

import struct

from . import group as grp
from .field import R

VERSION = 1


class WireError(ValueError):
    pass


class Writer:
    def __init__(self, magic: bytes):
        self.buf = bytearray(magic)
        self.buf.append(VERSION)

    def u8(self, x: int):
        self.buf += struct.pack("<B", x)
        return self

    def u32(self, x: int):
        self.buf += struct.pack("<I", x)
        return self

    def bytes_(self, b: bytes):
        self.u32(len(b))
        self.buf += b
        return self

    def scalar(self, x: int):
        self.buf += (x % R).to_bytes(32, "little")
        return self

    def scalars(self, xs):
        self.u32(len(xs))
        for x in xs:
            self.scalar(x)
        return self

    def bigint(self, x: int):
        """Signed arbitrary-precision integer."""
        return self.bytes_(str(x).encode())

    def g1(self, p):
        self.buf += p.serialize()
        return self

    def g1s(self, ps):
        self.u32(len(ps))
        for p in ps:
            self.g1(p)
        return self

    def g2(self, p):
        self.buf += p.serialize()
        return self

    def gt(self, p):
        self.buf += p.serialize()
        return self

    def raw(self, b: bytes):
        self.buf += b
        return self

    def done(self) -> bytes:
        return bytes(self.buf)


class Reader:
    def __init__(self, data: bytes, magic: bytes):
        if not data.startswith(magic):
            raise WireError(f"bad magic, expected {magic!r}")
        self.d = memoryview(data)
        self.i = len(magic)
        v = self.u8()
        if v != VERSION:
            raise WireError(f"unsupported version {v}")

    def _take(self, n: int) -> bytes:
        if self.i + n > len(self.d):
            raise WireError("truncated input")
        b = bytes(self.d[self.i : self.i + n])
        self.i += n
        return b

    def u8(self) -> int:
        return self._take(1)[0]

    def u32(self) -> int:
        return struct.unpack("<I", self._take(4))[0]

    def bytes_(self) -> bytes:
        return self._take(self.u32())

    def scalar(self) -> int:
        x = int.from_bytes(self._take(32), "little")
        if x >= R:
            raise WireError("non-canonical scalar")
        return x

    def scalars(self) -> list[int]:
        return [self.scalar() for _ in range(self.u32())]

    def bigint(self) -> int:
        try:
            return int(self.bytes_().decode())
        except ValueError as e:
            raise WireError("bad integer") from e

    def _group(self, n, fn):
        b = self._take(n)
        try:
            return fn(b)
        except ValueError as e:
            raise WireError("invalid group element") from e

    def g1(self):
        return self._group(48, grp.de_g1)

    def g1s(self):
        return [self.g1() for _ in range(self.u32())]

    def g2(self):
        return self._group(96, grp.de_g2)

    def gt(self):
        return self._group(576, grp.de_gt)

    def end(self) -> None:
        if self.i != len(self.d):
            raise WireError("trailing bytes")
