"""Fiat-Shamir transcript over SHA-256 with length-prefixed, labeled absorption."""
from __future__ import annotations

import hashlib

from .field import R
from .group import CURVE_ID


class Transcript:
    def __init__(self, protocol: bytes | str):
        if isinstance(protocol, str):
            protocol = protocol.encode()
        self._h = hashlib.sha256()
        self.append(b"curve", CURVE_ID)
        self.append(b"protocol", protocol)

    def _absorb(self, b: bytes) -> None:
        self._h.update(len(b).to_bytes(8, "little"))
        self._h.update(b)

    def append(self, label: bytes | str, data: bytes) -> "Transcript":
        if isinstance(label, str):
            label = label.encode()
        self._absorb(label)
        self._absorb(data)
        return self

    def append_point(self, label, p) -> "Transcript":
        return self.append(label, p.serialize())

    def append_points(self, label, ps) -> "Transcript":
        self.append(label, len(ps).to_bytes(8, "little"))
        for p in ps:
            self._absorb(p.serialize())
        return self

    def append_scalar(self, label, x: int) -> "Transcript":
        return self.append(label, (x % R).to_bytes(32, "little"))

    def append_int(self, label, x: int) -> "Transcript":
        return self.append(label, str(x).encode())

    def challenge(self, label: bytes | str) -> int:
        """A field element; 512 bits of hash output are reduced to keep bias negligible."""
        if isinstance(label, str):
            label = label.encode()
        self._absorb(b"challenge")
        self._absorb(label)
        base = self._h.copy().digest()
        wide = hashlib.sha256(base + b"\x00").digest() + hashlib.sha256(base + b"\x01").digest()
        c = int.from_bytes(wide, "little") % R
        self._absorb(c.to_bytes(32, "little"))
        return c

    def clone(self) -> "Transcript":
        t = Transcript.__new__(Transcript)
        t._h = self._h.copy()
        return t
