"""XOR index-coded multicast: encode per color class, decode per user."""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .coloring import Coloring, validate_coloring
from .errors import DecodeFailure
from .graph import ConflictGraph, PacketDemand
from .placement import CacheConfiguration

__all__ = ["Library", "CodedPacket", "Codeword", "encode", "decode", "measured_rate"]


@dataclass(frozen=True)
class Library:
    """Deterministic packet payloads: packets[f-1][b-1] is a bytes object."""

    packets: tuple[tuple[bytes, ...], ...]

    @property
    def m(self) -> int:
        return len(self.packets)

    @property
    def B(self) -> int:
        return len(self.packets[0])

    @property
    def packet_len(self) -> int:
        return len(self.packets[0][0])

    def packet(self, file: int, b: int) -> bytes:
        return self.packets[file - 1][b - 1]

    @classmethod
    def random(cls, m: int, B: int, packet_len: int = 64, seed: int = 0) -> "Library":
        rng = np.random.default_rng(seed)
        raw = rng.integers(0, 256, size=(m, B, packet_len), dtype=np.uint8)
        return cls(
            packets=tuple(
                tuple(bytes(raw[f, b]) for b in range(B)) for f in range(m)
            )
        )


@dataclass(frozen=True)
class CodedPacket:
    payload: bytes
    constituents: tuple[tuple[int, int], ...]  # distinct (file, packet) identities


@dataclass(frozen=True)
class Codeword:
    packets: tuple[CodedPacket, ...]

    def __len__(self) -> int:
        return len(self.packets)

    def to_bytes(self) -> bytes:
        """Framed little-endian layout, bit-exact for golden tests."""
        out = [struct.pack("<I", len(self.packets))]
        for cp in self.packets:
            out.append(struct.pack("<I", len(cp.constituents)))
            for f, b in cp.constituents:
                out.append(struct.pack("<II", f, b))
            out.append(struct.pack("<I", len(cp.payload)))
            out.append(cp.payload)
        return b"".join(out)

    @classmethod
    def from_bytes(cls, blob: bytes) -> "Codeword":
        off = 0

        def u32():
            nonlocal off
            (val,) = struct.unpack_from("<I", blob, off)
            off += 4
            return val

        packets = []
        for _ in range(u32()):
            constituents = tuple((u32(), u32()) for _ in range(u32()))
            plen = u32()
            payload = blob[off : off + plen]
            off += plen
            packets.append(CodedPacket(payload=payload, constituents=constituents))
        return cls(packets=tuple(packets))


def _xor(parts) -> bytes:
    acc = None
    for p in parts:
        if acc is None:
            acc = bytearray(p)
        else:
            for i, byte in enumerate(p):
                acc[i] ^= byte
    return bytes(acc)


def encode(coloring: Coloring, graph: ConflictGraph, library: Library) -> Codeword:
    """One coded packet per color class: XOR of the class's distinct packets."""
    validate_coloring(graph, coloring)
    packets = []
    for members in coloring.classes:
        # same-packet vertices (multiple requesters) contribute once
        idents = tuple(dict.fromkeys(graph.vertices[i].rho for i in members))
        payload = _xor(library.packet(f, b) for f, b in idents)
        packets.append(CodedPacket(payload=payload, constituents=idents))
    return Codeword(packets=tuple(packets))


def decode(
    user: int,
    codeword: Codeword,
    C: CacheConfiguration,
    library: Library,
    demand: PacketDemand,
) -> dict[tuple[int, int], bytes]:
    """Recover every packet the user demands.

    For each demanded packet, find a coded packet containing it whose other
    constituents are all cached by the user, and XOR them out. Guaranteed to
    succeed for any valid coloring of the conflict graph.
    """
    containing: dict[tuple[int, int], list[int]] = {}
    for k, cp in enumerate(codeword.packets):
        for ident in cp.constituents:
            containing.setdefault(ident, []).append(k)

    have = [set(C.cached(user, f)) for f in range(1, C.m + 1)]
    out: dict[tuple[int, int], bytes] = {}
    for want in demand.demanded(user):
        recovered = None
        for k in containing.get(want, ()):
            cp = codeword.packets[k]
            others = [iv for iv in cp.constituents if iv != want]
            if all(b in have[f - 1] for f, b in others):
                recovered = _xor(
                    [cp.payload] + [library.packet(f, b) for f, b in others]
                )
                break
        if recovered is None:
            raise DecodeFailure(user, want[0], want[1])
        out[want] = recovered
    return out


def measured_rate(coloring: Coloring, B: int) -> float:
    """Transmission length in file units: color count over packets per file."""
    if B < 1:
        raise ValueError(f"need B >= 1, got {B}")
    return coloring.num_colors / B
