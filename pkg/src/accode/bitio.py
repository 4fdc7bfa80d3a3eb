"""Bit-granular writing and reading over byte buffers, MSB-first within each byte."""

from accode.errors import EndOfStream


class BitWriter:
    """Accumulates bits MSB-first; `finalize` zero-pads the last byte."""

    __slots__ = ("buffer", "_cur", "_fill", "bit_count")

    def __init__(self) -> None:
        self.buffer = bytearray()  # completed bytes only
        self._cur = 0
        self._fill = 0
        self.bit_count = 0

    def write_bit(self, bit: int) -> None:
        self._cur = (self._cur << 1) | (bit & 1)
        self._fill += 1
        self.bit_count += 1
        if self._fill == 8:
            self.buffer.append(self._cur)
            self._cur = 0
            self._fill = 0

    def write_bits(self, bits) -> None:
        for b in bits:
            self.write_bit(b)

    def finalize(self) -> bytes:
        """Zero-pad to a byte boundary and return the full output."""
        if self._fill:
            self.buffer.append(self._cur << (8 - self._fill))
            self._cur = 0
            self._fill = 0
        return bytes(self.buffer)


class BitReader:
    """Reads bits MSB-first from a byte sequence; reading past the end raises."""

    __slots__ = ("data", "position", "nbits")

    def __init__(self, data: bytes) -> None:
        self.data = bytes(data)
        self.position = 0
        self.nbits = 8 * len(self.data)

    def bit_at(self, pos: int) -> int:
        if pos >= self.nbits:
            raise EndOfStream(f"bit {pos} beyond end of {self.nbits}-bit source")
        return (self.data[pos >> 3] >> (7 - (pos & 7))) & 1

    def read_bit(self) -> int:
        bit = self.bit_at(self.position)
        self.position += 1
        return bit

    def seek(self, pos: int) -> None:
        if not 0 <= pos <= self.nbits:
            raise ValueError(f"seek target {pos} outside [0, {self.nbits}]")
        self.position = pos
