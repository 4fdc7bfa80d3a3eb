"""Finite-precision integer range coder driven by exact rational conditionals.

Symbols are described by integer triples (cum, freq, total): the current
interval is narrowed to its [cum, cum+freq)/total slice.  64-bit state with
pending-bit carry handling; totals up to 2**62 are accepted, so the model
never has to round its rationals.

The extra primitive here is `flush_decodable`: it emits the fewest bits that
let a decoder holding only the bits written so far resolve every symbol
encoded so far, then resets the interval.  Both sides can account for it
independently: a segment that narrowed the interval costs exactly
(renormalization shifts + 2) bits, an untouched segment costs zero.  That
fixed rule is what lets the containing codec splice side-channel codewords
into the stream at escape points without any lookahead.
"""

from accode.bitio import BitReader, BitWriter
from accode.errors import MalformedStream, PrecisionOverflow

WIDTH = 64
_TOP = 1 << WIDTH
_MASK = _TOP - 1
_HALF = _TOP >> 1
_QUARTER = _TOP >> 2
_THREE_QUARTERS = _HALF + _QUARTER

MAX_TOTAL = _QUARTER  # keeps every freq >= 1 slice non-empty after renormalization


class RangeEncoder:
    """One encoder per stream; all bits go through the writer passed per call."""

    __slots__ = ("low", "high", "_pending", "_shifts", "bits_emitted")

    def __init__(self) -> None:
        self.low = 0
        self.high = _MASK
        self._pending = 0
        self._shifts = 0  # renormalization shifts since the last flush
        self.bits_emitted = 0

    @property
    def untouched(self) -> bool:
        """True iff nothing was narrowed since the last flush (or creation)."""
        return self._shifts == 0 and self.low == 0 and self.high == _MASK

    def encode_symbol(self, writer: BitWriter, cum: int, freq: int, total: int) -> None:
        if total < 1 or total > MAX_TOTAL:
            raise PrecisionOverflow(f"total {total} outside [1, 2**{WIDTH - 2}]")
        if freq < 1 or cum < 0 or cum + freq > total:
            raise ValueError(f"invalid slice (cum={cum}, freq={freq}, total={total})")
        half, quarter, threeq = _HALF, _QUARTER, _THREE_QUARTERS
        low = self.low
        span = self.high - low + 1
        high = low + span * (cum + freq) // total - 1
        low = low + span * cum // total
        pending = self._pending
        shifts = self._shifts
        emitted = self.bits_emitted
        write_bit = writer.write_bit
        while True:
            if high < half:
                write_bit(0)
                emitted += 1 + pending
                while pending:
                    write_bit(1)
                    pending -= 1
            elif low >= half:
                write_bit(1)
                emitted += 1 + pending
                while pending:
                    write_bit(0)
                    pending -= 1
                low -= half
                high -= half
            elif low >= quarter and high < threeq:
                pending += 1
                low -= quarter
                high -= quarter
            else:
                break
            low <<= 1
            high = (high << 1) | 1
            shifts += 1
        self.low = low
        self.high = high
        self._pending = pending
        self._shifts = shifts
        self.bits_emitted = emitted

    def flush_decodable(self, writer: BitWriter) -> None:
        """Make everything encoded so far decodable from the emitted prefix.

        Emits nothing on an untouched interval, else two bits beyond the
        pending backlog; any continuation of the emitted prefix then decodes
        the segment identically.  The interval is reset afterwards.
        """
        if not self.untouched:
            bit = 0 if self.low < _QUARTER else 1
            inv = bit ^ 1
            writer.write_bit(bit)
            for _ in range(self._pending + 1):
                writer.write_bit(inv)
            self.bits_emitted += self._pending + 2
        self.low = 0
        self.high = _MASK
        self._pending = 0
        self._shifts = 0

    def finalize(self, writer: BitWriter) -> None:
        """Terminate the stream; equivalent to a last decodable flush."""
        self.flush_decodable(writer)


class RangeDecoder:
    """Mirror of `RangeEncoder` over a shared `BitReader`.

    The decoder keeps a 64-bit lookahead window.  Window reads never move the
    reader: the owner repositions it after each segment, at
    seg_start + (shifts + 2)  (or seg_start for an untouched segment), which
    is exactly where the encoder's flush ended.  Lookahead past the physical
    end yields 1-bits; a flushed prefix decodes the same under any suffix, and
    on corrupt input the drift towards the top of the interval surfaces as an
    out-of-range target instead of a silent loop.
    """

    __slots__ = ("_reader", "_data", "_nbits", "_code", "_pos", "low", "high",
                 "shifts", "seg_start")

    def __init__(self, reader: BitReader) -> None:
        self._reader = reader
        self._data = reader.data
        self._nbits = reader.nbits
        self._code = 0
        self._pos = 0
        self.low = 0
        self.high = _MASK
        self.shifts = 0
        self.seg_start = 0
        self.reset_segment()

    def reset_segment(self) -> None:
        """Start a fresh interval at the reader's current position."""
        self.seg_start = self._reader.position
        pos = self.seg_start
        self.low = 0
        self.high = _MASK
        self.shifts = 0
        data, nbits = self._data, self._nbits
        code = 0
        for _ in range(WIDTH):
            bit = (data[pos >> 3] >> (7 - (pos & 7))) & 1 if pos < nbits else 1
            code = (code << 1) | bit
            pos += 1
        self._code = code
        self._pos = pos

    @property
    def untouched(self) -> bool:
        return self.shifts == 0 and self.low == 0 and self.high == _MASK

    @property
    def lookahead_pos(self) -> int:
        """First bit position not yet pulled into the window."""
        return self._pos

    def consumed_after_flush(self) -> int:
        """Bits this segment occupies in the stream once the encoder flushed."""
        return 0 if self.untouched else self.shifts + 2

    def decode_symbol(self, total: int, locate):
        """Resolve one symbol; `locate(target) -> (slot, cum, freq)`."""
        if total < 1 or total > MAX_TOTAL:
            raise PrecisionOverflow(f"total {total} outside [1, 2**{WIDTH - 2}]")
        half, quarter, threeq = _HALF, _QUARTER, _THREE_QUARTERS
        low = self.low
        code = self._code
        span = self.high - low + 1
        target = ((code - low + 1) * total - 1) // span
        if not 0 <= target < total:
            raise MalformedStream("arithmetic decode target out of range")
        slot, cum, freq = locate(target)
        high = low + span * (cum + freq) // total - 1
        low = low + span * cum // total
        shifts = self.shifts
        pos = self._pos
        data, nbits = self._data, self._nbits
        while True:
            if high < half:
                pass
            elif low >= half:
                low -= half
                high -= half
                code -= half
            elif low >= quarter and high < threeq:
                low -= quarter
                high -= quarter
                code -= quarter
            else:
                break
            low <<= 1
            high = (high << 1) | 1
            bit = (data[pos >> 3] >> (7 - (pos & 7))) & 1 if pos < nbits else 1
            code = (code << 1) | bit
            pos += 1
            shifts += 1
        self.low = low
        self.high = high
        self._code = code
        self._pos = pos
        self.shifts = shifts
        return slot
