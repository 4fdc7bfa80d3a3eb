"""Self-terminating codec for sequences of positive integers.

Wire layout, bit-granular and headerless:

  [escape coded in C1, flush] [delta code of (new_max - old_max + 1)] ...
  ... [C1 for in-range symbols] ... [terminator escape, flush] [delta code of 1]

The first symbol of any message is an escape against an empty model and costs
zero arithmetic bits, so a stream opens directly with the delta code of
(first_max + 1).  Termination is an escape whose delta value is 1 (no
maximum can repeat), which makes the code a prefix code over messages of
every length: trailing padding or garbage is never interpreted.

Decoding cost is proportional to the number of decoded symbols, and a valid
stream may legitimately expand exponentially (constant runs compress to
O(log n) bits), so corrupt input can produce large outputs before the stream
is rejected; `max_symbols` puts a hard stop under the caller's control.
"""

from dataclasses import dataclass, field

from accode.arith import RangeDecoder, RangeEncoder
from accode.bitio import BitReader, BitWriter
from accode.censor_model import ESCAPE, CensorModel
from accode.elias import elias_decode, elias_encode
from accode.errors import DomainError, EndOfStream, MalformedStream


@dataclass
class EncodeTrace:
    """Bit accounting and model trace of one encoded message."""

    censored: list[int] = field(default_factory=list)  # ESCAPE marker is 0
    maxima_increments: list[int] = field(default_factory=list)
    coding_steps: list[tuple[int, int]] = field(default_factory=list)  # (freq, total)
    c2_spans: list[tuple[int, int]] = field(default_factory=list)  # (start_bit, nbits)
    c1_bits: int = 0
    c2_bits: int = 0
    escapes: int = 0


class StreamEncoder:
    """Online encoder; push symbols one at a time, then `finish`."""

    def __init__(self) -> None:
        self._writer = BitWriter()
        self._coder = RangeEncoder()
        self._model = CensorModel()
        self._taken = 0
        self._finished = False
        self.trace = EncodeTrace()

    def _code_censored(self, censored: int) -> None:
        cum, freq, total = self._model.conditional(censored)
        self._coder.encode_symbol(self._writer, cum, freq, total)
        self.trace.censored.append(censored)
        self.trace.coding_steps.append((freq, total))

    def _insert_delta(self, value: int) -> None:
        self._coder.flush_decodable(self._writer)
        start = self._writer.bit_count
        elias_encode(value, self._writer)
        self.trace.c2_spans.append((start, self._writer.bit_count - start))
        self.trace.maxima_increments.append(value)

    def push(self, x: int) -> None:
        if self._finished:
            raise RuntimeError("encoder already finished")
        if x < 1:
            raise DomainError(f"symbols must be >= 1, got {x}")
        model = self._model
        trace = self.trace
        if x <= model.m:
            cum, freq, total = model.conditional(x)
            self._coder.encode_symbol(self._writer, cum, freq, total)
            trace.censored.append(x)
            trace.coding_steps.append((freq, total))
        else:
            total = 2 * model.i + model.m + 1
            self._coder.encode_symbol(self._writer, total - 1, 1, total)
            trace.censored.append(ESCAPE)
            trace.coding_steps.append((1, total))
            self._insert_delta(x - model.m + 1)
            trace.escapes += 1
        model.update(x)

    def finish(self) -> None:
        if self._finished:
            raise RuntimeError("encoder already finished")
        self._code_censored(ESCAPE)
        self._insert_delta(1)
        self._writer.finalize()
        self.trace.c2_bits = sum(n for _, n in self.trace.c2_spans)
        self.trace.c1_bits = self._writer.bit_count - self.trace.c2_bits
        self._finished = True

    def take(self) -> bytes:
        """Bytes completed since the previous take."""
        buf = self._writer.buffer
        out = bytes(buf[self._taken:])
        self._taken = len(buf)
        return out


def encode_with_trace(symbols) -> tuple[bytes, EncodeTrace]:
    enc = StreamEncoder()
    for x in symbols:
        enc.push(x)
    enc.finish()
    return enc.take(), enc.trace


def encode_message(symbols) -> bytes:
    """Encode a (possibly empty) sequence of integers >= 1."""
    return encode_with_trace(symbols)[0]


@dataclass
class _DecodeState:
    symbols: list[int]
    stable: int  # prefix guaranteed final given the bytes seen so far
    finished: bool
    consumed_bits: int


def _decode(
    data: bytes,
    partial: bool,
    max_symbols: int | None,
    speculative_cap: int | None = None,
) -> _DecodeState:
    reader = BitReader(data)
    physical = reader.nbits
    model = CensorModel()
    decoder = RangeDecoder(reader)
    symbols: list[int] = []
    horizons: list[int] = []  # bit position pinning each symbol (partial mode)
    stable_base = 0
    seg_first = 0
    speculative = 0  # symbols decoded with virtual lookahead in the window

    def blocked() -> _DecodeState:
        stable = stable_base
        while stable < len(symbols) and horizons[stable] <= physical:
            stable += 1
        return _DecodeState(symbols, stable, False, reader.position)

    decode_symbol = decoder.decode_symbol
    locate = model.locate
    update = model.update
    append = symbols.append
    while True:
        try:
            slot = decode_symbol(2 * model.i + model.m + 1, locate)
        except MalformedStream:
            # inconclusive if the lookahead window ran past the bytes we have
            if partial and decoder.lookahead_pos > physical:
                return blocked()
            raise
        if decoder.lookahead_pos > physical:
            # No escape of this segment can end within the bytes we hold once
            # shifts + 2 passes the physical end, so nothing decoded from here
            # on can ever be confirmed: stop instead of chasing phantoms.
            if decoder.seg_start + decoder.shifts + 2 > physical:
                if partial:
                    return blocked()
                raise MalformedStream("stream truncated inside an arithmetic segment")
            speculative += 1
            if speculative_cap is not None and speculative > speculative_cap:
                return blocked()
        if slot != ESCAPE:
            append(slot)
            update(slot)
            if partial:
                horizons.append(decoder.seg_start + decoder.shifts + 64)
            if max_symbols is not None and len(symbols) > max_symbols:
                raise MalformedStream(f"decoded more than {max_symbols} symbols")
            continue
        flush_end = decoder.seg_start + decoder.consumed_after_flush()
        if flush_end > physical:
            if partial:
                return blocked()
            raise MalformedStream("stream truncated inside an arithmetic segment")
        reader.seek(flush_end)
        try:
            value = elias_decode(reader)
        except EndOfStream:
            if partial:
                return blocked()
            raise MalformedStream("stream truncated inside a maximum-increment code") from None
        if partial:
            for t in range(seg_first, len(symbols)):
                horizons[t] = flush_end
        if value == 1:
            return _DecodeState(symbols, len(symbols), True, reader.position)
        x = model.m + value - 1
        symbols.append(x)
        model.update(x)
        if partial:
            horizons.append(reader.position)
        if max_symbols is not None and len(symbols) > max_symbols:
            raise MalformedStream(f"decoded more than {max_symbols} symbols")
        stable_base = len(symbols)
        seg_first = len(symbols)
        speculative = 0
        decoder.reset_segment()


def decode_with_info(data: bytes, max_symbols: int | None = None) -> tuple[list[int], int]:
    """Decode one message; returns (symbols, bits consumed by the codeword)."""
    try:
        state = _decode(data, partial=False, max_symbols=max_symbols)
    except MalformedStream:
        raise
    except EndOfStream as exc:  # pragma: no cover - defensive
        raise MalformedStream(str(exc)) from None
    return state.symbols, state.consumed_bits


def decode_message(data: bytes, max_symbols: int | None = None) -> list[int]:
    """Decode one message; trailing bytes after the codeword are ignored."""
    return decode_with_info(data, max_symbols=max_symbols)[0]


class StreamDecoder:
    """Incremental decoder: feed bytes, collect symbols as they become final.

    Each feed re-examines the buffer and returns the newly finalized symbols;
    a symbol is released once the bits received so far pin it under any
    continuation of the stream.  Feeds keep their work bounded by deferring
    speculation past the buffered bytes, so extremely expansive streams (a
    constant run compresses to O(log n) bits) may hold symbols back until
    `close`, which runs one unrestrained pass and returns whatever remains.
    `close` raises if the buffered bytes never form a complete stream.
    """

    _FEED_SPECULATION = 65536

    def __init__(self, max_symbols: int | None = None) -> None:
        self._buf = bytearray()
        self._yielded = 0
        self._max_symbols = max_symbols
        self.finished = False
        self.consumed_bits: int | None = None

    def feed(self, data: bytes) -> list[int]:
        if self.finished:
            return []
        self._buf.extend(data)
        state = _decode(
            bytes(self._buf),
            partial=True,
            max_symbols=self._max_symbols,
            speculative_cap=self._FEED_SPECULATION,
        )
        fresh = state.symbols[self._yielded:state.stable]
        self._yielded = state.stable
        if state.finished:
            self.finished = True
            self.consumed_bits = state.consumed_bits
        return fresh

    def close(self) -> list[int]:
        """Final pass over everything fed; returns the symbols not yet yielded."""
        if self.finished:
            return []
        state = _decode(bytes(self._buf), partial=False, max_symbols=self._max_symbols)
        self.finished = True
        self.consumed_bits = state.consumed_bits
        fresh = state.symbols[self._yielded:]
        self._yielded = len(state.symbols)
        return fresh
