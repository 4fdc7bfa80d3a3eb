"""Lossless universal coding for unbounded positive-integer alphabets."""

from accode.codec import (
    EncodeTrace,
    StreamDecoder,
    StreamEncoder,
    decode_message,
    decode_with_info,
    encode_message,
    encode_with_trace,
)
from accode.errors import (
    DomainError,
    EndOfStream,
    MalformedStream,
    MembershipError,
    PrecisionOverflow,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "EncodeTrace",
    "EndOfStream",
    "MalformedStream",
    "MembershipError",
    "PrecisionOverflow",
    "StreamDecoder",
    "StreamEncoder",
    "decode_message",
    "decode_with_info",
    "encode_message",
    "encode_with_trace",
    "__version__",
]
