"""Elias delta code for positive integers.

A value x >= 1 is sent as the gamma code of its bit length followed by the
bits of x below the leading one.  Codeword lengths:

    len(1) = 1
    len(x) = 1 + floor(log2 x) + 2*floor(log2(floor(log2 x) + 1))   for x >= 2
"""

from accode.bitio import BitReader, BitWriter
from accode.errors import DomainError, MalformedStream

MAX_VALUE = (1 << 63) - 1


def elias_length(x: int) -> int:
    """Codeword length in bits for x >= 1."""
    if x < 1:
        raise DomainError(f"Elias code is defined for x >= 1, got {x}")
    n = x.bit_length() - 1  # floor(log2 x)
    return 1 + n + 2 * ((n + 1).bit_length() - 1)


def elias_encode(x: int, writer: BitWriter) -> None:
    if x < 1:
        raise DomainError(f"Elias code is defined for x >= 1, got {x}")
    if x > MAX_VALUE:
        raise DomainError(f"value {x} above supported range 2**63 - 1")
    n = x.bit_length() - 1
    length = n + 1
    z = length.bit_length() - 1
    for _ in range(z):
        writer.write_bit(0)
    for i in range(z, -1, -1):  # gamma payload: `length`, MSB first
        writer.write_bit((length >> i) & 1)
    for i in range(n - 1, -1, -1):  # x without its leading one
        writer.write_bit((x >> i) & 1)


def elias_decode(reader: BitReader) -> int:
    z = 0
    while reader.read_bit() == 0:
        z += 1
        if z > 63:
            raise MalformedStream("gamma prefix longer than any supported value")
    length = 1
    for _ in range(z):
        length = (length << 1) | reader.read_bit()
    n = length - 1
    if n > 62:
        raise MalformedStream(f"decoded bit length {length} above supported range")
    x = 1
    for _ in range(n):
        x = (x << 1) | reader.read_bit()
    return x
