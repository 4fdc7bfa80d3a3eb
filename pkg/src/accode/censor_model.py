"""Adaptive probability model over {seen symbols} + escape.

After i symbols with running maximum m, the coding distribution puts mass
(2*count(j) + 1) / (2i + m + 1) on each symbol j in 1..m and
1 / (2i + m + 1) on the escape slot.  Counts are incremented for every input
symbol, including the ones that were coded as an escape, so a fresh maximum
already carries one occurrence when it first becomes encodable.

Slot layout is symbols 1..m in increasing order, escape last.  Counts are
kept sparsely; absent symbols below the maximum still own a width-1 slot.
"""

from bisect import insort

from accode.errors import DomainError

ESCAPE = 0  # censored-symbol marker; the real alphabet is 1, 2, 3, ...


class CensorModel:
    __slots__ = ("i", "m", "counts", "_syms")

    def __init__(self) -> None:
        self.i = 0
        self.m = 0
        self.counts: dict[int, int] = {}
        self._syms: list[int] = []  # sorted distinct symbols seen

    @property
    def total(self) -> int:
        return 2 * self.i + self.m + 1

    def censor(self, x: int) -> int:
        """x itself if encodable under the current maximum, else ESCAPE."""
        if x < 1:
            raise DomainError(f"symbols must be >= 1, got {x}")
        return x if x <= self.m else ESCAPE

    def conditional(self, symbol: int) -> tuple[int, int, int]:
        """(cum, freq, total) of a censored symbol (ESCAPE or 1..m)."""
        total = 2 * self.i + self.m + 1
        if symbol == ESCAPE:
            return total - 1, 1, total
        if not 1 <= symbol <= self.m:
            raise DomainError(f"symbol {symbol} outside coded range 1..{self.m}")
        counts = self.counts
        acc = 0
        for s in self._syms:
            if s >= symbol:
                break
            acc += counts[s]
        return (symbol - 1) + 2 * acc, 2 * counts.get(symbol, 0) + 1, total

    def locate(self, target: int) -> tuple[int, int, int]:
        """(symbol, cum, freq) of the slot whose slice contains `target`."""
        total = 2 * self.i + self.m + 1
        if target >= total - 1:
            return ESCAPE, total - 1, 1
        counts = self.counts
        acc = 0  # 2 * (counts of symbols passed so far)
        for s in self._syms:
            base = (s - 1) + acc
            if target < base:
                break
            freq = 2 * counts[s] + 1
            if target < base + freq:
                return s, base, freq
            acc += freq - 1
        # a never-seen symbol below the maximum: width-1 slot
        sym = target - acc + 1
        return sym, target, 1

    def update(self, x: int) -> None:
        if x < 1:
            raise DomainError(f"symbols must be >= 1, got {x}")
        counts = self.counts
        if x in counts:
            counts[x] += 1
        else:
            counts[x] = 1
            insort(self._syms, x)
        if x > self.m:
            self.m = x
        self.i += 1
