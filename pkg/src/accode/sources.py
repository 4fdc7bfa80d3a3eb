"""Envelope classes and concrete iid sources over the alphabet 1, 2, 3, ...

An envelope (C, alpha) dominates every admissible marginal pointwise with
f(k) = min(1, C * exp(-alpha * k)); admissibility requires C > exp(2*alpha),
which makes f(1) = f(2) = 1 and the total envelope mass at least 2.

Sources are immutable; samplers draw through a caller-supplied numpy
Generator using inverse-CDF transforms so that a seed pins the sequence.
"""

import math
from dataclasses import dataclass

import numpy as np

from accode.errors import DomainError

_MASK64 = (1 << 64) - 1
_MIX = 0x9E3779B97F4A7C15


def mix_seed(base: int, index: int) -> int:
    """Derive a per-trial seed; splitmix64 finalizer over a golden-ratio step."""
    z = (base + index * _MIX) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed & _MASK64)


@dataclass(frozen=True)
class EnvelopeSpec:
    """Parameters (C, alpha) of an exponentially decreasing envelope."""

    C: float
    alpha: float

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.C > 0):
            raise DomainError(f"envelope needs C > 0 and alpha > 0, got ({self.C}, {self.alpha})")
        if self.C <= math.exp(2 * self.alpha):
            raise DomainError(
                f"envelope needs C > exp(2*alpha); C={self.C} <= {math.exp(2 * self.alpha):.6g}"
            )

    @property
    def clamp_end(self) -> int:
        """Largest k with C * exp(-alpha k) >= 1; at least 2 for admissible specs."""
        return math.floor(math.log(self.C) / self.alpha)

    def f(self, k: int) -> float:
        if k < 1:
            raise DomainError(f"envelope is defined for k >= 1, got {k}")
        return min(1.0, self.C * math.exp(-self.alpha * k))

    def tail(self, start: int) -> float:
        """Exact sum of f(k) for k >= start (clamped ones + geometric tail)."""
        start = max(start, 1)
        geo_from = max(start, self.clamp_end + 1)
        ones = geo_from - start
        return ones + self.C * math.exp(-self.alpha * geo_from) / (1.0 - math.exp(-self.alpha))

    @property
    def total_mass(self) -> float:
        return self.tail(1)


class SourceDist:
    """Base class for iid sources; subclasses fill in the pmf geometry."""

    label = "source"

    def pmf(self, k: int) -> float:
        raise NotImplementedError

    def tail(self, start: int) -> float:
        """P(X >= start)."""
        raise NotImplementedError

    def entropy_bits(self) -> float:
        raise NotImplementedError

    def sample_iid(self, n: int, rng: np.random.Generator) -> list[int]:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator) -> int:
        return self.sample_iid(1, rng)[0]

    def fits_envelope(self, env: EnvelopeSpec) -> bool:
        raise NotImplementedError


class Geometric(SourceDist):
    """P(k) = (1-q) q^(k-1) on k >= 1."""

    def __init__(self, q: float) -> None:
        if not 0.0 < q < 1.0:
            raise DomainError(f"geometric ratio must be in (0, 1), got {q}")
        self.q = q
        self.label = f"geom:q={q!r}"

    def pmf(self, k: int) -> float:
        return (1.0 - self.q) * self.q ** (k - 1) if k >= 1 else 0.0

    def tail(self, start: int) -> float:
        return self.q ** (start - 1) if start >= 1 else 1.0

    def entropy_bits(self) -> float:
        q = self.q
        h2 = -q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q)
        return h2 / (1.0 - q)

    def mean(self) -> float:
        return 1.0 / (1.0 - self.q)

    def sample_iid(self, n: int, rng: np.random.Generator) -> list[int]:
        u = rng.random(n)
        draws = np.maximum(1, np.ceil(np.log1p(-u) / math.log(self.q)))
        return [int(v) for v in draws]

    def fits_envelope(self, env: EnvelopeSpec) -> bool:
        # (1-q) q^(k-1) <= C e^(-alpha k) for all k iff the ratio never grows
        # (q <= e^-alpha) and the k=1 term fits.
        if self.q > math.exp(-env.alpha):
            return False
        return (1.0 - self.q) * math.exp(env.alpha) <= env.C


class PointMass(SourceDist):
    def __init__(self, k: int) -> None:
        if k < 1:
            raise DomainError(f"point mass must sit on k >= 1, got {k}")
        self.k = k
        self.label = f"point:k={k}"

    def pmf(self, k: int) -> float:
        return 1.0 if k == self.k else 0.0

    def tail(self, start: int) -> float:
        return 1.0 if start <= self.k else 0.0

    def entropy_bits(self) -> float:
        return 0.0

    def sample_iid(self, n: int, rng: np.random.Generator) -> list[int]:
        return [self.k] * n

    def fits_envelope(self, env: EnvelopeSpec) -> bool:
        return env.f(self.k) >= 1.0


class Explicit(SourceDist):
    """Probability vector over 1..len(probs); must sum to 1 within 1e-12."""

    def __init__(self, probs) -> None:
        arr = np.asarray(list(probs), dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("explicit source needs a non-empty probability vector")
        if np.any(arr < 0.0):
            raise DomainError("explicit probabilities must be non-negative")
        if abs(float(arr.sum()) - 1.0) > 1e-12:
            raise DomainError(f"explicit probabilities sum to {arr.sum()!r}, not 1")
        self.probs = arr
        self._cum = np.cumsum(arr)
        self._cum[-1] = 1.0
        self.label = f"explicit:{arr.size}"

    def pmf(self, k: int) -> float:
        return float(self.probs[k - 1]) if 1 <= k <= self.probs.size else 0.0

    def tail(self, start: int) -> float:
        if start <= 1:
            return 1.0
        if start > self.probs.size:
            return 0.0
        return float(1.0 - self._cum[start - 2])

    def entropy_bits(self) -> float:
        p = self.probs[self.probs > 0.0]
        return float(-(p * np.log2(p)).sum())

    def sample_iid(self, n: int, rng: np.random.Generator) -> list[int]:
        u = rng.random(n)
        idx = np.searchsorted(self._cum, u, side="right")
        return [int(v) + 1 for v in idx]

    def fits_envelope(self, env: EnvelopeSpec) -> bool:
        return all(
            float(p) <= env.f(k)
            for k, p in enumerate(self.probs, start=1)
            if p > 0.0
        )


def is_member(dist: SourceDist, env: EnvelopeSpec) -> bool:
    """True iff the source's marginal sits under the envelope pointwise."""
    return dist.fits_envelope(env)


def hellinger(p: SourceDist, q: SourceDist, tol: float = 1e-16) -> float:
    """sqrt(sum_k (sqrt P(k) - sqrt Q(k))^2), truncated once both tails < tol."""
    acc = 0.0
    k = 1
    while p.tail(k) >= tol or q.tail(k) >= tol:
        d = math.sqrt(p.pmf(k)) - math.sqrt(q.pmf(k))
        acc += d * d
        k += 1
        if k > 10_000_000:
            raise RuntimeError("hellinger series did not converge within 1e7 terms")
    return math.sqrt(acc)


def parse_source_spec(text: str) -> SourceDist:
    """Build a source from a CLI spec: geom:q=Q | point:k=K | explicit:FILE."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "geom":
            key, _, val = rest.partition("=")
            if key != "q":
                raise DomainError(f"expected geom:q=..., got {text!r}")
            return Geometric(float(val))
        if kind == "point":
            key, _, val = rest.partition("=")
            if key != "k":
                raise DomainError(f"expected point:k=..., got {text!r}")
            return PointMass(int(val))
        if kind == "explicit":
            with open(rest, "r", encoding="utf-8") as fh:
                probs = [float(line) for line in fh if line.strip()]
            return Explicit(probs)
    except (ValueError, OSError) as exc:
        raise DomainError(f"bad source spec {text!r}: {exc}") from exc
    raise DomainError(f"unknown source kind {kind!r} (use geom:, point:, explicit:)")
