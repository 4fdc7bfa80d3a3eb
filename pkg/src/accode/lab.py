"""Monte-Carlo redundancy experiments against the codec and the closed-form bounds.

Every trial draws its own generator from mix_seed(base_seed, trial_index), so
reports are reproducible bit-for-bit and trials could be farmed out without
changing the result; aggregation always runs in trial order.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from accode.bounds import expected_max_bound, minimax_asymptote
from accode.codec import encode_with_trace
from accode.errors import DomainError, MembershipError
from accode.sources import EnvelopeSpec, SourceDist, is_member, make_rng, mix_seed

REDUNDANCY_COLUMNS = [
    "alpha", "C", "source", "n", "trials", "seed",
    "mean_code_bits", "std_code_bits", "entropy_bits",
    "mean_redundancy", "theory_asymptote", "ratio",
]

MAXIMA_COLUMNS = ["alpha", "C", "source", "n", "trials", "seed", "mean_max", "bound"]


@dataclass
class ExperimentConfig:
    envelope: EnvelopeSpec
    source: SourceDist
    n_list: list[int]
    trials: int
    seed: int

    def __post_init__(self) -> None:
        if not self.n_list or any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise DomainError("n_list must be non-empty and strictly increasing")
        if any(n < 1 for n in self.n_list):
            raise DomainError("message lengths must be >= 1")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if not is_member(self.source, self.envelope):
            raise MembershipError(
                f"source {self.source.label} violates envelope "
                f"(C={self.envelope.C}, alpha={self.envelope.alpha})"
            )


@dataclass
class RedundancyRow:
    n: int
    mean_code_bits: float
    std_code_bits: float
    entropy_bits: float
    mean_redundancy: float
    theory_asymptote: float
    ratio: float


@dataclass
class RedundancyReport:
    alpha: float
    C: float
    source: str
    trials: int
    seed: int
    rows: list[RedundancyRow] = field(default_factory=list)

    def csv_rows(self) -> list[list]:
        return [
            [self.alpha, self.C, self.source, r.n, self.trials, self.seed,
             r.mean_code_bits, r.std_code_bits, r.entropy_bits,
             r.mean_redundancy, r.theory_asymptote, r.ratio]
            for r in self.rows
        ]


@dataclass
class MaximaRow:
    n: int
    mean_max: float
    bound: float


@dataclass
class MaximaReport:
    alpha: float
    C: float
    source: str
    trials: int
    seed: int
    rows: list[MaximaRow] = field(default_factory=list)

    def csv_rows(self) -> list[list]:
        return [
            [self.alpha, self.C, self.source, r.n, self.trials, self.seed,
             r.mean_max, r.bound]
            for r in self.rows
        ]


def _check_pointwise_budget(trace, n: int) -> None:
    # Coder-side sanity: emitted arithmetic bits against the model's own
    # conditionals.  An independent oracle re-derives this in the test suite.
    ideal = sum(math.log2(total) - math.log2(freq) for freq, total in trace.coding_steps)
    budget = math.ceil(ideal - 1e-9) + 1 + 2 * (trace.escapes + 1) + n * 2.0 ** -20
    if trace.c1_bits > budget:
        raise RuntimeError(
            f"codelength budget violated: {trace.c1_bits} > {budget} (n={n})"
        )


def run_redundancy(config: ExperimentConfig) -> RedundancyReport:
    """Mean codec length minus n*H(P) per message length, against the asymptote."""
    env, src = config.envelope, config.source
    h_bits = src.entropy_bits()
    report = RedundancyReport(
        alpha=env.alpha, C=env.C, source=src.label,
        trials=config.trials, seed=config.seed,
    )
    trial_id = 0
    for n in config.n_list:
        lengths = np.empty(config.trials, dtype=float)
        for t in range(config.trials):
            rng = make_rng(mix_seed(config.seed, trial_id))
            trial_id += 1
            message = src.sample_iid(n, rng)
            _, trace = encode_with_trace(message)
            _check_pointwise_budget(trace, n)
            lengths[t] = trace.c1_bits + trace.c2_bits
        mean_bits = float(lengths.mean())
        std_bits = float(lengths.std(ddof=1)) if config.trials > 1 else 0.0
        entropy = n * h_bits
        theory = minimax_asymptote(max(n, 2), env.alpha)
        red = mean_bits - entropy
        report.rows.append(RedundancyRow(
            n=n, mean_code_bits=mean_bits, std_code_bits=std_bits,
            entropy_bits=entropy, mean_redundancy=red,
            theory_asymptote=theory, ratio=red / theory,
        ))
    return report


def run_max_experiment(config: ExperimentConfig) -> MaximaReport:
    """Empirical mean running maximum per message length, with the closed-form bound."""
    env, src = config.envelope, config.source
    report = MaximaReport(
        alpha=env.alpha, C=env.C, source=src.label,
        trials=config.trials, seed=config.seed,
    )
    trial_id = 0
    for n in config.n_list:
        acc = 0.0
        for t in range(config.trials):
            rng = make_rng(mix_seed(config.seed, trial_id))
            trial_id += 1
            acc += max(src.sample_iid(n, rng))
        report.rows.append(MaximaRow(
            n=n, mean_max=acc / config.trials, bound=expected_max_bound(env, n),
        ))
    return report


def emit_csv(report, destination) -> None:
    """Write a report as CSV; `destination` is a path or a text file object."""
    columns = REDUNDANCY_COLUMNS if isinstance(report, RedundancyReport) else MAXIMA_COLUMNS
    rows = report.csv_rows()
    if hasattr(destination, "write"):
        _write_csv(destination, columns, rows)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            _write_csv(fh, columns, rows)


def csv_text(report) -> str:
    out = io.StringIO()
    emit_csv(report, out)
    return out.getvalue()


def _write_csv(fh, columns, rows) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
