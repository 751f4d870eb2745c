"""Monte Carlo repair simulation: bits -> scheme -> fading MAC -> ML -> XOR repair.

Each trial draws from its own SplitMix64 stream seeded by
``derive_seed(master_seed, scheme, fading, snr_db, trial_index)``, so trials
can be batched or spread over processes without changing any result.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.stats import binomtest

from ._validation import check_positive_int
from .channel import ChannelRealization, FadingModel, draw_channel, noise_std_from_snr, transmit
from .decode import ml_decode_batch
from .rng import SplitMix64Stream, derive_seed
from .stcode import SCHEMES, Scheme, enumerate_codebook

CHUNK = 2048
CSV_HEADER = ["scheme", "fading", "snr_db", "trials", "bit_errors", "ber", "frame_errors",
              "fer", "ber_ci_low", "ber_ci_high", "seed"]
_SCHEME_IDS = {"ssm": 1, "dsm": 2, "mac-golden": 3, "mac-golden-notwist": 4}
_POPCOUNT = np.array([bin(v).count("1") for v in range(256)], dtype=np.int64)


@dataclass(frozen=True)
class SimConfig:
    scheme: str = "mac-golden"
    fading: str = "slow"
    snr_db: tuple[float, ...] = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    trials: int = 10_000
    fragment_bits: int = 4
    n_r: int = 2
    master_seed: int = 42
    noiseless: bool = False

    def __post_init__(self):
        Scheme.from_name(self.scheme)
        FadingModel(self.fading)
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        if not self.snr_db:
            raise ValueError("snr_db must list at least one point")
        check_positive_int(self.trials, "trials")
        check_positive_int(self.n_r, "n_r")
        if self.fragment_bits != 4:
            raise ValueError("the built-in schemes lift 4-bit fragments; fragment_bits must be 4")
        if not 0 <= int(self.master_seed) < 2 ** 64:
            raise ValueError("master_seed must fit in 64 bits")

    @property
    def scheme_obj(self) -> Scheme:
        return Scheme.from_name(self.scheme)


@dataclass(frozen=True)
class TrialRecord:
    b1: str
    b2: str
    b1_hat: str
    b2_hat: str
    repaired: str
    bit_errors: int
    frame_error: bool


def bits_per_channel_use(scheme) -> float:
    s = Scheme.from_name(scheme) if isinstance(scheme, str) else scheme
    return s.total_bits / s.T


def trial_seeds(config: SimConfig, snr_db: float, trial_indices) -> np.ndarray:
    return derive_seed(int(config.master_seed), _SCHEME_IDS[config.scheme],
                       FadingModel(config.fading).code, float(snr_db),
                       np.asarray(trial_indices, dtype=np.int64))


@dataclass
class BatchOutcome:
    b1: np.ndarray
    b2: np.ndarray
    b1_hat: np.ndarray
    b2_hat: np.ndarray
    bit_errors: np.ndarray
    tx_energy: np.ndarray  # ||X||_F^2 / (K T) per trial


def run_seeded(config: SimConfig, snr_db: float, seeds, codebook=None) -> BatchOutcome:
    """Run one trial per seed.  Draw order: data bits, fading, noise.

    ``codebook`` replaces the scheme's normalized codebook (self-test hook).
    """
    scheme = config.scheme_obj
    book = enumerate_codebook(scheme) if codebook is None else codebook
    rng = SplitMix64Stream(np.asarray(seeds, dtype=np.uint64))
    nb = scheme.bits_per_helper
    data = rng.bits(scheme.total_bits)
    b1, b2 = data >> nb, data & ((1 << nb) - 1)
    idx = b1 * (1 << nb) + b2  # codebook order is lexicographic in (b1, b2)
    X = book.matrices[idx]
    K = scheme.n_helpers
    chan = draw_channel(config.n_r, K * scheme.n_t, scheme.T, config.fading, rng)
    sigma = 0.0 if config.noiseless else noise_std_from_snr(snr_db, K)
    Y = transmit(X, chan.with_noise_std(sigma), rng)
    dec, _ = ml_decode_batch(Y, chan.H, book.matrices)
    b1_hat, b2_hat = dec >> nb, dec & ((1 << nb) - 1)
    wrong = (b1_hat ^ b2_hat) ^ (b1 ^ b2)
    bit_errors = _POPCOUNT[wrong]
    energy = np.sum(np.abs(X) ** 2, axis=(-2, -1)) / (K * scheme.T)
    return BatchOutcome(b1, b2, b1_hat, b2_hat, bit_errors, energy)


def _record(out: BatchOutcome, i: int, nb: int) -> TrialRecord:
    f = f"0{nb}b"
    b1, b2 = format(int(out.b1[i]), f), format(int(out.b2[i]), f)
    h1, h2 = format(int(out.b1_hat[i]), f), format(int(out.b2_hat[i]), f)
    repaired = format(int(out.b1_hat[i]) ^ int(out.b2_hat[i]), f)
    errs = int(out.bit_errors[i])
    return TrialRecord(b1, b2, h1, h2, repaired, errs, errs > 0)


def run_trial(config: SimConfig, snr_db: float, trial_index: int) -> TrialRecord:
    seeds = trial_seeds(config, snr_db, [trial_index])
    return _record(run_seeded(config, snr_db, seeds), 0, config.fragment_bits)


def run_trials(config: SimConfig, snr_db: float, trial_indices=None, seeds=None) -> list[TrialRecord]:
    """Full records for many trials (by index, or by explicit seeds)."""
    if seeds is None:
        seeds = trial_seeds(config, snr_db, trial_indices)
    out = run_seeded(config, snr_db, seeds)
    return [_record(out, i, config.fragment_bits) for i in range(len(out.bit_errors))]


def _tally(args) -> tuple[int, int]:
    config, snr_db, start, stop = args
    out = run_seeded(config, snr_db, trial_seeds(config, snr_db, np.arange(start, stop)))
    return int(out.bit_errors.sum()), int(np.count_nonzero(out.bit_errors))


def wilson_interval(errors: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    ci = binomtest(errors, n).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


@dataclass(frozen=True)
class SweepRow:
    scheme: str
    fading: str
    snr_db: float
    trials: int
    bit_errors: int
    ber: float
    frame_errors: int
    fer: float
    ber_ci_low: float
    ber_ci_high: float
    seed: int


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)

    def __add__(self, other: "SweepResult") -> "SweepResult":
        return SweepResult(self.rows + other.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([r.scheme, r.fading, _fmt(r.snr_db), r.trials, r.bit_errors, _fmt(r.ber),
                        r.frame_errors, _fmt(r.fer), _fmt(r.ber_ci_low), _fmt(r.ber_ci_high),
                        r.seed])
        return buf.getvalue()

    def as_dicts(self) -> list[dict]:
        return [asdict(r) for r in self.rows]

    def row(self, scheme: str, fading: str, snr_db: float) -> SweepRow:
        for r in self.rows:
            if (r.scheme, r.fading, r.snr_db) == (scheme, fading, float(snr_db)):
                return r
        raise KeyError((scheme, fading, snr_db))


def _fmt(x: float) -> str:
    return format(x, ".10g")


def default_workers() -> int:
    env = os.environ.get("STSC_WORKERS")
    if env:
        return check_positive_int(int(env), "STSC_WORKERS")
    return os.cpu_count() or 1


def run_sweep(config: SimConfig, workers: int | None = None, progress=None) -> SweepResult:
    """Aggregate all trials at every SNR point; rows follow ``config.snr_db``.

    Trials are split into fixed-size chunks, so the worker count never
    changes which trials are computed together.
    """
    workers = default_workers() if workers is None else check_positive_int(workers, "workers")
    jobs = [(config, snr, start, min(start + CHUNK, config.trials))
            for snr in config.snr_db for start in range(0, config.trials, CHUNK)]
    if workers == 1:
        results = []
        for job in jobs:
            results.append(_tally(job))
            if progress:
                progress(len(results), len(jobs))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_tally, jobs))
    totals: dict[float, list[int]] = {s: [0, 0] for s in config.snr_db}
    for (cfg, snr, _, _), (bits, frames) in zip(jobs, results):
        totals[snr][0] += bits
        totals[snr][1] += frames
    rows = []
    n_bits = config.trials * config.fragment_bits
    for snr in config.snr_db:
        bits, frames = totals[snr]
        lo, hi = wilson_interval(bits, n_bits)
        rows.append(SweepRow(config.scheme, config.fading, snr, config.trials, bits,
                             bits / n_bits, frames, frames / config.trials, lo, hi,
                             int(config.master_seed)))
    return SweepResult(rows)


def measure_energy(config: SimConfig, trials: int = 10_000, snr_db: float = 0.0,
                   codebook=None) -> float:
    """Mean transmitted energy per channel use per helper over ``trials`` trials."""
    seeds = trial_seeds(config, snr_db, np.arange(trials))
    return float(np.mean(run_seeded(config, snr_db, seeds, codebook).tx_energy))


__all__ = [
    "SCHEMES", "SimConfig", "TrialRecord", "SweepRow", "SweepResult", "bits_per_channel_use",
    "run_trial", "run_trials", "run_seeded", "run_sweep", "trial_seeds", "wilson_interval",
    "measure_energy", "ChannelRealization",
]
