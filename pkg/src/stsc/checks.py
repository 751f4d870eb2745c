"""Self-test and lift round-trip checks used by the CLI."""

from __future__ import annotations

import dataclasses
import random
from itertools import product

import numpy as np

from .algebra import GaussInt, GoldenElem, coset_decode, coset_encode, golden_mul, tau
from .channel import draw_channel, noise_std_from_snr, transmit
from .decode import ml_decode_batch
from .modulation import QAM4, QAM16, delift_golden, demap, gray4, gray16, lift_golden
from .rng import SplitMix64Stream
from .sim import SimConfig, measure_energy, run_seeded, trial_seeds
from .stcode import ALPHA, SCHEMES, enumerate_codebook


@dataclasses.dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def _all_bits(n: int):
    return ("".join(p) for p in product("01", repeat=n))


def lift_check(t_max: int = 4) -> list[CheckResult]:
    """Exhaustive round trips for the coset lift (t <= t_max) and the Gray/golden lifts."""
    if not 1 <= t_max <= 8:
        raise ValueError("t_max must lie in [1, 8]")
    results = []
    for t in range(1, t_max + 1):
        seen = set()
        bad = None
        for s in _all_bits(2 * t):
            label = coset_encode(s)
            seen.add(label)
            if coset_decode(label) != s:
                bad = s
                break
        ok = bad is None and len(seen) == 4 ** t
        results.append(CheckResult(f"coset lift t={t}", ok,
                                   f"witness {bad}" if bad else f"{len(seen)} cosets"))
    for name, width, fwd, back in (
        ("gray4", 2, gray4, lambda p: demap(QAM4, p)),
        ("gray16", 4, gray16, lambda p: demap(QAM16, p)),
        ("lift_golden", 4, lift_golden, delift_golden),
    ):
        images = {}
        bad = None
        for s in _all_bits(width):
            img = fwd(s)
            images[img] = s
            if back(img) != s:
                bad = s
                break
        ok = bad is None and len(images) == 2 ** width
        results.append(CheckResult(f"{name} round trip", ok, f"witness {bad}" if bad else ""))
    return results


def _norm_check(tau_fn) -> CheckResult:
    try:
        n = golden_mul(ALPHA, tau_fn(ALPHA))
        if not n.b.is_zero() or n.a != GaussInt(2, 1):
            return CheckResult("relative norm", False, f"alpha*tau(alpha) = {n}, expected 2+i")
        rnd = random.Random(7)
        for _ in range(200):
            x, y = (GoldenElem(GaussInt(rnd.randint(-8, 8), rnd.randint(-8, 8)),
                               GaussInt(rnd.randint(-8, 8), rnd.randint(-8, 8))) for _ in "xy")
            nx, ny, nxy = (golden_mul(z, tau_fn(z)) for z in (x, y, golden_mul(x, y)))
            if not (nx.b.is_zero() and ny.b.is_zero() and nxy == golden_mul(nx, ny)):
                return CheckResult("relative norm", False, f"not multiplicative at x={x}, y={y}")
    except ArithmeticError as exc:
        return CheckResult("relative norm", False, str(exc))
    return CheckResult("relative norm", True)


def _noiseless_check(trials: int) -> CheckResult:
    for name in SCHEMES:
        for fading in ("slow", "fast"):
            cfg = SimConfig(scheme=name, fading=fading, snr_db=(0.0,), trials=trials,
                            noiseless=True, master_seed=2024)
            out = run_seeded(cfg, 0.0, trial_seeds(cfg, 0.0, np.arange(trials)))
            if out.bit_errors.any():
                return CheckResult("noiseless repair", False, f"{name}/{fading} has bit errors")
    return CheckResult("noiseless repair", True, f"{trials} trials per scheme and fading")


def _decoder_oracle_check(instances: int) -> CheckResult:
    for name in SCHEMES:
        book = enumerate_codebook(name)
        s = book.scheme
        rng = SplitMix64Stream(np.arange(instances, dtype=np.uint64) + 99)
        chan = draw_channel(2, s.n_helpers, s.T, "fast", rng)
        data = rng.bits(8)
        X = book.matrices[data]
        Y = transmit(X, chan.with_noise_std(noise_std_from_snr(5.0)), rng)
        fast_idx, _ = ml_decode_batch(Y, chan.H, book.matrices)
        for b in range(instances):
            metrics = [sum(float(np.sum(np.abs(Y[b, :, t] - chan.H[b, t] @ C[:, t]) ** 2))
                           for t in range(s.T))
                       for C in book.matrices]
            if int(np.argmin(metrics)) != int(fast_idx[b]):
                return CheckResult("decoder oracle", False, f"{name} instance {b}")
    return CheckResult("decoder oracle", True, f"{instances} instances per scheme")


def _energy_check(trials: int, energy_scale: float) -> CheckResult:
    for name in SCHEMES:
        book = enumerate_codebook(name)
        if energy_scale != 1.0:
            book = dataclasses.replace(book, matrices=book.matrices * energy_scale)
        e = measure_energy(SimConfig(scheme=name), trials, codebook=book)
        if abs(e - 1.0) > 0.01:
            return CheckResult("energy normalization", False, f"{name}: {e:.4f}")
    return CheckResult("energy normalization", True)


def selftest(tau_fn=tau, energy_scale: float = 1.0, trials: int = 2000,
             oracle_instances: int = 50) -> list[CheckResult]:
    """Run the built-in health checks; the keyword hooks exist for mutation testing."""
    return [
        _norm_check(tau_fn),
        _noiseless_check(trials),
        _decoder_oracle_check(oracle_instances),
        _energy_check(10_000, energy_scale),
    ]
