"""Nonlinear channel equalization benchmark.

Pipeline per trial: draw a complex source with tunable circularity, pass it
through a two-tap linear filter followed by a memoryless cubic nonlinearity,
corrupt with circular AWGN at a fixed SNR, then stream windowed received
samples through the online recursion and record the running mean of the
squared prediction error. Curves are averaged across independent trials.

Randomness is counter-based (Philox): trial i uses key ``base_seed + i`` with
separate jumped streams for source and noise, so any subset of trials can be
reproduced or run in parallel. Setting the environment variable
``WRKHS_THREADS`` parallelizes the trial loop.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import ComplexDataset
from .kernels import KernelSpec, RealGaussian, kernel_from_config
from .online import Wrkls, streaming_ridge_predictions

__all__ = [
    "ChannelConfig",
    "EqualizationConfig",
    "EqualizationResult",
    "trial_rngs",
    "generate_source",
    "apply_channel",
    "add_awgn",
    "build_equalizer_dataset",
    "run_equalization",
]

DEFAULT_TAPS = (-0.9 + 0.8j, 0.6 - 0.7j)
DEFAULT_C2 = 0.2 + 0.25j
DEFAULT_C3 = 0.12 + 0.09j


@dataclass(frozen=True)
class ChannelConfig:
    """Source, channel, and windowing parameters for one benchmark."""

    rho: float
    snr_db: float = 16.0
    taps: tuple[complex, complex] = DEFAULT_TAPS
    c2: complex = DEFAULT_C2
    c3: complex = DEFAULT_C3
    source_scale: float = 0.70
    filter_length: int = 5
    delay: int = 2
    n_samples: int = 5000
    trials: int = 500
    base_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        if self.filter_length < 1:
            raise ValueError("filter_length must be >= 1")
        if self.delay < 0:
            raise ValueError("delay must be >= 0")
        if self.n_samples <= self.filter_length + self.delay:
            raise ValueError("n_samples must exceed filter_length + delay")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass(frozen=True)
class EqualizationConfig:
    """Channel benchmark plus equalizer hyperparameters."""

    channel: ChannelConfig
    kernel: KernelSpec = field(default_factory=lambda: RealGaussian(gamma=8.92))
    lam: float = 0.32
    budget: int | None = None

    def to_config(self) -> dict:
        ch = self.channel
        return {
            "rho": ch.rho,
            "snr_db": ch.snr_db,
            "taps": [[t.real, t.imag] for t in ch.taps],
            "c2": [ch.c2.real, ch.c2.imag],
            "c3": [ch.c3.real, ch.c3.imag],
            "source_scale": ch.source_scale,
            "filter_length": ch.filter_length,
            "delay": ch.delay,
            "n_samples": ch.n_samples,
            "trials": ch.trials,
            "base_seed": ch.base_seed,
            "kernel": self.kernel.to_config(),
            "lam": self.lam,
            "budget": self.budget,
        }

    @staticmethod
    def from_config(cfg: dict) -> "EqualizationConfig":
        known = dict(cfg)
        kernel_cfg = known.pop("kernel", None)
        lam = float(known.pop("lam", 0.32))
        budget = known.pop("budget", None)
        if "taps" in known:
            known["taps"] = tuple(complex(re, im) for re, im in known["taps"])
        for name in ("c2", "c3"):
            if name in known and not isinstance(known[name], complex):
                re, im = known[name]
                known[name] = complex(re, im)
        channel = ChannelConfig(**known)
        kernel = (
            kernel_from_config(kernel_cfg)
            if kernel_cfg is not None
            else RealGaussian(gamma=8.92)
        )
        return EqualizationConfig(
            channel=channel,
            kernel=kernel,
            lam=lam,
            budget=None if budget is None else int(budget),
        )


@dataclass(frozen=True)
class EqualizationResult:
    """Trial-averaged running-MSE curve and its final value."""

    curve_db: np.ndarray
    final_mse_db: float
    n_stream: int
    trials: int


def trial_rngs(base_seed: int, trial: int):
    """Independent (source, noise) generators for one trial.

    Counter-based Philox keyed by ``base_seed + trial``; the noise stream is
    the source stream jumped once.
    """
    root = np.random.Philox(key=np.uint64(base_seed + trial))
    return np.random.Generator(root), np.random.Generator(root.jumped(1))


def generate_source(
    n: int, rho: float, rng: np.random.Generator, scale: float = 0.70
) -> np.ndarray:
    """Complex source ``scale * (sqrt(1 - rho^2) X + j rho Y)``, X, Y ~ N(0,1).

    Circular for ``rho = 1/sqrt(2)``; highly noncircular as rho approaches
    0 or 1.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    x = rng.standard_normal(n)
    y = rng.standard_normal(n)
    return scale * (np.sqrt(1.0 - rho * rho) * x + 1j * rho * y)


def apply_channel(
    s,
    taps: tuple[complex, complex] = DEFAULT_TAPS,
    c2: complex = DEFAULT_C2,
    c3: complex = DEFAULT_C3,
) -> np.ndarray:
    """Two-tap filter then memoryless cubic polynomial.

    ``t(n) = h0 s(n) + h1 s(n-1)`` (with ``s(-1) = 0``) and
    ``q(n) = t + c2 t^2 + c3 t^3``.
    """
    s = np.asarray(s, dtype=np.complex128).ravel()
    if s.size < 2:
        raise ValueError("stream must have length >= 2")
    h0, h1 = taps
    t = h0 * s
    t[1:] += h1 * s[:-1]
    return t + c2 * t**2 + c3 * t**3


def add_awgn(q, snr_db: float, rng: np.random.Generator) -> np.ndarray:
    """Add circular white Gaussian noise at the given SNR.

    The noise variance is ``mean(|q|^2) / 10^(snr_db/10)`` -- SNR is defined
    against the empirical per-trial power of the channel output -- split
    evenly between the real and imaginary parts.
    """
    q = np.asarray(q, dtype=np.complex128).ravel()
    if not np.isfinite(snr_db):
        raise ValueError("snr_db must be finite")
    power = float(np.mean(np.abs(q) ** 2))
    if power == 0.0:
        raise ValueError("channel output has zero power")
    sigma2 = power / 10.0 ** (snr_db / 10.0)
    half = np.sqrt(sigma2 / 2.0)
    noise = half * (rng.standard_normal(q.size) + 1j * rng.standard_normal(q.size))
    return q + noise


def build_equalizer_dataset(
    r, s, filter_length: int, delay: int
) -> ComplexDataset:
    """Windowed regressors ``x(n) = [r(n+D), ..., r(n+D-L+1)]`` with target s(n).

    Only fully-defined windows are kept: n ranges over
    ``[max(0, L-1-D), len(r)-1-D]``, preserving stream order.
    """
    r = np.asarray(r, dtype=np.complex128).ravel()
    s = np.asarray(s, dtype=np.complex128).ravel()
    if r.size != s.size:
        raise ValueError("received and source streams must have equal length")
    n_total = r.size
    first = max(0, filter_length - 1 - delay)
    last = n_total - 1 - delay
    if last < first:
        raise ValueError("stream too short for the requested window")
    idx = np.arange(first, last + 1)
    offsets = delay - np.arange(filter_length)
    windows = r[idx[:, None] + offsets[None, :]]
    return ComplexDataset(X=windows, y=s[idx])


def _run_trial(config: EqualizationConfig, trial: int) -> np.ndarray:
    """Cumulative-mean squared-error curve of one trial (linear scale)."""
    ch = config.channel
    source_rng, noise_rng = trial_rngs(ch.base_seed, trial)
    s = generate_source(ch.n_samples, ch.rho, source_rng, ch.source_scale)
    q = apply_channel(s, ch.taps, ch.c2, ch.c3)
    r = add_awgn(q, ch.snr_db, noise_rng)
    data = build_equalizer_dataset(r, s, ch.filter_length, ch.delay)
    if config.budget is None:
        preds = streaming_ridge_predictions(config.kernel, data.X, data.y, config.lam)
    else:
        model = Wrkls(config.kernel, config.lam, budget=config.budget)
        preds = np.fromiter(
            (model.observe(data.X[i], data.y[i]) for i in range(data.n)),
            dtype=np.complex128,
            count=data.n,
        )
    sq_err = np.abs(preds - data.y) ** 2
    return np.cumsum(sq_err) / np.arange(1, data.n + 1)


def _thread_count() -> int:
    raw = os.environ.get("WRKHS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_equalization(config: EqualizationConfig) -> EqualizationResult:
    """Average the per-sample running MSE over all configured trials."""
    trials = config.channel.trials
    workers = _thread_count()
    if workers > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            curves = list(pool.map(lambda t: _run_trial(config, t), range(trials)))
    else:
        curves = [_run_trial(config, t) for t in range(trials)]
    avg = np.mean(np.stack(curves), axis=0)
    curve_db = 10.0 * np.log10(avg)
    return EqualizationResult(
        curve_db=curve_db,
        final_mse_db=float(curve_db[-1]),
        n_stream=avg.shape[0],
        trials=trials,
    )
