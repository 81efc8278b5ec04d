"""Parametric back-to-back channel: DAC quantization, TX roll-off, TX noise, ASE."""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .signal_core import ComplexSignal

# Unit-power reference the modulators normalize against; the DAC full scale
# is anchored to it rather than re-measured per signal, so pre-emphasis
# attenuation genuinely lowers converter utilization.
FULLSCALE_RMS = 1.0


@dataclass(frozen=True)
class TxResponseModel:
    """Magnitude-only transmitter frequency response, unity at 0 GHz.

    ``gaussian_order`` kind: |H(f)| = 10^(-(6/20) * (|f|/bw6dB)^order), i.e.
    the magnitude is 6 dB down at ``bw6dB``.  ``tabulated`` kind: (GHz, dB)
    pairs interpolated linearly in dB and clamped beyond the table.
    """

    kind: str = "gaussian_order"
    order: float = 2.0
    bw6db: float = 35.0
    table: tuple[tuple[float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind == "gaussian_order":
            if self.order <= 0 or self.bw6db <= 0:
                raise ValueError("order and bw6db must be positive")
        elif self.kind == "tabulated":
            if len(self.table) < 2:
                raise ValueError("tabulated response needs at least two entries")
            freqs = [f for f, _ in self.table]
            mags = [m for _, m in self.table]
            if freqs[0] != 0.0 or mags[0] != 0.0:
                raise ValueError("tabulated response must start at '0 0'")
            if any(b <= a for a, b in zip(freqs, freqs[1:])):
                raise ValueError("tabulated frequencies must be strictly increasing")
            if any(b > a for a, b in zip(mags, mags[1:])):
                raise ValueError("tabulated magnitude must be non-increasing")
            if any(m > 0 for m in mags):
                raise ValueError("tabulated magnitude must be <= 0 dB")
        else:
            raise ValueError(f"unknown response kind {self.kind!r}")

    def magnitude(self, f) -> np.ndarray:
        """Linear amplitude gain at frequency ``f`` (GHz, scalar or array)."""
        f = np.abs(np.asarray(f, dtype=np.float64))
        if self.kind == "gaussian_order":
            if not np.isfinite(self.bw6db):
                return np.ones_like(f)
            return 10.0 ** (-(6.0 / 20.0) * (f / self.bw6db) ** self.order)
        freqs = np.array([x for x, _ in self.table])
        mags = np.array([m for _, m in self.table])
        db = np.interp(f, freqs, mags)  # np.interp clamps beyond the table
        return 10.0 ** (db / 20.0)

    @staticmethod
    def flat() -> "TxResponseModel":
        """Frequency-flat (ideal) transmitter."""
        return TxResponseModel(kind="gaussian_order", order=2.0, bw6db=np.inf)


def load_tx_response(path: str | Path) -> TxResponseModel:
    """Parse a tabulated TX response file: lines of ``<freq_GHz> <mag_dB>``,
    ``#`` comments, frequencies ascending, first data line ``0 0``."""
    rows = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected '<freq_GHz> <mag_dB>'")
        rows.append((float(parts[0]), float(parts[1])))
    if not rows:
        raise ValueError(f"{path}: no data lines")
    return TxResponseModel(kind="tabulated", table=tuple(rows))


@dataclass(frozen=True)
class ChannelConfig:
    """Back-to-back impairment knobs.

    ``clip_scale`` sets the per-rail DAC full scale at ``clip_scale`` times
    the rail RMS of the unit-power reference (about 0.3% clipping for
    Gaussian-like signals at 3.0).  ``tx_snr_fullscale`` fixes the absolute
    TX noise power relative to full-scale signal power; ``None`` disables
    it.  ``osnr_db=None`` disables ASE loading; otherwise the noise
    bandwidth must be given (the composite symbol rate, by convention).
    """

    dac_bits: int = 8
    clip_scale: float = 3.0
    tx_snr_fullscale: float | None = 26.0
    osnr_db: float | None = None
    osnr_noise_bandwidth: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.dac_bits < 1:
            raise ValueError(f"dac_bits must be >= 1, got {self.dac_bits}")
        if self.clip_scale <= 0:
            raise ValueError(f"clip_scale must be positive, got {self.clip_scale}")
        if self.osnr_db is not None and (
            self.osnr_noise_bandwidth is None or self.osnr_noise_bandwidth <= 0
        ):
            raise ValueError("osnr_noise_bandwidth must be positive when OSNR is set")


def tx_response_mag(model: TxResponseModel, f) -> np.ndarray:
    """Linear TX magnitude gain at ``f`` GHz (monotone non-increasing in |f|)."""
    return model.magnitude(f)


def _rail_fullscale(cfg: ChannelConfig) -> float:
    # per-rail amplitude: clip_scale x rail RMS of the unit-power reference
    return cfg.clip_scale * FULLSCALE_RMS / np.sqrt(2.0)


def fullscale_power(cfg: ChannelConfig) -> float:
    """Power of a full-scale complex tone (both rails at the rail limit)."""
    return _rail_fullscale(cfg) ** 2


def _quantize_midrise(values: np.ndarray, bits: int, fullscale: float) -> np.ndarray:
    step = 2.0 * fullscale / (1 << bits)
    idx = np.floor(values / step)
    np.clip(idx, -(1 << (bits - 1)), (1 << (bits - 1)) - 1, out=idx)
    return (idx + 0.5) * step


def apply_tx_frontend(
    sig: ComplexSignal,
    model: TxResponseModel,
    cfg: ChannelConfig,
) -> ComplexSignal:
    """DAC quantization, TX frequency roll-off, then additive TX noise.

    The quantizer range is anchored to the unit-power full-scale reference,
    not to the incoming signal, and the TX noise power is absolute (set
    against full scale), so a pre-emphasized signal arriving below unit RMS
    sees genuinely degraded quantization and TX SNR.
    """
    fullscale = _rail_fullscale(cfg)
    out = _quantize_midrise(sig.samples.real, cfg.dac_bits, fullscale) + 1j * _quantize_midrise(
        sig.samples.imag, cfg.dac_bits, fullscale
    )

    spectrum = np.fft.fft(out)
    freqs = np.fft.fftfreq(len(out), 1.0 / sig.sample_rate)
    out = np.fft.ifft(spectrum * model.magnitude(freqs))

    if cfg.tx_snr_fullscale is not None and np.isfinite(cfg.tx_snr_fullscale):
        noise_power = fullscale_power(cfg) * 10.0 ** (-cfg.tx_snr_fullscale / 10.0)
        rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 0x7A0157)))
        noise = rng.normal(size=len(out)) + 1j * rng.normal(size=len(out))
        out = out + noise * np.sqrt(noise_power / 2.0)
    return ComplexSignal(out, sig.sample_rate)


def load_ase(
    sig: ComplexSignal,
    osnr_db: float | None,
    noise_bandwidth: float,
    seed: int = 0,
) -> ComplexSignal:
    """Add circular white Gaussian noise to a target OSNR.

    The OSNR is defined as signal power over the noise power falling in
    ``noise_bandwidth`` GHz; the injected noise is white across the whole
    simulation band.
    """
    if osnr_db is None:
        return ComplexSignal(sig.samples, sig.sample_rate)
    if noise_bandwidth > sig.sample_rate:
        raise ValueError(
            f"noise bandwidth {noise_bandwidth} GHz exceeds the simulated band "
            f"({sig.sample_rate} GHz)"
        )
    signal_power = sig.power
    noise_psd = signal_power / (10.0 ** (osnr_db / 10.0) * noise_bandwidth)
    total_noise = noise_psd * sig.sample_rate
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0xA5E)))
    noise = rng.normal(size=len(sig.samples)) + 1j * rng.normal(size=len(sig.samples))
    return ComplexSignal(sig.samples + noise * np.sqrt(total_noise / 2.0), sig.sample_rate)
