"""Root-raised-cosine and clipped-inverse pre-emphasis FIR design."""

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import fftconvolve

from .signal_core import ComplexSignal, SpectrumEstimate


class DesignQualityWarning(UserWarning):
    """A filter was synthesized but misses its target response quality."""


@dataclass(frozen=True)
class FirFilter:
    """Real, odd-length, linear-phase FIR filter.

    ``sps`` records the samples-per-symbol context the filter was designed
    for (2 for single carrier, 2N for a digital-subcarrier composite).
    ``rho`` and ``clip_db`` carry design metadata for pulse-shaping and
    pre-emphasis filters respectively.
    """

    taps: np.ndarray
    sps: int
    kind: str = "fir"
    rho: float | None = None
    clip_db: float | None = None
    truncation_loss: float = 0.0

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=np.float64)
        if taps.ndim != 1 or taps.size == 0:
            raise ValueError("taps must be a non-empty 1-D real sequence")
        if taps.size % 2 == 0:
            raise ValueError(f"tap count must be odd, got {taps.size}")
        scale = np.max(np.abs(taps))
        if scale > 0 and np.max(np.abs(taps - taps[::-1])) > 1e-9 * scale:
            raise ValueError("taps must be symmetric (linear phase)")
        if self.sps < 1:
            raise ValueError(f"sps must be >= 1, got {self.sps}")
        taps.flags.writeable = False
        object.__setattr__(self, "taps", taps)

    @property
    def length(self) -> int:
        return len(self.taps)

    @property
    def group_delay(self) -> int:
        """Group delay in samples, (L - 1) / 2."""
        return (len(self.taps) - 1) // 2

    def energy(self) -> float:
        return float(np.sum(self.taps**2))


@dataclass(frozen=True)
class PreemphasisSpec:
    """Clipped inverse-response target: max attenuation ``clip_db`` (dB, at
    zero frequency) matched over the one-sided band ``design_band`` (GHz)."""

    clip_db: float
    design_band: float

    def __post_init__(self):
        if self.clip_db < 0:
            raise ValueError(f"clip_db must be >= 0 dB, got {self.clip_db}")
        if self.design_band <= 0:
            raise ValueError(f"design_band must be positive, got {self.design_band}")


def _rrc_impulse(t: np.ndarray, rho: float) -> np.ndarray:
    """Closed-form root-raised-cosine impulse response at times ``t`` (in
    symbol periods), with analytic limits at the removable singularities."""
    guard = 1e-8
    out = np.empty_like(t)
    t_sing = 1.0 / (4.0 * rho)
    at_zero = np.abs(t) < guard
    at_sing = np.abs(np.abs(t) - t_sing) < guard
    regular = ~(at_zero | at_sing)

    out[at_zero] = 1.0 - rho + 4.0 * rho / np.pi
    out[at_sing] = (rho / np.sqrt(2.0)) * (
        (1.0 + 2.0 / np.pi) * np.sin(np.pi / (4.0 * rho))
        + (1.0 - 2.0 / np.pi) * np.cos(np.pi / (4.0 * rho))
    )
    tr = t[regular]
    num = np.sin(np.pi * tr * (1.0 - rho)) + 4.0 * rho * tr * np.cos(np.pi * tr * (1.0 + rho))
    den = np.pi * tr * (1.0 - (4.0 * rho * tr) ** 2)
    out[regular] = num / den
    return out


def design_rrc(rho: float, sps: int, length: int) -> FirFilter:
    """Sample the closed-form RRC impulse response, unit-energy normalized.

    ``rho`` is the roll-off fraction in (0, 1], ``sps`` the samples per
    symbol (2 for SC, 2N for DSM), ``length`` the odd tap count.
    """
    if not 0 < rho <= 1:
        raise ValueError(f"roll-off must be in (0, 1], got {rho}")
    if sps < 2:
        raise ValueError(f"sps must be >= 2, got {sps}")
    if length % 2 == 0 or length < 1:
        raise ValueError(f"length must be odd and positive, got {length}")
    t = (np.arange(length) - (length - 1) / 2) / sps
    taps = _rrc_impulse(t, rho)
    taps /= np.sqrt(np.sum(taps**2))
    return FirFilter(taps, sps=sps, kind="rrc", rho=rho)


def freq_response(filt: FirFilter, sample_rate: float, n_points: int) -> SpectrumEstimate:
    """Magnitude-squared DTFT on ``n_points`` uniform frequencies over
    [-sample_rate/2, sample_rate/2)."""
    if n_points < filt.length:
        raise ValueError(f"n_points must be >= filter length {filt.length}")
    response = np.fft.fft(filt.taps, n_points)
    freq = np.fft.fftfreq(n_points, 1.0 / sample_rate)
    return SpectrumEstimate(np.fft.fftshift(freq), np.fft.fftshift(np.abs(response) ** 2))


def design_preemphasis(
    tx_model,
    spec: PreemphasisSpec,
    length: int,
    sample_rate: float,
) -> FirFilter:
    """Linear-phase FIR approximating the clipped inverse TX magnitude.

    The target is P(f) = max(inv(f)/max inv, 10^(-clip_db/20)) inside the
    design band (inv = 1/|H_tx|) and constant beyond it, synthesized by
    frequency sampling on a 4L grid, Hann-windowed truncation to ``length``
    taps, and exact peak-gain normalization to 0 dB.  ``tx_model`` is any
    object exposing ``magnitude(f)`` (linear gain at f GHz).

    Emits :class:`DesignQualityWarning` when the realized response deviates
    from the target by more than 1 dB inside the design band.
    """
    if length % 2 == 0 or length < 1:
        raise ValueError(f"length must be odd and positive, got {length}")
    if spec.design_band >= sample_rate / 2:
        raise ValueError(
            f"design_band {spec.design_band} GHz must lie below Nyquist "
            f"({sample_rate / 2} GHz)"
        )
    n_grid = 4 * length
    f = np.fft.fftfreq(n_grid, 1.0 / sample_rate)
    inside = np.abs(f) <= spec.design_band
    mag = np.asarray(tx_model.magnitude(f[inside]), dtype=np.float64)
    if np.any(mag <= 0):
        raise ValueError("TX magnitude must be strictly positive over the design band")
    inv = 1.0 / mag
    floor = 10.0 ** (-spec.clip_db / 20.0)
    target = np.ones(n_grid)
    target[inside] = np.maximum(inv / inv.max(), floor)

    impulse = np.roll(np.fft.ifft(target).real, n_grid // 2)
    center = n_grid // 2
    half = (length - 1) // 2
    taps = impulse[center - half : center + half + 1] * np.hanning(length + 2)[1:-1]

    n_eval = 1 << 16
    realized = np.abs(np.fft.fft(taps, n_eval))
    taps = taps / realized.max()

    f_eval = np.fft.fftfreq(n_eval, 1.0 / sample_rate)
    in_eval = np.abs(f_eval) <= spec.design_band
    mag_eval = np.asarray(tx_model.magnitude(f_eval[in_eval]), dtype=np.float64)
    tgt_eval = np.maximum((1.0 / mag_eval) / (1.0 / mag_eval).max(), floor)
    dev = 20.0 * np.log10(realized[in_eval] / realized.max()) - 20.0 * np.log10(tgt_eval)
    worst = float(np.max(np.abs(dev)))
    if worst > 1.0:
        warnings.warn(
            f"pre-emphasis length {length} misses its target by {worst:.2f} dB "
            f"inside the design band",
            DesignQualityWarning,
            stacklevel=2,
        )
    return FirFilter(taps, sps=1, kind="preemph", clip_db=spec.clip_db)


def merge_filters(a: FirFilter, b: FirFilter) -> FirFilter:
    """Convolve two filters and truncate symmetrically to max(L_a, L_b) taps.

    The discarded convolution-tail energy fraction is recorded on the
    result; above 1% a :class:`DesignQualityWarning` is emitted.
    """
    full = np.convolve(a.taps, b.taps)
    out_len = max(a.length, b.length)
    center = (a.length - 1) // 2 + (b.length - 1) // 2
    half = (out_len - 1) // 2
    kept = full[center - half : center + half + 1]
    total = float(np.sum(full**2))
    loss = 0.0 if total == 0 else 1.0 - float(np.sum(kept**2)) / total
    if loss > 0.01:
        warnings.warn(
            f"merging filters discards {100 * loss:.2f}% of the cascade energy",
            DesignQualityWarning,
            stacklevel=2,
        )
    return FirFilter(
        kept,
        sps=max(a.sps, b.sps),
        kind="merged",
        truncation_loss=loss,
    )


def apply_fir(filt: FirFilter, sig: ComplexSignal) -> ComplexSignal:
    """Linear convolution trimmed by the group delay on both ends, so input
    and output sample indices stay aligned."""
    if len(sig.samples) < filt.length:
        raise ValueError(
            f"signal length {len(sig.samples)} is shorter than the filter "
            f"({filt.length} taps)"
        )
    out = fftconvolve(sig.samples, filt.taps, mode="same")
    return ComplexSignal(out, sig.sample_rate)


def cascade_isi_db(filt: FirFilter) -> float:
    """Peak symbol-spaced distortion of the filter's self-cascade.

    Convolves the filter with itself, samples the result at symbol spacing
    around the main tap, and returns the largest off-center magnitude
    relative to the center tap, in dB.  This is the peak-distortion reading
    of the Nyquist ISI-free criterion.
    """
    c = np.convolve(filt.taps, filt.taps)
    center = filt.length - 1
    k_lo = -(center // filt.sps)
    k_hi = (len(c) - 1 - center) // filt.sps
    k = np.arange(k_lo, k_hi + 1)
    s = c[center + k * filt.sps]
    main = abs(s[k == 0][0])
    off = np.abs(s[k != 0])
    if off.size == 0 or off.max() == 0:
        return -np.inf
    return float(20.0 * np.log10(off.max() / main))


def stopband_attenuation_db(filt: FirFilter, guard_factor: float = 1.0) -> float:
    """Worst-case attenuation (positive dB) beyond ``guard_factor`` times the
    pulse's nominal band edge (1+rho)/2 in symbol-rate units.  Requires an
    RRC filter (the band edge comes from its roll-off)."""
    if filt.rho is None:
        raise ValueError("stopband measurement requires an RRC filter with rho set")
    n = max(1 << 16, 8 * filt.length)
    mag = np.abs(np.fft.rfft(filt.taps, n))
    f = np.fft.rfftfreq(n) * filt.sps  # symbol-rate units
    edge = guard_factor * (1.0 + filt.rho) / 2.0
    stop = mag[f > edge]
    return float(-20.0 * np.log10(stop.max() / mag.max()))


def dump_taps(filt: FirFilter, path: str | Path) -> None:
    """Write a plain-text tap file: a header line and one tap per line."""
    if filt.kind == "rrc":
        header = f"# rrc rho={filt.rho!r} sps={filt.sps} L={filt.length}"
    elif filt.kind == "preemph":
        header = f"# preemph gclip={filt.clip_db!r}"
    else:
        header = f"# fir sps={filt.sps} L={filt.length}"
    lines = [header] + [repr(float(t)) for t in filt.taps]
    Path(path).write_text("\n".join(lines) + "\n")


def load_taps(path: str | Path) -> FirFilter:
    """Read a tap file written by :func:`dump_taps`."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{path}: missing tap-file header")
    fields = lines[0].lstrip("#").split()
    if not fields:
        raise ValueError(f"{path}: empty tap-file header")
    kind = fields[0]
    meta = dict(item.split("=", 1) for item in fields[1:] if "=" in item)
    taps = np.array([float(line) for line in lines[1:] if line.strip()])
    if kind == "rrc":
        return FirFilter(taps, sps=int(meta["sps"]), kind="rrc", rho=float(meta["rho"]))
    if kind == "preemph":
        return FirFilter(taps, sps=1, kind="preemph", clip_db=float(meta["gclip"]))
    return FirFilter(taps, sps=int(meta.get("sps", 1)), kind=kind)
