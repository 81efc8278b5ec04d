"""Polyphase decomposition of interpolating FIR filters and its complexity accounting."""

from dataclasses import dataclass

import numpy as np

from .filters import FirFilter
from .signal_core import ComplexSignal


@dataclass(frozen=True)
class PolyphaseBank:
    """2N-branch decomposition of an interpolation filter.

    Branch ``n`` holds the taps at source indices ``n, n + factor, ...``;
    the tap array is zero-padded at the tail so all branches share the same
    length.  Interleaving the branches reconstructs the padded source taps
    exactly.
    """

    branches: np.ndarray  # shape (factor, ceil(L / factor))
    factor: int
    source_length: int

    def __post_init__(self):
        br = np.asarray(self.branches, dtype=np.float64)
        if br.ndim != 2 or br.shape[0] != self.factor:
            raise ValueError("branches must be a (factor, branch_len) array")
        br.flags.writeable = False
        object.__setattr__(self, "branches", br)

    @property
    def branch_length(self) -> int:
        return self.branches.shape[1]

    def interleave(self) -> np.ndarray:
        """Reconstruct the original tap sequence (padding removed)."""
        return self.branches.T.reshape(-1)[: self.source_length]

    def nonzero_taps(self) -> int:
        """Tap count excluding the zero padding: the multiplications actually
        performed per input symbol."""
        return self.source_length


def decompose(filt: FirFilter, factor: int) -> PolyphaseBank:
    """Split filter taps by phase: branch n gets taps n, n+factor, ..."""
    if factor < 1 or int(factor) != factor:
        raise ValueError(f"factor must be a positive integer, got {factor}")
    factor = int(factor)
    length = filt.length
    branch_len = -(-length // factor)
    padded = np.zeros(branch_len * factor)
    padded[:length] = filt.taps
    branches = padded.reshape(branch_len, factor).T
    return PolyphaseBank(branches, factor=factor, source_length=length)


def interpolate(
    bank: PolyphaseBank,
    symbols: np.ndarray,
    symbol_rate: float = 1.0,
    instrument: bool = False,
) -> ComplexSignal | tuple[ComplexSignal, int]:
    """Interpolate symbols by ``bank.factor`` through the branch filters.

    Equivalent (within float rounding) to zero-insertion upsampling followed
    by the full-length filter, trimmed by the group delay so the output has
    exactly ``factor * len(symbols)`` samples at ``factor * symbol_rate``.

    With ``instrument=True`` the branch filtering runs through a counting
    path and the total number of complex multiply-accumulates against
    nonzero taps is returned alongside the signal; per input symbol it
    equals ``count_multiplications("polyphase", L, N)``.
    """
    symbols = np.asarray(symbols, dtype=np.complex128)
    if symbols.ndim != 1 or symbols.size == 0:
        raise ValueError("symbols must be a non-empty 1-D sequence")
    factor = bank.factor
    n_sym = len(symbols)
    branch_len = bank.branch_length
    length = bank.source_length

    mac_count = 0
    full = np.zeros(factor * (n_sym + branch_len - 1), dtype=np.complex128)
    for n in range(factor):
        taps = bank.branches[n]
        if instrument:
            nz = np.nonzero(taps)[0]
            out = np.zeros(n_sym + branch_len - 1, dtype=np.complex128)
            for j in nz:
                out[j : j + n_sym] += taps[j] * symbols
                mac_count += n_sym
            full[n::factor] = out
        else:
            full[n::factor] = np.convolve(symbols, taps)

    delay = (length - 1) // 2
    need = delay + factor * n_sym
    if len(full) < need:
        full = np.pad(full, (0, need - len(full)))
    out_sig = ComplexSignal(full[delay : delay + factor * n_sym], factor * symbol_rate)
    if instrument:
        return out_sig, mac_count
    return out_sig


def count_multiplications(structure: str, length: int, n_subcarriers: int) -> int:
    """Complex multiplications per symbol period per polarization for the
    pulse-shaping stage: 2LN for the direct form, L for the polyphase form."""
    if length < 1 or n_subcarriers < 1:
        raise ValueError("length and subcarrier count must be >= 1")
    if structure == "naive":
        return 2 * length * n_subcarriers
    if structure == "polyphase":
        return length
    raise ValueError(f"unknown structure {structure!r} (want 'naive' or 'polyphase')")
