"""Waveform-level simulation of coherent back-to-back links.

Single-carrier and digital-subcarrier transmit/receive chains, Nyquist
pulse-shaping and pre-emphasis filter design, a parametric band-limited
noisy transmitter, ASE loading, and the SNR/AIR/NDR metric stack.

Unit conventions used throughout: frequencies in GHz, sample rates in
GSa/s, symbol rates in GBd, time implicitly in ns.  All frequency axes
are absolute (never normalized), so filter models specified in GHz
compose directly with waveform spectra.
"""

__version__ = "0.1.0"

from .signal_core import ComplexSignal, SpectrumEstimate
from .filters import FirFilter, PreemphasisSpec
from .polyphase import PolyphaseBank
from .modem import ShapedSource, TxPlan, RxResult
from .channel import ChannelConfig, TxResponseModel
from .metrics import RateReport

__all__ = [
    "ComplexSignal",
    "SpectrumEstimate",
    "FirFilter",
    "PreemphasisSpec",
    "PolyphaseBank",
    "ShapedSource",
    "TxPlan",
    "RxResult",
    "ChannelConfig",
    "TxResponseModel",
    "RateReport",
]
