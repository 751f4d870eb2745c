"""Space-time storage codes: exact code construction, determinant checks and
Monte Carlo simulation of wireless repair transmissions."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0.1.0"

from .algebra import CosetLabel, GaussInt, GoldenElem, coset_decode, coset_encode, embed, golden_mul, relative_norm, tau
from .channel import ChannelRealization, FadingModel, draw_channel, noise_std_from_snr, transmit
from .decode import DecodeResult, MLDetector, ml_decode
from .modulation import GrayQAMModulator, delift_golden, demap, gray4, gray16, lift_golden
from .sim import SimConfig, SweepResult, TrialRecord, bits_per_channel_use, run_sweep, run_trial
from .stcode import Codebook, Codeword, Scheme, SpaceTimeEncoder, cnvd_check, enumerate_codebook
from .storage import Fragment, StorageSystem, encode_storage, reconstruct, repair

__all__ = [
    "CosetLabel", "GaussInt", "GoldenElem", "coset_decode", "coset_encode", "embed",
    "golden_mul", "relative_norm", "tau",
    "ChannelRealization", "FadingModel", "draw_channel", "noise_std_from_snr", "transmit",
    "DecodeResult", "MLDetector", "ml_decode",
    "GrayQAMModulator", "delift_golden", "demap", "gray4", "gray16", "lift_golden",
    "SimConfig", "SweepResult", "TrialRecord", "bits_per_channel_use", "run_sweep", "run_trial",
    "Codebook", "Codeword", "Scheme", "SpaceTimeEncoder", "cnvd_check", "enumerate_codebook",
    "Fragment", "StorageSystem", "encode_storage", "reconstruct", "repair",
]
