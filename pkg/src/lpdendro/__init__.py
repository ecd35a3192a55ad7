"""LP decoding of LDPC codes, the dendro degree-3 transform, pseudo-codeword
search, effective-distance spectra and Monte Carlo frame-error rates."""

__version__ = "0.1.0"

from .codes import (
    ParityCheckMatrix,
    enumerate_codewords,
    map_decode_bruteforce,
    parse_alist,
    syndrome,
    write_alist,
)
from .dendro import DendroCode, dendro_transform, lift_codeword, project
from .channel import Snr, llr_from_output, sample_awgn
from .lpdecode import Kind, LpDecoder, PseudoCodeword, build_lp, lp_decode, solve_lp
from .bpdecode import bp_decode
from .search import (
    InstantonResult,
    SearchConfig,
    effective_distance,
    median_noise,
    pseudo_codeword_search,
    random_initial_noise,
)
from .landscape import SpectrumRecord, build_spectrum, spectrum_gap
from .montecarlo import FerPoint, asymptote_estimate, estimate_fer

__all__ = [
    "ParityCheckMatrix", "parse_alist", "write_alist", "syndrome", "enumerate_codewords",
    "map_decode_bruteforce", "DendroCode", "dendro_transform", "lift_codeword", "project",
    "Snr", "llr_from_output", "sample_awgn", "Kind", "LpDecoder", "PseudoCodeword",
    "build_lp", "solve_lp", "lp_decode", "bp_decode", "InstantonResult", "SearchConfig",
    "effective_distance", "median_noise", "pseudo_codeword_search", "random_initial_noise",
    "SpectrumRecord", "build_spectrum", "spectrum_gap", "FerPoint", "estimate_fer",
    "asymptote_estimate",
]
