"""Continuous-phase MTSFM waveform design: phase-code fitting, metrics and
constrained sidelobe optimization."""

from ._core import (
    DegenerateMainlobe,
    MtsfmParams,
    ParseError,
    PhaseCode,
    Waveform,
    acf,
    barker_code,
    evaluate,
    fit_fourier,
    generate_msequence,
    load_phase_code,
    min_harmonics,
    optimize,
    primitive_taps,
    rms_bandwidth,
    spectrum,
    synthesize_mtsfm,
    synthesize_pc,
)

__all__ = [
    "DegenerateMainlobe",
    "MtsfmParams",
    "ParseError",
    "PhaseCode",
    "Waveform",
    "acf",
    "barker_code",
    "evaluate",
    "fit_fourier",
    "generate_msequence",
    "load_phase_code",
    "min_harmonics",
    "optimize",
    "primitive_taps",
    "rms_bandwidth",
    "spectrum",
    "synthesize_mtsfm",
    "synthesize_pc",
]
