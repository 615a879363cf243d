"""Nevanlinna-Pick interpolation and interpolating-sequence diagnostics on the bidisk."""

from bidisk_pick._core import (
    BidiskCertificateError,
    BidiskDomainError,
    BidiskError,
    Interpolant,
    gleason,
    gram_report,
    one_variable_pick_constant,
    sampled_interpolation_constant,
    separation,
    solve_pick,
    verify_pick,
)

__all__ = [
    "BidiskCertificateError",
    "BidiskDomainError",
    "BidiskError",
    "Interpolant",
    "gleason",
    "gram_report",
    "one_variable_pick_constant",
    "sampled_interpolation_constant",
    "separation",
    "solve_pick",
    "verify_pick",
]
