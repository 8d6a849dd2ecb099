from .core import (
    FourierCoefficients,
    GapParameter,
    SymbolPiece,
    SymbolSpec,
    TrigPolynomial,
    WCoeff,
    arc_gap_moments,
    ds_fourier_coeff,
    ds_fourier_coeffs,
    fourier_coeff,
    fourier_coeffs,
    integrate_against_symbol,
    symbol_ds_eval,
    symbol_eval,
    symbol_pieces,
)
