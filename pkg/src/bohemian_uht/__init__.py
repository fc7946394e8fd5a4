"""Bohemian upper Hessenberg Toeplitz matrices: exact characteristic
polynomials, maximal heights, golden-ratio sequences and eigenvalue densities."""

from .core import (
    DomainError,
    HessenbergSpec,
    IntPolynomial,
    MaxHeightRecord,
    SizeError,
    ToeplitzSpec,
    height,
    poly_add,
    poly_shift_mul,
)
from .charpoly import (
    charpoly_coeffs,
    charpoly_hessenberg,
    charpoly_toeplitz,
    closed_form_maxheight,
    leibniz_oracle,
)
from .maxheight import (
    brute_force_max_height_census,
    count_max_height,
    fibword_a,
    floor_div_golden,
    growth_ratios,
    max_height_pattern,
    mu_formula,
    tau_mu_stream,
)
from .combinatorics import (
    CompositionPolynomial,
    T_closed_form,
    compositions,
    genfun_coeffs,
    symbolic_p_n0,
)

__version__ = "0.1.0"
