"""dzl: a numerical laboratory for zeros of Dirichlet polynomials of
k-bounded multiplicative functions.

Modules: arith (coefficient tables), bdelta (the twisting phase function),
dirpoly (polynomial evaluation and series surrogates), zeros (winding
numbers, certification, the explicit model M), quadrature (Perron, Hankel,
segment and short-interval checks), lab (experiment driver), cli.
"""

from .arith import (AnalyticProfile, MultiplicativeFunction, VonMangoldtTable,
                    dedekind_quadratic, make_dk, make_moebius, make_ones,
                    twist, verify_k_bound, vonmangoldt_transform)
from .bdelta import BDelta, verify_fourier_properties
from .dirpoly import DirichletPolynomial, GridSpec, SeriesSurrogate
from .zeros import (Rectangle, ZeroRecord, WindingResult, certify_zero_free,
                    delta_for_c, find_zeros, montgomery_rectangle,
                    refine_zero, rightmost_zero_scan, threshold,
                    winding_number)

__version__ = "0.1.0"
