"""Fast scalar multiplication on curves over F_p^2 with an efficient endomorphism.

The degree-2 and degree-3 families, their decomposition lattices, the
two-dimensional multiexponentiation, alternative curve models and desk-scale
order certification.
"""

from .arith import FieldCtx, Fp2Elem, default_delta, fp2_is_square, fp2_sqrt, is_probable_prime
from .curve import OpCounter, Point, WeierstrassCurve, scalar_mul
from .families import EndoParams, FamilyCurve, build_e2, build_e3, build_family, build_gls, endo_params, psi
from .decomp import DecompBasis, Decomposition, babai_round, build_basis, decompose
from .multiexp import mul_with_endo, straus
from .counting import OrderCertificate, bsgs_recover_r, exhaustive_count, j_census, verify_certificate

__version__ = "0.1.0"
