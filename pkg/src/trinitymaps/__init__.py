"""Regular maps with trinity symmetry (self-dual and self-Petrie-dual) of odd valency."""
from .certificate import construct, to_certificate, verify
from .field import FieldCtx, element_order, find_zeta, legendre, sqrt_mod, xi_from_zeta
from .flagmap import RegularMap, dual, invariants, is_isomorphic_pointed, petrie, trinity_check
from .intpoly import IntPoly, cyclotomic, real_cyclotomic, resultant
from .norm import admissible_primes, factorize, norm_g, norm_mod9_check, unit_check
from .plan import plan

__version__ = "0.1.0"
