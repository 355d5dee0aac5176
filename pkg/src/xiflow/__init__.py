"""Symbolic and numeric toolkit for sign certificates of higher time
derivatives of Tsallis entropy along the one-dimensional heat flow."""

from .certify import CertStatus, Certificate, certify
from .flow import Regime, derive_s0, faadibruno_s0, sign_convention
from .heatsim import Mixture, derivative_signs, entropy
from .ibp import enumerate_partitions, generators, gram_basis, classify_monomials
from .xicalc import XiMonomial, XiPoly, dt, dx

__all__ = [
    "CertStatus", "Certificate", "certify", "Regime", "derive_s0", "faadibruno_s0",
    "sign_convention", "Mixture", "derivative_signs", "entropy",
    "enumerate_partitions", "generators", "gram_basis", "classify_monomials",
    "XiMonomial", "XiPoly", "dt", "dx",
]

__version__ = "0.1.0"
