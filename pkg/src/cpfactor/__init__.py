"""Conjugate factorizations of finite groups: exact lengths, witnesses, constructions."""

from .factorize import (INFINITY, FactorizationWitness, gamma_cp_exact, gamma_cp_oracle,
                        verify_witness)
from .specs import build_group

__version__ = "0.1.0"

__all__ = ["INFINITY", "FactorizationWitness", "gamma_cp_exact", "gamma_cp_oracle",
           "verify_witness", "build_group", "__version__"]
