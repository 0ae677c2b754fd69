"""
Uniqueness

Certificate polynomials that show when finitely many surface tensors determine
a polytope, and counterexample pairs showing the rank cannot be lowered.
"""

from core.uniqueness.certificate import (
    CertificatePolynomial,
    build_certificate,
    determinacy_degree,
    sobol_sphere,
)
from core.uniqueness.counterexamples import (
    agreement_rank,
    agreement_table,
    cone_lift,
    counterexample_pair,
    disc_measure,
    polygon_disc_pair,
)

__all__ = [
    'CertificatePolynomial',
    'agreement_rank',
    'agreement_table',
    'build_certificate',
    'cone_lift',
    'counterexample_pair',
    'determinacy_degree',
    'disc_measure',
    'polygon_disc_pair',
    'sobol_sphere',
]
