"""Toeplitz-determinant coefficient bounds for the q-derivative class R(q).

Build members of R(q) from Caratheodory data, evaluate symmetric Toeplitz
determinants of their Taylor coefficients, and check closed-form bounds
against an independent numerical maximizer.
"""

__version__ = "0.1.0"

from .bounds import TheoremId, bound, proof_bound_t23  # noqa: E402
from .caratheodory import Lemma2Triple, MoebiusMix, check_lemma1, lemma2_coefficients  # noqa: E402
from .errors import InvalidArgument, NoKnownWitness, OutOfDomain  # noqa: E402
from .qcore import PowerSeries, QParam, bracket  # noqa: E402
from .rqclass import RqFunction, from_p_coefficients, membership_check  # noqa: E402
from .search import SearchConfig, VerificationReport, maximize, sharpness_witness  # noqa: E402
from .toeplitz import ToeplitzSpec, toeplitz_det  # noqa: E402

__all__ = [
    "InvalidArgument", "Lemma2Triple", "MoebiusMix", "NoKnownWitness", "OutOfDomain",
    "PowerSeries", "QParam", "RqFunction", "SearchConfig", "TheoremId", "ToeplitzSpec",
    "VerificationReport", "bound", "bracket", "check_lemma1", "from_p_coefficients",
    "lemma2_coefficients", "maximize", "membership_check", "proof_bound_t23",
    "sharpness_witness", "toeplitz_det",
]
