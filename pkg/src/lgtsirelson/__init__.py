"""Leggett-Garg audits of a normalized two-exponential qubit unitary family.

The family U_p(t) is generated by a commuting, time-dependent Hamiltonian
H_p(t) = E_p(t) sigma_gamma. K3 stays within the temporal Tsirelson bound
whenever the three Leggett-Garg experiments share one consistent evolution.
"""

from .family import DegenerateParametersError, FamilyParams, InvalidParametersError, u_p, u_tilde
from .dynamics import energy, gamma, hamiltonian, propagator_closed, propagator_stepped, spectral, tau
from .leggett_garg import K3Record, MaximizerResult, ScenarioKind, k3, k3_max_over_T

__version__ = "0.1.0"
