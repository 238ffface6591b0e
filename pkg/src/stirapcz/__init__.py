"""Two-qubit Rydberg-blockade CZ gates driven by double-STIRAP pulses.

Simulation of the full five-level two-atom dynamics (closed or with
spontaneous decay and dephasing), quasi-static noise studies, effective
two-level reductions, and robust pulse optimization against two-photon
detuning errors.
"""

__version__ = "0.1.0"

from .dynamics import (DecayConstants, ErrorSample, IntegratorError,
                       IntegratorOptions, ZERO_ERRORS)
from .metrics import GateResult, gate_fidelity_paper, gate_fidelity_phase, \
    gate_result, infidelity_scan
from .noise import (DistributionSpec, MonteCarloResult, NoiseConfig,
                    monte_carlo_fidelity)
from .optimize import (CostSpec, GAOptions, ParetoPoint, eval_cost,
                       ga_minimize, pareto_front)
from .pulses import PulseParams

__all__ = [
    "__version__",
    "PulseParams", "ErrorSample", "DecayConstants", "IntegratorOptions",
    "IntegratorError", "ZERO_ERRORS",
    "GateResult", "gate_result", "gate_fidelity_paper",
    "gate_fidelity_phase", "infidelity_scan",
    "DistributionSpec", "NoiseConfig", "MonteCarloResult",
    "monte_carlo_fidelity",
    "CostSpec", "GAOptions", "ParetoPoint", "eval_cost", "ga_minimize",
    "pareto_front",
]
