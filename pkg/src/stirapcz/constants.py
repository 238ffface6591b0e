"""Physical constants and published pulse parameter sets.

Unit conventions used throughout the package: time in microseconds,
angular frequencies in rad/us (a quantity quoted as "x MHz" enters as
2*pi*x), lengths in micrometers unless a name says otherwise.
"""

import numpy as np

TWO_PI = 2.0 * np.pi

# drive and interaction strengths
OMEGA_P_MAX = TWO_PI * 150.0   # rad/us, pump peak amplitude
OMEGA_C_MAX = TWO_PI * 150.0   # rad/us, Stokes peak amplitude
DELTA0 = TWO_PI * 2000.0       # rad/us, intermediate-state detuning
BLOCKADE = TWO_PI * 2000.0     # rad/us, Rydberg interaction shift on |rr>

# level order per atom; the qubit occupies the leading 2x2 block
LEVELS = ("0", "1", "p", "r", "d")
L0, L1, LP, LR, LD = 0, 1, 2, 3, 4
N_LEVELS = 5
DIM2 = N_LEVELS * N_LEVELS

# spontaneous decay rates (1/us) and branching ratios
GAMMA_R = 1.0 / 375.0
GAMMA_P = 1.0 / 0.118
BRANCH_R = {L0: 0.059, L1: 0.055, LD: 0.886}
BRANCH_P = {L0: 0.1354, L1: 0.2504, LD: 0.6142}

# thermal-motion and laser-geometry constants
KB = 1.380649e-23              # J/K
MASS_RB87 = 1.44316e-25        # kg
LAMBDA_P_UM = 0.420            # um, pump wavelength
LAMBDA_C_UM = 1.013            # um, Stokes wavelength
K_P = TWO_PI / LAMBDA_P_UM     # rad/um
K_C = TWO_PI / LAMBDA_C_UM     # rad/um
# counterpropagating beams: effective two-photon wavevector
K_EFF = TWO_PI * (1.0 / LAMBDA_P_UM - 1.0 / LAMBDA_C_UM)  # rad/um

# Gaussian beam geometry (um)
WAIST_P = 7.8
WAIST_C = 8.3
RAYLEIGH_P = 455.08
RAYLEIGH_C = 213.65

# trap frequencies (rad/us) and interaction-distance constants
TRAP_FREQS = (TWO_PI * 0.147, TWO_PI * 0.117, TWO_PI * 0.035)
C6 = TWO_PI * 862.69e3         # rad/us * um^6 (862.69 GHz um^6)
R0 = 2.75                      # um, interatomic distance

# published optimized (t1, t2, omega) triples in us.  The published
# time-optimal triple (0.4444, 0.9027, 0.1587) is internally inconsistent:
# its quoted duration 2.3259 us disagrees with Tg = 2(t2 + 3w) and it does
# not produce a working gate in this model.  The "to" entry below is
# re-derived by local optimization and reproduces the quoted duration,
# ideal fidelity, and accumulated phases; the raw published triple stays
# available as "to_published" for reference.
PRESETS = {
    "to": (0.4456, 0.6876, 0.1584),
    "to_published": (0.4444, 0.9027, 0.1587),
    "der": (0.6664, 0.9260, 0.1666),
    "der_i_gauss": (0.6508, 0.9053, 0.1627),
    "der_i_uniform": (0.6632, 0.9239, 0.1658),
}
