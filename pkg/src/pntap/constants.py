# src/pntap/constants.py
from fractions import Fraction

SCHEMA_VERSION = 1

# Theta exponents of the main theorem
THETA_EXCEPTIONAL = Fraction(71, 75)
THETA_NO_EXCEPTIONAL = Fraction(7, 12)

# Log-free zero density exponents
DENSITY_EXP_HUXLEY = 12 / 5
DENSITY_EXP_REPULSIVE = 75 / 4

# Constant-chain values from the constraint system
ALPHA_CHAIN = 26.354133491747653
A_CHAIN = 1.239475274727766
B_CHAIN = 1e-16
OBJECTIVE_AT_CHAIN = 1110.817286401682
OBJECTIVE_INFIMUM = 1110.817286401673
CONTRACTION_SLACK = 1e-14
XI_CHAIN = 1 + 1e-7

# Final bound exponent: 112.2056...·max{1/73.4, phi}
FINAL_EXPONENT_COEFF = 112.20563265056215
PHI_FLOOR = 1 / 73.4
PHI_HYBRID_WEYL = 1 / 6 + 1e-7
PHI_CONVEXITY = 0.5
CHAIN_BASE = 1.250015191

# Mollifier decay
JK_RATIO = 1.26
A0_PUBLISHED = 0.2919
A1_PUBLISHED = 1.729e18

# Power sums
POWER_SUM_LEAD = 1.007

# Exceptional zero search window: beta >= 1 - 1/(EXC_WINDOW log q)
EXC_WINDOW = 50.0

# Default effective constants (never published as numbers)
C_VK_DEFAULT = 0.05
C_IW = 1 / (4 * 10**4)
C_DH_DEFAULT = 0.1
C_MAIN_DEFAULT = 0.05
B_SIEGEL_DEFAULT = 0.01

MAX_MODULUS = 10**9
