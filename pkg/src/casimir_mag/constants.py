"""Physical constants (SI, 2018 CODATA) and cached zeta values.

All lengths are metres, temperatures kelvin, energies joules. Angular
frequencies are rad/s throughout the package.
"""

HBAR = 1.054571817e-34
"""Reduced Planck constant, J s."""

C_LIGHT = 299792458.0
"""Speed of light in vacuum, m/s."""

K_B = 1.380649e-23
"""Boltzmann constant, J/K."""

ZETA3 = 1.2020569031595942854
"""Riemann zeta(3) (Apery's constant)."""

ZETA5 = 1.0369277551433699263
"""Riemann zeta(5)."""

ZETA_PRIME_3 = -0.19812624288563685333
"""Derivative of the Riemann zeta function at s = 3."""
