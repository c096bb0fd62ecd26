"""Exception hierarchy shared by the library and the command line tool.

The command line maps these onto process exit codes: configuration
problems exit with 2, validity-domain violations with 3, and failures
of the numerical machinery to converge with 4.
"""


class CasimirMagError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(CasimirMagError):
    """Malformed material file, conflicting keys, or bad CLI input."""


class ValidityError(CasimirMagError):
    """Inputs outside the domain where a formula or method is valid."""


class ConvergenceError(CasimirMagError):
    """A sum or quadrature failed to reach the requested tolerance."""
