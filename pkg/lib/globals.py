"""
Global functions and exceptions that are used everywhere in the project.
Please, no global variables here.
For the configuration related things see `config.py`
"""

import sys


def fatal(text, status=1):
    """
    Fatal error function.

    Used by the command line entry point only
    """
    sys.stderr.write("ERROR: %s\n" % text)
    sys.exit(status)


class SolverError(RuntimeError):
    """
    Base class of all errors raised by the solver suite.

    Every error carries a `context` dictionary (cell index, step index,
    sweep axis, ...) that grows while the error propagates outwards;
    see `annotate()`.
    """

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = {key: val for key, val in context.items() if val is not None}

    def annotate(self, **context):
        """
        Add `context` entries that are not known yet and return self,
        so that the error can be re-raised in one line
        """
        for key, val in context.items():
            if val is not None and key not in self.context:
                self.context[key] = val
        return self

    def __str__(self):
        if not self.context:
            return self.message
        details = ", ".join("%s=%s" % (key, val) for key, val in self.context.items())
        return "%s [%s]" % (self.message, details)


class InvalidState(SolverError):
    """Nonpositive density, pressure or internal energy, or a non-finite value"""


class ModeError(SolverError):
    """Operation not defined for the gas mode (full Euler vs isentropic)"""


class VacuumFormation(SolverError):
    """Riemann data whose solution contains vacuum"""


class NoConvergence(SolverError):
    """Iterative root finder failed"""


class SingularJacobian(SolverError):
    """Eigenvalue computation of a flux Jacobian failed"""


class NotADiscontinuity(SolverError):
    """Jump does not satisfy the Rankine-Hugoniot conditions"""


class GeometryMismatch(SolverError):
    """Two grids (or a grid and a reference) do not share their geometry"""


class InsufficientData(SolverError):
    """Too few refinement levels for an order estimate"""


class UnknownProblem(SolverError):
    """Problem name is not in the catalog"""


class NoReference(SolverError):
    """Problem has no exact or analytic reference solution"""


class ConfigError(SolverError):
    """Configuration could not be parsed or validated"""
