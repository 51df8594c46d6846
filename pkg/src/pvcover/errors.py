"""Exception hierarchy shared across the package."""


class PvcoverError(Exception):
    """Base class for every error this package raises on purpose."""


class InputError(PvcoverError):
    """Malformed or invariant-violating input: files, configs, instances."""


class SolverError(PvcoverError):
    """Numerical or structural failure inside a solver component."""


class LpIterationLimit(SolverError):
    """Simplex hit its iteration cap; distinct from an infeasibility verdict."""


class CutLimitExceeded(SolverError):
    """Cutting-plane loop hit the cut cap without reaching a clean point."""


class RoundingFailure(PvcoverError):
    """Randomized rounding produced no feasible set within the restart budget."""
