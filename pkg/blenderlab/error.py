class Error(Exception):
    pass


class ParameterRequiredError(Error):
    def __init__(self, params):
        self.params = params

    def __str__(self):
        return "%s is mandatory, but received empty." % (", ".join(self.params))


class ParameterValueError(Error):
    def __init__(self, params):
        self.params = params

    def __str__(self):
        return "the value %s is invalid." % (", ".join(str(p) for p in self.params))


class ParameterTypeError(Error):
    def __init__(self, params):
        self.params = params

    def __str__(self):
        return f"{self.params[0]} data type has to be {self.params[1]}"


class ParameterArgumentError(Error):
    def __init__(self, error_message):
        self.error_message = error_message

    def __str__(self):
        return self.error_message


class DomainError(Error):
    """Raised when a computation on a well-formed input cannot be carried out."""


class UnitModulus(DomainError):
    def __init__(self, multiplier, tolerance):
        self.multiplier = multiplier
        self.tolerance = tolerance

    def __str__(self):
        return "multiplier %s has modulus within %g of 1." % (self.multiplier, self.tolerance)


class IndexMismatch(DomainError):
    def __init__(self, expected, found):
        # u-index declared by the caller
        self.expected = expected
        # number of multipliers with modulus above one
        self.found = found

    def __str__(self):
        return f"u-index {self.expected} declared, {self.found} unstable multipliers found"


class NotSimple(DomainError):
    def __init__(self, m_s, n_u):
        self.m_s = m_s
        self.n_u = n_u

    def __str__(self):
        return f"saddle of type ({self.m_s},{self.n_u}) is not simple"


class JacobianNotExpanding(DomainError):
    def __init__(self, jacobian):
        self.jacobian = jacobian

    def __str__(self):
        return "leading Jacobian %.17g is not greater than one" % self.jacobian


class NoBifurcation(DomainError):
    def __init__(self, error_message, diagnostics=None):
        self.error_message = error_message
        self.diagnostics = diagnostics or {}

    def __str__(self):
        if not self.diagnostics:
            return self.error_message
        details = ", ".join(f"{k}={v}" for k, v in sorted(self.diagnostics.items()))
        return f"{self.error_message} ({details})"


class LeftNeighborhood(DomainError):
    def __init__(self, iterate, point, region="W"):
        # index of the first iterate outside the region
        self.iterate = iterate
        self.point = point
        self.region = region

    def __str__(self):
        return f"iterate {self.iterate} left {self.region} at {list(self.point)}"


class ImplicitSolveFailure(DomainError):
    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual

    def __str__(self):
        return "implicit transition solve stalled after %d iterations, residual %.3e" % (
            self.iterations,
            self.residual,
        )


class EmptyStrip(DomainError):
    def __init__(self, k, k0=None):
        self.k = k
        self.k0 = k0

    def __str__(self):
        if self.k0 is None:
            return f"strip for k={self.k} is empty"
        return f"strip for k={self.k} is empty (first nonempty k is {self.k0})"


class ConeViolation(DomainError):
    def __init__(self, slope, bound):
        self.slope = slope
        self.bound = bound

    def __str__(self):
        return "tangent frame slope %.6g exceeds the cone bound %.6g" % (self.slope, self.bound)


class DegenerateDisk(DomainError):
    def __init__(self, error_message):
        self.error_message = error_message

    def __str__(self):
        return self.error_message


class WrongCodimension(DomainError):
    def __init__(self, n):
        self.n = n

    def __str__(self):
        return f"operation needs u-index one, model has n={self.n}"


class QuantifierViolation(DomainError):
    def __init__(self, error_message, margin=None):
        self.error_message = error_message
        self.margin = margin

    def __str__(self):
        return self.error_message


class NotFound(DomainError):
    def __init__(self, rounds, diagnostics=None):
        self.rounds = rounds
        self.diagnostics = diagnostics or {}

    def __str__(self):
        return f"no boundary crossing after {self.rounds} rounds: {self.diagnostics}"


class CoverageGap(DomainError):
    def __init__(self, step, central):
        # recursion depth at which no branch applied
        self.step = step
        self.central = central

    def __str__(self):
        return f"no branch image contains central coordinate {self.central} at step {self.step}"


class NotDominated(DomainError):
    def __init__(self, error_message):
        self.error_message = error_message

    def __str__(self):
        return self.error_message


class RateViolation(DomainError):
    def __init__(self, gamma, bound):
        self.gamma = gamma
        self.bound = bound

    def __str__(self):
        return f"contraction rate {self.gamma} is not below the repeller rate {self.bound}"


class LaminationGap(DomainError):
    def __init__(self, gap, resolution):
        self.gap = gap
        self.resolution = resolution

    def __str__(self):
        return "unstable lamination leaves a gap of %.6g at resolution %g" % (self.gap, self.resolution)


class DegenerateFoliation(DomainError):
    def __init__(self, parameter):
        self.parameter = parameter

    def __str__(self):
        return f"foliation gradient vanishes on the curve near t={self.parameter}"


class Reducible(DomainError):
    def __init__(self, reason):
        self.reason = reason

    def __str__(self):
        return f"transition matrix rejected: {self.reason}"


class NotContracting(DomainError):
    def __init__(self, radius, where="block"):
        self.radius = radius
        self.where = where

    def __str__(self):
        return "%s has spectral radius %.6g, not below one" % (self.where, self.radius)
