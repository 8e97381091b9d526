"""Exceptions raised by packbound.

Every error derives from :class:`PackBoundError`. Where it makes sense the
exception also derives from the closest builtin so that callers who only care
about, e.g., ``ValueError`` keep working.

"""


class PackBoundError(Exception):
    pass


class InvalidSpec(PackBoundError, ValueError):
    """Raised when a manifold family / dimension pair or a parameter is not
    admissible.

    """
    def __init__(self, message, family=None, k=None, n=None):
        self.family = family
        self.k = k
        self.n = n
        super(InvalidSpec, self).__init__(message)


class DimensionMismatch(PackBoundError, ValueError):
    """Raised when two operands do not live in the same (n, k)."""
    def __init__(self, left_shape, right_shape):
        self.left_shape = tuple(left_shape)
        self.right_shape = tuple(right_shape)
        super(DimensionMismatch, self).__init__(
            'shape mismatch: {0.left_shape} vs {0.right_shape}'.format(self)
        )


class DegenerateInput(PackBoundError, ValueError):
    pass


class NotUnitary(PackBoundError, ValueError):
    """Raised when a matrix fails the unitarity check of the matrix logarithm."""
    def __init__(self, residual, tol):
        self.residual = residual
        self.tol = tol
        super(NotUnitary, self).__init__(
            'matrix is not unitary: |v^H v - I| = {0.residual:.3e} > {0.tol:.1e}'.format(self)
        )


class DomainError(PackBoundError, ValueError):
    pass


class NotConverged(PackBoundError, RuntimeError):
    """Raised when an iterative procedure exhausts its budget."""
    def __init__(self, what, iterations, residual=None):
        self.what = what
        self.iterations = iterations
        self.residual = residual
        msg = '{0} did not converge after {1} iterations'.format(what, iterations)
        if residual is not None:
            msg += ' (residual {0:.3e})'.format(residual)
        super(NotConverged, self).__init__(msg)


class Divergent(PackBoundError, ArithmeticError):
    """Raised when the kappa series has a geometric base >= 1."""
    def __init__(self, delta, base):
        self.delta = delta
        self.base = base
        super(Divergent, self).__init__(
            'kappa series diverges at delta={0.delta:g} (base {0.base:.6f} >= 1)'.format(self)
        )


class DecompositionResidual(PackBoundError, ArithmeticError):
    def __init__(self, residual, tol):
        self.residual = residual
        self.tol = tol
        super(DecompositionResidual, self).__init__(
            'phase decomposition residual {0.residual:.3e} exceeds {0.tol:.1e}'.format(self)
        )


class TooFewPoints(PackBoundError, ValueError):
    def __init__(self, size):
        self.size = size
        super(TooFewPoints, self).__init__(
            'minimum distance needs at least 2 points, codebook has {0.size}'.format(self)
        )
