"""Exception types shared across the package."""


class NKError(Exception):
    """Base class for all errors raised by this package."""


class ZeroQuaternion(NKError):
    """Quaternion norm below the invertibility threshold."""


class BaseMismatch(NKError):
    """Tangent vectors anchored at different base points."""


class DegeneratePlane(NKError):
    """Spanning pair of a 2-plane is (numerically) linearly dependent."""


class StepOutOfRange(NKError):
    """Finite-difference step outside the supported range."""


class BoundaryTooClose(NKError):
    """Evaluation point too close to the parameter-domain boundary."""


class NotAlmostComplex(NKError):
    """Surface parametrization violates the J phi_u = phi_v orientation gate."""


class DegenerateMetric(NKError):
    """Induced conformal factor not bounded away from zero."""


class PeriodicWithoutFlag(NKError):
    """Closed grid data integrated without declaring periodicity."""


class NotIsothermal(NKError):
    """R^3 grid fails the isothermal (|e_u|=|e_v|, e_u.e_v=0) check."""


class DegenerateImmersion(NKError):
    """R^3 grid has (numerically) rank-deficient differential."""


class ResidualTooLarge(NKError):
    """Input does not satisfy the H-surface equation at tolerance."""


class IntegrationDiverged(NKError):
    """Frame integration paths disagree beyond tolerance."""


class OrientationMismatch(NKError):
    """H-surface data matches the opposite sign convention; swap u and v."""


class BadInput(NKError):
    """Malformed input file or value."""
