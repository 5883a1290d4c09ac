"""
Domain errors raised by the simulation apps.

Field-level configuration problems are reported with
``rest_framework.exceptions.ValidationError``; everything here is a
numerical or structural failure that happens after validation.
"""


class SwingupError(Exception):
    """Base class for every simulation failure."""

    kind = 'error'

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def as_dict(self):
        return {'error': self.kind, 'message': self.message, 'details': self.details}


class ShapeError(SwingupError):
    kind = 'shape_error'


class DomainError(SwingupError):
    kind = 'domain_error'


class ConfigurationError(SwingupError):
    kind = 'configuration_error'


class IntegrationError(SwingupError):
    """The ODE solver gave up; ``time`` is where it stopped."""

    kind = 'integration_error'

    def __init__(self, message, time=None, **details):
        super().__init__(message, time=time, **details)
        self.time = time


class InvariantViolation(SwingupError):
    """A density matrix left its trace, Hermiticity or positivity tolerance."""

    kind = 'invariant_violation'

    def __init__(self, message, metric=None, value=None, time=None, **details):
        super().__init__(message, metric=metric, value=value, time=time, **details)
        self.metric = metric
        self.value = value
        self.time = time


class SweepFailure(SwingupError):
    """Every point of a sweep or ensemble failed."""

    kind = 'sweep_failure'

    def __init__(self, message, first_failure=None, **details):
        super().__init__(message, first_failure=first_failure, **details)
        self.first_failure = first_failure


# Failures that map to the numerical-failure exit status
NUMERICAL_ERRORS = (IntegrationError, InvariantViolation, SweepFailure, DomainError, ShapeError)
