"""Exception hierarchy.  The CLI maps these to exit codes."""


class CoxhodgeError(Exception):
    """Base class."""


class InvalidInput(CoxhodgeError, ValueError):
    """Malformed or inconsistent input data."""


class ResourceLimit(CoxhodgeError):
    """An enumeration or degree cap was exceeded."""


class InfiniteGroup(ResourceLimit):
    """The operation needs a finite group but enumeration did not close."""


class OutOfRange(ResourceLimit):
    """A Hecke computation needs elements beyond the enumerated length cap."""


class Unsupported(CoxhodgeError):
    """The operation is not available for this input (e.g. infinite W)."""


class NotSymmetric(CoxhodgeError, ValueError):
    """A Laurent polynomial expected to be bar-symmetric is not."""


class HardLefschetzFailed(CoxhodgeError):
    """An operation presupposing hard Lefschetz was called on a failing gamma."""


class LabelingAmbiguity(CoxhodgeError):
    """A summand matches more than one (or no) candidate label."""


class DecompositionFailure(CoxhodgeError):
    """Idempotent splitting did not reach local endomorphism rings."""
