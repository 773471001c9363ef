"""Exception types shared across the package."""


class UsageError(ValueError):
    """A caller-supplied parameter is outside its documented domain."""


class NumericalError(RuntimeError):
    """A numerical procedure failed in a way no parameter tweak can hide.

    Raised, for example, when a spectral embedding turns out not to be
    positive semi-definite and no exact fallback is feasible at the
    requested size.
    """


class MissingSceneryError(LookupError):
    """A walk visited a site for which the supplied scenery has no value."""
