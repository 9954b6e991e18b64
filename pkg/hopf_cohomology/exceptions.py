class HopfCohomologyError(Exception):
    """Base class of every error raised by hopf-cohomology."""

    exit_code = 4


class DivisionByZero(HopfCohomologyError, ZeroDivisionError):
    pass


class ContextMismatch(HopfCohomologyError):
    """Two scalars (or specs) from different coefficient fields were combined."""


class ZeroInput(HopfCohomologyError):
    pass


class OutOfRange(HopfCohomologyError):
    pass


class InfiniteSlice(HopfCohomologyError):
    """A tensor slice was requested without a degree bound on an infinite-dimensional spec."""

    exit_code = 2


class NotGrouplike(HopfCohomologyError):
    pass


class NotGraded(HopfCohomologyError):
    pass


class NotPointed(HopfCohomologyError):
    pass


class SpecMismatch(HopfCohomologyError):
    """An operation needs structure (shared spec, group law, algebra table) that is absent."""


class ConfigError(HopfCohomologyError):
    exit_code = 2


class BuildError(HopfCohomologyError):
    exit_code = 3


class ParamViolation(BuildError):
    def __init__(self, tag, message=""):
        self.tag = tag
        super().__init__(f"parameter constraint violated [{tag}]" + (f": {message}" if message else ""))


class TruncationOverflow(BuildError):
    pass


class CheckFailure(HopfCohomologyError):
    def __init__(self, check, witness=""):
        self.check = check
        self.witness = witness
        super().__init__(f"check {check} failed" + (f": {witness}" if witness else ""))


class GoldenMismatch(HopfCohomologyError):
    exit_code = 5

    def __init__(self, paths):
        self.paths = list(paths)
        super().__init__("golden mismatch at " + ", ".join(self.paths[:10]) + ("..." if len(self.paths) > 10 else ""))
