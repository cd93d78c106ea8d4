"""Exception hierarchy shared by every module."""


class StableVoteError(Exception):
    """Base class for all errors raised by this package."""


class InvalidRule(StableVoteError, ValueError):
    """A constructor was given data that does not describe a voting rule."""


class EmptyFamily(InvalidRule):
    pass


class NotAntichain(InvalidRule):
    def __init__(self, smaller, larger):
        self.smaller = smaller
        self.larger = larger
        super().__init__(
            f"not an antichain: {sorted(smaller)} is contained in {sorted(larger)}"
        )


class OutOfRange(InvalidRule):
    pass


class QuotaUnreachable(InvalidRule):
    pass


class InfeasibleQuota(InvalidRule):
    pass


class MismatchedPlayerSets(InvalidRule):
    pass


class ScaleError(StableVoteError):
    """The request is well formed but exceeds what this operation enumerates."""


class TooLarge(ScaleError):
    pass


class TooLargeForEnumeration(TooLarge):
    pass


class UnsupportedAtScale(TooLarge):
    pass


class EmptyCoalition(StableVoteError, ValueError):
    pass


class UnknownIndex(StableVoteError, ValueError):
    pass


class AxiomPreconditionFailed(StableVoteError):
    def __init__(self, report):
        self.report = report
        failed = ", ".join(r.axiom for r in report.results if not r.holds)
        super().__init__(f"profile {report.index} violates: {failed}")


class EpsilonNotSmallEnough(StableVoteError):
    pass


class GameSyntaxError(StableVoteError, ValueError):
    def __init__(self, text, pos, expected):
        self.text = text
        self.pos = pos
        self.expected = expected
        super().__init__(f"at position {pos}: expected {expected} in {text!r}")


class MalformedDataset(StableVoteError, ValueError):
    pass
