"""Exception hierarchy.

Input problems derive from ``InputError`` (the CLI maps them to exit 2);
``BudgetExceeded`` and ``CapExceeded`` signal resource limits (exit 3).
``InternalInconsistency`` and ``DigitGapFailure`` mean a bug, never a result.
"""


class AchievementError(Exception):
    pass


class InputError(AchievementError, ValueError):
    pass


class NonPositiveTerm(InputError):
    pass


class RatioOutOfRange(InputError):
    pass


class NonIntegralScale(InputError):
    pass


class NoPositiveRun(AchievementError):
    pass


class BudgetExceeded(AchievementError):
    def __init__(self, depth, estimate, budget):
        super().__init__(
            f"depth {depth} needs about {estimate} points, budget is {budget}"
        )
        self.depth = depth
        self.estimate = estimate
        self.budget = budget


class CapExceeded(AchievementError):
    pass


class InternalInconsistency(AchievementError):
    pass


class DigitGapFailure(AchievementError):
    def __init__(self, point, reason):
        super().__init__(f"no digit representation for {point}: {reason}")
        self.point = point
