"""Exception types shared across the toolkit."""


class InvalidInputError(ValueError):
    """Malformed document or argument outside an operation's contract."""


class NotACycleError(InvalidInputError):
    """A chain that was required to be a cycle has nonzero boundary."""


class NotASurfaceError(InvalidInputError):
    """A closed gluing state that was required to be a triangulated surface is not one."""


class BudgetExceededError(RuntimeError):
    """An exact search ran past its configured limits before finishing."""


class AttemptsExhaustedError(BudgetExceededError):
    """A randomized procedure used up its attempt budget without succeeding."""


class UnfillableError(RuntimeError):
    """A 1-cycle that was required to bound has no filling chain."""

    def __init__(self, triple):
        super().__init__(f"triangle {triple} is not a boundary")
        self.triple = triple


class PropertyViolationError(RuntimeError):
    """The step-by-step potential verifier found an inconsistency.

    This signals a bug in the implementation, not a counterexample.
    """
