class NdcommError(Exception):
    """Base class for errors raised by ndcomm"""


class ParameterError(NdcommError, ValueError):
    """Invalid code or function parameters, or mismatched inputs"""


class PromiseViolation(NdcommError, ValueError):
    """An input does not satisfy the promise of the operation"""


class MalformedProof(NdcommError, ValueError):
    """A nondeterministic proof is not valid for the given parameters"""


class BudgetExceeded(NdcommError):
    """A search or enumeration would exceed its configured budget"""

    def __init__(self, budget_name: str, requested: int, limit: int):
        self.budget_name = budget_name
        self.requested = requested
        self.limit = limit
        super().__init__(
            f"{budget_name} budget exceeded: requested {requested}, limit {limit}"
        )


def check_budget(budget_name: str, requested: int, limit: int):
    if requested > limit:
        raise BudgetExceeded(budget_name, requested, limit)
