class ObddLabError(Exception):
    """Root of every error raised by obddlab."""


class InputShapeError(ObddLabError, ValueError):
    pass


class InvalidOrderError(ObddLabError, ValueError):
    pass


class ArityMismatchError(ObddLabError, ValueError):
    pass


class AddressRangeError(ObddLabError, IndexError):
    pass


class InvalidFormError(ObddLabError, ValueError):
    pass


class UnknownSpecError(ObddLabError, ValueError):
    pass


class CapExceededError(ObddLabError, ValueError):
    pass


class InvalidProgramError(ObddLabError, ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = tuple(diagnostics)
        super().__init__("; ".join(self.diagnostics) or "invalid program")


class CommutativityError(ObddLabError, ValueError):
    pass


class NormDriftError(ObddLabError, RuntimeError):
    pass


class GoodSetSearchError(ObddLabError, RuntimeError):
    def __init__(self, m, epsilon, attempts, best_k, best_value):
        self.m = m
        self.epsilon = epsilon
        self.attempts = attempts
        self.best_k = tuple(best_k)
        self.best_value = best_value
        super().__init__(
            f"no good set for m={m}, epsilon={epsilon} after {attempts} draws "
            f"(best value {best_value:.6f})"
        )


class OutOfDomainError(ObddLabError, ValueError):
    pass
