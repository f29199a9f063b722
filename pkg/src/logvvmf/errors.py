"""Exception hierarchy shared by all modules."""


class LogVVMFError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 1)."""


class RelationViolation(LogVVMFError):
    pass


class NonInvolutive(LogVVMFError):
    pass


class NotScalarS2(LogVVMFError):
    pass


class DefectiveInput(LogVVMFError):
    """Raised by ``jordanize_T`` when the block structure cannot be trusted."""


class TruncationUnderflow(LogVVMFError):
    pass


class BlockMismatch(LogVVMFError):
    pass


class IllConditionedFit(LogVVMFError):
    pass


class RankDeficient(LogVVMFError):
    def __init__(self, msg, rank=None):
        super().__init__(msg)
        self.rank = rank


class NoSolution(LogVVMFError):
    pass


class AmbiguousKernel(LogVVMFError):
    def __init__(self, msg, kernel=None):
        super().__init__(msg)
        self.kernel = kernel


class Mismatch(LogVVMFError):
    def __init__(self, msg, weight=None):
        super().__init__(msg)
        self.weight = weight


class InsufficientData(LogVVMFError):
    pass
