"""Exception types raised by the builders and the verification suite."""


class OpenXXZError(Exception):
    pass


class DimensionError(OpenXXZError, ValueError):
    pass


class DegenerateAnisotropyError(OpenXXZError, ValueError):
    pass


class SingularNormalizationError(OpenXXZError, ValueError):
    """A normalization constant vanishes; ``parameter`` names the culprit."""

    def __init__(self, message: str, parameter: str):
        super().__init__(message)
        self.parameter = parameter


class ResourceLimitError(OpenXXZError, RuntimeError):
    pass


class NoAsymptoticTermError(OpenXXZError, ValueError):
    pass


class ExtractionError(OpenXXZError, RuntimeError):
    pass


class NonConvergenceError(OpenXXZError, RuntimeError):
    def __init__(self, message: str, iterations: int):
        super().__init__(message)
        self.iterations = iterations
