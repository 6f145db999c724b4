from typing import Optional, Tuple


class TensorToolException(Exception):
    """Base exception for the tensor classification tool"""
    pass

class ConfigurationException(TensorToolException):
    """Invalid or missing configuration values"""
    pass

class TensorConstructionException(TensorToolException):
    """Raised when a tensor cannot be built from the given entries"""
    pass

class DimensionMismatchException(TensorToolException):
    """Operands do not share order / dimension"""
    pass

class NegativeEntryException(TensorToolException):
    """A nonnegative tensor was required"""

    def __init__(self, message: str, index: Optional[Tuple[int, ...]] = None):
        super().__init__(message)
        self.index = index

class StructureException(TensorToolException):
    """Structural predicate cannot be evaluated (e.g. exhaustive check infeasible)"""
    pass

class SpectralException(TensorToolException):
    """Spectral computation preconditions violated"""
    pass

class NotZTensorException(TensorToolException):
    """Raised when a Z-tensor was required but a positive off-diagonal entry exists"""

    def __init__(self, index: Tuple[int, ...], value: float):
        super().__init__(f"Not a Z-tensor: positive off-diagonal entry {value!r} at {index}")
        self.index = index
        self.value = value

class IntervalException(TensorToolException):
    """Interval hull related exceptions"""
    pass

class VertexCapException(IntervalException):
    """Raised when 2^n vertex enumeration exceeds the configured cap"""
    pass

class OracleException(TensorToolException):
    """Brute-force verifier preconditions violated"""
    pass

class TensorFileParseException(TensorToolException):
    """Raised when a tensor file cannot be parsed"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column

class CertificateException(TensorToolException):
    """Malformed certificate payload"""
    pass
