"""Exception hierarchy shared by all hecache modules."""


class HecacheError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(HecacheError):
    """Invalid scheme parameters or cache configuration."""


class MismatchError(HecacheError):
    """Operands built under incompatible parameters or scales."""


class EncodingOverflow(HecacheError):
    """Scaled plaintext magnitude exceeds the modulus headroom."""


class RangeError(HecacheError):
    """Value outside the range a cache or scalar budget supports."""


class DatasetError(HecacheError):
    """CSV workload could not be loaded."""


class FormatError(HecacheError):
    """Malformed serialized key, ciphertext, or parameter blob."""
