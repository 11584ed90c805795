"""
Centralized Error Handling for the addition-chain toolkit.

Provides consistent error classes, codes and exit codes across all commands.
"""

from typing import Optional


# ============================================================================
# Error Code Constants
# ============================================================================

class ErrorCodes:
    """Centralized error codes for the toolkit."""

    # Input
    INVALID_INPUT = 'INVALID_INPUT'
    CONFIG_INVALID = 'CONFIG_INVALID'
    CHAIN_FILE_INVALID = 'CHAIN_FILE_INVALID'
    RADIX_INVALID = 'RADIX_INVALID'
    MODULUS_INVALID = 'MODULUS_INVALID'

    # Chains
    INVALID_CHAIN = 'INVALID_CHAIN'
    NO_SUMMAND_PAIR = 'NO_SUMMAND_PAIR'

    # Search
    BUDGET_EXCEEDED = 'BUDGET_EXCEEDED'
    NON_TERMINATION = 'NON_TERMINATION'

    # Storage
    CACHE_CORRUPT = 'CACHE_CORRUPT'
    REPORT_ERROR = 'REPORT_ERROR'

    INTERNAL_ERROR = 'INTERNAL_ERROR'


class ExitCodes:
    SUCCESS = 0
    INVALID = 1
    INTERNAL = 2


# ============================================================================
# Custom Exception Classes
# ============================================================================

class ChainError(Exception):
    """Base class for toolkit errors."""

    def __init__(self, message: str, error_code: str = None, exit_code: int = ExitCodes.INVALID,
                 details: dict = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or ErrorCodes.INVALID_INPUT
        self.exit_code = exit_code
        self.details = details


class InvalidInputError(ChainError):
    """Raised when user-supplied input cannot be used."""

    def __init__(self, message: str, error_code: str = None, details: dict = None):
        super().__init__(
            message=message,
            error_code=error_code or ErrorCodes.INVALID_INPUT,
            exit_code=ExitCodes.INVALID,
            details=details
        )


class ConfigInvalid(InvalidInputError):
    """Raised when a GA or CLI configuration violates its invariants."""

    def __init__(self, message: str = 'Invalid configuration', details: dict = None):
        super().__init__(message, error_code=ErrorCodes.CONFIG_INVALID, details=details)


class ChainFileError(InvalidInputError):
    """Raised when a chain file cannot be parsed."""

    def __init__(self, message: str, details: dict = None):
        super().__init__(message, error_code=ErrorCodes.CHAIN_FILE_INVALID, details=details)


class RadixInvalid(InvalidInputError):
    """Raised when an m-ary radix is not a power of two >= 2."""

    def __init__(self, radix: int):
        super().__init__(
            f'Radix must be a power of two >= 2, got {radix}',
            error_code=ErrorCodes.RADIX_INVALID,
            details={'radix': radix}
        )


class ModulusInvalid(InvalidInputError):
    """Raised when a modulus is below 2."""

    def __init__(self, modulus: int):
        super().__init__(
            f'Modulus must be >= 2, got {modulus}',
            error_code=ErrorCodes.MODULUS_INVALID,
            details={'modulus': str(modulus)}
        )


class InvalidChain(InvalidInputError):
    """Raised when a sequence is not a valid addition chain."""

    def __init__(self, message: str = 'Not a valid addition chain', details: dict = None):
        super().__init__(message, error_code=ErrorCodes.INVALID_CHAIN, details=details)


class NoSummandPair(InvalidChain):
    """Raised when a chain element is not the sum of two earlier elements."""

    def __init__(self, position: int, value: int):
        super().__init__(
            f'Element {value} at position {position} is not the sum of two earlier elements',
            details={'position': position, 'value': value}
        )
        self.error_code = ErrorCodes.NO_SUMMAND_PAIR
        self.position = position
        self.value = value


class ReportError(InvalidInputError):
    """Raised when a report cannot be written or read."""

    def __init__(self, message: str, details: dict = None):
        super().__init__(message, error_code=ErrorCodes.REPORT_ERROR, details=details)


class InternalError(ChainError):
    """Raised when an invariant of the toolkit itself is broken."""

    def __init__(self, message: str, error_code: str = None, details: dict = None):
        super().__init__(
            message=message,
            error_code=error_code or ErrorCodes.INTERNAL_ERROR,
            exit_code=ExitCodes.INTERNAL,
            details=details
        )


class NonTermination(InternalError):
    """Raised when gene generation appends too many genes without reaching the exponent."""

    def __init__(self, exponent: int, appended: int):
        super().__init__(
            f'Gene generation appended {appended} genes without reaching {exponent}',
            error_code=ErrorCodes.NON_TERMINATION,
            details={'exponent': exponent, 'appended': appended}
        )


class BudgetExceeded(ChainError):
    """
    Raised when the exact search hits its node limit before proving optimality.

    Carries the best chain found so far (an upper bound) and the proven lower bound.
    """

    def __init__(self, exponent: int, upper: int, lower: int, witness=None, nodes: int = 0):
        super().__init__(
            f'Node budget exhausted for {exponent}: length in [{lower}, {upper}] (unproven)',
            error_code=ErrorCodes.BUDGET_EXCEEDED,
            exit_code=ExitCodes.INVALID,
            details={'exponent': exponent, 'upper': upper, 'lower': lower, 'nodes': nodes}
        )
        self.exponent = exponent
        self.upper = upper
        self.lower = lower
        self.witness = witness
        self.nodes = nodes
        self.proven = False


class CacheCorrupt(ChainError):
    """Raised when an oracle cache file fails its integrity checks."""

    def __init__(self, path, reason: str):
        super().__init__(
            f'Oracle cache {path} is corrupt: {reason}',
            error_code=ErrorCodes.CACHE_CORRUPT,
            exit_code=ExitCodes.INTERNAL,
            details={'path': str(path), 'reason': reason}
        )


# ============================================================================
# Error Payload Helpers
# ============================================================================

def error_payload(error: ChainError) -> dict:
    """
    Create a standardized error payload for the diagnostic stream.

    Args:
        error: The toolkit error to render

    Returns:
        dict: Payload with message, code and optional details
    """
    payload = {
        'success': False,
        'error': {
            'message': error.message,
            'code': error.error_code
        }
    }

    if error.details:
        payload['error']['details'] = error.details

    return payload


def describe(error: Optional[BaseException]) -> str:
    """Short one-line description of any exception."""
    if error is None:
        return ''
    if isinstance(error, ChainError):
        return f'{error.error_code}: {error.message}'
    return f'{type(error).__name__}: {error}'
