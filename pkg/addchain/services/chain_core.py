"""
Addition chains: validation, step decomposition and straight-line programs.

All functions are pure; chains are immutable once built.
"""

import bisect
from typing import Iterable, List, Sequence, Tuple

from ..errors import ChainFileError, InvalidChain, InvalidInputError, NoSummandPair
from ..models import (
    MAX_EXPONENT,
    AdditionChain,
    Instruction,
    StraightLineProgram,
    ValidationReport,
    Violation,
    ViolationKind,
)


def check_exponent(e: int) -> int:
    """Raise InvalidInputError unless ``1 <= e < 2**64``."""
    if not isinstance(e, int) or isinstance(e, bool) or e < 1 or e > MAX_EXPONENT:
        raise InvalidInputError(
            f'Exponent must be an integer in [1, 2^64 - 1], got {e!r}',
            details={'exponent': str(e)}
        )
    return e


def popcount(e: int) -> int:
    return bin(e).count('1')


def lower_bound(e: int) -> int:
    """floor(log2 e) + ceil(log2 popcount(e)); never above the minimal length."""
    check_exponent(e)
    return (e.bit_length() - 1) + (popcount(e) - 1).bit_length()


# ============================================================================
# Validation
# ============================================================================

def _has_summand_pair(value: int, earlier: Sequence[int], earlier_set: set) -> bool:
    return any((value - x) in earlier_set for x in earlier if x < value)


def validate_chain(values: Sequence[int], e: int) -> ValidationReport:
    """
    Check ``values`` against every addition-chain invariant for exponent ``e``.

    Malformed input yields a report, never an exception. At most one violation
    per kind is reported, at the first failing position (1-based).
    """
    values = tuple(int(v) for v in values)
    first = {}

    def flag(kind: ViolationKind, position: int, detail: str) -> None:
        if kind not in first:
            first[kind] = Violation(position=position, kind=kind, detail=detail)

    if not values:
        flag(ViolationKind.NOT_ONE_AT_START, 1, 'empty sequence')
        return ValidationReport(exponent=e, values=values, violations=tuple(first.values()))

    if values[0] != 1:
        flag(ViolationKind.NOT_ONE_AT_START, 1, f'chain starts with {values[0]}')
    if values[0] > e:
        flag(ViolationKind.OVERSHOOT, 1, f'{values[0]} exceeds exponent {e}')

    seen = {values[0]}
    for index in range(1, len(values)):
        position = index + 1
        value = values[index]
        previous = values[index - 1]
        if value <= previous:
            flag(ViolationKind.NOT_INCREASING, position, f'{value} follows {previous}')
        if value > e:
            flag(ViolationKind.OVERSHOOT, position, f'{value} exceeds exponent {e}')
        if not _has_summand_pair(value, values[:index], seen):
            flag(ViolationKind.NO_SUMMAND_PAIR, position, f'{value} is not a sum of two earlier elements')
        seen.add(value)

    if values[-1] != e:
        flag(ViolationKind.WRONG_TERMINAL, len(values), f'chain ends at {values[-1]}, expected {e}')

    violations = sorted(first.values(), key=lambda v: (v.position, list(ViolationKind).index(v.kind)))
    return ValidationReport(exponent=e, values=values, violations=tuple(violations))


# ============================================================================
# Decomposition
# ============================================================================

def decompose_step(values: Sequence[int], i: int) -> Tuple[int, int]:
    """
    Return a 1-based pair ``(j, k)``, ``j <= k < i``, with ``values[j] + values[k] == values[i]``.

    Ties go to the largest ``k``; the prefix is strictly increasing, so ``j`` is
    then unique.
    """
    if i < 2 or i > len(values):
        raise InvalidInputError(f'Position {i} has no step', details={'position': i})
    target = values[i - 1]
    prefix = values[:i - 1]
    for k in range(i - 1, 0, -1):
        rest = target - prefix[k - 1]
        if rest <= 0:
            continue
        if rest > prefix[k - 1]:
            # j <= k means values[j] <= values[k]; smaller k only lowers values[k]
            break
        j = bisect.bisect_left(prefix, rest, 0, k)
        if j < k and prefix[j] == rest:
            return j + 1, k
    raise NoSummandPair(position=i, value=target)


def chain_from_values(values: Iterable[int]) -> AdditionChain:
    """Ingest raw values (e.g. a chain file), deriving each step."""
    values = tuple(int(v) for v in values)
    if not values or values[0] != 1:
        raise InvalidChain('An addition chain starts with 1', details={'values': list(values[:3])})
    for index in range(1, len(values)):
        if values[index] <= values[index - 1]:
            raise InvalidChain(
                f'Values must be strictly increasing (position {index + 1})',
                details={'position': index + 1}
            )
    steps = tuple(decompose_step(values, i) for i in range(2, len(values) + 1))
    return AdditionChain(values=values, steps=steps)


def is_star_chain(chain: AdditionChain) -> bool:
    """True when every step uses the immediately preceding element."""
    return all(k == i - 1 for i, (_, k) in enumerate(chain.steps, start=2))


# ============================================================================
# Straight-line programs
# ============================================================================

def to_program(chain: AdditionChain) -> StraightLineProgram:
    """
    Turn a chain into ``(target, j, k)`` multiplications, one per addition.

    Chains without recorded steps fall back to decomposition.
    """
    steps = chain.steps
    if len(steps) != chain.additions:
        steps = tuple(decompose_step(chain.values, i) for i in range(2, len(chain.values) + 1))
    return StraightLineProgram(
        instructions=tuple(Instruction(i, j, k) for i, (j, k) in enumerate(steps, start=2))
    )


def program_values(program: StraightLineProgram) -> Tuple[int, ...]:
    """Execute a program over integer addition, reproducing the chain values."""
    values: List[int] = [1]
    for instruction in program:
        if instruction.target != len(values) + 1:
            raise InvalidChain(f'Instruction {instruction} is out of order')
        values.append(values[instruction.j - 1] + values[instruction.k - 1])
    return tuple(values)


# ============================================================================
# Chain files
# ============================================================================

def parse_chain_text(text: str) -> List[int]:
    """
    Parse the plain-text chain format.

    Decimal integers separated by whitespace or newlines; lines starting
    with ``#`` are comments.
    """
    values: List[int] = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        for token in stripped.split():
            if not token.isdigit():
                raise ChainFileError(
                    f'Line {line_number}: "{token}" is not a decimal integer',
                    details={'line': line_number, 'token': token}
                )
            values.append(int(token))
    if not values:
        raise ChainFileError('Chain file contains no values')
    return values
