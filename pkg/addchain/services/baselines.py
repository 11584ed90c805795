"""
Classical exponentiation chains used as comparison baselines.

Both methods scan the exponent left to right.
"""

from typing import Dict, Tuple

from ..errors import RadixInvalid
from ..models import AdditionChain
from .chain_core import check_exponent, popcount


def binary_length(e: int) -> int:
    """floor(log2 e) + popcount(e) - 1."""
    check_exponent(e)
    return e.bit_length() - 1 + popcount(e) - 1


def binary_chain(e: int) -> AdditionChain:
    """Left-to-right square-and-multiply: double per bit, add 1 per set bit."""
    check_exponent(e)
    values = [1]
    steps = []
    for bit in bin(e)[3:]:
        position = len(values)
        values.append(values[-1] * 2)
        steps.append((position, position))
        if bit == '1':
            position = len(values)
            values.append(values[-1] + 1)
            steps.append((1, position))
    return AdditionChain(values=tuple(values), steps=tuple(steps))


def check_radix(m: int) -> int:
    if not isinstance(m, int) or m < 2 or m & (m - 1):
        raise RadixInvalid(m)
    return m


def mary_digits(e: int, m: int) -> Tuple[int, ...]:
    """Base-m digits of ``e``, most significant first."""
    digits = []
    while e:
        e, digit = divmod(e, m)
        digits.append(digit)
    return tuple(reversed(digits))


def mary_chain(e: int, m: int = 4) -> AdditionChain:
    """
    m-ary method with digit-occurrence pruning.

    Only 2..d_max are precomputed (by +1 steps), where d_max is the largest
    digit of ``e``; values the main loop reproduces are kept once.
    """
    check_exponent(e)
    check_radix(m)
    width = m.bit_length() - 1
    digits = mary_digits(e, m)

    summands: Dict[int, Tuple[int, int]] = {1: (0, 0)}

    def record(value: int, a: int, b: int) -> None:
        if value not in summands:
            summands[value] = (a, b)

    for digit in range(2, max(digits) + 1):
        record(digit, digit - 1, 1)

    current = digits[0]
    for digit in digits[1:]:
        for _ in range(width):
            record(current * 2, current, current)
            current *= 2
        if digit:
            record(current + digit, current, digit)
            current += digit

    values = tuple(sorted(summands))
    position = {value: index for index, value in enumerate(values, start=1)}
    steps = []
    for value in values[1:]:
        a, b = summands[value]
        j, k = sorted((position[a], position[b]))
        steps.append((j, k))
    return AdditionChain(values=values, steps=tuple(steps))
