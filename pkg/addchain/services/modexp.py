"""Addition chains executed as modular multiplication programs."""

import logging
from typing import Optional

from ..errors import InvalidChain, ModulusInvalid
from ..models import AdditionChain, Execution, ModContext
from .chain_core import to_program, validate_chain

logger = logging.getLogger(__name__)


def execute(chain: AdditionChain, ctx: ModContext, e: Optional[int] = None) -> Execution:
    """
    Evaluate ``ctx.base ** e mod ctx.modulus`` along ``chain``.

    Every intermediate power is kept; squarings count as multiplications.
    """
    e = chain.target if e is None else e
    report = validate_chain(chain.values, e)
    if not report.valid:
        raise InvalidChain(
            f'Chain is not valid for exponent {e}',
            details={'violations': [
                {'position': v.position, 'kind': v.kind.value} for v in report.violations
            ]}
        )

    modulus = ctx.modulus
    powers = [ctx.base % modulus]
    mults = 0
    for instruction in to_program(chain):
        powers.append(powers[instruction.j - 1] * powers[instruction.k - 1] % modulus)
        mults += 1
    logger.debug('Executed %d multiplications for exponent %d', mults, e)
    return Execution(result=powers[-1], mults=mults)


def reference_modexp(p: int, e: int, n: int) -> int:
    """Left-to-right square-and-multiply."""
    if n < 2:
        raise ModulusInvalid(n)
    base = p % n
    result = 1 % n
    for bit in bin(e)[2:] if e > 0 else '':
        result = result * result % n
        if bit == '1':
            result = result * base % n
    return result
