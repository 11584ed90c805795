from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from .errors import ModulusInvalid

# Exponents are 64-bit unsigned integers; chain lengths are plain ints (additions).
MAX_EXPONENT = (1 << 64) - 1


# ============================================================================
# Chains
# ============================================================================

class ViolationKind(str, Enum):
    NOT_ONE_AT_START = 'NOT_ONE_AT_START'
    NOT_INCREASING = 'NOT_INCREASING'
    NO_SUMMAND_PAIR = 'NO_SUMMAND_PAIR'
    OVERSHOOT = 'OVERSHOOT'
    WRONG_TERMINAL = 'WRONG_TERMINAL'


@dataclass(frozen=True)
class Violation:
    """A single validation failure; positions are 1-based."""
    position: int
    kind: ViolationKind
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validating a value sequence against an exponent."""
    exponent: int
    values: Tuple[int, ...]
    violations: Tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def additions(self) -> int:
        return len(self.values) - 1

    def kinds(self) -> List[ViolationKind]:
        return [violation.kind for violation in self.violations]


@dataclass(frozen=True)
class AdditionChain:
    """
    Addition chain with explicit steps.

    ``steps[i - 2]`` is the 1-based pair ``(j, k)`` with
    ``values[i] = values[j] + values[k]`` and ``j <= k < i``.
    """
    values: Tuple[int, ...]
    steps: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if len(self.steps) != max(len(self.values) - 1, 0):
            raise ValueError('an addition chain needs exactly one step per element after the first')

    @property
    def additions(self) -> int:
        return len(self.values) - 1

    @property
    def target(self) -> int:
        return self.values[-1]

    def step(self, i: int) -> Tuple[int, int]:
        """Summand pair of 1-based position ``i >= 2``."""
        return self.steps[i - 2]

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def from_values(cls, values) -> 'AdditionChain':
        """Build a chain from raw values, deriving each step by decomposition."""
        from .services.chain_core import chain_from_values
        return chain_from_values(values)

    def __str__(self) -> str:
        return ' '.join(str(value) for value in self.values)


class Instruction(NamedTuple):
    """``x[target] = x[j] * x[k]`` with 1-based indices."""
    target: int
    j: int
    k: int


@dataclass(frozen=True)
class StraightLineProgram:
    instructions: Tuple[Instruction, ...]

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def __getitem__(self, index):
        return self.instructions[index]


# ============================================================================
# Genetic algorithm
# ============================================================================

class Rule(str, Enum):
    DOUBLE = 'D'
    ADD = 'A'
    RANDOM = 'R'
    GENERATED = 'G'
    EXCHANGED = 'E'
    FIXED = 'FIXED'


@dataclass(frozen=True)
class RuleTag:
    """
    How one gene was built.

    ``rule`` is the provenance shown in crossover diagrams, ``action`` the
    arithmetic rule that produced the value (D, A or R) and ``partner`` the
    1-based position of the second summand; the first summand is always the
    preceding gene. Position 1 has partner 0.
    """
    rule: Rule
    action: Rule
    partner: int

    def __str__(self) -> str:
        return self.rule.value


class CrossoverKind(str, Enum):
    SINGLE = 'single'
    TWO = 'two'
    UNIFORM = 'uniform'


@dataclass(frozen=True)
class Chromosome:
    """A feasible chain plus one rule tag per position."""
    chain: AdditionChain
    rules: Tuple[RuleTag, ...]

    def __post_init__(self):
        if len(self.rules) != len(self.chain.values):
            raise ValueError('rules and chain values must have equal length')

    @property
    def values(self) -> Tuple[int, ...]:
        return self.chain.values

    @property
    def length(self) -> int:
        return self.chain.additions

    def __len__(self) -> int:
        return len(self.chain.values)


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 200
    max_generations: int = 300
    p_single: float = 0.20
    p_two: float = 0.35
    p_uniform: float = 0.45
    crossover_rate: float = 0.4
    mutation_rate: float = 1.0
    n_mutants: int = 4
    p_double: float = 0.65
    p_add: float = 0.25
    p_random: float = 0.10
    early_stop_at_lower_bound: bool = True
    elitist_mutation: bool = False
    seed: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GaResult:
    exponent: int
    best: Chromosome
    length: int
    generations_run: int
    evaluations: int
    best_length_per_generation: Tuple[int, ...]
    seed: int
    elapsed_seconds: float = field(default=0.0, compare=False)


# ============================================================================
# Oracle
# ============================================================================

@dataclass(frozen=True, eq=False)
class OptimalTable:
    """Minimal chain lengths; ``lengths[n]`` for ``1 <= n <= limit`` (index 0 unused)."""
    limit: int
    lengths: np.ndarray

    def length(self, n: int) -> int:
        return int(self.lengths[n])

    def accumulated(self, range_max: int) -> int:
        if range_max > self.limit:
            raise ValueError(f'table only covers n <= {self.limit}')
        return int(self.lengths[1:range_max + 1].sum(dtype=np.int64))

    def truncated(self, limit: int) -> 'OptimalTable':
        return OptimalTable(limit=limit, lengths=self.lengths[:limit + 1].copy())

    def __eq__(self, other) -> bool:
        if not isinstance(other, OptimalTable):
            return NotImplemented
        return self.limit == other.limit and np.array_equal(self.lengths, other.lengths)

    def __hash__(self) -> int:
        return hash((self.limit, self.lengths.tobytes()))


# ============================================================================
# Modular exponentiation
# ============================================================================

@dataclass(frozen=True)
class ModContext:
    base: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ModulusInvalid(self.modulus)
        if self.base < 0:
            raise ValueError('base must be non-negative')


class Execution(NamedTuple):
    result: int
    mults: int


# ============================================================================
# Bench
# ============================================================================

class Method(str, Enum):
    GADSA = 'GADSA'
    BINARY = 'BINARY'
    MARY = 'MARY'
    ORACLE = 'ORACLE'


def method_label(method: Method, radix: int = 4) -> str:
    if method == Method.MARY:
        return f'MARY({radix})'
    return method.value


@dataclass(frozen=True)
class AccumulatedResult:
    method: str
    range_max: int
    total: int
    per_exponent: Optional[Tuple[int, ...]] = None
    seeds: Tuple[int, ...] = ()


@dataclass(frozen=True)
class RunStats:
    method: str
    range_max: int
    best: int
    worst: int
    average: float
    median: float
    runs: int
    totals: Tuple[int, ...] = ()


@dataclass(frozen=True)
class BitSizeRow:
    bits: int
    method: str
    samples: int
    average: float


@dataclass(frozen=True)
class SpecialExponentRow:
    exponent: int
    printed_additions: int
    printed_valid: bool
    printed_violations: Tuple[str, ...]
    best_length: int
    best_chain: Tuple[int, ...]
    seeds: Tuple[int, ...]


@dataclass
class Report:
    kind: str
    meta: Dict
    rows: List[Dict]


# ============================================================================
# CLI
# ============================================================================

@dataclass(frozen=True)
class CliConfig:
    ga: GaConfig
    workers: int = 1
    output_format: str = 'json'
    output_path: Optional[str] = None
    oracle_cache_path: Optional[str] = None
