"""
Genetic search for short addition chains.

Chromosomes are feasible star chains; every gene is the previous gene plus an
earlier one, recorded as a rule tag (double, add-last-two, random partner).
Crossover copies rules instead of values, mutation keeps the best of N
completions of a shared prefix, and the generational loop replaces the whole
population each generation while tracking the best chain ever seen.
"""

import bisect
import logging
import time
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import ConfigInvalid, InvalidChain, NonTermination
from ..models import (
    AdditionChain,
    Chromosome,
    CrossoverKind,
    GaConfig,
    GaResult,
    Rule,
    RuleTag,
)
from ..schemas import GaConfigSchema
from .chain_core import check_exponent, lower_bound

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = GaConfig()

_FIRST_TAG = RuleTag(Rule.FIXED, Rule.FIXED, 0)
_SECOND_TAG = RuleTag(Rule.FIXED, Rule.DOUBLE, 1)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _pick(rng: np.random.Generator, n: int) -> int:
    """Uniform index in ``[0, n)``."""
    return min(int(rng.random() * n), n - 1)


def validate_config(cfg: GaConfig) -> GaConfig:
    """Raise ConfigInvalid when ``cfg`` breaks a GaConfig invariant."""
    errors = GaConfigSchema().validate(cfg.to_dict())
    if errors:
        raise ConfigInvalid('GA configuration violates its invariants', details=errors)
    return cfg


# ============================================================================
# Chain building
# ============================================================================

def _repair_index(values: Sequence[int], e: int) -> int:
    """0-based index of the largest element <= e - last (binary search)."""
    return bisect.bisect_right(values, e - values[-1]) - 1


def repair_overshoot(chain_so_far: Sequence[int], e: int) -> int:
    """
    Partner value that replaces an overshooting gene.

    Returns the largest chain element ``v <= e - last``; an exact match yields
    the exponent itself, otherwise the search settles on the next lower element.
    """
    return chain_so_far[_repair_index(chain_so_far, e)]


class _ChainBuilder:
    """Mutable chain under construction; every gene is ``last + values[partner]``."""

    def __init__(self, values: Sequence[int], rules: Sequence[RuleTag], e: int,
                 cfg: GaConfig, rng: np.random.Generator):
        self.values: List[int] = list(values)
        self.rules: List[RuleTag] = list(rules)
        self.e = e
        self.cfg = cfg
        self.rng = rng
        self.generated = 0
        self.limit = 4 * e.bit_length()

    @property
    def complete(self) -> bool:
        return self.values[-1] == self.e

    def push(self, partner: int, rule: Rule, action: Rule) -> None:
        self.values.append(self.values[-1] + self.values[partner - 1])
        self.rules.append(RuleTag(rule, action, partner))

    def add(self, partner: int, rule: Rule, action: Rule) -> None:
        """Append ``last + values[partner]``, repairing an overshoot."""
        if self.values[-1] + self.values[partner - 1] > self.e:
            self.push(_repair_index(self.values, self.e) + 1, Rule.RANDOM, Rule.RANDOM)
        else:
            self.push(partner, rule, action)

    def generate(self, label: Optional[Rule] = None) -> None:
        """One gene by rule roulette; ``label`` overrides the recorded rule."""
        if self.generated >= self.limit:
            raise NonTermination(self.e, self.generated)
        self.generated += 1

        m = len(self.values)
        u = self.rng.random()
        if u < self.cfg.p_double:
            action, partner = Rule.DOUBLE, m
        elif u < self.cfg.p_double + self.cfg.p_add:
            action, partner = Rule.ADD, m - 1
        else:
            action, partner = Rule.RANDOM, _pick(self.rng, m) + 1

        if self.values[-1] + self.values[partner - 1] > self.e:
            partner = _repair_index(self.values, self.e) + 1
            self.push(partner, label or Rule.RANDOM, Rule.RANDOM)
        else:
            self.push(partner, label or action, action)

    def finish(self, label: Optional[Rule] = None) -> None:
        while not self.complete:
            self.generate(label)

    def replay(self, tag: RuleTag, label: Rule, fresh_random: bool = True) -> None:
        """Re-apply a donor rule; infeasible rules become a generated gene (G)."""
        m = len(self.values)
        if tag.action == Rule.DOUBLE:
            partner = m
        elif tag.action == Rule.ADD:
            partner = m - 1
        elif fresh_random:
            partner = _pick(self.rng, m) + 1
        else:
            partner = tag.partner

        if partner < 1 or partner > m or self.values[-1] + self.values[partner - 1] > self.e:
            self.generate(Rule.GENERATED)
            return
        self.push(partner, label, tag.action)

    def build(self) -> Chromosome:
        values = tuple(self.values)
        steps = tuple((tag.partner, i - 1) for i, tag in enumerate(self.rules[1:], start=2))
        return Chromosome(chain=AdditionChain(values=values, steps=steps), rules=tuple(self.rules))


def chromosome_from_values(values: Iterable[int]) -> Chromosome:
    """
    Tag a raw star chain: D when the partner is the previous gene, A when it is
    the one before, R otherwise; positions 1-3 are FIXED.
    """
    values = tuple(int(v) for v in values)
    if not values or values[0] != 1:
        raise InvalidChain('An addition chain starts with 1')
    rules = [_FIRST_TAG]
    for index in range(1, len(values)):
        rest = values[index] - values[index - 1]
        partner = bisect.bisect_left(values, rest, 0, index)
        if rest <= 0 or partner >= index or values[partner] != rest:
            raise InvalidChain(
                f'Position {index + 1} does not extend the previous element',
                details={'position': index + 1, 'value': values[index]}
            )
        partner += 1
        if partner == index:
            action = Rule.DOUBLE
        elif partner == index - 1:
            action = Rule.ADD
        else:
            action = Rule.RANDOM
        rules.append(RuleTag(Rule.FIXED if index < 3 else action, action, partner))
    steps = tuple((tag.partner, i - 1) for i, tag in enumerate(rules[1:], start=2))
    return Chromosome(chain=AdditionChain(values=values, steps=steps), rules=tuple(rules))


def gene_generation(partial: Chromosome, e: int, cfg: GaConfig, rng: np.random.Generator) -> Chromosome:
    """Extend a feasible prefix (at least two genes) until it reaches ``e``."""
    builder = _ChainBuilder(partial.values, partial.rules, e, cfg, rng)
    builder.finish()
    return builder.build()


def replay_rules(prefix: Chromosome, tags: Sequence[RuleTag], e: int, cfg: GaConfig,
                 rng: np.random.Generator, fresh_random: bool = True) -> Chromosome:
    """
    Replay ``tags`` on top of ``prefix`` and complete the chain.

    With ``fresh_random`` R tags draw a new partner and genes are labelled by
    their action, as crossover copies rules; without it every tag keeps its
    recorded partner and label, so a chromosome's own tags rebuild it exactly.
    """
    builder = _ChainBuilder(prefix.values, prefix.rules, e, cfg, rng)
    for tag in tags:
        if builder.complete:
            break
        builder.replay(tag, tag.action if fresh_random else tag.rule, fresh_random)
    builder.finish(Rule.GENERATED)
    return builder.build()


def _trivial(e: int) -> Chromosome:
    if e == 1:
        return Chromosome(chain=AdditionChain(values=(1,), steps=()), rules=(_FIRST_TAG,))
    return Chromosome(chain=AdditionChain(values=(1, 2), steps=((1, 1),)), rules=(_FIRST_TAG, _SECOND_TAG))


def random_chromosome(e: int, cfg: GaConfig, rng: np.random.Generator) -> Chromosome:
    """1, 2, then 3 or 4 uniformly, then gene generation."""
    if e <= 2:
        return _trivial(e)
    values = [1, 2]
    partner = _pick(rng, 2) + 1
    if 2 + values[partner - 1] > e:
        partner = _repair_index(values, e) + 1
    action = Rule.DOUBLE if partner == 2 else Rule.ADD
    builder = _ChainBuilder(values, [_FIRST_TAG, _SECOND_TAG], e, cfg, rng)
    builder.push(partner, Rule.FIXED, action)
    builder.finish()
    return builder.build()


def initial_population(e: int, cfg: GaConfig, rng: np.random.Generator) -> List[Chromosome]:
    return [random_chromosome(e, cfg, rng) for _ in range(cfg.population_size)]


def fitness(c: Chromosome) -> int:
    """Number of additions; lower is better."""
    return len(c.values) - 1


# ============================================================================
# Selection
# ============================================================================

class RouletteWheel:
    """
    Fitness-proportional wheel for a minimisation problem.

    Weight ``worst - fitness + 1``: shorter chains get strictly larger sectors.
    """

    def __init__(self, population: Sequence[Chromosome]):
        if not population:
            raise ValueError('cannot spin an empty wheel')
        fitnesses = np.fromiter((fitness(c) for c in population), dtype=np.int64, count=len(population))
        self.weights = fitnesses.max() - fitnesses + 1
        self._cumulative = np.cumsum(self.weights)
        self._population = population

    @property
    def probabilities(self) -> np.ndarray:
        return self.weights / self._cumulative[-1]

    def spin_index(self, rng: np.random.Generator) -> int:
        point = rng.random() * self._cumulative[-1]
        return int(np.searchsorted(self._cumulative, point, side='right'))

    def spin(self, rng: np.random.Generator) -> Chromosome:
        return self._population[self.spin_index(rng)]


def roulette_select(population: Sequence[Chromosome], rng: np.random.Generator) -> Chromosome:
    return RouletteWheel(population).spin(rng)


# ============================================================================
# Crossover
# ============================================================================

def select_crossover_variant(cfg: GaConfig, rng: np.random.Generator) -> CrossoverKind:
    u = rng.random()
    if u < cfg.p_single:
        return CrossoverKind.SINGLE
    if u < cfg.p_single + cfg.p_two:
        return CrossoverKind.TWO
    return CrossoverKind.UNIFORM


def _child(parent: Chromosome, point: int, segments: Sequence[Sequence[RuleTag]], e: int,
           cfg: GaConfig, rng: np.random.Generator) -> Chromosome:
    """Parent values up to ``point``, then the donor rule segments, then G genes."""
    builder = _ChainBuilder(parent.values[:point], parent.rules[:point], e, cfg, rng)
    for segment in segments:
        for tag in segment:
            if builder.complete:
                break
            builder.replay(tag, tag.action)
    builder.finish(Rule.GENERATED)
    return builder.build()


def crossover_single_point(p1: Chromosome, p2: Chromosome, e: int, rng: np.random.Generator,
                           cfg: GaConfig = DEFAULT_CONFIG) -> Tuple[Chromosome, Chromosome]:
    """Point ``p`` uniform in [4, shorter length - 1]; values before, donor rules after."""
    n = min(len(p1), len(p2))
    if n < 5:
        return p1, p2
    p = 4 + _pick(rng, n - 4)
    return (_child(p1, p, [p2.rules[p:]], e, cfg, rng),
            _child(p2, p, [p1.rules[p:]], e, cfg, rng))


def crossover_two_point(p1: Chromosome, p2: Chromosome, e: int, rng: np.random.Generator,
                        cfg: GaConfig = DEFAULT_CONFIG) -> Tuple[Chromosome, Chromosome]:
    """Points ``4 <= p < q <= shorter length - 1``; donor rules for (p, q] and after q."""
    n = min(len(p1), len(p2))
    if n < 6:
        return p1, p2
    first = _pick(rng, n - 4)
    second = _pick(rng, n - 5)
    if second >= first:
        second += 1
    p, q = 4 + min(first, second), 4 + max(first, second)
    return (_child(p1, p, [p2.rules[p:q], p2.rules[q:]], e, cfg, rng),
            _child(p2, p, [p1.rules[p:q], p1.rules[q:]], e, cfg, rng))


def _uniform_child(own: Chromosome, other: Chromosome, mask: np.ndarray, e: int,
                   cfg: GaConfig, rng: np.random.Generator) -> Chromosome:
    n = len(mask)
    third = other if mask[2] else own
    builder = _ChainBuilder(own.values[:2], own.rules[:2], e, cfg, rng)
    builder.push(third.rules[2].partner, Rule.FIXED, third.rules[2].action)
    for index in range(3, len(own)):
        if builder.complete:
            break
        if index < n and mask[index]:
            builder.replay(other.rules[index], Rule.EXCHANGED)
        else:
            tag = own.rules[index]
            builder.replay(tag, tag.action)
    builder.finish(Rule.GENERATED)
    return builder.build()


def crossover_uniform(p1: Chromosome, p2: Chromosome, e: int, rng: np.random.Generator,
                      cfg: GaConfig = DEFAULT_CONFIG,
                      mask: Optional[Sequence[int]] = None) -> Tuple[Chromosome, Chromosome]:
    """
    Random bit mask over the shorter parent. Positions 1-2 are inert, a set bit
    at 3 swaps the third values, set bits from 4 on exchange rule tags (E).
    """
    n = min(len(p1), len(p2))
    if n < 3:
        return p1, p2
    if mask is None:
        mask = rng.integers(0, 2, size=n)
    mask = np.asarray(mask[:n], dtype=bool)
    return (_uniform_child(p1, p2, mask, e, cfg, rng),
            _uniform_child(p2, p1, mask, e, cfg, rng))


_OPERATORS = {
    CrossoverKind.SINGLE: crossover_single_point,
    CrossoverKind.TWO: crossover_two_point,
    CrossoverKind.UNIFORM: crossover_uniform,
}


def crossover(p1: Chromosome, p2: Chromosome, e: int, cfg: GaConfig,
              rng: np.random.Generator) -> Tuple[Chromosome, Chromosome]:
    if rng.random() >= cfg.crossover_rate:
        return p1, p2
    kind = select_crossover_variant(cfg, rng)
    return _OPERATORS[kind](p1, p2, e, rng, cfg)


# ============================================================================
# Mutation
# ============================================================================

def mutate(child: Chromosome, e: int, cfg: GaConfig, rng: np.random.Generator) -> Chromosome:
    """
    N-mutant mutation: common prefix up to a point ``i`` in [3, len], one random
    gene ``x_i + x_b`` (b < i) per mutant, gene generation for the rest. The
    shortest mutant replaces the child.
    """
    if e <= 2 or len(child) < 3:
        return child
    if rng.random() >= cfg.mutation_rate:
        return child

    i = 3 + _pick(rng, len(child) - 2)
    if i == len(child):
        return child

    best = None
    for _ in range(cfg.n_mutants):
        builder = _ChainBuilder(child.values[:i], child.rules[:i], e, cfg, rng)
        builder.add(_pick(rng, i - 1) + 1, Rule.RANDOM, Rule.RANDOM)
        builder.finish()
        mutant = builder.build()
        if best is None or fitness(mutant) < fitness(best):
            best = mutant

    if cfg.elitist_mutation and fitness(child) < fitness(best):
        return child
    return best


# ============================================================================
# Main loop
# ============================================================================

def _fittest(population: Sequence[Chromosome]) -> Chromosome:
    return min(population, key=fitness)


def evolve(e: int, cfg: GaConfig) -> GaResult:
    """
    Generational GA for exponent ``e``; deterministic given ``cfg.seed``.

    Each generation shuffles the parents, breeds ``population_size`` children
    (roulette selection, crossover, mutation of both children) and replaces the
    parents wholesale. The best chain ever seen is reported.
    """
    check_exponent(e)
    validate_config(cfg)
    started = time.perf_counter()
    rng = make_rng(cfg.seed)
    bound = lower_bound(e)
    size = cfg.population_size

    population = initial_population(e, cfg, rng)
    evaluations = len(population)
    best = _fittest(population)
    history = [fitness(best)]
    generations = 0

    while generations < cfg.max_generations and e > 2:
        if cfg.early_stop_at_lower_bound and fitness(best) == bound:
            logger.debug('Exponent %d reached its lower bound %d after %d generations', e, bound, generations)
            break
        generations += 1

        population = [population[k] for k in rng.permutation(size)]
        wheel = RouletteWheel(population)
        children: List[Chromosome] = []
        while len(children) < size:
            first, second = crossover(wheel.spin(rng), wheel.spin(rng), e, cfg, rng)
            children.append(mutate(first, e, cfg, rng))
            if len(children) < size:
                children.append(mutate(second, e, cfg, rng))

        population = children
        evaluations += len(children)
        generation_best = _fittest(population)
        if fitness(generation_best) < fitness(best):
            best = generation_best
        history.append(fitness(best))

    elapsed = time.perf_counter() - started
    logger.debug('GA for %d: length %d in %d generations (%.3fs, seed %d)',
                 e, fitness(best), generations, elapsed, cfg.seed)
    return GaResult(
        exponent=e,
        best=best,
        length=fitness(best),
        generations_run=generations,
        evaluations=evaluations,
        best_length_per_generation=tuple(history),
        seed=cfg.seed,
        elapsed_seconds=elapsed,
    )
