"""
Marshmallow Schemas for configuration validation and report serialization.

These schemas define the structure and validation rules for every config
mapping the CLI accepts and every report row the bench emits.
"""

from marshmallow import Schema, ValidationError, fields, post_load, validate, validates_schema

from .models import (
    MAX_EXPONENT,
    AccumulatedResult,
    BitSizeRow,
    CliConfig,
    GaConfig,
    Report,
    RunStats,
    SpecialExponentRow,
)

PROBABILITY_TOLERANCE = 1e-9

probability = validate.Range(min=0.0, max=1.0)


class BigInt(fields.Integer):
    """Unbounded integer; also loads decimal strings, as written by tools without 64-bit JSON ints."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return int(value)

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, str) and value.strip().isdigit():
            value = int(value.strip())
        return super()._deserialize(value, attr, data, **kwargs)


# ============================================================================
# Configuration Schemas
# ============================================================================

class GaConfigSchema(Schema):
    """Schema for GA parameters (config file, app config and CLI flags merged)."""
    population_size = fields.Int(validate=validate.Range(min=2))
    max_generations = fields.Int(validate=validate.Range(min=1))
    p_single = fields.Float(validate=probability)
    p_two = fields.Float(validate=probability)
    p_uniform = fields.Float(validate=probability)
    crossover_rate = fields.Float(validate=probability)
    mutation_rate = fields.Float(validate=probability)
    n_mutants = fields.Int(validate=validate.Range(min=1))
    p_double = fields.Float(validate=probability)
    p_add = fields.Float(validate=probability)
    p_random = fields.Float(validate=probability)
    early_stop_at_lower_bound = fields.Bool()
    elitist_mutation = fields.Bool()
    seed = BigInt(validate=validate.Range(min=0, max=MAX_EXPONENT))

    @validates_schema
    def validate_probability_sums(self, data, **kwargs):
        """Both probability triples must sum to one."""
        defaults = GaConfig()
        groups = {
            'p_uniform': ('p_single', 'p_two', 'p_uniform'),
            'p_random': ('p_double', 'p_add', 'p_random'),
        }
        for field_name, names in groups.items():
            total = sum(data.get(name, getattr(defaults, name)) for name in names)
            if abs(total - 1.0) > PROBABILITY_TOLERANCE:
                raise ValidationError(
                    f'{" + ".join(names)} must sum to 1 (got {total:.12g})',
                    field_name=field_name
                )

    @post_load
    def make_config(self, data, **kwargs):
        return GaConfig(**data)


class CliConfigSchema(Schema):
    """Schema for the full CLI configuration."""
    ga = fields.Nested(GaConfigSchema, required=True)
    workers = fields.Int(load_default=1, validate=validate.Range(min=1))
    output_format = fields.Str(load_default='json', validate=validate.OneOf(['json', 'csv']))
    output_path = fields.Str(load_default=None, allow_none=True)
    oracle_cache_path = fields.Str(load_default=None, allow_none=True)

    @post_load
    def make_config(self, data, **kwargs):
        return CliConfig(**data)


# ============================================================================
# Chain Schemas
# ============================================================================

class ViolationSchema(Schema):
    position = fields.Int()
    kind = fields.Function(lambda violation: violation.kind.value)
    detail = fields.Str()


class ValidationReportSchema(Schema):
    """Schema for `validate` output."""
    exponent = BigInt()
    valid = fields.Bool()
    additions = fields.Int()
    values = fields.List(BigInt())
    violations = fields.List(fields.Nested(ViolationSchema))


class RuleTagSchema(Schema):
    rule = fields.Function(lambda tag: tag.rule.value)
    action = fields.Function(lambda tag: tag.action.value)
    partner = fields.Int()


class ChromosomeSchema(Schema):
    values = fields.List(BigInt())
    rules = fields.List(fields.Nested(RuleTagSchema))


class GaResultSchema(Schema):
    """Schema for `ga --exponent` output; elapsed time is logged, not emitted."""
    exponent = BigInt()
    length = fields.Int()
    chain = fields.Function(lambda result: [int(v) for v in result.best.values])
    rules = fields.Function(lambda result: [tag.rule.value for tag in result.best.rules])
    best = fields.Nested(ChromosomeSchema)
    generations_run = fields.Int()
    evaluations = fields.Int()
    best_length_per_generation = fields.List(fields.Int())
    seed = BigInt()


# ============================================================================
# Report Row Schemas
# ============================================================================

class AccumulatedResultSchema(Schema):
    """Row of `bench table1` and `ga --range-max` accumulations."""
    method = fields.Str(required=True)
    range_max = fields.Int(required=True, validate=validate.Range(min=1))
    total = fields.Int(required=True)
    per_exponent = fields.List(fields.Int(), allow_none=True, load_default=None)
    seeds = fields.List(BigInt(), load_default=list)

    @post_load
    def make_row(self, data, **kwargs):
        per_exponent = data.get('per_exponent')
        return AccumulatedResult(
            method=data['method'],
            range_max=data['range_max'],
            total=data['total'],
            per_exponent=tuple(per_exponent) if per_exponent is not None else None,
            seeds=tuple(data.get('seeds') or ()),
        )


class RunStatsSchema(Schema):
    """Multi-run statistics row; averages carry two decimals."""
    method = fields.Str(required=True)
    range_max = fields.Int(required=True)
    best = fields.Int(required=True)
    worst = fields.Int(required=True)
    average = fields.Float(required=True)
    median = fields.Float(required=True)
    runs = fields.Int(required=True, validate=validate.Range(min=1))
    totals = fields.List(fields.Int(), load_default=list)

    @validates_schema
    def validate_order(self, data, **kwargs):
        if not data['best'] <= data['median'] <= data['worst']:
            raise ValidationError('best <= median <= worst does not hold', field_name='median')
        if not data['best'] <= data['average'] <= data['worst']:
            raise ValidationError('best <= average <= worst does not hold', field_name='average')

    @post_load
    def make_row(self, data, **kwargs):
        data['totals'] = tuple(data.get('totals') or ())
        return RunStats(**data)


class BitSizeRowSchema(Schema):
    """Average length per bit size and method."""
    bits = fields.Int(required=True, validate=validate.Range(min=2, max=64))
    method = fields.Str(required=True)
    samples = fields.Int(required=True)
    average = fields.Float(required=True)

    @post_load
    def make_row(self, data, **kwargs):
        return BitSizeRow(**data)


class SpecialExponentRowSchema(Schema):
    """Special exponent: printed-chain check and best GA chain."""
    exponent = BigInt(required=True)
    printed_additions = fields.Int(required=True)
    printed_valid = fields.Bool(required=True)
    printed_violations = fields.List(fields.Str(), load_default=list)
    best_length = fields.Int(required=True)
    best_chain = fields.List(BigInt(), required=True)
    seeds = fields.List(BigInt(), load_default=list)

    @post_load
    def make_row(self, data, **kwargs):
        for name in ('printed_violations', 'best_chain', 'seeds'):
            data[name] = tuple(data.get(name) or ())
        return SpecialExponentRow(**data)


ROW_SCHEMAS = {
    'table1': AccumulatedResultSchema,
    'table2': RunStatsSchema,
    'table3': BitSizeRowSchema,
    'table4': SpecialExponentRowSchema,
    'accumulated': AccumulatedResultSchema,
    'run_stats': RunStatsSchema,
}


class ReportSchema(Schema):
    """Top-level report: ``{meta: {...}, rows: [...]}``; the kind lives in meta."""
    meta = fields.Dict(required=True)
    rows = fields.List(fields.Dict(), required=True)

    @validates_schema
    def validate_kind(self, data, **kwargs):
        if 'kind' not in data['meta']:
            raise ValidationError('meta.kind is required', field_name='meta')

    @post_load
    def make_report(self, data, **kwargs):
        return Report(kind=data['meta']['kind'], meta=data['meta'], rows=data['rows'])
