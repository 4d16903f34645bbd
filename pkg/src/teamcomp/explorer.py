"""Seeded instance generation and empirical search over recruiting gains.

The search asks how much a team can gain by recruiting always-losing players,
the quantity behind the open bound of at most 2/3 extra utility under
majority scoring and at most 1 under expected-wins scoring.  That bound is a
hypothesis under test here: sweeps report observations as "consistent with"
the bound or as counterexample candidates, never as a proof.

Reproducibility: every instance draws from ``random.Random(f"{seed}:{index}")``.
String seeding is stable across CPython versions, and the per-index split
makes the stream insensitive to how many instances run or in which order.
"""

from __future__ import annotations

import hashlib
import io
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .analysis import add_dominated
from .model import (
    GameSpec,
    StrengthMatrix,
    ValidationError,
    document_from_spec,
    format_rational,
    make_spec,
    utility_ue,
    utility_um,
    validate_spec,
)
from .solver import DEFAULT_CLASS_BUDGET, solve

_ZERO = Fraction(0)


@lru_cache(maxsize=None)
def rationals_up_to_denominator(bound: int) -> tuple[Fraction, ...]:
    """All distinct rationals in [0, 1] with denominator at most ``bound``,
    ascending."""
    if bound < 1:
        raise ValidationError(f"denominator bound must be >= 1, got {bound}", "SIZE")
    values = {Fraction(num, den) for den in range(1, bound + 1) for num in range(den + 1)}
    return tuple(sorted(values))


def random_probability(rng: random.Random, bound: int) -> Fraction:
    """Uniform over the distinct rationals in [0, 1] with denominator <= bound."""
    return rng.choice(rationals_up_to_denominator(bound))


def random_strength_rows(
    rng: random.Random, team1_size: int, team2_size: int, bound: int
) -> list[list[Fraction]]:
    return [
        [random_probability(rng, bound) for _ in range(team2_size)]
        for _ in range(team1_size)
    ]


def random_square_spec(
    rng: random.Random, rounds: int, bound: int, utility: str
) -> GameSpec:
    """Random contest with no spare players on either side."""
    return make_spec(rounds, random_strength_rows(rng, rounds, rounds, bound), utility)


def random_transitive_spec(
    rng: random.Random,
    rounds: int,
    team1_size: int,
    team2_size: int,
    bound: int,
    utility: str,
) -> GameSpec:
    """Random contest where both teams form strength chains.

    Sorting each column descending chains Team 1's rows; then sorting each
    row descending chains Team 2's columns while leaving the rows chained
    (sorting rows of a column-sorted matrix preserves the column order).
    """
    rows = random_strength_rows(rng, team1_size, team2_size, bound)
    for j in range(team2_size):
        column = sorted((rows[i][j] for i in range(team1_size)), reverse=True)
        for i in range(team1_size):
            rows[i][j] = column[i]
    rows = [sorted(row, reverse=True) for row in rows]
    return make_spec(rounds, rows, utility)


def random_weak_tail_spec(
    rng: random.Random, rounds: int, team1_size: int, bound: int, utility: str = "UE"
) -> GameSpec:
    """Random contest where Team 1's players beyond the first T are weaker
    than every starter, and Team 2 has exactly T players."""
    if team1_size <= rounds:
        raise ValidationError("weak-tail specs need spare Team-1 players", "SIZE")
    pool = rationals_up_to_denominator(bound)
    rows = random_strength_rows(rng, rounds, rounds, bound)
    for _ in range(rounds, team1_size):
        tail = []
        for j in range(rounds):
            ceiling = min(rows[i][j] for i in range(rounds))
            tail.append(rng.choice([q for q in pool if q <= ceiling]))
        rows.append(tail)
    return make_spec(rounds, rows, utility)


def _permutation_pattern_rows(
    rng: random.Random, team1_size: int, team2_size: int
) -> list[list[Fraction]]:
    # 0/1 specialist matrix: each row player beats exactly one distinct
    # opponent (when columns suffice): the shape where recruiting gains peak.
    one = Fraction(1)
    rows = [[_ZERO] * team2_size for _ in range(team1_size)]
    targets = list(range(team2_size))
    rng.shuffle(targets)
    for i in range(team1_size):
        if i < team2_size:
            rows[i][targets[i]] = one
    return rows


@dataclass(frozen=True)
class SearchConfig:
    """Sweep parameters; the whole record stream is a pure function of these.

    ``m_range`` bounds both team sizes (clamped below by the round count).
    ``max_recruits`` of None means the sharp counts that are never worth
    exceeding: T-1 recruits under expected-wins scoring, floor(T/2) under
    majority scoring.
    """

    seed: int
    instances: int
    t_range: tuple[int, int] = (2, 3)
    m_range: tuple[int, int] = (2, 5)
    denominator_bound: int = 4
    utility: str = "UM"
    max_recruits: int | None = None
    structured_share: Fraction = Fraction(1, 4)

    def validate(self) -> "SearchConfig":
        if self.instances < 1:
            raise ValidationError("need at least one instance", "SIZE")
        if self.t_range[0] > self.t_range[1] or self.t_range[0] < 1:
            raise ValidationError(f"bad round range {self.t_range}", "SIZE")
        if self.m_range[0] > self.m_range[1]:
            raise ValidationError(f"bad size range {self.m_range}", "SIZE")
        if self.denominator_bound < 1:
            raise ValidationError("denominator bound must be >= 1", "SIZE")
        if self.utility.upper() not in ("UE", "UM"):
            raise ValidationError(f"utility must be UE or UM, got {self.utility}", "PARSE")
        if not 0 <= self.structured_share <= 1:
            raise ValidationError("structured share must be in [0, 1]", "RANGE")
        return self


@dataclass(frozen=True)
class GainRecord:
    """Outcome of one recruiting search: base value, best value over recruit
    counts, and the smallest count achieving the best."""

    index: int
    digest: str
    rounds: int
    team1_size: int
    team2_size: int
    utility: str
    recruits_used: int
    base_value: Fraction
    best_value: Fraction

    @property
    def gain(self) -> Fraction:
        return self.best_value - self.base_value


def spec_digest(spec: GameSpec) -> str:
    payload = json.dumps(document_from_spec(spec), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:12]


def _instance_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{index}")


def generate_instance(config: SearchConfig, index: int) -> GameSpec:
    """Deterministic instance number ``index`` of the configured stream."""
    config.validate()
    if not 0 <= index < config.instances:
        raise ValidationError(f"index {index} outside 0..{config.instances - 1}", "SIZE")
    rng = _instance_rng(config.seed, index)
    rounds = rng.randint(*config.t_range)
    lo = max(config.m_range[0], rounds)
    hi = max(config.m_range[1], lo)
    team1_size = rng.randint(lo, hi)
    team2_size = rng.randint(lo, hi)
    structured = rng.random() < float(config.structured_share)
    if structured:
        rows = _permutation_pattern_rows(rng, team1_size, team2_size)
    else:
        rows = random_strength_rows(rng, team1_size, team2_size, config.denominator_bound)
    utility = (
        utility_ue(rounds) if config.utility.upper() == "UE" else utility_um(rounds)
    )
    spec = GameSpec(rounds, StrengthMatrix(tuple(tuple(r) for r in rows)), utility)
    return validate_spec(spec)


def default_recruit_cap(rounds: int, utility: str) -> int:
    return rounds - 1 if utility.upper() == "UE" else rounds // 2


def max_gain(
    spec: GameSpec,
    max_recruits: int,
    *,
    index: int = 0,
    utility_name: str = "",
    class_budget: int = DEFAULT_CLASS_BUDGET,
) -> GainRecord:
    """Solve the contest with 0..max_recruits extra always-losing players and
    report the best value with the smallest recruit count achieving it."""
    validate_spec(spec)
    base = solve(spec, class_budget=class_budget).root_value
    best = base
    best_count = 0
    for count in range(1, max_recruits + 1):
        value = solve(add_dominated(spec, count), class_budget=class_budget).root_value
        if value > best:
            best = value
            best_count = count
    return GainRecord(
        index=index,
        digest=spec_digest(spec),
        rounds=spec.rounds,
        team1_size=spec.team1_size,
        team2_size=spec.team2_size,
        utility=utility_name,
        recruits_used=best_count,
        base_value=base,
        best_value=best,
    )


@dataclass(frozen=True)
class SweepSummary:
    config: SearchConfig
    records: tuple[GainRecord, ...]
    skipped: tuple[int, ...]
    max_gain: Fraction
    witness_index: int | None
    witness_digest: str | None
    bound: Fraction

    @property
    def exceeds_bound(self) -> bool:
        return self.max_gain > self.bound

    def to_document(self) -> dict:
        status = (
            "counterexample candidate: observed gain exceeds the conjectured bound"
            if self.exceeds_bound
            else "consistent with the conjectured bound"
        )
        return {
            "seed": self.config.seed,
            "instances": self.config.instances,
            "utility": self.config.utility.upper(),
            "max_gain": format_rational(self.max_gain),
            "conjectured_bound": format_rational(self.bound),
            "status": status,
            "witness_index": self.witness_index,
            "witness_digest": self.witness_digest,
            "skipped": list(self.skipped),
        }


def sweep(config: SearchConfig) -> SweepSummary:
    """Run the recruiting-gain search over the configured instance stream.

    An observation above the bound is surfaced prominently as a
    counterexample candidate; it is a finding, never an error.  Instances
    whose state space blows the solve budget are recorded and skipped.
    """
    config.validate()
    utility = config.utility.upper()
    records: list[GainRecord] = []
    skipped: list[int] = []
    for index in range(config.instances):
        spec = generate_instance(config, index)
        cap = (
            config.max_recruits
            if config.max_recruits is not None
            else default_recruit_cap(spec.rounds, utility)
        )
        try:
            records.append(
                max_gain(spec, cap, index=index, utility_name=utility)
            )
        except Exception as exc:  # per-instance budget/size failures
            if getattr(exc, "code", "") in ("BUDGET", "SIZE"):
                skipped.append(index)
            else:
                raise
    best = _ZERO
    witness: GainRecord | None = None
    for record in records:
        if record.gain > best:
            best = record.gain
            witness = record
    bound = Fraction(1) if utility == "UE" else Fraction(2, 3)
    return SweepSummary(
        config=config,
        records=tuple(records),
        skipped=tuple(skipped),
        max_gain=best,
        witness_index=witness.index if witness else None,
        witness_digest=witness.digest if witness else None,
        bound=bound,
    )


CSV_HEADER = "index,T,m,n,utility,recruits_used,base_value,best_value,gain"


def records_to_csv(records: Iterable[GainRecord]) -> str:
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for r in records:
        out.write(
            f"{r.index},{r.rounds},{r.team1_size},{r.team2_size},{r.utility},"
            f"{r.recruits_used},{format_rational(r.base_value)},"
            f"{format_rational(r.best_value)},{format_rational(r.gain)}\n"
        )
    return out.getvalue()
