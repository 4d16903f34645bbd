"""Domain types for two-team sequential selection contests.

A contest runs for a fixed number of rounds.  Every round each team commits
one of its previously unused players, both picks are revealed simultaneously,
and the committed pair plays a match that the row-side player wins with the
probability stored in the strength matrix.  Utilities are zero-sum and depend
only on how many rounds Team 1 ends up winning.

Everything on the solving path is exact: probabilities, utilities and game
values are `fractions.Fraction`, and no float is ever produced or consumed in
this package outside of the Monte Carlo sampler.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

#: Upper bound on players per team so subset keys fit comfortably in a pair of
#: machine-word bit sets and the class table stays desk-scale.
MAX_PLAYERS = 20

RationalLike = Union[Fraction, int, str]


class GameModelError(Exception):
    """Base error; ``code`` is a stable machine-readable category."""

    code = "ERROR"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ValidationError(GameModelError):
    """Malformed input: bad rationals, shapes, ranges, sizes or parameters."""

    code = "INVALID"


class BudgetExceeded(GameModelError):
    code = "BUDGET"


class CoverageError(GameModelError):
    code = "COVERAGE"


class TerminalClassError(GameModelError):
    code = "TERMINAL"


class RedundantPlayersError(GameModelError):
    code = "REDUNDANT"


class PreconditionError(GameModelError):
    code = "PRECOND"


def parse_rational(value: RationalLike) -> Fraction:
    """Parse an exact rational from a Fraction, an int, or a string.

    Strings may be fractions ("2/3"), integers ("4"), or decimal literals
    ("0.5", parsed exactly as 1/2).  Binary floats are refused: they would
    smuggle rounding into an otherwise exact pipeline.  Spell the value as a
    string instead.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError(f"not a rational: {value!r}", "PARSE")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot parse rational from {value!r}", "PARSE") from exc
    raise ValidationError(
        f"refusing inexact value {value!r}; write it as a string such as '1/3' or '0.5'",
        "PARSE",
    )


def format_rational(value: Fraction) -> str:
    """Render a rational as "a/b" (or a plain integer when b == 1)."""
    return str(value)


def player_label(team: int, index: int) -> str:
    """Human-facing one-based label: A1.. for Team 1, B1.. for Team 2."""
    return f"{'A' if team == 1 else 'B'}{index + 1}"


@dataclass(frozen=True)
class StrengthMatrix:
    """Win probabilities from Team 1's side.

    ``entries[i][j]`` is the probability that Team 1's player ``i`` beats
    Team 2's player ``j``; the complementary event is a win for player ``j``.
    Players are identified by zero-based row/column indices throughout the
    API; display labels are one-based (A1.., B1..).
    """

    entries: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[RationalLike]]) -> "StrengthMatrix":
        if not rows or not rows[0]:
            raise ValidationError(
                "strength matrix needs at least one row and one column", "SIZE"
            )
        width = len(rows[0])
        parsed: list[tuple[Fraction, ...]] = []
        for i, row in enumerate(rows):
            if len(row) != width:
                raise ValidationError(
                    f"P row {i + 1} has length {len(row)}, expected {width}", "SHAPE"
                )
            out = []
            for j, cell in enumerate(row):
                try:
                    out.append(parse_rational(cell))
                except ValidationError as exc:
                    raise ValidationError(f"P[{i + 1}][{j + 1}]: {exc}", "PARSE") from exc
            parsed.append(tuple(out))
        return StrengthMatrix(tuple(parsed))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def win_prob(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)


@dataclass(frozen=True)
class UtilityTable:
    """Team-1 utility indexed by its number of round wins.

    Team 2 receives the negation, so the game is zero-sum by construction.
    The table is stored extensionally (never as a formula) so that threshold
    utilities and custom tables share one representation.
    """

    values: tuple[Fraction, ...]

    @staticmethod
    def from_values(values: Sequence[RationalLike]) -> "UtilityTable":
        if not values:
            raise ValidationError("utility table must not be empty", "SHAPE")
        return UtilityTable(tuple(parse_rational(v) for v in values))

    @property
    def rounds(self) -> int:
        return len(self.values) - 1

    @property
    def antisymmetric(self) -> bool:
        """Whether U(t) + U(T - t) == 0 for every t.

        Reported, never enforced: threshold utilities deliberately break it
        while remaining zero-sum between the teams.
        """
        t_max = self.rounds
        return all(self.values[t] + self.values[t_max - t] == 0 for t in range(t_max + 1))

    @property
    def monotone(self) -> bool:
        return all(self.values[t + 1] >= self.values[t] for t in range(self.rounds))


def utility_ue(rounds: int) -> UtilityTable:
    """Expected-wins utility: winning t rounds is worth t - rounds/2."""
    if rounds < 1:
        raise ValidationError(f"round count must be >= 1, got {rounds}", "SIZE")
    half = Fraction(rounds, 2)
    return UtilityTable(tuple(Fraction(t) - half for t in range(rounds + 1)))


def utility_um(rounds: int) -> UtilityTable:
    """Majority utility: +1 for winning more rounds than the opponent, 0 for a
    tie, -1 otherwise."""
    if rounds < 1:
        raise ValidationError(f"round count must be >= 1, got {rounds}", "SIZE")
    half = Fraction(rounds, 2)
    values = []
    for t in range(rounds + 1):
        if t > half:
            values.append(Fraction(1))
        elif t == half:
            values.append(Fraction(0))
        else:
            values.append(Fraction(-1))
    return UtilityTable(tuple(values))


@dataclass(frozen=True)
class GameSpec:
    """A full contest: round count, strength matrix, utility table."""

    rounds: int
    strength: StrengthMatrix
    utility: UtilityTable

    @property
    def team1_size(self) -> int:
        return self.strength.rows

    @property
    def team2_size(self) -> int:
        return self.strength.cols


def make_spec(
    rounds: int,
    strength_rows: Sequence[Sequence[RationalLike]],
    utility: UtilityTable | str | Sequence[RationalLike],
) -> GameSpec:
    """Convenience constructor; ``utility`` may be a table, "UE"/"UM", or an
    explicit sequence of rounds+1 rationals."""
    strength = StrengthMatrix.from_rows(strength_rows)
    if isinstance(utility, UtilityTable):
        table = utility
    elif isinstance(utility, str):
        name = utility.strip().upper()
        if name == "UE":
            table = utility_ue(rounds)
        elif name == "UM":
            table = utility_um(rounds)
        else:
            raise ValidationError(f"unknown utility name {utility!r}", "PARSE")
    else:
        table = UtilityTable.from_values(utility)
    return GameSpec(rounds, strength, table)


def validate_spec(spec: GameSpec) -> GameSpec:
    """Check every structural invariant and return the spec unchanged.

    Idempotent.  Raises ValidationError with code RANGE (probability outside
    [0,1]), SIZE (round/player count trouble) or SHAPE (utility table length).
    The antisymmetry of the utility table is reported via
    ``spec.utility.antisymmetric``, never enforced.
    """
    m, n = spec.strength.rows, spec.strength.cols
    if spec.rounds < 1:
        raise ValidationError(f"T must be >= 1, got {spec.rounds}", "SIZE")
    if m > MAX_PLAYERS or n > MAX_PLAYERS:
        raise ValidationError(
            f"team sizes {m}x{n} exceed the {MAX_PLAYERS}-player limit", "SIZE"
        )
    if spec.rounds > min(m, n):
        raise ValidationError(
            f"T={spec.rounds} needs at least T players per team (have {m} and {n})",
            "SIZE",
        )
    for i, row in enumerate(spec.strength.entries):
        for j, p in enumerate(row):
            if p < 0 or p > 1:
                raise ValidationError(
                    f"P[{i + 1}][{j + 1}] = {p} outside [0, 1]", "RANGE"
                )
    if spec.utility.rounds != spec.rounds:
        raise ValidationError(
            f"utility table has {spec.utility.rounds + 1} entries, expected "
            f"{spec.rounds + 1}",
            "SHAPE",
        )
    return spec


class HistoryClassKey(NamedTuple):
    """Equivalence class of histories: used-player sets plus Team-1 wins.

    Player sets are bit masks (bit i set = player i already played, indices
    zero-based).  The number of finished rounds is the popcount of either
    mask; it is derived, never stored.
    """

    played1: int
    played2: int
    wins: int

    @property
    def round_index(self) -> int:
        return self.played1.bit_count()


ROOT_CLASS = HistoryClassKey(0, 0, 0)


def unplayed(mask: int, size: int) -> list[int]:
    """Ascending indices of the players not yet used."""
    return [i for i in range(size) if not (mask >> i) & 1]


def mask_of(players: Iterable[int]) -> int:
    out = 0
    for p in players:
        out |= 1 << p
    return out


@dataclass(frozen=True)
class BehavioralStrategy:
    """Class-based mixed selection rule.

    Maps each history class where the team moves to a probability
    distribution over that team's unused players.  Weights are exact, must be
    nonnegative, and must sum to one wherever the strategy is queried.
    """

    team: int
    moves: Mapping[HistoryClassKey, Mapping[int, Fraction]]


@dataclass(frozen=True)
class PureAdaptiveStrategy:
    """Deterministic selection rule.

    Defined on the history classes consistent with its own earlier picks;
    this is the enumeration unit for brute-force verification.
    """

    team: int
    moves: Mapping[HistoryClassKey, int]


# ---------------------------------------------------------------------------
# Spec file format: {"T": int, "P": [[rationals]], "U": "UE"|"UM"|[rationals]}
# Rationals may be strings ("1/3", "0.5"), integers, or JSON decimal literals
# (parsed exactly, never through a binary float).
# ---------------------------------------------------------------------------

def document_from_spec(spec: GameSpec) -> dict:
    """Serializable document; rationals rendered as exact strings."""
    return {
        "T": spec.rounds,
        "P": [[format_rational(p) for p in row] for row in spec.strength.entries],
        "U": [format_rational(u) for u in spec.utility.values],
    }


def spec_from_document(doc: Mapping) -> GameSpec:
    if not isinstance(doc, Mapping):
        raise ValidationError("spec document must be a JSON object", "SHAPE")
    for field in ("T", "P", "U"):
        if field not in doc:
            raise ValidationError(f"spec document is missing field {field!r}", "SHAPE")
    rounds = doc["T"]
    if not isinstance(rounds, int) or isinstance(rounds, bool):
        raise ValidationError(f"field T must be an integer, got {rounds!r}", "SHAPE")
    raw_p = doc["P"]
    if not isinstance(raw_p, Sequence) or isinstance(raw_p, (str, bytes)):
        raise ValidationError("field P must be an array of arrays", "SHAPE")
    raw_u = doc["U"]
    if isinstance(raw_u, str):
        utility: UtilityTable | Sequence = raw_u
    elif isinstance(raw_u, Sequence):
        if len(raw_u) != rounds + 1:
            raise ValidationError(
                f"field U has {len(raw_u)} entries, expected T+1 = {rounds + 1}",
                "SHAPE",
            )
        utility = raw_u
    else:
        raise ValidationError("field U must be 'UE', 'UM', or an array", "SHAPE")
    return make_spec(rounds, raw_p, utility)


def loads_spec(text: str) -> GameSpec:
    """Parse a UTF-8 JSON spec document; decimal literals stay exact."""
    try:
        doc = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}", "PARSE") from exc
    return spec_from_document(doc)


def dumps_spec(spec: GameSpec) -> str:
    return json.dumps(document_from_spec(spec), indent=2)


def load_spec(path: str) -> GameSpec:
    with open(path, encoding="utf-8") as handle:
        return loads_spec(handle.read())
