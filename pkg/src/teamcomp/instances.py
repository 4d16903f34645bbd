"""Built-in benchmark contests, addressable by the CLI's ``--example`` names.

These are the regression fixtures the acceptance and verification suites
script against: a three-card suit-matching game, two small roster-mismatch
games where spare or even always-losing players change the value, and two
scalable identity-ladder families used for the recruiting analysis.
"""

from __future__ import annotations

from .model import GameSpec, ValidationError, make_spec


def card_game() -> GameSpec:
    """Three-round suit-matching card duel.

    Each side holds one heart and two spades; the row side wins a round when
    suits match.  Majority scoring.
    """
    return make_spec(3, [[1, 0, 0], [0, 1, 1], [0, 1, 1]], "UM")


def _ex1() -> GameSpec:
    # Two rounds, three defenders against two attackers; the extra defender
    # makes plain uniform play strictly suboptimal for the two-player side.
    # (At T=2 the expected-wins and majority tables coincide.)
    return make_spec(2, [[0, 0, 1], [1, 1, 0]], "UE")


def _ex2() -> GameSpec:
    # Two rounds, equal rosters of three, one all-losing row player; dropping
    # that player hands the opponent a forced sweep.
    return make_spec(2, [[1, 0, 0], [0, 1, 0], [0, 0, 0]], "UE")


def _ex3(utility: str) -> GameSpec:
    # Three rounds, identity-pattern specialists plus one all-losing spare.
    # The spare is worthless under expected-wins scoring yet worth 2/3 of a
    # point under majority scoring.
    return make_spec(
        3, [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0]], utility
    )


def _identity_ladder(rounds: int, extra_cols: int, utility: str) -> GameSpec:
    cols = rounds + extra_cols
    rows = [[1 if i == j else 0 for j in range(cols)] for i in range(rounds)]
    return make_spec(rounds, rows, utility)


def _ex4(rounds: int) -> GameSpec:
    # Identity ladder with T-1 unbeatable opposing spares; expected-wins
    # scoring.  The stock roster is pinned at the floor until it recruits
    # enough always-losing decoys.
    if rounds < 1:
        raise ValidationError(f"ex4 needs T >= 1, got {rounds}", "SIZE")
    return _identity_ladder(rounds, rounds - 1, "UE")


def _ex5(rounds: int) -> GameSpec:
    # Identity ladder with floor(T/2) unbeatable opposing spares; majority
    # scoring.
    if rounds < 1:
        raise ValidationError(f"ex5 needs T >= 1, got {rounds}", "SIZE")
    return _identity_ladder(rounds, rounds // 2, "UM")


EXAMPLE_NAMES = ("card", "ex1", "ex2", "ex3", "ex4:T", "ex5:T")


def named_instance(name: str, utility: str | None = None) -> GameSpec:
    """Resolve an ``--example`` name.

    ``ex4:T``/``ex5:T`` take the round count after the colon; ``ex3`` accepts
    an optional utility override ("UE" or "UM", default "UM").
    """
    text = name.strip().lower()
    if text == "card":
        return card_game()
    if text == "ex1":
        return _ex1()
    if text == "ex2":
        return _ex2()
    if text == "ex3":
        return _ex3(utility or "UM")
    if text.startswith("ex4:") or text.startswith("ex5:"):
        head, _, tail = text.partition(":")
        try:
            rounds = int(tail)
        except ValueError:
            raise ValidationError(f"bad round count in example name {name!r}", "PARSE")
        return _ex4(rounds) if head == "ex4" else _ex5(rounds)
    raise ValidationError(
        f"unknown example {name!r}; choose from {', '.join(EXAMPLE_NAMES)}", "PARSE"
    )
