"""Backward-induction solver over history classes.

Histories that used the same player sets and produced the same number of
Team-1 wins share a value, so states are (played1, played2, wins) triples
rather than raw move sequences.  Levels run from the terminal round downward;
each non-terminal class is summarized by one small zero-sum matrix game whose
cells blend the two successor values by the match-win probability, and the
equilibrium mixtures of those stage games assemble the behavioral strategies.

All class tables are computed in full, including classes no equilibrium play
reaches, because best-response evaluation needs off-path values too.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, Mapping, Union

from .matrix import MatrixGame, solve_matrix
from .model import (
    BehavioralStrategy,
    BudgetExceeded,
    CoverageError,
    GameSpec,
    HistoryClassKey,
    PureAdaptiveStrategy,
    RedundantPlayersError,
    ROOT_CLASS,
    TerminalClassError,
    ValidationError,
    player_label,
    unplayed,
    validate_spec,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)

#: Abort threshold on the number of history classes a single solve may touch.
DEFAULT_CLASS_BUDGET = 50_000_000

#: Abort threshold on the number of pure adaptive strategies an enumeration
#: may yield.
DEFAULT_ENUM_BUDGET = 200_000

Strategy = Union[BehavioralStrategy, PureAdaptiveStrategy]


def class_count(team1_size: int, team2_size: int, rounds: int) -> int:
    """Number of history classes the solver will evaluate."""
    return sum(
        comb(team1_size, k) * comb(team2_size, k) * (k + 1) for k in range(rounds + 1)
    )


def _masks(size: int, k: int) -> Iterator[tuple[int, tuple[int, ...]]]:
    for combo in itertools.combinations(range(size), k):
        mask = 0
        for i in combo:
            mask |= 1 << i
        yield mask, combo


@dataclass(frozen=True)
class SolveResult:
    """Complete equilibrium summary of one contest.

    ``value_table`` covers every class; ``strategy1``/``strategy2`` hold one
    equilibrium mixture per decision class (an equilibrium, not the unique
    one; ties are resolved by the deterministic pivot rule).
    """

    spec: GameSpec
    value_table: Mapping[HistoryClassKey, Fraction]
    strategy1: BehavioralStrategy
    strategy2: BehavioralStrategy
    root_value: Fraction


def stage_matrix(
    spec: GameSpec,
    values: Mapping[HistoryClassKey, Fraction],
    key: HistoryClassKey,
) -> MatrixGame:
    """One-round matrix game at ``key`` given the next level's values.

    Rows are Team 1's unused players in ascending index order, columns Team
    2's.  The (i, j) cell is the win-value weighted by the match probability
    plus the loss-value weighted by its complement.
    """
    m, n = spec.team1_size, spec.team2_size
    xm, ym, wins = key
    k = key.round_index
    if k >= spec.rounds:
        raise TerminalClassError(f"class at round {k} of {spec.rounds} has no stage game")
    strength = spec.strength.entries
    row_players = unplayed(xm, m)
    col_players = unplayed(ym, n)
    payoff = []
    for i in row_players:
        xm_next = xm | (1 << i)
        row = []
        for j in col_players:
            ym_next = ym | (1 << j)
            p = strength[i][j]
            if p == 1:
                cell = values[(xm_next, ym_next, wins + 1)]
            elif p == 0:
                cell = values[(xm_next, ym_next, wins)]
            else:
                cell = p * values[(xm_next, ym_next, wins + 1)] + (1 - p) * values[
                    (xm_next, ym_next, wins)
                ]
            row.append(cell)
        payoff.append(tuple(row))
    return MatrixGame(tuple(payoff))


def solve(spec: GameSpec, *, class_budget: int = DEFAULT_CLASS_BUDGET) -> SolveResult:
    """Equilibrium values and strategies for every history class.

    Deterministic: class iteration order and every stage-game pivot are
    fixed, so identical specs produce identical tables.
    """
    validate_spec(spec)
    m, n, rounds = spec.team1_size, spec.team2_size, spec.rounds
    total = class_count(m, n, rounds)
    if total > class_budget:
        raise BudgetExceeded(
            f"{total} history classes exceed the budget of {class_budget}"
        )

    values: dict[HistoryClassKey, Fraction] = {}
    moves1: dict[HistoryClassKey, dict[int, Fraction]] = {}
    moves2: dict[HistoryClassKey, dict[int, Fraction]] = {}
    utility = spec.utility.values

    for xmask, _ in _masks(m, rounds):
        for ymask, _ in _masks(n, rounds):
            for wins in range(rounds + 1):
                values[HistoryClassKey(xmask, ymask, wins)] = utility[wins]

    for k in range(rounds - 1, -1, -1):
        for xmask, _ in _masks(m, k):
            row_players = unplayed(xmask, m)
            for ymask, _ in _masks(n, k):
                col_players = unplayed(ymask, n)
                for wins in range(k + 1):
                    key = HistoryClassKey(xmask, ymask, wins)
                    game = stage_matrix(spec, values, key)
                    solution = solve_matrix(game)
                    values[key] = solution.value
                    moves1[key] = dict(zip(row_players, solution.row_strategy))
                    moves2[key] = dict(zip(col_players, solution.col_strategy))

    return SolveResult(
        spec=spec,
        value_table=values,
        strategy1=BehavioralStrategy(1, moves1),
        strategy2=BehavioralStrategy(2, moves2),
        root_value=values[ROOT_CLASS],
    )


def uniform_strategy(spec: GameSpec, team: int) -> BehavioralStrategy:
    """Pick uniformly among the team's unused players at every class."""
    validate_spec(spec)
    _require_team(team)
    m, n, rounds = spec.team1_size, spec.team2_size, spec.rounds
    own_size = m if team == 1 else n
    moves: dict[HistoryClassKey, dict[int, Fraction]] = {}
    for k in range(rounds):
        weight = Fraction(1, own_size - k)
        for xmask, _ in _masks(m, k):
            for ymask, _ in _masks(n, k):
                own_mask = xmask if team == 1 else ymask
                dist = {i: weight for i in unplayed(own_mask, own_size)}
                for wins in range(k + 1):
                    moves[HistoryClassKey(xmask, ymask, wins)] = dist
    return BehavioralStrategy(team, moves)


def _require_team(team: int) -> None:
    if team not in (1, 2):
        raise ValidationError(f"team must be 1 or 2, got {team}", "PARSE")


def _distribution_at(
    strategy: Strategy,
    key: HistoryClassKey,
    own_mask: int,
    own_size: int,
) -> dict[int, Fraction]:
    """Strategy's move distribution at a class, validated against the
    unplayed-player set."""
    entry = strategy.moves.get(key)
    if entry is None:
        raise CoverageError(
            f"strategy for team {strategy.team} has no move at class "
            f"(played1={key.played1:b}, played2={key.played2:b}, wins={key.wins})"
        )
    if isinstance(strategy, PureAdaptiveStrategy) or isinstance(entry, int):
        player = int(entry)
        if not (0 <= player < own_size) or (own_mask >> player) & 1:
            raise CoverageError(
                f"strategy picks unavailable player {player_label(strategy.team, player)}"
            )
        return {player: _ONE}
    total = _ZERO
    for player, weight in entry.items():
        if weight < 0:
            raise CoverageError("strategy weights must be nonnegative")
        if weight > 0 and (not (0 <= player < own_size) or (own_mask >> player) & 1):
            raise CoverageError(
                f"strategy puts weight on unavailable player "
                f"{player_label(strategy.team, player)}"
            )
        total += weight
    if total != 1:
        raise CoverageError(f"strategy weights sum to {total}, expected 1")
    return {p: w for p, w in entry.items() if w > 0}


def evaluate_fixed(spec: GameSpec, fixed: Strategy) -> Fraction:
    """Team-1 value when ``fixed``'s team is frozen and the other team plays a
    best response.

    Backward induction over exactly the classes reachable when the opponent
    plays arbitrarily; raises CoverageError if the fixed strategy is silent or
    invalid at any such class.
    """
    validate_spec(spec)
    _require_team(fixed.team)
    m, n, rounds = spec.team1_size, spec.team2_size, spec.rounds
    strength = spec.strength.entries
    fixed_is_team1 = fixed.team == 1

    levels: list[set[HistoryClassKey]] = [{ROOT_CLASS}]
    dists: dict[HistoryClassKey, dict[int, Fraction]] = {}
    for k in range(rounds):
        frontier: set[HistoryClassKey] = set()
        for key in levels[k]:
            xm, ym, wins = key
            own_mask, own_size = (xm, m) if fixed_is_team1 else (ym, n)
            dist = _distribution_at(fixed, key, own_mask, own_size)
            dists[key] = dist
            free_mask, free_size = (ym, n) if fixed_is_team1 else (xm, m)
            free_players = unplayed(free_mask, free_size)
            for fixed_player in dist:
                for free_player in free_players:
                    if fixed_is_team1:
                        i, j = fixed_player, free_player
                    else:
                        i, j = free_player, fixed_player
                    p = strength[i][j]
                    xm2, ym2 = xm | (1 << i), ym | (1 << j)
                    if p > 0:
                        frontier.add(HistoryClassKey(xm2, ym2, wins + 1))
                    if p < 1:
                        frontier.add(HistoryClassKey(xm2, ym2, wins))
        levels.append(frontier)

    utility = spec.utility.values
    best: dict[HistoryClassKey, Fraction] = {
        key: utility[key.wins] for key in levels[rounds]
    }
    for k in range(rounds - 1, -1, -1):
        for key in levels[k]:
            xm, ym, wins = key
            dist = dists[key]
            free_mask, free_size = (ym, n) if fixed_is_team1 else (xm, m)
            candidates = []
            for free_player in unplayed(free_mask, free_size):
                expected = _ZERO
                for fixed_player, weight in dist.items():
                    if fixed_is_team1:
                        i, j = fixed_player, free_player
                    else:
                        i, j = free_player, fixed_player
                    p = strength[i][j]
                    xm2, ym2 = xm | (1 << i), ym | (1 << j)
                    branch = _ZERO
                    if p > 0:
                        branch += p * best[(xm2, ym2, wins + 1)]
                    if p < 1:
                        branch += (1 - p) * best[(xm2, ym2, wins)]
                    expected += weight * branch
                candidates.append(expected)
            # The free team optimizes Team-1 utility in its own direction.
            best[key] = min(candidates) if fixed_is_team1 else max(candidates)
    return best[ROOT_CLASS]


def matching_distribution(
    spec: GameSpec, strategy1: Strategy, strategy2: Strategy
) -> dict[tuple[int, ...], Fraction]:
    """Exact distribution over complete player matchings.

    Requires no redundant players (team sizes equal to the round count) so a
    finished contest always pairs everyone.  Keys are tuples where position i
    holds the Team-2 player matched with Team-1 player i; probabilities are
    marginalized over match outcomes and sum to one.
    """
    validate_spec(spec)
    m, n, rounds = spec.team1_size, spec.team2_size, spec.rounds
    if m != rounds or n != rounds:
        raise RedundantPlayersError(
            f"matchings need team sizes equal to T (have {m} and {n}, T={rounds})"
        )
    if strategy1.team != 1 or strategy2.team != 2:
        raise ValidationError("pass team 1's strategy first and team 2's second", "PARSE")
    strength = spec.strength.entries

    states: dict[tuple[tuple[tuple[int, int], ...], int], Fraction] = {((), 0): _ONE}
    for _ in range(rounds):
        nxt: dict[tuple[tuple[tuple[int, int], ...], int], Fraction] = {}
        for (pairs, wins), prob in states.items():
            xm = 0
            ym = 0
            for i, j in pairs:
                xm |= 1 << i
                ym |= 1 << j
            key = HistoryClassKey(xm, ym, wins)
            dist1 = _distribution_at(strategy1, key, xm, m)
            dist2 = _distribution_at(strategy2, key, ym, n)
            for i, w1 in dist1.items():
                for j, w2 in dist2.items():
                    move_prob = prob * w1 * w2
                    pairs_next = tuple(sorted(pairs + ((i, j),)))
                    p = strength[i][j]
                    if p > 0:
                        state = (pairs_next, wins + 1)
                        nxt[state] = nxt.get(state, _ZERO) + move_prob * p
                    if p < 1:
                        state = (pairs_next, wins)
                        nxt[state] = nxt.get(state, _ZERO) + move_prob * (1 - p)
        states = nxt

    result: dict[tuple[int, ...], Fraction] = {}
    for (pairs, _wins), prob in states.items():
        matching = tuple(j for _i, j in pairs)  # pairs already sorted by i
        result[matching] = result.get(matching, _ZERO) + prob
    return {key: result[key] for key in sorted(result)}


def meeting_probabilities(
    spec: GameSpec, strategy1: Strategy, strategy2: Strategy
) -> tuple[tuple[Fraction, ...], ...]:
    """Exact probability grid of player pairs being committed the same round.

    Entry (i, j) is the chance Team 1's player i and Team 2's player j meet
    at some point of the contest under the two strategies.
    """
    validate_spec(spec)
    if strategy1.team != 1 or strategy2.team != 2:
        raise ValidationError("pass team 1's strategy first and team 2's second", "PARSE")
    m, n, rounds = spec.team1_size, spec.team2_size, spec.rounds
    strength = spec.strength.entries
    grid = [[_ZERO] * n for _ in range(m)]

    states: dict[HistoryClassKey, Fraction] = {ROOT_CLASS: _ONE}
    for _ in range(rounds):
        nxt: dict[HistoryClassKey, Fraction] = {}
        for key, prob in states.items():
            xm, ym, wins = key
            dist1 = _distribution_at(strategy1, key, xm, m)
            dist2 = _distribution_at(strategy2, key, ym, n)
            for i, w1 in dist1.items():
                for j, w2 in dist2.items():
                    move_prob = prob * w1 * w2
                    grid[i][j] += move_prob
                    xm2, ym2 = xm | (1 << i), ym | (1 << j)
                    p = strength[i][j]
                    if p > 0:
                        state = HistoryClassKey(xm2, ym2, wins + 1)
                        nxt[state] = nxt.get(state, _ZERO) + move_prob * p
                    if p < 1:
                        state = HistoryClassKey(xm2, ym2, wins)
                        nxt[state] = nxt.get(state, _ZERO) + move_prob * (1 - p)
        states = nxt
    return tuple(tuple(row) for row in grid)


def enumerate_pure_strategies(
    spec: GameSpec, team: int, *, budget: int = DEFAULT_ENUM_BUDGET
) -> Iterator[PureAdaptiveStrategy]:
    """Yield every realization-distinct pure adaptive strategy once.

    A strategy assigns one unused player to each class consistent with its
    own earlier picks (the opponent's moves and the match outcomes branch
    freely).  Two assignments that differ only off their own play path would
    play identically, so they are not enumerated twice.  Raises
    BudgetExceeded once more than ``budget`` strategies would be produced.
    """
    validate_spec(spec)
    _require_team(team)
    m, n, rounds = spec.team1_size, spec.team2_size, spec.rounds
    own_size = m if team == 1 else n
    opp_size = n if team == 1 else m
    strength = spec.strength.entries
    produced = 0

    def children(key: HistoryClassKey, choice: int) -> set[HistoryClassKey]:
        xm, ym, wins = key
        kids: set[HistoryClassKey] = set()
        opp_mask = ym if team == 1 else xm
        for opp in unplayed(opp_mask, opp_size):
            if team == 1:
                i, j = choice, opp
            else:
                i, j = opp, choice
            p = strength[i][j]
            xm2, ym2 = xm | (1 << i), ym | (1 << j)
            if p > 0:
                kids.add(HistoryClassKey(xm2, ym2, wins + 1))
            if p < 1:
                kids.add(HistoryClassKey(xm2, ym2, wins))
        return kids

    def expand(
        frontier: tuple[HistoryClassKey, ...],
        level: int,
        assignment: dict[HistoryClassKey, int],
    ) -> Iterator[PureAdaptiveStrategy]:
        nonlocal produced
        option_lists = []
        for key in frontier:
            own_mask = key.played1 if team == 1 else key.played2
            option_lists.append(unplayed(own_mask, own_size))
        for combo in itertools.product(*option_lists):
            for key, choice in zip(frontier, combo):
                assignment[key] = choice
            if level + 1 == rounds:
                produced += 1
                if produced > budget:
                    raise BudgetExceeded(
                        f"pure strategy enumeration exceeds the budget of {budget}"
                    )
                yield PureAdaptiveStrategy(team, dict(assignment))
            else:
                frontier_next: set[HistoryClassKey] = set()
                for key, choice in zip(frontier, combo):
                    frontier_next |= children(key, choice)
                yield from expand(tuple(sorted(frontier_next)), level + 1, assignment)
            for key in frontier:
                del assignment[key]

    yield from expand((ROOT_CLASS,), 0, {})


def max_meeting_probability(
    spec: GameSpec, row_player: int, col_player: int, *, maximizer: int = 1
) -> Fraction:
    """Largest achievable probability that two given players meet.

    The maximizing team picks to make the meeting happen; the other team
    selects uniformly among its unused players.  Computed by backward
    induction over played-set pairs, so the bound covers every strategy of
    the maximizing team at once, adaptive or mixed alike: win counts
    carry no information about the meeting event, so conditioning on them
    cannot help.
    """
    validate_spec(spec)
    _require_team(maximizer)
    m, n, rounds = spec.team1_size, spec.team2_size, spec.rounds
    if not (0 <= row_player < m and 0 <= col_player < n):
        raise ValidationError("player index out of range", "INDEX")

    values: dict[tuple[int, int], Fraction] = {}
    for xmask, _ in _masks(m, rounds):
        for ymask, _ in _masks(n, rounds):
            values[(xmask, ymask)] = _ZERO
    for k in range(rounds - 1, -1, -1):
        level: dict[tuple[int, int], Fraction] = {}
        for xmask, _ in _masks(m, k):
            row_gone = (xmask >> row_player) & 1
            for ymask, _ in _masks(n, k):
                if row_gone or (ymask >> col_player) & 1:
                    level[(xmask, ymask)] = _ZERO
                    continue
                if maximizer == 1:
                    own_players = unplayed(xmask, m)
                    chance_players = unplayed(ymask, n)
                    share = Fraction(1, n - k)
                else:
                    own_players = unplayed(ymask, n)
                    chance_players = unplayed(xmask, m)
                    share = Fraction(1, m - k)
                best = _ZERO
                for own in own_players:
                    total = _ZERO
                    for chance in chance_players:
                        i, j = (own, chance) if maximizer == 1 else (chance, own)
                        if i == row_player and j == col_player:
                            total += _ONE
                        else:
                            total += values[(xmask | (1 << i), ymask | (1 << j))]
                    value = share * total
                    if value > best:
                        best = value
                level[(xmask, ymask)] = best
        values.update(level)
    return values[(0, 0)]
