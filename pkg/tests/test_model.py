from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from teamcomp.model import (
    MAX_PLAYERS,
    GameSpec,
    StrengthMatrix,
    UtilityTable,
    ValidationError,
    document_from_spec,
    dumps_spec,
    loads_spec,
    make_spec,
    parse_rational,
    spec_from_document,
    utility_ue,
    utility_um,
    validate_spec,
)
from teamcomp.instances import named_instance


class TestParseRational:
    def test_fraction_string(self):
        assert parse_rational("2/3") == Fraction(2, 3)

    def test_decimal_string_is_exact(self):
        assert parse_rational("0.5") == Fraction(1, 2)
        assert parse_rational("0.1") == Fraction(1, 10)  # not the binary float

    def test_integer(self):
        assert parse_rational(2) == Fraction(2)

    def test_normalized(self):
        q = parse_rational("4/8")
        assert q.numerator == 1 and q.denominator == 2

    def test_float_rejected(self):
        with pytest.raises(ValidationError):
            parse_rational(0.5)

    def test_bool_rejected(self):
        with pytest.raises(ValidationError):
            parse_rational(True)

    def test_garbage_rejected(self):
        with pytest.raises(ValidationError):
            parse_rational("one half")

    def test_zero_denominator_rejected(self):
        with pytest.raises(ValidationError):
            parse_rational("1/0")

    @given(st.fractions(min_value=-5, max_value=5, max_denominator=30))
    def test_round_trip_through_string(self, q):
        assert parse_rational(str(q)) == q


class TestUtilityTables:
    def test_ue_t2(self):
        assert utility_ue(2).values == (Fraction(-1), Fraction(0), Fraction(1))

    def test_ue_t3(self):
        assert utility_ue(3).values == (
            Fraction(-3, 2),
            Fraction(-1, 2),
            Fraction(1, 2),
            Fraction(3, 2),
        )

    def test_um_t3(self):
        assert utility_um(3).values == (
            Fraction(-1),
            Fraction(-1),
            Fraction(1),
            Fraction(1),
        )

    def test_um_t2_has_tie(self):
        assert utility_um(2).values == (Fraction(-1), Fraction(0), Fraction(1))

    def test_ue_equals_um_at_t2(self):
        assert utility_ue(2) == utility_um(2)

    @pytest.mark.parametrize("rounds", [1, 2, 3, 5, 8])
    def test_both_antisymmetric(self, rounds):
        assert utility_ue(rounds).antisymmetric
        assert utility_um(rounds).antisymmetric

    def test_size_error(self):
        with pytest.raises(ValidationError):
            utility_ue(0)
        with pytest.raises(ValidationError):
            utility_um(0)

    def test_threshold_table_not_antisymmetric(self):
        table = UtilityTable.from_values([-1, -1, 1, 1, 1])
        assert not table.antisymmetric

    @given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=6), min_size=2, max_size=7))
    def test_antisymmetric_flag_matches_definition(self, values):
        table = UtilityTable.from_values(values)
        t_max = len(values) - 1
        expected = all(values[t] + values[t_max - t] == 0 for t in range(t_max + 1))
        assert table.antisymmetric == expected

    @given(st.lists(st.integers(min_value=-3, max_value=3), min_size=2, max_size=7))
    def test_monotone_flag_matches_definition(self, values):
        table = UtilityTable.from_values(values)
        expected = all(values[t + 1] >= values[t] for t in range(len(values) - 1))
        assert table.monotone == expected


class TestValidateSpec:
    def test_card_game_valid_and_antisymmetric(self, card_spec):
        spec = validate_spec(card_spec)
        assert spec is card_spec
        assert spec.rounds == 3 and spec.team1_size == 3 and spec.team2_size == 3
        assert spec.utility.antisymmetric

    def test_minimal_instance(self):
        spec = make_spec(1, [["1/2"]], "UE")
        assert validate_spec(spec) is spec
        assert spec.utility.antisymmetric

    def test_range_error(self):
        spec = make_spec(2, [[1, 0], [0, 2]], "UE")
        with pytest.raises(ValidationError) as err:
            validate_spec(spec)
        assert err.value.code == "RANGE"

    def test_size_error_too_few_players(self):
        spec = make_spec(3, [[1, 0], [0, 1]], utility_ue(3))
        with pytest.raises(ValidationError) as err:
            validate_spec(spec)
        assert err.value.code == "SIZE"

    def test_size_error_round_count(self):
        spec = GameSpec(0, StrengthMatrix.from_rows([[1]]), utility_ue(1))
        with pytest.raises(ValidationError) as err:
            validate_spec(spec)
        assert err.value.code == "SIZE"

    def test_size_error_max_players(self):
        rows = [[0] * (MAX_PLAYERS + 1) for _ in range(2)]
        spec = GameSpec(2, StrengthMatrix.from_rows(rows), utility_ue(2))
        with pytest.raises(ValidationError) as err:
            validate_spec(spec)
        assert err.value.code == "SIZE"

    def test_shape_error_utility_length(self):
        spec = GameSpec(2, StrengthMatrix.from_rows([[1, 0], [0, 1]]), utility_ue(3))
        with pytest.raises(ValidationError) as err:
            validate_spec(spec)
        assert err.value.code == "SHAPE"

    def test_idempotent(self, ex3_um):
        assert validate_spec(validate_spec(ex3_um)) is ex3_um

    def test_ragged_rows_rejected(self):
        with pytest.raises(ValidationError) as err:
            StrengthMatrix.from_rows([[1, 0], [0]])
        assert err.value.code == "SHAPE"


class TestSpecDocuments:
    def test_round_trip(self, ex3_um):
        doc = document_from_spec(ex3_um)
        assert spec_from_document(doc) == ex3_um

    def test_dumps_loads(self, card_spec):
        assert loads_spec(dumps_spec(card_spec)) == card_spec

    def test_named_utilities(self):
        spec = spec_from_document({"T": 2, "P": [["1", "0"], ["0", "1"]], "U": "UM"})
        assert spec.utility == utility_um(2)

    def test_json_decimal_literal_is_exact(self):
        spec = loads_spec('{"T": 1, "P": [[0.1]], "U": "UE"}')
        assert spec.strength.win_prob(0, 0) == Fraction(1, 10)

    def test_missing_field(self):
        with pytest.raises(ValidationError):
            spec_from_document({"T": 2, "P": [[1, 0], [0, 1]]})

    def test_wrong_utility_length(self):
        with pytest.raises(ValidationError):
            spec_from_document({"T": 2, "P": [[1, 0], [0, 1]], "U": ["1", "0"]})

    def test_mixed_entry_spellings(self):
        spec = spec_from_document(
            {"T": 1, "P": [["1/3", "0.25", 1]], "U": ["-1/2", "1/2"]}
        )
        assert spec.strength.row(0) == (Fraction(1, 3), Fraction(1, 4), Fraction(1))

    def test_derived_specs_round_trip(self, ex3_um):
        # Specs produced by roster surgery and by the threshold-contest
        # builder re-parse to identical objects.
        from teamcomp.analysis import GammaParams, abandon, add_dominated, gamma_game

        for spec in (
            abandon(ex3_um, 1, [3]),
            add_dominated(ex3_um, 2),
            gamma_game(GammaParams(4, 1, 0)),
        ):
            assert loads_spec(dumps_spec(spec)) == spec


class TestNamedInstances:
    def test_all_names_build_and_validate(self):
        for name in ["card", "ex1", "ex2", "ex3", "ex4:3", "ex5:4"]:
            validate_spec(named_instance(name))

    def test_ex4_shape(self):
        spec = named_instance("ex4:3")
        assert (spec.rounds, spec.team1_size, spec.team2_size) == (3, 3, 5)

    def test_ex5_shape(self):
        spec = named_instance("ex5:4")
        assert (spec.rounds, spec.team1_size, spec.team2_size) == (4, 4, 6)

    def test_unknown_name(self):
        with pytest.raises(ValidationError):
            named_instance("nope")
