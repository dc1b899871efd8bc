import pytest

from beamkit.errors import InvalidParameterError, ParseError
from beamkit.fileio.measured import (
    MeasuredPortTable,
    parse_measured_table,
    serialize_measured_table,
)

from conftest import MEASURED_TABLE_ROWS, MEASURED_TABLE_TEXT


class TestParse:
    def test_specimen_block(self):
        table = parse_measured_table(MEASURED_TABLE_TEXT)
        assert table.n_elements == 8
        assert table.frequency_mhz == pytest.approx(6300.8)
        assert table.frequency_hz == pytest.approx(6.3008e9)
        assert table.rows[0][1] == -16.92
        assert table.rows[0][2] == -178.73
        assert table.rows[-1] == (6300.8, -16.63, 36.94)

    def test_row_order_preserved(self):
        table = parse_measured_table(MEASURED_TABLE_TEXT)
        assert [r[1] for r in table.rows] == [m for _, m, _ in MEASURED_TABLE_ROWS]

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse_measured_table("")

    def test_single_row(self):
        with pytest.raises(ParseError):
            parse_measured_table("6300.8 -16.92 -178.73\n")

    def test_ragged_row_reports_line(self):
        text = "6300.8 -16.92 -178.73\n6300.8 -12.51\n"
        with pytest.raises(ParseError) as err:
            parse_measured_table(text)
        assert "line 2" in str(err.value)

    def test_non_numeric_field(self):
        text = "6300.8 -16.92 -178.73\n6300.8 x 134.96\n"
        with pytest.raises(ParseError) as err:
            parse_measured_table(text)
        assert "line 2" in str(err.value)

    def test_mixed_frequencies(self):
        text = "6300.8 -16.92 -178.73\n6301.9 -12.51 134.96\n"
        with pytest.raises(ParseError) as err:
            parse_measured_table(text)
        assert "line 2" in str(err.value)

    def test_comments_and_blanks_skipped(self):
        text = ("# beam port 5\n\n"
                "6300.8 -16.92 -178.73\n"
                "6300.8 -12.51 134.96   ! second element\n")
        table = parse_measured_table(text)
        assert table.n_elements == 2

    def test_phase_canonicalised(self):
        text = "100.0 0.0 270.0\n100.0 0.0 -190.0\n"
        table = parse_measured_table(text)
        assert table.rows[0][2] == pytest.approx(-90.0)
        assert table.rows[1][2] == pytest.approx(170.0)

    def test_wild_phase_rejected(self):
        with pytest.raises(ParseError):
            parse_measured_table("100.0 0.0 720.0\n100.0 0.0 0.0\n")


class TestSerialize:
    def test_roundtrip_canonical(self):
        table = parse_measured_table(MEASURED_TABLE_TEXT)
        again = parse_measured_table(serialize_measured_table(table))
        assert again == table

    def test_serialize_deterministic(self):
        table = parse_measured_table(MEASURED_TABLE_TEXT)
        assert serialize_measured_table(table) == serialize_measured_table(table)


class TestToExcitation:
    def test_excitation_fields(self):
        table = parse_measured_table(MEASURED_TABLE_TEXT)
        exc = table.to_excitation(0.82)
        assert exc.n_elements == 8
        assert exc.element_spacing_wl == 0.82
        assert exc.steer_reference_deg == 90.0
        assert exc.elements[3] == (-10.60, 110.60)

    def test_type_invariant(self):
        with pytest.raises(InvalidParameterError):
            MeasuredPortTable(((6300.8, -16.92, -178.73),))
