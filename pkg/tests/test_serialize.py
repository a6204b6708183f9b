import json
from fractions import Fraction
from pathlib import Path

import pytest

from parflow import (
    CharacterSystem,
    CurveShape,
    ParabolicShape,
    ResidueBlockAssembly,
    WeightSystem,
)
from parflow.serialize import (
    canonical_json,
    format_character_system,
    format_weight_system,
    parse_adjusted_data,
    parse_character_system,
    parse_defects,
    parse_fraction,
    parse_levels,
    parse_twists,
    parse_weight_system,
)

F = Fraction
GOLDEN = Path(__file__).parent / "golden"


def test_parse_fraction():
    assert parse_fraction("7/3") == F(7, 3)
    assert parse_fraction(" -1 / 4 ") == F(-1, 4)
    assert parse_fraction("2") == F(2)
    with pytest.raises(ValueError):
        parse_fraction("x")
    with pytest.raises(ValueError):
        parse_fraction("1/0")


def test_weight_grammar_round_trip():
    ws = parse_weight_system("D1:1/5x2,2/5x1;D2:0x3", 5)
    assert ws == WeightSystem(5, {"D1": [(F(1, 5), 2), (F(2, 5), 1)], "D2": [(0, 3)]})
    assert format_weight_system(ws) == "D1:1/5x2,2/5x1;D2:0x3"
    assert parse_weight_system(format_weight_system(ws), 5) == ws


def test_weight_grammar_is_whitespace_insensitive():
    assert parse_weight_system(" D : 1/2 x 2 , 0 x 1 ", 4) == parse_weight_system("D:1/2x2,0x1", 4)


def test_weight_grammar_default_multiplicity():
    assert parse_weight_system("D:3/4", 4) == parse_weight_system("D:3/4x1", 4)


@pytest.mark.parametrize("bad", ["", "D", "D:", "D:1/2xq", ";;", "D:1/2;D:0"])
def test_weight_grammar_rejects_malformed(bad):
    with pytest.raises(ValueError):
        parse_weight_system(bad, 4)


def test_character_grammar_round_trip():
    cs = parse_character_system("D:3x2,1x1", 5)
    assert cs == CharacterSystem(5, {"D": [(3, 2), (1, 1)]})
    assert format_character_system(cs) == "D:1x1,3x2"
    assert parse_character_system(format_character_system(cs), 5) == cs


def test_aux_grammars():
    assert parse_levels("2x1,4x3") == ((2, 1), (4, 3))
    assert parse_defects("4, 6") == (4, 6)
    assert parse_twists("D:3/2;E:-1/4") == {"D": F(3, 2), "E": F(-1, 4)}
    assert parse_adjusted_data("D:1/3=1/3,2/3=2/3;E:0=0") == {
        "D": [(F(1, 3), F(1, 3)), (F(2, 3), F(2, 3))],
        "E": [(F(0), F(0))],
    }
    with pytest.raises(ValueError):
        parse_adjusted_data("D:1/3")


def test_weight_system_json_round_trip():
    ws = WeightSystem(12, {"D2": [(F(7, 12), 2)], "D1": [(0, 1), (F(1, 2), 1)]})
    data = ws.to_json_dict()
    assert WeightSystem.from_json_dict(data) == ws
    assert WeightSystem.from_json_dict(json.loads(canonical_json(data))) == ws


def test_shape_json_round_trip():
    curve = CurveShape(2, ("D1", "D2"), 6)
    ws = WeightSystem(6, {"D1": [(F(1, 6), 1), (F(1, 2), 1)], "D2": [(0, 2)]})
    s = ParabolicShape(2, -3, ws, curve)
    assert ParabolicShape.from_json_dict(s.to_json_dict()) == s


def test_character_system_json_round_trip():
    cs = CharacterSystem(9, {"B": [(0, 1), (7, 2)], "A": [(4, 1)]})
    assert CharacterSystem.from_json_dict(cs.to_json_dict()) == cs


def test_assembly_json_round_trip():
    asm = ResidueBlockAssembly(
        6, F(1, 2), [(1, 2, [[0, 1], [0, 0]]), (4, 1, [[0]])], {(1, 0): [[F(2, 3), -1]]}
    )
    again = ResidueBlockAssembly.from_json_dict(asm.to_json_dict())
    assert again == asm


def test_canonical_weight_system_golden_bytes():
    ws = WeightSystem(12, {"D2": [(F(7, 12), 2)], "D1": [(0, 1), (F(1, 2), 1)]})
    expected = (GOLDEN / "weight_system_canonical.json").read_text(encoding="utf-8")
    assert canonical_json(ws.to_json_dict()) + "\n" == expected


def test_canonical_shape_golden_bytes():
    curve = CurveShape(0, ("D1", "D2"), 4)
    ws = WeightSystem(4, {"D1": [(F(1, 4), 1), (F(3, 4), 1)], "D2": [(0, 2)]})
    s = ParabolicShape(2, -1, ws, curve)
    expected = (GOLDEN / "shape_canonical.json").read_text(encoding="utf-8")
    assert canonical_json(s.to_json_dict()) + "\n" == expected
