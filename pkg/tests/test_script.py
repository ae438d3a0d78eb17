import pytest
from hypothesis import given, strategies as st

from stagegen import extract_characters, normalize_line, parse_script, render_script
from stagegen.errors import EmptyScript
from stagegen.script import Script, ScriptLine


def test_single_cue():
    s = parse_script("HELENA: Hello.")
    assert s.setting == ""
    assert len(s.lines) == 1
    line = s.lines[0]
    assert (line.kind, line.speaker, line.text) == ("cue", "HELENA", "Hello.")


def test_setting_then_cue():
    s = parse_script("A dark lab.\nROBOT: Who am I?")
    assert s.setting == "A dark lab."
    assert len(s.lines) == 1
    assert s.lines[0].speaker == "ROBOT"


def test_multiline_setting_and_stage_direction():
    s = parse_script("A dark lab.\nRain outside.\nROBOT: Hello.\nHe stands up.")
    assert s.setting == "A dark lab.\nRain outside."
    assert [l.kind for l in s.lines] == ["cue", "stage-direction"]


def test_first_colon_splits_and_names_may_contain_spaces():
    s = parse_script("OLD MAN: It is late: far too late.")
    assert s.lines[0].speaker == "OLD MAN"
    assert s.lines[0].text == "It is late: far too late."


def test_empty_input_rejected():
    with pytest.raises(EmptyScript):
        parse_script("")
    with pytest.raises(EmptyScript):
        parse_script("   \n  ")


def test_ids_increase_from_zero():
    s = parse_script("A: x\nB: y\nstage\nC: z")
    assert [l.id for l in s.lines] == [0, 1, 2, 3]
    assert all(l.origin == "prompt" for l in s.lines)


def test_render_setting_only():
    assert render_script(Script(setting="X")) == "X"


def test_render_single_cue():
    s = Script(lines=(ScriptLine(0, "cue", "Hi", "HELENA"),))
    assert render_script(s) == "HELENA: Hi"


@pytest.mark.parametrize(
    "text",
    [
        "HELENA: Hello.",
        "A dark lab.\nROBOT: Who am I?",
        "A: x\nB: y\nhe leaves\nA: z",
        "Setting one.\nSetting two.\nNAME WITH SPACE: something: nested",
        "A:",
    ],
)
def test_round_trip_canonical(text):
    assert render_script(parse_script(text)) == text


def test_parse_render_parse_fixed_point(small_prompt):
    once = parse_script(small_prompt)
    twice = parse_script(render_script(once))
    assert once == twice


def test_trailing_newline_normalized():
    assert render_script(parse_script("A: x\n")) == "A: x"


def test_extract_characters_order_and_dedup():
    s = parse_script("ROBOT: a\nHELENA: b\nROBOT: c\nMARIUS: d")
    assert extract_characters(s) == ["ROBOT", "HELENA", "MARIUS"]


def test_extract_characters_no_cues():
    assert extract_characters(Script(setting="Just a place.")) == []


def test_character_identity_is_byte_exact():
    s = parse_script("Robot: a\nROBOT: b")
    assert extract_characters(s) == ["Robot", "ROBOT"]


@pytest.mark.parametrize(
    "raw,expected",
    [("  Hello   WORLD ", "hello world"), ("", ""), ("A\tB", "a b")],
)
def test_normalize_examples(raw, expected):
    assert normalize_line(raw) == expected


@given(st.text(max_size=80))
def test_normalize_idempotent(text):
    assert normalize_line(normalize_line(text)) == normalize_line(text)
