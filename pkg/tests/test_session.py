import json

import pytest

from stagegen import (
    HashLM,
    IdentityMt,
    ReverseMt,
    ScriptedLM,
    Session,
    SessionConfigs,
    SessionStore,
    parse_script,
    replay_session,
    render_script,
)
from stagegen.decode import SamplerConfig
from stagegen.errors import (
    DuplicateExhausted,
    InvalidText,
    NoCharacters,
    PromptLineImmutable,
    UnknownLine,
)
from stagegen.session import RetryPolicy

PROMPT = "A dark lab.\nROBOT: Who am I, truly?\nHELENA: A machine with a soul, perhaps."


def logical_clock():
    state = iter(range(10_000))
    return lambda: float(next(state))


def make_session(backend=None, mt=None, overrides=None, session_id="t"):
    return Session.create(
        session_id,
        PROMPT,
        backend or HashLM(),
        mt or IdentityMt(),
        configs=SessionConfigs.from_overrides(overrides),
        clock=logical_clock(),
    )


def test_create_extracts_characters():
    s = make_session()
    assert s.characters == ["ROBOT", "HELENA"]
    assert s.status == "idle"


def test_create_requires_cue():
    with pytest.raises(NoCharacters):
        Session.create("t", "Just a setting.\nAnd more.", HashLM(), IdentityMt())


def test_create_translates_prompt():
    s = make_session(mt=ReverseMt())
    assert set(s.translations) == {0, 1}
    assert s.translations[0].target_cue == "ROBOT"


def test_first_generated_line_id_follows_prompt():
    s = make_session()
    line = s.generate_next()
    assert line.id == 2
    assert line.origin == "generated"
    assert line.speaker in s.characters
    assert s.translations[2].ok


def test_same_seed_same_first_line():
    a = make_session().generate_next()
    b = make_session().generate_next()
    assert a == b


def test_different_seed_streams_may_differ_after_draws():
    s = make_session()
    first = s.generate_next()
    s.discard_from(first.id)
    second = s.generate_next()
    # rng stream advanced, but ids are reused after a discard
    assert second.id == first.id


def test_duplicate_exhausted_after_exact_retries():
    backend = ScriptedLM.cycle(["ROBOT: The same line, always."])
    s = make_session(backend=backend)
    first = s.generate_next()
    assert first.text == "The same line, always."
    with pytest.raises(DuplicateExhausted) as err:
        s.generate_next()
    assert err.value.attempts == 5
    assert len(s.lines) == 1
    assert s.events[-1]["action"] == "generate_failed"


def test_alternating_lines_never_repeat_consecutively():
    backend = ScriptedLM.cycle(["ROBOT: Back and forth.", "HELENA: Forth and back."])
    s = make_session(backend=backend, overrides={"duplicate_window": 1})
    rendered = [l.render() for l in s.prompt.lines]
    for _ in range(6):
        rendered.append(s.generate_next().render())
    for a, b in zip(rendered, rendered[1:]):
        assert a != b


def test_discard_cascades():
    s = make_session()
    ids = [s.generate_next().id for _ in range(3)]
    s.discard_from(ids[1])
    assert [l.id for l in s.lines] == [ids[0]]
    assert all(l.id < ids[1] for l in s.lines)
    assert set(s.translations) == {0, 1, ids[0]}


def test_discard_prompt_line_rejected():
    s = make_session()
    with pytest.raises(PromptLineImmutable):
        s.discard_from(0)


def test_discard_unknown_line():
    s = make_session()
    with pytest.raises(UnknownLine):
        s.discard_from(99)


def test_discard_is_final_second_discard_404s():
    s = make_session()
    line = s.generate_next()
    s.discard_from(line.id)
    with pytest.raises(UnknownLine):
        s.discard_from(line.id)


def test_insert_manual():
    s = make_session()
    line = s.insert_manual("ROBOT", "I feel nothing.")
    assert line.origin == "manual"
    assert "I feel nothing." in render_script(s.full_script())


def test_insert_manual_new_character_joins_cast():
    s = make_session()
    s.insert_manual("MARIUS", "Enter me.")
    assert "MARIUS" in s.characters
    line = s.generate_next()
    assert line.speaker in {"ROBOT", "HELENA", "MARIUS"}


def test_insert_manual_invalid_text():
    s = make_session()
    with pytest.raises(InvalidText):
        s.insert_manual("ROBOT", "")
    with pytest.raises(InvalidText):
        s.insert_manual("ROBOT", "two\nlines")
    with pytest.raises(InvalidText):
        s.insert_manual("BAD:NAME", "hi")


def test_export_plain_equals_prompt_when_no_lines():
    s = make_session()
    assert s.export("plain").decode() == PROMPT


def test_export_plain_round_trips():
    s = make_session()
    s.generate_next()
    s.insert_manual("ROBOT", "A manual line.")
    text = s.export("plain").decode()
    reparsed = parse_script(text)
    assert render_script(reparsed) == text


def test_generated_fraction_by_characters():
    s = make_session()
    s.lines = [
        type(s.prompt.lines[0])(2, "cue", "123456789", "ROBOT", "generated"),
        type(s.prompt.lines[0])(3, "cue", "1", "ROBOT", "manual"),
    ]
    assert s.generated_fraction() == pytest.approx(0.9)


def test_structured_export_contents():
    s = make_session()
    s.generate_next()
    doc = json.loads(s.export("structured"))
    assert doc["session_id"] == "t"
    assert doc["prompt"]["setting"] == "A dark lab."
    assert len(doc["lines"]) == 1
    assert doc["lines"][0]["origin"] == "generated"
    assert set(doc["translations"]) == {"0", "1", str(doc["lines"][0]["id"])}
    assert doc["events"][0]["action"] == "create"
    assert doc["configs"]["budget"]["max_tokens"] == 924
    assert 0.0 <= doc["generated_fraction"] <= 1.0


def test_replay_reconstructs_state():
    backend = HashLM()
    s = make_session(backend=backend)
    s.generate_next()
    s.insert_manual("ROBOT", "Manual thought.")
    s.generate_next()
    s.discard_from(s.lines[-1].id)
    s.generate_next()
    replayed = replay_session(s.events, HashLM(), IdentityMt(), session_id="t")
    assert replayed.state_dict() == s.state_dict()


def test_replay_includes_failed_generations():
    backend = ScriptedLM.cycle(["ROBOT: Loop."])
    s = make_session(backend=backend, overrides={"duplicate_window": 1})
    s.generate_next()
    with pytest.raises(DuplicateExhausted):
        s.generate_next()
    s.insert_manual("HELENA", "Break the loop.")
    s.generate_next()
    replayed = replay_session(
        s.events, ScriptedLM.cycle(["ROBOT: Loop."]), IdentityMt(), session_id="t"
    )
    assert replayed.state_dict() == s.state_dict()


def test_store_round_trip(tmp_path):
    store = SessionStore(tmp_path)
    s = make_session()
    s.generate_next()
    store.save(s)
    loaded = store.load("t", HashLM(), IdentityMt())
    assert loaded.state_dict() == s.state_dict()
    assert (tmp_path / "t" / "events.jsonl").exists()
    assert (tmp_path / "t" / "snapshot.json").exists()


def test_store_unknown_session(tmp_path):
    store = SessionStore(tmp_path)
    with pytest.raises(KeyError):
        store.load_events("missing")


def test_config_overrides_apply():
    s = make_session(overrides={"temperature": 0.5, "max_tokens": 500, "max_retries": 2})
    assert s.configs.sampler.temperature == 0.5
    assert s.configs.budget.max_tokens == 500
    assert s.configs.retry.max_retries == 2
    assert s.configs.retry.duplicate_window == 6


def test_retry_policy_validation():
    with pytest.raises(ValueError):
        RetryPolicy(max_retries=0)
    with pytest.raises(ValueError):
        SamplerConfig(repetition_penalty=0.5)
