import numpy as np
import pytest

from stagegen import HashLM, parse_script

WORD_POOL = [
    "machine", "factory", "soul", "question", "answer", "window", "night",
    "river", "memory", "silence", "future", "metal", "heart", "dream",
    "power", "garden", "letter", "stage", "voice", "shadow", "light",
    "storm", "city", "child", "music", "glass", "engine", "spark",
    "winter", "promise", "stranger", "door", "mirror", "clock", "fire",
]

CHARACTER_POOL = ["ROBOT", "HELENA", "MARIUS", "DOMIN", "NANA", "ALQUIST", "GALL", "SULLA"]


def random_line_text(rng: np.random.Generator, min_words=3, max_words=12) -> str:
    n = int(rng.integers(min_words, max_words + 1))
    return " ".join(rng.choice(WORD_POOL, size=n))


def random_script_text(
    rng: np.random.Generator,
    n_lines: int,
    n_chars: int = 3,
    with_setting: bool = True,
    min_words: int = 3,
    max_words: int = 12,
) -> str:
    chars = list(rng.choice(CHARACTER_POOL, size=n_chars, replace=False))
    parts = []
    if with_setting:
        parts.append(random_line_text(rng, 4, 9) + ".")
    for _ in range(n_lines):
        speaker = chars[int(rng.integers(0, n_chars))]
        parts.append(f"{speaker}: {random_line_text(rng, min_words, max_words)}.")
    return "\n".join(parts)


def script_text_with_tokens(rng: np.random.Generator, target_tokens: int, **kw) -> str:
    """Script text whose whitespace token count (incl. newlines) is close
    to and at least target_tokens."""
    n_chars = kw.pop("n_chars", 3)
    min_words = kw.pop("min_words", 3)
    max_words = kw.pop("max_words", 12)
    with_setting = kw.pop("with_setting", True)
    chars = list(rng.choice(CHARACTER_POOL, size=n_chars, replace=False))
    parts = []
    tokens = 0
    if with_setting:
        parts.append(random_line_text(rng, 4, 9) + ".")
        tokens += len(parts[0].split()) + 1
    while tokens < target_tokens:
        speaker = chars[int(rng.integers(0, n_chars))]
        line = f"{speaker}: {random_line_text(rng, min_words, max_words)}."
        parts.append(line)
        tokens += len(line.split()) + 1
    return "\n".join(parts)


@pytest.fixture
def lm():
    return HashLM()


@pytest.fixture
def small_prompt():
    return "A dark lab.\nROBOT: Who am I, truly?\nHELENA: A machine with a soul, perhaps."


@pytest.fixture
def small_script(small_prompt):
    return parse_script(small_prompt)
