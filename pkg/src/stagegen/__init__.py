"""Interactive theatre-script generation: a pluggable causal LM behind a
control layer (cue-constrained decoding, repetition control, context
budgeting via extractive summarization, name-preserving translation),
exposed as a session-based HTTP service."""

from .backend import HashLM, LmBackend, RemoteLM, ScriptedLM, WhitespaceVocab
from .context import ContextBudget, build_context, split_recent, token_length
from .decode import SamplerConfig, build_cue_trie, generate_line
from .script import Script, ScriptLine, extract_characters, normalize_line, parse_script, render_script
from .session import RetryPolicy, Session, SessionConfigs, SessionStore, replay_session
from .summarize import SummarizerConfig, pagerank, textrank_select
from .translate import IdentityMt, MtClient, RemoteMt, ReverseMt, translate_line, translate_script

__all__ = [
    "HashLM",
    "LmBackend",
    "RemoteLM",
    "ScriptedLM",
    "WhitespaceVocab",
    "ContextBudget",
    "build_context",
    "split_recent",
    "token_length",
    "SamplerConfig",
    "build_cue_trie",
    "generate_line",
    "Script",
    "ScriptLine",
    "extract_characters",
    "normalize_line",
    "parse_script",
    "render_script",
    "RetryPolicy",
    "Session",
    "SessionConfigs",
    "SessionStore",
    "replay_session",
    "SummarizerConfig",
    "pagerank",
    "textrank_select",
    "IdentityMt",
    "MtClient",
    "RemoteMt",
    "ReverseMt",
    "translate_line",
    "translate_script",
]
