"""Command-line interface.

``serve`` runs the HTTP service; ``batch`` drives the same service
in-process through its JSON API to generate a scene non-interactively.
All flags can also be set through THEAITRE_-prefixed environment
variables, and ``--config`` reads key=value overrides for numeric knobs.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .service import AppConfig, create_app

_NUMERIC_KNOBS = {
    "temperature": float,
    "top_k": int,
    "repetition_penalty": float,
    "max_new_tokens": int,
    "boost_coefficient": float,
    "greedy": lambda v: v.lower() in ("1", "true", "yes"),
    "max_tokens": int,
    "recent_tokens": int,
    "summary_lines": int,
    "pin_setting": lambda v: v.lower() in ("1", "true", "yes"),
    "damping": float,
    "tolerance": float,
    "max_iterations": int,
    "max_phrases": int,
    "max_retries": int,
    "duplicate_window": int,
    "seed": int,
}


def _read_overrides(path: str | None) -> dict:
    if not path:
        return {}
    overrides: dict = {}
    for raw in Path(path).read_text("utf-8").splitlines():
        raw = raw.strip()
        if not raw or raw.startswith("#"):
            continue
        key, _, value = raw.partition("=")
        key = key.strip()
        if key not in _NUMERIC_KNOBS:
            raise click.ClickException(f"unknown config key {key!r}")
        overrides[key] = _NUMERIC_KNOBS[key](value.strip())
    return overrides


def _backend_options(fn):
    fn = click.option("--lm-url", default=None, help="Remote LM service base URL.")(fn)
    fn = click.option(
        "--lm-mock",
        default="hash",
        help="In-process LM mock: 'hash' or 'scripted:FILE'.",
    )(fn)
    fn = click.option("--mt-url", default=None, help="Remote MT service base URL.")(fn)
    fn = click.option(
        "--mt-mock",
        default="identity",
        type=click.Choice(["identity", "reverse"]),
        help="In-process MT mock.",
    )(fn)
    fn = click.option("--storage", default=None, help="Session persistence root.")(fn)
    fn = click.option("--seed", default=0, type=int, help="Base random seed.")(fn)
    fn = click.option("--config", "config_file", default=None, help="key=value overrides file.")(fn)
    return fn


def _app_config(lm_url, lm_mock, mt_url, mt_mock, storage, seed, config_file, **extra) -> AppConfig:
    return AppConfig(
        lm=lm_url or lm_mock,
        mt=mt_url or mt_mock,
        storage=storage,
        seed=seed,
        overrides=_read_overrides(config_file),
        **extra,
    )


@click.group(context_settings={"auto_envvar_prefix": "THEAITRE"})
def cli():
    """Interactive theatre-script generation service."""


@cli.command()
@click.option("--bind", default="127.0.0.1:8000", help="host:port to listen on.")
@_backend_options
def serve(bind, **backend_opts):
    """Run the HTTP service."""
    import uvicorn

    host, _, port = bind.partition(":")
    app = create_app(_app_config(**backend_opts))
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))


@cli.command()
@click.argument("prompt_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--lines", "n_lines", default=10, type=int, help="Lines to generate.")
@click.option("--out", "out_dir", default="out", help="Directory for the exports.")
@_backend_options
def batch(prompt_file, n_lines, out_dir, **backend_opts):
    """Generate a scene non-interactively and write the exports.

    Deterministic with mock backends and a fixed seed: timestamps and
    session ids use a logical clock so two runs produce identical files.
    """
    from fastapi.testclient import TestClient

    cfg = _app_config(**backend_opts, logical_clock=True)
    app = create_app(cfg)
    prompt_text = Path(prompt_file).read_text("utf-8")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with TestClient(app) as client:
        resp = client.post("/sessions", json={"prompt": prompt_text})
        if resp.status_code != 201:
            raise click.ClickException(f"session rejected: {resp.text}")
        sid = resp.json()["id"]
        for i in range(n_lines):
            resp = client.post(f"/sessions/{sid}/generate")
            if resp.status_code != 200:
                click.echo(f"generation stopped after {i} lines: {resp.text}", err=True)
                break
            line = resp.json()["line"]
            click.echo(f"{line['speaker']}: {line['text']}")
        plain = client.get(f"/sessions/{sid}/export", params={"format": "plain"})
        structured = client.get(f"/sessions/{sid}/export", params={"format": "structured"})
    (out / "script.txt").write_bytes(plain.content)
    (out / "session.json").write_bytes(structured.content)
    click.echo(f"wrote {out / 'script.txt'} and {out / 'session.json'}")


@cli.command("serve-lm")
@click.option("--bind", default="127.0.0.1:8001", help="host:port to listen on.")
@click.option("--lm-mock", default="hash", help="Backend to expose: 'hash' or 'scripted:FILE'.")
def serve_lm(bind, lm_mock):
    """Expose a mock LM backend over the LM wire protocol."""
    import uvicorn

    from .service import build_backend
    from .wire import create_lm_app

    host, _, port = bind.partition(":")
    app = create_lm_app(build_backend(AppConfig(lm=lm_mock)))
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8001))


if __name__ == "__main__":
    cli(sys.argv[1:])
