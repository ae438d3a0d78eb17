"""HTTP facades exposing an in-process LM backend or MT client over the
same wire protocol the remote clients speak.

Used to serve mocks to external consumers and to exercise RemoteLM /
RemoteMt against a real request/response cycle in tests.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .backend import LmBackend
from .errors import ContextOverflow, InvalidToken
from .translate import MtClient


class EncodeRequest(BaseModel):
    text: str


class EncodeResponse(BaseModel):
    tokens: list[int]


class DecodeRequest(BaseModel):
    tokens: list[int]


class DecodeResponse(BaseModel):
    text: str


class LogitsRequest(BaseModel):
    tokens: list[int]
    want: list[int] | None = None
    top_k: int = 512


class LogitsResponse(BaseModel):
    logits: list[tuple[int, float]]
    model: str
    context_limit: int


class TranslateRequest(BaseModel):
    src_lang: str
    tgt_lang: str
    sentences: list[str]


class TranslateResponse(BaseModel):
    translations: list[str]


def create_lm_app(backend: LmBackend, model_name: str = "mock") -> FastAPI:
    app = FastAPI(title="stagegen LM service")

    @app.post("/v1/encode", response_model=EncodeResponse)
    def encode(req: EncodeRequest):
        return EncodeResponse(tokens=backend.encode(req.text))

    @app.post("/v1/decode", response_model=DecodeResponse)
    def decode(req: DecodeRequest):
        try:
            return DecodeResponse(text=backend.decode(req.tokens))
        except InvalidToken as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/v1/logits", response_model=LogitsResponse)
    def logits(req: LogitsRequest):
        try:
            values = np.asarray(backend.next_logits(req.tokens, req.want))
        except ContextOverflow as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        order = np.argsort(values)[::-1][: req.top_k]
        keep = {int(tid) for tid in order}
        if req.want:
            keep.update(tid for tid in req.want if 0 <= tid < len(values))
        pairs = sorted((tid, float(values[tid])) for tid in keep)
        return LogitsResponse(
            logits=pairs, model=model_name, context_limit=backend.context_limit
        )

    return app


def create_mt_app(mt: MtClient) -> FastAPI:
    app = FastAPI(title="stagegen MT service")

    @app.post("/v1/translate", response_model=TranslateResponse)
    def translate(req: TranslateRequest):
        return TranslateResponse(
            translations=mt.translate(req.sentences, req.src_lang, req.tgt_lang)
        )

    return app
