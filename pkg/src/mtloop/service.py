"""HTTP API tying the translation loop together.

Routes translate requests to the selected backend, renders quality as
stars, exposes alignment and per-token dictionary panels, accepts
expert/common feedback (with authorization and a terms gate), and
reports feedback statistics. Configuration comes from MTLOOP_*
environment variables; model artifacts are immutable snapshots swapped
atomically by retraining.
"""

import os
import threading
from dataclasses import dataclass

from fastapi import FastAPI, Header, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from mtloop.corpus import DIRECTIONS
from mtloop.dictionary import DictionaryIndex, build_index, load_dictionary_tsv
from mtloop.feedback import (
    LANGUAGES,
    CommonFeedback,
    ExpertFeedback,
    FeedbackStore,
)
from mtloop.nmt import DecoderContract, beam_search, ensemble, toy_decoder
from mtloop.qe.features import smt_features, stars_from_bleu, stars_from_prob
from mtloop.qe.gbt import GradientBoostedEnsemble, gbt_predict, load_gbt
from mtloop.schemas import RESPONSE_VERSION
from mtloop.smt.lexical import LexicalTable
from mtloop.smt.model import SmtModel, load_model
from mtloop.textmetrics import tokenize_13a

MAX_TEXT_CHARS = 2000

MODEL_KINDS = ("smt", "nmt")

NMT_BEAM = 5

ENSEMBLE_TEMPERATURES = (1.0, 0.5, 2.0)


@dataclass
class ServiceConfig:
    data_dir: str
    model_dir: str | None = None
    expert_tokens: tuple[str, ...] = ()
    dict_file: str | None = None
    static_dir: str | None = None
    port: int = 8080

    @classmethod
    def from_env(cls, environ=None) -> "ServiceConfig":
        env = os.environ if environ is None else environ
        tokens = tuple(
            t.strip() for t in env.get("MTLOOP_EXPERT_TOKENS", "").split(",") if t.strip()
        )
        return cls(
            data_dir=env.get("MTLOOP_DATA_DIR", "./data"),
            model_dir=env.get("MTLOOP_MODEL_DIR") or None,
            expert_tokens=tokens,
            dict_file=env.get("MTLOOP_DICT_FILE") or None,
            static_dir=env.get("MTLOOP_STATIC_DIR") or None,
            port=int(env.get("MTLOOP_PORT", "8080")),
        )


def nmt_ensemble_from_lexical(lex: LexicalTable,
                              temperatures=ENSEMBLE_TEMPERATURES) -> DecoderContract:
    """Ensemble of toy decoders over temperature-sharpened table variants."""
    members = []
    for tau in temperatures:
        probs = {}
        by_source: dict[str, list] = {}
        for (tgt, src), p in lex.probs.items():
            by_source.setdefault(src, []).append((tgt, p))
        for src, row in by_source.items():
            z = sum(p**tau for _, p in row)
            for tgt, p in row:
                probs[(tgt, src)] = p**tau / z
        members.append(toy_decoder(LexicalTable(probs)))
    return ensemble(members)


class ModelRegistry:
    """Loaded model bundles; replacement is a single reference swap."""

    def __init__(self):
        self._lock = threading.Lock()
        self._smt: dict[str, tuple[SmtModel, GradientBoostedEnsemble]] = {}
        self._nmt: dict[str, DecoderContract] = {}

    def set_smt(self, direction: str, model: SmtModel, qe_model: GradientBoostedEnsemble) -> None:
        with self._lock:
            self._smt[direction] = (model, qe_model)

    def set_nmt(self, direction: str, decoder: DecoderContract) -> None:
        with self._lock:
            self._nmt[direction] = decoder

    def smt(self, direction: str):
        return self._smt.get(direction)

    def nmt(self, direction: str):
        return self._nmt.get(direction)

    def load_dir(self, model_dir: str) -> None:
        """Load every direction subdirectory that has a trained model."""
        for direction in DIRECTIONS:
            subdir = os.path.join(model_dir, direction)
            if not os.path.isdir(subdir):
                continue
            model = load_model(subdir)
            qe_path = os.path.join(subdir, "qe_smt.json")
            if os.path.exists(qe_path):
                self.set_smt(direction, model, load_gbt(qe_path))
            self.set_nmt(direction, nmt_ensemble_from_lexical(model.lex_fwd))

    def versions(self) -> dict[str, str]:
        out = {}
        for direction, (model, qe_model) in sorted(self._smt.items()):
            out[f"smt:{direction}"] = (
                f"phrases={len(model.table)},qe_rounds={qe_model.rounds}"
            )
        for direction, decoder in sorted(self._nmt.items()):
            members = getattr(decoder, "members", [decoder])
            out[f"nmt:{direction}"] = f"toy-ensemble-{len(members)}"
        return out

    def gaps(self) -> list[str]:
        missing = []
        for kind in MODEL_KINDS:
            for direction in DIRECTIONS:
                loaded = self.smt(direction) if kind == "smt" else self.nmt(direction)
                if loaded is None:
                    missing.append(f"{kind}:{direction}")
        return missing


class TranslateBody(BaseModel):
    text: str
    direction: str
    model: str
    example_id: str | None = None


class CommonFeedbackBody(BaseModel):
    translation_id: str
    helpfulness: int
    comment: str | None = None
    accepted_terms: bool = False


class ExpertFeedbackBody(BaseModel):
    translation_id: str
    quality: int
    correction: str
    comment: str | None = None
    author: str = "expert"


def _bearer_token(authorization: str | None) -> str | None:
    if authorization is None or not authorization.startswith("Bearer "):
        return None
    return authorization[len("Bearer "):].strip() or None


def _dict_panel(index: DictionaryIndex | None, tokens) -> list[list[dict]]:
    if index is None:
        return [[] for _ in tokens]
    panels = []
    for token in tokens:
        panels.append(
            [
                {
                    "headword": e.headword,
                    "language": e.language,
                    "gloss": e.gloss,
                    "notes": e.notes,
                }
                for e in index.lookup(token)
            ]
        )
    return panels


def create_app(
    config: ServiceConfig,
    registry: ModelRegistry | None = None,
    store: FeedbackStore | None = None,
    dictionary: DictionaryIndex | None = None,
) -> FastAPI:
    registry = registry or ModelRegistry()
    if config.model_dir and not (registry.smt("chr-en") or registry.smt("en-chr")):
        registry.load_dir(config.model_dir)
    store = store or FeedbackStore(config.data_dir)
    if dictionary is None and config.dict_file:
        dictionary = build_index(load_dictionary_tsv(config.dict_file))

    app = FastAPI(title="mtloop", version="0.1.0")
    app.state.registry = registry
    app.state.store = store
    app.state.dictionary = dictionary

    @app.exception_handler(RequestValidationError)
    def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    def require_expert(authorization: str | None) -> None:
        token = _bearer_token(authorization)
        if token is None or token not in config.expert_tokens:
            raise HTTPException(status_code=401, detail="expert authorization required")

    @app.post("/api/translate")
    def translate(body: TranslateBody):
        text = body.text.strip()
        if not text:
            raise HTTPException(status_code=400, detail="text must be non-empty")
        if len(body.text) > MAX_TEXT_CHARS:
            raise HTTPException(status_code=400, detail=f"text exceeds {MAX_TEXT_CHARS} characters")
        if body.direction not in DIRECTIONS:
            raise HTTPException(status_code=400, detail=f"unknown direction: {body.direction}")
        if body.model not in MODEL_KINDS:
            raise HTTPException(status_code=400, detail=f"unknown model: {body.model}")
        if body.example_id is not None and body.example_id not in store.examples:
            raise HTTPException(status_code=404, detail=f"unknown example: {body.example_id}")

        src_tokens = tuple(tokenize_13a(text))
        if body.model == "smt":
            bundle = registry.smt(body.direction)
            if bundle is None:
                raise HTTPException(status_code=503, detail=f"smt:{body.direction} not loaded")
            model, qe_model = bundle
            hyp = model.decode(src_tokens)
            tgt_tokens = hyp.target
            stars_raw = stars_from_bleu(gbt_predict(qe_model, smt_features(hyp)))
            alignment = {"kind": "hard", "links": [list(link) for link in hyp.hard_alignment]}
        else:
            decoder = registry.nmt(body.direction)
            if decoder is None:
                raise HTTPException(status_code=503, detail=f"nmt:{body.direction} not loaded")
            hyp = beam_search(decoder, src_tokens, beam=NMT_BEAM)
            tgt_tokens = hyp.target
            stars_raw = stars_from_prob(hyp) if tgt_tokens else 0.0
            alignment = {"kind": "soft", "matrix": [list(row) for row in hyp.attention]}

        output_text = " ".join(tgt_tokens)
        record = store.add_translation(
            source_text=text,
            direction=body.direction,
            model_kind=body.model,
            output_text=output_text,
            stars=stars_raw,
            example_id=body.example_id,
        )
        return {
            "v": RESPONSE_VERSION,
            "translation_id": record.id,
            "output_text": output_text,
            "stars": round(stars_raw, 1),
            "stars_raw": stars_raw,
            "src_tokens": list(src_tokens),
            "tgt_tokens": list(tgt_tokens),
            "alignment": alignment,
            "dict_src": _dict_panel(dictionary, src_tokens),
            "dict_tgt": _dict_panel(dictionary, tgt_tokens),
        }

    @app.get("/api/examples")
    def examples(lang: str | None = Query(default=None), status: str | None = Query(default=None)):
        if lang is not None and lang not in LANGUAGES:
            raise HTTPException(status_code=400, detail=f"unknown language: {lang}")
        if status is not None and status not in ("unlabeled", "labeled"):
            raise HTTPException(status_code=400, detail=f"unknown status: {status}")
        items = store.list_examples(language=lang, status=status)
        return {
            "v": RESPONSE_VERSION,
            "items": [
                {"id": i.id, "language": i.language, "text": i.text, "status": i.status}
                for i in items
            ],
        }

    @app.post("/api/feedback/common", status_code=201)
    def feedback_common(body: CommonFeedbackBody):
        if not body.accepted_terms:
            raise HTTPException(status_code=403, detail="terms must be accepted")
        try:
            rec_id = store.submit_common(
                CommonFeedback(body.translation_id, body.helpfulness, body.comment)
            )
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"v": RESPONSE_VERSION, "id": rec_id}

    @app.post("/api/feedback/expert", status_code=201)
    def feedback_expert(body: ExpertFeedbackBody, authorization: str | None = Header(default=None)):
        require_expert(authorization)
        try:
            rec_id = store.submit_expert(
                ExpertFeedback(
                    translation_id=body.translation_id,
                    quality=body.quality,
                    correction=body.correction,
                    author=body.author,
                    comment=body.comment,
                )
            )
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"v": RESPONSE_VERSION, "id": rec_id}

    @app.get("/api/stats")
    def stats(authorization: str | None = Header(default=None)):
        require_expert(authorization)
        return {"v": RESPONSE_VERSION, "cells": store.stats()}

    @app.get("/api/health")
    def health():
        writable = os.access(store.data_dir, os.W_OK)
        gaps = registry.gaps()
        if not writable:
            gaps = gaps + ["data_dir not writable"]
        return {
            "v": RESPONSE_VERSION,
            "status": "ok" if not gaps else "degraded",
            "model_versions": registry.versions(),
            "data_dir_writable": writable,
            "gaps": gaps,
        }

    if config.static_dir and os.path.isdir(config.static_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def main_serve(config: ServiceConfig | None = None) -> None:
    import uvicorn

    config = config or ServiceConfig.from_env()
    app = create_app(config)
    uvicorn.run(app, host="0.0.0.0", port=config.port, log_level="info")
