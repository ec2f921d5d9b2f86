"""Durable storage for translations, feedback, ratings, and example inputs.

Everything lives in line-delimited JSON files under a data directory,
one record per line with a ``v`` version field:

    translations.jsonl     what was shown to users
    feedback_expert.jsonl  quality 1-5 + required correction + comment
    feedback_common.jsonl  helpfulness 1-5 + optional comment
    ratings_da.jsonl       0-100 direct-assessment scores with band labels
    examples.jsonl         monolingual example inputs and status updates

Files are append-only; an example's status change is recorded by
appending a fresh record for the same id, and the in-memory index keeps
the latest state. All writes serialize through one lock; reads hit the
in-memory index.
"""

import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone

from mtloop.corpus import DIRECTIONS, ParallelCorpus
from mtloop.textmetrics import pearson, tokenize_13a

RECORD_VERSION = 1

MODEL_KINDS = ("smt", "nmt")

LANGUAGES = ("chr", "en")

# Direct-assessment score bands, inclusive ranges over 0-100.
DA_BANDS = (
    (0, 10, "completely_incorrect"),
    (11, 29, "some_correct_keywords"),
    (30, 50, "fragments_with_major_mistakes"),
    (51, 69, "understandable_with_errors"),
    (70, 90, "mostly_preserves_meaning"),
    (91, 100, "perfect"),
)


def da_band(score: int) -> str:
    """Band label for an integer 0-100 direct-assessment score."""
    if not isinstance(score, int) or not 0 <= score <= 100:
        raise ValueError("score must be an integer in 0-100")
    for lo, hi, label in DA_BANDS:
        if lo <= score <= hi:
            return label
    raise AssertionError("bands cover 0-100")


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass
class TranslationRecord:
    id: str
    source_text: str
    direction: str
    model_kind: str
    output_text: str
    stars: float
    created_at: str = ""
    example_id: str | None = None


@dataclass
class ExpertFeedback:
    translation_id: str
    quality: int
    correction: str
    author: str
    comment: str | None = None


@dataclass
class CommonFeedback:
    translation_id: str
    helpfulness: int
    comment: str | None = None


@dataclass
class DARating:
    translation_id: str
    score: int
    band: str = ""


@dataclass
class ExampleItem:
    id: str
    language: str
    text: str
    status: str = "unlabeled"


class FeedbackStore:
    """Append-only persistence with an in-memory index."""

    FILES = {
        "translations": "translations.jsonl",
        "expert": "feedback_expert.jsonl",
        "common": "feedback_common.jsonl",
        "da": "ratings_da.jsonl",
        "examples": "examples.jsonl",
    }

    def __init__(self, data_dir):
        self.data_dir = str(data_dir)
        os.makedirs(self.data_dir, exist_ok=True)
        self._lock = threading.Lock()
        self.translations: dict[str, TranslationRecord] = {}
        self.expert: list[dict] = []
        self.common: list[dict] = []
        self.da: list[dict] = []
        self.examples: dict[str, ExampleItem] = {}
        self._example_order: list[str] = []
        self._counter = 0
        self._replay()

    # -- persistence -------------------------------------------------------

    def _path(self, name: str) -> str:
        return os.path.join(self.data_dir, self.FILES[name])

    def _replay(self) -> None:
        for name in self.FILES:
            path = self._path(name)
            if not os.path.exists(path):
                continue
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        self._index(name, json.loads(line))

    def _index(self, name: str, rec: dict) -> None:
        self._counter += 1
        if name == "translations":
            self.translations[rec["id"]] = TranslationRecord(
                id=rec["id"],
                source_text=rec["source_text"],
                direction=rec["direction"],
                model_kind=rec["model_kind"],
                output_text=rec["output_text"],
                stars=rec["stars"],
                created_at=rec.get("created_at", ""),
                example_id=rec.get("example_id"),
            )
        elif name == "expert":
            self.expert.append(rec)
        elif name == "common":
            self.common.append(rec)
        elif name == "da":
            self.da.append(rec)
        elif name == "examples":
            item = self.examples.get(rec["id"])
            if item is None:
                self.examples[rec["id"]] = ExampleItem(
                    rec["id"], rec["language"], rec["text"], rec["status"]
                )
                self._example_order.append(rec["id"])
            else:
                # status may only move forward
                if item.status == "unlabeled":
                    item.status = rec["status"]

    def _append(self, name: str, rec: dict) -> None:
        rec = {"v": RECORD_VERSION, **rec}
        with open(self._path(name), "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
        self._index(name, rec)

    def _new_id(self, prefix: str) -> str:
        return f"{prefix}-{self._counter + 1:06d}"

    # -- translations ------------------------------------------------------

    def add_translation(
        self,
        source_text: str,
        direction: str,
        model_kind: str,
        output_text: str,
        stars: float,
        example_id: str | None = None,
    ) -> TranslationRecord:
        if direction not in DIRECTIONS:
            raise ValueError(f"unknown direction: {direction!r}")
        if model_kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind: {model_kind!r}")
        if not 0.0 <= stars <= 5.0:
            raise ValueError("stars must be in [0, 5]")
        with self._lock:
            rec_id = self._new_id("t")
            self._append(
                "translations",
                {
                    "id": rec_id,
                    "source_text": source_text,
                    "direction": direction,
                    "model_kind": model_kind,
                    "output_text": output_text,
                    "stars": stars,
                    "created_at": _utc_now(),
                    "example_id": example_id,
                },
            )
            return self.translations[rec_id]

    # -- feedback ----------------------------------------------------------

    def submit_expert(self, fb: ExpertFeedback) -> str:
        if fb.translation_id not in self.translations:
            raise KeyError(f"unknown translation: {fb.translation_id!r}")
        if not isinstance(fb.quality, int) or not 1 <= fb.quality <= 5:
            raise ValueError("quality must be an integer in 1-5")
        if not fb.correction or not fb.correction.strip():
            raise ValueError("correction is required")
        with self._lock:
            rec_id = self._new_id("fe")
            self._append(
                "expert",
                {
                    "id": rec_id,
                    "translation_id": fb.translation_id,
                    "quality": fb.quality,
                    "correction": fb.correction,
                    "comment": fb.comment,
                    "author": fb.author,
                    "created_at": _utc_now(),
                },
            )
            example_id = self.translations[fb.translation_id].example_id
            if example_id is not None and example_id in self.examples:
                item = self.examples[example_id]
                if item.status == "unlabeled":
                    self._append(
                        "examples",
                        {
                            "id": item.id,
                            "language": item.language,
                            "text": item.text,
                            "status": "labeled",
                        },
                    )
            return rec_id

    def submit_common(self, fb: CommonFeedback) -> str:
        if fb.translation_id not in self.translations:
            raise KeyError(f"unknown translation: {fb.translation_id!r}")
        if not isinstance(fb.helpfulness, int) or not 1 <= fb.helpfulness <= 5:
            raise ValueError("helpfulness must be an integer in 1-5")
        with self._lock:
            rec_id = self._new_id("fc")
            self._append(
                "common",
                {
                    "id": rec_id,
                    "translation_id": fb.translation_id,
                    "helpfulness": fb.helpfulness,
                    "comment": fb.comment,
                    "created_at": _utc_now(),
                },
            )
            return rec_id

    def record_da(self, rating: DARating) -> str:
        if rating.translation_id not in self.translations:
            raise KeyError(f"unknown translation: {rating.translation_id!r}")
        band = da_band(rating.score)
        with self._lock:
            rec_id = self._new_id("da")
            self._append(
                "da",
                {
                    "id": rec_id,
                    "translation_id": rating.translation_id,
                    "score": rating.score,
                    "band": band,
                    "created_at": _utc_now(),
                },
            )
            return rec_id

    # -- examples ----------------------------------------------------------

    def add_example(self, language: str, text: str) -> ExampleItem:
        if language not in LANGUAGES:
            raise ValueError(f"unknown language: {language!r}")
        with self._lock:
            rec_id = self._new_id("ex")
            self._append(
                "examples",
                {"id": rec_id, "language": language, "text": text, "status": "unlabeled"},
            )
            return self.examples[rec_id]

    def list_examples(self, language: str | None = None, status: str | None = None) -> list[ExampleItem]:
        out = []
        for rec_id in self._example_order:
            item = self.examples[rec_id]
            if language is not None and item.language != language:
                continue
            if status is not None and item.status != status:
                continue
            out.append(item)
        return out

    def next_example(self, language: str) -> ExampleItem | None:
        """Oldest unlabeled example in the given language, if any."""
        for item in self.list_examples(language=language, status="unlabeled"):
            return item
        return None

    # -- reporting ---------------------------------------------------------

    def stats(self) -> dict[str, dict]:
        """Per (model kind, direction) cell: feedback count, mean expert
        quality, and Pearson between quality and the shown star estimate.

        Correlation is None for cells with fewer than two records or no
        variance.
        """
        cells = {}
        for kind in MODEL_KINDS:
            for direction in DIRECTIONS:
                qualities = []
                stars = []
                for rec in self.expert:
                    tr = self.translations.get(rec["translation_id"])
                    if tr is None or tr.model_kind != kind or tr.direction != direction:
                        continue
                    qualities.append(float(rec["quality"]))
                    stars.append(tr.stars)
                cell = {"count": len(qualities), "avg_quality": None, "pearson": None}
                if qualities:
                    cell["avg_quality"] = sum(qualities) / len(qualities)
                if len(qualities) >= 2:
                    try:
                        cell["pearson"] = pearson(qualities, stars).r
                    except ValueError:
                        cell["pearson"] = None
                cells[f"{kind}:{direction}"] = cell
        return cells

    def export_corrections(self, direction: str | None = None, dedup: bool = False) -> ParallelCorpus:
        """Expert corrections as (source, corrected target) pairs.

        With ``dedup`` only the latest correction per translation
        survives. ``direction`` selects one direction; when omitted the
        store must contain records for at most one direction.
        """
        chosen: dict = {}
        ordered = []
        for rec in self.expert:
            tr = self.translations.get(rec["translation_id"])
            if tr is None:
                continue
            if direction is not None and tr.direction != direction:
                continue
            pair = (tr.direction, tr.source_text, rec["correction"])
            if dedup:
                if rec["translation_id"] not in chosen:
                    ordered.append(rec["translation_id"])
                chosen[rec["translation_id"]] = pair
            else:
                ordered.append(pair)
        pairs = [chosen[k] for k in ordered] if dedup else ordered

        directions = {d for d, _, _ in pairs}
        if direction is None:
            if len(directions) > 1:
                raise ValueError("store holds multiple directions; pass one explicitly")
            direction = directions.pop() if directions else "chr-en"
        return ParallelCorpus(
            tuple(
                (tuple(tokenize_13a(src)), tuple(tokenize_13a(corr)))
                for _, src, corr in pairs
            ),
            direction,
        )
