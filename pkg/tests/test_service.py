"""HTTP API contract: routing, validation, auth, schemas, invariants."""

import json
import os

import jsonschema
import pytest
from fastapi.testclient import TestClient

from mtloop import schemas
from mtloop.corpus import make_corpus
from mtloop.dictionary import DictEntry, build_index
from mtloop.feedback import FeedbackStore
from mtloop.qe.dataset import build_kfold_dataset
from mtloop.qe.features import smt_features
from mtloop.qe.gbt import gbt_train
from mtloop.service import (
    ModelRegistry,
    ServiceConfig,
    create_app,
    nmt_ensemble_from_lexical,
)
from mtloop.smt.model import train_smt

EXPERT_TOKEN = "expert-secret"


def tiny_corpus(direction="chr-en"):
    pairs = [
        ("ka nu", "the cat"),
        ("ka wo", "the dog"),
        ("nu tsi", "cat runs"),
        ("wo tsi", "dog runs"),
        ("ka nu tsi", "the cat runs"),
        ("ka wo tsi", "the dog runs"),
        ("nu", "cat"),
        ("wo", "dog"),
    ]
    corpus = make_corpus(pairs, "chr-en")
    return corpus if direction == "chr-en" else corpus.flipped()


def build_registry():
    registry = ModelRegistry()
    for direction in ("chr-en", "en-chr"):
        corpus = tiny_corpus(direction)
        model = train_smt(corpus, em_iterations=5)

        def trainer(sub_corpus):
            trained = train_smt(sub_corpus, em_iterations=3)
            return lambda src: trained.decode(src, beam=10)

        dataset = build_kfold_dataset(corpus, k=2, trainer=trainer, featurizer=smt_features)
        qe_model = gbt_train(dataset, max_depth=2, eta=0.3, rounds=10)
        registry.set_smt(direction, model, qe_model)
        registry.set_nmt(direction, nmt_ensemble_from_lexical(model.lex_fwd))
    return registry


REGISTRY = build_registry()


@pytest.fixture()
def client(tmp_path):
    store = FeedbackStore(tmp_path / "data")
    store.add_example("chr", "ka nu tsi")
    store.add_example("en", "the dog runs")
    dictionary = build_index(
        [
            DictEntry("ka", "chr", "the"),
            DictEntry("nu", "chr", "cat"),
            DictEntry("cat", "en", "small feline"),
            DictEntry("dog", "en", "canine"),
        ]
    )
    config = ServiceConfig(data_dir=str(tmp_path / "data"), expert_tokens=(EXPERT_TOKEN,))
    app = create_app(config, registry=REGISTRY, store=store, dictionary=dictionary)
    test_client = TestClient(app)
    test_client.app_store = store
    return test_client


def translate(client, **overrides):
    body = {"text": "ka nu tsi", "direction": "chr-en", "model": "smt"}
    body.update(overrides)
    return client.post("/api/translate", json=body)


class TestTranslate:
    @pytest.mark.parametrize("direction", ["chr-en", "en-chr"])
    @pytest.mark.parametrize("model", ["smt", "nmt"])
    def test_both_models_both_directions(self, client, direction, model):
        text = "ka nu tsi" if direction == "chr-en" else "the cat runs"
        resp = translate(client, text=text, direction=direction, model=model)
        assert resp.status_code == 200
        data = resp.json()
        jsonschema.validate(data, schemas.TRANSLATE_RESPONSE)
        assert 0.0 <= data["stars_raw"] <= 5.0
        assert data["stars"] == round(data["stars_raw"], 1)

    def test_smt_alignment_is_hard_and_in_bounds(self, client):
        data = translate(client, model="smt").json()
        assert data["alignment"]["kind"] == "hard"
        n_src, n_tgt = len(data["src_tokens"]), len(data["tgt_tokens"])
        for i, j in data["alignment"]["links"]:
            assert 0 <= i < n_src
            assert 0 <= j < n_tgt

    def test_nmt_alignment_is_soft_and_row_stochastic(self, client):
        data = translate(client, model="nmt").json()
        assert data["alignment"]["kind"] == "soft"
        matrix = data["alignment"]["matrix"]
        assert len(matrix) == len(data["tgt_tokens"])
        for row in matrix:
            assert len(row) == len(data["src_tokens"])
            assert sum(row) == pytest.approx(1.0, abs=1e-6)

    def test_dictionary_panels_cover_tokens(self, client):
        data = translate(client).json()
        assert len(data["dict_src"]) == len(data["src_tokens"])
        assert len(data["dict_tgt"]) == len(data["tgt_tokens"])
        ka_panel = data["dict_src"][data["src_tokens"].index("ka")]
        assert any(e["headword"] == "ka" for e in ka_panel)

    def test_translation_persisted(self, client):
        data = translate(client).json()
        store = client.app_store
        assert data["translation_id"] in store.translations
        assert store.translations[data["translation_id"]].stars == pytest.approx(
            data["stars_raw"]
        )

    def test_empty_text_rejected(self, client):
        assert translate(client, text="").status_code == 400
        assert translate(client, text="   ").status_code == 400

    def test_oversized_text_rejected(self, client):
        assert translate(client, text="x" * 2001).status_code == 400

    def test_unknown_direction_and_model(self, client):
        assert translate(client, direction="en-fr").status_code == 400
        assert translate(client, model="transformer").status_code == 400

    def test_unknown_example_id(self, client):
        assert translate(client, example_id="ex-zzz").status_code == 404

    def test_nmt_unknown_source_gives_empty_output(self, client):
        # all-unknown tokens leave the toy ensemble nothing to emit;
        # the response is still well-formed with zero stars
        resp = translate(client, text="qqq zzz", model="nmt")
        assert resp.status_code == 200
        data = resp.json()
        jsonschema.validate(data, schemas.TRANSLATE_RESPONSE)
        assert data["tgt_tokens"] == []
        assert data["stars_raw"] == 0.0
        assert data["alignment"] == {"kind": "soft", "matrix": []}

    def test_model_not_loaded_gives_503(self, tmp_path):
        config = ServiceConfig(data_dir=str(tmp_path / "d2"))
        app = create_app(config, registry=ModelRegistry())
        resp = TestClient(app).post(
            "/api/translate",
            json={"text": "ka", "direction": "chr-en", "model": "smt"},
        )
        assert resp.status_code == 503


class TestExamples:
    def test_list_all(self, client):
        data = client.get("/api/examples").json()
        jsonschema.validate(data, schemas.EXAMPLES_RESPONSE)
        assert len(data["items"]) == 2

    def test_language_filter(self, client):
        data = client.get("/api/examples", params={"lang": "chr"}).json()
        assert all(item["language"] == "chr" for item in data["items"])
        assert len(data["items"]) == 1

    def test_status_filter(self, client):
        data = client.get("/api/examples", params={"status": "unlabeled"}).json()
        assert len(data["items"]) == 2
        data = client.get("/api/examples", params={"status": "labeled"}).json()
        assert data["items"] == []

    def test_bad_language(self, client):
        assert client.get("/api/examples", params={"lang": "fr"}).status_code == 400

    def test_bad_status(self, client):
        assert client.get("/api/examples", params={"status": "odd"}).status_code == 400


class TestCommonFeedback:
    def test_terms_gate(self, client):
        tid = translate(client).json()["translation_id"]
        resp = client.post(
            "/api/feedback/common",
            json={"translation_id": tid, "helpfulness": 4, "accepted_terms": False},
        )
        assert resp.status_code == 403

    def test_valid_submission(self, client):
        tid = translate(client).json()["translation_id"]
        resp = client.post(
            "/api/feedback/common",
            json={"translation_id": tid, "helpfulness": 4, "accepted_terms": True},
        )
        assert resp.status_code == 201
        jsonschema.validate(resp.json(), schemas.FEEDBACK_RESPONSE)

    def test_out_of_range_helpfulness(self, client):
        tid = translate(client).json()["translation_id"]
        resp = client.post(
            "/api/feedback/common",
            json={"translation_id": tid, "helpfulness": 7, "accepted_terms": True},
        )
        assert resp.status_code == 400

    def test_unknown_translation(self, client):
        resp = client.post(
            "/api/feedback/common",
            json={"translation_id": "t-404404", "helpfulness": 3, "accepted_terms": True},
        )
        assert resp.status_code == 404

    def test_missing_rating_rejected(self, client):
        tid = translate(client).json()["translation_id"]
        resp = client.post(
            "/api/feedback/common",
            json={"translation_id": tid, "comment": "nice", "accepted_terms": True},
        )
        assert resp.status_code == 400


class TestExpertFeedback:
    def expert_headers(self):
        return {"Authorization": f"Bearer {EXPERT_TOKEN}"}

    def test_missing_token(self, client):
        resp = client.post(
            "/api/feedback/expert",
            json={"translation_id": "t-000001", "quality": 3, "correction": "x"},
        )
        assert resp.status_code == 401

    def test_invalid_token(self, client):
        resp = client.post(
            "/api/feedback/expert",
            headers={"Authorization": "Bearer wrong"},
            json={"translation_id": "t-000001", "quality": 3, "correction": "x"},
        )
        assert resp.status_code == 401

    def test_valid_submission_flips_example(self, client):
        example_id = client.get("/api/examples", params={"lang": "chr"}).json()["items"][0]["id"]
        tid = translate(client, example_id=example_id).json()["translation_id"]
        resp = client.post(
            "/api/feedback/expert",
            headers=self.expert_headers(),
            json={
                "translation_id": tid,
                "quality": 4,
                "correction": "the cat runs fast",
                "author": "e1",
            },
        )
        assert resp.status_code == 201
        jsonschema.validate(resp.json(), schemas.FEEDBACK_RESPONSE)
        items = client.get("/api/examples", params={"lang": "chr"}).json()["items"]
        assert items[0]["status"] == "labeled"

    def test_empty_correction_rejected(self, client):
        tid = translate(client).json()["translation_id"]
        resp = client.post(
            "/api/feedback/expert",
            headers=self.expert_headers(),
            json={"translation_id": tid, "quality": 4, "correction": "  "},
        )
        assert resp.status_code == 400


class TestStats:
    def test_requires_expert_token(self, client):
        assert client.get("/api/stats").status_code == 401

    def test_fresh_deployment_cells(self, client):
        resp = client.get("/api/stats", headers={"Authorization": f"Bearer {EXPERT_TOKEN}"})
        assert resp.status_code == 200
        data = resp.json()
        jsonschema.validate(data, schemas.STATS_RESPONSE)
        for cell in data["cells"].values():
            assert cell == {"count": 0, "avg_quality": None, "pearson": None}

    def test_matches_store_stats(self, client):
        tid = translate(client).json()["translation_id"]
        client.post(
            "/api/feedback/expert",
            headers={"Authorization": f"Bearer {EXPERT_TOKEN}"},
            json={"translation_id": tid, "quality": 4, "correction": "better text"},
        )
        data = client.get(
            "/api/stats", headers={"Authorization": f"Bearer {EXPERT_TOKEN}"}
        ).json()
        assert data["cells"] == json.loads(json.dumps(client.app_store.stats()))


class TestHealth:
    def test_ok_when_loaded(self, client):
        data = client.get("/api/health").json()
        jsonschema.validate(data, schemas.HEALTH_RESPONSE)
        assert data["status"] == "ok"
        assert data["gaps"] == []
        assert "smt:chr-en" in data["model_versions"]

    def test_degraded_without_models(self, tmp_path):
        config = ServiceConfig(data_dir=str(tmp_path / "d3"))
        app = create_app(config, registry=ModelRegistry())
        data = TestClient(app).get("/api/health").json()
        assert data["status"] == "degraded"
        assert "smt:chr-en" in data["gaps"]


class TestModelDirLoading:
    def test_serve_from_saved_artifacts(self, tmp_path):
        from mtloop.qe.gbt import save_gbt
        from mtloop.smt.model import save_model, train_smt as retrain_smt

        model_dir = tmp_path / "models"
        for direction in ("chr-en", "en-chr"):
            corpus = tiny_corpus(direction)
            model = retrain_smt(corpus, em_iterations=5)
            save_model(model, model_dir / direction)
            save_gbt(REGISTRY.smt(direction)[1], model_dir / direction / "qe_smt.json")

        config = ServiceConfig(data_dir=str(tmp_path / "data"), model_dir=str(model_dir))
        app = create_app(config)
        loaded_client = TestClient(app)
        for model in ("smt", "nmt"):
            resp = loaded_client.post(
                "/api/translate",
                json={"text": "ka nu tsi", "direction": "chr-en", "model": model},
            )
            assert resp.status_code == 200, resp.text
        health = loaded_client.get("/api/health").json()
        assert health["status"] == "ok"

    def test_partial_dir_reports_gaps(self, tmp_path):
        from mtloop.qe.gbt import save_gbt
        from mtloop.smt.model import save_model, train_smt as retrain_smt

        model_dir = tmp_path / "models"
        model = retrain_smt(tiny_corpus("chr-en"), em_iterations=3)
        save_model(model, model_dir / "chr-en")
        save_gbt(REGISTRY.smt("chr-en")[1], model_dir / "chr-en" / "qe_smt.json")

        config = ServiceConfig(data_dir=str(tmp_path / "data"), model_dir=str(model_dir))
        health = TestClient(create_app(config)).get("/api/health").json()
        assert health["status"] == "degraded"
        assert "smt:en-chr" in health["gaps"]


class TestNoMutationOnError:
    def record_counts(self, store):
        counts = {}
        for name in store.FILES:
            path = store._path(name)
            counts[name] = sum(1 for _ in open(path)) if os.path.exists(path) else 0
        return counts

    def test_4xx_responses_leave_store_untouched(self, client):
        store = client.app_store
        before = self.record_counts(store)
        translate(client, text="")
        translate(client, direction="xx-yy")
        client.post(
            "/api/feedback/common",
            json={"translation_id": "t-404404", "helpfulness": 3, "accepted_terms": True},
        )
        client.post(
            "/api/feedback/common",
            json={"translation_id": "t-404404", "helpfulness": 3, "accepted_terms": False},
        )
        client.post(
            "/api/feedback/expert",
            json={"translation_id": "t-404404", "quality": 3, "correction": "x"},
        )
        assert self.record_counts(store) == before
