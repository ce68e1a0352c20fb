import json
import threading
import time

import pytest
import requests

from gramweave.server import make_server


@pytest.fixture(scope="module")
def live_server(toy_run_dir):
    _, ckpt = toy_run_dir
    server = make_server(ckpt, port=0, source="CE", n=3)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    yield f"http://{host}:{port}", server
    server.shutdown()
    server.server_close()


class TestSuggestEndpoint:
    def test_happy_path_descending(self, live_server):
        base, _ = live_server
        resp = requests.post(f"{base}/suggest", json={"context": "the weather", "k": 2})
        assert resp.status_code == 200
        body = resp.json()
        assert len(body["suggestions"]) == 2
        probs = [s["probability"] for s in body["suggestions"]]
        assert probs == sorted(probs, reverse=True)
        tokens = {s["token"] for s in body["suggestions"]}
        assert tokens == {"is", "forecast"}
        assert body["model_info"]["embedding_source"] == "CE"
        assert body["model_info"]["n"] == 3

    def test_default_k_is_five(self, live_server):
        base, _ = live_server
        resp = requests.post(f"{base}/suggest", json={"context": "the weather"})
        assert resp.status_code == 200
        assert len(resp.json()["suggestions"]) == 5

    def test_identical_requests_identical_bodies(self, live_server):
        base, _ = live_server
        payload = {"context": "the weather is", "k": 3}
        a = requests.post(f"{base}/suggest", json=payload)
        b = requests.post(f"{base}/suggest", json=payload)
        assert a.content == b.content

    def test_empty_context_is_422(self, live_server):
        base, _ = live_server
        resp = requests.post(f"{base}/suggest", json={"context": "", "k": 1})
        assert resp.status_code == 422
        assert resp.json() == {"error": "no usable context"}

    def test_unknown_words_only_is_422(self, live_server):
        base, _ = live_server
        resp = requests.post(f"{base}/suggest", json={"context": "qwxz jjkk", "k": 1})
        assert resp.status_code == 422

    def test_zero_k_is_400(self, live_server):
        base, _ = live_server
        resp = requests.post(f"{base}/suggest", json={"context": "the weather", "k": 0})
        assert resp.status_code == 400

    def test_malformed_json_is_400(self, live_server):
        base, _ = live_server
        resp = requests.post(f"{base}/suggest", data="{not json",
                             headers={"Content-Type": "application/json"})
        assert resp.status_code == 400

    def test_non_object_body_is_400(self, live_server):
        base, _ = live_server
        resp = requests.post(f"{base}/suggest", json=["the weather"])
        assert resp.status_code == 400

    def test_oversized_context_is_400(self, live_server):
        base, _ = live_server
        resp = requests.post(f"{base}/suggest", json={"context": "w" * 10_001, "k": 1})
        assert resp.status_code == 400


class TestOtherEndpoints:
    def test_health(self, live_server):
        base, _ = live_server
        resp = requests.get(f"{base}/health")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok"}

    def test_model_info_echoes_digest(self, live_server, toy_run_dir):
        base, _ = live_server
        manifest = json.loads((toy_run_dir[1] / "manifest.json").read_text())
        resp = requests.get(f"{base}/model")
        assert resp.status_code == 200
        body = resp.json()
        assert body["corpus_digest"] == manifest["corpus_digest"]
        assert body["embedding_source"] == "CE"

    def test_unknown_path_is_404(self, live_server):
        base, _ = live_server
        assert requests.get(f"{base}/nope").status_code == 404
        assert requests.post(f"{base}/nope", json={}).status_code == 404

    def test_request_counter_increments(self, live_server):
        base, server = live_server
        before = server.request_count
        requests.get(f"{base}/health")
        assert server.request_count > before


class TestCors:
    def test_localhost_origin_allowed(self, live_server):
        base, _ = live_server
        resp = requests.get(f"{base}/health", headers={"Origin": "http://localhost:3000"})
        assert resp.headers.get("Access-Control-Allow-Origin") == "http://localhost:3000"

    def test_foreign_origin_not_echoed(self, live_server):
        base, _ = live_server
        resp = requests.get(f"{base}/health", headers={"Origin": "https://evil.example"})
        assert "Access-Control-Allow-Origin" not in resp.headers

    def test_preflight(self, live_server):
        base, _ = live_server
        resp = requests.options(f"{base}/suggest", headers={
            "Origin": "http://127.0.0.1:8000",
            "Access-Control-Request-Method": "POST",
        })
        assert resp.status_code == 204
        assert "POST" in resp.headers["Access-Control-Allow-Methods"]


class TestConcurrency:
    def test_parallel_requests_match_serial(self, live_server):
        base, _ = live_server
        payload = {"context": "the weather", "k": 3}
        expected = requests.post(f"{base}/suggest", json=payload).json()
        results = [None] * 8

        def worker(i):
            results[i] = requests.post(f"{base}/suggest", json=payload).json()

        threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert all(r == expected for r in results)

    def test_suggest_latency_under_50ms(self, live_server):
        base, _ = live_server
        payload = {"context": "the weather forecast is", "k": 5}
        requests.post(f"{base}/suggest", json=payload)  # warm up
        samples = []
        for _ in range(20):
            t0 = time.perf_counter()
            requests.post(f"{base}/suggest", json=payload)
            samples.append(time.perf_counter() - t0)
        samples.sort()
        p50 = samples[len(samples) // 2]
        assert p50 < 0.05, f"p50 latency {p50 * 1000:.1f} ms"
