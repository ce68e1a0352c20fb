"""Keyword-driven Wikipedia corpus fetching with a mandatory local cache.

The cache is the source of truth: once populated, every call is served
from disk byte-for-byte, so nothing downstream ever needs the network.
Plain-text file ingestion (the `ingest` subcommand) is the primary
offline path; this module is the convenience fetcher.
"""

from __future__ import annotations

import json
import os
import re
from pathlib import Path

from .textprep import RawDocument

WIKIPEDIA_API = "https://en.wikipedia.org/w/api.php"
CACHE_ENV_VAR = "GRAMWEAVE_CACHE"
_USER_AGENT = "gramweave/0.1 (corpus builder)"
_SEARCH_BATCH = 50
_EXTRACT_BATCH = 20


def default_cache_dir() -> Path:
    override = os.environ.get(CACHE_ENV_VAR)
    if override:
        return Path(override)
    return Path.home() / ".cache" / "gramweave"


def _slug(keyword: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", keyword.lower()).strip("-") or "keyword"


def _requests_get(params: dict) -> dict:
    import requests

    resp = requests.get(WIKIPEDIA_API, params=params, timeout=30,
                        headers={"User-Agent": _USER_AGENT})
    resp.raise_for_status()
    return resp.json()


def _search_pageids(keyword: str, max_articles: int, http_get) -> list:
    pageids = []
    offset = 0
    while len(pageids) < max_articles:
        data = http_get({
            "action": "query",
            "list": "search",
            "srsearch": keyword,
            "srlimit": min(_SEARCH_BATCH, max_articles - len(pageids)),
            "sroffset": offset,
            "format": "json",
        })
        hits = data.get("query", {}).get("search", [])
        if not hits:
            break
        pageids.extend(int(hit["pageid"]) for hit in hits)
        if "continue" not in data:
            break
        offset = data["continue"].get("sroffset", offset + len(hits))
    return pageids[:max_articles]


def _fetch_extracts(pageids: list, http_get) -> dict:
    extracts = {}
    for start in range(0, len(pageids), _EXTRACT_BATCH):
        batch = pageids[start:start + _EXTRACT_BATCH]
        data = http_get({
            "action": "query",
            "prop": "extracts",
            "explaintext": 1,
            "pageids": "|".join(str(p) for p in batch),
            "format": "json",
        })
        for pid, page in data.get("query", {}).get("pages", {}).items():
            extracts[int(pid)] = page.get("extract", "")
    return extracts


def _read_cache(keyword_dir: Path, keyword: str) -> RawDocument:
    index = json.loads((keyword_dir / "index.json").read_text(encoding="utf-8"))
    parts = []
    for pid in index["pageids"]:
        parts.append((keyword_dir / f"{pid}.txt").read_text(encoding="utf-8"))
    return RawDocument(text="\n\n".join(parts), source_label=keyword)


def fetch_articles(keyword: str, max_articles: int, cache_dir=None,
                   http_get=None) -> RawDocument:
    """Up to `max_articles` plain-text extracts matching `keyword`,
    concatenated in search order.  Cache-first: a warm cache is returned
    verbatim without touching the network."""
    if max_articles < 1:
        raise ValueError("max_articles must be >= 1")
    cache_root = Path(cache_dir) if cache_dir else default_cache_dir()
    keyword_dir = cache_root / _slug(keyword)
    if (keyword_dir / "index.json").exists():
        return _read_cache(keyword_dir, keyword)

    http_get = http_get or _requests_get
    try:
        pageids = _search_pageids(keyword, max_articles, http_get)
        extracts = _fetch_extracts(pageids, http_get)
    except Exception as e:
        raise RuntimeError(
            f"could not reach Wikipedia and the cache at {keyword_dir} is empty; "
            f"fetch on a networked machine or use `gramweave ingest --input FILE` "
            f"with a plain-text corpus ({e})"
        ) from e
    if not pageids:
        raise RuntimeError(f"no articles found for keyword {keyword!r}")

    keyword_dir.mkdir(parents=True, exist_ok=True)
    kept = []
    for pid in pageids:
        text = extracts.get(pid, "")
        if not text:
            continue
        (keyword_dir / f"{pid}.txt").write_text(text, encoding="utf-8")
        kept.append(pid)
    (keyword_dir / "index.json").write_text(
        json.dumps({"keyword": keyword, "pageids": kept}, indent=2) + "\n",
        encoding="utf-8",
    )
    return _read_cache(keyword_dir, keyword)
