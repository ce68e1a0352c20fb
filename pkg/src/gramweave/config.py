"""Plain-text key=value configuration files.

One `key = value` pair per line; blank lines and lines starting with `#`
are ignored.  Dotted keys address the two trainer blocks (`gcn.*`,
`lstm.*`).  Unknown keys are an error so typos cannot silently fall back
to defaults.  `gramweave train --write-default-config` emits the
annotated template below.
"""

from __future__ import annotations

from pathlib import Path

from .gcn import GcnTrainConfig
from .lstm import LstmTrainConfig
from .pipeline import PipelineConfig

DEFAULT_CONFIG_TEXT = """\
# gramweave pipeline configuration (key = value per line, # for comments)

# Corpus: a UTF-8 plain-text file...
corpus = corpus.txt
# ...or a cached keyword fetch (used when corpus is unset).
# keyword = sports

# Checkpoints and reports are written here (CLI --out overrides).
# out = runs/example

seed = 0
# Which embedding table feeds the LSTM: CE, RE, or both (for comparison).
source = both
# Context lengths to train, comma-separated.
ngram_sizes = 1,2,3,5,10
# Shared dimension of the exported CE table and the RE baseline.
embedding_dim = 64
# Train fraction for the n-gram example split.
train_fraction = 0.8

# Graph encoder (link prediction).
gcn.lr = 0.005
gcn.epochs = 200
gcn.train_fraction = 0.8
gcn.input_dim = 64
gcn.hidden_dim = 64
gcn.adjacency = sym_norm
gcn.negatives_per_positive = 1
gcn.train_h0 = true

# Next-word LSTM.
lstm.lr = 0.0001
lstm.epochs = 500
lstm.batch_size = 100
lstm.hidden = 200
lstm.readout = last_real
lstm.finetune_embeddings = false
"""


def _parse_bool(value: str, key: str) -> bool:
    low = value.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(f"config key {key}: expected a boolean, got {value!r}")


def _parse_int_list(value: str) -> list:
    return [int(part) for part in value.split(",") if part.strip()]


def parse_config_text(text: str) -> PipelineConfig:
    top: dict = {}
    gcn: dict = {}
    lstm: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"config line {lineno}: expected key = value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.split("#", 1)[0].strip()
        if key == "corpus":
            top["corpus_path"] = value
        elif key == "keyword":
            top["keyword"] = value
        elif key == "out":
            top["out_dir"] = value
        elif key == "seed":
            top["seed"] = int(value)
        elif key == "source":
            top["embedding_source"] = value
        elif key == "ngram_sizes":
            top["ngram_sizes"] = _parse_int_list(value)
        elif key == "embedding_dim":
            gcn["d_out"] = int(value)
        elif key == "train_fraction":
            top["train_fraction"] = float(value)
        elif key == "gcn.lr":
            gcn["lr"] = float(value)
        elif key == "gcn.epochs":
            gcn["epochs"] = int(value)
        elif key == "gcn.train_fraction":
            gcn["train_fraction"] = float(value)
        elif key == "gcn.input_dim":
            gcn["d0"] = int(value)
        elif key == "gcn.hidden_dim":
            gcn["d_h"] = int(value)
        elif key == "gcn.adjacency":
            gcn["adjacency_mode"] = value
        elif key == "gcn.negatives_per_positive":
            gcn["negatives_per_positive"] = int(value)
        elif key == "gcn.train_h0":
            gcn["train_h0"] = _parse_bool(value, key)
        elif key == "lstm.lr":
            lstm["lr"] = float(value)
        elif key == "lstm.epochs":
            lstm["epochs"] = int(value)
        elif key == "lstm.batch_size":
            lstm["batch_size"] = int(value)
        elif key == "lstm.hidden":
            lstm["d_h"] = int(value)
        elif key == "lstm.readout":
            lstm["readout"] = value
        elif key == "lstm.finetune_embeddings":
            lstm["finetune_embeddings"] = _parse_bool(value, key)
        else:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
    return PipelineConfig(gcn=GcnTrainConfig(**gcn), lstm=LstmTrainConfig(**lstm), **top)


def parse_config_file(path) -> PipelineConfig:
    return parse_config_text(Path(path).read_text(encoding="utf-8"))
