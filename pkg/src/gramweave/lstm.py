"""Many-to-one LSTM over embedded n-gram contexts with a softmax output
over the vocabulary.

Gate preactivations act on the concatenation [h_{t-1}, x_t]:

    f = sig(W_f.[h,x] + b_f)        i = sig(W_i.[h,x] + b_i)
    g = tanh(W_c.[h,x] + b_c)       o = sig(W_o.[h,x] + b_o)
    c_t = f*c_{t-1} + i*g           h_t = o*tanh(c_t)

The readout takes h at the last real (non-PAD) timestep by default, so
zero post-padding cannot touch the prediction; "final_step" readout is
kept as the literal alternative.  Logit j corresponds to word id j+1, so
PAD is never a prediction target.  Backpropagation through time is
hand-derived and verified against the finite-difference oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ngram import EmbeddingTable, lookup, pack_examples
from .numcore import DTYPE, Adam, ensure_finite, rng
from .textprep import Vocabulary, clean_and_tokenize

READOUTS = ("last_real", "final_step")


@dataclass
class LstmParams:
    w_f: np.ndarray  # d_h x (d_h + d_emb)
    w_i: np.ndarray
    w_c: np.ndarray
    w_o: np.ndarray
    b_f: np.ndarray  # d_h
    b_i: np.ndarray
    b_c: np.ndarray
    b_o: np.ndarray
    w_y: np.ndarray  # V x d_h
    b_y: np.ndarray  # V

    @property
    def d_h(self) -> int:
        return self.w_f.shape[0]

    @property
    def d_emb(self) -> int:
        return self.w_f.shape[1] - self.w_f.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.w_y.shape[0]

    def as_dict(self) -> dict:
        return {
            "w_f": self.w_f, "w_i": self.w_i, "w_c": self.w_c, "w_o": self.w_o,
            "b_f": self.b_f, "b_i": self.b_i, "b_c": self.b_c, "b_o": self.b_o,
            "w_y": self.w_y, "b_y": self.b_y,
        }


@dataclass
class LstmState:
    h: np.ndarray
    c: np.ndarray


@dataclass
class LstmTrainConfig:
    lr: float = 0.0001
    epochs: int = 500
    batch_size: int = 100
    seed: int = 0
    readout: str = "last_real"
    d_h: int = 200
    finetune_embeddings: bool = False

    def __post_init__(self):
        if self.lr <= 0:
            raise ValueError("lr must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.d_h < 1:
            raise ValueError("d_h must be >= 1")
        if self.readout not in READOUTS:
            raise ValueError(f"readout must be one of {READOUTS}")


def init_params(vocab_size: int, d_emb: int, d_h: int, seed) -> LstmParams:
    """Gate weights uniform in +-1/sqrt(d_h + d_emb); forget-gate bias +1
    (remember by default); output projection uniform in +-1/sqrt(d_h)."""
    gen = seed if isinstance(seed, np.random.Generator) else rng(seed)
    bound = 1.0 / np.sqrt(d_h + d_emb)
    shape = (d_h, d_h + d_emb)
    w_f, w_i, w_c, w_o = (
        gen.uniform(-bound, bound, size=shape).astype(DTYPE) for _ in range(4)
    )
    y_bound = 1.0 / np.sqrt(d_h)
    return LstmParams(
        w_f=w_f, w_i=w_i, w_c=w_c, w_o=w_o,
        b_f=np.ones(d_h, dtype=DTYPE),
        b_i=np.zeros(d_h, dtype=DTYPE),
        b_c=np.zeros(d_h, dtype=DTYPE),
        b_o=np.zeros(d_h, dtype=DTYPE),
        w_y=gen.uniform(-y_bound, y_bound, size=(vocab_size, d_h)).astype(DTYPE),
        b_y=np.zeros(vocab_size, dtype=DTYPE),
    )


def _sig(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def lstm_cell(params: LstmParams, x_t: np.ndarray, state: LstmState) -> LstmState:
    """One recurrence step for a single example."""
    x_t = np.asarray(x_t)
    if x_t.shape != (params.d_emb,):
        raise ValueError(f"input is {x_t.shape}, expected ({params.d_emb},)")
    if state.h.shape != (params.d_h,) or state.c.shape != (params.d_h,):
        raise ValueError(f"state shapes {state.h.shape}/{state.c.shape} do not match d_h={params.d_h}")
    z = np.concatenate([state.h, x_t])
    f = _sig(params.w_f @ z + params.b_f)
    i = _sig(params.w_i @ z + params.b_i)
    g = np.tanh(params.w_c @ z + params.b_c)
    o = _sig(params.w_o @ z + params.b_o)
    c = f * state.c + i * g
    h = o * np.tanh(c)
    return LstmState(h=h, c=c)


def _stack_gates(params: LstmParams):
    w_all = np.concatenate([params.w_f, params.w_i, params.w_c, params.w_o], axis=0)
    b_all = np.concatenate([params.b_f, params.b_i, params.b_c, params.b_o])
    return w_all, b_all


def _forward_batch(params: LstmParams, x: np.ndarray, readout_idx: np.ndarray):
    """Run the cell over a (B, n, d_emb) batch; returns (logits, cache).

    readout_idx holds, per example, the 0-based timestep whose h feeds
    the output layer.
    """
    bsz, n, _ = x.shape
    d_h = params.d_h
    w_all, b_all = _stack_gates(params)
    h = np.zeros((bsz, d_h), dtype=x.dtype)
    c = np.zeros((bsz, d_h), dtype=x.dtype)
    steps = []
    hs = np.zeros((bsz, n, d_h), dtype=x.dtype)
    for t in range(n):
        z = np.concatenate([h, x[:, t, :]], axis=1)
        a = z @ w_all.T + b_all
        f = _sig(a[:, :d_h])
        i = _sig(a[:, d_h:2 * d_h])
        g = np.tanh(a[:, 2 * d_h:3 * d_h])
        o = _sig(a[:, 3 * d_h:])
        c_prev = c
        c = f * c_prev + i * g
        tanh_c = np.tanh(c)
        h = o * tanh_c
        hs[:, t, :] = h
        steps.append((z, f, i, g, o, c_prev, tanh_c))
    h_out = hs[np.arange(bsz), readout_idx]
    logits = h_out @ params.w_y.T + params.b_y
    return logits, (steps, h_out, w_all)


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def _backward_batch(params: LstmParams, x: np.ndarray, readout_idx, probs,
                    targets, cache, want_dx: bool = False):
    """BPTT for mean cross-entropy over the batch; returns grads keyed
    like LstmParams.as_dict() (plus "x" when want_dx)."""
    steps, h_out, w_all = cache
    bsz, n, d_emb = x.shape
    d_h = params.d_h

    dlogits = probs.copy()
    dlogits[np.arange(bsz), targets] -= 1.0
    dlogits /= bsz
    dw_y = dlogits.T @ h_out
    db_y = dlogits.sum(axis=0)
    dh_out = dlogits @ params.w_y

    dw_all = np.zeros_like(w_all)
    db_all = np.zeros(4 * d_h, dtype=x.dtype)
    dh_next = np.zeros((bsz, d_h), dtype=x.dtype)
    dc_next = np.zeros((bsz, d_h), dtype=x.dtype)
    dx = np.zeros_like(x) if want_dx else None
    for t in range(n - 1, -1, -1):
        z, f, i, g, o, c_prev, tanh_c = steps[t]
        dh = dh_next.copy()
        inject = readout_idx == t
        if np.any(inject):
            dh[inject] += dh_out[inject]
        do = dh * tanh_c
        dc = dh * o * (1.0 - tanh_c * tanh_c) + dc_next
        df = dc * c_prev
        di = dc * g
        dg = dc * i
        da = np.concatenate([
            df * f * (1.0 - f),
            di * i * (1.0 - i),
            dg * (1.0 - g * g),
            do * o * (1.0 - o),
        ], axis=1)
        dw_all += da.T @ z
        db_all += da.sum(axis=0)
        dz = da @ w_all
        dh_next = dz[:, :d_h]
        if want_dx:
            dx[:, t, :] = dz[:, d_h:]
        dc_next = dc * f

    grads = {
        "w_f": dw_all[:d_h], "w_i": dw_all[d_h:2 * d_h],
        "w_c": dw_all[2 * d_h:3 * d_h], "w_o": dw_all[3 * d_h:],
        "b_f": db_all[:d_h], "b_i": db_all[d_h:2 * d_h],
        "b_c": db_all[2 * d_h:3 * d_h], "b_o": db_all[3 * d_h:],
        "w_y": dw_y, "b_y": db_y,
    }
    if want_dx:
        grads["x"] = dx
    return grads


def _readout_indices(real_lens, n: int, readout: str) -> np.ndarray:
    real_lens = np.asarray(real_lens, dtype=np.int64)
    if np.any(real_lens < 1) or np.any(real_lens > n):
        raise ValueError(f"real_len out of range 1..{n}")
    if readout == "last_real":
        return real_lens - 1
    if readout == "final_step":
        return np.full(real_lens.shape, n - 1, dtype=np.int64)
    raise ValueError(f"readout must be one of {READOUTS}")


def forward(params: LstmParams, embedded_context, real_len: int,
            readout: str = "last_real") -> np.ndarray:
    """Logits (V,) for one embedded context (list/array of d_emb vectors)."""
    x = np.asarray(embedded_context)
    if x.ndim != 2 or x.shape[1] != params.d_emb:
        raise ValueError(f"embedded context is {x.shape}, expected (n, {params.d_emb})")
    idx = _readout_indices([real_len], x.shape[0], readout)
    logits, _ = _forward_batch(params, x[None, :, :], idx)
    return logits[0]


def batch_logits(params: LstmParams, table: EmbeddingTable, contexts,
                 real_lens, readout: str = "last_real") -> np.ndarray:
    """Logits (B, V) straight from id contexts (B, n)."""
    contexts = np.asarray(contexts, dtype=np.int64)
    x = table.vectors[contexts]
    idx = _readout_indices(real_lens, contexts.shape[1], readout)
    logits, _ = _forward_batch(params, x, idx)
    return logits


def train(dataset: list, table: EmbeddingTable, config: LstmTrainConfig):
    """Mini-batch Adam on mean softmax cross-entropy of the target id.

    The embedding table is frozen unless config.finetune_embeddings is
    set (PAD row 0 stays zero either way).  Returns (params, history)
    with one (epoch, mean_loss, train_accuracy) row per epoch.
    """
    if not dataset:
        raise ValueError("empty dataset")
    contexts, targets, real_lens = pack_examples(dataset)
    n = contexts.shape[1]
    n_examples = contexts.shape[0]
    gen = rng(config.seed)
    params = init_params(table.vocab_size, table.dim, config.d_h, gen)
    opt = Adam(params.as_dict(), lr=config.lr)
    if config.finetune_embeddings:
        emb_opt = Adam({"emb": table.vectors}, lr=config.lr)

    target_idx = targets - 1  # logit j <-> word id j+1
    history = []
    for epoch in range(1, config.epochs + 1):
        order = gen.permutation(n_examples)
        total_loss = 0.0
        n_correct = 0
        for start in range(0, n_examples, config.batch_size):
            sel = order[start:start + config.batch_size]
            bx = table.vectors[contexts[sel]]
            bt = target_idx[sel]
            idx = _readout_indices(real_lens[sel], n, config.readout)
            logits, cache = _forward_batch(params, bx, idx)
            logp = _log_softmax(logits)
            total_loss += float(-logp[np.arange(len(sel)), bt].sum())
            n_correct += int(np.sum(np.argmax(logits, axis=1) == bt))
            probs = np.exp(logp)
            grads = _backward_batch(params, bx, idx, probs, bt, cache,
                                    want_dx=config.finetune_embeddings)
            dx = grads.pop("x", None)
            opt.step(grads)
            params = LstmParams(**opt.params)
            if config.finetune_embeddings:
                demb = np.zeros_like(table.vectors)
                np.add.at(demb, contexts[sel].ravel(), dx.reshape(-1, table.dim))
                demb[0] = 0.0  # PAD embedding is pinned to zero
                emb_opt.step({"emb": demb})
                table.vectors = emb_opt.params["emb"]
                table.vectors[0] = 0.0
        mean_loss = total_loss / n_examples
        ensure_finite("lstm loss", np.array([mean_loss]))
        history.append((epoch, mean_loss, n_correct / n_examples))
    return params, history


@dataclass(frozen=True)
class EvalResult:
    accuracy: float  # top-1
    top_k: dict  # k -> accuracy, for k in {1, 5}


def evaluate(params: LstmParams, dataset: list, table: EmbeddingTable,
             readout: str = "last_real", chunk: int = 512) -> EvalResult:
    """Top-1 and top-5 accuracy; argmax ties break toward the lowest id."""
    if not dataset:
        raise ValueError("empty dataset")
    contexts, targets, real_lens = pack_examples(dataset)
    target_idx = targets - 1
    top1 = 0
    top5 = 0
    for start in range(0, len(dataset), chunk):
        sel = slice(start, start + chunk)
        logits = batch_logits(params, table, contexts[sel], real_lens[sel], readout)
        bt = target_idx[sel]
        top1 += int(np.sum(np.argmax(logits, axis=1) == bt))
        k = min(5, logits.shape[1])
        # stable sort on -logits keeps the lowest id first among ties
        order = np.argsort(-logits, axis=1, kind="stable")[:, :k]
        top5 += int(np.sum(np.any(order == bt[:, None], axis=1)))
    n = len(dataset)
    return EvalResult(accuracy=top1 / n, top_k={1: top1 / n, 5: top5 / n})


def predict_next(params: LstmParams, vocab: Vocabulary, table: EmbeddingTable,
                 context_text: str, k: int, n: int,
                 readout: str = "last_real") -> list:
    """Top-k (token, probability) suggestions for a raw text context.

    Unknown tokens are dropped; the last min(n, len) known tokens form
    the context, post-padded to length n.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    tokens = clean_and_tokenize(context_text)
    ids = [vocab.token_to_id[t] for t in tokens if t in vocab.token_to_id]
    if not ids:
        raise ValueError("no usable context")
    ids = ids[-n:]
    real_len = len(ids)
    context = ids + [0] * (n - real_len)
    x = lookup(table, context)
    logits = forward(params, x, real_len, readout)
    shifted = logits - logits.max()
    e = np.exp(shifted)
    probs = e / e.sum()
    order = np.argsort(-probs, kind="stable")[:min(k, params.vocab_size)]
    return [(vocab.id_to_token[j + 1], float(probs[j])) for j in order]
