"""Desk-scale BEL vs direct regression on synthetic scalar tasks.

The network is a numpy MLP: ReLU hidden layers, then for BEL a linear
bottleneck of width ``theta`` and a linear layer of ``P * M`` logits; the
direct baseline maps the last hidden layer straight to ``P`` outputs.
Training is plain mini-batch gradient descent.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from belreg.codebook import CodeKind, CodeMatrix, make_code
from belreg.decoder import decode_gen, decode_gen_ex, decode_johnson, decode_unary, threshold
from belreg.errors import ShapeError, UnknownTask, UnsupportedDecoder
from belreg.losses import bce_loss, ce_loss, regression_loss
from belreg.quantizer import QuantizationSpec

TASKS = ("identity", "sinusoid", "piecewise", "step")
BEL_LOSSES = ("bce", "ce", "l1", "l2")


@dataclass
class TrainConfig:
    task: str = "sinusoid"
    noise: float = 0.0
    input_dim: int = 2
    a: float = 0.0
    b: float = 1.0
    levels: int = 64
    encoding: str = "unary"
    loss: str = "bce"
    decoder: str = "gen-ex"
    theta: int = 10
    hidden: tuple[int, ...] = (64, 64)
    lr: float = 0.1
    direct_lr: float = 0.05
    direct_loss: str = "l2"
    epochs: int = 150
    batch_size: int = 32
    n_train: int = 2000
    n_test: int = 1000
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    outputs: int = 1

    def __post_init__(self):
        self.hidden = tuple(int(h) for h in self.hidden)
        self.seeds = tuple(int(s) for s in self.seeds)
        self.encoding = CodeKind(self.encoding).value
        if self.theta < 1:
            raise ValueError(f"theta must be >= 1, got {self.theta}")
        if self.levels < 2:
            raise ValueError(f"levels must be >= 2, got {self.levels}")
        if not (self.lr > 0 and self.direct_lr > 0):
            raise ValueError("learning rates must be positive")
        if self.loss not in BEL_LOSSES:
            raise ValueError(f"unknown loss {self.loss!r}")
        if self.direct_loss not in ("l1", "l2"):
            raise ValueError(f"direct loss must be l1 or l2, got {self.direct_loss!r}")
        if self.task not in TASKS:
            raise UnknownTask(f"unknown task {self.task!r}; choose from {TASKS}")

    @property
    def spec(self) -> QuantizationSpec:
        return QuantizationSpec(self.a, self.b, self.levels)


# ---------------------------------------------------------------- data


def _shape_fn(task: str, X: np.ndarray) -> np.ndarray:
    """Target shape in [0, 1] before scaling to the label range."""
    x0 = X[:, 0]
    x1 = X[:, 1 % X.shape[1]]
    if task == "identity":
        return x0
    if task == "sinusoid":
        return 0.5 + 0.3 * np.sin(2 * np.pi * x0) + 0.2 * np.sin(np.pi * (x0 + 2 * x1))
    if task == "piecewise":
        tent = 1.0 - np.abs(2.0 * x0 - 1.0)
        return 0.7 * tent + 0.3 * x1
    if task == "step":
        return 0.8 * np.floor(5 * x0) / 4 + 0.2 * x1
    raise UnknownTask(f"unknown task {task!r}; choose from {TASKS}")


def make_dataset(task: str, n_train: int, n_test: int, seed: int, *, input_dim: int = 2,
                 noise: float = 0.0, a: float = 0.0, b: float = 1.0):
    """``(X_train, y_train, X_test, y_test)``; inputs uniform on the unit box."""
    if task not in TASKS:
        raise UnknownTask(f"unknown task {task!r}; choose from {TASKS}")
    if n_train < 1 or n_test < 1:
        raise ValueError("n_train and n_test must be >= 1")
    rng = np.random.default_rng(seed)
    X = rng.random((n_train + n_test, input_dim))
    y = a + (b - a) * _shape_fn(task, X)
    if noise > 0:
        y = y + rng.normal(0.0, noise * (b - a), size=y.shape)
    y = np.clip(y, a, b)
    return X[:n_train], y[:n_train], X[n_train:], y[n_train:]


def level_coordinates(y: np.ndarray, spec: QuantizationSpec) -> np.ndarray:
    return (np.asarray(y) - spec.a) * (spec.levels - 1) / (spec.b - spec.a) + 1


def quantize_array(y: np.ndarray, spec: QuantizationSpec) -> np.ndarray:
    q = np.floor(level_coordinates(y, spec) + 0.5).astype(np.int64)
    return np.clip(q, 1, spec.levels)


def dequantize_array(x: np.ndarray, spec: QuantizationSpec) -> np.ndarray:
    t = (np.asarray(x, dtype=float) - 1) / (spec.levels - 1)
    return spec.a * (1 - t) + spec.b * t


# ---------------------------------------------------------------- network


@dataclass
class Net:
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    relu: list[bool]

    @property
    def params(self) -> list[np.ndarray]:
        return [p for pair in zip(self.weights, self.biases) for p in pair]

    def copy(self) -> "Net":
        return Net([w.copy() for w in self.weights], [b.copy() for b in self.biases], list(self.relu))


def build_net(widths, relu, rng: np.random.Generator | None, zero: bool = False) -> Net:
    weights, biases = [], []
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        if zero:
            w = np.zeros((fan_in, fan_out))
        else:
            lim = math.sqrt(6.0 / (fan_in + fan_out))
            w = rng.uniform(-lim, lim, size=(fan_in, fan_out))
        weights.append(w)
        biases.append(np.zeros(fan_out))
    return Net(weights, biases, list(relu))


def bel_net(input_dim: int, hidden, theta: int, bits: int, outputs: int = 1, rng=None, zero: bool = False) -> Net:
    widths = [input_dim, *hidden, theta, outputs * bits]
    relu = [True] * len(hidden) + [False, False]
    return build_net(widths, relu, rng, zero)


def direct_net(input_dim: int, hidden, outputs: int = 1, rng=None, zero: bool = False) -> Net:
    widths = [input_dim, *hidden, outputs]
    relu = [True] * len(hidden) + [False]
    return build_net(widths, relu, rng, zero)


def forward(net: Net, X: np.ndarray):
    acts = [X]
    pre = []
    h = X
    for W, b, act in zip(net.weights, net.biases, net.relu):
        z = h @ W + b
        pre.append(z)
        h = np.maximum(z, 0.0) if act else z
        acts.append(h)
    return h, (acts, pre)


def backward(net: Net, cache, d_out: np.ndarray) -> list[np.ndarray]:
    acts, pre = cache
    grads_w, grads_b = [], []
    d = d_out
    for i in reversed(range(len(net.weights))):
        if net.relu[i]:
            d = d * (pre[i] > 0)
        grads_w.append(acts[i].T @ d)
        grads_b.append(d.sum(axis=0))
        if i:
            d = d @ net.weights[i].T
    grads_w.reverse()
    grads_b.reverse()
    return [g for pair in zip(grads_w, grads_b) for g in pair]


def _output_loss(out: np.ndarray, y: np.ndarray, loss: str, C: CodeMatrix | None, spec: QuantizationSpec | None):
    """Loss value and d loss / d out for a batch of network outputs."""
    n = out.shape[0]
    y = np.asarray(y, dtype=float).reshape(n, -1)
    P = y.shape[1]
    if C is None:
        # direct regression on the label scaled to [0, 1]
        if out.shape[1] != P:
            raise ShapeError(f"direct head has {out.shape[1]} outputs for {P} targets")
        t = (y - spec.a) / (spec.b - spec.a) if spec is not None else y
        diff = out - t
        if loss == "l1":
            return float(np.abs(diff).mean()), np.sign(diff) / diff.size
        return float(np.mean(diff**2)), 2.0 * diff / diff.size
    if out.shape[1] != P * C.bits:
        raise ShapeError(f"BEL head has {out.shape[1]} logits, expected {P * C.bits}")
    Z = out.reshape(n * P, C.bits)
    flat = y.reshape(n * P)
    if loss == "bce":
        res = bce_loss(Z, C.rows[quantize_array(flat, spec) - 1])
    elif loss == "ce":
        res = ce_loss(Z, C, quantize_array(flat, spec))
    elif loss in ("l1", "l2"):
        res = regression_loss(Z, C, level_coordinates(flat, spec), loss)
    else:
        raise ValueError(f"unknown loss {loss!r}")
    return res.value, res.grad.reshape(n, P * C.bits)


def forward_backward(net: Net, X: np.ndarray, y: np.ndarray, loss: str,
                     C: CodeMatrix | None = None, spec: QuantizationSpec | None = None):
    """Mean batch loss and its gradient for every parameter in ``net.params`` order.

    ``C is None`` selects the direct-regression head.
    """
    out, cache = forward(net, X)
    value, d_out = _output_loss(out, y, loss, C, spec)
    return value, backward(net, cache, d_out)


def loss_value(net: Net, X, y, loss, C=None, spec=None) -> float:
    out, _ = forward(net, X)
    return _output_loss(out, y, loss, C, spec)[0]


# ---------------------------------------------------------------- prediction


def decode_levels(Z: np.ndarray, C: CodeMatrix, decoder: str) -> np.ndarray:
    if decoder == "gen-ex":
        return decode_gen_ex(Z, C)
    if decoder == "gen":
        return decode_gen(Z, C).astype(float)
    if decoder == "custom":
        bits = threshold(Z)
        if C.kind is CodeKind.UNARY:
            return np.clip(decode_unary(bits), 1, C.levels).astype(float)
        if C.kind is CodeKind.JOHNSON:
            return np.clip(decode_johnson(bits), 1, C.levels).astype(float)
        raise UnsupportedDecoder(f"custom decoder exists only for unary and johnson, not {C.kind.value}")
    raise UnsupportedDecoder(f"unknown decoder {decoder!r}")


def predict_bel(net: Net, X, C: CodeMatrix, spec: QuantizationSpec, decoder: str, outputs: int = 1) -> np.ndarray:
    out, _ = forward(net, X)
    Z = out.reshape(-1, C.bits)
    levels = decode_levels(Z, C, decoder)
    return dequantize_array(levels, spec).reshape(out.shape[0], outputs)


def predict_direct(net: Net, X, spec: QuantizationSpec) -> np.ndarray:
    out, _ = forward(net, X)
    return spec.a + (spec.b - spec.a) * np.clip(out, 0.0, 1.0)


def mae(pred: np.ndarray, y: np.ndarray) -> float:
    return float(np.mean(np.abs(pred.reshape(y.shape[0], -1) - y.reshape(y.shape[0], -1))))


# ---------------------------------------------------------------- training


def sgd(net: Net, X, y, *, loss, lr, epochs, batch_size, rng, C=None, spec=None):
    """Run mini-batch gradient descent in place; return (per-epoch mean loss, ok)."""
    trace = []
    n = X.shape[0]
    params = net.params
    # divergence is reported through ``ok``, so overflow warnings are noise
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(epochs):
            order = rng.permutation(n)
            total = 0.0
            for start in range(0, n, batch_size):
                idx = order[start : start + batch_size]
                value, grads = forward_backward(net, X[idx], y[idx], loss, C, spec)
                if not np.isfinite(value):
                    return trace, False
                for p, g in zip(params, grads):
                    p -= lr * g
                total += value * idx.size
            trace.append(total / n)
            if not all(np.all(np.isfinite(p)) for p in params):
                return trace, False
    return trace, True


def _run_seed(cfg: TrainConfig, C: CodeMatrix, seed: int) -> dict:
    spec = cfg.spec
    X_tr, y_tr, X_te, y_te = make_dataset(
        cfg.task, cfg.n_train, cfg.n_test, seed,
        input_dim=cfg.input_dim, noise=cfg.noise, a=cfg.a, b=cfg.b,
    )
    if cfg.outputs > 1:
        y_tr = np.repeat(y_tr[:, None], cfg.outputs, axis=1)
        y_te = np.repeat(y_te[:, None], cfg.outputs, axis=1)
    seq = np.random.SeedSequence(seed)
    init_bel, init_dir, order_bel, order_dir = (np.random.default_rng(s) for s in seq.spawn(4))

    bel = bel_net(cfg.input_dim, cfg.hidden, cfg.theta, C.bits, cfg.outputs, rng=init_bel)
    bel_trace, bel_ok = sgd(bel, X_tr, y_tr, loss=cfg.loss, lr=cfg.lr, epochs=cfg.epochs,
                            batch_size=cfg.batch_size, rng=order_bel, C=C, spec=spec)
    direct = direct_net(cfg.input_dim, cfg.hidden, cfg.outputs, rng=init_dir)
    dir_trace, dir_ok = sgd(direct, X_tr, y_tr, loss=cfg.direct_loss, lr=cfg.direct_lr, epochs=cfg.epochs,
                            batch_size=cfg.batch_size, rng=order_dir, spec=spec)

    def summary(ok, trace, pred_tr, pred_te):
        if not ok:
            return {"status": "diverged", "train_mae": None, "test_mae": None, "loss_trace": trace}
        return {"status": "ok", "train_mae": mae(pred_tr, y_tr), "test_mae": mae(pred_te, y_te), "loss_trace": trace}

    with np.errstate(all="ignore"):
        bel_res = summary(bel_ok, bel_trace,
                          predict_bel(bel, X_tr, C, spec, cfg.decoder, cfg.outputs),
                          predict_bel(bel, X_te, C, spec, cfg.decoder, cfg.outputs))
        dir_res = summary(dir_ok, dir_trace, predict_direct(direct, X_tr, spec), predict_direct(direct, X_te, spec))
    return {"seed": seed, "bel": bel_res, "direct": dir_res}


@dataclass
class TrainReport:
    config: dict
    runs: list[dict] = field(default_factory=list)

    def _mean(self, head: str, key: str) -> float | None:
        vals = [r[head][key] for r in self.runs if r[head]["status"] == "ok"]
        return float(np.mean(vals)) if vals else None

    @property
    def bel_test_mae(self) -> float | None:
        return self._mean("bel", "test_mae")

    @property
    def direct_test_mae(self) -> float | None:
        return self._mean("direct", "test_mae")

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "runs": self.runs,
            "summary": {
                "bel_test_mae": self.bel_test_mae,
                "direct_test_mae": self.direct_test_mae,
                "bel_train_mae": self._mean("bel", "train_mae"),
                "direct_train_mae": self._mean("direct", "train_mae"),
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def trace_csv(self, seed_index: int = 0, head: str = "bel") -> str:
        lines = ["epoch,loss"]
        for i, v in enumerate(self.runs[seed_index][head]["loss_trace"], start=1):
            lines.append(f"{i},{v!r}")
        return "\n".join(lines) + "\n"


def train(cfg: TrainConfig) -> TrainReport:
    C = make_code(cfg.encoding, cfg.levels)
    if cfg.decoder == "custom" and C.kind not in (CodeKind.UNARY, CodeKind.JOHNSON):
        raise UnsupportedDecoder(f"custom decoder exists only for unary and johnson, not {C.kind.value}")
    config = asdict(cfg)
    config["hidden"] = list(cfg.hidden)
    config["seeds"] = list(cfg.seeds)
    report = TrainReport(config=config)
    for seed in cfg.seeds:
        report.runs.append(_run_seed(cfg, C, seed))
    return report
