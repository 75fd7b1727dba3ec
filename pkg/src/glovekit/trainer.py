"""AdaGrad SGD over the weighted least-squares embedding cost.

Each nonzero co-occurrence record (i, z, x) contributes
weight(x) * (w_i . wt_z + b_i + bt_z - ln x)^2 to the cost. Training
streams shuffled records through per-record updates with per-parameter
adaptive step sizes lr / sqrt(G), G seeded at 1 and grown by the squared
gradient after each step.

Two jit kernels do the heavy lifting: a sequential one that is
bit-deterministic for a given (records, config), and a lock-free parallel
one whose element-wise races on the shared parameters are accepted as SGD
noise. The plain-Python single-record operations exist for gradient
verification and mirror the kernel arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np
from numba import config as numba_config
from numba import njit, prange, set_num_threads

from .cooccur import CooccurRecord, CooccurSet, permutation
from .errors import DataError, NumericError
from .weighting import WeightingSpec, kernel_params, weight

DEFAULT_LR = 0.05
STEP_CLIP = 100.0
_SEED_MASK = 0x7FFFFFFFFFFFFFFF


class NumericOverflowError(NumericError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    dim: int
    epochs: int
    weighting: WeightingSpec
    initial_lr: float = DEFAULT_LR
    seed: int = 0
    threads: int = 1
    log_smoothing: bool = False

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if not self.initial_lr > 0:
            raise ValueError(f"initial_lr must be positive, got {self.initial_lr}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


@dataclass
class ModelParams:
    """Word/context vectors, biases, and squared-gradient accumulators."""

    w: np.ndarray  # (V, d) target vectors
    wt: np.ndarray  # (V, d) context vectors
    b: np.ndarray  # (V,) target biases
    bt: np.ndarray  # (V,) context biases
    gw: np.ndarray
    gwt: np.ndarray
    gb: np.ndarray
    gbt: np.ndarray

    @property
    def num_words(self) -> int:
        return self.w.shape[0]

    @property
    def dim(self) -> int:
        return self.w.shape[1]


@dataclass
class LossHistory:
    """Per-epoch cost totals; epoch numbers are 1-based."""

    epochs: list[int] = field(default_factory=list)
    total_cost: list[float] = field(default_factory=list)
    mean_cost: list[float] = field(default_factory=list)
    skipped: list[int] = field(default_factory=list)

    def append(self, epoch: int, total: float, mean: float, skipped: int = 0) -> None:
        self.epochs.append(epoch)
        self.total_cost.append(total)
        self.mean_cost.append(mean)
        self.skipped.append(skipped)

    def __len__(self) -> int:
        return len(self.epochs)


class Gradients(NamedTuple):
    dw: np.ndarray
    dwt: np.ndarray
    db: float
    dbt: float


def init_params(num_words: int, config: TrainConfig) -> ModelParams:
    """Uniform [-0.5/d, 0.5/d] vectors, zero biases, unit accumulators."""
    if num_words < 1:
        raise ValueError("need at least one word")
    d = config.dim
    rng = np.random.default_rng(config.seed & _SEED_MASK)
    bound = 0.5 / d
    return ModelParams(
        w=rng.uniform(-bound, bound, size=(num_words, d)),
        wt=rng.uniform(-bound, bound, size=(num_words, d)),
        b=np.zeros(num_words),
        bt=np.zeros(num_words),
        gw=np.ones((num_words, d)),
        gwt=np.ones((num_words, d)),
        gb=np.ones(num_words),
        gbt=np.ones(num_words),
    )


def _log_target(value: float, log_smoothing: bool) -> float:
    return math.log(value + 1.0) if log_smoothing else math.log(value)


def record_cost_and_grads(
    params: ModelParams,
    rec: CooccurRecord,
    weighting: WeightingSpec,
    log_smoothing: bool = False,
) -> tuple[float, Gradients]:
    """Cost term and analytic gradients for one record at the current params."""
    if not rec.value > 0:
        raise ValueError(f"record value must be positive, got {rec.value}")
    i, z = rec.target, rec.context
    fx = weight(weighting, rec.value)
    diff = (
        float(np.dot(params.w[i], params.wt[z]))
        + params.b[i]
        + params.bt[z]
        - _log_target(rec.value, log_smoothing)
    )
    cost = fx * diff * diff
    if not math.isfinite(cost):
        raise NumericOverflowError(f"non-finite cost for record {rec}")
    fd = 2.0 * fx * diff
    return cost, Gradients(dw=fd * params.wt[z], dwt=fd * params.w[i], db=fd, dbt=fd)


def adagrad_step(
    params: ModelParams, grads: Gradients, target: int, context: int, lr: float
) -> None:
    """Apply one adaptive step in place: theta -= lr*g/sqrt(G), then G += g^2."""
    if not lr > 0:
        raise ValueError(f"lr must be positive, got {lr}")
    i, z = target, context
    sw = lr * grads.dw / np.sqrt(params.gw[i])
    swt = lr * grads.dwt / np.sqrt(params.gwt[z])
    sb = lr * grads.db / math.sqrt(params.gb[i])
    sbt = lr * grads.dbt / math.sqrt(params.gbt[z])
    if not (np.all(np.isfinite(sw)) and np.all(np.isfinite(swt)) and math.isfinite(sb + sbt)):
        raise NumericOverflowError(f"non-finite update for pair ({i}, {z})")
    params.w[i] -= sw
    params.wt[z] -= swt
    params.b[i] -= sb
    params.bt[z] -= sbt
    params.gw[i] += grads.dw * grads.dw
    params.gwt[z] += grads.dwt * grads.dwt
    params.gb[i] += grads.db * grads.db
    params.gbt[z] += grads.dbt * grads.dbt


@njit(cache=True)
def _weight_value(variant, p1, p2, x):
    if variant == 0:
        return 1.0 if x >= p1 else (x / p1) ** p2
    elif variant == 1:
        return -np.expm1(-p1 * x)
    return 1.0 if x > 0.0 else 0.0


@njit(cache=True)
def _epoch_seq(order, tids, cids, vals, w, wt, b, bt, gw, gwt, gb, gbt,
               lr, variant, p1, p2, smooth, clip):
    total = 0.0
    skipped = 0
    d = w.shape[1]
    for idx in range(order.shape[0]):
        k = order[idx]
        i = tids[k]
        z = cids[k]
        x = vals[k]
        fx = _weight_value(variant, p1, p2, x)
        dot = b[i] + bt[z]
        for j in range(d):
            dot += w[i, j] * wt[z, j]
        tgt = np.log(x + 1.0) if smooth else np.log(x)
        diff = dot - tgt
        if not np.isfinite(diff):
            return total, skipped, k
        fd = 2.0 * fx * diff
        sb = lr * fd / np.sqrt(gb[i])
        sbt = lr * fd / np.sqrt(gbt[z])
        big = abs(sb) > clip or abs(sbt) > clip
        for j in range(d):
            sw = lr * (fd * wt[z, j]) / np.sqrt(gw[i, j])
            swt = lr * (fd * w[i, j]) / np.sqrt(gwt[z, j])
            if abs(sw) > clip or abs(swt) > clip:
                big = True
        if big:
            skipped += 1
            continue
        total += fx * diff * diff
        for j in range(d):
            gradw = fd * wt[z, j]
            gradwt = fd * w[i, j]
            w[i, j] -= lr * gradw / np.sqrt(gw[i, j])
            wt[z, j] -= lr * gradwt / np.sqrt(gwt[z, j])
            gw[i, j] += gradw * gradw
            gwt[z, j] += gradwt * gradwt
        b[i] -= sb
        bt[z] -= sbt
        gb[i] += fd * fd
        gbt[z] += fd * fd
    return total, skipped, -1


@njit(cache=True, parallel=True)
def _epoch_par(order, tids, cids, vals, w, wt, b, bt, gw, gwt, gb, gbt,
               lr, variant, p1, p2, smooth, clip):
    # hogwild-style: element-wise races on the shared parameter arrays are
    # tolerated; only the loss reductions are synchronized
    total = 0.0
    skipped = 0
    overflow = 0
    d = w.shape[1]
    for idx in prange(order.shape[0]):
        k = order[idx]
        i = tids[k]
        z = cids[k]
        x = vals[k]
        fx = _weight_value(variant, p1, p2, x)
        dot = b[i] + bt[z]
        for j in range(d):
            dot += w[i, j] * wt[z, j]
        tgt = np.log(x + 1.0) if smooth else np.log(x)
        diff = dot - tgt
        if not np.isfinite(diff):
            overflow += 1
            continue
        fd = 2.0 * fx * diff
        sb = lr * fd / np.sqrt(gb[i])
        sbt = lr * fd / np.sqrt(gbt[z])
        big = abs(sb) > clip or abs(sbt) > clip
        for j in range(d):
            sw = lr * (fd * wt[z, j]) / np.sqrt(gw[i, j])
            swt = lr * (fd * w[i, j]) / np.sqrt(gwt[z, j])
            if abs(sw) > clip or abs(swt) > clip:
                big = True
        if big:
            skipped += 1
            continue
        total += fx * diff * diff
        for j in range(d):
            gradw = fd * wt[z, j]
            gradwt = fd * w[i, j]
            w[i, j] -= lr * gradw / np.sqrt(gw[i, j])
            wt[z, j] -= lr * gradwt / np.sqrt(gwt[z, j])
            gw[i, j] += gradw * gradw
            gwt[z, j] += gradwt * gradwt
        b[i] -= sb
        bt[z] -= sbt
        gb[i] += fd * fd
        gbt[z] += fd * fd
    return total, skipped, overflow


def train(
    records: CooccurSet,
    config: TrainConfig,
    epoch_callback: Callable[[int, ModelParams], None] | None = None,
) -> tuple[ModelParams, LossHistory]:
    """Run config.epochs shuffled passes over the records.

    With threads == 1 the result is bit-deterministic per (records,
    config). Records whose clipped update would exceed STEP_CLIP are
    skipped for that pass and counted in the history. `epoch_callback`,
    if given, observes (epoch, params) after each pass; it must not
    mutate params.
    """
    n = len(records)
    if n == 0:
        raise DataError("cannot train on an empty co-occurrence set")
    params = init_params(records.num_words, config)
    variant, p1, p2 = kernel_params(config.weighting)
    args = (
        records.targets, records.contexts, records.values,
        params.w, params.wt, params.b, params.bt,
        params.gw, params.gwt, params.gb, params.gbt,
        config.initial_lr, variant, p1, p2, config.log_smoothing, STEP_CLIP,
    )
    parallel = config.threads > 1
    if parallel:
        set_num_threads(min(config.threads, numba_config.NUMBA_NUM_THREADS))
    history = LossHistory()
    for epoch in range(1, config.epochs + 1):
        order = permutation(n, config.seed ^ epoch)
        if parallel:
            total, skipped, overflow = _epoch_par(order, *args)
            if overflow:
                raise NumericOverflowError(
                    f"{overflow} record(s) hit non-finite cost in epoch {epoch}"
                )
        else:
            total, skipped, err = _epoch_seq(order, *args)
            if err >= 0:
                raise NumericOverflowError(
                    f"non-finite cost in epoch {epoch} at record "
                    f"({records.targets[err]}, {records.contexts[err]})"
                )
        history.append(epoch, float(total), float(total) / n, int(skipped))
        if epoch_callback is not None:
            epoch_callback(epoch, params)
    return params, history


def finite_difference_check(
    params: ModelParams,
    rec: CooccurRecord,
    weighting: WeightingSpec,
    eps: float,
    log_smoothing: bool = False,
) -> float:
    """Worst relative error between analytic and central-difference gradients.

    Coordinates where both gradients are below 1e-9 in magnitude count as
    zero error.
    """
    if not 0 < eps < 1e-2:
        raise ValueError(f"eps must be in (0, 1e-2), got {eps}")
    _, grads = record_cost_and_grads(params, rec, weighting, log_smoothing)
    i, z = rec.target, rec.context
    fx = weight(weighting, rec.value)
    tgt = _log_target(rec.value, log_smoothing)
    wi = params.w[i].astype(np.float64).copy()
    wtz = params.wt[z].astype(np.float64).copy()
    bi, btz = float(params.b[i]), float(params.bt[z])

    def cost(wi_, wtz_, bi_, btz_):
        diff = float(np.dot(wi_, wtz_)) + bi_ + btz_ - tgt
        return fx * diff * diff

    analytic = np.concatenate([grads.dw, grads.dwt, [grads.db, grads.dbt]])
    numeric = np.empty_like(analytic)
    d = len(wi)
    for j in range(d):
        hi, lo = wi.copy(), wi.copy()
        hi[j] += eps
        lo[j] -= eps
        numeric[j] = (cost(hi, wtz, bi, btz) - cost(lo, wtz, bi, btz)) / (2 * eps)
    for j in range(d):
        hi, lo = wtz.copy(), wtz.copy()
        hi[j] += eps
        lo[j] -= eps
        numeric[d + j] = (cost(wi, hi, bi, btz) - cost(wi, lo, bi, btz)) / (2 * eps)
    numeric[2 * d] = (cost(wi, wtz, bi + eps, btz) - cost(wi, wtz, bi - eps, btz)) / (2 * eps)
    numeric[2 * d + 1] = (cost(wi, wtz, bi, btz + eps) - cost(wi, wtz, bi, btz - eps)) / (2 * eps)

    worst = 0.0
    for a, nm in zip(analytic, numeric):
        denom = max(abs(a), abs(nm))
        if denom < 1e-9:
            continue
        worst = max(worst, abs(a - nm) / denom)
    return worst


def write_loss_csv(history: LossHistory, path: str | Path) -> None:
    """CSV with header epoch,total_cost,mean_cost, 12 significant digits."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("epoch,total_cost,mean_cost\n")
        for e, t, m in zip(history.epochs, history.total_cost, history.mean_cost):
            fh.write(f"{e},{t:.12g},{m:.12g}\n")


def read_loss_csv(path: str | Path) -> LossHistory:
    history = LossHistory()
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "epoch,total_cost,mean_cost":
            raise DataError(f"{path}:1: unexpected loss CSV header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            parts = line.strip().split(",")
            if len(parts) != 3:
                raise DataError(f"{path}:{lineno}: expected 3 columns")
            history.append(int(parts[0]), float(parts[1]), float(parts[2]))
    return history
