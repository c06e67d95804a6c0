"""Explicit block decompositions on a ring.

On the ring Z/PZ a reversible CA is a bijection of Σ^P.  Splitting the input
as (a on X, b on the rest) and the output as (c on Y, d on the rest), a
semilocalization is a pair of bijections

    g: a -> (c, e)        h: d -> (b, e')

and a bijection alpha of the mediating classes with f(a.b) = (c, h⁻¹(b, alpha(e))).
The classes are those of the relation "a and a' give the same d for every b"
and its dual on d.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .blocknbh import canonical_labels, is_semilocalizable
from .cells import CellSet
from .core import ReversibleCA, all_words, apply_rule_on_ring, index_word, word_index
from .errors import FormatError, PreconditionFailed, TooLarge

DEFAULT_MAX_CONFIGS = 1 << 24


@dataclass(frozen=True)
class SemilocalWitness:
    q: int
    ring_period: int
    x: CellSet
    y: CellSet
    e_size: int
    g_table: tuple[tuple[int, int], ...]   # a-index -> (y-word index, class)
    h_table: tuple[tuple[int, int], ...]   # d-index -> (b-word index, class)
    alpha: tuple[int, ...]

    @property
    def x_rest(self) -> CellSet:
        return CellSet(range(self.ring_period)).without(self.x)

    @property
    def y_rest(self) -> CellSet:
        return CellSet(range(self.ring_period)).without(self.y)


def required_span(f: ReversibleCA, x: CellSet, y: CellSet) -> int:
    """Length of the cell interval the check bands occupy on the line."""
    x = CellSet(x)
    cover = x | CellSet(y) | (x - f.N + f.N) | (x - f.N_dual + f.N_dual)
    return len(cover.hull())


def default_ring_period(f: ReversibleCA, x: CellSet, y: CellSet) -> int:
    return required_span(f, x, y) + 2


def _split(configs_idx: np.ndarray, q: int, P: int, cells: CellSet) -> np.ndarray:
    out = np.zeros_like(configs_idx)
    for c in cells:
        out = out * q + (configs_idx // q ** (P - 1 - c)) % q
    return out


def _join(q: int, P: int, parts) -> np.ndarray:
    """Config index from (cells, word-index array) pairs covering the ring."""
    total = None
    for cells, idx in parts:
        k = len(cells)
        for j, c in enumerate(cells):
            d = (idx // q ** (k - 1 - j)) % q
            term = d * q ** (P - 1 - c)
            total = term if total is None else total + term
    return total


def _classes(matrix: np.ndarray, what: str) -> np.ndarray:
    labels = canonical_labels(matrix)
    if not np.all(labels == labels[0]):
        raise PreconditionFailed(f"{what}: indistinguishability depends on the context")
    # number classes by order of least representative
    _, cls = np.unique(labels[0], return_inverse=True)
    return cls.reshape(-1)


def semilocalize(f: ReversibleCA, x: CellSet, y: CellSet, ring_period: int | None = None,
                 max_configs: int = DEFAULT_MAX_CONFIGS) -> SemilocalWitness:
    x, y = CellSet(x), CellSet(y)
    q = f.q
    P = ring_period or default_ring_period(f, x, y)
    if not x or not y:
        raise PreconditionFailed("x and y must be nonempty")
    if x.min < 0 or x.max >= P or y.min < 0 or y.max >= P:
        raise PreconditionFailed(f"x and y must lie in ⟦0;{P - 1}⟧")
    if not is_semilocalizable(f, x, y):
        raise PreconditionFailed(f"P(X, Y, f) fails for X={x}, Y={y}")
    span = required_span(f, x, y)
    if span > P:
        raise PreconditionFailed(f"ring period {P} too small, need at least {span}")
    total = q**P
    if total > max_configs:
        raise TooLarge(f"ring of period {P}", total, max_configs)

    xr = CellSet(range(P)).without(x)
    yr = CellSet(range(P)).without(y)
    qa, qb, qc, qd = q ** len(x), q ** len(xr), q ** len(y), q ** len(yr)

    # rows: context, columns: block word
    a = np.arange(qa, dtype=np.int64)[None, :]
    b = np.arange(qb, dtype=np.int64)[:, None]
    cfg = _join(q, P, [(x, a), (xr, b)])
    img = _image_index(f.forward, cfg, q, P)
    img_c, img_d = _split(img, q, P, y), _split(img, q, P, yr)
    if not np.all(img_c == img_c[0]):
        raise PreconditionFailed("f is not semicausal for this split")
    cls_a = _classes(img_d, "f")

    c = np.arange(qc, dtype=np.int64)[:, None]
    d = np.arange(qd, dtype=np.int64)[None, :]
    pre = _image_index(f.inverse, _join(q, P, [(y, c), (yr, d)]), q, P)
    pre_a, pre_b = _split(pre, q, P, x), _split(pre, q, P, xr)
    if not np.all(pre_b == pre_b[0]):
        raise PreconditionFailed("the dual of f is not semicausal for this split")
    cls_d = _classes(pre_a, "dual")

    e = int(cls_a.max()) + 1
    if int(cls_d.max()) + 1 != e:
        raise PreconditionFailed("class counts differ")
    alpha = np.full(e, -1, dtype=np.int64)
    mapped = cls_d[img_d]                       # (qb, qa)
    for cls in range(e):
        vals = np.unique(mapped[:, cls_a == cls])
        if vals.size != 1:
            raise PreconditionFailed("alpha is not well defined")
        alpha[cls] = vals[0]
    if sorted(alpha.tolist()) != list(range(e)):
        raise PreconditionFailed("alpha is not a bijection")

    g = tuple((int(img_c[0, i]), int(cls_a[i])) for i in range(qa))
    h = tuple((int(pre_b[0, j]), int(cls_d[j])) for j in range(qd))
    w = SemilocalWitness(q, P, x, y, e, g, h, tuple(int(v) for v in alpha))
    verify_witness(f, w)
    return w


def _image_index(rule, cfg_idx: np.ndarray, q: int, P: int) -> np.ndarray:
    flat = cfg_idx.reshape(-1)
    words = np.stack([(flat // q ** (P - 1 - p)) % q for p in range(P)], axis=1)
    out = apply_rule_on_ring(rule, words)
    return (out @ (q ** np.arange(P - 1, -1, -1, dtype=np.int64))).reshape(cfg_idx.shape)


def verify_witness(f: ReversibleCA, w: SemilocalWitness,
                   max_configs: int = DEFAULT_MAX_CONFIGS) -> int:
    """Reconstruct f from the witness on every ring configuration.

    Returns the number of configurations checked; raises PreconditionFailed
    on the first structural problem or mismatch.
    """
    q, P = w.q, w.ring_period
    if f.q != q:
        raise PreconditionFailed("witness alphabet differs from the automaton's")
    total = q**P
    if total > max_configs:
        raise TooLarge(f"ring of period {P}", total, max_configs)
    x, y, xr, yr = w.x, w.y, w.x_rest, w.y_rest
    qa, qb, qd = q ** len(x), q ** len(xr), q ** len(yr)
    if len(w.g_table) != qa or len(w.h_table) != qd:
        raise PreconditionFailed("witness tables have the wrong size")
    if len(set(w.g_table)) != qa:
        raise PreconditionFailed("g is not injective")
    if len(set(w.h_table)) != qd:
        raise PreconditionFailed("h is not injective")
    if sorted(w.alpha) != list(range(w.e_size)):
        raise PreconditionFailed("alpha is not a permutation")
    if any(not 0 <= cls < w.e_size for _, cls in w.g_table + w.h_table):
        raise PreconditionFailed("class index out of range")

    h_inv = np.full((qb, w.e_size), -1, dtype=np.int64)
    for dj, (bj, cls) in enumerate(w.h_table):
        h_inv[bj, cls] = dj
    g = np.asarray(w.g_table, dtype=np.int64)
    alpha = np.asarray(w.alpha, dtype=np.int64)

    a = np.arange(qa, dtype=np.int64)[None, :]
    b = np.arange(qb, dtype=np.int64)[:, None]
    img = _image_index(f.forward, _join(q, P, [(x, a), (xr, b)]), q, P)
    c_pred = np.broadcast_to(g[:, 0][None, :], img.shape)
    d_pred = h_inv[b, alpha[g[:, 1]][None, :]]
    if np.any(d_pred < 0):
        raise PreconditionFailed("h⁻¹ undefined on a used (b, class) pair")
    pred = _join(q, P, [(y, c_pred), (yr, d_pred)])
    if not np.array_equal(pred, img):
        bad = int(np.argwhere(pred != img)[0][1])
        raise PreconditionFailed(f"reconstruction mismatch for x-word {index_word(bad, q, len(x))}")
    return total


# -- text format -----------------------------------------------------------

def _word(idx: int, q: int, k: int) -> str:
    return ",".join(map(str, index_word(idx, q, k))) if k else "-"


def _parse_word(s: str, q: int) -> int:
    if s == "-":
        return 0
    return word_index([int(t) for t in s.split(",")], q)


def format_witness(w: SemilocalWitness) -> str:
    q = w.q
    lines = ["witness-format 1", f"alphabet {q}", f"ring {w.ring_period}",
             "x " + " ".join(map(str, w.x)), "y " + " ".join(map(str, w.y)),
             f"e {w.e_size}"]
    nx, ny, nxr, nyr = len(w.x), len(w.y), len(w.x_rest), len(w.y_rest)
    for i, (ci, cls) in enumerate(w.g_table):
        lines.append(f"g {_word(i, q, nx)} -> {_word(ci, q, ny)} {cls}")
    for j, (bj, cls) in enumerate(w.h_table):
        lines.append(f"h {_word(j, q, nyr)} -> {_word(bj, q, nxr)} {cls}")
    lines.append("alpha " + " ".join(map(str, w.alpha)))
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> SemilocalWitness:
    head: dict[str, list[str]] = {}
    g: dict[int, tuple[int, int]] = {}
    h: dict[int, tuple[int, int]] = {}
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != "witness-format 1":
        raise FormatError("missing 'witness-format 1' header")
    try:
        for ln in lines[1:]:
            key, *rest = ln.split()
            if key in ("g", "h"):
                src, arrow, dst, cls = rest
                if arrow != "->":
                    raise FormatError(f"bad table line: {ln}")
                head_q = int(head["alphabet"][0])
                (g if key == "g" else h)[_parse_word(src, head_q)] = (_parse_word(dst, head_q), int(cls))
            else:
                head[key] = rest
        q = int(head["alphabet"][0])
        P = int(head["ring"][0])
        x = CellSet(map(int, head["x"]))
        y = CellSet(map(int, head["y"]))
        e = int(head["e"][0])
        alpha = tuple(int(v) for v in head["alpha"])
    except (KeyError, ValueError, IndexError) as exc:
        raise FormatError(f"malformed witness file: {exc}") from None
    if sorted(g) != list(range(len(g))) or sorted(h) != list(range(len(h))):
        raise FormatError("g/h tables are not total")
    return SemilocalWitness(q, P, x, y, e, tuple(g[i] for i in range(len(g))),
                            tuple(h[j] for j in range(len(h))), alpha)


def save_witness(w: SemilocalWitness, path) -> None:
    Path(path).write_text(format_witness(w), encoding="utf-8")


def load_witness(path) -> SemilocalWitness:
    return parse_witness(Path(path).read_text(encoding="utf-8"))
