"""Semilocalizability P(X, Y, f), the block neighborhood BN(f) and its bounds.

P(X, Y, f) holds iff three things do: X ⊇ Y + N(f), X ⊇ Y + Ñ(f), and the
context-independence condition on X-patterns (``condition_three``).  The
last one quantifies over infinite contexts, but only finitely many cells
matter:

* an output cell n can tell two X-patterns apart only if (n + N) meets X,
  so only ``out_band = (X - N) \\ Y`` is compared;
* those outputs read, outside X, only ``in_band = (out_band + N) \\ X``.

For each context b on in_band the X-patterns split into classes according to
the outputs they produce on out_band.  The condition says this partition does
not depend on b, which is checked by comparing canonical labelings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cells import CellSet
from .core import ReversibleCA, compose, dual, evaluate_finite, identity
from .errors import InputError, TooLarge

DEFAULT_MAX_EVALS = 1 << 28
_CHUNK = 1 << 21


@dataclass(frozen=True)
class CheckBand:
    x: CellSet
    y: CellSet
    out_band: CellSet
    in_band: CellSet


def check_band(f: ReversibleCA, x: CellSet, y: CellSet) -> CheckBand:
    x, y = CellSet(x), CellSet(y)
    out_band = (x - f.N).without(y)
    in_band = (out_band + f.N).without(x)
    return CheckBand(x, y, out_band, in_band)


def is_semicausal(f: ReversibleCA, x: CellSet, y: CellSet) -> bool:
    return CellSet(x).issuperset(CellSet(y) + f.N)


def is_dual_semicausal(f: ReversibleCA, x: CellSet, y: CellSet) -> bool:
    return CellSet(x).issuperset(CellSet(y) + f.N_dual)


def canonical_labels(keys: np.ndarray) -> np.ndarray:
    """Row-wise partition fingerprint: each entry becomes the least column index
    carrying the same key in its row."""
    rows, cols = keys.shape
    order = np.argsort(keys, axis=1, kind="stable")
    sk = np.take_along_axis(keys, order, axis=1)
    fresh = np.ones(sk.shape, dtype=bool)
    fresh[:, 1:] = sk[:, 1:] != sk[:, :-1]
    start = np.maximum.accumulate(np.where(fresh, np.arange(cols), 0), axis=1)
    rep = np.take_along_axis(order, start, axis=1)
    out = np.empty_like(order)
    np.put_along_axis(out, order, rep, axis=1)
    return out


def _band_outputs(f: ReversibleCA, band: CheckBand, b_idx: np.ndarray) -> np.ndarray:
    """Keys (len(b_idx), q**|X|) encoding f's outputs on out_band."""
    q = f.q
    x, ib = band.x, band.in_band
    nx, ni = len(x), len(ib)
    a_idx = np.arange(q**nx, dtype=np.int64)[None, :]
    b_idx = b_idx[:, None]
    xpos = {c: i for i, c in enumerate(x)}
    ipos = {c: i for i, c in enumerate(ib)}
    keys = np.zeros((b_idx.shape[0], a_idx.shape[1]), dtype=np.int64)
    bound = 1
    for n in band.out_band:
        idx = np.zeros_like(keys)
        for o in f.N:
            c = n + o
            if c in xpos:
                d = (a_idx // q ** (nx - 1 - xpos[c])) % q
            else:
                d = (b_idx // q ** (ni - 1 - ipos[c])) % q
            idx = idx * q + d
        if bound * q >= 1 << 62:
            _, inv = np.unique(keys, return_inverse=True)
            keys = inv.reshape(keys.shape).astype(np.int64)
            bound = int(keys.max()) + 1
        keys = keys * q + f.forward.table[idx]
        bound *= q
    return keys


def condition_three(f: ReversibleCA, x: CellSet, y: CellSet,
                    max_evals: int = DEFAULT_MAX_EVALS) -> bool:
    """Whether indistinguishability of X-patterns (off y) is context independent."""
    band = check_band(f, x, y)
    q = f.q
    if not band.out_band or not band.in_band:
        return True
    qa, qb = q ** len(band.x), q ** len(band.in_band)
    if qa * qb > max_evals:
        raise TooLarge(f"condition (3) for X={band.x}", qa * qb, max_evals)
    rows = max(1, _CHUNK // qa)
    ref = None
    for start in range(0, qb, rows):
        b_idx = np.arange(start, min(qb, start + rows), dtype=np.int64)
        labels = canonical_labels(_band_outputs(f, band, b_idx))
        if ref is None:
            ref = labels[0]
        if not np.all(labels == ref):
            return False
    return True


def is_semilocalizable(f: ReversibleCA, x: CellSet, y: CellSet,
                       max_evals: int = DEFAULT_MAX_EVALS) -> bool:
    return (is_semicausal(f, x, y) and is_dual_semicausal(f, x, y)
            and condition_three(f, x, y, max_evals))


@dataclass(frozen=True)
class WordCheck:
    """Outcome of testing condition (3) on explicit words."""

    hypothesis: bool        # f(a.u) = f(a'.u) off Y
    conclusion: bool        # f(a.v) = f(a'.v) off Y
    differing: CellSet      # cells off Y where f(a.v) and f(a'.v) differ

    @property
    def violates(self) -> bool:
        return self.hypothesis and not self.conclusion


def check_words(f: ReversibleCA, x: CellSet, y: CellSet, a, a2,
                u: dict[int, int], v: dict[int, int], background: int = 0) -> WordCheck:
    """Test the implication of condition (3) on a, a' (words on x) and contexts
    u, v (finitely supported on the complement of x, `background` elsewhere)."""
    x, y = CellSet(x), CellSet(y)
    if len(a) != len(x) or len(a2) != len(x):
        raise InputError("a and a' must be words on x")
    if any(c in x for c in list(u) + list(v)):
        raise InputError("contexts must avoid x")

    def diff(ctx):
        left = evaluate_finite(f.forward, {**ctx, **dict(zip(x, a))}, background)
        right = evaluate_finite(f.forward, {**ctx, **dict(zip(x, a2))}, background)
        cells = set(left) | set(right)
        # cells missing from one image carry the background image there
        base = f.forward.lookup([background] * len(f.N))
        return CellSet(c for c in cells
                       if c not in y and left.get(c, base) != right.get(c, base))

    hyp = diff(u)
    con = diff(v)
    return WordCheck(not hyp, not con, con)


def individual_bound(f: ReversibleCA) -> CellSet:
    n, nd = f.N, f.N_dual
    return (n - n + nd) & (nd - nd + n)


def block_neighborhood(f: ReversibleCA, max_evals: int = DEFAULT_MAX_EVALS) -> CellSet:
    """Smallest X with P(X, {0}, f).

    The X satisfying P inside the individual bound B0 are closed upwards and
    under intersection, so a cell belongs to BN iff removing it from B0
    breaks P.
    """
    b0 = individual_bound(f)
    zero = CellSet([0])
    bn = CellSet(c for c in b0 if not is_semilocalizable(f, b0.without([c]), zero, max_evals))
    if not is_semilocalizable(f, bn, zero, max_evals):
        raise AssertionError(f"P(BN, {{0}}, f) fails for BN={bn}; closure properties violated")
    return bn


def interval_radii(s: CellSet) -> tuple[int, int]:
    """Tightest (a, b) with s ⊆ ⟦-a; b⟧; a may be negative for one-sided sets."""
    return -s.min, s.max


def iterate_bound(f: ReversibleCA, k: int) -> CellSet:
    if k < 1:
        raise InputError("k must be positive")
    al, be = interval_radii(f.N)
    ga, de = interval_radii(f.N_dual)
    return CellSet.interval(-(k + 1) * max(al, ga) - min(be, de),
                            (k + 1) * max(be, de) + min(al, ga))


VERDICT_LABELS = {
    "n_meets_dual": "N ∩ Ñ ≠ ∅",
    "bn_contains_n_and_dual": "N ∪ Ñ ⊆ BN",
    "bn_within_individual_bound": "BN ⊆ (N−N+Ñ) ∩ (Ñ−Ñ+N)",
    "self_dual": "BN(f̃) = BN(f)",
    "bn_within_composition_bound": "BN(f_n⋯f_1) ⊆ V",
    "composition_bound_within_4n_box": "V ⊆ ⟦−4n;4n⟧",
    "bn_within_4n_box": "BN(f_2 f_1) ⊆ ⟦−4n;4n⟧",
    "bn_within_iterate_bound": "BN(f^k) ⊆ iterate bound",
}


@dataclass
class BoundsReport:
    n: CellSet
    n_dual: CellSet
    bn: CellSet | None
    individual_bound: CellSet
    composition_bound: CellSet | None = None
    summands: list[dict] = field(default_factory=list)
    extra_bounds: dict[str, CellSet] = field(default_factory=dict)
    verdicts: dict[str, bool] = field(default_factory=dict)

    @property
    def minimal(self) -> bool | None:
        return None if self.bn is None else self.bn == (self.n | self.n_dual)

    @property
    def all_pass(self) -> bool:
        return all(self.verdicts.values())


def verify_all_bounds(f: ReversibleCA, max_evals: int = DEFAULT_MAX_EVALS) -> BoundsReport:
    bn = block_neighborhood(f, max_evals)
    ib = individual_bound(f)
    rep = BoundsReport(f.N, f.N_dual, bn, ib)
    rep.verdicts = {
        "n_meets_dual": bool(f.N & f.N_dual),
        "bn_contains_n_and_dual": (f.N | f.N_dual).issubset(bn),
        "bn_within_individual_bound": bn.issubset(ib),
        "self_dual": block_neighborhood(dual(f), max_evals) == bn,
    }
    return rep


def composition_bound(fs: list[ReversibleCA], max_evals: int = DEFAULT_MAX_EVALS,
                      compute_true: bool = True) -> BoundsReport:
    """Bound on BN(f_n ⋯ f_1) for fs = [f_1, ..., f_n]."""
    if not fs:
        raise InputError("need at least one automaton")
    q = fs[0].q
    if any(f.q != q for f in fs):
        raise InputError("all automata must share the alphabet")
    n = len(fs)
    ident = identity(q)
    # prefix[k] = f_k ⋯ f_1, suffix[k] = f_n ⋯ f_{k+1}
    prefix = [ident]
    for f in fs:
        prefix.append(compose(f, prefix[-1]))
    suffix = [ident] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix[k] = compose(suffix[k + 1], fs[k])
    summands = []
    v = CellSet()
    for k in range(1, n + 1):
        c = suffix[k].N_dual
        bnk = block_neighborhood(fs[k - 1], max_evals)
        kk = c + bnk
        d = prefix[k - 1].N
        vk = kk + d
        summands.append({"k": k, "C": c, "BN": bnk, "K": kk, "D": d, "V": vk})
        v = v | vk
    total = prefix[n]
    bn = None
    if compute_true:
        try:
            bn = block_neighborhood(total, max_evals)
        except TooLarge:
            bn = None
    rep = BoundsReport(total.N, total.N_dual, bn, individual_bound(total),
                       composition_bound=v, summands=summands)
    if bn is not None:
        rep.verdicts["bn_within_composition_bound"] = bn.issubset(v)
    if n == 2:
        r = max(max(abs(c) for c in s) for f in fs for s in (f.N, f.N_dual))
        box = CellSet.interval(-4 * r, 4 * r)
        rep.extra_bounds["4n_box"] = box
        rep.verdicts["composition_bound_within_4n_box"] = v.issubset(box)
        if bn is not None:
            rep.verdicts["bn_within_4n_box"] = bn.issubset(box)
    return rep


def iterate_report(f: ReversibleCA, k: int, max_evals: int = DEFAULT_MAX_EVALS) -> BoundsReport:
    """BN(f^k) against the iterate bound and the composition bound for k copies."""
    rep = composition_bound([f] * k, max_evals)
    ib = iterate_bound(f, k)
    rep.extra_bounds["iterate"] = ib
    if rep.bn is not None:
        rep.verdicts["bn_within_iterate_bound"] = rep.bn.issubset(ib)
    return rep


def naive_composition_holds(g: ReversibleCA, f: ReversibleCA,
                            max_evals: int = DEFAULT_MAX_EVALS) -> bool:
    """BN(g∘f) ⊆ BN(g) + BN(f)."""
    return block_neighborhood(compose(g, f), max_evals).issubset(
        block_neighborhood(g, max_evals) + block_neighborhood(f, max_evals))


__all__ = [
    "CheckBand", "check_band", "is_semicausal", "is_dual_semicausal", "condition_three",
    "is_semilocalizable", "WordCheck", "check_words", "individual_bound", "block_neighborhood",
    "iterate_bound", "BoundsReport", "verify_all_bounds", "composition_bound", "iterate_report",
    "naive_composition_holds", "VERDICT_LABELS",
]
