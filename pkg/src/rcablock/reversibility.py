"""Injectivity of 1D CAs and synthesis of inverse local rules.

Injectivity is decided on the pair graph over de Bruijn states: a node is a
pair of overlap words, an edge a pair of full windows with the same image
symbol.  The rule is non-injective iff some edge joining two different
windows lies on a bi-infinite path.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .cells import CellSet
from .core import (Alphabet, LocalRule, check_table_size, compose_rules, is_identity_rule,
                   minimize, subindex)
from .errors import NotInjective, RadiusCapExceeded

DEFAULT_MAX_RADIUS = 8
DEFAULT_MAX_EVALS = 1 << 24

Periodic = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class InjectivityVerdict:
    injective: bool
    # two eventually periodic configurations ...L L C R R..., each as (L, C, R)
    witness: tuple[Periodic, Periodic] | None = None

    def __bool__(self):
        return self.injective


def contiguous(rule: LocalRule) -> LocalRule:
    return rule.on_window(rule.offsets.hull())


class _PairGraph:
    def __init__(self, rule: LocalRule):
        rule = contiguous(rule)
        q, L = rule.q, rule.k
        self.q, self.L = q, L
        self.Q = Q = q ** (L - 1)
        labels = rule.table.astype(np.int64)
        order = np.argsort(labels, kind="stable")
        counts = np.bincount(labels, minlength=q)
        w1s, w2s = [], []
        start = 0
        for c in counts:
            ws = order[start:start + c]
            start += c
            w1s.append(np.repeat(ws, c))
            w2s.append(np.tile(ws, c))
        self.w1 = np.concatenate(w1s).astype(np.int64)
        self.w2 = np.concatenate(w2s).astype(np.int64)
        self.src = (self.w1 // q) * Q + self.w2 // q
        self.dst = (self.w1 % Q) * Q + self.w2 % Q
        self.n = Q * Q

    def _infinite(self, tail, head) -> np.ndarray:
        """Nodes with an infinite path leaving them along tail -> head edges."""
        alive = np.ones(self.n, dtype=bool)
        while True:
            ok = alive[head] & alive[tail]
            has = np.zeros(self.n, dtype=bool)
            has[tail[ok]] = True
            new = alive & has
            if new.sum() == alive.sum():
                return alive
            alive = new

    def analyse(self) -> InjectivityVerdict:
        fwd = self._infinite(self.src, self.dst)
        bwd = self._infinite(self.dst, self.src)
        cand = np.flatnonzero((self.w1 != self.w2) & bwd[self.src] & fwd[self.dst])
        if cand.size == 0:
            return InjectivityVerdict(True)
        return InjectivityVerdict(False, self._witness(int(cand[0]), fwd, bwd))

    def _walk(self, start_node, alive, forward: bool):
        """Follow edges inside `alive` until a node repeats.

        Returns (edges, index of the first edge of the cycle), in walking order.
        """
        key, other = (self.src, self.dst) if forward else (self.dst, self.src)
        seen = {start_node: 0}
        edges = []
        node = start_node
        while True:
            e = int(np.flatnonzero((key == node) & alive[other])[0])
            edges.append(e)
            node = int(other[e])
            if node in seen:
                return edges, seen[node]
            seen[node] = len(edges)

    def _witness(self, e0, fwd, bwd):
        back, bc = self._walk(int(self.src[e0]), bwd, forward=False)
        ahead, fc = self._walk(int(self.dst[e0]), fwd, forward=True)
        # back[bc:] is a cycle walked backwards, back[:bc] leads from it to e0
        back = back[::-1]
        cyc_len = len(back) - bc
        left_cycle, lead_in = back[:cyc_len], back[cyc_len:]
        lead_out, right_cycle = ahead[:fc], ahead[fc:]
        center = lead_in + [e0] + lead_out
        q = self.q

        def sym(edges, w):
            return tuple(int(w[e] % q) for e in edges)

        return tuple((sym(left_cycle, w), sym(center, w), sym(right_cycle, w))
                     for w in (self.w1, self.w2))


def is_injective(rule: LocalRule, alphabet: Alphabet | None = None) -> InjectivityVerdict:
    return _PairGraph(rule).analyse()


def materialize(config: Periodic, reps: int) -> list[int]:
    left, center, right = config
    return list(left) * reps + list(center) + list(right) * reps


def check_witness(rule: LocalRule, witness) -> bool:
    """Both configurations differ somewhere and have identical images."""
    rule = contiguous(rule)
    (l1, c1, r1), (l2, c2, r2) = witness
    if (len(l1), len(c1), len(r1)) != (len(l2), len(c2), len(r2)) or not l1 or not r1:
        return False
    p = max(len(l1), len(r1))
    reps = 2 * (ceil(rule.k / min(len(l1), len(r1))) + p) + 2
    u = materialize(witness[0], reps)
    v = materialize(witness[1], reps)
    if u == v:
        return False
    k = rule.k
    for n in range(len(u) - k + 1):
        if rule.lookup(u[n:n + k]) != rule.lookup(v[n:n + k]):
            return False
    return True


def synthesize_inverse(rule: LocalRule, alphabet: Alphabet | None = None,
                       max_radius: int = DEFAULT_MAX_RADIUS,
                       max_evals: int = DEFAULT_MAX_EVALS) -> LocalRule:
    """Inverse local rule, with window ⟦-R;R⟧ for the least R that works, minimized."""
    verdict = is_injective(rule, alphabet)
    if not verdict.injective:
        raise NotInjective("rule is not injective", verdict.witness)
    q = rule.q
    crule = contiguous(rule)
    m, L = crule.offsets.min, crule.k
    for R in range(max_radius + 1):
        lo = -R + m
        n = 2 * R + L
        if not lo <= 0 < lo + n:
            continue
        size = check_table_size(q, n, max_evals, "inverse synthesis enumeration")
        idx = np.arange(size, dtype=np.int64)
        img = np.zeros_like(idx)
        for j in range(2 * R + 1):
            img = img * q + crule.table[subindex(idx, q, n, range(j, j + L))]
        center = subindex(idx, q, n, [-lo])
        seen = np.zeros((q ** (2 * R + 1), q), dtype=bool)
        seen[img, center] = True
        hits = seen.sum(axis=1)
        if np.any(hits > 1):
            continue
        cand = LocalRule(q, CellSet.interval(-R, R), seen.argmax(axis=1))
        if (is_identity_rule(compose_rules(cand, rule))
                and is_identity_rule(compose_rules(rule, cand))):
            return minimize(cand)
    raise RadiusCapExceeded(max_radius)


def periodic_injective(rule: LocalRule, period: int) -> bool:
    """Brute force: is the rule injective on configurations of the given period?"""
    from .core import all_words, apply_rule_on_ring
    configs = all_words(rule.q, period)
    images = apply_rule_on_ring(rule, configs)
    return np.unique(images, axis=0).shape[0] == configs.shape[0]
