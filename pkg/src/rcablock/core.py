"""Local rules and reversible one-dimensional cellular automata.

Conventions used everywhere in the package:

* A local rule reads the cells ``n + o`` for ``o`` in its (ascending) offset
  window and writes cell ``n``.
* Its table is flat, indexed by the input word read in ascending offset order
  with the earliest offset as the most significant base-``q`` digit.
* Track-structured symbols are encoded the same way: first track most
  significant.  For the Toffoli alphabet ``(x, y) -> 2*x + y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .cells import CellSet
from .errors import AlphabetMismatch, InputError, InsufficientSupport, TooLarge

MAX_TABLE = 1 << 24


def _dtype(q: int):
    if q <= 1 << 8:
        return np.uint8
    if q <= 1 << 16:
        return np.uint16
    return np.uint32


def check_table_size(q: int, k: int, max_table: int = MAX_TABLE, what: str = "rule table"):
    size = q**k
    if size > max_table:
        raise TooLarge(what, size, max_table)
    return size


@dataclass(frozen=True)
class Alphabet:
    size: int
    tracks: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.size < 2:
            raise InputError(f"alphabet size must be >= 2, got {self.size}")
        if self.tracks is not None:
            object.__setattr__(self, "tracks", tuple(int(t) for t in self.tracks))
            if any(t < 1 for t in self.tracks) or int(np.prod(self.tracks)) != self.size:
                raise InputError(f"tracks {self.tracks} do not multiply to {self.size}")

    @property
    def q(self) -> int:
        return self.size

    def split(self, symbol: int) -> tuple[int, ...]:
        """Decode a symbol into its track components (first track most significant)."""
        if not self.tracks:
            return (symbol,)
        out = []
        for t in reversed(self.tracks):
            out.append(symbol % t)
            symbol //= t
        return tuple(reversed(out))

    def join(self, parts: Sequence[int]) -> int:
        if not self.tracks:
            (s,) = parts
            return s
        s = 0
        for p, t in zip(parts, self.tracks):
            s = s * t + p
        return s


class LocalRule:
    """Window offsets plus a total lookup table of ``q**len(offsets)`` symbols."""

    __slots__ = ("q", "offsets", "table")

    def __init__(self, q: int, offsets: Iterable[int], table):
        offsets = tuple(offsets)
        if list(offsets) != sorted(set(offsets)):
            raise InputError(f"offsets must be strictly increasing, got {list(offsets)}")
        table = np.asarray(table).reshape(-1)
        if table.size != q ** len(offsets):
            raise InputError(f"table has {table.size} entries, expected {q}**{len(offsets)}")
        if table.size and (table.min() < 0 or table.max() >= q):
            raise InputError("table entries must lie in 0..q-1")
        table = table.astype(_dtype(q), copy=True)
        table.flags.writeable = False
        self.q = q
        self.offsets = CellSet(offsets)
        self.table = table

    @property
    def k(self) -> int:
        return len(self.offsets)

    def __eq__(self, other):
        if not isinstance(other, LocalRule):
            return NotImplemented
        return (self.q == other.q and self.offsets == other.offsets
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.q, self.offsets, self.table.tobytes()))

    def __repr__(self):
        return f"LocalRule(q={self.q}, offsets={list(self.offsets)}, table={self.table.tolist()})"

    def cube(self) -> np.ndarray:
        return self.table.reshape((self.q,) * self.k)

    def lookup(self, word: Sequence[int]) -> int:
        return int(self.table[word_index(word, self.q)])

    def on_window(self, window: CellSet, max_table: int = MAX_TABLE) -> "LocalRule":
        """The same rule re-expressed on a larger window (extra cells ignored)."""
        window = CellSet(window)
        if not self.offsets.issubset(window):
            raise InputError(f"window {window} does not contain {self.offsets}")
        check_table_size(self.q, len(window), max_table)
        idx = np.arange(self.q ** len(window), dtype=np.int64)
        sub = subindex(idx, self.q, len(window), [window.index(o) for o in self.offsets])
        return LocalRule(self.q, window, self.table[sub])

    def shifted(self, k: int) -> "LocalRule":
        return LocalRule(self.q, self.offsets.shifted(k), self.table)


def word_index(word: Sequence[int], q: int) -> int:
    i = 0
    for s in word:
        i = i * q + int(s)
    return i


def index_word(index: int, q: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        out.append(index % q)
        index //= q
    return tuple(reversed(out))


def all_words(q: int, k: int) -> np.ndarray:
    """All words of length k in lexicographic order, shape (q**k, k)."""
    idx = np.arange(q**k, dtype=np.int64)
    return np.stack([(idx // q ** (k - 1 - p)) % q for p in range(k)], axis=1) if k else \
        np.zeros((1, 0), dtype=np.int64)


def digit(idx, q: int, m: int, p: int):
    """Symbol at position p of the words with indices idx (length m)."""
    return (idx // q ** (m - 1 - p)) % q


def subindex(idx, q: int, m: int, positions: Iterable[int]):
    """Index of the sub-word read at `positions` of each word in idx (length m)."""
    out = np.zeros_like(idx)
    for p in positions:
        out = out * q + digit(idx, q, m, p)
    return out


def essential_offsets(rule: LocalRule) -> CellSet:
    cube = rule.cube()
    keep = []
    for axis, o in enumerate(rule.offsets):
        if np.any(cube != np.take(cube, [0], axis=axis)):
            keep.append(o)
    return CellSet(keep)


def minimal_neighborhood(rule: LocalRule, alphabet: Alphabet | None = None) -> CellSet:
    """Offsets i such that two words differing only at i have different outputs."""
    return essential_offsets(rule)


def minimize(rule: LocalRule) -> LocalRule:
    keep = essential_offsets(rule)
    if keep == rule.offsets:
        return rule
    cube = rule.cube()
    sl = tuple(slice(None) if o in keep else 0 for o in rule.offsets)
    return LocalRule(rule.q, keep, cube[sl].reshape(-1))


def identity_rule(q: int) -> LocalRule:
    return LocalRule(q, [0], np.arange(q))


def is_identity_rule(rule: LocalRule) -> bool:
    return minimize(rule) == identity_rule(rule.q)


def compose_rules(outer: LocalRule, inner: LocalRule, max_table: int = MAX_TABLE) -> LocalRule:
    """Rule of ``outer ∘ inner`` (inner applied first), minimized."""
    if outer.q != inner.q:
        raise AlphabetMismatch(f"alphabet sizes differ: {outer.q} vs {inner.q}")
    q = outer.q
    window = outer.offsets + inner.offsets
    m = len(window)
    size = check_table_size(q, m, max_table, "composed rule table")
    pos = {c: i for i, c in enumerate(window)}
    table = np.empty(size, dtype=_dtype(q))
    chunk = 1 << 20
    for start in range(0, size, chunk):
        idx = np.arange(start, min(size, start + chunk), dtype=np.int64)
        out_idx = np.zeros_like(idx)
        for c in outer.offsets:
            inner_idx = subindex(idx, q, m, [pos[c + o] for o in inner.offsets])
            out_idx = out_idx * q + inner.table[inner_idx]
        table[start:start + idx.size] = outer.table[out_idx]
    return minimize(LocalRule(q, window, table))


def reflect_rule(rule: LocalRule) -> LocalRule:
    """Conjugate by the central symmetry n -> -n."""
    cube = rule.cube()
    flipped = np.transpose(cube, tuple(reversed(range(rule.k)))) if rule.k else cube
    return LocalRule(rule.q, -rule.offsets, np.ascontiguousarray(flipped).reshape(-1))


def apply_rule_on_ring(rule: LocalRule, configs) -> np.ndarray:
    """Apply a rule to periodic configurations; configs has shape (P,) or (M, P)."""
    configs = np.asarray(configs, dtype=np.int64)
    P = configs.shape[-1]
    cells = np.arange(P)
    idx = np.zeros(configs.shape, dtype=np.int64)
    for o in rule.offsets:
        idx = idx * rule.q + configs[..., (cells + o) % P]
    return rule.table[idx].astype(np.int64)


@dataclass(frozen=True)
class PatternAssignment:
    """Finite pattern: symbols[i] sits on the i-th cell of support (ascending)."""

    support: CellSet
    symbols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "support", CellSet(self.support))
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        if len(self.support) != len(self.symbols):
            raise InputError("pattern support and word lengths differ")

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "PatternAssignment":
        cells = sorted(d)
        return cls(CellSet(cells), tuple(d[c] for c in cells))

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.support, self.symbols))

    def restrict(self, cells: Iterable[int]) -> "PatternAssignment":
        d = self.as_dict()
        return PatternAssignment.from_dict({c: d[c] for c in cells})


class ReversibleCA:
    """A reversible CA given by its forward and inverse local rules.

    Both rules are minimized on construction.  Pass ``check=True`` to verify
    that the two rules are mutually inverse.
    """

    __slots__ = ("alphabet", "forward", "inverse", "name")

    def __init__(self, alphabet: Alphabet, forward: LocalRule, inverse: LocalRule,
                 name: str = "", check: bool = False):
        if isinstance(alphabet, int):
            alphabet = Alphabet(alphabet)
        if forward.q != alphabet.size or inverse.q != alphabet.size:
            raise AlphabetMismatch("rule alphabet does not match the CA alphabet")
        self.alphabet = alphabet
        self.forward = minimize(forward)
        self.inverse = minimize(inverse)
        self.name = name
        if check and not self.check_inverse():
            from .errors import NotReversible
            raise NotReversible("the given inverse rule does not invert the forward rule")

    @classmethod
    def from_forward(cls, alphabet: Alphabet, forward: LocalRule, name: str = "",
                     max_radius: int | None = None) -> "ReversibleCA":
        from .reversibility import DEFAULT_MAX_RADIUS, synthesize_inverse
        inverse = synthesize_inverse(forward, alphabet, max_radius or DEFAULT_MAX_RADIUS)
        return cls(alphabet, forward, inverse, name=name)

    @property
    def q(self) -> int:
        return self.alphabet.size

    @property
    def classical_nbh(self) -> CellSet:
        return self.forward.offsets

    @property
    def dual_nbh(self) -> CellSet:
        return -self.inverse.offsets

    N = classical_nbh
    N_dual = dual_nbh

    def renamed(self, name: str) -> "ReversibleCA":
        return ReversibleCA(self.alphabet, self.forward, self.inverse, name=name)

    def check_inverse(self) -> bool:
        return (is_identity_rule(compose_rules(self.inverse, self.forward))
                and is_identity_rule(compose_rules(self.forward, self.inverse)))

    def inverse_as_ca(self) -> "ReversibleCA":
        return ReversibleCA(self.alphabet, self.inverse, self.forward,
                            name=f"{self.name}^-1" if self.name else "")

    def __eq__(self, other):
        if not isinstance(other, ReversibleCA):
            return NotImplemented
        return (self.alphabet.size == other.alphabet.size and self.forward == other.forward
                and self.inverse == other.inverse)

    def __hash__(self):
        return hash((self.alphabet.size, self.forward, self.inverse))

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"ReversibleCA({label}q={self.q}, N={self.N}, Ñ={self.N_dual})"

    def is_identity(self) -> bool:
        return is_identity_rule(self.forward)

    def __call__(self, config) -> np.ndarray:
        return apply_on_ring(self, config)


def apply_on_ring(ca: ReversibleCA, config, period: int | None = None) -> np.ndarray:
    config = np.asarray(config)
    if period is not None and config.shape[-1] != period:
        raise InputError(f"configuration length {config.shape[-1]} != period {period}")
    return apply_rule_on_ring(ca.forward, config)


def evaluate_at(ca: ReversibleCA, pattern: PatternAssignment, cell: int) -> int:
    """f(v)_cell for any configuration v extending the pattern."""
    d = pattern.as_dict()
    need = [cell + o for o in ca.forward.offsets]
    missing = [c for c in need if c not in d]
    if missing:
        raise InsufficientSupport(missing)
    return ca.forward.lookup([d[c] for c in need])


def evaluate_finite(rule: LocalRule, pattern: dict[int, int], background: int = 0) -> dict[int, int]:
    """Image of a finitely supported configuration on the cells where it can
    differ from the image of the constant background."""
    if not pattern:
        return {}
    cells = CellSet(pattern) - rule.offsets
    out = {}
    for n in cells:
        out[n] = rule.lookup([pattern.get(n + o, background) for o in rule.offsets])
    return out


def dual(ca: ReversibleCA) -> ReversibleCA:
    """The central-symmetry conjugate of the inverse."""
    return ReversibleCA(ca.alphabet, reflect_rule(ca.inverse), reflect_rule(ca.forward),
                        name=f"dual({ca.name})" if ca.name else "")


def reflect(ca: ReversibleCA) -> ReversibleCA:
    """The central-symmetry conjugate of ca itself."""
    return ReversibleCA(ca.alphabet, reflect_rule(ca.forward), reflect_rule(ca.inverse),
                        name=f"reflect({ca.name})" if ca.name else "")


def compose(g: ReversibleCA, f: ReversibleCA, max_table: int = MAX_TABLE) -> ReversibleCA:
    """g ∘ f: f is applied first."""
    if g.q != f.q:
        raise AlphabetMismatch(f"alphabet sizes differ: {g.q} vs {f.q}")
    fwd = compose_rules(g.forward, f.forward, max_table)
    inv = compose_rules(f.inverse, g.inverse, max_table)
    name = f"{g.name}∘{f.name}" if g.name and f.name else ""
    alphabet = g.alphabet if g.alphabet == f.alphabet else Alphabet(g.q)
    return ReversibleCA(alphabet, fwd, inv, name=name)


def compose_all(fs: Sequence[ReversibleCA], max_table: int = MAX_TABLE) -> ReversibleCA:
    """f_n ∘ ... ∘ f_1 for fs = [f_1, ..., f_n]."""
    if not fs:
        raise InputError("empty composition")
    return reduce(lambda acc, f: compose(f, acc, max_table), fs[1:], fs[0])


def power(f: ReversibleCA, k: int, max_table: int = MAX_TABLE) -> ReversibleCA:
    if k < 1:
        raise InputError("power must be positive")
    out = f
    for _ in range(k - 1):
        out = compose(f, out, max_table)
    if f.name and k > 1:
        out = out.renamed(f"{f.name}^{k}")
    return out


def _sum_rule(rf: LocalRule, rg: LocalRule, max_table: int) -> LocalRule:
    qf, qg = rf.q, rg.q
    q = qf * qg
    window = rf.offsets | rg.offsets
    m = len(window)
    size = check_table_size(q, m, max_table, "direct-sum rule table")
    idx = np.arange(size, dtype=np.int64)
    f_idx = np.zeros_like(idx)
    for o in rf.offsets:
        f_idx = f_idx * qf + digit(idx, q, m, window.index(o)) // qg
    g_idx = np.zeros_like(idx)
    for o in rg.offsets:
        g_idx = g_idx * qg + digit(idx, q, m, window.index(o)) % qg
    table = rf.table[f_idx].astype(np.int64) * qg + rg.table[g_idx]
    return LocalRule(q, window, table)


def direct_sum(f: ReversibleCA, g: ReversibleCA, max_table: int = MAX_TABLE) -> ReversibleCA:
    """f acting on the leading tracks, g on the trailing ones."""
    q = f.q * g.q
    # the inverse rule tables are checked inside _sum_rule
    tracks = (f.alphabet.tracks or (f.q,)) + (g.alphabet.tracks or (g.q,))
    alphabet = Alphabet(q, tracks)
    name = f"{f.name}⊕{g.name}" if f.name and g.name else ""
    return ReversibleCA(alphabet, _sum_rule(f.forward, g.forward, max_table),
                        _sum_rule(f.inverse, g.inverse, max_table), name=name)


def direct_sum_all(cas: Sequence[ReversibleCA], max_table: int = MAX_TABLE) -> ReversibleCA:
    return reduce(lambda a, b: direct_sum(a, b, max_table), cas)


# -- named automata ---------------------------------------------------------

def shift(k: int, q: int = 2) -> ReversibleCA:
    """f(v)_0 = v_k."""
    return ReversibleCA(Alphabet(q), LocalRule(q, [k], np.arange(q)),
                        LocalRule(q, [-k], np.arange(q)), name=f"shift({k})")


def identity(q: int = 2) -> ReversibleCA:
    return shift(0, q).renamed("identity")


def permutation_ca(perm: Sequence[int]) -> ReversibleCA:
    """Radius-0 CA applying a symbol permutation in every cell."""
    perm = np.asarray(perm)
    q = len(perm)
    if sorted(perm.tolist()) != list(range(q)):
        raise InputError(f"{perm.tolist()} is not a permutation")
    return ReversibleCA(Alphabet(q), LocalRule(q, [0], perm),
                        LocalRule(q, [0], np.argsort(perm)))


TOFFOLI_ALPHABET = Alphabet(4, (2, 2))


def toffoli(l: int = 1) -> ReversibleCA:
    """Two-track Toffoli automaton stretched by l.

    forward: (x_0, y_0) -> (y_0 + x_0*x_l, x_l)
    inverse: (x_0, y_0) -> (y_{-l}, x_0 + y_{-l}*y_0)
    """
    if l < 1:
        raise InputError("toffoli stretch must be >= 1")
    A = TOFFOLI_ALPHABET
    fwd = np.empty(16, dtype=np.int64)
    inv = np.empty(16, dtype=np.int64)
    for s0 in range(4):
        x0, y0 = A.split(s0)
        for s1 in range(4):
            x1, y1 = A.split(s1)
            # forward reads (cell 0, cell l)
            fwd[s0 * 4 + s1] = A.join(((y0 + x0 * x1) % 2, x1))
            # inverse reads (cell -l, cell 0): s0 is cell -l, s1 is cell 0
            inv[s0 * 4 + s1] = A.join((y0, (x1 + y0 * y1) % 2))
    return ReversibleCA(A, LocalRule(4, [0, l], fwd), LocalRule(4, [-l, 0], inv),
                        name=f"toffoli({l})")


def linear_rule(terms: Sequence[tuple[int, Sequence[Sequence[int]]]], tracks: int | None = None) -> LocalRule:
    """Rule f(v)_0 = sum_o M_o v_o over GF(2)^t, symbols encoding t bits (track 1 most significant)."""
    mats = {}
    for off, m in terms:
        m = np.asarray(m, dtype=np.int64) % 2
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError("track-mixing matrices must be square")
        mats[int(off)] = (mats[int(off)] + m) % 2 if int(off) in mats else m
    if not mats:
        raise InputError("linear rule needs at least one term")
    t = tracks or next(iter(mats.values())).shape[0]
    if any(m.shape != (t, t) for m in mats.values()):
        raise InputError("all matrices must be t x t")
    q = 2**t
    offsets = sorted(mats)
    k = len(offsets)
    words = all_words(q, k)
    weights = 2 ** np.arange(t - 1, -1, -1)
    bits = (words[..., None] >> np.arange(t - 1, -1, -1)) & 1  # (q^k, k, t)
    out = np.zeros((q**k, t), dtype=np.int64)
    for j, o in enumerate(offsets):
        out = (out + bits[:, j, :] @ mats[o].T) % 2
    return LocalRule(q, offsets, out @ weights)


def linear_ca(terms: Sequence[tuple[int, Sequence[Sequence[int]]]], tracks: int | None = None,
              name: str = "") -> ReversibleCA:
    """Additive CA over (Z/2Z)^t; raises NotReversible if it is not injective."""
    from .errors import NotReversible
    from .reversibility import is_injective
    rule = linear_rule(terms, tracks)
    t = int(np.log2(rule.q))
    alphabet = Alphabet(rule.q, (2,) * t if t > 1 else None)
    verdict = is_injective(rule, alphabet)
    if not verdict.injective:
        raise NotReversible("linear rule is not injective", verdict.witness)
    return ReversibleCA.from_forward(alphabet, rule, name=name or "linear")


# (v_0^1 + v_1^2, v_0^2)
TWO_TRACK_PARTIAL_SHIFT = [(0, [[1, 0], [0, 1]]), (1, [[0, 1], [0, 0]])]

LINEAR_PRESETS = {
    "two-track-partial-shift": TWO_TRACK_PARTIAL_SHIFT,
}
