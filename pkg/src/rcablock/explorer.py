"""Campaigns over small reversible CAs.

* exhaustive enumeration of reversible rules on a fixed window,
* the minimality of BN for automata with a subtraction,
* direct-sum constructions realizing a prescribed (N, Ñ, BN) triple,
* resumable surveys recording (N, Ñ, BN) for every enumerated automaton.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .blocknbh import DEFAULT_MAX_EVALS, block_neighborhood, individual_bound
from .cells import CellSet
from .core import (MAX_TABLE, Alphabet, LocalRule, ReversibleCA, all_words, compose,
                   direct_sum_all, dual, reflect, shift, toffoli)
from .errors import NotAdditive, PreconditionFailed, VerificationFailed
from .reversibility import is_injective

log = logging.getLogger(__name__)


def table_from_index(index: int, q: int, size: int) -> np.ndarray:
    """Table number `index` in lexicographic order (first entry most significant)."""
    out = np.zeros(size, dtype=np.int64)
    for i in range(size - 1, -1, -1):
        out[i] = index % q
        index //= q
    return out


def enumerate_rcas(q: int, window: CellSet, limit: int | None = None,
                   skip: set[int] | frozenset = frozenset()) -> Iterator[tuple[int, ReversibleCA]]:
    """Yield (table index, CA) for every reversible rule on `window`, in table order.

    `limit` caps the number of automata yielded (skipped indices count too).
    """
    window = CellSet(window)
    k = len(window)
    size = q**k
    count = 0
    balance = q ** (k - 1) if k else None
    alphabet = Alphabet(q)
    for index in range(q**size):
        if limit is not None and count >= limit:
            return
        table = table_from_index(index, q, size)
        # surjective rules are balanced, and injective ones are surjective
        if balance is None or np.any(np.bincount(table, minlength=q) != balance):
            continue
        rule = LocalRule(q, window, table)
        if not is_injective(rule, alphabet):
            continue
        count += 1
        if index in skip:
            continue
        yield index, ReversibleCA.from_forward(alphabet, rule, name=f"q{q}#{index}")


def _additive_under(rule: LocalRule, op, max_pairs: int = 1 << 22, seed: int = 0) -> bool:
    q, k = rule.q, rule.k
    words = all_words(q, k)
    n = words.shape[0]
    weights = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    table = rule.table.astype(np.int64)
    if n * n <= max_pairs:
        i, j = np.divmod(np.arange(n * n, dtype=np.int64), n)
    else:
        rng = np.random.default_rng(seed)
        i, j = rng.integers(0, n, size=(2, max_pairs))
    combo = op(words[i], words[j]) @ weights
    return bool(np.all(table[combo] == op(table[i], table[j])))


def subtraction_groups(q: int) -> dict[str, object]:
    groups = {"mod": lambda u, v: (u - v) % q}
    if q & (q - 1) == 0:
        groups["xor"] = np.bitwise_xor
    return groups


def additive_group(ca: ReversibleCA) -> str | None:
    """Name of a componentwise subtraction the CA is an endomorphism for, if any."""
    for name, op in subtraction_groups(ca.q).items():
        if _additive_under(ca.forward, op):
            return name
    return None


def check_subtraction_minimal(f: ReversibleCA, require_additive: bool = True,
                              max_evals: int = DEFAULT_MAX_EVALS) -> bool:
    """Whether BN(f) = N(f) ∪ Ñ(f)."""
    if require_additive and additive_group(f) is None:
        raise NotAdditive("automaton admits no componentwise subtraction")
    return block_neighborhood(f, max_evals) == (f.N | f.N_dual)


@dataclass(frozen=True)
class TripleRecord:
    q: int
    index: int
    n: CellSet
    n_dual: CellSet
    bn: CellSet

    def line(self) -> str:
        return f"{self.q} {self.index} {self.n.csv()} {self.n_dual.csv()} {self.bn.csv()}"

    @classmethod
    def parse(cls, line: str) -> "TripleRecord":
        q, index, n, nd, bn = line.split()
        return cls(int(q), int(index), CellSet.parse(n), CellSet.parse(nd), CellSet.parse(bn))


def stretched_toffoli(l: int) -> ReversibleCA:
    """Toffoli with N = Ñ = {0, l}; negative l uses the mirror image."""
    if l > 0:
        return toffoli(l)
    if l < 0:
        return reflect(toffoli(-l))
    raise PreconditionFailed("stretch must be nonzero")


def _decompose(z: int, cells: CellSet) -> tuple[int, int] | None:
    """(x, y) in cells with z = 2y - x and x != y, the closest pair first."""
    pairs = [(abs(y - x), x, y) for x in cells for y in cells if x != y and 2 * y - x == z]
    if not pairs:
        return None
    _, x, y = min(pairs)
    return x, y


def conjecture_components(x: CellSet, y: CellSet, z: CellSet, shift_q: int = 2,
                          prune: bool = True) -> list[ReversibleCA]:
    x, y, z = CellSet(x), CellSet(y), CellSet(z)
    if x != y:
        raise PreconditionFailed("only X = Y has a known construction")
    if not (x | y).issubset(z) or not z.issubset((x - x + y) & (y - y + x)):
        raise PreconditionFailed("need X ∪ Y ⊆ Z ⊆ (X−X+Y) ∩ (Y−Y+X)")
    common = x & y
    parts = []
    covered = CellSet()
    for c in z.without(x):
        pair = _decompose(c, common)
        if pair is None:
            raise PreconditionFailed(f"{c} is not of the form 2y−x with x, y in X ∩ Y")
        a, b = pair
        g = compose(shift(a, 4), stretched_toffoli(b - a))
        parts.append(g.renamed(f"shift({a})∘T({b - a})"))
        covered = covered | CellSet([a, b])
    shifts = [shift(c, shift_q) for c in x if not (prune and c in covered)]
    return shifts + parts


def build_conjecture_instance(x: CellSet, y: CellSet, z: CellSet, shift_q: int = 2,
                              prune: bool = True, verify: bool = True,
                              max_table: int = MAX_TABLE,
                              max_evals: int = DEFAULT_MAX_EVALS) -> ReversibleCA:
    """A direct sum of shifts and shifted stretched Toffolis with N = X, Ñ = Y, BN = Z.

    With prune=True a shift component is left out when a Toffoli component
    already reads its cell.
    """
    x, y, z = CellSet(x), CellSet(y), CellSet(z)
    ca = direct_sum_all(conjecture_components(x, y, z, shift_q, prune), max_table)
    ca = ca.renamed(f"instance(X={x}, Y={y}, Z={z})")
    if verify:
        bn = block_neighborhood(ca, max_evals)
        got = (ca.N, ca.N_dual, bn)
        if got != (x, y, z):
            raise VerificationFailed(f"built CA has (N, Ñ, BN) = {tuple(map(str, got))}")
    return ca


def check_record(f: ReversibleCA, bn: CellSet, max_evals: int = DEFAULT_MAX_EVALS) -> None:
    """Sandwich and self-duality; raises VerificationFailed."""
    if not (f.N | f.N_dual).issubset(bn) or not bn.issubset(individual_bound(f)):
        raise VerificationFailed(f"{f!r}: BN={bn} escapes N ∪ Ñ ⊆ BN ⊆ individual bound")
    if block_neighborhood(dual(f), max_evals) != bn:
        raise VerificationFailed(f"{f!r}: BN of the dual differs")


SURVEY_HEADER = "# q table-index N Ñ BN"


def read_survey(path) -> list[TripleRecord]:
    p = Path(path)
    if not p.exists():
        return []
    text = p.read_text(encoding="utf-8")
    lines = text.split("\n")
    # a trailing fragment without newline is an interrupted write
    complete = lines[:-1]
    return [TripleRecord.parse(ln) for ln in complete if ln and not ln.startswith("#")]


def survey(qmax: int, window: CellSet, limit: int | None = None, path=None,
           qmin: int = 2, max_evals: int = DEFAULT_MAX_EVALS) -> list[TripleRecord]:
    """Record (N, Ñ, BN) for every reversible rule on `window`, q = qmin..qmax.

    With `path`, records are appended one per line; an existing file is
    resumed by skipping the table indices it already holds.
    """
    window = CellSet(window)
    done = read_survey(path) if path else []
    seen = {(r.q, r.index) for r in done}
    out = None
    if path:
        p = Path(path)
        prior = p.read_text(encoding="utf-8") if p.exists() else ""
        keep = prior[:prior.rfind("\n") + 1] if prior else ""
        if not keep:
            keep = SURVEY_HEADER + "\n"
        p.write_text(keep, encoding="utf-8")
        out = p.open("a", encoding="utf-8")
    records = list(done)
    try:
        for q in range(qmin, qmax + 1):
            skip = {i for (qq, i) in seen if qq == q}
            for index, f in enumerate_rcas(q, window, limit, skip):
                bn = block_neighborhood(f, max_evals)
                check_record(f, bn, max_evals)
                rec = TripleRecord(q, index, f.N, f.N_dual, bn)
                records.append(rec)
                log.debug("%s", rec.line())
                if out:
                    out.write(rec.line() + "\n")
                    out.flush()
    finally:
        if out:
            out.close()
    return sorted(records, key=lambda r: (r.q, r.index))
