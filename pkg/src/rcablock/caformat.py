"""Reading and writing the line-oriented ``.ca`` text format.

    ca-format 1
    alphabet 4
    tracks 2 2                 (optional)
    offsets 0 1
    table 0 1 2 3 ...          (q**k integers, may continue on following lines)
    inverse-offsets -1 0       (optional, synthesized when absent)
    inverse-table ...

Lines starting with ``#`` are comments.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .core import Alphabet, LocalRule, ReversibleCA
from .errors import FormatError, NotReversible

_KEYS = {"ca-format", "alphabet", "tracks", "offsets", "table", "inverse-offsets", "inverse-table"}


@dataclass
class CAFile:
    alphabet: Alphabet
    forward: LocalRule
    inverse: LocalRule | None = None


def parse_ca(text: str) -> CAFile:
    fields: dict[str, list[int]] = {}
    key = None
    first = True
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if first:
            if tokens != ["ca-format", "1"]:
                raise FormatError("first line must be 'ca-format 1'")
            first = False
            continue
        if tokens[0][0].isalpha():
            key = tokens[0]
            if key not in _KEYS:
                raise FormatError(f"line {lineno}: unknown key {key!r}")
            if key in fields:
                raise FormatError(f"line {lineno}: duplicate key {key!r}")
            fields[key] = []
            tokens = tokens[1:]
        elif key not in ("table", "inverse-table"):
            raise FormatError(f"line {lineno}: values outside a table section")
        try:
            fields[key].extend(int(t) for t in tokens)
        except ValueError:
            raise FormatError(f"line {lineno}: expected integers") from None
    if first:
        raise FormatError("empty file")
    for req in ("alphabet", "offsets", "table"):
        if req not in fields:
            raise FormatError(f"missing {req!r}")
    if len(fields["alphabet"]) != 1:
        raise FormatError("alphabet takes one integer")
    try:
        alphabet = Alphabet(fields["alphabet"][0], fields.get("tracks"))
        forward = LocalRule(alphabet.size, fields["offsets"], fields["table"])
        inverse = None
        if "inverse-offsets" in fields or "inverse-table" in fields:
            if "inverse-offsets" not in fields or "inverse-table" not in fields:
                raise FormatError("inverse-offsets and inverse-table go together")
            inverse = LocalRule(alphabet.size, fields["inverse-offsets"], fields["inverse-table"])
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return CAFile(alphabet, forward, inverse)


def read_ca_file(path) -> CAFile:
    return parse_ca(Path(path).read_text(encoding="utf-8"))


def load_ca(path, max_radius: int | None = None) -> ReversibleCA:
    """Load a reversible CA, synthesizing (or checking) its inverse."""
    cf = read_ca_file(path)
    name = Path(path).stem
    if cf.inverse is None:
        return ReversibleCA.from_forward(cf.alphabet, cf.forward, name=name, max_radius=max_radius)
    ca = ReversibleCA(cf.alphabet, cf.forward, cf.inverse, name=name)
    if not ca.check_inverse():
        raise NotReversible(f"{path}: inverse rule does not invert the forward rule")
    return ca


def _table_lines(rule: LocalRule) -> list[str]:
    width = rule.q if rule.k else 1
    vals = rule.table.tolist()
    return [" ".join(map(str, vals[i:i + width])) for i in range(0, len(vals), width)]


def format_ca(ca: ReversibleCA | CAFile, include_inverse: bool = True, comment: str = "") -> str:
    lines = ["ca-format 1"]
    if comment:
        lines += [f"# {c}" for c in comment.splitlines()]
    lines.append(f"alphabet {ca.alphabet.size}")
    if ca.alphabet.tracks:
        lines.append("tracks " + " ".join(map(str, ca.alphabet.tracks)))
    lines.append("offsets " + " ".join(map(str, ca.forward.offsets)))
    lines.append("table")
    lines += _table_lines(ca.forward)
    if include_inverse and ca.inverse is not None:
        lines.append("inverse-offsets " + " ".join(map(str, ca.inverse.offsets)))
        lines.append("inverse-table")
        lines += _table_lines(ca.inverse)
    return "\n".join(lines) + "\n"


def save_ca(ca: ReversibleCA, path, include_inverse: bool = True, comment: str = "") -> None:
    Path(path).write_text(format_ca(ca, include_inverse, comment), encoding="utf-8")
