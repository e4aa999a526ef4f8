"""Prenex-CNF formulas: variable table, clause store with constant folding,
QDIMACS reader/writer and size statistics."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Optional, Union

Descriptor = tuple  # (KIND, *params)
Lit = Union[int, bool]  # bool literals come from folded descriptors


class Quant(str, enum.Enum):
    EXISTS = "e"
    FORALL = "a"


EXISTS = Quant.EXISTS
FORALL = Quant.FORALL


class FormulaError(ValueError):
    pass


class QdimacsError(FormulaError):
    pass


class VarTable:
    """Injective map from semantic descriptors to contiguous ids 1..n."""

    def __init__(self):
        self._ids: dict[Hashable, int] = {}
        self._desc: list[Hashable] = [None]

    def __len__(self) -> int:
        return len(self._desc) - 1

    def __contains__(self, desc) -> bool:
        return desc in self._ids

    def __getitem__(self, desc) -> int:
        return self._ids[desc]

    def fresh(self, desc) -> int:
        if desc in self._ids:
            raise FormulaError(f"descriptor {desc!r} already has a variable")
        self._desc.append(desc)
        self._ids[desc] = len(self._desc) - 1
        return self._ids[desc]

    def get(self, desc, default=None):
        return self._ids.get(desc, default)

    def describe(self, var: int):
        return self._desc[var]

    def items(self):
        return ((d, i) for i, d in enumerate(self._desc) if i)


def fresh_var(table: VarTable, desc) -> int:
    return table.fresh(desc)


def neg(lit: Lit) -> Lit:
    if isinstance(lit, bool):
        return not lit
    return -lit


class QbfFormula:
    """A closed prenex CNF under construction.

    Variables are allocated block by block; clause literals are either signed
    ids or Python booleans produced by folded descriptors (see ``fix``).
    """

    def __init__(self, table: Optional[VarTable] = None):
        self.table = table if table is not None else VarTable()
        self.prefix: list[tuple[Quant, list[int]]] = []
        self.clauses: list[tuple[int, ...]] = []
        self.constant: Optional[bool] = None
        self.fixed: dict = {}
        self.notes: list[str] = []

    @classmethod
    def constant_formula(cls, value: bool, note: str = "") -> "QbfFormula":
        f = cls()
        f.constant = value
        if note:
            f.notes.append(note)
        return f

    @property
    def num_vars(self) -> int:
        return len(self.table)

    # -- variables ---------------------------------------------------------
    def fix(self, desc, value: bool) -> None:
        """Fold ``desc`` to a constant; it will never receive a variable."""
        if desc in self.table:
            raise FormulaError(f"{desc!r} already allocated, cannot fold it")
        self.fixed[desc] = bool(value)

    def block(self, quant: Quant, descs: Iterable) -> list[int]:
        ids = []
        for d in descs:
            if d in self.fixed:
                raise FormulaError(f"{d!r} is folded to a constant")
            ids.append(self.table.fresh(d))
        if ids:
            self.prefix.append((Quant(quant), ids))
        return ids

    def lit(self, desc, positive: bool = True) -> Lit:
        if desc in self.fixed:
            value = self.fixed[desc]
            return value if positive else not value
        try:
            v = self.table[desc]
        except KeyError:
            raise FormulaError(f"no variable for {desc!r}") from None
        return v if positive else -v

    # -- clauses -----------------------------------------------------------
    def add_clause(self, lits: Iterable[Lit]) -> bool:
        """Add a simplified clause; returns False if it was dropped."""
        if self.constant is False:
            return False
        out: list[int] = []
        seen: set[int] = set()
        n = self.num_vars
        for l in lits:
            if l is True:
                return False
            if l is False:
                continue
            if l == 0 or abs(l) > n:
                raise FormulaError(f"literal {l} refers to an unquantified variable")
            if -l in seen:
                return False
            if l not in seen:
                seen.add(l)
                out.append(l)
        if not out:
            self.constant = False
            self.notes.append("empty clause derived")
            return False
        self.clauses.append(tuple(out))
        return True

    # -- views -------------------------------------------------------------
    def merged_prefix(self) -> list[tuple[Quant, list[int]]]:
        out: list[tuple[Quant, list[int]]] = []
        for q, ids in self.prefix:
            if not ids:
                continue
            if out and out[-1][0] is q:
                out[-1][1].extend(ids)
            else:
                out.append((q, list(ids)))
        return out

    def quantifier_of(self) -> dict[int, Quant]:
        return {v: q for q, ids in self.prefix for v in ids}

    def signature(self):
        """Comparable content (constant, vars, merged prefix, clauses)."""
        if self.constant is not None:
            return ("constant", self.constant)
        return (
            self.num_vars,
            tuple((q.value, tuple(ids)) for q, ids in self.merged_prefix()),
            tuple(self.clauses),
        )

    def check_closed(self) -> None:
        seen: dict[int, int] = {}
        for q, ids in self.prefix:
            if not ids:
                raise FormulaError("empty quantifier block")
            for v in ids:
                if v in seen:
                    raise FormulaError(f"variable {v} quantified twice")
                seen[v] = 1
        for c in self.clauses:
            vs = set()
            for l in c:
                if abs(l) not in seen:
                    raise FormulaError(f"variable {abs(l)} is free")
                if -l in c:
                    raise FormulaError("complementary literals in a clause")
                if l in vs:
                    raise FormulaError("duplicate literal in a clause")
                vs.add(l)


def fold_constants(f: QbfFormula, fixed: dict) -> None:
    for desc, value in fixed.items():
        f.fix(desc, value)


def add_clause(f: QbfFormula, lits: Iterable[Lit]) -> bool:
    return f.add_clause(lits)


# ---------------------------------------------------------------------------
# QDIMACS

_CONST_TRUE = "c constant true\np cnf 1 1\ne 1 0\n1 0\n"
_CONST_FALSE = "c constant false\np cnf 1 2\ne 1 0\n1 0\n-1 0\n"


def _descriptor_text(desc) -> str:
    if isinstance(desc, enum.Enum):
        return str(desc.value)
    if isinstance(desc, (tuple, frozenset)):
        return " ".join(_descriptor_text(x) for x in desc)
    return str(desc).replace("\n", " ")


def write_qdimacs(f: QbfFormula, comments: bool = False) -> str:
    if f.constant is True:
        return _CONST_TRUE
    if f.constant is False:
        return _CONST_FALSE
    lines = []
    if comments:
        for note in f.notes:
            lines.append(f"c {note}")
        for desc, v in f.table.items():
            lines.append(f"c var {v} {_descriptor_text(desc)}")
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    for q, ids in f.merged_prefix():
        lines.append(q.value + " " + " ".join(map(str, ids)) + " 0")
    for c in f.clauses:
        lines.append(" ".join(map(str, c)) + " 0")
    return "\n".join(lines) + "\n"


def parse_qdimacs(text: str) -> QbfFormula:
    header = None
    blocks: list[tuple[Quant, list[int]]] = []
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    constant = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            if header is None and line == "c constant true":
                constant = True
            elif header is None and line == "c constant false":
                constant = False
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise QdimacsError(f"line {lineno}: bad problem line")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise QdimacsError(f"line {lineno}: bad problem line") from None
            continue
        if header is None:
            raise QdimacsError(f"line {lineno}: content before the problem line")
        tokens = line.split()
        if tokens[0] in ("e", "a"):
            if clauses or pending:
                raise QdimacsError(f"line {lineno}: quantifier line after clauses")
            try:
                ids = [int(t) for t in tokens[1:]]
            except ValueError:
                raise QdimacsError(f"line {lineno}: bad quantifier line") from None
            if not ids or ids[-1] != 0:
                raise QdimacsError(f"line {lineno}: missing terminating 0")
            ids = ids[:-1]
            if not ids or any(v <= 0 for v in ids):
                raise QdimacsError(f"line {lineno}: empty or malformed quantifier block")
            blocks.append((Quant(tokens[0]), ids))
            continue
        try:
            lits = [int(t) for t in tokens]
        except ValueError:
            raise QdimacsError(f"line {lineno}: bad clause line") from None
        for l in lits:
            if l == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(l)
    if header is None:
        raise QdimacsError("missing problem line")
    if pending:
        raise QdimacsError("missing terminating 0 after the last clause")
    num_vars, num_clauses = header
    if len(clauses) != num_clauses:
        raise QdimacsError(f"header announces {num_clauses} clauses, found {len(clauses)}")
    if constant is not None:
        return QbfFormula.constant_formula(constant)
    quantified: set[int] = set()
    for _, ids in blocks:
        for v in ids:
            if v > num_vars:
                raise QdimacsError(f"variable {v} exceeds the header count {num_vars}")
            if v in quantified:
                raise QdimacsError(f"variable {v} quantified twice")
            quantified.add(v)
    f = QbfFormula()
    for v in range(1, num_vars + 1):
        f.table.fresh(("VAR", v))
    f.prefix = [(q, list(ids)) for q, ids in blocks]
    for c in clauses:
        for l in c:
            if abs(l) not in quantified:
                raise QdimacsError(f"literal {l} refers to an unquantified variable")
        if len(set(c)) != len(c) or any(-l in c for l in c):
            raise QdimacsError("clause with repeated or complementary literals")
        if not c:
            raise QdimacsError("empty clause")
    f.clauses = list(clauses)
    return f


# ---------------------------------------------------------------------------
# statistics

@dataclass(frozen=True)
class FormulaStats:
    blocks: int
    universals: int
    existentials: int
    clauses: int
    literals: int
    lengths: dict

    def as_dict(self) -> dict:
        return {
            "qb": self.blocks,
            "forall": self.universals,
            "exists": self.existentials,
            "clauses": self.clauses,
            "literals": self.literals,
            "lengths": dict(sorted(self.lengths.items())),
        }


def stats(f: QbfFormula) -> FormulaStats:
    if f.constant is not None:
        f = parse_qdimacs(write_qdimacs(f).replace("c constant", "c folded"))
    merged = f.merged_prefix()
    n_all = sum(len(ids) for q, ids in merged if q is FORALL)
    n_ex = sum(len(ids) for q, ids in merged if q is EXISTS)
    lengths = Counter(len(c) for c in f.clauses)
    return FormulaStats(
        blocks=len(merged),
        universals=n_all,
        existentials=n_ex,
        clauses=len(f.clauses),
        literals=sum(len(c) for c in f.clauses),
        lengths=dict(lengths),
    )
