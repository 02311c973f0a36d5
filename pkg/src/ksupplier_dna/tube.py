"""Strands, tubes and the test-tube operations of the Adleman-Lipton model.

Strands are modelled at the level of abstract 10-mer symbols rather than
nucleotides.  A :class:`Tube` is a multiset of strands (or duplexes) and is
treated as a value: every operation consumes its input tubes and hands back
fresh ones.  All operations go through a :class:`Lab`, which counts one
bio-step per call and writes one :class:`TraceEvent` per call.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable, Iterator, NamedTuple, Sequence

from .errors import DuplexPresent, OperationError, TubeConsumed

SYMBOL_MERS = 10
SENSE = "sense"
ANTISENSE = "antisense"
DEFAULT_MAX_STRANDS = 2_000_000
MAX_STRANDS_ENV = "KSUPPLIER_DNA_MAX_STRANDS"


def default_max_strands() -> int:
    raw = os.environ.get(MAX_STRANDS_ENV)
    return int(raw) if raw else DEFAULT_MAX_STRANDS


class Symbol(NamedTuple):
    """One 10-mer building block: ``#``, a label 0/1/2, ``X``, ``A_i`` or ``B_i``."""

    kind: str
    index: int = 0

    def __str__(self) -> str:
        if self.kind in ("#", "X"):
            return self.kind
        if self.kind == "L":
            return str(self.index)
        return f"{self.kind}{self.index}"


HASH = Symbol("#")
X = Symbol("X")


def label(value: int) -> Symbol:
    if value not in (0, 1, 2):
        raise ValueError(f"label must be 0, 1 or 2, got {value}")
    return Symbol("L", value)


def A(i: int) -> Symbol:
    return Symbol("A", i)


def B(i: int) -> Symbol:
    return Symbol("B", i)


def parse_symbols(text: str) -> tuple[Symbol, ...]:
    """Parse a whitespace separated symbol string such as ``"# A1 1 B1 #"``."""
    out = []
    for tok in text.split():
        if tok in ("#", "X"):
            out.append(Symbol(tok))
        elif tok in ("0", "1", "2"):
            out.append(label(int(tok)))
        elif tok[0] in "AB" and tok[1:].isdigit():
            out.append(Symbol(tok[0], int(tok[1:])))
        else:
            raise ValueError(f"unknown symbol {tok!r}")
    return tuple(out)


def format_symbols(symbols: Iterable[Symbol]) -> str:
    return " ".join(str(s) for s in symbols)


_TOKENS: dict[Symbol, str] = {}


def _token(sym: Symbol) -> str:
    tok = _TOKENS.get(sym)
    if tok is None:
        tok = _TOKENS[sym] = str(sym)
    return tok


def symbol_key(symbols: Iterable[Symbol]) -> str:
    # delimiter-wrapped tokens: substring test == contiguous subsequence test
    return "|" + "|".join(map(_token, symbols)) + "|"


@dataclass(frozen=True, order=True)
class Strand:
    symbols: tuple[Symbol, ...]
    polarity: str = SENSE

    def __post_init__(self):
        if not self.symbols:
            raise OperationError("a strand needs at least one symbol")
        if self.polarity not in (SENSE, ANTISENSE):
            raise OperationError(f"bad polarity {self.polarity!r}")

    @classmethod
    def parse(cls, text: str, polarity: str = SENSE) -> "Strand":
        return cls(parse_symbols(text), polarity)

    @cached_property
    def key(self) -> str:
        return symbol_key(self.symbols)

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = self.__dict__["_hash"] = hash((self.symbols, self.polarity))
            return h

    def contains(self, pattern: Sequence[Symbol]) -> bool:
        return symbol_key(pattern) in self.key

    def __str__(self) -> str:
        text = format_symbols(self.symbols)
        return text if self.polarity == SENSE else f"~({text})"


@dataclass(frozen=True, order=True)
class Duplex:
    """A sense assembly held together by the antisense splints that cover its junctions."""

    product: tuple[Symbol, ...]
    splints_used: tuple[tuple[Symbol, ...], ...] = ()

    def __str__(self) -> str:
        splints = ", ".join(format_symbols(s) for s in self.splints_used)
        return f"[{format_symbols(self.product)} | {splints}]"


def length_mers(strand: Strand) -> int:
    return SYMBOL_MERS * len(strand.symbols)


def _sort_key(member):
    if isinstance(member, Strand):
        return (0, member.polarity != SENSE, member.symbols)
    return (1, False, member.product, member.splints_used)


class Tube:
    """A named multiset of strands and duplexes.

    The contents are never mutated.  Operations mark their input tubes as
    consumed; touching a consumed tube raises :class:`TubeConsumed`.
    """

    def __init__(self, contents=None, name: str = "T"):
        counts = Counter()
        if contents is not None:
            items = contents.items() if hasattr(contents, "items") else ((m, 1) for m in contents)
            for member, count in items:
                if count < 0:
                    raise OperationError("negative strand count")
                if count:
                    counts[member] += count
        self._counts = counts
        self.name = name
        self._consumed = False

    @classmethod
    def of(cls, members: Iterable, name: str = "T") -> "Tube":
        return cls(list(members), name)

    @property
    def consumed(self) -> bool:
        return self._consumed

    def _check(self):
        if self._consumed:
            raise TubeConsumed(f"tube {self.name!r} was already consumed")

    def _take(self) -> Counter:
        self._check()
        self._consumed = True
        return self._counts

    @property
    def size(self) -> int:
        self._check()
        return sum(self._counts.values())

    @property
    def distinct(self) -> int:
        self._check()
        return len(self._counts)

    def count(self, member) -> int:
        self._check()
        return self._counts.get(member, 0)

    def items(self) -> list[tuple[object, int]]:
        """Members with counts in deterministic order."""
        self._check()
        return sorted(self._counts.items(), key=lambda kv: _sort_key(kv[0]))

    def members(self) -> list:
        return [m for m, _ in self.items()]

    def strands(self) -> Iterator[Strand]:
        """Each single strand, repeated by its count."""
        for member, count in self.items():
            if isinstance(member, Strand):
                for _ in range(count):
                    yield member

    def has_duplexes(self) -> bool:
        self._check()
        return any(isinstance(m, Duplex) for m in self._counts)

    def as_counter(self) -> Counter:
        self._check()
        return Counter(self._counts)

    def to_json(self) -> str:
        rows = []
        for member, count in self.items():
            if isinstance(member, Strand):
                rows.append({"strand": format_symbols(member.symbols), "polarity": member.polarity, "count": count})
            else:
                rows.append({
                    "duplex": format_symbols(member.product),
                    "splints": [format_symbols(s) for s in member.splints_used],
                    "count": count,
                })
        return json.dumps(rows, separators=(",", ":"))

    def __eq__(self, other):
        if not isinstance(other, Tube):
            return NotImplemented
        return self._counts == other._counts

    __hash__ = None

    def __repr__(self):
        state = "consumed" if self._consumed else f"size={sum(self._counts.values())}"
        return f"Tube({self.name!r}, {state})"


@dataclass(frozen=True)
class TraceEvent:
    step: int
    op: str
    tubes: tuple[str, ...]
    param: str
    matched: int
    residual: int

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "op": self.op,
            "tubes": list(self.tubes),
            "param": self.param,
            "matched": self.matched,
            "residual": self.residual,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


@dataclass
class Lab:
    """Executes tube operations, one bio-step each, and records the trace.

    ``sink`` is an optional text stream; every event is written to it as one
    JSON line in step order.  ``keep_events`` retains events in memory.
    """

    sink: IO[str] | None = None
    keep_events: bool = True
    max_strands: int = field(default_factory=default_max_strands)
    steps: int = 0
    events: list[TraceEvent] = field(default_factory=list)

    def _record(self, op: str, tubes, param: str = "", matched: int = 0, residual: int = 0):
        self.steps += 1
        event = TraceEvent(self.steps, op, tuple(tubes), param, matched, residual)
        if self.keep_events:
            self.events.append(event)
        if self.sink is not None:
            self.sink.write(event.to_json() + "\n")
        return event

    # -- the eight model operations -------------------------------------

    def merge(self, t1: Tube, t2: Tube, name: str | None = None) -> Tube:
        """Multiset union; both inputs are consumed and the result keeps ``t1``'s name."""
        if t1 is t2:
            raise OperationError("cannot merge a tube with itself")
        t1._check()
        t2._check()
        counts = t1._take() + t2._take()
        out = Tube(counts, name or t1.name)
        self._record("merge", (t1.name, t2.name), "", out.size, 0)
        return out

    def detect(self, t: Tube) -> bool:
        size = t.size
        self._record("detect", (t.name,), "", size, 0)
        return size > 0

    def separation(self, source: Tube, pattern: Sequence[Symbol], matched_name: str | None = None,
                   residual_name: str | None = None) -> tuple[Tube, Tube]:
        """Extract every sense strand containing ``pattern`` as a contiguous run.

        Antisense strands never match and stay in the residual.
        """
        pattern = tuple(pattern)
        if not pattern:
            raise OperationError("separation pattern must be nonempty")
        if source.has_duplexes():
            raise DuplexPresent(f"tube {source.name!r} holds duplexes; denature first")
        key = symbol_key(pattern)
        hit, miss = Counter(), Counter()
        for member, count in source._take().items():
            if member.polarity == SENSE and key in member.key:
                hit[member] = count
            else:
                miss[member] = count
        matched = Tube(hit, matched_name or f"{source.name}+")
        residual = Tube(miss, residual_name or source.name)
        self._record("separation", (source.name, matched.name), format_symbols(pattern),
                     matched.size, residual.size)
        return matched, residual

    def selection(self, source: Tube, length: int, matched_name: str | None = None,
                  residual_name: str | None = None) -> tuple[Tube, Tube]:
        """Extract every single strand whose length in mers equals ``length``."""
        if length <= 0 or length % SYMBOL_MERS:
            raise OperationError(f"selection length must be a positive multiple of {SYMBOL_MERS}")
        if source.has_duplexes():
            raise DuplexPresent(f"tube {source.name!r} holds duplexes; denature first")
        hit, miss = Counter(), Counter()
        for member, count in source._take().items():
            (hit if length_mers(member) == length else miss)[member] = count
        matched = Tube(hit, matched_name or f"{source.name}+")
        residual = Tube(miss, residual_name or source.name)
        self._record("selection", (source.name, matched.name), str(length), matched.size, residual.size)
        return matched, residual

    def annealing(self, t: Tube) -> Tube:
        """Return the tube of all maximal splint-covered assemblies of ``t``'s sense strands."""
        from .annealing import assemble

        fragments, splints = [], []
        for member in t._take():
            if isinstance(member, Duplex):
                raise DuplexPresent("annealing expects single strands")
            (fragments if member.polarity == SENSE else splints).append(member.symbols)
        duplexes = assemble(fragments, splints, cap=self.max_strands)
        out = Tube(duplexes, t.name)
        self._record("annealing", (t.name,), "", out.size, 0)
        return out

    def denaturation(self, t: Tube) -> Tube:
        counts = Counter()
        splint_strands = {}
        for member, count in t._take().items():
            if isinstance(member, Duplex):
                counts[Strand(member.product)] += count
                for splint in member.splints_used:
                    strand = splint_strands.get(splint)
                    if strand is None:
                        strand = splint_strands[splint] = Strand(splint, ANTISENSE)
                    counts[strand] += count
            else:
                counts[member] += count
        out = Tube(counts, t.name)
        self._record("denaturation", (t.name,), "", out.size, 0)
        return out

    def discard(self, t: Tube) -> None:
        size = sum(t._take().values())
        self._record("discard", (t.name,), "", size, 0)

    def append(self, t: Tube, fragment: Sequence[Symbol]) -> Tube:
        fragment = tuple(fragment)
        if not fragment:
            raise OperationError("append fragment must be nonempty")
        counts = Counter()
        for member, count in t._take().items():
            if isinstance(member, Duplex):
                raise DuplexPresent(f"tube {t.name!r} holds duplexes")
            if member.polarity != SENSE:
                raise OperationError("append only applies to sense strands")
            counts[Strand(member.symbols + fragment)] += count
        out = Tube(counts, t.name)
        self._record("append", (t.name,), format_symbols(fragment), out.size, 0)
        return out

    # -- plumbing -----------------------------------------------------------

    def amplify(self, t: Tube, copy_name: str | None = None) -> tuple[Tube, Tube]:
        counts = t._take()
        first = Tube(counts, t.name)
        second = Tube(counts, copy_name or f"{t.name}'")
        self._record("amplify", (first.name, second.name), "", first.size, 0)
        return first, second


def write_trace(events: Iterable[TraceEvent], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for event in events:
            fh.write(event.to_json() + "\n")
