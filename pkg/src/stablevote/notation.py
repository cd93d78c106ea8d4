"""Text and JSON notation for voting rules.

Grammar::

    game   := mwc | wt | qr | and
    mwc    := "mwc@" INT ":{" coal ("|" coal)* "}"
    wt     := "wt:[" INT ";" INT ("," INT)* "]"
    qr     := "qr@" INT ":[" INT [";req=" [coal] ] "]"
    and    := "and(" game ("," game)* ")"
    coal   := INT ("," INT)*

Whitespace between tokens is ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .coalitions import members
from .errors import GameSyntaxError
from .rules import (IntersectionRule, QuotaRule, VotingRule, WeightedRule, from_minimal_winning,
                    from_weighted, intersection, quota_with_required)

SCHEMA = "stablevote.game/1"
KINDS = ("mwc", "weighted", "quota", "and")


@dataclass(frozen=True)
class GameDocument:
    """A rule as written, before construction.

    ``payload`` by kind:

    * ``mwc``: tuple of sorted player tuples
    * ``weighted``: ``(quota, weights)``
    * ``quota``: ``(count_quota, required)``
    * ``and``: tuple of component documents
    """

    n: int
    kind: str
    payload: tuple
    labels: Optional[tuple] = None

    def to_rule(self) -> VotingRule:
        if self.kind == "mwc":
            return from_minimal_winning(self.n, self.payload)
        if self.kind == "weighted":
            q, w = self.payload
            return from_weighted(q, w)
        if self.kind == "quota":
            k, req = self.payload
            return quota_with_required(self.n, k, req)
        return intersection(d.to_rule() for d in self.payload)

    def to_text(self) -> str:
        if self.kind == "mwc":
            body = "|".join(",".join(map(str, c)) for c in self.payload)
            return f"mwc@{self.n}:{{{body}}}"
        if self.kind == "weighted":
            q, w = self.payload
            return f"wt:[{q};{','.join(map(str, w))}]"
        if self.kind == "quota":
            k, req = self.payload
            return f"qr@{self.n}:[{k};req={','.join(map(str, req))}]"
        return "and(" + ",".join(d.to_text() for d in self.payload) + ")"

    def to_dict(self) -> dict:
        d = {"schema": SCHEMA, "n": self.n, "kind": self.kind}
        if self.kind == "mwc":
            d["minimal_winning"] = [list(c) for c in self.payload]
        elif self.kind == "weighted":
            d["quota"], d["weights"] = self.payload[0], list(self.payload[1])
        elif self.kind == "quota":
            d["count_quota"], d["required"] = self.payload[0], list(self.payload[1])
        else:
            d["components"] = [c.to_dict() for c in self.payload]
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GameDocument":
        try:
            kind = d["kind"]
            n = int(d["n"])
            if kind == "mwc":
                payload = tuple(tuple(sorted(int(p) for p in c)) for c in d["minimal_winning"])
            elif kind == "weighted":
                payload = (int(d["quota"]), tuple(int(w) for w in d["weights"]))
            elif kind == "quota":
                payload = (int(d["count_quota"]), tuple(sorted(int(p) for p in d.get("required", ()))))
            elif kind == "and":
                payload = tuple(cls.from_dict(c) for c in d["components"])
            else:
                raise GameSyntaxError(json.dumps(d), 0, f"kind in {KINDS}")
        except (KeyError, TypeError) as exc:
            raise GameSyntaxError(json.dumps(d, default=str), 0, f"field {exc}") from None
        labels = d.get("labels")
        return cls(n, kind, payload, tuple(labels) if labels is not None else None)

    @classmethod
    def from_rule(cls, v: VotingRule, labels=None) -> "GameDocument":
        labels = tuple(labels) if labels is not None else None
        if isinstance(v, WeightedRule):
            return cls(v.n, "weighted", (v.quota, v.weights), labels)
        if isinstance(v, QuotaRule):
            return cls(v.n, "quota", (v.count_quota, tuple(sorted(v.required))), labels)
        if isinstance(v, IntersectionRule):
            return cls(v.n, "and", tuple(cls.from_rule(c) for c in v.components), labels)
        payload = tuple(tuple(sorted(members(m))) for m in v.mwc_masks())
        return cls(v.n, "mwc", payload, labels)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, expected):
        raise GameSyntaxError(self.text, self.pos, expected)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, lit: str) -> bool:
        self.skip()
        return self.text.startswith(lit, self.pos)

    def expect(self, lit: str):
        if not self.peek(lit):
            self.fail(repr(lit))
        self.pos += len(lit)

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("an integer")
        return int(self.text[start:self.pos])

    def int_list(self) -> tuple:
        out = [self.integer()]
        while self.peek(","):
            self.pos += 1
            out.append(self.integer())
        return tuple(out)

    def game(self) -> GameDocument:
        if self.peek("mwc@"):
            self.pos += 4
            n = self.integer()
            self.expect(":")
            self.expect("{")
            coals = [tuple(sorted(self.int_list()))]
            while self.peek("|"):
                self.pos += 1
                coals.append(tuple(sorted(self.int_list())))
            self.expect("}")
            return GameDocument(n, "mwc", tuple(coals))
        if self.peek("wt:"):
            self.pos += 3
            self.expect("[")
            q = self.integer()
            self.expect(";")
            w = self.int_list()
            self.expect("]")
            return GameDocument(len(w), "weighted", (q, w))
        if self.peek("qr@"):
            self.pos += 3
            n = self.integer()
            self.expect(":")
            self.expect("[")
            k = self.integer()
            req = ()
            if self.peek(";"):
                self.pos += 1
                self.expect("req=")
                if not self.peek("]"):
                    req = tuple(sorted(self.int_list()))
            self.expect("]")
            return GameDocument(n, "quota", (k, req))
        if self.peek("and("):
            self.pos += 4
            parts = [self.game()]
            while self.peek(","):
                self.pos += 1
                parts.append(self.game())
            self.expect(")")
            return GameDocument(parts[0].n, "and", tuple(parts))
        self.fail("one of 'mwc@', 'wt:', 'qr@', 'and('")

    def document(self) -> GameDocument:
        doc = self.game()
        self.skip()
        if self.pos != len(self.text):
            self.fail("end of input")
        return doc


def parse_document(text: str) -> GameDocument:
    return _Parser(text).document()


def parse_game(text: str) -> VotingRule:
    """Build a rule from grammar text, e.g. ``"mwc@3:{1,2|1,3|2,3}"``."""
    return parse_document(text).to_rule()


def format_game(v: VotingRule) -> str:
    return GameDocument.from_rule(v).to_text()


def load_game_file(path) -> GameDocument:
    with open(path) as fh:
        return GameDocument.from_dict(json.load(fh))


def dump_game_file(doc: GameDocument, path) -> None:
    with open(path, "w") as fh:
        json.dump(doc.to_dict(), fh, indent=2)
        fh.write("\n")


def read_game(arg: str) -> GameDocument:
    """Grammar text, or the path of a JSON game file."""
    if arg.endswith(".json") and Path(arg).is_file():
        return load_game_file(arg)
    return parse_document(arg)
