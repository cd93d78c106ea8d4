"""Seat datasets and the party-level constitution models built from them.

A dataset file holds two comma-separated blocks separated by a blank line.
Lines starting with ``#`` are notes; a ``# name: ...`` note names the body.

Seat block, header ``party,chamber,seats[,members]``.  ``members`` (default 1)
splits the row into that many players sharing the seats equally, so a bloc of
individual states can be written as one row.

Quota block, header ``chamber,size,ordinary,extraordinary[,required]``.
Quota tokens: ``majority`` (more than half of ``size``), a fraction ``a/b``
(at least ``a/b`` of ``size``, rounded up), a plain seat count, or ``-`` when
the chamber takes no part in that rule.  ``required`` lists players
(``;``-separated) every extraordinary winning coalition must contain.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import MalformedDataset, QuotaUnreachable
from .rules import VotingRule, from_weighted, intersection, quota_with_required
from .stability import Constitution, classify_constitution

BUNDLED = ("un", "china", "us")


@dataclass(frozen=True)
class SeatRow:
    party: str
    chamber: str
    seats: int
    members: int = 1


@dataclass(frozen=True)
class QuotaSpec:
    chamber: str
    size: int
    ordinary: Optional[int]
    extraordinary: Optional[int]
    required: tuple = ()


@dataclass
class SeatDataset:
    name: str
    rows: list
    quotas: list
    notes: list = field(default_factory=list)

    @property
    def players(self) -> list:
        """Player labels in order of first appearance."""
        out = []
        for row in self.rows:
            labels = [row.party] if row.members == 1 else \
                [f"{row.party}-{k}" for k in range(1, row.members + 1)]
            for lab in labels:
                if lab not in out:
                    out.append(lab)
        return out

    def seats(self, chamber: str) -> list:
        players = self.players
        pos = {p: i for i, p in enumerate(players)}
        w = [0] * len(players)
        for row in self.rows:
            if row.chamber != chamber:
                continue
            if row.members == 1:
                w[pos[row.party]] += row.seats
            else:
                for k in range(1, row.members + 1):
                    w[pos[f"{row.party}-{k}"]] += row.seats // row.members
        return w


def _quota(token: str, size: int, where: str) -> Optional[int]:
    token = token.strip()
    if token == "-":
        return None
    if token == "majority":
        return size // 2 + 1
    try:
        if "/" in token:
            return math.ceil(Fraction(token) * size)
        return int(token)
    except (ValueError, ZeroDivisionError):
        raise MalformedDataset(f"{where}: bad quota {token!r}") from None


def _int(text: str, where: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise MalformedDataset(f"{where}: expected an integer, got {text!r}") from None
    if value < 0:
        raise MalformedDataset(f"{where}: negative count {value}")
    return value


def parse_seat_dataset(text: str, default_name: str = "dataset") -> SeatDataset:
    notes, blocks, current = [], [], []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            notes.append(stripped.lstrip("#").strip())
        elif not stripped:
            if current:
                blocks.append(current)
                current = []
        else:
            current.append(stripped)
    if current:
        blocks.append(current)
    if len(blocks) != 2:
        raise MalformedDataset(f"expected a seat block and a quota block, found {len(blocks)} blocks")
    name = next((n.split(":", 1)[1].strip() for n in notes if n.lower().startswith("name:")), default_name)

    seat_reader = csv.DictReader(io.StringIO("\n".join(blocks[0])))
    if seat_reader.fieldnames is None or seat_reader.fieldnames[:3] != ["party", "chamber", "seats"]:
        raise MalformedDataset("seat block header must start with party,chamber,seats")
    rows = []
    for k, rec in enumerate(seat_reader, start=2):
        where = f"seat row {k}"
        members = _int(rec.get("members") or "1", where)
        seats = _int(rec["seats"] or "", where)
        if members == 0 or seats % members:
            raise MalformedDataset(f"{where}: {seats} seats cannot be split over {members} members")
        rows.append(SeatRow(rec["party"].strip(), rec["chamber"].strip(), seats, members))

    quota_reader = csv.DictReader(io.StringIO("\n".join(blocks[1])))
    if quota_reader.fieldnames is None or quota_reader.fieldnames[:4] != \
            ["chamber", "size", "ordinary", "extraordinary"]:
        raise MalformedDataset("quota block header must start with chamber,size,ordinary,extraordinary")
    quotas = []
    for k, rec in enumerate(quota_reader, start=2):
        where = f"quota row {k}"
        size = _int(rec["size"] or "", where)
        req = tuple(p.strip() for p in (rec.get("required") or "").split(";") if p.strip())
        quotas.append(QuotaSpec(rec["chamber"].strip(), size,
                                _quota(rec["ordinary"] or "", size, where),
                                _quota(rec["extraordinary"] or "", size, where), req))
    ds = SeatDataset(name, rows, quotas, notes)
    _validate(ds)
    return ds


def _validate(ds: SeatDataset):
    chambers = {q.chamber for q in ds.quotas}
    for row in ds.rows:
        if row.chamber not in chambers:
            raise MalformedDataset(f"chamber {row.chamber!r} has no quota row")
    players = set(ds.players)
    for q in ds.quotas:
        total = sum(r.seats for r in ds.rows if r.chamber == q.chamber)
        if total > q.size:
            raise MalformedDataset(f"{q.chamber}: {total} seats exceed chamber size {q.size}")
        for quota in (q.ordinary, q.extraordinary):
            if quota is not None and not 0 < quota <= q.size:
                raise MalformedDataset(f"{q.chamber}: quota {quota} outside 1..{q.size}")
        missing = [p for p in q.required if p not in players]
        if missing:
            raise MalformedDataset(f"{q.chamber}: unknown required players {missing}")
    if all(q.ordinary is None for q in ds.quotas) or all(q.extraordinary is None for q in ds.quotas):
        raise MalformedDataset("both rules need at least one participating chamber")


def load_seat_dataset(path) -> SeatDataset:
    """Read a dataset file, or a bundled dataset by name (``un``, ``china``, ``us``)."""
    if str(path) in BUNDLED:
        text = resources.files("stablevote").joinpath("data").joinpath(f"{path}.csv").read_text()
        return parse_seat_dataset(text, str(path))
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise MalformedDataset(f"cannot read {path}: {exc}") from None
    return parse_seat_dataset(text, p.stem)


def _chamber_rule(ds: SeatDataset, q: QuotaSpec, quota: int, required: tuple) -> VotingRule:
    weights = ds.seats(q.chamber)
    n = len(weights)
    if quota > sum(weights):
        raise QuotaUnreachable(f"{q.chamber}: quota {quota} exceeds the {sum(weights)} seats held")
    players = ds.players
    req = [players.index(p) + 1 for p in required]
    positive = {w for w in weights if w}
    if len(positive) == 1 and min(weights) > 0:
        # one seat each (up to scale): a head-count rule stays symbolic at any size
        return quota_with_required(n, math.ceil(quota / positive.pop()), req)
    rule = from_weighted(quota, weights)
    if req:
        rule = intersection([rule, quota_with_required(n, len(req), req)])
    return rule


def build_party_model(ds: SeatDataset) -> Constitution:
    """Per chamber a weighted rule over the players; chambers combine by intersection."""
    ordinary = [_chamber_rule(ds, q, q.ordinary, ()) for q in ds.quotas if q.ordinary is not None]
    extra = [_chamber_rule(ds, q, q.extraordinary, q.required)
             for q in ds.quotas if q.extraordinary is not None]
    return Constitution(intersection(ordinary), intersection(extra))


def _labels(players: list, coalition) -> list:
    return [players[i - 1] for i in sorted(coalition)]


def _summarize(players, coalition, limit=12):
    labs = _labels(players, coalition)
    return {"size": len(labs), "players": labs if len(labs) <= limit else labs[:limit] + ["..."]}


def realworld_report(name_or_path) -> dict:
    ds = load_seat_dataset(name_or_path)
    c = build_party_model(ds)
    players = ds.players
    out = {"body": ds.name, "players": len(players)}
    for tag, rule in (("ordinary", c.ordinary), ("extraordinary", c.extraordinary)):
        ps = rule.player_sets()
        out[tag] = {k: _summarize(players, getattr(ps, k))
                    for k in ("swing", "null_set", "veto", "oligarchic")}
    out["classification"] = str(classify_constitution(c))
    return out
