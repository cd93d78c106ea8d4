"""Command-line interface.

Exit status: 0 when the result holds (stable, pass), 1 when it fails
(unstable, fail, skipped), 2 on usage or scale errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .coalitions import fmt_coalition
from .datasets import realworld_report
from .errors import ScaleError, StableVoteError
from .indices import INDEX_NAMES, IndexId, compute_index
from .notation import GameDocument, read_game
from .profiles import ALL_YES, PreferenceProfile, axiom_report, table1
from .rules import EXPLICIT_LIMIT, canonical_form, classify, symmetric_coalitions
from .stability import (Constitution, classify_constitution, is_minimal_self_stable,
                        is_minimal_stable, is_weak_minimal_stable, is_winning_stable, stable_set,
                        verify_corollaries, verify_theorem1, verify_theorem2)

SCHEMA = "stablevote.cli/1"
PREDICATES = {"ms": is_minimal_stable, "ws": is_winning_stable, "wms": is_weak_minimal_stable}


class Output:
    """Collects text lines and a structured payload; prints one of them."""

    def __init__(self, command: str, fmt: str):
        self.command = command
        self.fmt = fmt
        self.lines = []
        self.data = {}

    def line(self, text=""):
        self.lines.append(str(text))

    def emit(self, status: str):
        if self.fmt == "structured":
            doc = {"schema": SCHEMA, "command": self.command, "status": status, "result": self.data}
            print(json.dumps(doc, indent=2, sort_keys=True, default=str))
        else:
            print("\n".join(self.lines))


def _index(token: str, args) -> IndexId:
    idx = IndexId.parse(token)
    if idx.name == "veto_epsilon" and ":" not in token and args.epsilon is not None:
        idx = IndexId("veto_epsilon", Fraction(args.epsilon))
    return idx


def _game(text: str):
    doc = read_game(text)
    return doc, doc.to_rule()


def _labelled(doc: GameDocument, coalition) -> str:
    if doc.labels:
        return "{" + ", ".join(doc.labels[i - 1] for i in sorted(coalition)) + "}"
    return fmt_coalition(coalition)


def cmd_analyze(args, out: Output) -> int:
    doc, v = _game(args.game)
    ps = v.player_sets()
    cls = classify(v)
    out.data = {"game": doc.to_text(), "n": v.n, "kind": doc.kind,
                "swing": sorted(ps.swing), "null": sorted(ps.null_set),
                "veto": sorted(ps.veto), "oligarchic": sorted(ps.oligarchic),
                "is_veto": cls.is_veto, "is_oligarchic": cls.is_oligarchic}
    out.line(f"game        {doc.to_text()}")
    out.line(f"players     {v.n}")
    if v.n <= EXPLICIT_LIMIT:
        out.data["minimal_winning"] = v.mwc_string()
        out.line(f"minimal     {v.mwc_string()}")
    for name, key in (("swing", "swing"), ("null", "null_set"), ("veto", "veto"),
                      ("oligarchic", "oligarchic")):
        out.line(f"{name:<11} {_labelled(doc, getattr(ps, key))}")
    kind = "oligarchic" if cls.is_oligarchic else "veto" if cls.is_veto else "non-veto"
    out.line(f"class       {kind}")
    if v.n <= 7:
        out.data["canonical"] = canonical_form(v).mwc_string()
        out.line(f"canonical   {out.data['canonical']}")
    if v.n <= 10:
        sym = sorted(sorted(c) for c in symmetric_coalitions(v))
        out.data["symmetric_coalitions"] = sym
        out.line(f"symmetric   {len(sym)} coalitions")
    out.emit("ok")
    return 0


def cmd_index(args, out: Output) -> int:
    idx = _index(args.index, args)
    doc, v = _game(args.game)
    pv = compute_index(idx, v)
    out.data = {"index": str(idx), "game": doc.to_text(), "values": [str(x) for x in pv],
                "total": str(pv.total())}
    for i, x in enumerate(pv, start=1):
        label = doc.labels[i - 1] if doc.labels else str(i)
        out.line(f"{label:>6}  {x}  ({float(x):.6f})")
    out.emit("ok")
    return 0


def cmd_axioms(args, out: Output) -> int:
    idx = _index(args.index, args)
    rep = axiom_report(idx, args.n)
    out.data = rep.to_dict()
    out.line(f"{idx} on n={args.n}")
    for r in rep.results:
        out.line(f"  {r.axiom:<14} {r.verdict}")
        if r.witness is not None:
            out.line(f"    witness: {json.dumps(r.witness.to_dict())}")
        if r.note:
            out.line(f"    note: {r.note}")
    ok = rep.all_hold
    out.emit("holds" if ok else "fails")
    return 0 if ok else 1


def cmd_stability(args, out: Output) -> int:
    idx = _index(args.index, args)
    doc, v = _game(args.game)
    verdict = PREDICATES[args.notion](PreferenceProfile(idx, v.n), v)
    out.data = verdict.to_dict()
    out.line(f"{args.notion} under {idx}: {'stable' if verdict.stable else 'unstable'}")
    if verdict.witness:
        w = verdict.witness
        out.line(f"  challenger {w.challenger.mwc_string()} dominates for {fmt_coalition(w.coalition)}")
    out.emit("stable" if verdict.stable else "unstable")
    return 0 if verdict.stable else 1


def cmd_constitution(args, out: Output) -> int:
    idx = _index(args.index, args)
    _, vo = _game(args.ordinary)
    _, ve = _game(args.extraordinary)
    c = Constitution(vo, ve)
    cls = classify_constitution(c)
    verdict = is_minimal_self_stable(PreferenceProfile(idx, c.n), c)
    out.data = {"classification": str(cls), **verdict.to_dict()}
    out.line(f"classification  {cls}")
    out.line(f"mss under {idx}: {'stable' if verdict.stable else 'unstable'}")
    if verdict.witness:
        w = verdict.witness
        out.line(f"  challenger {w.challenger.mwc_string()} dominates the {w.tag} rule "
                 f"for {fmt_coalition(w.coalition)}")
    out.emit("stable" if verdict.stable else "unstable")
    return 0 if verdict.stable else 1


def cmd_census(args, out: Output) -> int:
    idx = _index(args.index, args)
    ss = stable_set(PreferenceProfile(idx, args.n), notion=args.notion)
    summary = ss.summary()
    out.data = {"index": str(idx), "n": args.n, "notion": args.notion,
                "summary": summary, "classes": ss.classes()}
    out.line(f"{args.notion} census of {idx} on n={args.n}: {summary['stable']} of {summary['rules']} stable")
    for cat in ("oligarchic", "veto_non_oligarchic", "non_veto"):
        out.line(f"  {cat:<20} {summary[cat]['stable']:>5} / {summary[cat]['total']}")
    if args.out:
        import os
        os.makedirs(args.out, exist_ok=True)
        safe = str(idx).replace(":", "_").replace("/", "_")
        path = os.path.join(args.out, f"census_{args.notion}_{safe}_n{args.n}.json")
        with open(path, "w") as fh:
            json.dump(out.data, fh, indent=2, sort_keys=True)
            fh.write("\n")
        out.line(f"wrote {path}")
    out.emit("ok")
    return 0


def _report_lines(out, rep):
    out.line(f"{rep.name} {rep.index} n={rep.n}: {rep.status}")
    for k, v in rep.counts.items():
        out.line(f"  {k:<24} {v}")
    if rep.note:
        out.line(f"  note: {rep.note}")
    for w in rep.witnesses[:5]:
        out.line(f"  witness: {json.dumps(w)}")


def cmd_verify(args, out: Output) -> int:
    target, rest = args.target, args.rest
    try:
        if target in ("theorem1", "theorem2"):
            token, n = rest
        elif target in ("corollaries", "table1"):
            (n,), token = rest, None
        else:
            raise ValueError
        n = int(n)
    except ValueError:
        raise UsageError(f"usage: verify {target} {'ID ' if target.startswith('theorem') else ''}N")
    reports = []
    if target == "theorem1":
        reports = [verify_theorem1(PreferenceProfile(_index(token, args), n))]
    elif target == "theorem2":
        reports = [verify_theorem2(PreferenceProfile(_index(token, args), n),
                                   sample_budget=args.budget, seed=args.seed)]
    elif target == "corollaries":
        eps = Fraction(args.epsilon) if args.epsilon is not None else None
        reports = verify_corollaries(n) if eps is None else verify_corollaries(n, eps=eps)
    if target == "table1":
        eps = Fraction(args.epsilon) if args.epsilon is not None else None
        rows = table1(n, eps)
        out.data = {"n": n, "rows": [r.to_dict() for r in rows]}
        ok = True
        for r in rows:
            if not r.implemented:
                out.line(f"{r.label:<32} not implemented")
                continue
            obs = " ".join(r.report.verdicts())
            mark = "ok" if r.matches else "MISMATCH (expected " + " ".join(r.expected) + ")"
            ok &= bool(r.matches)
            out.line(f"{r.label:<32} {obs:<18} {mark}")
        out.emit("pass" if ok else "fail")
        return 0 if ok else 1
    for rep in reports:
        _report_lines(out, rep)
        if args.out:
            out.line(f"  wrote {rep.write(args.out)}")
    out.data = {"reports": [r.to_dict() for r in reports]}
    ok = all(r.passed for r in reports)
    out.emit("pass" if ok else ("skipped" if any(r.status == "skipped" for r in reports) else "fail"))
    return 0 if ok else 1


def cmd_realworld(args, out: Output) -> int:
    rep = realworld_report(args.name)
    out.data = rep
    out.line(f"{rep['body']} ({rep['players']} players)")
    for tag in ("ordinary", "extraordinary"):
        out.line(f"  {tag}")
        for key in ("swing", "veto", "oligarchic"):
            s = rep[tag][key]
            out.line(f"    {key:<11} {s['size']:>4}  {', '.join(s['players'])}")
    out.line(f"  classification  {rep['classification']}")
    out.emit(rep["classification"])
    return 0


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--epsilon", help="epsilon for veto_epsilon, e.g. 1/1000000000")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled censuses")
    common.add_argument("--budget", type=int, default=100_000, help="pair budget for sampled censuses")
    common.add_argument("--out", help="directory for report files")

    parser = argparse.ArgumentParser(prog="stablevote", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    index_help = "index id, one of: " + ", ".join(INDEX_NAMES)

    p = sub.add_parser("analyze", parents=[common], help="player sets of a game")
    p.add_argument("game", help="game notation or a JSON game file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("index", parents=[common], help="power vector of a game")
    p.add_argument("index", help=index_help)
    p.add_argument("game")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("axioms", parents=[common], help="check the four axioms for an index")
    p.add_argument("index", help=index_help)
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("stability", parents=[common], help="stability of one rule")
    p.add_argument("notion", choices=tuple(PREDICATES))
    p.add_argument("index", help=index_help)
    p.add_argument("game")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("constitution", parents=[common], help="self-stability of a constitution")
    p.add_argument("index", help=index_help)
    p.add_argument("ordinary")
    p.add_argument("extraordinary")
    p.set_defaults(func=cmd_constitution)

    p = sub.add_parser("census", parents=[common], help="stable set of every rule on n players")
    p.add_argument("index", help=index_help)
    p.add_argument("n", type=int)
    p.add_argument("--notion", choices=tuple(PREDICATES), default="ms")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("verify", parents=[common], help="census check of a theorem or table",
                       description="verify theorem1 ID N | theorem2 ID N | corollaries N | table1 N")
    p.add_argument("target", choices=("theorem1", "theorem2", "corollaries", "table1"))
    p.add_argument("rest", nargs="+", metavar="ARG")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("realworld", parents=[common], help="classify a bundled or custom seat dataset")
    p.add_argument("name", help="un, china, us, or a dataset path")
    p.set_defaults(func=cmd_realworld)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.command, args.format)
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.exit(2, f"{parser.prog} {args.command}: {exc}\n")
    except (StableVoteError, ScaleError, ValueError) as exc:
        kind = "scale" if isinstance(exc, ScaleError) else "error"
        print(f"{parser.prog} {args.command}: {kind}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
