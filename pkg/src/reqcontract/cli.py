"""Command-line front end.

Exit codes: 0 every requested check passed, 1 at least one check failed,
2 the input could not be read or parsed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from . import alignment as al
from .document import Document, DocumentError, load_text, views
from .entail import RpInstance, check_default_rp
from .formula import to_text
from .gate import requirement_status
from .network import EnactmentState, RetryPolicy, simulate, validate_network
from .roles import Role

OK, FAILED, BAD_INPUT = 0, 1, 2


@dataclass
class Report:
    command: str
    data: dict[str, Any]
    lines: list[str] = field(default_factory=list)
    exit_code: int = OK

    def as_json(self) -> str:
        body = {"command": self.command, "exit_code": self.exit_code, **self.data}
        return json.dumps(body, indent=2, sort_keys=True, default=_jsonable)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _model_text(model: Optional[dict[str, bool]]) -> str:
    if not model:
        return "(empty)"
    return " ".join(f"{k}={'T' if v else 'F'}" for k, v in sorted(model.items()))


def _ordered(xs, preferred) -> tuple:
    """Members of ``xs`` in document order, unknown ones after, sorted."""
    xs = set(xs)
    head = [f for f in preferred if f in xs]
    return tuple(head) + tuple(sorted(xs - set(head), key=to_text))


def cmd_check_rp(doc: Document, k_role: Role, s_role: Role, r_role: Role) -> Report:
    vs = views(doc)
    k = _ordered(vs[k_role].k, doc.contract.k)
    s = _ordered(vs[s_role].s or (), doc.s)
    r = _ordered(vs[r_role].r, doc.contract.r)

    v = check_default_rp(RpInstance(k, s, r))
    data = {
        "selection": {"k": k_role.value, "s": s_role.value, "r": r_role.value},
        "sets": {name: [to_text(f) for f in xs] for name, xs in (("k", k), ("s", s), ("r", r))},
        "entails": v.entails,
        "consistent": v.consistent,
        "passed": v.passed,
        "witness": v.witness,
        "failed_requirement": to_text(v.failed_requirement) if v.failed_requirement is not None else None,
        "notes": list(v.notes),
    }
    lines = [
        f"K ({k_role.value}): " + ", ".join(data["sets"]["k"]),
        f"S ({s_role.value}): " + ", ".join(data["sets"]["s"]),
        f"R ({r_role.value}): " + ", ".join(data["sets"]["r"]),
        f"entails:    {'yes' if v.entails else 'no'}",
        f"consistent: {'yes' if v.consistent else 'no'}",
    ]
    if not v.entails:
        lines.append(f"countermodel (falsifies {data['failed_requirement']}): {_model_text(v.witness)}")
    elif v.consistent:
        lines.append(f"model of K and S: {_model_text(v.witness)}")
    lines += [f"note: {n}" for n in v.notes]
    lines.append("PASS" if v.passed else "FAIL")
    return Report("check-rp", data, lines, OK if v.passed else FAILED)


def _enact(doc: Document, retry: RetryPolicy):
    return simulate(doc.network, doc.schedule or (), retry)


def _trace_data(trace) -> dict[str, Any]:
    return {
        "steps": [
            {
                "index": s.index,
                "event": s.event,
                "fired_count": len(s.state.fired),
                "verdict": s.verdict.value if s.verdict else None,
                "retry_count": s.state.retry_count,
            }
            for s in trace.steps
        ],
        "violation": None
        if trace.violation is None
        else {"index": trace.violation.index, "event": trace.violation.event, "reason": trace.violation.reason},
    }


def _trace_lines(trace) -> list[str]:
    lines = []
    for s in trace.steps:
        line = f"{s.index} {s.event} {len(s.state.fired)}"
        if s.verdict is not None:
            line += f" {s.verdict.value}"
        lines.append(line)
    if trace.violation is not None:
        lines.append(f"violation at {trace.violation.index}: {trace.violation.reason}")
    return lines


def cmd_gate(doc: Document, prop: Optional[str], retry: RetryPolicy) -> Report:
    trace = _enact(doc, retry)
    state: EnactmentState = trace.final_state
    props = [prop] if prop is not None else sorted(doc.contract.requested)
    statuses = [requirement_status(p, doc.contract, state) for p in props]
    data = {
        "enactment": {
            "fired": sorted(state.fired),
            "violation": _trace_data(trace)["violation"],
        },
        "propositions": [
            {
                "proposition": st.proposition,
                "granted": st.granted,
                "failed": [c.value for c in st.failed],
                "explanation": {c.value: why for c, why in st.explanation.items()},
            }
            for st in statuses
        ],
    }
    lines = []
    for st in statuses:
        verdict = "GRANTED" if st.granted else "DENIED(" + ",".join(c.value for c in st.failed) + ")"
        lines.append(f"{st.proposition} {verdict}")
    if not statuses:
        lines.append("no propositions requested")
    if trace.violation is not None:
        lines.append(f"note: schedule stopped at index {trace.violation.index}; gate uses the state reached before it")
    ok = all(st.granted for st in statuses)
    return Report("gate", data, lines, OK if ok else FAILED)


def cmd_enact(doc: Document, retry: RetryPolicy) -> Report:
    diags = validate_network(doc.network)
    data: dict[str, Any] = {"diagnostics": [{"code": d.code, "message": d.message} for d in diags]}
    if diags:
        lines = [f"network: {d.code}: {d.message}" for d in diags]
        data.update(steps=[], violation=None, final=None)
        return Report("enact", data, lines, FAILED)
    trace = _enact(doc, retry)
    final = trace.final_state
    data.update(_trace_data(trace))
    data["final"] = {
        "fired": sorted(final.fired),
        "verdict": final.verdict.value if final.verdict else None,
        "retry_count": final.retry_count,
    }
    lines = _trace_lines(trace)
    if doc.schedule is None:
        lines.append("no schedule given")
    failed = trace.violation is not None or (final.verdict is not None and final.verdict.value == "fail")
    if final.verdict is not None and final.verdict.value == "fail" and trace.violation is None:
        lines.append("validation failed and no retry is left")
    return Report("enact", data, lines, FAILED if failed else OK)


def cmd_align(doc: Document, coupled: bool) -> Report:
    if doc.economics is None:
        raise DocumentError("the document has no economics section", "economics")
    p = doc.economics
    via = al.viability(p)
    budget = al.budget_check(p)
    roles: dict[str, Any] = {}
    lines = []
    for role in Role:
        x = p[role]
        entry: dict[str, Any] = {
            "eb": x.eb,
            "ec": x.ec,
            "expected_value": al.expected_value(p, role),
            "viable": via.per_role[role],
        }
        line = (
            f"{role.value}: EB={x.eb} EC={x.ec} E={entry['expected_value']} "
            + ("viable" if entry["viable"] else "NOT viable")
        )
        d = doc.deltas.get(role)
        if d is not None:
            case = al.interest_case(d)
            delta: dict[str, Any] = {"db": d.db, "dc": d.dc, "dv": case.dv, "case": case.label.value}
            line += f"; dB={d.db} dC={d.dc} dV={case.dv} case {case.label.value}"
            if d.dc != 0:
                m = al.marginal_situation(d)
                delta.update(ratio=m.ratio, situation=m.situation.value, note=m.note or None)
                line += f" ratio={m.ratio} {m.situation.value}"
                if m.note:
                    line += f" ({m.note})"
            else:
                delta.update(ratio=None, situation=None, note="marginal ratio undefined: dC is zero")
            entry["delta"] = delta
        roles[role.value] = entry
        lines.append(line)

    lines.append(("entry feasible" if via.feasible else "entry NOT feasible") + " (every role must be viable)")
    lines.append(f"budget: {'pass' if budget.passed else 'FAIL'}, slack {budget.slack}")

    conflict = None
    if all(r in doc.deltas for r in Role) and all(doc.deltas[r].dc != 0 for r in Role):
        try:
            rep = al.conflict_scan(doc.deltas, coupled)
        except al.AlignmentError as exc:
            conflict = {"skipped": str(exc)}
            lines.append(f"conflict scan skipped: {exc}")
        else:
            conflict = {
                "ratios": {r.value: q for r, q in rep.ratios.items()},
                "coupled": coupled,
                "coupled_requester_ratio": rep.coupled_requester_ratio,
                "conflict": rep.conflict,
                "explanation": rep.explanation,
            }
            if rep.conflict:
                lines.append("CONFLICT: " + rep.explanation)
            else:
                lines.append("conflict scan: " + rep.explanation)
    elif doc.deltas:
        conflict = {"skipped": "needs deltas with nonzero dC for all three roles"}
        lines.append("conflict scan skipped: needs deltas with nonzero dC for all three roles")

    lines += [f"assumption: {a}" for a in al.ASSUMPTIONS]
    data = {
        "roles": roles,
        "feasible": via.feasible,
        "budget": {"passed": budget.passed, "slack": budget.slack},
        "conflict": conflict,
        "assumptions": list(al.ASSUMPTIONS),
    }
    has_conflict = bool(conflict and conflict.get("conflict"))
    ok = via.feasible and budget.passed and not has_conflict
    return Report("align", data, lines, OK if ok else FAILED)


def cmd_validate(doc: Document) -> Report:
    diags = validate_network(doc.network)
    data = {
        "schema": "ok",
        "formulas": "ok",
        "diagnostics": [{"code": d.code, "message": d.message} for d in diags],
    }
    lines = ["schema: ok", "formulas: ok"]
    lines += [f"network: {d.code}: {d.message}" for d in diags] or ["network: ok"]
    return Report("validate", data, lines, FAILED if diags else OK)


def _role(text: str) -> Role:
    try:
        return Role(text.lower())
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown role {text!r}") from None


def _cap(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("retry cap must be an integer") from None
    if n < 0:
        raise argparse.ArgumentTypeError("retry cap must be nonnegative")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="reqcontract", description="Analyse a Requirements Contract document.", parents=[common]
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        p = sub.add_parser(name, help=help, parents=[common])
        p.add_argument("file", help="contract document (JSON), or - for stdin")
        return p

    add("validate", help="schema, formula and network checks")
    p = add("check-rp", help="entailment and consistency of K, S against R")
    p.add_argument("--k", type=_role, default=Role.REQUESTER, help="role whose K to use (default requester)")
    p.add_argument("--s", type=_role, default=Role.MAKER, help="role whose S to use (default maker)")
    p.add_argument("--r", type=_role, default=Role.REQUESTER, help="role whose R to use (default requester)")
    p = add("gate", help="requirement status of requested propositions")
    p.add_argument("--prop", help="check a single proposition")
    p.add_argument("--retry", type=_cap, default=3, help="retry cap after failed validation (0 = off)")
    p = add("enact", help="simulate the schedule over the network")
    p.add_argument("--retry", type=_cap, default=3, help="retry cap after failed validation (0 = off)")
    p = add("align", help="expected values, viability, budget, interest cases, conflicts")
    p.add_argument("--coupled", action="store_true", help="tie the Requester's cost change to Maker+Evaluator benefit")
    return parser


def run(argv: Optional[list[str]] = None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    fmt = getattr(args, "format", "text")
    quiet = getattr(args, "quiet", False)

    try:
        if args.file == "-":
            text = stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        doc = load_text(text)
        if args.command == "validate":
            report = cmd_validate(doc)
        elif args.command == "check-rp":
            report = cmd_check_rp(doc, args.k, args.s, args.r)
        elif args.command == "gate":
            report = cmd_gate(doc, args.prop, RetryPolicy.from_cap(args.retry))
        elif args.command == "enact":
            report = cmd_enact(doc, RetryPolicy.from_cap(args.retry))
        else:
            report = cmd_align(doc, args.coupled)
    except (OSError, UnicodeDecodeError, DocumentError) as exc:
        location = getattr(exc, "location", "")
        reason = getattr(exc, "reason", str(exc))
        if fmt == "json" and not quiet:
            body = {"command": args.command, "exit_code": BAD_INPUT, "error": {"location": location, "message": reason}}
            print(json.dumps(body, indent=2, sort_keys=True), file=stdout)
        print(f"error: {exc}", file=stderr)
        return BAD_INPUT

    if not quiet:
        if fmt == "json":
            print(report.as_json(), file=stdout)
        else:
            print("\n".join(report.lines), file=stdout)
    return report.exit_code


def main() -> None:
    sys.exit(run())
