"""Loading the JSON contract document.

A document holds one whole analysis: the contract clauses and role bindings,
the Requester's propositions, the build's specification, economics,
transfer maps, an optional enactment schedule and an optional custom
network (the canonical one is used otherwise).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

import jsonschema

from .alignment import AlignmentError, Delta, EconProfile, Expectation, to_rational
from .formula import Atom, Formula
from .gate import ContractDoc, ContractError, Party
from .network import EventNode, Link, Network, Verdict, canonical_network
from .parse import FormulaSyntaxError, parse_formula
from .roles import Obligation, Right, Role
from .transfer import IDENTITY, ArtifactSets, TransferError, TransferMap, apply_transfer, with_specification

ROLE_NAMES = [r.value for r in Role]

_formulas = {"type": "array", "items": {"type": "string"}}
_rational = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$"},
    ]
}
_party = {
    "oneOf": [
        {"type": "string", "minLength": 1},
        {
            "type": "object",
            "properties": {"id": {"type": "string", "minLength": 1}, "name": {"type": "string"}},
            "required": ["id"],
            "additionalProperties": False,
        },
        {"type": "null"},
    ]
}
_role_econ = {
    "type": "object",
    "properties": {"eb": _rational, "ec": _rational, "db": _rational, "dc": _rational},
    "required": ["eb", "ec"],
    "dependentRequired": {"db": ["dc"], "dc": ["db"]},
    "additionalProperties": False,
}

SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "contract": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "rights": {"type": "array", "items": {"enum": [r.value for r in Right]}, "uniqueItems": True},
                "obligations": {
                    "type": "array",
                    "items": {"enum": [o.value for o in Obligation]},
                    "uniqueItems": True,
                },
                "bindings": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {name: _party for name in ROLE_NAMES},
                },
                "applicability": {"enum": ["applicable", "terminated"]},
            },
        },
        "propositions": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kR": _formulas,
                "rR": _formulas,
                "s": _formulas,
                "requested": {
                    "type": "array",
                    "items": {
                        "oneOf": [
                            {"type": "string"},
                            {
                                "type": "object",
                                "properties": {"atom": {"type": "string"}, "until": {"type": "string"}},
                                "required": ["atom"],
                                "additionalProperties": False,
                            },
                        ]
                    },
                },
            },
        },
        "economics": {
            "type": "object",
            "additionalProperties": False,
            "properties": {name: _role_econ for name in ROLE_NAMES},
        },
        "transfers": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "properties": {
                    "from-role": {"enum": ROLE_NAMES},
                    "to-role": {"enum": ROLE_NAMES},
                    "drops": _formulas,
                    "substitutions": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "properties": {"from": {"type": "string"}, "to": {"type": "string"}},
                            "required": ["from", "to"],
                            "additionalProperties": False,
                        },
                    },
                    "additions": _formulas,
                    "product": {"type": "string"},
                },
                "required": ["from-role", "to-role"],
            },
        },
        "schedule": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "properties": {"event": {"type": "string"}, "verdict": {"enum": ["pass", "fail"]}},
                "required": ["event"],
            },
        },
        "network": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "events": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "properties": {
                            "id": {"type": "string"},
                            "kind": {"enum": ["expectation", "accept", "exercise", "discharge", "produce", "outcome"]},
                            "subject": {"type": "string"},
                            "role": {"enum": ROLE_NAMES},
                            "phase": {"type": "string"},
                        },
                        "required": ["id", "kind", "role"],
                    },
                },
                "links": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "properties": {
                            "source": {"type": "string"},
                            "target": {"type": "string"},
                            "on_pass": {"type": "boolean"},
                        },
                        "required": ["source", "target"],
                    },
                },
                "validation_event": {"type": "string"},
                "retry_event": {"type": "string"},
            },
            "required": ["events", "links"],
        },
    },
}


class DocumentError(ValueError):
    def __init__(self, message: str, location: str = ""):
        self.location = location
        self.reason = message
        super().__init__(f"{location}: {message}" if location else message)


@dataclass(frozen=True)
class TransferSpec:
    source: Role
    target: Role
    mapping: TransferMap
    product: Optional[str] = None


@dataclass(frozen=True)
class Document:
    contract: ContractDoc
    s: tuple[Formula, ...] = ()
    economics: Optional[EconProfile] = None
    deltas: dict[Role, Delta] = field(default_factory=dict)
    transfers: tuple[TransferSpec, ...] = ()
    schedule: Optional[tuple[tuple[str, Optional[Verdict]], ...]] = None
    network: Network = field(default_factory=canonical_network)
    raw: dict = field(default_factory=dict, compare=False, repr=False)


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<document>"


def _formula(text: str, where: str) -> Formula:
    try:
        return parse_formula(text)
    except FormulaSyntaxError as exc:
        raise DocumentError(str(exc), where) from None


def _formula_list(section: dict, key: str, where: str) -> tuple[Formula, ...]:
    return tuple(_formula(t, f"{where}.{key}[{i}]") for i, t in enumerate(section.get(key, [])))


def _party(value) -> Optional[Party]:
    if value is None:
        return None
    if isinstance(value, str):
        return Party(value)
    return Party(value["id"], value.get("name", ""))


def load_text(text: str) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None
    return load_data(data)


def load_data(data: Any) -> Document:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise DocumentError(err.message, _path(err.absolute_path))

    csec = data.get("contract", {})
    psec = data.get("propositions", {})
    k_r = _formula_list(psec, "kR", "propositions")
    r_r = _formula_list(psec, "rR", "propositions")
    spec = _formula_list(psec, "s", "propositions")

    requested, deadlines = [], {}
    for i, item in enumerate(psec.get("requested", [])):
        name = item if isinstance(item, str) else item["atom"]
        where = f"propositions.requested[{i}]"
        if not _is_atom_name(name):
            raise DocumentError(f"{name!r} is not an atom name", where)
        requested.append(name)
        if isinstance(item, dict) and "until" in item:
            deadlines[name] = item["until"]

    bindings = {}
    for role in Role:
        party = _party(csec.get("bindings", {}).get(role.value))
        if party is not None:
            bindings[role] = party
    try:
        contract = ContractDoc(
            rights=frozenset(Right(x) for x in csec.get("rights", [])),
            obligations=frozenset(Obligation(x) for x in csec.get("obligations", [])),
            bindings=bindings,
            applicability=csec.get("applicability", "applicable"),
            requested=frozenset(requested),
            k=k_r,
            r=r_r,
            request_deadlines=deadlines,
        )
    except ContractError as exc:
        raise DocumentError(str(exc), "propositions.requested") from None

    economics, deltas = None, {}
    if "economics" in data:
        esec = data["economics"]
        try:
            economics = EconProfile(
                {Role(name): Expectation(to_rational(v["eb"]), to_rational(v["ec"])) for name, v in esec.items()}
            )
            for name, v in esec.items():
                if "db" in v:
                    deltas[Role(name)] = Delta(to_rational(v["db"]), to_rational(v["dc"]))
        except AlignmentError as exc:
            raise DocumentError(str(exc), "economics") from None

    transfers = []
    for i, t in enumerate(data.get("transfers", [])):
        where = f"transfers[{i}]"
        subs = {
            _formula(s["from"], f"{where}.substitutions[{j}].from"): _formula(s["to"], f"{where}.substitutions[{j}].to")
            for j, s in enumerate(t.get("substitutions", []))
        }
        try:
            mapping = TransferMap(
                drops=_formula_list(t, "drops", where),
                substitutions=subs,
                additions=_formula_list(t, "additions", where),
            )
        except TransferError as exc:
            raise DocumentError(str(exc), where) from None
        transfers.append(TransferSpec(Role(t["from-role"]), Role(t["to-role"]), mapping, t.get("product")))

    network = canonical_network()
    if "network" in data:
        network = _network(data["network"])

    schedule = None
    if "schedule" in data:
        known = set(network.ids)
        items = []
        for i, step in enumerate(data["schedule"]):
            if step["event"] not in known:
                raise DocumentError(f"unknown event {step['event']!r}", f"schedule[{i}].event")
            verdict = Verdict(step["verdict"]) if "verdict" in step else None
            items.append((step["event"], verdict))
        schedule = tuple(items)

    doc = Document(contract, spec, economics, deltas, tuple(transfers), schedule, network, data)
    views(doc)  # surface transfer-chain errors at load time
    return doc


def _is_atom_name(name: str) -> bool:
    try:
        Atom(name)
    except ValueError:
        return False
    return True


def _network(sec: dict) -> Network:
    try:
        events = tuple(
            EventNode(e["id"], e["kind"], e.get("subject", e["id"]), Role(e["role"]), e.get("phase"))
            for e in sec["events"]
        )
    except ValueError as exc:
        raise DocumentError(str(exc), "network.events") from None
    links = tuple(Link(x["source"], x["target"], x.get("on_pass", False)) for x in sec["links"])
    kw = {k: sec[k] for k in ("validation_event", "retry_event") if k in sec}
    return Network(events, links, **kw)


def views(doc: Document) -> dict[Role, ArtifactSets]:
    """Each role's reading of the proposition sets.

    The Requester's view is (kR, rR).  Transfers apply in document order and
    each reads from a view that already exists.  Maker and Evaluator views
    that come out without a specification get the document's ``s``.  Roles
    no transfer reaches receive an undistorted copy: the Maker from the
    Requester, the Evaluator from the Maker.
    """
    out = {Role.REQUESTER: ArtifactSets(Role.REQUESTER, doc.contract.k, doc.contract.r)}

    def finish(a: ArtifactSets, product: Optional[str]) -> ArtifactSets:
        if a.owner is not Role.REQUESTER and a.s is None:
            return with_specification(a, doc.s, product)
        if product is not None and a.owner is not Role.REQUESTER:
            return with_specification(a, a.s, product)
        return a

    for i, t in enumerate(doc.transfers):
        if t.source not in out:
            raise DocumentError(f"no {t.source.value} view exists yet to transfer from", f"transfers[{i}]")
        out[t.target] = finish(apply_transfer(out[t.source], t.mapping, t.target), t.product)
    if Role.MAKER not in out:
        out[Role.MAKER] = finish(apply_transfer(out[Role.REQUESTER], IDENTITY, Role.MAKER), None)
    if Role.EVALUATOR not in out:
        out[Role.EVALUATOR] = finish(apply_transfer(out[Role.MAKER], IDENTITY, Role.EVALUATOR), None)
    return out
