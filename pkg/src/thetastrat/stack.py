"""Input model: a torus acting linearly on affine space, cut out by Koszul relations.

Input files declare ACTION weights.  ``to_rep_weight`` is the single place
where these are converted to representation weights (weights of functions),
which everything downstream uses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .charkit import BigradedCharacter, Weight, as_weight, char_det_and_rank, zero_weight
from .errors import ModelError, RankMismatch
from .gradedalg import FreeComplex, KoszulCdga, parse_terms


def to_rep_weight(action_weight: Sequence[int]) -> Weight:
    """A coordinate of action weight ``w`` is a function of representation weight ``-w``."""
    return tuple(-int(c) for c in action_weight)


to_action_weight = to_rep_weight  # the conversion is its own inverse


@dataclass(frozen=True)
class Coordinate:
    name: str
    action_weight: Weight


@dataclass(frozen=True)
class Relation:
    name: str
    action_weight: Weight
    du: str


class StackModel:
    """``X/T`` with ``X = Spec k[x; u | du = f]`` and linearization ``ell``."""

    def __init__(self, rank: int, coordinates, relations=(), linearization=None):
        self.rank = int(rank)
        self.coordinates = [c if isinstance(c, Coordinate) else Coordinate(str(c[0]), as_weight(c[1])) for c in coordinates]
        self.relations = [
            r if isinstance(r, Relation) else Relation(str(r[0]), as_weight(r[1]), str(r[2])) for r in relations
        ]
        self.linearization = as_weight(linearization if linearization is not None else zero_weight(self.rank))
        problems = _diagnose(self)
        if problems:
            raise ModelError("invalid model", problems)
        self.base = KoszulCdga(
            self.rank,
            [(c.name, to_rep_weight(c.action_weight)) for c in self.coordinates],
            [(r.name, to_rep_weight(r.action_weight), r.du) for r in self.relations],
        )
        if not self.base.check_d_squared():
            raise ModelError("d^2 != 0 on the base algebra")

    @property
    def n_coords(self):
        return len(self.coordinates)

    def coordinate_names(self) -> list[str]:
        return [c.name for c in self.coordinates]

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "StackModel":
        problems = validate_model(data)
        if problems:
            raise ModelError("invalid model", problems)
        return cls(
            data["rank"],
            [(c["name"], c["action_weight"]) for c in data.get("coordinates", [])],
            [(r["name"], r["action_weight"], r["du"]) for r in data.get("relations", [])],
            data.get("linearization"),
        )

    @classmethod
    def from_json(cls, path) -> "StackModel":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "coordinates": [{"name": c.name, "action_weight": list(c.action_weight)} for c in self.coordinates],
            "relations": [
                {"name": r.name, "degree": 1, "action_weight": list(r.action_weight), "du": r.du} for r in self.relations
            ],
            "linearization": list(self.linearization),
        }

    def with_linearization(self, ell) -> "StackModel":
        return StackModel(self.rank, self.coordinates, self.relations, ell)

    def __repr__(self):
        return f"StackModel({json.dumps(self.to_dict(), sort_keys=True)})"


def _diagnose(m: StackModel) -> list[str]:
    out = []
    r = m.rank
    if r < 1:
        out.append(f"rank: must be positive, got {r}")
        return out
    names = []
    for i, c in enumerate(m.coordinates):
        if len(c.action_weight) != r:
            out.append(f"coordinates[{i}] ({c.name}).action_weight: length {len(c.action_weight)}, expected {r}")
        names.append(c.name)
    for j, rel in enumerate(m.relations):
        if len(rel.action_weight) != r:
            out.append(f"relations[{j}] ({rel.name}).action_weight: length {len(rel.action_weight)}, expected {r}")
        names.append(rel.name)
    dup = sorted({n for n in names if names.count(n) > 1})
    if dup:
        out.append(f"duplicate generator names: {', '.join(dup)}")
    if len(m.linearization) != r:
        out.append(f"linearization: length {len(m.linearization)}, expected {r}")
    if out:
        return out
    cnames = [c.name for c in m.coordinates]
    reps = {c.name: to_rep_weight(c.action_weight) for c in m.coordinates}
    for j, rel in enumerate(m.relations):
        try:
            terms = parse_terms(rel.du, cnames)
        except ModelError as exc:
            out.append(f"relations[{j}] ({rel.name}).du: {exc}")
            continue
        want = to_rep_weight(rel.action_weight)
        for (alpha, _u) in terms:
            w = zero_weight(r)
            for i, a in enumerate(alpha):
                w = tuple(x + a * y for x, y in zip(w, reps[cnames[i]]))
            if w != want:
                out.append(
                    f"relations[{j}] ({rel.name}).du: not homogeneous of action weight {list(rel.action_weight)} "
                    f"(a term has action weight {list(to_action_weight(w))})"
                )
                break
    return out


def validate_model(m) -> list[str]:
    """Diagnostics for a model (``StackModel`` or raw dict); empty list means ok."""
    if isinstance(m, StackModel):
        return _diagnose(m)
    out = []
    if not isinstance(m, Mapping):
        return ["model: expected a JSON object"]
    if not isinstance(m.get("rank"), int):
        return ["rank: missing or not an integer"]
    for key in ("coordinates", "relations"):
        if key in m and not isinstance(m[key], list):
            out.append(f"{key}: expected a list")
    if out:
        return out
    for i, c in enumerate(m.get("coordinates", [])):
        for f in ("name", "action_weight"):
            if not isinstance(c, Mapping) or f not in c:
                out.append(f"coordinates[{i}].{f}: missing")
    for j, rel in enumerate(m.get("relations", [])):
        for f in ("name", "action_weight", "du"):
            if not isinstance(rel, Mapping) or f not in rel:
                out.append(f"relations[{j}].{f}: missing")
        if isinstance(rel, Mapping) and rel.get("degree", 1) != 1:
            out.append(f"relations[{j}] ({rel.get('name')}).degree: only degree 1 relations are supported")
    if out:
        return out

    def _intvec(v):
        return isinstance(v, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in v)

    for i, c in enumerate(m.get("coordinates", [])):
        if not _intvec(c["action_weight"]):
            out.append(f"coordinates[{i}] ({c['name']}).action_weight: expected a list of integers")
    for j, rel in enumerate(m.get("relations", [])):
        if not _intvec(rel["action_weight"]):
            out.append(f"relations[{j}] ({rel['name']}).action_weight: expected a list of integers")
    if "linearization" in m and not _intvec(m["linearization"]):
        out.append("linearization: expected a list of integers")
    if out:
        return out
    try:
        shell = StackModel.__new__(StackModel)
        shell.rank = m["rank"]
        shell.coordinates = [Coordinate(str(c["name"]), tuple(c["action_weight"])) for c in m.get("coordinates", [])]
        shell.relations = [
            Relation(str(r["name"]), tuple(r["action_weight"]), str(r["du"])) for r in m.get("relations", [])
        ]
        shell.linearization = tuple(m.get("linearization", [0] * m["rank"]))
    except (TypeError, ValueError) as exc:
        return [f"model: {exc}"]
    return _diagnose(shell)


@dataclass(frozen=True)
class CotangentData:
    """Character of the cotangent complex at a fixed point, with its determinant data."""

    full: BigradedCharacter
    omega_weight: Weight
    euler_rank: int

    def to_json(self) -> dict:
        from .charkit import to_text

        return {"full": to_text(self.full), "omega_weight": list(self.omega_weight), "euler_rank": self.euler_rank}


def cotangent_character(m: StackModel) -> CotangentData:
    terms = [((g.weight, 0), 1) for g in m.base.even]
    terms += [((g.weight, 1), 1) for g in m.base.odd]
    terms += [((zero_weight(m.rank), -1), 1)] * m.rank
    full = BigradedCharacter(m.rank, terms)
    det, rk = char_det_and_rank(full)
    return CotangentData(full, det, rk)


def load_sheaf(data: Mapping[str, Any] | None, m: StackModel) -> FreeComplex:
    """Build a complex over the model's algebra from a sheaf JSON block (``None`` = structure sheaf).

    Schema: ``{"generators": [{"name", "degree", "rep_weight"}], "differential": [{"from", "to", "entry"}]}``.
    ``d(from)`` contains ``entry * to``.
    """
    if data is None:
        return FreeComplex(m.base, [("1", 0, zero_weight(m.rank))])
    gens = data.get("generators")
    if not isinstance(gens, list):
        raise ModelError("sheaf.generators: expected a list")
    out, names = [], {}
    for i, g in enumerate(gens):
        try:
            w = as_weight(g["rep_weight"])
            out.append((str(g["name"]), int(g.get("degree", 0)), w))
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelError(f"sheaf.generators[{i}]: {exc}") from exc
        if len(w) != m.rank:
            raise ModelError(f"sheaf.generators[{i}] ({g['name']}).rep_weight: length {len(w)}, expected {m.rank}")
        names[str(g["name"])] = i
    D = {}
    for j, e in enumerate(data.get("differential", [])):
        try:
            l, k = names[e["from"]], names[e["to"]]
        except KeyError as exc:
            raise ModelError(f"sheaf.differential[{j}]: unknown generator {exc}") from exc
        D[(k, l)] = m.base.element(str(e["entry"]))
    return FreeComplex(m.base, out, D)


def load_sheaf_file(path, m: StackModel) -> FreeComplex:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: not valid JSON ({exc})") from exc
    return load_sheaf(data, m)
