"""Batch front-end.

Exit codes: 0 ok / verified, 1 mathematical failure, 2 inapplicable or
undecided, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .baric import (
    gamma_window,
    in_geq,
    in_lt,
    serre_window_data,
    wall_crossing_report,
)
from .charkit import Cocharacter, to_text
from .errors import (
    InsufficientTruncation,
    ModelError,
    NonStabilization,
    NonUniqueDestabilizer,
    OracleInapplicable,
    RankMismatch,
    SupportLimitExceeded,
)
from .gradedalg import complex_hom, unit_complex
from .kloc import (
    DEFAULT_DEGREE_BOUND,
    _chi_semistable_term,
    _lhs_term,
    chi_chains,
    chi_series,
    localize_terms,
    verify_localization,
)
from .stack import StackModel, cotangent_character, load_sheaf, load_sheaf_file, validate_model
from .strat import git_stratify, validate_stratification

EXIT_OK, EXIT_FALSE, EXIT_UNDECIDED, EXIT_INPUT = 0, 1, 2, 3
COMMANDS = ("validate", "stratify", "chi", "localize", "verify-localization", "windows", "wallcross", "duality-check")


class InputError(Exception):
    pass


def _positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thetastrat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("model")
        sp.add_argument("--sheaf", help="complex JSON (default: structure sheaf)")
        sp.add_argument("--format", choices=("json", "table"), default="json")
        sp.add_argument("--cutoff", type=int, help="series cutoff (<= 0)")
        sp.add_argument("--degree-bound", type=_positive, default=DEFAULT_DEGREE_BOUND)
        sp.add_argument("--window", default="0", help="w or w,INDEX=w_INDEX,... per stratum")
        sp.add_argument("--max-koszul-level", type=_positive)
        if name == "chi":
            sp.add_argument("--method", choices=("series", "chains"), default="series")
        if name == "wallcross":
            sp.add_argument("--lambda", dest="lam", help="comma-separated cocharacter (default: 1 on a rank-1 torus)")
    return p


def _parse_window(text: str) -> tuple[int, dict]:
    default, per = 0, {}
    try:
        for part in text.split(","):
            part = part.strip()
            if "=" in part:
                k, v = part.split("=", 1)
                per[int(k)] = int(v)
            elif part:
                default = int(part)
    except ValueError as exc:
        raise InputError(f"--window: cannot parse {text!r}") from exc
    return default, per


def _load(args):
    try:
        with open(args.model) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"{args.model}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.model}: not valid JSON ({exc})") from exc
    problems = validate_model(data)
    if problems:
        raise ModelError("invalid model", problems)
    m = StackModel.from_dict(data)
    if args.sheaf:
        try:
            F = load_sheaf_file(args.sheaf, m)
        except OSError as exc:
            raise InputError(f"{args.sheaf}: {exc.strerror}") from exc
    else:
        F = load_sheaf(None, m)
    return m, F


def cmd_validate(args):
    try:
        with open(args.model) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"{args.model}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.model}: not valid JSON ({exc})") from exc
    problems = validate_model(data)
    if problems:
        return {"ok": False, "diagnostics": problems}, EXIT_INPUT
    m = StackModel.from_dict(data)
    return {"ok": True, "diagnostics": [], "cotangent": cotangent_character(m).to_json()}, EXIT_OK


def cmd_stratify(args):
    m, _F = _load(args)
    strata = git_stratify(m)
    violations = validate_stratification(m, strata)
    out = {"strata": [s.to_json() for s in strata], "violations": violations}
    return out, EXIT_FALSE if violations else EXIT_OK


def cmd_chi(args):
    m, F = _load(args)
    if args.method == "series":
        return {"method": "series", "chi": chi_series(m, F)}, EXIT_OK
    v, stable = chi_chains(m, F, args.degree_bound)
    out = {"method": "chains", "chi": v, "stabilized": stable, "degree_bound": args.degree_bound}
    return out, EXIT_OK if stable else EXIT_UNDECIDED


def cmd_localize(args):
    m, F = _load(args)
    out = localize_terms(m, F, args.cutoff, args.degree_bound)
    ok = all(t["value"] is not None and t["stabilized"] for t in out["strata"] + [out["ss_term"]])
    return out, EXIT_OK if ok else EXIT_UNDECIDED


def cmd_verify(args):
    m, F = _load(args)
    rep = verify_localization(m, F, args.degree_bound, args.cutoff)
    code = {True: EXIT_OK, False: EXIT_FALSE, None: EXIT_UNDECIDED}[rep.verified]
    return rep.to_json(), code


def cmd_windows(args):
    m, F = _load(args)
    default, per = _parse_window(args.window)
    rows = []
    code = EXIT_OK
    for idx, s in enumerate(git_stratify(m)):
        w = per.get(idx, default)
        sw = serre_window_data(m, s)
        row = {
            "index": idx,
            "lambda": list(s.lam.components),
            "w": w,
            "a": sw.a,
            "flip": sw.flip(w),
            "flip_involution": sw.flip(sw.flip(w)) == w,
            "sheaf_in_geq": in_geq(m, s, F, w),
            "sheaf_in_lt": in_lt(m, s, F, w),
            "regular_embedding": s.flags["regular_embedding"],
        }
        try:
            row["gamma"] = gamma_window(F, m, s, w, args.max_koszul_level).to_json()
        except OracleInapplicable as exc:
            row["gamma"] = {"status": "inapplicable", "reason": str(exc)}
        except NonStabilization as exc:
            row["gamma"] = {"status": "not_stabilized", "reason": str(exc)}
            code = EXIT_UNDECIDED
        rows.append(row)
    return {"windows": rows}, code


def cmd_wallcross(args):
    m, _F = _load(args)
    if args.lam:
        try:
            lam = tuple(int(c) for c in args.lam.split(","))
        except ValueError as exc:
            raise InputError(f"--lambda: cannot parse {args.lam!r}") from exc
    elif m.rank == 1:
        lam = (1,)
    else:
        raise InputError("--lambda is required when the torus rank is not 1")
    if len(lam) != m.rank:
        raise InputError(f"--lambda: length {len(lam)}, expected {m.rank}")
    rep = wall_crossing_report(m, Cocharacter(lam))
    return rep, EXIT_OK if rep["hypothesis_ok"] else EXIT_UNDECIDED


def cmd_duality(args):
    """Flip involution plus restriction-to-semistable checks on twisted structure sheaves."""
    m, _F = _load(args)
    default, per = _parse_window(args.window)
    strata = git_stratify(m)
    out = {"strata": [], "qcr_checks": []}
    failures = 0
    for idx, s in enumerate(strata):
        w = per.get(idx, default)
        sw = serre_window_data(m, s)
        inv = all(sw.flip(sw.flip(v)) == v for v in range(w - 5, w + 6))
        failures += not inv
        out["strata"].append({"index": idx, "lambda": list(s.lam.components), "a": sw.a, "w": w, "flip_involution": inv})
    if len(strata) == 1 and m.rank == 1:
        s = strata[0]
        w = per.get(0, default)
        F = unit_complex(m.base)
        if in_geq(m, s, F, w):
            for v in range(-4, 5):
                G = unit_complex(m.base, (v,))
                if not in_lt(m, s, G, w):
                    continue
                H = complex_hom(F, G)
                lhs = _lhs_term(m, H, args.degree_bound)
                ss = _chi_semistable_term(m, H, args.degree_bound)
                if lhs.value is None or ss.value is None or not (lhs.stabilized and ss.stabilized):
                    status = "undecided"
                else:
                    status = "ok" if lhs.value == ss.value else "mismatch"
                    failures += status == "mismatch"
                out["qcr_checks"].append({"twist": [v], "chi_X": lhs.value, "chi_ss": ss.value, "status": status})
    code = EXIT_FALSE if failures else (EXIT_OK if out["qcr_checks"] or strata else EXIT_UNDECIDED)
    return out, code


HANDLERS = {
    "validate": cmd_validate,
    "stratify": cmd_stratify,
    "chi": cmd_chi,
    "localize": cmd_localize,
    "verify-localization": cmd_verify,
    "windows": cmd_windows,
    "wallcross": cmd_wallcross,
    "duality-check": cmd_duality,
}


def _table(obj, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, sort_keys=True)}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}- [{i}]")
                lines.extend(_table(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v)}")
    return lines


def render(obj, fmt: str) -> str:
    if fmt == "table":
        return "\n".join(_table(obj)) + "\n"
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, code = HANDLERS[args.command](args)
    except (InputError, ModelError, RankMismatch) as exc:
        out = {"error": "input", "message": str(exc), "diagnostics": getattr(exc, "diagnostics", [])}
        code = EXIT_INPUT
    except (OracleInapplicable, NonStabilization, InsufficientTruncation, SupportLimitExceeded, NonUniqueDestabilizer) as exc:
        out = {"error": type(exc).__name__, "message": str(exc)}
        code = EXIT_UNDECIDED
    out = {"command": args.command, "exit_code": code, **out}
    stdout.write(render(out, args.format))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
