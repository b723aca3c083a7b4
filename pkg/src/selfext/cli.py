"""Command-line interface.

Exit codes: 0 success, 1 a verification failed, 2 bad input.
Log verbosity comes from ``SELFEXT_LOG`` (e.g. ``DEBUG``); ``--config``
reads ``key = value`` lines whose values the command-line flags override.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import os
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import spaces
from .exact import Mat, format_rational
from .extend import (
    ExtensionProblem,
    LyapunovInstance,
    extend_functional,
    lyapunov_certificate,
    min_norm_extension,
)
from .data import OPERATORS
from .lp import LinearProgram, check_solution, solve_lp
from .r3 import r3_extend_traced
from .se import l1_to_linf_embedding, se_lower_bound_search
from .serialize import (
    InputError,
    dumps,
    encode,
    parse_matrix,
    parse_rational,
    parse_space,
    parse_subspace,
    parse_vector,
)
from .spaces import CapExceeded, operator_norm, subspace_operator_norm
from .verify import CHECKS, Settings, verify_paper

log = logging.getLogger("selfext")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

_STORED = {"mt4": 4, "mt5": 5, "mt6": 6}

CONFIG_KEYS = {
    "seed": int,
    "budget": int,
    "r3_instances": int,
    "embedding_vectors": int,
    "hb_instances": int,
    "cw_instances": int,
    "grid_budget": int,
    "cap_closed_form_dim": int,
    "cap_general_dim": int,
    "cap_max_systems": int,
}


def load_config(path: str) -> dict:
    parser = configparser.ConfigParser()
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read config {path}: {e}") from None
    try:
        parser.read_string("[selfext]\n" + text)
    except configparser.Error as e:
        raise InputError(f"bad config file: {e}") from None
    out = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            if key not in CONFIG_KEYS:
                raise InputError(f"unknown config key {key!r}")
            try:
                out[key] = CONFIG_KEYS[key](raw)
            except ValueError:
                raise InputError(f"config key {key!r} expects an integer") from None
    return out


def _load_json(arg: str):
    """Inline JSON, or the path of a JSON file."""
    p = Path(arg)
    if p.is_file():
        try:
            return json.loads(p.read_text())
        except json.JSONDecodeError as e:
            raise InputError(f"{arg}: {e}") from None
    try:
        return json.loads(arg)
    except json.JSONDecodeError:
        raise InputError(f"{arg!r} is neither a JSON file nor inline JSON") from None


def _op_arg(arg: str) -> Mat:
    """Matrix JSON (list of columns), a file holding one, or a stored name like ``mt4``."""
    if arg.lower() in _STORED:
        return OPERATORS[_STORED[arg.lower()]]
    data = _load_json(arg)
    if isinstance(data, dict):
        data = data.get("op", data.get("matrix"))
    return parse_matrix(data)


def _space_arg(arg: str):
    if arg.startswith(("l1:", "linf:")):
        return parse_space(arg)
    return parse_space(_load_json(arg))


def _subspace_arg(arg: Optional[str], space):
    if arg is None:
        return None
    if arg in ("sum-zero", "full"):
        return parse_subspace(arg, space)
    return parse_subspace(_load_json(arg), space)


def _human(x) -> str:
    if isinstance(x, Fraction):
        s = format_rational(x)
        return s if x.denominator == 1 else f"{s} (≈ {float(x):.6g})"
    if isinstance(x, Mat):
        return "\n".join("  " + "  ".join(format_rational(v) for v in r) for r in x.row_list())
    return str(x)


def _emit(args, doc: dict, human: list):
    if args.out:
        Path(args.out).write_text(dumps(encode(doc)))
    else:
        for label, value in human:
            text = _human(value)
            if "\n" in text:
                print(f"{label}:\n{text}")
            else:
                print(f"{label}: {text}")


def cmd_verify_paper(args, cfg) -> int:
    s = Settings()
    for key in ("r3_instances", "embedding_vectors", "hb_instances", "cw_instances", "grid_budget"):
        if key in cfg:
            setattr(s, key, cfg[key])
    for item in args.override or ():
        name, _, path = item.partition("=")
        if name not in _STORED or not path:
            raise InputError(f"override must look like mt4=FILE, got {item!r}")
        s.operators[_STORED[name]] = _op_arg(path)
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    report = verify_paper(seed, s, only=args.check, parallel=args.parallel)
    if args.out:
        Path(args.out).write_text(dumps(report.to_json()))
    else:
        width = max(len(c.name) for c in report.checks)
        for c in report.checks:
            print(f"{c.status.upper():4}  {c.name:<{width}}  {c.computed}  [{c.runtime_ms} ms]")
        print(f"overall: {report.status}")
    return EXIT_OK if report.status == "pass" else EXIT_FAIL


def cmd_opnorm(args, cfg) -> int:
    space = _space_arg(args.space)
    Y = _subspace_arg(args.subspace, space)
    T = _op_arg(args.op)
    if Y is None:
        value = operator_norm(space, space, T)
    else:
        value = subspace_operator_norm(Y, T, images=args.images)
    _emit(args, {"value": value}, [("operator norm", value)])
    return EXIT_OK


def cmd_extend(args, cfg) -> int:
    space = _space_arg(args.space)
    Y = _subspace_arg(args.subspace, space)
    T = _op_arg(args.op)
    res = min_norm_extension(ExtensionProblem(space, Y, T, args.images))
    doc = {
        "value": res.value,
        "t_norm": res.t_norm,
        "extension": res.extension,
        "certificate": {
            "items": [
                {"vertex": it.vertex, "functional": it.functional, "weight": it.weight}
                for it in res.certificate.items
            ],
            "bound": res.certificate.bound,
        },
    }
    _emit(args, doc, [("min extension norm", res.value), ("||T||", res.t_norm), ("extension", res.extension)])
    return EXIT_OK


def cmd_r3_extend(args, cfg) -> int:
    f = parse_vector(_load_json(args.functional))
    T = _op_arg(args.op)
    res, params, trace = r3_extend_traced(f, T)
    doc = {
        "value": res.value,
        "t_norm": res.t_norm,
        "extension": res.extension,
        "pivot": params.pivot,
        "r": list(params.r),
        "basis": params.basis(),
    }
    human = [("||S|| = ||T||", res.value), ("extension", res.extension)]
    if args.trace:
        doc["trace"] = None if trace is None else encode(asdict(trace))
        if trace is not None:
            human += [(k, tuple(format_rational(x) for x in v) if isinstance(v, tuple) else v)
                      for k, v in asdict(trace).items()]
    _emit(args, doc, human)
    return EXIT_OK


def cmd_lyapunov(args, cfg) -> int:
    if args.instance:
        data = _load_json(args.instance)
        try:
            W, F, norm_arg = data["W"], data["F"], data["norm"]
        except (KeyError, TypeError):
            raise InputError("instance needs W, F and norm") from None
        inst_space = parse_space(norm_arg)
        W, F = parse_matrix(W), parse_matrix(F)
    else:
        if not (args.W and args.F and args.norm):
            raise InputError("give --instance or all of --W, --F, --norm")
        inst_space = _space_arg(args.norm)
        W, F = _op_arg(args.W), _op_arg(args.F)
    try:
        inst = LyapunovInstance(W, F, inst_space)
    except ValueError as e:
        raise InputError(str(e)) from None
    res = lyapunov_certificate(inst)
    doc = {"Q": res.Q, "q_norm": res.q_norm, "decays": res.decays, "induced_norm": res.induced_norm}
    _emit(args, doc, [("min ||Q||", res.q_norm), ("decay factor of ||Wx||", res.induced_norm),
                      ("contractive Q exists", res.decays), ("Q", res.Q)])
    return EXIT_OK


def cmd_se_search(args, cfg) -> int:
    space = _space_arg(args.space)
    Y = _subspace_arg(args.subspace, space)
    budget = args.budget if args.budget is not None else cfg.get("budget", 1000)
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    candidates = [_op_arg(c) for c in args.candidate or ()]
    try:
        rep = se_lower_bound_search(space, Y, args.strategy, budget, seed, candidates)
    except ValueError as e:
        raise InputError(str(e)) from None
    _emit(args, rep.to_json(), [("best ratio (lower bound)", rep.best_ratio),
                                ("candidates evaluated", rep.candidates_evaluated),
                                ("witness", rep.witness)])
    return EXIT_OK


def cmd_embed(args, cfg) -> int:
    space = parse_space(args.source)
    if space.kind != "l1":
        raise InputError("embedding source must be l1:N")
    try:
        E = l1_to_linf_embedding(space.dim)
    except ValueError as e:
        raise InputError(str(e)) from None
    _emit(args, {"matrix": E, "target": f"linf:{E.rows}"}, [(f"l1:{space.dim} -> linf:{E.rows}", E)])
    return EXIT_OK


def cmd_extend_functional(args, cfg) -> int:
    space = _space_arg(args.space)
    Y = _subspace_arg(args.subspace, space)
    f = parse_vector(_load_json(args.functional))
    F = extend_functional(Y, f)
    from .spaces import dual_norm

    n = dual_norm(space, F)
    _emit(args, {"extension": F, "dual_norm": n}, [("extension", tuple(format_rational(x) for x in F)),
                                                   ("dual norm", n)])
    return EXIT_OK


def _parse_lp(data) -> LinearProgram:
    try:
        cons = [
            (parse_vector(c["row"]), c["relation"], parse_rational(c["rhs"]))
            for c in data.get("constraints", [])
        ]
        bounds = data.get("bounds")
        if bounds is not None:
            bounds = [
                (None if lo is None else parse_rational(lo), None if hi is None else parse_rational(hi))
                for lo, hi in bounds
            ]
        return LinearProgram(parse_vector(data["objective"]), cons, bounds)
    except (KeyError, TypeError, AttributeError) as e:
        raise InputError(f"malformed linear program: {e}") from None


def cmd_lp_solve(args, cfg) -> int:
    prog = _parse_lp(_load_json(args.file))
    sol = solve_lp(prog)
    doc = {
        "status": sol.status,
        "primal": sol.primal,
        "dual": sol.dual,
        "objective_value": sol.objective_value,
        "ray": sol.ray,
        "verified": check_solution(prog, sol),
    }
    human = [("status", sol.status)]
    if sol.objective_value is not None:
        human.append(("value", sol.objective_value))
    if sol.primal is not None:
        human.append(("x", tuple(format_rational(v) for v in sol.primal)))
    _emit(args, doc, human)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="selfext", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="key = value file (seed, budget, caps, instance counts)")
    sub = ap.add_subparsers(dest="command", required=True)

    def out(p):
        p.add_argument("--out", help="write JSON here instead of printing a table")
        return p

    p = out(sub.add_parser("verify-paper", help="rerun every reproducible claim"))
    p.add_argument("--seed", type=int)
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--override", action="append", metavar="mtN=FILE", help="replace a stored operator")
    p.add_argument("--check", action="append", choices=sorted(CHECKS), help="run only these checks")
    p.set_defaults(func=cmd_verify_paper)

    for name, fn, helptext in (
        ("opnorm", cmd_opnorm, "exact operator norm"),
        ("extend", cmd_extend, "minimal-norm extension with certificate"),
    ):
        p = out(sub.add_parser(name, help=helptext))
        p.add_argument("--space", required=True, help="l1:N, linf:N or a space JSON")
        p.add_argument("--subspace", help="sum-zero, full or a subspace JSON", required=name == "extend")
        p.add_argument("--op", required=True, help="matrix JSON (list of columns), a file, or mt4/mt5/mt6")
        p.add_argument("--images", choices=("subspace", "ambient"), default="subspace")
        p.set_defaults(func=fn)

    p = out(sub.add_parser("r3-extend", help="constructive extension on a hyperplane of l1^3"))
    p.add_argument("--functional", required=True, help="JSON list, e.g. '[1,1,1]'")
    p.add_argument("--op", required=True)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_r3_extend)

    p = out(sub.add_parser("lyapunov", help="contractive Q versus decay of ||Wx||"))
    p.add_argument("--instance", help='JSON {"W":..., "F":..., "norm":...}')
    p.add_argument("--W")
    p.add_argument("--F")
    p.add_argument("--norm")
    p.set_defaults(func=cmd_lyapunov)

    p = out(sub.add_parser("se-search", help="search for operators with large extension ratio"))
    p.add_argument("--space", required=True)
    p.add_argument("--subspace", default="sum-zero")
    p.add_argument("--strategy", choices=("grid", "random", "fixed"), default="grid")
    p.add_argument("--budget", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--candidate", action="append", help="operator evaluated before the strategy")
    p.set_defaults(func=cmd_se_search)

    p = out(sub.add_parser("embed", help="isometric embedding of l1^n into linf"))
    p.add_argument("--from", dest="source", required=True, help="l1:N")
    p.set_defaults(func=cmd_embed)

    p = out(sub.add_parser("extend-functional", help="norm-preserving functional extension"))
    p.add_argument("--space", required=True)
    p.add_argument("--subspace", required=True)
    p.add_argument("--functional", required=True, help="values on the subspace basis")
    p.set_defaults(func=cmd_extend_functional)

    p = sub.add_parser("lp", help="exact linear programming")
    lsub = p.add_subparsers(dest="lp_command", required=True)
    q = out(lsub.add_parser("solve", help="solve a JSON linear program"))
    q.add_argument("file")
    q.set_defaults(func=cmd_lp_solve)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=os.environ.get("SELFEXT_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else {}
        for key, attr in (
            ("cap_closed_form_dim", "closed_form_dim"),
            ("cap_general_dim", "general_dim"),
            ("cap_max_systems", "max_systems"),
        ):
            if key in cfg:
                setattr(spaces.caps, attr, cfg[key])
        return args.func(args, cfg)
    except (InputError, CapExceeded, ValueError) as e:
        print(f"selfext: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
