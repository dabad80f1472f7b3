"""Command-line interface.

Representations travel as JSON on stdin/stdout, so commands compose with
pipes, e.g. ``kronecker make X --q 2 | kronecker sigma | kronecker decompose``.

Exit codes: 0 success (including census closure-gap findings, which are
announced on stderr), 1 a checked clause failed, 2 usage error,
3 malformed JSON input, 4 input outside an operation's domain,
5 an enumeration bound refused the request.  Errors are printed to stderr
as a JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import bgp, census, k0, rep, structure as st, zoo
from . import config as cfgmod
from .errors import ContractViolation, DomainError, RefusalError, SearchExhausted
from .field import field_of_order, get_field

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_JSON, EXIT_DOMAIN, EXIT_REFUSED = 0, 1, 2, 3, 4, 5


class MalformedInput(Exception):
    pass


def _emit(obj):
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _read_json(path: Optional[str]):
    text = Path(path).read_text() if path and path != "-" else sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc


def _read_rep(path: Optional[str]) -> rep.KronRep:
    obj = _read_json(path)
    try:
        return rep.from_dict(obj)
    except ContractViolation as exc:
        raise MalformedInput(str(exc)) from exc


def _field(args, cfg):
    if getattr(args, "q", None):
        return field_of_order(args.q)
    return get_field(args.p or cfg.p, args.k or cfg.k)


def _vec(text: str) -> np.ndarray:
    try:
        return np.array([int(x) for x in text.split(",")], dtype=np.int64)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _pair(text: str):
    v = _vec(text)
    if v.size != 2:
        raise argparse.ArgumentTypeError(f"expected x,y, got {text!r}")
    return int(v[0]), int(v[1])


# -- commands ------------------------------------------------------------------------


def cmd_make(args, cfg):
    if args.list or not args.name:
        for name, (_, nargs, desc) in zoo.ZOO.items():
            _emit({"name": name, "parameters": nargs, "description": desc})
        return EXIT_OK
    _emit(rep.to_dict(zoo.build(args.name, _field(args, cfg))))
    return EXIT_OK


def cmd_sigma(args, cfg):
    M = _read_rep(args.input)
    _emit(rep.to_dict(bgp.sigma_inv_rep(M) if args.inverse else bgp.sigma_rep(M)))
    return EXIT_OK


def cmd_tau(args, cfg):
    M = _read_rep(args.input)
    _emit(rep.to_dict(bgp.tau_inv(M) if args.inverse else bgp.tau(M)))
    return EXIT_OK


def cmd_dual(args, cfg):
    _emit(rep.to_dict(rep.dual(_read_rep(args.input))))
    return EXIT_OK


def cmd_hom(args, cfg):
    M, N = (_read_rep(p) for p in (args.source, args.target))
    H = rep.hom_space(M, N)
    _emit({"dim": H.dim, "basis": [[f1.tolist(), f2.tolist()] for f1, f2 in H.pairs]})
    return EXIT_OK


def cmd_decompose(args, cfg):
    parts = rep.decompose(_read_rep(args.input), cfg.idempotent_bound)
    _emit({"count": len(parts), "dims": [list(p.dim) for p in parts], "summands": [rep.to_dict(p) for p in parts]})
    return EXIT_OK


def cmd_check_elementary(args, cfg):
    M = _read_rep(args.input)
    out = {"dim": list(M.dim), "regular": False, "elementary": False}
    if not M.is_zero() and bgp.is_regular_rep(M):
        out["regular"] = True
        out["elementary"] = st.is_elementary(M, cfg.subspace_bound)
        if not out["elementary"] and args.witness:
            U, Q = st.nonelementarity_witness(M, cfg.subspace_bound)
            out["witness"] = {"sub_dim": list(U.dim), "U1": U.u1.tolist(), "U2": U.u2.tolist(), "quotient": rep.to_dict(Q)}
    _emit(out)
    return EXIT_OK


def cmd_filtration(args, cfg):
    M = _read_rep(args.input)
    ch = st.elementary_filtration(M, args.strategy, cfg.subspace_bound)
    _emit({
        "strategy": args.strategy,
        "factor_dims": [list(f.dim) for f in ch.factors],
        "factors": [rep.to_dict(f) for f in ch.factors],
        "handles": [{"U1": h.u1.tolist(), "U2": h.u2.tolist()} for h in ch.handles],
    })
    return EXIT_OK


def cmd_find_u12(args, cfg):
    U = st.find_u12(_read_rep(args.input))
    _emit(None if U is None else {"dim": list(U.dim), "U1": U.u1.tolist(), "U2": U.u2.tolist()})
    return EXIT_OK


def _witness_json(w: st.NormalFormWitness) -> dict:
    return {"b1": w.b1.tolist(), "b2": w.b2.tolist(), "g": w.g.tolist()}


def cmd_normal_form(args, cfg):
    M = _read_rep(args.input)
    if M.dim != (2, 2) or M.n != 3:
        raise DomainError("normal forms are defined for 3-arrow modules of dimension (2,2)")
    if bgp.is_regular_rep(M) and rep.is_indecomposable(M) and st.is_elementary(M):
        w = st.x_normal_form(M)
        if w is None:
            raise SearchExhausted("no X normal form found")
        out = {"form": "X", **_witness_json(w), "kappa": int(w.extra[2]), "nu": int(w.extra[3])}
    else:
        variant, w = st.nonelem_normal_form(M)
        out = {"form": f"tree_{variant}", **_witness_json(w)}
    _emit(out)
    return EXIT_OK


def cmd_coeffquiver(args, cfg):
    M = _read_rep(args.input)
    if args.sparsest:
        _emit(st.sparsest_coefficient_quiver(M, cfg.tree_bound))
        return EXIT_OK
    G = st.coefficient_quiver(M)
    if args.dot:
        sys.stdout.write(st.to_dot(G))
    else:
        _emit({"top": G.top, "bottom": G.bottom, "edges": [list(e) for e in G.edges], "tree": st.is_tree(G)})
    return EXIT_OK


def cmd_tree_search(args, cfg):
    hit = st.tree_module_search(_read_rep(args.input), cfg.tree_bound)
    out = {"tree_module": hit is not None}
    if hit is not None:
        out.update(b1=hit[0].tolist(), b2=hit[1].tolist(), g=hit[2].tolist())
    _emit(out)
    return EXIT_OK


def cmd_dimvec(args, cfg):
    v = (args.x, args.y)
    op = args.op
    if op == "q":
        _emit(k0.tits_q(v))
    elif op == "sigma":
        _emit(list(k0.sigma_inv_dim(v) if args.inverse else k0.sigma_dim(v)))
    elif op == "reduce":
        w, word = k0.reduce_to_F(v)
        _emit({"vector": list(w), "word": word})
    elif op == "type":
        t = k0.sigma_type(v)
        _emit(None if t is None else str(t))
    elif op == "exists-elementary":
        _emit(k0.exists_elementary_dim(v))
    return EXIT_OK


def cmd_restrict_k2(args, cfg):
    _emit(rep.to_dict(rep.restrict_k2(_read_rep(args.input), args.b1, args.b2)))
    return EXIT_OK


def cmd_verify_prop5(args, cfg):
    r = st.verify_prop5(args.t, _field(args, cfg))
    _emit(r)
    return EXIT_OK if r["pass"] else EXIT_FAIL


def _write_outputs(args, report, csv_rows):
    text = census.to_json(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.csv:
        Path(args.csv).write_text(census.to_csv(csv_rows))


def _verdict_exit(report: dict) -> int:
    """0 for pass and for closure-gap findings (announced on stderr), 1 for a failed clause."""
    if report["verdict"] == "closure-gap":
        sys.stderr.write(json.dumps({"finding": "closure-gap", "message": "elementary modules found at a dimension "
                                     "vector predicted to have none; see the anomaly list"}) + "\n")
    return EXIT_FAIL if report["verdict"] == "fail" else EXIT_OK


def cmd_census(args, cfg):
    F = _field(args, cfg)
    report = census.run_census(
        args.dim,
        F,
        mode=args.mode,
        n=args.samples or cfg.samples,
        seed=args.seed if args.seed is not None else cfg.seed,
        checks=args.checks.split(",") if args.checks else None,
        jobs=args.jobs or cfg.jobs,
        full_bound=cfg.full_census_bound,
        idempotent_bound=cfg.idempotent_bound,
        tree_bound=cfg.tree_bound,
    )
    _write_outputs(args, report, [report])
    return _verdict_exit(report)


def cmd_verify_theorem(args, cfg):
    F = _field(args, cfg)
    log = (lambda m: print(m, file=sys.stderr)) if args.verbose else None
    report = census.verify_theorem(
        F, samples=args.samples or cfg.samples, seed=args.seed if args.seed is not None else cfg.seed,
        jobs=args.jobs or cfg.jobs, log=log,
    )
    _write_outputs(args, report, report["censuses"])
    return _verdict_exit(report)


# -- parser -------------------------------------------------------------------------


def _add_field_args(p):
    p.add_argument("--q", type=int, help="field order (2, 3, 4, 5, 7, 8, 9, ...)")
    p.add_argument("--p", type=int, help="characteristic (alternative to --q)")
    p.add_argument("--k", type=int, help="extension degree (alternative to --q)")


def _add_input(p):
    p.add_argument("input", nargs="?", default="-", help="representation JSON file (default: stdin)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kronecker",
        description="Representations of the 3-Kronecker quiver over small finite fields.",
        epilog="Exit codes: 0 ok, 1 clause failed, 2 usage, 3 malformed JSON, 4 domain error, 5 bound refused.",
    )
    ap.add_argument("--config", help=f"INI config file (default: ${cfgmod.ENV_VAR} or ./{cfgmod.DEFAULT_PATH})")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make", help="emit a named representation (NAME or NAME:i[,j], see --list)")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true", help="list the available names")
    _add_field_args(p)
    p.set_defaults(func=cmd_make)

    p = sub.add_parser("sigma", help="shift functor: kernel of [M_1 M_2 M_3]: M1^3 -> M2 over M1")
    _add_input(p)
    p.add_argument("--inverse", action="store_true", help="apply the inverse shift (cokernel construction)")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("tau", help="Auslander-Reiten translate, the shift applied twice")
    _add_input(p)
    p.add_argument("--inverse", action="store_true")
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("dual", help="dual representation: spaces swapped, arrows transposed")
    _add_input(p)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("hom", help="basis of Hom(M, N) from the intertwiner equations")
    p.add_argument("source")
    p.add_argument("target")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("decompose", help="split into indecomposable summands via idempotents")
    _add_input(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser(
        "check-elementary",
        help="elementarity: every submodule preprojective or with preinjective factor (non-regular input reports false)",
    )
    _add_input(p)
    p.add_argument("--witness", action="store_true", help="include a regular submodule with regular factor")
    p.set_defaults(func=cmd_check_elementary)

    p = sub.add_parser("filtration", help="filtration with elementary factors, built bottom-up")
    _add_input(p)
    p.add_argument("--strategy", choices=["min_sub", "max_sub"], default="min_sub")
    p.set_defaults(func=cmd_filtration)

    p = sub.add_parser("find-u12", help="submodule of dimension (1,2) generated by an arrow-annihilated vector")
    _add_input(p)
    p.set_defaults(func=cmd_find_u12)

    p = sub.add_parser("normal-form", help="bases and arrow change for a (2,2) module: X pattern or a tree pattern")
    _add_input(p)
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("coeffquiver", help="coefficient quiver in the standard bases")
    _add_input(p)
    p.add_argument("--dot", action="store_true", help="emit a DOT digraph (boxes: M1 basis, circles: M2 basis)")
    p.add_argument("--sparsest", action="store_true", help="search all bases for the fewest edges (exploratory)")
    p.set_defaults(func=cmd_coeffquiver)

    p = sub.add_parser("tree-search", help="exhaustive search for bases giving a tree coefficient quiver")
    _add_input(p)
    p.set_defaults(func=cmd_tree_search)

    p = sub.add_parser("dimvec", help="dimension-vector arithmetic: Tits form, shift, reduction, type")
    p.add_argument("op", choices=["q", "sigma", "reduce", "type", "exists-elementary"])
    p.add_argument("x", type=int)
    p.add_argument("y", type=int)
    p.add_argument("--inverse", action="store_true", help="with 'sigma': the inverse shift (y, 3y - x)")
    p.set_defaults(func=cmd_dimvec)

    p = sub.add_parser("restrict-k2", help="restrict to the 2-Kronecker subquiver spanned by two arrow vectors")
    _add_input(p)
    p.add_argument("--b1", type=_vec, required=True)
    p.add_argument("--b2", type=_vec, required=True)
    p.set_defaults(func=cmd_restrict_k2)

    p = sub.add_parser("verify-prop5", help="exact sequence 0 -> X -> sigma^t X -> sum_{i<t} (sigma^i S1)^2 -> 0")
    p.add_argument("--t", type=int, required=True)
    _add_field_args(p)
    p.set_defaults(func=cmd_verify_prop5)

    for name, func, hlp in (
        ("census", cmd_census, "classify all representations of one dimension vector"),
        ("verify-theorem", cmd_verify_theorem, "run the census plan and the Tits-form cross-check"),
    ):
        p = sub.add_parser(name, help=hlp)
        if name == "census":
            p.add_argument("--dim", type=_pair, required=True, help="dimension vector x,y")
            p.add_argument("--mode", choices=["full", "sample"], default="full")
            p.add_argument("--checks", help=f"comma-separated subset of {','.join(census.CHECKS)}")
        else:
            p.add_argument("--verbose", action="store_true")
        _add_field_args(p)
        p.add_argument("--samples", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--jobs", type=int)
        p.add_argument("--out", help="write the JSON report here (default: stdout)")
        p.add_argument("--csv", help="also write a CSV summary here")
        p.set_defaults(func=func)
    return ap


def _error(kind: str, exc: Exception, code: int) -> int:
    payload = {"error": kind, "message": str(exc), "exit_code": code}
    if isinstance(exc, RefusalError):
        payload.update(required=exc.required, limit=exc.limit)
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = cfgmod.load(args.config) if args.config else cfgmod.load()
        return args.func(args, cfg)
    except MalformedInput as exc:
        return _error("malformed_json", exc, EXIT_JSON)
    except RefusalError as exc:
        return _error("refused", exc, EXIT_REFUSED)
    except (DomainError, ContractViolation) as exc:
        return _error("domain", exc, EXIT_DOMAIN)
    except SearchExhausted as exc:
        return _error("search_exhausted", exc, EXIT_FAIL)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
