"""Command line interface: ``htriang <command> FILE [flags]``.

FILE is a path to an ``.htri`` file or the name of a bundled example
(fig8, s2xs1, l31).  Exit codes: 0 success, 1 a check failed, 2 bad input.
Every json payload carries ``"schema": "htriang.<command>/1"``.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .complex import TriangulationError, parse_htriangulation, serialize, validate_particular
from .gluing import solve_numeric
from .homology import homology
from .isomap import (NoIntegerSolution, f_map, g_map, gl2_check, image_kernel, numeric_transport, setup,
                     verify_f, verify_iso)
from .kashaev import simplify

SCHEMA_VERSION = 1
EXAMPLES = {"fig8": "", "s2xs1": "", "l31": "reconstructed"}


@dataclass
class CommandResult:
    code: int
    text: str
    payload: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Example:
    name: str
    text: str
    tags: tuple = ()


def bundled_examples() -> list[Example]:
    base = resources.files("htriang") / "data"
    out = []
    for name, tag in EXAMPLES.items():
        out.append(Example(name, (base / f"{name}.htri").read_text(), (tag,) if tag else ()))
    return out


def load(spec: str):
    p = Path(spec)
    if p.exists():
        text = p.read_text()
    else:
        ex = {e.name: e for e in bundled_examples()}
        if spec not in ex:
            raise FileNotFoundError(f"no such file or bundled example: {spec}")
        text = ex[spec].text
    return parse_htriangulation(text)


def _fmt(x: complex) -> str:
    return f"{x.real:+.12f}{x.imag:+.12f}i"


# ---------------------------------------------------------------- commands

def cmd_validate(tr, args):
    rep = validate_particular(tr)
    payload = {"ok": rep.ok, "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in rep.checks]}
    return CommandResult(0 if rep.ok else 1, rep.text(), payload)


def cmd_homology(tr, args):
    hs = {k: homology(tr, k) for k in (0, 1, 2, 3)}
    text = "\n".join(f"H_{k} = {h}" for k, h in hs.items())
    return CommandResult(0, text, {f"H{k}": str(h) for k, h in hs.items()})


def cmd_collapse(tr, args):
    st = setup(tr)
    text = serialize(st.it)
    return CommandResult(0, text.rstrip("\n"), {"itri": text, "tet_map": {str(k): v for k, v in st.corr.tet_map.items()}})


def cmd_gluing(tr, args):
    st = setup(tr)
    gs = st.gs
    lines = [f"tet {i}: {', '.join(t)}" for i, t in enumerate(gs.sa.names)]
    lines += [str(eq) for eq in gs.equations]
    if gs.degenerate:
        lines.append(f"degenerate: edges {list(gs.degenerate_edges)} have a single preimage")
    return CommandResult(0, "\n".join(lines), gs.to_json())


def _solve(st, args):
    if st.gs.degenerate:
        raise ValueError("degenerate gluing system: the deformation variety is empty")
    return solve_numeric(st.gs, retries=args.retries, seed=args.seed, accept=args.tol)


def cmd_solve(tr, args):
    st = setup(tr)
    try:
        res = _solve(st, args)
    except ValueError as exc:
        return CommandResult(1, str(exc), {"points": [], "flag": "empty"})
    lines = [f"attempts: {res.attempts}, points: {len(res)} ({res.flag})"]
    pts = []
    for k, p in enumerate(res):
        lines.append(f"point {k}: residual {p.residual:.2e}, {p.label}")
        lines += [f"  {nm} = {_fmt(v)}" for nm, v in p.values.items()]
        pts.append({"values": {nm: [v.real, v.imag] for nm, v in p.values.items()},
                    "residual": p.residual, "isolated": p.isolated})
    return CommandResult(0 if res.points else 1, "\n".join(lines), {"points": pts, "flag": res.flag})


def cmd_ring(tr, args):
    st = setup(tr)
    if args.simplify:
        r = simplify(st.pres)
        lines = r.lines()
        lines.append(f"unit skeleton: {r.skeleton().invariants()}")
        if r.one_element:
            lines.append(f"one-element ring: {r.vanishing[0]} = 0")
        payload = r.to_json() | {"one_element": r.one_element}
        return CommandResult(0, "\n".join(lines), payload)
    lines = st.pres.relation_lines()
    if st.pres.lemma is not None:
        lines += ["lemma: " + s for s in st.pres.lemma.lines()]
    lines.append(f"unit skeleton: {st.rh.invariants()}")
    return CommandResult(0, "\n".join(lines), st.pres.to_json() | {"skeleton": str(st.rh.invariants())})


def _diagnose_lines(st, fmap):
    d = image_kernel(st, fmap)
    return d.lines(), d.to_json()


def cmd_map(tr, args):
    st = setup(tr)
    fmap = f_map(st.corr, st.tc, st.sa, st.pres)
    lines = [f"f({z}) = {m}" for z, m in fmap.assignment.items()]
    payload = {"f": fmap.to_json()}
    code = 0
    one = st.ri_one_element or st.rh_one_element
    if args.verify:
        gmap = None
        if not one:
            try:
                gmap = g_map(st)
            except NoIntegerSolution as exc:
                lines.append(f"g not constructed: {exc}")
        if gmap is not None:
            lines += [f"g({u}) = {m}" for u, m in gmap.assignment.items()]
            payload["g"] = gmap.to_json()
        if gmap is not None or one:
            rep = verify_iso(st, fmap, gmap)
        else:
            rep = verify_f(fmap, st.gs, st.rh, st.pres, st.corr)
            rep.status = "not an isomorphism" if rep.ok else "failed"
            rep.add("inverse map constructed", False, "H_1 is nonzero")
        lines += rep.lines()
        payload["verify"] = rep.to_json()
        code = 0 if rep.ok else 1
    if args.diagnose:
        if one:
            lines.append("both rings have one element: nothing to diagnose")
        else:
            dl, dj = _diagnose_lines(st, fmap)
            lines += dl
            payload["diagnostics"] = dj
    return CommandResult(code, "\n".join(lines), payload)


def cmd_diagnose(tr, args):
    """Everything in one pass: validation, homology, f, g or diagnostics, numerics."""
    lines, payload, code = [], {}, 0
    val = validate_particular(tr)
    lines.append(f"validation: {'pass' if val.ok else 'FAIL'}")
    if not val.ok:
        lines += val.failures()
        return CommandResult(1, "\n".join(lines), {"validation": False})
    h1 = homology(tr, 1)
    lines.append(f"H_1 = {h1}")
    st = setup(tr)
    lines += [str(eq) for eq in st.gs.equations]
    fmap = f_map(st.corr, st.tc, st.sa, st.pres)
    payload.update({"H1": str(h1), "equations": [str(eq) for eq in st.gs.equations], "f": fmap.to_json()})
    if st.ri_one_element or st.rh_one_element:
        rep = verify_iso(st, fmap, None)
        lines += rep.lines()
        payload["verify"] = rep.to_json()
        return CommandResult(0 if rep.ok else 1, "\n".join(lines), payload)
    wd = verify_f(fmap, st.gs, st.rh, st.pres, st.corr)
    lines.append(f"f: {wd.status}")
    if not wd.ok:
        code = 1
    gmap = None
    if h1.trivial:
        gmap = g_map(st)
        rep = verify_iso(st, fmap, gmap)
        lines += rep.lines()
        payload["verify"] = rep.to_json()
        code = code or (0 if rep.ok else 1)
    else:
        dl, dj = _diagnose_lines(st, fmap)
        lines += dl
        payload["diagnostics"] = dj
    res = _solve(st, args)
    if res.points:
        p = res[0]
        lines.append(f"solution residual: {p.residual:.2e}")
        payload["solution_residual"] = p.residual
        if gmap is not None:
            tr_rep = numeric_transport(st, gmap, p.values)
            gl = gl2_check(st, tr_rep)
            lines.append(f"transport residual: {tr_rep.max_residual:.2e}")
            lines.append(f"GL2 residual: {gl.max_residual:.2e}")
            payload["transport_residual"] = tr_rep.max_residual
            payload["gl2_residual"] = gl.max_residual
            if not (tr_rep.ok(args.tol) and gl.max_residual < args.tol):
                code = 1
    else:
        lines.append(f"no solution found ({res.flag})")
    return CommandResult(code, "\n".join(lines), payload)


COMMANDS = {
    "validate": cmd_validate,
    "homology": cmd_homology,
    "collapse": cmd_collapse,
    "gluing": cmd_gluing,
    "solve": cmd_solve,
    "ring": cmd_ring,
    "map": cmd_map,
    "diagnose": cmd_diagnose,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="htriang", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help=".htri path or bundled example name")
    common.add_argument("--tol", type=float, default=1e-9, help="numeric acceptance tolerance (default 1e-9)")
    common.add_argument("--retries", type=int, default=8, help="random Newton restarts (default 8)")
    common.add_argument("--seed", type=int, default=0, help="seed for the restarts (default 0)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("-o", "--output", metavar="PATH", help="write the output here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "ring":
            sp.add_argument("--simplify", action="store_true", help="Tietze-reduce the presentation")
        if name == "map":
            sp.add_argument("--verify", action="store_true", help="build g and check both compositions")
            sp.add_argument("--diagnose", action="store_true", help="image, cokernel and kernel of f")
    return ap


def run(argv) -> CommandResult:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return CommandResult(2 if exc.code else 0, "", {})
    try:
        tr = load(args.file)
    except (OSError, TriangulationError) as exc:
        return CommandResult(2, f"error: {exc}", {"error": str(exc)})
    try:
        res = COMMANDS[args.command](tr, args)
    except (TriangulationError, ValueError) as exc:
        res = CommandResult(2, f"error: {exc}", {"error": str(exc)})
    res.payload = {"schema": f"htriang.{args.command}/{SCHEMA_VERSION}", "exit": res.code} | res.payload
    res.payload.setdefault("text", res.text)
    args_fmt = args.format
    out = json.dumps(res.payload, indent=2, default=str) if args_fmt == "json" else res.text
    if args.output:
        Path(args.output).write_text(out + "\n")
    else:
        print(out)
    return res


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv).code


if __name__ == "__main__":
    sys.exit(main())
