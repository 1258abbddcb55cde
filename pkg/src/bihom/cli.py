"""Command-line front end: ``bihom COMMAND ALGEBRA.json [options]``.

Commands run the pipeline validate -> decompose -> classes -> ideals ->
analyze up to the requested stage.  Exit status is 0 whenever the analysis
completes, whatever the verdicts say; operational problems (unreadable input,
missing H, divergent orbits) give status 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .algebra import (TwistError, compute_J, J_VARIANTS, lj_vanishes, validate_structure,
                      yau_twist, SuperAlgebra)
from .connections import DEFAULT_ORBIT_BOUND, OrbitDivergence, RootContext, connection_classes
from .decomposition import (LIE_ANNIHILATOR_VARIANTS, direct_sum_check, lambda_partition_J,
                            lie_annihilator, maximal_length_check, primary_decomposition,
                            root_multiplicativity_check, simplicity_report, annihilator)
from .io import LoadError, algebra_to_dict, load_algebra, load_fixture
from .linalg import Matrix, format_scalar, span
from .roots import RootSystemError, check_maximal_abelian, find_root_system, verify_root_lemmas

COMMANDS = ("validate", "twist", "decompose", "classes", "ideals", "analyze")
STAGES = {c: k for k, c in enumerate(COMMANDS) if c != "twist"}


class OperationalError(Exception):
    pass


@dataclass(frozen=True)
class AnalysisConfig:
    input: str
    command: str
    H: tuple | None = None
    orbit_bound: int = DEFAULT_ORBIT_BOUND
    strict_connections: bool = True
    literal_maximal_length: bool = False
    lie_annihilator: str = "printed"
    j_generators: str = "printed"
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.orbit_bound < 1:
            raise ValueError("orbit bound must be at least 1")

    def switches(self) -> dict:
        return {"strict_connections": self.strict_connections,
                "orbit_bound": self.orbit_bound,
                "literal_maximal_length": self.literal_maximal_length,
                "lie_annihilator": self.lie_annihilator,
                "j_generators": self.j_generators,
                "H": None if self.H is None else list(self.H)}


def _vec(v) -> list:
    return [format_scalar(x) for x in v]


def _space(s) -> dict:
    return {"dim": s.dim, "basis": [_vec(v) for v in s.basis]}


def _load(path: str) -> SuperAlgebra:
    if path.startswith("fixture:"):
        return load_fixture(path.split(":", 1)[1])
    return load_algebra(path)


def _resolve_H(a: SuperAlgebra, cfg: AnalysisConfig):
    idx = cfg.H if cfg.H is not None else a.H
    if idx is None:
        raise OperationalError("no H given: the algebra file has no H field and --H was not used")
    out = []
    for h in idx:
        if isinstance(h, str) and h in a.basis_names:
            out.append(a.basis_names.index(h))
        else:
            try:
                k = int(h)
            except ValueError:
                raise OperationalError(f"--H entry {h!r} is not a basis index or label") from None
            if not 0 <= k < a.dim:
                raise OperationalError(f"--H index {k} out of range")
            out.append(k)
    return span([a.basis_vector(k) for k in out], a.dim)


# -- stages -----------------------------------------------------------------------

def _validate_section(a: SuperAlgebra) -> dict:
    return {"algebra": {"name": a.name, "dimension": a.dim, "basis": list(a.basis_names),
                        "parity": list(a.parity)},
            "validation": validate_structure(a).to_dict()}


def _decompose_section(a, H) -> tuple:
    try:
        d = find_root_system(a, H)
    except RootSystemError as e:
        raise OperationalError(str(e)) from None
    lem = verify_root_lemmas(a, d)
    mx = check_maximal_abelian(a, H)
    sec = {
        "H": _space(H),
        "split": d.split_ok,
        "reasons": list(d.reasons),
        "uncaptured_dim": d.uncaptured_dim,
        "H_abelian": d.H_abelian.to_dict(),
        "operators_commute": d.operators_commute.to_dict(),
        "zero_space": {"even": _space(d.L0.even), "odd": _space(d.L0.odd)},
        "roots": [{"values": _vec(r.values), "even": _space(d.spaces[r].even),
                   "odd": _space(d.spaces[r].odd)} for r in d.roots],
        "root_lemmas": lem.to_dict(),
        "maximal_abelian": mx.to_dict(),
    }
    return d, sec


def _classes_section(d, cfg) -> tuple:
    ctx = RootContext.from_decomposition(d, cfg.orbit_bound, cfg.strict_connections)
    try:
        part = connection_classes(ctx)
    except OrbitDivergence as e:
        raise OperationalError(f"orbit divergence at root {_vec(e.root)} (bound {e.bound})") from None
    return part, {"count": len(part), "classes": [c.to_dict() for c in part],
                  "chains": [ch.to_dict() for ch in part.chains]}


def _ideals_section(a, d, part) -> tuple:
    p = primary_decomposition(a, d, part)
    ds = direct_sum_check(a, d, p)
    return p, {**p.to_dict(), "direct_sum": ds.to_dict()}


def _analyze_section(a, d, p, cfg) -> dict:
    jd = compute_J(a, cfg.j_generators)
    J = jd.space
    jp = lambda_partition_J(a, d, J)
    ml = maximal_length_check(d, cfg.literal_maximal_length)
    rm = root_multiplicativity_check(a, d, jp, cfg.literal_maximal_length)
    Z = annihilator(a)
    zl = {v: lie_annihilator(a, d, jp, v) for v in LIE_ANNIHILATOR_VARIANTS}
    sr = simplicity_report(a, d, cfg.orbit_bound, cfg.strict_connections, cfg.literal_maximal_length,
                           cfg.lie_annihilator, prim=p, part=jp)
    return {
        "J": {"generators": cfg.j_generators, "space": _space(J),
              "generating_set": _space(jd.generators),
              "L_J_zero": jd.annihilated_by_L.to_dict(),
              "J_L_zero": jd.annihilates_L.to_dict()},
        "J_partition": jp.to_dict(),
        "maximal_length": ml.to_dict(),
        "root_multiplicativity": rm.to_dict(),
        "annihilator": _space(Z),
        "lie_annihilator": {"selected": cfg.lie_annihilator,
                            **{v: _space(s) for v, s in zl.items()}},
        "simplicity": sr.to_dict(),
    }


def _twist_report(a: SuperAlgebra) -> dict:
    """Twist the bracket of ``a`` by its own maps (the bracket is read as untwisted)."""
    n = a.dim
    base = SuperAlgebra(a.basis_names, a.parity, a.products, Matrix.identity(n), Matrix.identity(n),
                        a.name, a.H)
    try:
        t = yau_twist(base, a.phi, a.psi, name=f"{a.name}-twisted" if a.name else "")
    except TwistError as e:
        return {"ok": False, "reason": str(e)}
    return {"ok": True, "algebra": algebra_to_dict(t), "validation": validate_structure(t).to_dict()}


def run(cfg: AnalysisConfig) -> tuple:
    """Execute ``cfg``; returns ``(exit_status, report_dict)``."""
    report = {"header": {"tool": "bihom", "version": __version__, "command": cfg.command,
                         "input": cfg.input, "switches": cfg.switches()},
              "operational_errors": [], "verdicts": {}}
    v = report["verdicts"]
    try:
        a = _load(cfg.input)
        if cfg.command == "twist":
            v["twist"] = _twist_report(a)
            return 0, report
        v.update(_validate_section(a))
        stage = STAGES[cfg.command]
        if stage >= STAGES["decompose"]:
            H = _resolve_H(a, cfg)
            d, v["decomposition"] = _decompose_section(a, H)
        if stage >= STAGES["classes"]:
            part, v["connection_classes"] = _classes_section(d, cfg)
        if stage >= STAGES["ideals"]:
            p, v["ideals"] = _ideals_section(a, d, part)
        if stage >= STAGES["analyze"]:
            v.update(_analyze_section(a, d, p, cfg))
    except LoadError as e:
        report["operational_errors"].append(e.to_dict())
        return 2, report
    except OperationalError as e:
        report["operational_errors"].append({"error": str(e)})
        return 2, report
    return 0, report


# -- rendering ------------------------------------------------------------------------

def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _render_text(x, indent: int, out: list) -> None:
    pad = "  " * indent
    if isinstance(x, dict):
        for k, val in x.items():
            if isinstance(val, (dict, list)) and val and not _flat(val):
                out.append(f"{pad}{k}:")
                _render_text(val, indent + 1, out)
            else:
                out.append(f"{pad}{k}: {_inline(val)}")
    elif isinstance(x, list):
        for item in x:
            if isinstance(item, (dict, list)) and not _flat(item):
                out.append(f"{pad}-")
                _render_text(item, indent + 1, out)
            else:
                out.append(f"{pad}- {_inline(item)}")
    else:
        out.append(f"{pad}{_inline(x)}")


def _flat(x) -> bool:
    if isinstance(x, list):
        return all(not isinstance(i, (dict, list)) or (isinstance(i, list) and _flat(i)) for i in x)
    return False


def _inline(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return "-"
    if isinstance(x, list):
        return "[" + ", ".join(_inline(i) for i in x) + "]"
    if isinstance(x, dict):
        return "{}" if not x else json.dumps(x)
    return str(x)


def render_text(report: dict) -> str:
    out = []
    _render_text(report, 0, out)
    return "\n".join(out) + "\n"


# -- argument parsing ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bihom", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "validate": "check the grading, the maps and the superidentity",
        "twist": "Yau-twist the bracket by the file's phi and psi",
        "decompose": "root-space decomposition with respect to H",
        "classes": "connection classes of roots",
        "ideals": "class ideals and the decomposition of the algebra",
        "analyze": "everything, including J, maximal length and simplicity",
    }
    for name in COMMANDS:
        s = sub.add_parser(name, help=helps[name])
        s.add_argument("input", help="algebra JSON file, or fixture:NAME")
        s.add_argument("--H", help="comma-separated basis indices or labels spanning H")
        s.add_argument("--orbit-bound", type=int, default=DEFAULT_ORBIT_BOUND)
        g = s.add_mutually_exclusive_group()
        g.add_argument("--strict-connections", dest="strict", action="store_true", default=True,
                       help="twist exponents in N only (default)")
        g.add_argument("--relaxed-connections", dest="strict", action="store_false",
                       help="allow integer twist exponents")
        s.add_argument("--literal-maximal-length", action="store_true",
                       help="require dimension one in both parities of every root space")
        s.add_argument("--lie-annihilator", choices=LIE_ANNIHILATOR_VARIANTS, default="printed")
        s.add_argument("--J-generators", dest="j_generators", choices=J_VARIANTS, default="printed")
        s.add_argument("--format", choices=("json", "text"), default="json")
        s.add_argument("--output", help="write the report here instead of standard output")
    return p


def config_from_args(ns: argparse.Namespace) -> AnalysisConfig:
    H = None if ns.H is None else tuple(x.strip() for x in ns.H.split(",") if x.strip())
    return AnalysisConfig(ns.input, ns.command, H, ns.orbit_bound, ns.strict,
                          ns.literal_maximal_length, ns.lie_annihilator, ns.j_generators,
                          ns.output, ns.format)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except ValueError as e:
        parser.error(str(e))
    status, report = run(cfg)
    text = render_json(report) if cfg.format == "json" else render_text(report)
    if cfg.output:
        try:
            Path(cfg.output).write_text(text, encoding="utf-8")
        except OSError as e:
            print(f"bihom: cannot write {cfg.output}: {e.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    for err in report["operational_errors"]:
        print(f"bihom: {err['error']}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
