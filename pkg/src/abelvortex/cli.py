"""``vortexctl``: polytope checks, Delzant data, moduli classification, PDE solves.

Exit codes: 0 for any valid answer (including "no solutions" and clean
infeasibility verdicts), 2 for bad input, 3 for internal inconsistencies and
4 when Newton fails to converge.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import __version__
from . import _exact as ex
from . import delzant as dz
from . import moduli, schemas
from .errors import (ConvergenceError, InfeasibleError, InvalidInputError, NoLiftError,
                     VortexError)
from .jsonio import dumps
from .polytope import (DEFAULT_EPS, LatticePolytope, barycentre, is_delzant,
                       nonempty_facet_intersections, volume)
from .targets import CPnModel, CnModel, model_from_json

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_NOT_CONVERGED = 0, 2, 3, 4


class InternalError(Exception):
    pass


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path} is not valid JSON: {exc}") from exc


def _polytope(obj) -> LatticePolytope:
    schemas.validate(obj, schemas.POLYTOPE_INPUT)
    return LatticePolytope.from_json(obj.get("polytope", obj))


def _frac_list(xs):
    return [ex.fraction_str(x) for x in xs]


# ---------------------------------------------------------------- commands

def cmd_polytope(obj, args) -> tuple[dict, int]:
    P = _polytope(obj)
    cert = is_delzant(P)
    report = {
        "delzant": cert.is_delzant,
        "vertices": [_frac_list(v) for v in P.vertices],
        "volume": ex.fraction_str(volume(P)),
        "barycentre": _frac_list(barycentre(P)),
        "patterns": dz.sorted_patterns(nonempty_facet_intersections(P)),
        "facets": P.to_json(),
    }
    if not cert.is_delzant:
        report["failing_vertices"] = cert.failing_vertices()
    return report, EXIT_OK


def cmd_delzant(obj, args) -> tuple[dict, int]:
    return dz.build(_polytope(obj)).to_json(), EXIT_OK


def _base_data(base: dict, n: int) -> moduli.BaseBundleData:
    if "alpha" in base:
        data = moduli.BaseBundleData.surface(base["alpha"], base["volume"], base["a"],
                                             base.get("genus"))
    else:
        data = moduli.BaseBundleData(len(base["pairing_deg"]), float(base["volume"]),
                                     base["pairing_deg"], base["pairing_self"],
                                     float(base["a"]), base.get("genus"))
    if data.n != n:
        raise InvalidInputError(f"target has rank {n} but bundle data has rank {data.n}")
    return data


def cmd_classify(obj, args) -> tuple[dict, int]:
    schemas.validate(obj, schemas.CLASSIFY_INPUT)
    target = model_from_json(obj["target"])
    data = _base_data(obj["base"], target.n)
    cap = args.cap if args.cap is not None else obj.get("cap", moduli.DEFAULT_CAP)
    eps = args.eps if args.eps is not None else obj.get("eps", DEFAULT_EPS)
    if cap < 0:
        raise InvalidInputError("cap must be non-negative")
    verdict = moduli.existence_verdict(target, data, eps)
    report = {
        "c": list(verdict.c_real),
        "c_pi_units": list(verdict.c),
        "verdict": verdict.status,
        "face": verdict.location.to_json(),
        "message": verdict.message,
        "caveat": verdict.caveat,
        "components": [],
    }
    if verdict.status == "interior":
        if not data.is_surface:
            report["diagnostic"] = "classification is only available over a Riemann surface"
            return report, EXIT_OK
        try:
            desc = moduli.classify(target, data, cap, eps)
        except NoLiftError as exc:
            raise InternalError(str(exc)) from exc
        report["components"] = [c.to_json() for c in desc]
        report["completeness"] = desc.completeness
        report["truncated_at_cap"] = cap if desc.truncated else None
        if desc.diagnostic:
            report["diagnostic"] = desc.diagnostic
    return report, EXIT_OK


def _predicted_energy(model: str, t: float, a: float, volume: float, n1: int, n0: int):
    if model == "C":
        target = CnModel([[1]], [Fraction(t / math.pi)])
        return moduli.energy_topological(target, moduli.BaseBundleData.surface([n1], volume, a))
    target = CPnModel([[1]], [Fraction(t / math.pi)])
    data = moduli.BaseBundleData.surface([n1 - n0], volume, a)
    return moduli.energy_topological(target, data, (n0, n1))


def cmd_solve(obj, args) -> tuple[dict, int]:
    from . import pde

    schemas.validate(obj, schemas.SOLVE_INPUT)
    if "t_pi" in obj:
        t = math.pi * float(ex.to_fraction(obj["t_pi"]))
    else:
        t = float(obj.get("t", obj.get("t_real")))
    a = float(obj["a"])
    grid = pde.TorusGrid(float(obj["torus"]["Lx"]), float(obj["torus"]["Ly"]), *obj["grid"])
    vort = pde.sources_from_points(grid, obj.get("vortices", []))
    anti = pde.sources_from_points(grid, obj.get("antivortices", []))
    newton = obj.get("newton", {})
    kw = dict(tol=float(newton.get("tol", pde.DEFAULT_TOL)),
              max_iter=int(newton.get("max_iter", pde.DEFAULT_MAX_ITER)), strict=False)
    n1 = sum(s.multiplicity for s in vort)
    n0 = sum(s.multiplicity for s in anti)
    try:
        if obj["model"] == "C":
            if anti:
                raise InvalidInputError("the C target has no antivortices")
            sol = pde.solve_taubes(grid, a, t, vort, **kw)
        else:
            sol = pde.solve_cp1(grid, a, t, vort, anti, **kw)
    except InfeasibleError as exc:
        return {"converged": False, "reason": exc.reason, "message": str(exc)}, EXIT_OK
    predicted = _predicted_energy(obj["model"], t, a, grid.volume, n1, n0)
    if not sol.converged:
        return {"converged": False, "reason": "newton_not_converged",
                "iterations": sol.iterations, "residual": sol.residual_norm,
                "residual_history": sol.residual_history, "predicted_energy": predicted,
                }, EXIT_NOT_CONVERGED
    if args.dump_field:
        pde.write_field_csv(sol, args.dump_field)
    report = {
        "converged": True,
        "iterations": sol.iterations,
        "residual": sol.residual_norm,
        "moment_mean_error": abs(pde.moment_mean(sol) - sol.c),
        "energy": pde.total_energy(sol),
        "predicted_energy": predicted,
    }
    return report, EXIT_OK


COMMANDS = {
    "polytope": (cmd_polytope, schemas.POLYTOPE_OUTPUT),
    "delzant": (cmd_delzant, schemas.DELZANT_OUTPUT),
    "classify": (cmd_classify, schemas.CLASSIFY_OUTPUT),
    "solve": (cmd_solve, schemas.SOLVE_OUTPUT),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vortexctl", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", "-i", required=True)
        sp.add_argument("--output", "-o")
        if name == "classify":
            sp.add_argument("--cap", type=int)
            sp.add_argument("--eps", type=float)
        if name == "solve":
            sp.add_argument("--dump-field", metavar="CSV")
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    args.cap = getattr(args, "cap", None)
    args.eps = getattr(args, "eps", None)
    args.dump_field = getattr(args, "dump_field", None)
    fn, out_schema = COMMANDS[args.command]
    try:
        report, code = fn(_load(args.input), args)
        schemas.validate(report, out_schema, "output", InternalError)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_NOT_CONVERGED
    except (InternalError, AssertionError, VortexError) as exc:
        print(f"internal error: {exc}", file=stderr)
        return EXIT_INTERNAL
    text = dumps(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if code == EXIT_NOT_CONVERGED:
        print("error: Newton iteration did not converge", file=stderr)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
