"""Command-line interface: classify, generate, verify, scan-coincidence.

Exit codes: 0 success, 1 generic failure, 2 no admissible surface for the
given constants (the violated inequality is printed), 3 malformed profile
CSV.  Precedence for settings is flags > config file > defaults; the
config file is a flat ``key = value`` text format using the long flag
names.  The environment variable LWSURF_LOG sets the log level.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import os
import sys
import warnings

import numpy as np

from .assembler import (
    AssembledSurface,
    GluingMismatch,
    Recipe,
    Topology,
    cylinder,
    glue,
)
from .normgeom import NormParameter
from .quadrature import EndpointKind, ToleranceError
from .solver import (
    IllConditionedWarning,
    NoSurfaceError,
    SolveRequest,
    WeingartenRelation,
    RelationForm,
    classify,
    solve,
    solve_constant_k1,
    solve_constant_k2,
)
from .verify import residual_scan_table

log = logging.getLogger("lwsurf")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_SURFACE = 2
EXIT_BAD_CSV = 3


class CsvFormatError(ValueError):
    """Profile CSV does not match the alpha,u,du format."""


DEFAULTS = {
    "m": 2,
    "lam": 1.0,
    "mu": 0.0,
    "c1": 0.0,
    "c2": 1.0,
    "shift": 0.0,
    "sign": 1,
    "samples": 512,
    "tol": 1e-10,
    "epsilon": 1e-3,
    "verify_tol": 1e-6,
    "segments": 96,
    "piece": 0,
    "height": 1.0,
}


# ---------------------------------------------------------------------------
# config plumbing


def _read_config(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, val = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key == "lambda":
                key = "lam"
            values[key] = val
    return values


_INT_KEYS = {"m", "sign", "samples", "segments", "piece", "steps"}


def _merge_settings(args: argparse.Namespace) -> dict:
    settings = dict(DEFAULTS)
    cfg_path = getattr(args, "config", None)
    if cfg_path:
        for key, val in _read_config(cfg_path).items():
            if key in _INT_KEYS:
                settings[key] = int(val)
            elif key in settings or key in ("recipe", "special", "out",
                                            "profile", "report",
                                            "c1_min", "c1_max"):
                settings[key] = (val if key in ("recipe", "special", "out",
                                                "profile", "report")
                                 else float(val))
            else:
                raise ValueError(f"unknown config key {key!r}")
    for key, val in vars(args).items():
        if key in ("config", "command"):
            continue
        if val is not None:
            settings[key] = val
    return settings


def _relation(settings: dict) -> WeingartenRelation:
    return WeingartenRelation.linear(settings["lam"], settings["mu"])


def _request(settings: dict) -> SolveRequest:
    return SolveRequest(
        p=NormParameter(settings["m"]), relation=_relation(settings),
        c1=settings["c1"], c2=settings["c2"], shift=settings["shift"],
        sign=settings["sign"], samples=settings["samples"],
        tol=settings["tol"])


# ---------------------------------------------------------------------------
# writers


def _fmt(x: float) -> str:
    return f"{x:.13e}"


def write_profile_csv(path: str, alpha, u, du) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("alpha,u,du\n")
        for a, uu, d in zip(alpha, u, du):
            fh.write(f"{_fmt(a)},{_fmt(uu)},{_fmt(d)}\n")


def read_profile_csv(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CsvFormatError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0].strip() != "alpha,u,du":
        raise CsvFormatError("missing alpha,u,du header line")
    rows = []
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise CsvFormatError(f"line {lineno}: expected 3 columns")
        try:
            row = [float(part) for part in parts]
        except ValueError as exc:
            raise CsvFormatError(f"line {lineno}: non-numeric entry") from exc
        if not all(math.isfinite(v) for v in row):
            raise CsvFormatError(f"line {lineno}: non-finite entry")
        rows.append(row)
    if len(rows) < 2:
        raise CsvFormatError("profile needs at least 2 rows")
    data = np.array(rows)
    return data[:, 0], data[:, 1], data[:, 2]


def write_obj(path: str, alpha, u, segments: int) -> None:
    """Revolved mesh; the v = 0 seam ring is duplicated at v = 2*pi."""
    alpha = np.asarray(alpha, dtype=float)
    u = np.asarray(u, dtype=float)
    n = len(alpha)
    rings = segments + 1
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i in range(n):
            for j in range(rings):
                v = 2.0 * math.pi * j / segments
                x = alpha[i] * math.cos(v)
                y = alpha[i] * math.sin(v)
                fh.write(f"v {x:.10e} {y:.10e} {u[i]:.10e}\n")
        for i in range(n - 1):
            for j in range(segments):
                a = i * rings + j + 1
                b = (i + 1) * rings + j + 1
                fh.write(f"f {a} {b} {b + 1}\n")
                fh.write(f"f {a} {b + 1} {a + 1}\n")


def _json_dump(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# recipe assembly


_CRITICAL = {
    # recipes pinned to the double-root constant, computed from lam
    "C6": lambda lam: 1.0 / ((lam + 1.0) * (-lam) ** (-lam)),
    "C9": lambda lam: -1.0 / ((-(lam + 1.0))
                              * (-(lam + 1.0) + 1.0) ** (-(lam + 1.0) + 1.0)),
}

# which solve() piece carries the outer branch used by each recipe
_PIECE_INDEX = {"C2": 1, "C3": 1, "C6": 1, "C7": 1, "C9": 1, "C10": 1}


def build_assembly(settings: dict, recipe_name: str) -> AssembledSurface:
    p = NormParameter(settings["m"])
    samples = settings["samples"]
    lam = settings["lam"]
    c1 = settings["c1"]
    recipe = Recipe(recipe_name)

    if recipe is Recipe.TORUS_4III:
        b1 = solve_constant_k1(p, 1.0, c1, samples=samples)
        b2 = solve_constant_k1(p, -1.0, -c1, samples=samples)
        return glue(b1, b2, recipe)

    if recipe is Recipe.CAP:
        req = _request(settings)
        plus = solve(req)
        minus = solve(dataclasses.replace(req, sign=-req.sign))
        for bp, bm in zip(plus, minus):
            dom, a0 = bp.domain, bp.anchor[0]
            at_lower = (dom.lower_kind is EndpointKind.SIMPLE_ROOT
                        and abs(a0 - dom.lower) <= 1e-9 * max(1.0, a0))
            at_upper = (dom.upper_kind is EndpointKind.SIMPLE_ROOT
                        and abs(a0 - dom.upper) <= 1e-9 * max(1.0, a0))
            if at_lower or at_upper:
                return glue(bp, bm, recipe)
        raise GluingMismatch(
            "matching equation violated: no branch with a simple-root cap")

    if recipe_name in _CRITICAL:
        c1 = _CRITICAL[recipe_name](lam)
    idx = _PIECE_INDEX.get(recipe_name, 0)
    lam1 = -1.0 if recipe_name in ("C1-1", "C1-2", "C2", "C3") else lam
    if recipe_name == "C2":
        c1 = 1.0
    rel1 = WeingartenRelation.linear(lam1, 1.0)
    rel2 = WeingartenRelation.linear(lam1, -1.0)
    b1 = solve(SolveRequest(p=p, relation=rel1, c1=c1,
                            samples=samples, tol=settings["tol"]))[idx]
    b2 = solve(SolveRequest(p=p, relation=rel2, c1=-c1,
                            samples=samples, tol=settings["tol"]))[0]
    return glue(b1, b2, recipe)


def _surface_polyline(surface: AssembledSurface):
    alphas, us, dus = [], [], []
    for arc in surface.arcs:
        a, uu = arc.polyline()
        d = arc.branch.du[::-1] if arc.direction == -1 else arc.branch.du
        alphas.append(a)
        us.append(uu)
        dus.append(d)
    return (np.concatenate(alphas), np.concatenate(us), np.concatenate(dus))


def _surface_metadata(surface: AssembledSurface, settings: dict) -> dict:
    return {
        "topology": surface.topology.value,
        "m": surface.p.m,
        "lam": surface.lam,
        "mu": surface.mu,
        "constants": surface.constants,
        "period": surface.period,
        "end_derivative_match": surface.end_derivative_match,
        "may_be_torus": surface.may_be_torus,
        "closure_gap": surface.closure_gap,
        "junctions": [
            {"alpha_star": j.alpha_star, "kind": j.kind,
             "left_case": j.left_case.value, "right_case": j.right_case.value,
             "smoothness": j.smoothness.value, "u_gap": j.u_gap,
             "du_gap": j.du_gap, "k1_left": j.k1_left, "k1_right": j.k1_right}
            for j in surface.junctions
        ],
        "axis_points": [
            {"u": ap.u, "case": ap.case.value,
             "u2_limit_exists": ap.u2_limit_exists,
             "curvatures_extend": ap.curvatures_extend}
            for ap in surface.axis_points
        ],
        "d_errors": [b.quad_error for b in
                     {id(a.branch): a.branch for a in surface.arcs}.values()],
        "settings": {k: settings[k] for k in
                     ("m", "lam", "mu", "c1", "c2", "samples")},
    }


# ---------------------------------------------------------------------------
# subcommands


def _interval_str(dom) -> str:
    hi = "inf" if math.isinf(dom.upper) else f"{dom.upper:.4g}"
    return f"({dom.lower:.4g}, {hi})"


def cmd_classify(settings: dict) -> int:
    if _relation(settings).form is RelationForm.K1_ZERO:
        print("4i, cylinder alpha = const (any radius)")
        return EXIT_OK
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IllConditionedWarning)
        tag, domains = classify(_request(settings))
    for dom in domains:
        print(f"{dom.label or tag.value}, domain {_interval_str(dom)}, "
              f"endpoints {dom.lower_kind.value}/{dom.upper_kind.value}")
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return EXIT_OK


def cmd_generate(settings: dict) -> int:
    out = settings.get("out")
    if not out:
        raise ValueError("generate needs --out PREFIX")
    segments = settings["segments"]
    special = settings.get("special")
    recipe = settings.get("recipe")
    p = NormParameter(settings["m"])

    if special == "cylinder" or (_relation(settings).form is
                                 RelationForm.K1_ZERO and not special):
        radius, height = settings["c2"], settings["height"]
        surface = cylinder(p, radius, height)
        n = max(2, settings["samples"] // 8)
        alpha = np.full(n, radius)
        u = np.linspace(0.0, height, n)
        du = np.zeros(n)
        meta = {"case": "4i", "topology": surface.topology.value,
                "constants": surface.constants, "m": p.m}
    elif recipe:
        surface = build_assembly(settings, recipe)
        alpha, u, du = _surface_polyline(surface)
        meta = _surface_metadata(surface, settings)
        meta["case"] = surface.arcs[0].branch.case.value
        meta["recipe"] = recipe
    else:
        if special == "sphere":
            branch = solve_constant_k2(p, c=settings["shift"],
                                       sign=settings["sign"],
                                       samples=settings["samples"])
            branches = [branch]
        else:
            branches = solve(_request(settings))
        idx = settings["piece"]
        if not 0 <= idx < len(branches):
            raise ValueError(f"piece index {idx} out of range "
                             f"(found {len(branches)} pieces)")
        branch = branches[idx]
        alpha, u, du = branch.alpha, branch.u, branch.du
        meta = {
            "case": branch.case.value, "m": p.m,
            "lam": branch.lam, "mu": branch.mu,
            "domain": [branch.domain.lower, branch.domain.upper],
            "endpoints": [branch.domain.lower_kind.value,
                          branch.domain.upper_kind.value],
            "d_value": None if not math.isfinite(branch.span)
            else branch.span,
            "d_error": branch.quad_error,
            "pieces": [d.label for d in classify(_request(settings))[1]]
            if special != "sphere" else ["4ii"],
            "settings": {k: settings[k] for k in
                         ("m", "lam", "mu", "c1", "c2", "shift", "sign",
                          "samples")},
        }

    write_profile_csv(out + ".csv", alpha, u, du)
    _json_dump(out + ".meta.json", meta)
    if settings.get("obj"):
        write_obj(out + ".obj", alpha, u, segments)
        log.info("wrote %s.obj with %d segments", out, segments)
    print(f"wrote {out}.csv ({len(alpha)} samples), {out}.meta.json"
          + (f", {out}.obj" if settings.get("obj") else ""))
    return EXIT_OK


def cmd_verify(settings: dict) -> int:
    path = settings.get("profile")
    if not path:
        raise ValueError("verify needs --profile FILE.csv")
    alpha, u, du = read_profile_csv(path)
    p = NormParameter(settings["m"])
    report = residual_scan_table(
        p, alpha, u, du, settings["lam"], settings["mu"],
        epsilon=settings["epsilon"], tol=settings["verify_tol"])
    out = settings.get("report")
    if out:
        _json_dump(out, report.as_dict())
    print(report.to_json(indent=2, sort_keys=True))
    return EXIT_OK if report.passed else EXIT_ERROR


def cmd_scan_coincidence(settings: dict) -> int:
    recipe = settings.get("recipe")
    if not recipe:
        raise ValueError("scan-coincidence needs --recipe")
    lo = settings.get("c1_min")
    hi = settings.get("c1_max")
    steps = int(settings.get("steps") or 9)
    if lo is None or hi is None:
        raise ValueError("scan-coincidence needs --c1-min and --c1-max")
    print("# d-value coincidence scan; numeric events only, no torus "
          "existence is claimed")
    print(f"{'c1':>14} {'d_first':>16} {'d_second':>16} {'|diff|':>12} "
          f"{'period':>12}")
    for c1 in np.linspace(float(lo), float(hi), steps):
        row_settings = dict(settings)
        row_settings["c1"] = float(c1)
        try:
            surface = build_assembly(row_settings, recipe)
        except (NoSurfaceError, GluingMismatch, RuntimeError, ValueError,
                IndexError) as exc:
            print(f"{c1:14.6g} skipped: {exc}")
            continue
        d1 = surface.constants.get("d_first", surface.constants.get("d"))
        d1 = math.nan if d1 is None else float(d1)
        d2 = float(surface.constants.get("d_second", math.nan))
        diff = abs(d1 - d2)
        period = surface.period if surface.period is not None else math.nan
        print(f"{c1:14.6g} {d1:16.9g} {d2:16.9g} {diff:12.3e} "
              f"{period:12.3e}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="flat key = value settings file")
    sp.add_argument("--m", type=int, dest="m")
    sp.add_argument("--lambda", type=float, dest="lam")
    sp.add_argument("--mu", type=float, dest="mu")
    sp.add_argument("--c1", type=float, dest="c1")
    sp.add_argument("--c2", type=float, dest="c2")
    sp.add_argument("--shift", type=float, dest="shift")
    sp.add_argument("--sign", type=int, choices=(-1, 1), dest="sign")
    sp.add_argument("--samples", type=int, dest="samples")
    sp.add_argument("--tol", type=float, dest="tol")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lwsurf",
        description="Rotational linear Weingarten surfaces in the "
                    "((x1^2+x2^2)^m + x3^(2m))^(1/2m) normed space")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classify", help="case tag and admissible intervals")
    _add_common(sp)

    sp = sub.add_parser("generate", help="profile CSV / OBJ mesh / metadata")
    _add_common(sp)
    sp.add_argument("--out", help="output prefix")
    sp.add_argument("--obj", action="store_true", default=None,
                    help="also write a revolved OBJ mesh")
    sp.add_argument("--segments", type=int, dest="segments")
    sp.add_argument("--piece", type=int, dest="piece",
                    help="which maximal interval to sample")
    sp.add_argument("--special", choices=("sphere", "cylinder"))
    sp.add_argument("--height", type=float, dest="height")
    sp.add_argument("--recipe", choices=[r.value for r in Recipe])

    sp = sub.add_parser("verify", help="residual scan of a profile CSV")
    _add_common(sp)
    sp.add_argument("--profile", help="profile CSV path")
    sp.add_argument("--epsilon", type=float, dest="epsilon")
    sp.add_argument("--verify-tol", type=float, dest="verify_tol")
    sp.add_argument("--report", help="write the JSON report here")

    sp = sub.add_parser("scan-coincidence",
                        help="sweep c1 hunting d-value coincidences")
    _add_common(sp)
    sp.add_argument("--recipe", choices=[r.value for r in Recipe])
    sp.add_argument("--c1-min", type=float, dest="c1_min")
    sp.add_argument("--c1-max", type=float, dest="c1_max")
    sp.add_argument("--steps", type=int, dest="steps")
    return ap


_COMMANDS = {
    "classify": cmd_classify,
    "generate": cmd_generate,
    "verify": cmd_verify,
    "scan-coincidence": cmd_scan_coincidence,
}


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("LWSURF_LOG", "WARNING"))
    args = build_parser().parse_args(argv)
    try:
        settings = _merge_settings(args)
        return _COMMANDS[args.command](settings)
    except NoSurfaceError as exc:
        print(f"no surface: {exc}", file=sys.stderr)
        return EXIT_NO_SURFACE
    except CsvFormatError as exc:
        print(f"malformed profile CSV: {exc}", file=sys.stderr)
        return EXIT_BAD_CSV
    except (ValueError, GluingMismatch, ToleranceError, RuntimeError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
