"""Command-line interface.

Commands: ``solve``, ``limit``, ``residual``, ``render``, ``sweep``,
``energy``.  Exit codes: 0 success, 1 numerical failure, 2 usage or
configuration error.  Options come from flat flags, optionally seeded
from a JSON config file (flags override the file; unknown file keys are
rejected).  No environment variables are consulted, and outputs are
written atomically (temp file + rename) for reproducible pipelines.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import field as field2d
from . import harmonic, render
from .errors import (
    CsvFormatError,
    GridError,
    InvalidParams,
    NonConvergence,
    QDefectError,
)
from .grid import PolarGrid, RadialGrid
from .params import ModelParams
from .reduced import (
    Profile,
    apply_boundary,
    minimize,
    ode_residual,
    read_profile_csv,
    reduced_energy,
    write_profile_csv,
)
from .tensor import ansatz_eigenvalues


def _fail(code: str, message: str) -> None:
    print(f"[{code}] {message}", file=sys.stderr)


def _write_text_atomic(path: str, text: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_json(path: str, obj) -> None:
    _write_text_atomic(path, json.dumps(obj, indent=2) + "\n")


def _write_profile(path: str, profile: Profile) -> None:
    tmp = f"{path}.tmp"
    write_profile_csv(tmp, profile)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# configuration plumbing
# ---------------------------------------------------------------------------

_PARAM_DEFAULTS = {
    "a2": 1.0,
    "b2": 0.0,
    "c2": 1.0,
    "L": 0.1,
    "R": 1.0,
    "k": 1,
    "n": 512,
    "m": 128,
    "tol": 1e-9,
    "max_iter": 100_000,
    "init": "explicit",
    "init_file": None,
    "out": "qdefect",
}

_RENDER_DEFAULTS = {
    "style": "rod",
    "density": 16,
    "size": 640,
    "shift": None,
    "branch": None,
    "input": None,
}


def _add_param_flags(sub):
    sub.add_argument("--config", help="JSON config file; flags override its values")
    sub.add_argument("--a2", type=float, help="bulk coefficient a2 (> 0)")
    sub.add_argument("--b2", type=float, help="bulk coefficient b2 (>= 0)")
    sub.add_argument("--c2", type=float, help="bulk coefficient c2 (> 0)")
    sub.add_argument("--L", type=float, help="elastic constant (> 0)")
    sub.add_argument("--R", type=float, help="disk radius")
    sub.add_argument("--k", type=int, help="defect index numerator, nonzero integer")
    sub.add_argument("--n", type=int, help="radial segments (>= 16)")
    sub.add_argument("--m", type=int, help="angular samples (even, >= 64)")
    sub.add_argument("--tol", type=float, help="projected-gradient tolerance")
    sub.add_argument("--max-iter", dest="max_iter", type=int, help="flow iteration cap")
    sub.add_argument("--init", choices=("explicit", "ramp", "file"), help="initial guess")
    sub.add_argument("--init-file", dest="init_file", help="profile CSV for --init file")
    sub.add_argument("--out", "-o", help="output path prefix")


def _effective(args: argparse.Namespace, defaults: dict) -> dict:
    """Merge flag values over config-file values over defaults."""
    cfg = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidParams(f"cannot read config file {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise InvalidParams("config file must hold a JSON object")
        unknown = set(cfg) - set(defaults)
        if unknown:
            raise InvalidParams(f"unknown config keys: {sorted(unknown)}")
    eff = {}
    for key, fallback in defaults.items():
        flag = getattr(args, key, None)
        eff[key] = flag if flag is not None else cfg.get(key, fallback)
    return eff


def _model_params(eff: dict, allow_zero_l=False) -> ModelParams:
    if eff["k"] == 0:
        raise InvalidParams("k must be a nonzero integer (k in Z \\ {0})")
    if not allow_zero_l and eff["L"] == 0.0:
        raise InvalidParams(
            "L = 0 is the harmonic-map limit; use the `limit` command instead"
        )
    return ModelParams(
        a2=float(eff["a2"]),
        b2=float(eff["b2"]),
        c2=float(eff["c2"]),
        L=float(eff["L"]),
        R=float(eff["R"]),
        k=int(eff["k"]),
    )


def _grid(eff: dict, params: ModelParams) -> RadialGrid:
    return RadialGrid.for_defect(params.R, int(eff["n"]), params.k)


def _float_or_none(x):
    return None if x is None else float(x)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_solve(args) -> int:
    eff = _effective(args, _PARAM_DEFAULTS)
    params = _model_params(eff)
    grid = _grid(eff, params)
    init = eff["init"]
    if init == "file":
        if not eff["init_file"]:
            raise InvalidParams("--init file requires --init-file")
        init = apply_boundary(read_profile_csv(eff["init_file"]), params)
    out = eff["out"]
    try:
        profile, report = minimize(
            params, grid, init=init, tol=float(eff["tol"]),
            max_flow_iter=int(eff["max_iter"]),
        )
        status = 0
    except NonConvergence as exc:
        profile, report = exc.profile, exc.report
        _fail("E_NUMERIC", str(exc))
        status = 1
    _write_profile(f"{out}_profile.csv", profile)
    _write_json(f"{out}_report.json", report.to_json_dict())
    print(
        f"solve: converged={report.converged} energy={report.energy!r} "
        f"grad_norm={report.grad_norm:.3e} -> {out}_profile.csv"
    )
    return status


def cmd_limit(args) -> int:
    eff = _effective(args, _PARAM_DEFAULTS)
    if float(eff["b2"]) != 0.0:
        raise InvalidParams("the limit command requires b2 = 0")
    params = _model_params(eff, allow_zero_l=True).with_updates(L=0.0)
    grid = RadialGrid.uniform(params.R, int(eff["n"]))
    out = eff["out"]

    table = {}
    for branch, tag in ((harmonic.Branch.MINUS, "Y_minus"), (harmonic.Branch.PLUS, "Y_plus")):
        profile = harmonic.explicit_profile(branch, params, grid)
        _write_profile(f"{out}_{branch.value}.csv", profile)
        lam = ansatz_eigenvalues(profile.u, profile.v)
        lines = ["r,lam1,lam2,lam3"]
        for r, row in zip(grid.nodes, lam):
            lines.append(f"{float(r)!r},{float(row[0])!r},{float(row[1])!r},{float(row[2])!r}")
        _write_text_atomic(f"{out}_eigenvalues_{branch.value}.csv", "\n".join(lines) + "\n")
        en = harmonic.dirichlet_energy_2d(branch, params, n_r=int(eff["n"]), m_phi=int(eff["m"]))
        table[tag] = {"closed_form": en.closed_form, "quadrature": en.quadrature}
    if params.k % 2 == 0:
        en = harmonic.dirichlet_energy_2d(
            harmonic.Branch.UNIAXIAL_ESCAPE, params, n_r=int(eff["n"]), m_phi=int(eff["m"])
        )
        table["U"] = {"closed_form": en.closed_form, "quadrature": en.quadrature}
    else:
        table["U"] = None
        table["note"] = "uniaxial escape solution exists for even k only"
    _write_json(f"{out}_energies.json", table)
    print(f"limit: wrote explicit profiles and energy table -> {out}_energies.json")
    return 0


def cmd_residual(args) -> int:
    eff = _effective(args, {**_PARAM_DEFAULTS, "input": None})
    if not eff["input"]:
        raise InvalidParams("residual requires --input profile.csv")
    params = _model_params(eff)
    profile = read_profile_csv(eff["input"])
    out = eff["out"]

    res = ode_residual(profile, params)
    lines = ["r,ru,rv"]
    for r, ru, rv in zip(res.r, res.ru, res.rv):
        lines.append(f"{float(r)!r},{float(ru)!r},{float(rv)!r}")
    _write_text_atomic(f"{out}_residual.csv", "\n".join(lines) + "\n")

    pg = PolarGrid(profile.grid, int(eff["m"]))
    lifted = field2d.lift(profile, params.k, pg)
    el = field2d.el_residual_2d(lifted, params)
    norms = el.norms()
    w = profile.grid.weights[1:-1]
    l2 = math.sqrt(float(np.sum(w[:, None] * norms**2) * pg.dphi))
    summary = {
        "ode_max_interior": res.max_interior(),
        "neumann_defect": res.neumann_defect,
        "el2d_max": el.max_norm(),
        "el2d_max_bulk": el.max_norm(r_min=0.05 * params.R),
        "el2d_l2": l2,
    }
    _write_json(f"{out}_summary.json", summary)
    print(json.dumps(summary))
    return 0


def cmd_render(args) -> int:
    eff = _effective(args, {**_PARAM_DEFAULTS, **_RENDER_DEFAULTS})
    if bool(eff["branch"]) == bool(eff["input"]):
        raise InvalidParams("render needs exactly one of --branch or --input")
    spec = render.RenderSpec(
        style=eff["style"],
        density=int(eff["density"]),
        size=int(eff["size"]),
        shift=_float_or_none(eff["shift"]),
    )
    if eff["branch"]:
        if float(eff["b2"]) != 0.0:
            raise InvalidParams("explicit branches require b2 = 0")
        params = _model_params(eff, allow_zero_l=True)
        grid = RadialGrid.uniform(params.R, int(eff["n"]))
        profile = harmonic.explicit_profile(harmonic.Branch(eff["branch"]), params, grid)
        title = f"branch {eff['branch']}, k={params.k}"
    else:
        params = _model_params(eff, allow_zero_l=True)
        profile = read_profile_csv(eff["input"])
        title = f"profile {os.path.basename(eff['input'])}, k={params.k}"
    out = eff["out"]
    _write_text_atomic(f"{out}_glyphs.svg", render.glyph_svg(profile, params, spec))
    _write_text_atomic(
        f"{out}_eigenvalues.svg",
        render.eigenvalue_chart_svg(profile, params, size=int(eff["size"]), title=title),
    )
    print(f"render: wrote {out}_glyphs.svg and {out}_eigenvalues.svg")
    return 0


def _sweep_values(raw: str, name: str):
    if raw is None:
        return None
    items = [s for s in raw.split(",") if s.strip() != ""]
    if not items:
        raise InvalidParams(f"{name} list is empty")
    try:
        vals = [float(s) for s in items]
    except ValueError as exc:
        raise InvalidParams(f"bad {name} list: {exc}") from None
    diffs = [b - a for a, b in zip(vals, vals[1:])]
    if diffs and not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
        raise InvalidParams(f"{name} list must be strictly monotone")
    return vals


def cmd_sweep(args) -> int:
    eff = _effective(args, {**_PARAM_DEFAULTS, "b2_list": None, "L_list": None})
    b2_list = _sweep_values(eff["b2_list"], "b2")
    l_list = _sweep_values(eff["L_list"], "L")
    if (b2_list is None) == (l_list is None):
        raise InvalidParams("sweep needs exactly one of --b2-list or --L-list")
    base = _model_params(eff)
    grid = _grid(eff, base)
    out = eff["out"]
    tol = float(eff["tol"])

    reference = harmonic.explicit_profile(
        harmonic.Branch.MINUS, base.with_updates(b2=0.0, L=0.0), grid
    )

    records = []
    failed = False
    prev = None  # (params, profile) of last converged step
    sweep_name = "b2" if b2_list is not None else "L"
    for value in b2_list if b2_list is not None else l_list:
        p_step = base.with_updates(**{sweep_name: value})
        if prev is None:
            init = "explicit"
        else:
            prev_params, prev_profile = prev
            scale = p_step.s_plus / prev_params.s_plus
            init = apply_boundary(
                Profile(grid, prev_profile.u * scale, prev_profile.v * scale), p_step
            )
        record = {sweep_name: value, "s_plus": p_step.s_plus}
        try:
            profile, report = minimize(p_step, grid, init=init, tol=tol)
            converged = True
        except NonConvergence as exc:
            profile, report = exc.profile, exc.report
            converged = False
            failed = True
            record["error"] = str(exc)
        record.update(
            {
                "converged": converged,
                "energy": report.energy,
                "grad_norm": report.grad_norm,
                "u_R": float(profile.u[-1]),
                "v_R": float(profile.v[-1]),
                "norm_bound_margin": report.checks.get("norm_bound_margin"),
                "distance_to_minus": profile.distance_to(reference),
            }
        )
        records.append(record)
        if converged:
            prev = (p_step, profile)
    _write_json(f"{out}_sweep.json", {"parameter": sweep_name, "records": records})
    print(f"sweep: {len(records)} steps ({'with failures' if failed else 'all converged'})")
    return 1 if failed else 0


def cmd_energy(args) -> int:
    eff = _effective(args, {**_PARAM_DEFAULTS, "input": None})
    if not eff["input"]:
        raise InvalidParams("energy requires --input profile.csv")
    params = _model_params(eff)
    profile = read_profile_csv(eff["input"])
    pg = PolarGrid(profile.grid, int(eff["m"]))
    lifted = field2d.lift(profile, params.k, pg)
    e0 = harmonic.e0_energy(profile, params)
    payload = {
        "reduced": reduced_energy(profile, params),
        "ldg_2d": field2d.ldg_energy_2d(lifted, params),
        "dirichlet_2d": field2d.dirichlet_quadrature(lifted),
        "e0": e0.value if e0.finite else "infinite",
        "e0_constraint_deviation": e0.max_deviation,
    }
    text = json.dumps(payload, indent=2)
    print(text)
    if eff["out"] != _PARAM_DEFAULTS["out"]:
        _write_json(f"{eff['out']}_energy.json", payload)
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdefect",
        description=(
            "Point-defect profiles of 2D nematic liquid crystals in the "
            "Landau-de Gennes Q-tensor model"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="minimise the reduced radial energy")
    _add_param_flags(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_limit = sub.add_parser("limit", help="explicit L -> 0 profiles and energy table")
    _add_param_flags(p_limit)
    p_limit.set_defaults(func=cmd_limit)

    p_res = sub.add_parser("residual", help="ODE and 2D PDE residuals of a profile")
    _add_param_flags(p_res)
    p_res.add_argument("--input", help="profile CSV (r,u,v)")
    p_res.set_defaults(func=cmd_residual)

    p_render = sub.add_parser("render", help="SVG glyph lattice and eigenvalue chart")
    _add_param_flags(p_render)
    p_render.add_argument("--branch", choices=("minus", "plus"), help="explicit branch")
    p_render.add_argument("--input", help="profile CSV (r,u,v)")
    p_render.add_argument("--style", choices=("rod", "box"), help="glyph style")
    p_render.add_argument("--density", type=int, help="glyph rings (>= 4)")
    p_render.add_argument("--size", type=int, help="image size in px")
    p_render.add_argument("--shift", type=float, help="box eigenvalue shift")
    p_render.set_defaults(func=cmd_render)

    p_sweep = sub.add_parser("sweep", help="parameter continuation sweep")
    _add_param_flags(p_sweep)
    p_sweep.add_argument("--b2-list", dest="b2_list", help="comma-separated ascending b2 values")
    p_sweep.add_argument("--L-list", dest="L_list", help="comma-separated monotone L values")
    p_sweep.set_defaults(func=cmd_sweep)

    p_energy = sub.add_parser("energy", help="print energies of a profile")
    _add_param_flags(p_energy)
    p_energy.add_argument("--input", help="profile CSV (r,u,v)")
    p_energy.set_defaults(func=cmd_energy)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CsvFormatError as exc:
        _fail("E_IO", f"bad input CSV: {exc}")
        return 2
    except OSError as exc:
        _fail("E_IO", str(exc))
        return 2
    except (InvalidParams, GridError) as exc:
        _fail("E_CONFIG", str(exc))
        return 2
    except NonConvergence as exc:  # pragma: no cover - commands handle their own
        _fail("E_NUMERIC", str(exc))
        return 1
    except QDefectError as exc:
        _fail("E_CONFIG", str(exc))
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
