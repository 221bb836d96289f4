"""``formqm`` command line.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage or
domain errors.  Output is deterministic: JSON keys are sorted, exact values
are printed as rationals and floats in shortest round-trip form.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import _scalar as S
from . import clifford as C
from . import monopole as MP
from . import verify as V

FORMATS = ("json", "csv")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    format: str = "json"
    out: str | None = None

    def __post_init__(self):
        tol = self.parameters.get("tol")
        if tol is not None and not tol > 0:
            raise UsageError("tolerance must be positive")
        grid = self.parameters.get("grid")
        if grid is not None:
            V.parse_grid(grid)
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}")


def _num(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _rows_csv(rows: list, fields: list) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    p = cfg.parameters
    report = V.run(p["suite"], tol=p.get("tol"), grid=p.get("grid"),
                   k_wave=1.0 if p.get("k") is None else p["k"])
    return report.dumps(cfg.format), 0 if report.passed else 1


def _eigen_strings(e) -> dict:
    return {op: S.format_coeff(S.coerce(MP.expected_eigenvalue(op, e.j, e.n, e.m))) for op in ("L2", "Lz", "X3")}


def cmd_rep(cfg: RunConfig) -> tuple[str, int]:
    j = MP.half_integer(cfg.parameters["j"])
    basis = MP.wigner_basis(j)
    rows = []
    for e in basis:
        rows.append({
            "n": str(e.n), "m": str(e.m), "polynomial": str(e.poly),
            "mean_square": str(e.mean_square()), "norm": _num(e.norm),
            "eigenvalues": _eigen_strings(e),
        })
    if cfg.format == "csv":
        flat = [{k: v for k, v in r.items() if k != "eigenvalues"} for r in rows]
        return _rows_csv(flat, ["n", "m", "polynomial", "mean_square", "norm"]), 0
    data = {"j": str(j), "dimension": int((2 * j + 1) ** 2),
            "elements": rows}
    return _dumps(data), 0


def _form_json(form) -> dict:
    """``{"dx^dy": "coefficient", "1": ...}`` keyed by frame labels."""
    labels = form.manifold.labels
    return {("^".join(labels[i] for i in I) or "1"): str(c) for I, c in form.normal_form().components.items()}


def _matrix_json(m) -> list:
    return [[str(x) for x in row] for row in m]


def _parse_xi(text):
    if text is None:
        return Fraction(0)
    try:
        return Fraction(str(text))
    except ValueError as exc:
        raise UsageError(f"cannot parse xi={text!r}") from exc


def cmd_clifford(cfg: RunConfig) -> tuple[str, int]:
    xi = _parse_xi(cfg.parameters.get("xi"))
    scalars = C.clifford_ring(xi)
    ideal = C.spinor_ideal(scalars=scalars)
    mats = C.generator_matrices(ideal)
    J = C.volume_complex_structure(ideal)
    red = C.complex_reduction(ideal, J)
    data = {
        "xi": str(xi),
        "rho": str(scalars.rho),
        "rho_squared": str(xi * xi + Fraction(1, 4)),
        "projector": _form_json(ideal.projector),
        "basis": [_form_json(b) for b in ideal.basis],
        "generators": {rm.label: _matrix_json(rm.matrix) for rm in mats},
        "J": _matrix_json(J.matrix),
        "dirac": {f"d{c}": _matrix_json(m) for c, m in sorted(C.dirac_matrix(ideal).symbols.items())},
        "complex_dirac": {f"d{c}": _matrix_json(m) for c, m in sorted(red.generator_images.items())},
    }
    if cfg.format == "csv":
        rows = []
        for label, m in sorted(data["generators"].items()):
            for i, row in enumerate(m):
                for k, entry in enumerate(row):
                    rows.append({"matrix": label, "row": i + 1, "column": k + 1, "entry": entry})
        return _rows_csv(rows, ["matrix", "row", "column", "entry"]), 0
    return _dumps(data), 0


def cmd_harmonics(cfg: RunConfig) -> tuple[str, int]:
    j = MP.half_integer(cfg.parameters["j"])
    n = MP.half_integer(cfg.parameters["n"])
    if abs(n) > j or (j - n).denominator != 1:
        raise UsageError(f"n={n} is not a weight of the spin-{j} representation")
    elements = MP.equivariant_subspace(MP.wigner_basis(j), n)
    polys = [{"m": str(e.m), "polynomial": str(e.poly), "degree": int(2 * j),
              "mean_square": str(e.mean_square())} for e in elements]
    forms = []
    for basis in (MP.j1_basis(), MP.half_basis()):
        for el in basis:
            charge = MP.horizontal_forms_check(el.form).charge
            if el.j == j and charge == n:
                forms.append({"m": str(el.m), "factor": str(el.factor),
                              "form": _form_json(el.form)})
    if cfg.format == "csv":
        return _rows_csv(polys, ["m", "polynomial", "degree", "mean_square"]), 0
    return _dumps({"j": str(j), "n": str(n), "polynomials": polys, "forms": forms}), 0


def cmd_spectrum(cfg: RunConfig) -> tuple[str, int]:
    p = cfg.parameters
    radial = MP.constants()["radial"]
    case = MP.RadialCase(MP.half_integer(p["l"]), MP.half_integer(p["n"]), radial["mass"],
                         1.0 if p.get("k") is None else p["k"])
    grid = V.parse_grid(p.get("grid") or radial["grid"])
    rep = MP.radial_residual(case, grid)
    tol = radial["tolerance"] if p.get("tol") is None else p["tol"]
    passed = rep.has_solution and rep.max_residual <= tol
    head = {"l": str(case.l), "n": str(case.n), "k": _num(case.k_wave), "mass": _num(case.mass),
            "mu": _num(rep.mu), "mu_squared": str(case.mu_squared), "energy": _num(case.energy),
            "max_residual": _num(rep.max_residual), "tolerance": _num(tol), "passed": passed,
            "grid_points": rep.grid_points}
    if cfg.format == "json":
        return _dumps(head), 0 if passed else 1
    u = MP.radial_solution(case, rep.grid) if rep.has_solution else None
    lines = ["# " + " ".join(f"{k}={head[k]}" for k in sorted(head))]
    body = _rows_csv([{"r": _num(r), "u": _num(uu), "residual": _num(res)}
                      for r, uu, res in zip(rep.grid, u, rep.residuals)] if u is not None else [],
                     ["r", "u", "residual"])
    return "\n".join(lines) + "\n" + body, 0 if passed else 1


COMMANDS = {"verify": cmd_verify, "rep": cmd_rep, "clifford": cmd_clifford,
            "harmonics": cmd_harmonics, "spectrum": cmd_spectrum}


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _half(text: str) -> Fraction:
    try:
        return MP.half_integer(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--out", metavar="PATH", default=None)
    common.add_argument("--tol", type=_positive_float, default=None)
    common.add_argument("--config", metavar="PATH", default=None,
                        help="key = value file; command-line flags take precedence")
    parser = argparse.ArgumentParser(prog="formqm", description="Exact checks for forms, spinors and monopole harmonics.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    p.add_argument("suite", choices=V.SUITES + ("all",))
    p.add_argument("--grid", metavar="START:STOP:STEP", default=None)
    p.add_argument("--k", type=_positive_float, default=None, help="radial wave number")
    p = sub.add_parser("rep", parents=[common], help="Wigner basis of spin j")
    p.add_argument("--j", type=_half, default=None)
    p = sub.add_parser("clifford", parents=[common], help="spinor ideal and matrices for P(xi)")
    p.add_argument("--xi", default=None)
    p = sub.add_parser("harmonics", parents=[common], help="charge-n monopole harmonics of spin j")
    p.add_argument("--j", type=_half, default=None)
    p.add_argument("--n", type=_half, default=None)
    p = sub.add_parser("spectrum", parents=[common], help="radial residuals as CSV")
    p.add_argument("--l", type=_half, default=None)
    p.add_argument("--n", type=_half, default=None)
    p.add_argument("--k", type=_positive_float, default=None)
    p.add_argument("--grid", metavar="START:STOP:STEP", default=None)
    return parser


_CONFIG_TYPES = {"tol": float, "k": float, "grid": str, "xi": str, "j": MP.half_integer,
                 "n": MP.half_integer, "l": MP.half_integer, "format": str, "out": str}


def read_config(path: str) -> dict:
    parser = configparser.ConfigParser()
    with open(path) as fh:
        parser.read_string("[formqm]\n" + fh.read())
    out = {}
    for key, raw in parser["formqm"].items():
        if key not in _CONFIG_TYPES:
            raise UsageError(f"unknown config key {key!r}")
        try:
            out[key] = _CONFIG_TYPES[key](raw.strip().strip('"'))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad value for {key}: {raw!r}") from exc
    return out


_REQUIRED = {"rep": ("j",), "harmonics": ("j", "n"), "spectrum": ("l", "n")}


def make_config(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    if args.config:
        for key, value in read_config(args.config).items():
            if values.get(key) is None:
                values[key] = value
    fmt = values.pop("format", None) or ("csv" if args.command == "spectrum" else "json")
    out = values.pop("out", None)
    for key in _REQUIRED.get(args.command, ()):
        if values.get(key) is None:
            raise UsageError(f"{args.command} needs --{key}")
    return RunConfig(args.command, values, fmt, out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        text, code = COMMANDS[cfg.command](cfg)
    except (UsageError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"formqm: error: {exc}", file=sys.stderr)
        return 2
    try:
        _emit(text, cfg.out)
    except BrokenPipeError:
        return code
    return code


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


if __name__ == "__main__":
    sys.exit(main())
