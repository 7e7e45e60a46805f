"""Command-line interface.

Commands: hilbert, orbit-cones, git-fan, downgrade git-fan, downgrade ppdiv,
verify, render-svg, selfcheck.  Input is a JSON problem description; output
is a deterministic JSON or markdown report (stdout or --output), optionally
with an SVG figure (--svg).

Exit codes: 0 success; 2 invalid input; 3 verification failure (fiber
mismatch or violated invariant); 4 unsupported input (rank above 8,
non-saturated embedding, undrawable rank).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import report as report_mod
from .cones import Cone, RANK_LIMIT
from .downgrade import analyze_subtorus, downgraded_git_fan
from .drawing import NotDrawable, render_fan_svg
from .errors import NonSaturatedEmbedding, RankLimitExceeded
from .gitfan import AffineToricData, git_fan
from .ppdiv import downgrade_ppdivisor, verify_reconstruction

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_VERIFICATION_FAILURE = 3
EXIT_UNSUPPORTED = 4


class InputError(Exception):
    def __init__(self, message: str, pointer: str = ""):
        self.message = message
        self.pointer = pointer
        super().__init__(message)


def _fail(message: str, pointer: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": message, "pointer": pointer}) + "\n")
    return code


def _require_int_matrix(value, pointer: str, rows: int | None = None):
    if not isinstance(value, list) or not value:
        raise InputError("expected a non-empty list of integer vectors", pointer)
    width = None
    for i, row in enumerate(value):
        if not isinstance(row, list):
            raise InputError("expected an integer vector", f"{pointer}/{i}")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InputError("inconsistent vector lengths", f"{pointer}/{i}")
        for j, x in enumerate(row):
            if not isinstance(x, int) or isinstance(x, bool):
                raise InputError("entries must be integers", f"{pointer}/{i}/{j}")
    return [tuple(row) for row in value]


def load_problem(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise InputError(f"input file not found: {path}")
    except json.JSONDecodeError as err:
        raise InputError(f"malformed JSON: {err}")
    if not isinstance(raw, dict):
        raise InputError("input must be a JSON object")
    rank = raw.get("rank")
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        raise InputError("rank must be a positive integer", "/rank")
    rays = _require_int_matrix(raw.get("cone_rays"), "/cone_rays")
    for i, r in enumerate(rays):
        if len(r) != rank:
            raise InputError(f"ray length {len(r)} != rank {rank}", f"/cone_rays/{i}")
    problem = {"rank": rank, "cone_rays": rays, "subtorus_embedding": None}
    if raw.get("subtorus_embedding") is not None:
        emb = _require_int_matrix(raw["subtorus_embedding"], "/subtorus_embedding")
        if len(emb) != rank:
            raise InputError(
                f"embedding must have {rank} rows", "/subtorus_embedding"
            )
        problem["subtorus_embedding"] = emb
    options = raw.get("options", {})
    if not isinstance(options, dict):
        raise InputError("options must be an object", "/options")
    box = options.get("box", 6)
    if not isinstance(box, int) or isinstance(box, bool) or box < 0:
        raise InputError("options.box must be a nonnegative integer", "/options/box")
    problem["box"] = box
    reference = raw.get("reference_table")
    if reference is not None and not isinstance(reference, dict):
        raise InputError("reference_table must be an object", "/reference_table")
    problem["reference_table"] = reference or {}
    return problem


def build_toric(problem: dict) -> AffineToricData:
    sigma = Cone.from_generators(problem["cone_rays"], problem["rank"])
    if not sigma.is_pointed():
        raise InputError(
            "cone_rays span a non-pointed cone: the torus action is not "
            "effective after normalization",
            "/cone_rays",
        )
    return AffineToricData.from_cone(sigma)


def build_subtorus(problem: dict):
    emb = problem.get("subtorus_embedding")
    if emb is None:
        raise InputError(
            "this command needs a subtorus_embedding", "/subtorus_embedding"
        )
    return analyze_subtorus(emb)


def _write_output(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fan_for_figure(problem: dict):
    toric = build_toric(problem)
    if problem.get("subtorus_embedding") is not None:
        sub = build_subtorus(problem)
        data = downgraded_git_fan(toric, sub)
        return list(data.git_cones), "downgraded GIT fan"
    data = git_fan(toric)
    return list(data.git_cones), "GIT fan"


def run(command: str, problem: dict, fmt: str, output: str | None, svg: str | None) -> int:
    report: dict = {"command": command, "input": report_mod.input_echo(problem)}
    verification_failed = False

    if command == "hilbert":
        toric = build_toric(problem)
        report["hilbert_basis"] = report_mod.hilbert_section(toric)
    elif command == "orbit-cones":
        toric = build_toric(problem)
        report["hilbert_basis"] = report_mod.hilbert_section(toric)
        report["orbit_cones"] = report_mod.orbit_cone_section(toric)
    elif command == "git-fan":
        toric = build_toric(problem)
        report["hilbert_basis"] = report_mod.hilbert_section(toric)
        report["orbit_cones"] = report_mod.orbit_cone_section(toric)
        report["git"] = report_mod.git_section(toric)
        report["discrepancies"] = report_mod.reference_discrepancies(
            toric, None, problem["reference_table"]
        )
    elif command == "downgrade git-fan":
        toric = build_toric(problem)
        sub = build_subtorus(problem)
        report["hilbert_basis"] = report_mod.hilbert_section(toric)
        report["git"] = report_mod.git_section(toric)
        report["downgrade"] = report_mod.downgrade_section(toric, sub)
        report["discrepancies"] = report_mod.reference_discrepancies(
            toric, sub, problem["reference_table"]
        )
    elif command == "downgrade ppdiv":
        toric = build_toric(problem)
        sub = build_subtorus(problem)
        div = downgrade_ppdivisor(toric, sub)
        report["downgrade"] = report_mod.downgrade_section(toric, sub)
        report["ppdivisor"] = report_mod.ppdivisor_section(toric, sub, div)
        report["discrepancies"] = report_mod.reference_discrepancies(
            toric, sub, problem["reference_table"]
        )
    elif command == "verify":
        toric = build_toric(problem)
        sub = build_subtorus(problem)
        div = downgrade_ppdivisor(toric, sub)
        rec = verify_reconstruction(toric, sub, div, box=problem["box"])
        report["verification"] = report_mod.verification_section(rec)
        verification_failed = not rec.all_equal
    elif command == "selfcheck":
        toric = build_toric(problem)
        checks = _selfcheck(toric, problem)
        report["selfcheck"] = checks
        verification_failed = not all(c["passed"] for c in checks["checks"])
    elif command == "render-svg":
        if not svg:
            raise InputError("render-svg needs --svg PATH")
        cones, title = _fan_for_figure(problem)
        render_fan_svg(cones, svg, title)
        return EXIT_OK
    else:  # pragma: no cover - argparse restricts commands
        raise InputError(f"unknown command {command}")

    if svg and command != "render-svg":
        cones, title = _fan_for_figure(problem)
        render_fan_svg(cones, svg, title)

    _write_output(report_mod.render(report, fmt), output)
    return EXIT_VERIFICATION_FAILURE if verification_failed else EXIT_OK


def _selfcheck(toric: AffineToricData, problem: dict) -> dict:
    """Quick internal consistency battery on the given input."""
    from .cones import dualize, faces, intersect

    checks = []

    def record(name: str, passed: bool) -> None:
        checks.append({"name": name, "passed": bool(passed)})

    dual = toric.sigma_dual
    record("dual involution", dualize(dualize(dual)) == dual)
    fs = faces(dual)
    closed = all(
        any(intersect(a.cone, b.cone) == f.cone for f in fs)
        for a in fs
        for b in fs
    )
    record("face set closed under intersection", closed)
    data = git_fan(toric)
    n = len(data.git_cones)
    record(
        "locus table is a bijection",
        len({l.members for l in data.semistable_table}) == n,
    )
    reversing = True
    for i in range(n):
        for j in range(n):
            if data.git_cones[i].contains_cone(data.git_cones[j]):
                if not data.semistable_table[j].members >= data.semistable_table[i].members:
                    reversing = False
    record("correspondence is order-reversing", reversing)
    if problem.get("subtorus_embedding") is not None:
        sub = build_subtorus(problem)
        div = downgrade_ppdivisor(toric, sub)
        rec = verify_reconstruction(toric, sub, div, box=min(problem["box"], 4))
        record("reconstruction fibers agree", rec.all_equal)
    return {"checks": checks}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gitkit",
        description=(
            "Exact GIT data of affine toric varieties, torus downgrading, "
            "and polyhedral divisors"
        ),
    )
    parser.add_argument("command", choices=[
        "hilbert", "orbit-cones", "git-fan", "downgrade", "verify",
        "render-svg", "selfcheck",
    ])
    parser.add_argument(
        "subcommand",
        nargs="?",
        help="for 'downgrade': git-fan or ppdiv",
    )
    parser.add_argument("-i", "--input", required=True, help="problem JSON file")
    parser.add_argument("-o", "--output", default=None, help="write report here")
    parser.add_argument("--format", choices=["json", "md"], default="json")
    parser.add_argument("--box", type=int, default=None, help="verification box bound")
    parser.add_argument("--svg", default=None, help="write a fan figure here")
    args = parser.parse_args(argv)

    command = args.command
    if command == "downgrade":
        if args.subcommand not in ("git-fan", "ppdiv"):
            return _fail(
                "downgrade needs a subcommand: git-fan or ppdiv",
                "",
                EXIT_INVALID_INPUT,
            )
        command = f"downgrade {args.subcommand}"
    elif args.subcommand is not None:
        return _fail(
            f"command {command} takes no subcommand", "", EXIT_INVALID_INPUT
        )

    try:
        problem = load_problem(args.input)
        if args.box is not None:
            if args.box < 0:
                raise InputError("--box must be nonnegative")
            problem["box"] = args.box
        if problem["rank"] > RANK_LIMIT:
            return _fail(
                f"rank {problem['rank']} exceeds the supported limit {RANK_LIMIT}",
                "/rank",
                EXIT_UNSUPPORTED,
            )
        return run(command, problem, args.format, args.output, args.svg)
    except InputError as err:
        return _fail(err.message, err.pointer, EXIT_INVALID_INPUT)
    except NonSaturatedEmbedding as err:
        return _fail(str(err), "/subtorus_embedding", EXIT_UNSUPPORTED)
    except RankLimitExceeded as err:
        return _fail(str(err), "/rank", EXIT_UNSUPPORTED)
    except NotDrawable as err:
        return _fail(str(err), "", EXIT_UNSUPPORTED)
    except ValueError as err:
        return _fail(str(err), "", EXIT_INVALID_INPUT)


if __name__ == "__main__":
    sys.exit(main())
