"""Report assembly: deterministic JSON/markdown sections for the CLI.

Reports echo the input, then add the sections the command produced:
Hilbert basis, orbit cones, the GIT correspondence table (semistable locus
against GIT cone, in the layout locus <-> cone), the downgrade tables with
union decompositions, the polyhedral divisor, verification verdicts, and
discrepancy notes.  All orderings are canonical, so byte output is a pure
function of the input.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .cones import Cone
from .downgrade import (
    SubtorusData,
    check_effective_quotient_action,
    downgraded_git_cone,
    downgraded_git_fan,
    downgraded_semistable,
    fiber_representatives,
    poset_decomposition,
)
from .gitfan import (
    AffineToricData,
    git_cone,
    git_equivalence_report,
    git_fan,
    orbit_cones,
    orbit_lattice,
    semistable_locus,
)
from .linalg import column_count, mat_vec
from .ppdiv import (
    PolyhedralDivisor,
    ReconstructionReport,
    check_proper,
    choose_section,
)


def _rays(cone: Cone) -> list:
    return [list(r) for r in cone.rays]


def input_echo(problem: dict) -> dict:
    echo = {
        "rank": problem["rank"],
        "cone_rays": [list(r) for r in problem["cone_rays"]],
    }
    if problem.get("subtorus_embedding") is not None:
        echo["subtorus_embedding"] = [list(r) for r in problem["subtorus_embedding"]]
    return echo


def hilbert_section(toric: AffineToricData) -> dict:
    hb = toric.hilbert
    return {
        "weight_cone_rays": _rays(toric.sigma_dual),
        "elements": [list(u) for u in hb.elements],
        "irreducible": hb.irreducible,
        "count": len(hb.elements),
    }


def orbit_cone_section(toric: AffineToricData) -> dict:
    rows = []
    for o in orbit_cones(toric):
        rows.append(
            {
                "index": o.index,
                "dim": o.cone.dim(),
                "rays": _rays(o.cone),
                "generators": sorted(o.generator_indices),
                "orbit_lattice": [list(r) for r in orbit_lattice(toric, o)],
            }
        )
    profile: dict[int, int] = {}
    for row in rows:
        profile[row["dim"]] = profile.get(row["dim"], 0) + 1
    return {
        "count": len(rows),
        "dimension_profile": {str(d): profile[d] for d in sorted(profile)},
        "cones": rows,
    }


def git_section(toric: AffineToricData) -> dict:
    data = git_fan(toric)
    rows = []
    for cone, locus in zip(data.git_cones, data.semistable_table):
        rows.append(
            {
                "weight": list(cone.relative_interior_point()),
                "git_cone_rays": _rays(cone),
                "dim": cone.dim(),
                "semistable_locus": sorted(locus.members),
                "locus_size": len(locus),
            }
        )
    poset_cmp = git_equivalence_report(toric)
    return {
        "classes": len(rows),
        "correspondence": rows,
        "order_comparison": {
            "subsets": poset_cmp["subsets"],
            "mismatches": poset_cmp["mismatches"],
            "mismatch_rows": [r for r in poset_cmp["rows"] if not r["agree"]],
        },
    }


def downgrade_section(toric: AffineToricData, sub: SubtorusData) -> dict:
    data = downgraded_git_fan(toric, sub)
    rows = []
    for cone, locus in zip(data.git_cones, data.semistable_table):
        v = cone.relative_interior_point()
        reps = fiber_representatives(toric, sub, v)
        rows.append(
            {
                "weight": list(v),
                "git_cone_rays": _rays(cone),
                "dim": cone.dim(),
                "semistable_locus": sorted(locus.members),
                "locus_size": len(locus),
                "union_decomposition": [list(u) for _, u in reps],
                "union_poset_subsets": [
                    sorted(s) for s in poset_decomposition(toric, sub, v)
                ],
            }
        )
    effective, certificate = check_effective_quotient_action(toric, sub)
    kernel_cols = column_count(sub.kernel)
    return {
        "character_map": [list(r) for r in sub.char_map],
        "kernel_basis": [
            [sub.kernel[i][j] for i in range(sub.rank)] for j in range(kernel_cols)
        ],
        "downgraded_weight_cone_rays": _rays(data.weight_cone),
        "classes": len(rows),
        "correspondence": rows,
        "quasi_fan_pairs": [list(p) for p in data.quasi_fan_pairs],
        "effective_quotient_action": {
            "effective": effective,
            "certificate": certificate,
        },
    }


def ppdivisor_section(
    toric: AffineToricData, sub: SubtorusData, div: PolyhedralDivisor
) -> dict:
    proper = check_proper(div)
    return {
        "section": [list(r) for r in choose_section(sub)],
        "divisor": div.to_dict(),
        "properness": proper.to_dict(),
    }


def verification_section(report: ReconstructionReport) -> dict:
    return report.to_dict()


# ---------------------------------------------------------------------------
# Discrepancy notes.

def _claimed_cone(row: dict, rank: int) -> Cone:
    return Cone.from_generators([tuple(r) for r in row["cone_rays"]], rank)


def reference_discrepancies(
    toric: AffineToricData,
    sub: SubtorusData | None,
    reference: dict,
) -> list[dict]:
    """Compare computed GIT data against claimed reference rows.

    Each mismatch is reported with the claimed and the computed value; the
    computed (definitional) value is authoritative.
    """
    notes = []
    for row in reference.get("git", []):
        u = tuple(row["weight"])
        claimed = _claimed_cone(row, toric.rank)
        computed = git_cone(toric, u)
        if computed != claimed:
            notes.append(
                {
                    "table": "git",
                    "weight": list(u),
                    "claimed_rays": [list(r) for r in claimed.rays],
                    "computed_rays": _rays(computed),
                    "note": "claimed GIT cone differs from the definitional one",
                }
            )
    if sub is not None:
        for row in reference.get("downgrade_git", []):
            v = tuple(row["weight"])
            claimed = _claimed_cone(row, sub.subtorus_rank)
            computed = downgraded_git_cone(toric, sub, v)
            if computed != claimed:
                notes.append(
                    {
                        "table": "downgrade_git",
                        "weight": list(v),
                        "claimed_rays": [list(r) for r in claimed.rays],
                        "computed_rays": _rays(computed),
                        "note": "claimed GIT cone differs from the definitional one",
                    }
                )
            for u_raw in row.get("union_weights", []):
                u = tuple(u_raw)
                img = mat_vec(sub.char_map, u)
                if not _positive_multiple(img, v):
                    notes.append(
                        {
                            "table": "downgrade_union",
                            "weight": list(v),
                            "term": list(u),
                            "image": list(img),
                            "note": "union term does not map to a positive multiple of the weight",
                        }
                    )
            if row.get("union_weights"):
                union = frozenset()
                for u_raw in row["union_weights"]:
                    union |= semistable_locus(toric, tuple(u_raw)).members
                computed_locus = downgraded_semistable(toric, sub, v)
                if union != computed_locus.members:
                    notes.append(
                        {
                            "table": "downgrade_union",
                            "weight": list(v),
                            "claimed_union_size": len(union),
                            "computed_union_size": len(computed_locus.members),
                            "note": "claimed union of semistable sets differs from the computed locus",
                        }
                    )
    return notes


def _positive_multiple(img, v) -> bool:
    if all(x == 0 for x in v):
        return all(x == 0 for x in img)
    n = None
    for a, b in zip(img, v):
        if b == 0:
            if a != 0:
                return False
        else:
            f = Fraction(a, b)
            if f <= 0 or (n is not None and f != n):
                return False
            n = f
    return n is not None


# ---------------------------------------------------------------------------
# Markdown rendering.

def _md_table(headers: list[str], rows: list[list]) -> list[str]:
    out = ["| " + " | ".join(headers) + " |"]
    out.append("|" + "|".join([" --- "] * len(headers)) + "|")
    for row in rows:
        out.append("| " + " | ".join(str(x) for x in row) + " |")
    return out


def render_markdown(report: dict) -> str:
    lines = [f"# gitkit report: {report['command']}", ""]
    echo = report["input"]
    lines.append("## Input")
    lines.append("")
    lines.append(f"- rank: {echo['rank']}")
    lines.append(f"- cone rays: {echo['cone_rays']}")
    if "subtorus_embedding" in echo:
        lines.append(f"- subtorus embedding: {echo['subtorus_embedding']}")
    lines.append("")
    if "hilbert_basis" in report:
        hb = report["hilbert_basis"]
        lines.append("## Degree semigroup generators")
        lines.append("")
        lines.append(f"- count: {hb['count']} (irreducible: {hb['irreducible']})")
        for u in hb["elements"]:
            lines.append(f"- {u}")
        lines.append("")
    if "orbit_cones" in report:
        oc = report["orbit_cones"]
        lines.append("## Orbit cones")
        lines.append("")
        lines.append(
            f"- count: {oc['count']}, dimension profile: {oc['dimension_profile']}"
        )
        lines.extend(
            _md_table(
                ["index", "dim", "rays", "generators"],
                [[c["index"], c["dim"], c["rays"], c["generators"]] for c in oc["cones"]],
            )
        )
        lines.append("")
    if "git" in report:
        git = report["git"]
        lines.append("## GIT correspondence (semistable locus <-> GIT cone)")
        lines.append("")
        lines.extend(
            _md_table(
                ["weight", "GIT cone rays", "dim", "locus", "locus size"],
                [
                    [r["weight"], r["git_cone_rays"], r["dim"], r["semistable_locus"], r["locus_size"]]
                    for r in git["correspondence"]
                ],
            )
        )
        oc = git["order_comparison"]
        lines.append("")
        lines.append(
            f"Order-generated cones agree on {oc['subsets'] - oc['mismatches']}"
            f"/{oc['subsets']} generator subsets."
        )
        lines.append("")
    if "downgrade" in report:
        d = report["downgrade"]
        lines.append("## Downgraded GIT correspondence")
        lines.append("")
        lines.append(f"- character map: {d['character_map']}")
        lines.append(f"- downgraded weight cone rays: {d['downgraded_weight_cone_rays']}")
        lines.append("")
        lines.extend(
            _md_table(
                ["weight", "GIT cone rays", "locus size", "union terms"],
                [
                    [r["weight"], r["git_cone_rays"], r["locus_size"], r["union_decomposition"]]
                    for r in d["correspondence"]
                ],
            )
        )
        lines.append("")
    if "ppdivisor" in report:
        p = report["ppdivisor"]
        lines.append("## Polyhedral divisor")
        lines.append("")
        lines.append(f"- base rays: {p['divisor']['base']['rays']}")
        lines.append(f"- tail rays: {p['divisor']['tail']['rays']}")
        for lab, coeff in sorted(p["divisor"]["coefficients"].items()):
            lines.append(f"- coefficient {lab}: vertices {coeff['vertices']}")
        lines.append(f"- properness: {p['properness']['verdict']}")
        lines.append("")
    if "verification" in report:
        v = report["verification"]
        lines.append("## Reconstruction verification")
        lines.append("")
        status = "all equal" if v["all_equal"] else "MISMATCH"
        lines.append(f"- box: {v['box']}, fibers: {len(v['fibers'])}, status: {status}")
        lines.extend(
            _md_table(
                ["weight", "fiber count", "section count", "equal"],
                [
                    [f["weight"], f["fiber_count"], f["section_count"], f["equal"]]
                    for f in v["fibers"]
                ],
            )
        )
        lines.append("")
    if report.get("discrepancies"):
        lines.append("## Discrepancy notes")
        lines.append("")
        for note in report["discrepancies"]:
            lines.append(f"- {json.dumps(note, sort_keys=True)}")
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "md":
        return render_markdown(report)
    return json.dumps(report, indent=2) + "\n"
