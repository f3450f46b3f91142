"""Command line front end.

Three commands: `verify` re-derives every recorded number and identity
and exits nonzero on any mismatch; `run` drives the induction or the
band reduction step by step with optional JSON/SVG artifacts per step;
`section` traces plane sections of a bundled surface and reports the
per-level census.  Exit codes: 0 success, 1 verification failures,
2 usage or internal error, 3 a runner stopped early (no admissible
move / machine halted).
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from .bands import complex_from_iis, detect_rips_cycle, one_end_criterion, rips_step
from .errors import (
    AmbiguousMove,
    Halted,
    NearSaddle,
    NoAdmissibleMove,
    NotFound,
    ThinSectionsError,
)
from .iis import RIGHT, SimilarityReport, affine_match, build_system, rauzy_step
from .sections import component_census, sample_levels, trace_section
from .serialize import (
    complex_from_json,
    complex_to_json,
    components_to_json,
    cycle_report_to_json,
    iis_from_json,
    iis_to_json,
    similarity_report_to_json,
)
from .surface import build_surface
from .svg import complex_svg, section_svg
from .verify import SCOPES, collect_rows, format_report, rows_to_json, summarize

DEFAULT_SEED = 20260815


def _decimal10(x):
    from .verify import _decimal

    return _decimal(x, 10)


# -- verify -----------------------------------------------------------------------


def _cmd_verify(args):
    rows = collect_rows(args.scope)
    if args.json:
        print(json.dumps(rows_to_json(args.scope, rows), indent=2))
    else:
        print(format_report(rows))
    return 1 if summarize(rows)["fail"] else 0


# -- run --------------------------------------------------------------------------


def _load_spec(path):
    with open(path) as fh:
        return json.load(fh)


def _system_for(kind, spec):
    if spec in ("s1", "s2"):
        s = build_system(spec)
        return s if kind == "rauzy" else complex_from_iis(s)
    payload = _load_spec(spec)
    if "pairs" in payload:
        s = iis_from_json(payload)
        return s if kind == "rauzy" else complex_from_iis(s)
    if "bands" in payload and kind == "rips":
        return complex_from_json(payload)
    raise ThinSectionsError(f"{spec}: not a usable {kind} input")


def _emit_state(n, to_json, to_svg, emit_dir, svg_dir):
    if emit_dir:
        with open(os.path.join(emit_dir, f"step_{n:03d}.json"), "w") as fh:
            json.dump(to_json(), fh, indent=1)
    if svg_dir:
        with open(os.path.join(svg_dir, f"step_{n:03d}.svg"), "w") as fh:
            fh.write(to_svg())


def _print_moves(n, moves):
    for m in moves:
        detail = " ".join(f"{k}={v}" for k, v in m.items() if k != "move")
        print(f"  step {n:3d}  {m['move']:<9} {detail}")


def _write_summary(emit_dir, payload):
    if emit_dir:
        with open(os.path.join(emit_dir, "summary.json"), "w") as fh:
            json.dump(payload, fh, indent=1)


def _run_rauzy(s, steps, emit_dir, svg_dir):
    start = s
    log = []
    report = None
    _emit_state(
        0, lambda: iis_to_json(s), lambda: complex_svg(complex_from_iis(s)),
        emit_dir, svg_dir,
    )
    code = 0
    done = 0
    for n in range(1, steps + 1):
        try:
            s, moves = rauzy_step(s, RIGHT, with_log=True)
        except (NoAdmissibleMove, AmbiguousMove) as exc:
            print(f"stopped before step {n}: {exc}")
            code = 3
            break
        log.extend(moves)
        done = n
        _print_moves(n, moves)
        _emit_state(
            n, lambda s=s: iis_to_json(s),
            lambda s=s: complex_svg(complex_from_iis(s)), emit_dir, svg_dir,
        )
        if report is None:
            hit = affine_match(start, s)
            if hit is not None:
                k, t = hit
                report = SimilarityReport(n, k, t, tuple(log))
    print(f"{done} induction steps completed")
    summary = {"kind": "rauzy", "steps": done, "move_log": list(log)}
    if report is not None:
        print(
            f"similarity report: period {report.period}, contraction "
            f"{_decimal10(report.contraction)}, translation "
            f"{_decimal10(report.translation)}"
        )
        summary["similarity"] = similarity_report_to_json(report)
    elif code == 0:
        print(f"no scaled return within {steps} steps")
    _write_summary(emit_dir, summary)
    return code


def _run_rips(x, steps, emit_dir, svg_dir):
    start = x
    log = []
    _emit_state(0, lambda: complex_to_json(x), lambda: complex_svg(x), emit_dir, svg_dir)
    code = 0
    done = 0
    for n in range(1, steps + 1):
        try:
            x, moves = rips_step(x)
        except Halted as exc:
            print(f"halted before step {n}: {exc}")
            code = 3
            break
        log.extend(moves)
        done = n
        _print_moves(n, moves)
        _emit_state(
            n, lambda x=x: complex_to_json(x), lambda x=x: complex_svg(x),
            emit_dir, svg_dir,
        )
    print(f"{done} machine steps completed")
    summary = {"kind": "rips", "steps": done, "move_log": list(log)}
    if code == 0 and steps > 0:
        try:
            rep = detect_rips_cycle(start, steps)
        except NotFound as exc:
            print(str(exc))
        else:
            ok, (lo, hi) = one_end_criterion(rep)
            print(
                f"cycle report: prefix {rep.prefix_steps}, period "
                f"{rep.period_steps}, contraction {_decimal10(rep.contraction)}"
            )
            print(
                f"contraction x length growth in [{float(lo):.6f}, "
                f"{float(hi):.6f}]{' < 1' if ok else ''}"
            )
            summary["cycle"] = cycle_report_to_json(rep)
    _write_summary(emit_dir, summary)
    return code


def _cmd_run(args):
    if args.steps < 0:
        raise ThinSectionsError("--steps must be >= 0")
    for d in (args.emit_json, args.svg):
        if d:
            os.makedirs(d, exist_ok=True)
    system = _system_for(args.kind, args.system)
    if args.kind == "rauzy":
        return _run_rauzy(system, args.steps, args.emit_json, args.svg)
    return _run_rips(system, args.steps, args.emit_json, args.svg)


# -- section ----------------------------------------------------------------------


def _cmd_section(args):
    if args.radius <= 0:
        raise ThinSectionsError("--radius must be positive")
    surface = build_surface(args.example)
    R = args.radius
    explicit = args.level is not None
    if explicit:
        levels = [float(Fraction(part)) for part in args.level.split(",")]
    else:
        levels = sample_levels(surface, args.levels, args.seed, R)
        print(f"sampled {len(levels)} levels with seed {args.seed}")
    per_level = []
    skipped = []
    first = None
    for lv in levels:
        try:
            comps = trace_section(surface, lv, R)
        except NearSaddle as exc:
            skipped.append({"level": lv, "reason": str(exc)})
            print(f"level {lv:.9f}: skipped, too close to a tangency height")
            continue
        census = component_census(comps)
        entry = {"level": lv, "census": census}
        if explicit:
            entry["components"] = components_to_json(comps)
        per_level.append(entry)
        if first is None:
            first = comps
        print(
            f"level {lv:.9f}: {sum(census.values())} components "
            f"(spanning {census['spanning']}, boundary-clipped "
            f"{census['boundary-clipped']}, closed {census['closed']})"
        )
    histogram = {}
    for entry in per_level:
        n = entry["census"]["spanning"]
        histogram[n] = histogram.get(n, 0) + 1
    traced = len(per_level)
    aggregate = {
        "traced": traced,
        "skipped": len(skipped),
        "spanning_histogram": {str(k): histogram[k] for k in sorted(histogram)},
        "fraction_single_spanning": (
            histogram.get(1, 0) / traced if traced else 0.0
        ),
        "closed_total": sum(e["census"]["closed"] for e in per_level),
    }
    print(
        f"aggregate: spanning histogram {aggregate['spanning_histogram']}, "
        f"single-spanning fraction {aggregate['fraction_single_spanning']:.3f}, "
        f"closed total {aggregate['closed_total']}"
    )
    if args.json:
        payload = {
            "example": args.example,
            "radius": R,
            "seed": None if explicit else args.seed,
            "levels": per_level,
            "skipped": skipped,
            "aggregate": aggregate,
        }
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=1)
    if args.svg:
        if first is None:
            print("no traced level; skipping the SVG", file=sys.stderr)
        else:
            with open(args.svg, "w") as fh:
                fh.write(section_svg(first, R))
    return 0


# -- parser -----------------------------------------------------------------------


def _build_parser():
    p = argparse.ArgumentParser(
        prog="thinsections",
        description=(
            "Interval identification systems, band complexes, and plane "
            "sections of the associated periodic surfaces."
        ),
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="re-derive every recorded number and identity")
    v.add_argument("--scope", choices=SCOPES, default="all")
    v.add_argument("--json", action="store_true", help="emit the report as JSON")
    v.set_defaults(fn=_cmd_verify)

    r = sub.add_parser("run", help="drive the induction or the band reduction")
    r.add_argument("kind", choices=("rauzy", "rips"))
    r.add_argument(
        "--system", required=True, metavar="s1|s2|PATH",
        help="bundled system name or path to a serialized one",
    )
    r.add_argument("--steps", type=int, required=True)
    r.add_argument("--emit-json", metavar="DIR", help="write per-step JSON states")
    r.add_argument("--svg", metavar="DIR", help="write per-step SVG frames")
    r.set_defaults(fn=_cmd_run)

    s = sub.add_parser("section", help="trace plane sections of a bundled surface")
    s.add_argument("--example", type=int, choices=(1, 2), required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--levels", type=int, metavar="N", help="sample N random levels")
    g.add_argument("--level", metavar="X[,Y..]", help="explicit level list")
    s.add_argument("--radius", type=float, required=True)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--svg", metavar="PATH", help="plot of the first traced level")
    s.add_argument("--json", metavar="PATH", help="census and aggregate statistics")
    s.set_defaults(fn=_cmd_section)
    return p


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ThinSectionsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal error contract
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
