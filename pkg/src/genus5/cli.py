"""Command-line front end.

    genus5 classify  [--pattern TAG | --case I|II] [--expect-paper] [--out FILE]
    genus5 search    --pattern TAG --orbit K [--N 32] [--range A:B] [--workers W]
    genus5 verify    SEXTIC [--point P ...] [--expect-N1 32] [--expect-weil ...]
    genus5 weil      SEXTIC | --counts N1,...,N5
    genus5 reproduce [--figures DIR] [--json]

Exit codes: 0 success, 1 mismatch or failed verification, 2 usage error,
3 interrupted search (re-run the same command to resume).
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import os
import shutil
import sys
import time
from pathlib import Path

from . import __version__
from .enumeration import (SearchTask, case_ii_tasks, config_summary, iterate_candidates,
                          solution_basis)
from .field_tower import make_tower
from .fixtures import (case_ii_constraints, listed_orbit_count, listed_representatives, reciprocal_sextic,
                       reference_curves, theorem_weil_classes)
from .orbit_classification import ALL_TAGS, classify, locate_all, order_by_paper, parse_tag
from .point_counting import count_vector, factor_weil, weil_from_counts
from .polynomials.forms import MPoly, parse_point, parse_poly
from .singularity import (PositiveDimensionalSingularLocus, SingularConfig, non_special_report,
                          point_report, singular_locus)

log = logging.getLogger("genus5")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INTERRUPTED = 0, 1, 2, 3
CHECKPOINT_ENV = "GENUS5_CHECKPOINT_DIR"
MANIFEST_SCHEMA = 1


class UsageError(Exception):
    pass


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=1, sort_keys=True, default=str))
    else:
        print(text)


def _table(rows, header):
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    line = "  ".join(str(h).ljust(w) for h, w in zip(header, widths))
    out = [line, "  ".join("-" * w for w in widths)]
    for r in rows:
        out.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)))
    return "\n".join(out)


def _write_tsv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t")
        w.writerow(header)
        w.writerows(rows)
    return path


# --- classify ------------------------------------------------------------------

def _selected_tags(args):
    if args.pattern:
        tag = args.pattern
        parse_tag(tag)
        if tag == "1,1,1,2":
            return ["1,1,1,2-indep", "1,1,1,2-dep"]
        return [tag]
    if args.case == "II":
        return [t for t in ALL_TAGS if t.startswith("II")]
    if args.case == "I":
        return [t for t in ALL_TAGS if not t.startswith("II")]
    return list(ALL_TAGS)


def classified_table(tag):
    """Orbit table for a tag, with listed representatives located and ordered first."""
    T = classify(tag)
    located = []
    try:
        reps = listed_representatives(tag)
    except KeyError:
        reps = []
    if reps:
        located = locate_all(T, reps)
        T = order_by_paper(T, located)
        located = locate_all(T, reps)
    return T, located


def cmd_classify(args):
    rows, payload, mismatch = [], [], False
    tables = []
    for tag in _selected_tags(args):
        t0 = time.time()
        T, located = classified_table(tag)
        tables.append(T)
        listed = None
        try:
            listed = listed_orbit_count(tag)
        except KeyError:
            pass
        distinct = len(set(located)) == len(located) and None not in located
        ok = listed is None or (len(T) == listed and distinct)
        mismatch |= not ok
        rows.append((tag, T.configs_total, len(T), "-" if listed is None else listed,
                     ",".join("?" if i is None else str(i) for i in located) or "-",
                     ",".join(str(o.size) for o in T.orbits), "ok" if ok else "MISMATCH"))
        payload.append(dict(T.to_json(), listed_orbits=listed, listed_located=located, ok=ok,
                            seconds=round(time.time() - t0, 2)))
    if args.out:
        from .orbit_classification import save_tables
        save_tables(tables, args.out)
    if args.figures:
        from .plotting import orbit_counts_chart
        orbit_counts_chart([(r[0], r[2], None if r[3] == "-" else r[3]) for r in rows],
                           Path(args.figures) / "orbit_counts.png")
        _write_tsv(Path(args.figures) / "orbit_counts.tsv",
                   ["pattern", "configs", "orbits", "listed", "listed_in_orbit", "orbit_sizes", "status"], rows)
    header = ("pattern", "configs", "orbits", "listed", "listed reps -> orbit", "orbit sizes", "status")
    _emit(args, {"tables": payload}, _table(rows, header))
    if args.expect_paper and mismatch:
        return EXIT_MISMATCH
    return EXIT_OK


# --- verify / weil -------------------------------------------------------------------

def read_sextic(text: str, reciprocal: bool = False) -> MPoly:
    if text.startswith("@"):
        text = Path(text[1:]).read_text().strip()
    if reciprocal:
        return reciprocal_sextic(text)
    F = parse_poly(text)
    if F.field.degree != 1:
        F = F.restrict(1)  # raises if a coefficient is outside GF(3)
    if F.degree() != 6 or not F.is_homogeneous():
        raise UsageError("expected a homogeneous sextic in x, y, z")
    return F


def config_from_points(points, label="") -> SingularConfig:
    """Points given as text, '^3' marks the triple point; each stands for its Frobenius orbit."""
    reps, mults = [], []
    for p in points:
        m = 2
        if p.endswith("^3"):
            p, m = p[:-2], 3
        reps.append(parse_point(p))
        mults.append(m)
    case = "II" if 3 in mults else "I"
    return SingularConfig.from_orbits(case, reps, mults, label)


def verify_curve(F: MPoly, config: SingularConfig | None = None, seed: int = 0):
    """Full report for one sextic; ``config`` defaults to its singular locus."""
    out = {"sextic": str(F)}
    try:
        locus = singular_locus(F, seed=seed)
    except PositiveDimensionalSingularLocus as exc:
        out.update(ok=False, reason=f"positive-dimensional singular locus ({exc})")
        return out
    out["singular_locus"] = [str(e.point) if e.point else f"<degree {e.degree} orbit>" for e in locus]
    if config is None:
        pts = []
        for e in locus:
            if e.point is None:
                continue
            pts.append((e.point, point_report(F, e.point).multiplicity))
        case = "II" if any(m == 3 for _, m in pts) else "I"
        config = SingularConfig(case, tuple(pts), (), "locus")
    ns = non_special_report(F, config, locus=locus)
    out["points"] = [r.to_json() for r in ns.reports]
    out["ok"] = ns.ok
    out["reason"] = ns.reason
    if not ns.ok:
        return out
    cv = count_vector(F, config)
    W = weil_from_counts(cv.N)
    out.update(N=list(cv.N), plane_counts=list(cv.plane), weil=list(W.coeffs),
               weil_expanded=str(W), weil_factored=W.factored(),
               functional_equation=W.satisfies_functional_equation(), roots_on_circle=W.roots_on_circle())
    return out


def _verify_text(rep):
    lines = [f"sextic: {rep['sextic']}"]
    if "singular_locus" in rep:
        lines.append("singular points: " + ", ".join(rep["singular_locus"]))
    for p in rep.get("points", []):
        lines.append(f"  {p['point']}: m={p['multiplicity']} cone={p['tangent_cone']} "
                     f"delta={p.get('discriminant')} resolved={p['resolved_in_one_blowup']}")
    if not rep["ok"]:
        lines.append(f"FAIL: {rep['reason']}")
        return "\n".join(lines)
    lines.append("N1..N5: " + " ".join(map(str, rep["N"])))
    lines.append(f"Weil: {rep['weil_expanded']}")
    lines.append(f"      = {rep['weil_factored']}")
    return "\n".join(lines)


def _check_expectations(rep, args):
    problems = []
    if not rep["ok"]:
        problems.append(rep["reason"])
        return problems
    if args.expect_N1 is not None and rep["N"][0] != args.expect_N1:
        problems.append(f"N1 = {rep['N'][0]}, expected {args.expect_N1}")
    if args.expect_weil and rep["weil_factored"].replace(" ", "") != args.expect_weil.replace(" ", ""):
        problems.append(f"Weil polynomial {rep['weil_factored']}, expected {args.expect_weil}")
    return problems


def cmd_verify(args):
    F = read_sextic(args.sextic, args.reciprocal)
    config = config_from_points(args.point) if args.point else None
    rep = verify_curve(F, config, seed=args.seed)
    problems = _check_expectations(rep, args)
    rep["problems"] = problems
    text = _verify_text(rep) + ("".join(f"\nMISMATCH: {p}" for p in problems) if rep["ok"] else "")
    _emit(args, rep, text)
    return EXIT_MISMATCH if problems else EXIT_OK


def cmd_weil(args):
    if args.counts:
        try:
            N = [int(x) for x in args.counts.split(",")]
            W = weil_from_counts(N)
        except ArithmeticError as exc:
            raise UsageError(f"--counts: {exc}") from None
    else:
        if not args.sextic:
            raise UsageError("give a sextic or --counts")
        F = read_sextic(args.sextic, args.reciprocal)
        config = config_from_points(args.point) if args.point else None
        rep = verify_curve(F, config, seed=args.seed)
        if not rep["ok"]:
            _emit(args, rep, f"FAIL: {rep['reason']}")
            return EXIT_MISMATCH
        W = weil_from_counts(rep["N"])
    payload = {"weil": list(W.coeffs), "expanded": str(W), "factored": W.factored(),
               "functional_equation": W.satisfies_functional_equation(), "roots_on_circle": W.roots_on_circle()}
    _emit(args, payload, f"{W}\n= {W.factored()}")
    return EXIT_OK


# --- reproduce ---------------------------------------------------------------------

def cmd_reproduce(args):
    curves = reference_curves()
    if args.fixtures:
        data = json.loads(Path(args.fixtures).read_text())
        from . import fixtures as fx
        fx.fixture_data.cache_clear()
        original = fx.fixture_data
        fx.fixture_data = lambda: data
        try:
            curves = reference_curves()
        finally:
            fx.fixture_data = original
    classes = theorem_weil_classes()
    rows, payload, failures = [], [], []
    for rc in curves:
        t0 = time.time()
        rep = verify_curve(rc.form, rc.config, seed=args.seed)
        expected = rc.weil_coeffs
        good = rep["ok"] and rep["N"][0] == rc.N1 and tuple(rep["weil"]) == tuple(expected)
        if not good:
            failures.append(rc.name)
        cls = classes.index(tuple(rep["weil"])) + 1 if rep["ok"] and tuple(rep["weil"]) in classes else None
        rows.append((rc.name, rc.pattern or "-", rep["N"][0] if rep["ok"] else "-",
                     rep.get("weil_factored", rep.get("reason")), cls or "-", "ok" if good else "FAIL",
                     f"{time.time() - t0:.1f}s"))
        payload.append(dict(rep, name=rc.name, expected_weil=list(expected), passed=good, theorem_class=cls))
    seen = {tuple(p["weil"]) for p in payload if p.get("ok")}
    four = seen == set(classes)
    if not four:
        failures.append("weil-classes")
    summary = {"curves": len(curves), "verified": sum(p["passed"] for p in payload),
               "distinct_weil": len(seen), "theorem_classes_matched": four, "failures": failures}
    header = ("curve", "pattern", "N1", "Weil polynomial", "class", "status", "time")
    text = _table(rows, header)
    text += "\n\nWeil classes:\n" + "\n".join(
        f"  ({i}) {factor_weil(c)}  " + ("found" if c in seen else "MISSING") for i, c in enumerate(classes, 1))
    text += f"\n\n{summary['verified']}/{len(curves)} curves verified, {len(seen)} distinct Weil polynomials"
    if failures:
        text += "\nFAILED: " + ", ".join(failures)
    if args.figures:
        from .plotting import point_count_chart, weil_class_chart
        fig = Path(args.figures)
        point_count_chart([(r[0], r[2] if isinstance(r[2], int) else 0) for r in rows], fig / "n1_by_curve.png")
        counts = {}
        for p in payload:
            if p.get("ok"):
                counts[p["weil_factored"]] = counts.get(p["weil_factored"], 0) + 1
        weil_class_chart(counts, fig / "weil_classes.png")
        _write_tsv(fig / "reproduce.tsv", ["curve", "pattern", "N1", "N2", "N3", "N4", "N5", "weil", "status"],
                   [(p["name"], r[1], *p.get("N", ["-"] * 5), p.get("weil_factored", "-"), r[5])
                    for p, r in zip(payload, rows)])
    _emit(args, {"summary": summary, "curves": payload}, text)
    return EXIT_MISMATCH if failures else EXIT_OK


# --- search ---------------------------------------------------------------------

def checkpoint_root(args) -> Path:
    return Path(args.checkpoint_dir or os.environ.get(CHECKPOINT_ENV) or "genus5-runs")


def _search_configs(args):
    """[(tag, label, SingularConfig)] selected by the options."""
    if args.full:
        out = []
        for tag in ALL_TAGS:
            T, _ = classified_table(tag)
            out.extend((tag, f"{tag}#{i}", T.config(i)) for i in range(1, len(T) + 1))
        return out
    if args.point:
        cfg = config_from_points(args.point, "points")
        return [("points", "points", cfg)]
    if not args.pattern:
        raise UsageError("search needs --pattern with --orbit, --point, or --full")
    T, _ = classified_table(args.pattern)
    k = args.orbit or 1
    if not 1 <= k <= len(T):
        raise UsageError(f"pattern {args.pattern} has {len(T)} orbits; --orbit {k} is out of range")
    return [(args.pattern, f"{args.pattern}#{k}", T.config(k))]


def case_ii_tag(cfg: SingularConfig) -> str:
    sizes = sorted(len(orb) for orb in cfg.orbits() if orb[0][1] == 2)
    return "II:" + ",".join(map(str, sizes))


def _tasks_for(label, cfg, N):
    if cfg.case == "II":
        slots, tuples = case_ii_constraints(case_ii_tag(cfg))
        return case_ii_tasks(cfg, N, slots, tuples, label + ":")
    return [SearchTask(cfg, solution_basis(cfg), N, label=label)]


def _manifest(args, label, cfg, task, rng):
    return {
        "schema": MANIFEST_SCHEMA, "version": __version__, "command": "search",
        "config": label, "points": [[str(P), m] for P, m in cfg.points], "N": task.N,
        "d": task.basis.dim, "basis_digest": task.basis.digest(), "affine": task.affine,
        "particular": "".join(map(str, task.particular)) if task.particular else None,
        "range": [task.start, task.end], "total": task.total, "seed": args.seed,
        "tower": make_tower(max(cfg.compositum_degree, 1)).manifest(),
        "dedup": "first nonzero coordinate of v equals 1" if not task.affine else "affine, no dedup",
        "task": task.label, "range_spec": rng,
    }


def _parse_range(text, total):
    if not text:
        return 0, total
    a, _, b = text.partition(":")
    start = int(a) if a else 0
    end = int(b) if b else total
    if not 0 <= start <= end <= total:
        raise UsageError(f"--range {text} outside 0..{total}")
    return start, end


def cmd_search(args):
    items = _search_configs(args)
    root = checkpoint_root(args)
    report, all_survivors, interrupted = [], [], False
    for tag, label, cfg in items:
        for task in _tasks_for(label, cfg, args.N):
            start, end = _parse_range(args.range, task.total)
            task = SearchTask(task.config, task.basis, task.N, start, end, task.particular, task.affine, task.label)
            man = _manifest(args, label, cfg, task, args.range)
            digest = hashlib.sha256(json.dumps(man, sort_keys=True).encode()).hexdigest()[:16]
            entry = {"task": task.label, "d": task.basis.dim, "candidates": end - start,
                     "total": task.total, "run": digest}
            if args.dry_run:
                entry.update(config_summary(cfg, None if task.affine else task.basis))
                entry["d"] = task.basis.dim
                report.append(entry)
                continue
            run = root / f"run-{digest}"
            done = run / "summary.json"
            if done.exists() and not args.force:
                raise UsageError(f"{run} holds a completed run; pass --force to redo it")
            if args.force and run.exists():
                shutil.rmtree(run)
            run.mkdir(parents=True, exist_ok=True)
            (run / "manifest.json").write_text(json.dumps(man, indent=1, sort_keys=True))
            try:
                summary = iterate_candidates(task, workers=args.workers, checkpoint_dir=run / "parts",
                                             task_id="part", progress=_progress if args.progress else None)
            except KeyboardInterrupt:
                interrupted = True
                report.append(dict(entry, status="interrupted"))
                break
            with (run / "results.jsonl").open("w") as fh:
                for r in summary.survivors:
                    fh.write(json.dumps(r.to_json(), sort_keys=True) + "\n")
            done.write_text(json.dumps(summary.to_json(), indent=1))
            entry.update(summary.to_json(), status="done", results=str(run / "results.jsonl"))
            report.append(entry)
            all_survivors.extend(summary.survivors)
            if args.figures:
                from .plotting import stage_chart
                stage_chart(summary.to_json(), Path(args.figures) / f"stages-{digest}.png", task.label)
        if interrupted:
            break
    if args.out and not args.dry_run:
        with open(args.out, "w") as fh:
            for r in sorted(all_survivors, key=lambda r: (r.task, r.index)):
                fh.write(json.dumps(r.to_json(), sort_keys=True) + "\n")
    if args.figures and not args.dry_run:
        _write_tsv(Path(args.figures) / "survivors.tsv", ["task", "index", "N1", "weil", "sextic"],
                   [(r.task, r.index, r.counts[0], r.weil_factored, r.sextic) for r in all_survivors])
    text = _table([(e["task"], e["d"], e["candidates"], e.get("status", "dry-run"),
                    e.get("survivors", "-"), e.get("seconds", "-")) for e in report],
                  ("task", "d", "candidates", "status", "survivors", "seconds"))
    if all_survivors and not args.json:
        text += "\n\n" + "\n".join(f"{r.task} #{r.index}: N1={r.counts[0]} {r.weil_factored}\n    {r.sextic}"
                                   for r in all_survivors)
    _emit(args, {"runs": report, "survivors": [r.to_json() for r in all_survivors]}, text)
    if interrupted:
        print("interrupted; re-run the same command to resume", file=sys.stderr)
        return EXIT_INTERRUPTED
    if args.expect_paper and not args.dry_run:
        classes = set(theorem_weil_classes())
        bad = [r for r in all_survivors if r.counts[0] > 32 or (r.counts[0] == 32 and tuple(r.weil) not in classes)]
        if bad:
            return EXIT_MISMATCH
    return EXIT_OK


def _progress(done, total):
    print(f"\r{done}/{total}", end="", file=sys.stderr, flush=True)
    if done >= total:
        print(file=sys.stderr)


# --- entry point -------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="genus5", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="count", default=0)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--figures", metavar="DIR", help="write charts and TSV tables here")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="PGL3(F3)-orbits of singular-point configurations")
    c.add_argument("--pattern", help="e.g. 1,2,2 or 1,1,1,2-dep or II:2")
    c.add_argument("--case", choices=["I", "II"])
    c.add_argument("--expect-paper", action="store_true", help="exit 1 unless the listed counts are matched")
    c.add_argument("--out", help="write the orbit tables as JSON")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("search", parents=[common], help="enumerate sextics for one or more configurations")
    s.add_argument("--pattern")
    s.add_argument("--orbit", type=int, help="1-based orbit index (listed order first)")
    s.add_argument("--case", choices=["I", "II"], help=argparse.SUPPRESS)
    s.add_argument("--point", action="append", help="orbit representative; append ^3 for the triple point")
    s.add_argument("--N", type=int, default=32, help="keep curves with at least N points over F9")
    s.add_argument("--range", help="candidate index range START:END")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--checkpoint-dir", help=f"run directory root (default ${CHECKPOINT_ENV} or ./genus5-runs)")
    s.add_argument("--dry-run", action="store_true")
    s.add_argument("--force", action="store_true", help="redo a completed run")
    s.add_argument("--full", action="store_true", help="every configuration of both cases (long)")
    s.add_argument("--expect-paper", action="store_true")
    s.add_argument("--out", help="write all survivors as JSON lines")
    s.add_argument("--progress", action="store_true")
    s.set_defaults(func=cmd_search)

    for name, func, helptext in (("verify", cmd_verify, "full report for one sextic"),
                                 ("weil", cmd_weil, "Weil polynomial over F9")):
        v = sub.add_parser(name, parents=[common], help=helptext)
        v.add_argument("sextic", nargs="?" if name == "weil" else None, help="form in x, y, z or @FILE")
        v.add_argument("--point", action="append", help="configured singular point (orbit representative)")
        v.add_argument("--reciprocal", action="store_true",
                       help="input is an affine curve in x, y; use its sextic in 1/x, 1/y")
        if name == "verify":
            v.add_argument("--expect-N1", type=int)
            v.add_argument("--expect-weil")
        else:
            v.add_argument("--counts", help="N1,...,N5 instead of a curve")
        v.set_defaults(func=func)

    r = sub.add_parser("reproduce", parents=[common], help="verify the shipped reference curves")
    r.add_argument("--fixtures", help="alternative fixture JSON")
    r.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"genus5: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"genus5: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return EXIT_INTERRUPTED


if __name__ == "__main__":
    sys.exit(main())
