"""Command-line front end: ``python -m softpi.cli <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

from .corpus import DEFAULT_CORPUS, certify_term, load_manifest, rows_to_csv, rows_to_lines, run_corpus
from .errors import SoftPiError
from .metrics import report
from .process import NIL, bde_process, parse_process, size, struct_congruent, to_text
from .proofterm import check, extract, judgment_of, parse_thm
from .reducer import build_blowup_family, run_to_normal_form
from .rewriting import run_weighted_trace
from .sessiontypes import judgment_depth


def _emit(rows: list[dict], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if not rows:
        return
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    else:
        for r in rows:
            out.write(" ".join(f"{k}={v}" for k, v in r.items()) + "\n")


def _load_term(path: str):
    return parse_thm(Path(path).read_text(encoding="utf-8"))


def _trace_rows(trace) -> list[dict]:
    return [{"index": s.index, "rule": s.rule, "wei": s.wei, "dupf": s.dupf, "size": s.size} for s in trace.steps]


def cmd_check(a) -> int:
    d, declared = _load_term(a.file)
    j = check(d, declared).judgment if declared is not None else judgment_of(d)
    print(j.text())
    return 0


def cmd_extract(a) -> int:
    d, _ = _load_term(a.file)
    print(to_text(extract(d)))
    return 0


def _analyze_targets(paths: list[str]) -> list[tuple[str, str]]:
    """(name, .thm path) pairs; a directory or manifest expands to its typable proof terms."""
    out = []
    for p in paths:
        path = Path(p)
        if path.is_dir() or path.suffix == ".toml":
            out.extend((e.name, str(e.source_path)) for e in load_manifest(path) if e.expects_typable)
        else:
            out.append((path.stem, p))
    return out


def cmd_analyze(a) -> int:
    rows = []
    for name, path in _analyze_targets(a.files):
        d, _ = _load_term(path)
        j = judgment_of(d)
        r = report(d)
        rows.append(
            {
                "name": name,
                "size": r.term_size,
                "bde": r.box_depth,
                "dupf": r.dup_factor,
                "wei": r.weight,
                "judgment_depth": judgment_depth(j),
            }
        )
    _emit(rows, a.format)
    return 0


def cmd_reduce(a) -> int:
    d, _ = _load_term(a.file)
    trace = run_weighted_trace(d, strategy=a.strategy, max_steps=a.max_steps, seed=a.seed)
    if a.emit_trace:
        with open(a.emit_trace, "w", encoding="utf-8", newline="") as f:
            _emit(_trace_rows(trace), "csv", f)
    _emit(
        [
            {
                "steps": trace.length,
                "terminated": str(trace.terminated).lower(),
                "initial_wei": trace.initial_wei,
                "final_wei": trace.steps[-1].wei if trace.steps else trace.initial_wei,
                "peak_size": trace.peak_size,
            }
        ],
        a.format,
    )
    print(to_text(trace.final))
    return 0


def cmd_run(a) -> int:
    p = parse_process(Path(a.file).read_text(encoding="utf-8"))
    trace = run_to_normal_form(p, strategy=a.strategy, max_steps=a.max_steps, seed=a.seed)
    if a.emit_trace:
        with open(a.emit_trace, "w", encoding="utf-8", newline="") as f:
            _emit([{"index": s.index, "rule": s.rule, "size": s.size} for s in trace.steps], "csv", f)
    _emit(
        [{"steps": trace.length, "terminated": str(trace.terminated).lower(), "peak_size": trace.peak_size}],
        a.format,
    )
    print(to_text(trace.final))
    return 0


def cmd_blowup(a) -> int:
    t0 = time.perf_counter()
    p = build_blowup_family(a.n)
    trace = run_to_normal_form(p, strategy=a.strategy, max_steps=a.max_steps, seed=a.seed)
    row = {
        "n": a.n,
        "initial_size": size(p),
        "box_depth": bde_process(p),
        "steps": trace.length,
        "peak_size": trace.peak_size,
        "terminated": str(trace.terminated).lower(),
        "final_congruent_to_nil": str(struct_congruent(trace.final, NIL)).lower(),
        "final_size": size(trace.final),
        "seconds": f"{time.perf_counter() - t0:.3f}",
    }
    _emit([row], a.format)
    return 0


def cmd_certify(a) -> int:
    d, _ = _load_term(a.file)
    cert, _ = certify_term(Path(a.file).stem, d, a.strategy, a.seed)
    row = dict(vars(cert))
    row["satisfied"] = str(cert.satisfied).lower()
    _emit([row], a.format)
    return 0 if cert.satisfied else 1


def cmd_corpus(a) -> int:
    rows = run_corpus(load_manifest(a.manifest), a.strategy, a.seed)
    sys.stdout.write(rows_to_csv(rows) if a.format == "csv" else rows_to_lines(rows))
    return 0 if all(r["status"] == "ok" for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="softpi", description="Soft session types toolkit.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help_, file=True, trace=False):
        p = sub.add_parser(name, help=help_)
        if file:
            p.add_argument("file")
        p.add_argument("--format", choices=("csv", "lines"), default="lines")
        if trace:
            p.add_argument("--strategy", choices=("first", "random"), default="first")
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--max-steps", type=int, default=100_000)
            p.add_argument("--emit-trace", default=None)
        p.set_defaults(fn=fn)
        return p

    add("check", cmd_check, "type-check a .thm file")
    add("extract", cmd_extract, "print the process of a proof term")
    p = add("analyze", cmd_analyze, "size, box depth, duplicability and weight", file=False)
    p.add_argument("files", nargs="+", help=".thm files, corpus directories or manifests")
    p.set_defaults(format="csv")
    add("reduce", cmd_reduce, "weighted trace of a proof term", trace=True)
    add("run", cmd_run, "reduce a .pi process", trace=True)
    p = add("blowup", cmd_blowup, "run the duplicating-server family", file=False, trace=True)
    p.add_argument("--n", type=int, required=True)
    add("certify", cmd_certify, "polynomial bound certificate", trace=True)
    p = add("corpus", cmd_corpus, "run the whole corpus", file=False, trace=True)
    p.add_argument("--manifest", default=str(DEFAULT_CORPUS))
    p.set_defaults(format="csv")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SoftPiError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
