"""Corpus manifest, bound certificates and the whole-corpus report."""

from __future__ import annotations

import csv
import io
import os
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import CorpusError, SoftPiError, TypingError, Unterminated
from .metrics import bde_term, bound_polynomial, report
from .process import Process, parse_process, size
from .proofterm import ProofTerm, check, extract, judgment_of, parse_thm
from .reducer import Trace
from .rewriting import run_weighted_trace
from .sessiontypes import Judgment, judgment_depth

WORKERS_ENV = "SOFTPI_WORKERS"
DEFAULT_CORPUS = Path(__file__).resolve().parents[2] / "corpus"


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str  # "process" or "proofterm"
    source_path: Path
    expected: str  # "typable", "untypable:<ErrorClass>" or "golden"
    golden: dict = field(default_factory=dict)
    seed: int | None = None

    def text(self) -> str:
        return self.source_path.read_text(encoding="utf-8")

    def term(self) -> tuple[ProofTerm, Judgment | None]:
        if self.kind != "proofterm":
            raise CorpusError(f"{self.name} is not a proof term entry")
        return parse_thm(self.text())

    def process(self) -> Process:
        if self.kind == "process":
            return parse_process(self.text())
        return extract(self.term()[0])

    @property
    def expects_typable(self) -> bool:
        return self.kind == "proofterm" and not self.expected.startswith("untypable")


def load_manifest(root: Path | str = DEFAULT_CORPUS) -> list[CorpusEntry]:
    root = Path(root)
    path = root / "corpus.toml" if root.is_dir() else root
    base = path.parent
    with open(path, "rb") as f:
        data = tomllib.load(f)
    out = []
    for e in data.get("entry", []):
        try:
            out.append(
                CorpusEntry(
                    name=e["name"],
                    kind=e["kind"],
                    source_path=base / e["path"],
                    expected=e["expect"],
                    golden=dict(e.get("golden", {})),
                    seed=e.get("seed"),
                )
            )
        except KeyError as k:
            raise CorpusError(f"manifest entry missing {k}") from None
    names = [e.name for e in out]
    if len(set(names)) != len(names):
        raise CorpusError("duplicate entry names in manifest")
    return out


def typed_terms(entries: list[CorpusEntry]) -> list[tuple[CorpusEntry, ProofTerm]]:
    return [(e, e.term()[0]) for e in entries if e.expects_typable]


# ---------------------------------------------------------------- certificates


@dataclass(frozen=True)
class BoundCertificate:
    entry_name: str
    initial_size: int
    box_depth: int
    trace_length: int
    peak_size: int
    bound_value: int
    terminated: bool

    @property
    def satisfied(self) -> bool:
        return self.terminated and self.trace_length <= self.bound_value and self.peak_size <= self.bound_value


def certificate_of(name: str, d: ProofTerm, trace: Trace) -> BoundCertificate:
    s = size(extract(d))
    bd = bde_term(d)
    return BoundCertificate(
        entry_name=name,
        initial_size=s,
        box_depth=bd,
        trace_length=trace.length,
        peak_size=trace.peak_size,
        bound_value=bound_polynomial(bd, s),
        terminated=trace.terminated,
    )


def certify_term(name: str, d: ProofTerm, strategy: str = "first", seed: int = 0) -> tuple[BoundCertificate, Trace]:
    s = size(extract(d))
    bound = bound_polynomial(bde_term(d), s)
    trace = run_weighted_trace(d, strategy=strategy, max_steps=bound + 1, seed=seed)
    if not trace.terminated:
        raise Unterminated(f"{name}: no normal form within {bound + 1} steps")
    return certificate_of(name, d, trace), trace


def certify(entry: CorpusEntry, strategy: str = "first", seed: int = 0) -> BoundCertificate:
    d, _ = entry.term()
    return certify_term(entry.name, d, strategy, seed)[0]


# ---------------------------------------------------------------- whole-corpus report

REPORT_FIELDS = [
    "name",
    "kind",
    "expect",
    "status",
    "judgment",
    "box_depth",
    "dup_factor",
    "weight",
    "term_size",
    "trace_length",
    "peak_size",
    "bound",
    "satisfied",
]


def _golden_ok(entry: CorpusEntry, d: ProofTerm) -> bool:
    r = report(d)
    actual = {
        "box_depth": r.box_depth,
        "dup_factor": r.dup_factor,
        "weight": r.weight,
        "term_size": r.term_size,
        "judgment_depth": judgment_depth(judgment_of(d)),
    }
    return all(actual[k] == v for k, v in entry.golden.items())


def run_entry(entry: CorpusEntry, strategy: str = "first", seed: int = 0) -> dict:
    row = {k: "" for k in REPORT_FIELDS}
    row.update(name=entry.name, kind=entry.kind, expect=entry.expected)
    if entry.kind == "process":
        p = entry.process()
        row.update(status="ok", term_size=size(p))
        return row
    try:
        d, declared = entry.term()
        if declared is not None:
            check(d, declared)
        j = judgment_of(d)
    except (TypingError, SoftPiError) as e:
        want = entry.expected.split(":", 1)[1] if entry.expected.startswith("untypable:") else None
        row.update(status="ok" if want == type(e).__name__ else f"unexpected {type(e).__name__}")
        row["judgment"] = type(e).__name__
        return row
    if entry.expected.startswith("untypable"):
        row.update(status="unexpectedly typable", judgment=j.text())
        return row
    r = report(d)
    row.update(
        judgment=j.text(),
        box_depth=r.box_depth,
        dup_factor=r.dup_factor,
        weight=r.weight,
        term_size=r.term_size,
    )
    status = "ok"
    if entry.expected == "golden" and not _golden_ok(entry, d):
        status = "golden mismatch"
    try:
        cert, _ = certify_term(entry.name, d, strategy, seed)
        row.update(
            trace_length=cert.trace_length,
            peak_size=cert.peak_size,
            bound=cert.bound_value,
            satisfied=str(cert.satisfied).lower(),
        )
        if not cert.satisfied:
            status = "bound violated"
    except SoftPiError as e:
        status = type(e).__name__
    row["status"] = status
    return row


def worker_count() -> int:
    return max(1, int(os.environ.get(WORKERS_ENV, "4")))


def run_corpus(entries: list[CorpusEntry], strategy: str = "first", seed: int = 0) -> list[dict]:
    """Run every entry on a fixed worker pool; rows come back in manifest order."""
    # deep terms recurse far; worker threads need a larger stack than the default
    threading.stack_size(256 * 1024 * 1024)
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        return list(pool.map(lambda e: run_entry(e, strategy, seed), entries))


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def rows_to_lines(rows: list[dict]) -> str:
    return "".join(" ".join(f"{k}={r[k]}" for k in REPORT_FIELDS if r[k] != "") + "\n" for r in rows)
