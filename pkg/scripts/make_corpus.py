"""Regenerate corpus/ from the library examples and the random generator."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from softpi import library as L
from softpi.generate import GenConfig, generate
from softpi.process import prenex, to_text
from softpi.proofterm import extract, judgment_of, thm_text
from softpi.reducer import build_blowup_family, redexes

# hand-evaluated from the weight tables; see tests/test_metrics.py
GOLDEN = {
    "mult_1_2": {"box_depth": 0, "dup_factor": 0, "weight": 3, "term_size": 3, "judgment_depth": 1},
    "der_1": {"box_depth": 0, "dup_factor": 1, "weight": 1, "term_size": 1, "judgment_depth": 1},
}


def _entry(name, kind, path, expect, seed=None):
    lines = ["[[entry]]", f'name = "{name}"', f'kind = "{kind}"', f'path = "{path}"', f'expect = "{expect}"']
    if seed is not None:
        lines.append(f"seed = {seed}")
    if expect == "golden":
        lines.append("golden = { " + ", ".join(f"{k} = {v}" for k, v in GOLDEN[name].items()) + " }")
    return "\n".join(lines) + "\n"


def build(out: Path, n_random: int, start_seed: int) -> None:
    out.mkdir(parents=True, exist_ok=True)
    manifest = ["# corpus manifest: one [[entry]] per file; regenerate with scripts/make_corpus.py\n"]

    def thm(name, d, j=None, expect="typable", seed=None):
        j = j or judgment_of(d)
        (out / f"{name}.thm").write_text(thm_text(d, j) + "\n", encoding="utf-8")
        manifest.append(_entry(name, "proofterm", f"{name}.thm", expect, seed))

    for n in range(5):
        thm(f"mult_1_{n}", L.mult(n), L.mult_judgment(n), "golden" if n == 2 else "typable")
    for n in range(5):
        thm(f"mult_spawn_{n}", L.mult_spawning(n), L.mult_judgment(n))
        thm(f"mult_closed_{n}", L.mult_closed(n))
    thm("mult_1_2_closed", L.mult_closed(2, spawning=False))
    thm("der_1", L.der_one(), L.der_judgment(), "golden")
    thm("credit_card", L.credit_card(), L.credit_card_judgment())
    thm("credit_card_persistent", L.credit_card_persistent(), L.credit_card_judgment())
    thm("credit_card_session", L.credit_card_session())
    thm("credit_card_persistent_session", L.credit_card_session(persistent=True))
    for n in (1, 2, 3):
        thm(f"server_chain_{n}", L.bang_chain(n))
    (out / "dupser.thm").write_text(L.DUPSER_SCRIPT, encoding="utf-8")
    manifest.append(_entry("dupser", "proofterm", "dupser.thm", "untypable:AuxiliaryNonlinear"))
    for n in (1, 2, 3):
        (out / f"blowup_{n}.pi").write_text(to_text(build_blowup_family(n)) + "\n", encoding="utf-8")
        manifest.append(_entry(f"blowup_{n}", "process", f"blowup_{n}.pi", "process"))
    (out / "credit_card.pi").write_text(to_text(extract(L.credit_card_session())) + "\n", encoding="utf-8")
    manifest.append(_entry("credit_card_process", "process", "credit_card.pi", "process"))

    # random terms: keep seeds whose extracted process can reduce, plus a few inert ones
    kept, inert, seed = 0, 0, start_seed
    while kept < n_random:
        d = generate(seed, GenConfig())
        active = bool(redexes(prenex(extract(d))))
        if active or inert < n_random // 5:
            inert += not active
            thm(f"gen_{seed:04d}", d, seed=seed)
            kept += 1
        seed += 1
    (out / "corpus.toml").write_text("\n".join(manifest), encoding="utf-8")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "corpus")
    ap.add_argument("--random", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    sys.setrecursionlimit(100_000)
    build(args.out, args.random, args.seed)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
