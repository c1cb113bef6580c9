"""Acceptance criteria, one test each; every test records a PASS or FAIL line.

Run ``pytest tests/test_acceptance.py`` to see the summary lines at the end of
the session, or ``python tests/test_acceptance.py`` to print them directly.
"""

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from checks import sr_problems, step_problems, visible_problems  # noqa: E402
from softpi.corpus import certify_term, load_manifest, typed_terms  # noqa: E402
from softpi.errors import AuxiliaryNonlinear, SoftPiError  # noqa: E402
from softpi.generate import generate  # noqa: E402
from softpi.library import DUPSER_SCRIPT, mult, mult_judgment, tensor_power  # noqa: E402
from softpi.metrics import bde_term, dupf, foc, size_term, weip  # noqa: E402
from softpi.process import (  # noqa: E402
    NIL,
    RepIn,
    bde_process,
    canonical_form,
    congruence_step,
    alpha_eq,
    prenex,
    size,
    struct_congruent,
)
from softpi.proofterm import (  # noqa: E402
    CUTS,
    EXP_CUTS,
    BangR,
    FlatBang,
    OneL,
    OneR,
    check,
    extract,
    judgment_of,
    lift,
    parse_thm,
    positions,
)
from softpi.reducer import build_blowup_family, redexes, run_to_normal_form  # noqa: E402
from softpi.rewriting import all_steps, run_weighted_trace  # noqa: E402
from softpi.sessiontypes import EMPTY, Context, judgment_depth  # noqa: E402

RESULTS: dict[int, str] = {}
ENTRIES = load_manifest()
TERMS = typed_terms(ENTRIES)


def record(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    RESULTS[n] = line
    print(line)


def cut_free(d) -> bool:
    return not any(isinstance(sub, CUTS) for _, sub in positions(d))


def trace_states(limit: int) -> list:
    """Typed proof terms reached along the reduction traces of the corpus terms."""
    out = []
    for _, d in TERMS:
        out.extend(s.term for s in run_weighted_trace(d).steps)
    return out[:limit]


# ---------------------------------------------------------------- 1


def blowup_rows():
    rows = []
    t0 = time.perf_counter()
    for n in range(2, 11):
        p = build_blowup_family(n)
        t = run_to_normal_form(p)
        rows.append((n, size(p), t))
    return rows, time.perf_counter() - t0


def test_criterion_1_blowup():
    rows, seconds = blowup_rows()
    problems = []
    for n, s0, t in rows:
        if not t.terminated:
            problems.append(f"n={n} did not terminate")
        if not 2**n <= t.length <= 2 ** (n + 3):
            problems.append(f"n={n} steps {t.length}")
        if t.peak_size < 2**n:
            problems.append(f"n={n} peak {t.peak_size}")
        if s0 > 5 * n + 10:
            problems.append(f"n={n} initial size {s0}")
        if not struct_congruent(t.final, NIL):
            problems.append(f"n={n} final size {size(t.final)} not congruent to 0")
    if seconds >= 10:
        problems.append(f"runtime {seconds:.2f}s")
    ok = not problems
    record(1, ok, f"n=2..10 in {seconds:.2f}s; " + ("; ".join(problems[:3]) + (" ..." if len(problems) > 3 else "") if problems else "all bounds hold"))
    assert ok, problems


def test_criterion_1_companion_final_state_is_only_servers():
    # what is left after the blowup is the idle replicated servers
    rows, _ = blowup_rows()
    for n, _, t in rows:
        comps = prenex(t.final).comps
        assert all(isinstance(c, RepIn) for c in comps)
        assert len(comps) == n + 1
        assert redexes(prenex(t.final)) == []


# ---------------------------------------------------------------- 2


def _reuses_aux(k: int):
    """A box whose body spawns its single auxiliary server ``k`` times."""
    body = OneR("y")
    for i in range(k):
        body = FlatBang("a", f"w{i}", OneL(f"w{i}", body))
    return BangR("x", "y", ("a",), body)


@pytest.mark.parametrize("k", [2, 3, 5])
def test_criterion_2_property_reuse_rejected(k):
    with pytest.raises(AuxiliaryNonlinear):
        judgment_of(_reuses_aux(k))


def test_criterion_2_untypability():
    d, declared = parse_thm(DUPSER_SCRIPT)
    try:
        check(d, declared)
        outcome = "typable"
    except SoftPiError as e:
        outcome = type(e).__name__
    rejected = []
    for k in range(2, 7):
        try:
            judgment_of(_reuses_aux(k))
            rejected.append(False)
        except AuxiliaryNonlinear:
            rejected.append(True)
    single_use_ok = judgment_of(_reuses_aux(1)) is not None
    ok = outcome == "AuxiliaryNonlinear" and all(rejected) and single_use_ok
    record(2, ok, f"dupser script -> {outcome}; reuse k=2..6 rejected {sum(rejected)}/5")
    assert ok


# ---------------------------------------------------------------- 3


def test_criterion_3_mult_typability():
    results = []
    for n in range(5):
        declared = mult_judgment(n)
        want = (EMPTY, EMPTY, Context.of(x=declared.lin["x"]), "y", tensor_power(n + 2))
        got = check(mult(n), declared).judgment
        results.append((declared.aux, declared.mux, declared.lin, declared.subject, declared.offered) == want and got.offered == want[4])
    ok = all(results)
    record(3, ok, f"MULT n=0..4 checked {sum(results)}/5")
    assert ok


# ---------------------------------------------------------------- 4


def random_walk(total: int, seed: int = 0):
    rng = random.Random(seed)
    steps = []
    s = 0
    while len(steps) < total:
        d = generate(s)
        s += 1
        for _ in range(25):
            cand = all_steps(d)
            if not cand:
                break
            st = rng.choice(cand)
            steps.append(st)
            d = st.after
            if len(steps) >= total:
                break
    return steps


def test_criterion_4_weight_monotonicity():
    corpus_steps = [st for _, d in TERMS for st in all_steps(d)]
    walk = random_walk(1000)
    problems = [p for st in corpus_steps + walk for p in step_problems(st)]
    kinds = {}
    for st in corpus_steps + walk:
        kinds[st.kind] = kinds.get(st.kind, 0) + 1
    ok = not problems and len(walk) == 1000
    record(4, ok, f"{len(corpus_steps)} corpus steps + {len(walk)} walk steps {kinds}; {len(problems)} violations")
    assert ok, problems[:5]


# ---------------------------------------------------------------- 5


def cut_multiplicity(d) -> int:
    """Largest number of spawns on a channel bound by an exponential cut."""
    return max((foc(sub.chan, sub.right) for _, sub in positions(d) if isinstance(sub, EXP_CUTS)), default=0)


def weight_bound_failures(offsets, base=dupf):
    out = []
    for e, d in TERMS:
        s, bd, f = size_term(d), bde_term(d), base(d)
        for k in offsets:
            n = f + k
            if weip(n, d) > s * n ** (bd + 1):
                out.append(f"{e.name} n={n}: {weip(n, d)} > {s * n ** (bd + 1)}")
    return out


def test_criterion_5_weight_bound():
    failures = weight_bound_failures((0, 1, 5))
    ok = not failures
    record(5, ok, f"{len(TERMS)} terms x 3 values of n; {len(failures)} failures" + (f", e.g. {failures[0]}" if failures else ""))
    assert ok, failures[:5]


def test_criterion_5_companion_covering_cut_channels():
    # the bound holds once n is positive and covers the spawns on exponential-cut channels too
    assert weight_bound_failures((0, 1, 5), base=lambda d: max(1, dupf(d), cut_multiplicity(d))) == []


# ---------------------------------------------------------------- 6


def test_criterion_6_foc_dupf():
    problems = []
    for e, d in TERMS:
        j = judgment_of(d)
        s = size_term(d)
        problems += [f"{e.name} aux {x}" for x in j.aux if foc(x, d) > 1]
        problems += [f"{e.name} lin {x}" for x in j.lin if foc(x, d) != 0]
        problems += [f"{e.name} mux {x}" for x in j.mux if foc(x, d) > s]
        if dupf(d) > s:
            problems.append(f"{e.name} dupf")
    ok = not problems
    record(6, ok, f"{len(TERMS)} terms; {len(problems)} violations")
    assert ok, problems


# ---------------------------------------------------------------- 7


def test_criterion_7_subject_reduction():
    total, problems = 0, []
    states = [(e.name, d) for e, d in TERMS] + [("trace state", d) for d in trace_states(1000)]
    for name, d in states:
        for rx in redexes(prenex(extract(d))):
            total += 1
            try:
                problems += [f"{name} {rx}: {p}" for p in sr_problems(d, rx)]
            except SoftPiError as err:
                problems.append(f"{name} {rx}: {type(err).__name__}")
    ok = not problems and total > 0
    record(7, ok, f"{total} redexes over corpus terms and their trace states, {len(problems)} failures")
    assert ok, problems[:5]


# ---------------------------------------------------------------- 8


def certificates():
    t0 = time.perf_counter()
    out = [(e.name, *certify_term(e.name, d)) for e, d in TERMS]
    return out, time.perf_counter() - t0


def spacevstime_failures(certs, slack: int):
    return [
        f"{name} step {st.index}: size {st.size} > {st.index + slack}*{cert.initial_size}"
        for name, cert, trace in certs
        for st in trace.steps
        if st.size > (st.index + slack) * cert.initial_size
    ]


def test_criterion_8_certificates():
    certs, seconds = certificates()
    unsatisfied = [name for name, cert, _ in certs if not cert.satisfied]
    space = spacevstime_failures(certs, 0)
    ok = not unsatisfied and not space and seconds < 60
    detail = f"{len(certs)} certificates in {seconds:.2f}s, {len(unsatisfied)} unsatisfied; {len(space)} per-step size violations"
    if space:
        detail += f", e.g. {space[0]}"
    record(8, ok, detail)
    assert ok, (unsatisfied, space[:5])


def test_criterion_8_companion_certificates_and_shifted_space_bound():
    certs, seconds = certificates()
    assert all(cert.satisfied for _, cert, _ in certs)
    assert seconds < 60
    # size after k steps stays within (k+1) times the initial size
    assert spacevstime_failures(certs, 1) == []


# ---------------------------------------------------------------- 9


def test_criterion_9_structural_invariants():
    rng = random.Random(0)
    procs = [extract(d) for _, d in TERMS] + [build_blowup_family(n) for n in (2, 3, 4)]
    moves, size_fail, class_fail = 0, 0, 0
    while moves < 10_000:
        for p in procs:
            q = p
            for _ in range(20):
                q = congruence_step(q, rng)
                moves += 1
                size_fail += size(q) != size(p)
            class_fail += not struct_congruent(p, q)
    terms = [d for _, d in TERMS] + [generate(s) for s in range(200)]
    idem = sum(canonical_form(canonical_form(extract(d))) != canonical_form(extract(d)) for d in terms)
    lifts = sum(not alpha_eq(extract(lift(d)), extract(d)) for d in terms)
    procvspt = sum(bde_term(d) != bde_process(extract(d)) or size_term(d) != size(extract(d)) for d in terms)
    free = [d for d in terms if cut_free(d)]
    depth = [d for d in free if bde_term(d) != judgment_depth(judgment_of(d))]
    ok = not (size_fail or class_fail or idem or lifts or procvspt or depth)
    record(
        9,
        ok,
        f"{moves} congruence moves ({size_fail} size, {class_fail} class failures); "
        f"idempotence {idem}, lift {lifts}, procvspt {procvspt} failures; "
        f"cut-free bde = depth fails on {len(depth)}/{len(free)}",
    )
    assert ok


def test_criterion_9_companion_cut_free_depth_is_bounded_by_type():
    terms = [d for _, d in TERMS] + [generate(s) for s in range(200)]
    free = [d for d in terms if cut_free(d)]
    assert free
    assert all(bde_term(d) <= judgment_depth(judgment_of(d)) for d in free)


# ---------------------------------------------------------------- 10


def test_criterion_10_visible_actions():
    procs = [d for _, d in TERMS] + trace_states(200)
    actions, problems = 0, []
    for d in procs:
        n, bad = visible_problems(d)
        actions += n
        problems += bad
    ok = len(procs) >= 50 and not problems
    record(10, ok, f"{len(procs)} typed processes, {actions} visible actions, {len(problems)} mismatches")
    assert ok, problems[:5]


def test_criterion_10_companion_generated_open_terms():
    actions = 0
    for seed in range(300):
        n, bad = visible_problems(generate(seed))
        actions += n
        assert bad == [], seed
    assert actions > 100


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
