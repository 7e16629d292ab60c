from fdtrace.domain import FiniteDomain
from fdtrace.events import loads
from fdtrace.program import parse_program, run_program
from fdtrace.kernel import Kernel
from fdtrace.replay import check, replay

from scenarios import EXPLAIN_ME, TRACE_ME, TRACE_ME_PROGRAM, lines, posted


def test_golden_logs_are_clean():
    for goals in (TRACE_ME, EXPLAIN_ME):
        kernel, _ = posted(goals)
        assert check(kernel.log) == []


def test_labeling_log_is_clean():
    kernel = Kernel()
    run_program(parse_program(TRACE_ME_PROGRAM), kernel, None)
    assert check(kernel.log) == []


def test_replayed_states_equal_kernel_states():
    kernel = Kernel(record_states=True)
    run_program(parse_program(TRACE_ME_PROGRAM + "X in 2..2.\n"), kernel, 4)
    r = replay(kernel.log)
    assert set(r.states) == set(kernel.because_states)
    for eid, state in kernel.because_states.items():
        for v, d in state.items():
            assert r.states[eid].get(v, FiniteDomain.full()) == d, eid


def test_mutated_explanation_is_reported():
    kernel, _ = posted(TRACE_ME)
    text = kernel.log.dumps().replace("1-[cond(1,[3],notinset([[8|8]]))]", "1-[cond(1,[3],notinset([[4|4]]))]")
    found = check(loads(text))
    assert [(v.id, v.kind) for v in found] == [(51, "soundness")]


def test_tampered_domains_are_reported():
    kernel, _ = posted(TRACE_ME)
    log = lines(kernel)
    log[17] = log[17].replace("[[[1|2],[4|6]],[[1|2],[4|6]]", "[[[1|2],[4|6]],[[1|2],[5|6]]", 1)
    kinds = {v.kind for v in check(loads("\n".join(log)))}
    assert "replay" in kinds


def test_swapped_ends_are_reported():
    kernel, _ = posted(TRACE_ME)
    log = lines(kernel)
    log[19], log[20] = log[20], log[19]
    assert any(v.kind == "improper-nesting" for v in check(loads("\n".join(log))))
