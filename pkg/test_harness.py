"""Tests for harness.py: certificate checks and suite runs."""

import time

import numpy as np
import pytest

from config import APERIODIC_MAX_PERIOD, APERIODIC_PROBE_LENGTH
from dynamics import classify
from element import Hyperbolic, left_translation
from errors import ConfigError, DegreeError, HypothesisError, PreconditionError
from harness import (
    BatteryContext,
    _eventual_period,
    battery_element,
    battery_permgroup,
    battery_tree,
    check_bipartition,
    check_edge_transitivity,
    check_equal_stabilizer_line,
    check_hyp_ends_obstruction,
    check_second_trans,
    length2_translation_along,
    run_group,
    run_suite,
)
from permgroup import Perm, group_from_generators, named_group
from suite_config import GroupSpec, get_quick_config
from tree import ROOT, ball, hyp_ends_ray

QUICK_SUITE_SECONDS = 60


def quick_config(*names: str):
    config = get_quick_config()
    config.settings.workers = 1
    config.groups = [GroupSpec.from_catalog(n) for n in names]
    return config


# ─── Hyperbolic-ends obstruction ─────────────────────────────────────────────

def test_obstruction_absent_for_two_transitive(sym3, sym5):
    assert check_hyp_ends_obstruction(sym3) is None
    assert check_hyp_ends_obstruction(sym5) is None


def test_obstruction_for_d5(d5):
    cert = check_hyp_ends_obstruction(d5)
    assert (cert.a, cert.b, cert.c) == (1, 2, 3)
    assert cert.pattern == (1, 2, 1, 2, 1, 3, 1, 2, 1, 2)
    assert cert.offset == 4
    assert cert.midpoint == (1, 2, 1, 3, 1, 2, 1, 2, 1)
    assert cert.forced == (((1, 3), (1, 2)), ((1, 2), (1, 3)))
    assert "absent=(1,3)->(1,2) (1,2)->(1,3)" in cert.render()


def test_obstruction_for_c4(c4):
    cert = check_hyp_ends_obstruction(c4)
    assert cert is not None
    assert (cert.a, cert.b, cert.c) == (1, 2, 3)


def test_obstruction_needs_a_transitive_group():
    F = group_from_generators(4, [Perm.parse("(1 2)", 4)])
    with pytest.raises(PreconditionError):
        check_hyp_ends_obstruction(F)


# ─── Length-2 translations ───────────────────────────────────────────────────

def test_second_trans_positive(sym3, sym5):
    for F in (sym3, sym5):
        verdict = check_second_trans(F)
        assert verdict.positive
        assert verdict.render().startswith("positive")


def test_second_trans_negative_for_d5(d5):
    verdict = check_second_trans(d5)
    assert not verdict.positive
    assert verdict.missing == ((1, 2), (1, 3))
    assert verdict.render() == "negative transporter (1,2)->(1,3) absent"


def test_second_trans_hypotheses(c4):
    with pytest.raises(HypothesisError):
        check_second_trans(c4)
    verdict = check_second_trans(c4, strict=False)
    assert not verdict.positive
    assert "hypotheses fail" in verdict.note


def test_second_trans_needs_three_colors():
    with pytest.raises(DegreeError):
        check_second_trans(group_from_generators(2, [Perm.parse("(1 2)", 2)]))


def test_length2_translation_with_identity_transporters(c5):
    b = length2_translation_along((1, 2), c5)
    lt = left_translation((1, 2), 5)
    assert all(b.apply(v) == lt.apply(v) for v in ball(ROOT, 3, 5))


def test_length2_translation_missing_transporter(d5):
    assert length2_translation_along((1, 2, 1, 3), d5) is None


def test_length2_translation_in_sym4(sym4):
    b = length2_translation_along((1, 2, 1, 3), sym4)
    cls = classify(b)
    assert isinstance(cls, Hyperbolic) and cls.length == 2


@pytest.mark.parametrize("period", [(1, 2, 3), (1, 2, 3, 1), (1, 1, 2, 3), (1,)])
def test_length2_translation_bad_periods(sym4, period):
    with pytest.raises(PreconditionError):
        length2_translation_along(period, sym4)


# ─── Equal stabilizers, bipartition, edge transitivity ───────────────────────

def test_equal_stabilizer_line_for_c4(c4):
    line = check_equal_stabilizer_line(c4, samples=4, seed=3)
    assert line.pair == (1, 2)
    assert line.verified
    assert line.h == left_translation((1, 2), 4)
    assert line.render().startswith("pair=(1,2) h=lt(12)")


def test_distinct_stabilizers(sym3, d5):
    assert check_equal_stabilizer_line(d5, seed=1) is None
    assert check_equal_stabilizer_line(sym3, seed=1) is None


@pytest.mark.parametrize("name", ["Sym3", "D5", "C4"])
def test_bipartition(name):
    assert check_bipartition(named_group(name), 3, samples=4, seed=7) == []


def test_edge_transitivity(sym3, d5):
    issues, unresolved = check_edge_transitivity(sym3, 6, seed=5)
    assert issues == [] and unresolved == 0
    issues, _ = check_edge_transitivity(d5, 6, seed=5)
    assert issues == []


def test_aperiodic_probe():
    assert _eventual_period(hyp_ends_ray(APERIODIC_PROBE_LENGTH), APERIODIC_MAX_PERIOD) is None
    assert _eventual_period((3,) + (1, 2) * 20, 4) == 2


# ─── Batteries ───────────────────────────────────────────────────────────────

def test_permgroup_battery_passes_on_d5(d5):
    ctx = BatteryContext(d5, quick_config("D5"), np.random.default_rng(0))
    results = battery_permgroup(ctx)
    assert {r.name for r in results} >= {"orbit-stabilizer", "primitive-blocks", "implication-chain"}
    assert all(r.passed for r in results)


def test_tree_battery_passes(sym3):
    ctx = BatteryContext(sym3, quick_config("Sym3"), np.random.default_rng(0))
    assert all(r.passed for r in battery_tree(ctx))


def test_element_battery_passes(sym4):
    ctx = BatteryContext(sym4, quick_config("Sym4"), np.random.default_rng(0))
    results = battery_element(ctx)
    assert {r.name for r in results} >= {"group-law", "lazy-conjugate"}
    assert all(r.passed for r in results), [repr(r) for r in results if not r.passed]


# ─── Suite ───────────────────────────────────────────────────────────────────

def test_quick_suite_passes():
    report = run_suite(quick_config("Sym3", "D5"))
    assert report.results
    assert report.passed, [repr(r) for r in report.failures]
    assert {r.group for r in report.results} == {"Sym3", "D5"}


def test_cyclic_prime_group_skips_plus_checks():
    results, notes = run_group(GroupSpec.from_catalog("C5"), quick_config("C5"), 0, 1)
    assert "U(F)+ trivial" in notes
    assert all(r.passed for r in results)
    assert "second-trans" not in {r.name for r in results}


def test_intransitive_group_notes_the_skipped_obstruction():
    config = quick_config()
    spec = GroupSpec("I4", 4, "(1 2)")
    config.groups = [spec]
    _, notes = run_group(spec, config, 0, 1)
    assert any("obstruction skipped" in n for n in notes)


def test_empty_suite():
    report = run_suite(quick_config())
    assert report.results == []
    assert report.passed


def test_suite_rejects_invalid_configuration():
    config = quick_config("Sym3")
    config.settings.workers = 0
    with pytest.raises(ConfigError):
        run_suite(config)
    with pytest.raises(ConfigError):
        run_suite(quick_config("Sym3", "Sym3"))


def test_suite_is_reproducible():
    first = run_suite(quick_config("D5"))
    second = run_suite(quick_config("D5"))
    assert [(r.name, r.passed, r.certificate) for r in first.results] == [
        (r.name, r.passed, r.certificate) for r in second.results
    ]


def test_quick_preset_stays_within_its_time_budget():
    config = get_quick_config()
    config.settings.workers = 1
    start = time.perf_counter()
    report = run_suite(config)
    elapsed = time.perf_counter() - start
    assert report.passed, [repr(r) for r in report.failures]
    assert elapsed < QUICK_SUITE_SECONDS, f"quick preset took {elapsed:.1f}s"
