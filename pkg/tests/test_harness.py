import json
import subprocess
import sys

import pytest

from qpair import algebra as alg
from qpair import pairing as pr
from qpair.algebra import Element
from qpair.harness import REGISTRY, CheckConfig, main, pbw_root_vectors, run_suite
from qpair.scalars import ONE, Q

q = Q
FAST = ["pairing_axioms", "closed_form", "gauss_binomial", "theorem"]


def test_registry_names():
    expected = {
        "hopf_axioms", "pairing_axioms", "d10_d11", "serre_radical", "lem_ten", "lem_sep", "theorem",
        "prop_DS", "gauss_binomial", "tef_rank2", "prop_T", "t1_t2", "prop_R", "rel_theta",
        "braid_relations", "sigma_factorizations", "prop_pos_forward", "oracle_crosscheck",
    }
    assert expected <= set(REGISTRY)


def test_empty_selection_passes(A2):
    report = run_suite(CheckConfig(A2, checks=[]))
    assert report.passed and report.checks == []


def test_unknown_check_rejected(A2):
    with pytest.raises(ValueError):
        CheckConfig(A2, checks=["no_such_check"])


def test_report_is_byte_stable(A2):
    cfg = CheckConfig(A2, max_height=4, checks=FAST + ["prop_DS"], timing=False, prop_ds_pairs=20)
    a = run_suite(cfg).to_json()
    b = run_suite(cfg).to_json()
    assert a == b
    payload = json.loads(a)
    assert set(payload) == {"config", "checks"}
    for c in payload["checks"]:
        assert {"name", "paper_ref", "instances", "status", "millis"} <= set(c)


def test_cli_exit_codes(capsys, tmp_path):
    assert main(["verify", "--type", "A2", "--checks", ",".join(FAST), "--max-height", "4", "--no-timing"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert [c["name"] for c in out["checks"]] == FAST
    assert main(["verify", "--type", "A2", "--checks", "bogus"]) == 2
    bad = tmp_path / "bad.gcm"
    bad.write_text("2\n2 1\n-1 2\n")
    assert main(["verify", "--gcm", str(bad)]) == 2


def test_cli_entry_point_text():
    proc = subprocess.run(
        [sys.executable, "-m", "qpair.harness", "verify", "--type", "B2", "--checks", "closed_form",
         "--format", "text"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "PASS closed_form" in proc.stdout


def test_gcm_file_runs_algebra_checks(tmp_path):
    g = tmp_path / "affine.gcm"
    g.write_text("2\n2 -2\n-2 2\n")
    cfg_args = ["verify", "--gcm", str(g), "--checks", "pairing_axioms,closed_form,prop_T", "--max-height", "3"]
    assert main(cfg_args) == 0


def test_failure_is_reported(monkeypatch, A2):
    # a perturbed pairing must make the theorem check fail with a counterexample
    import qpair.harness as h

    real = h.pr.tau_combo

    def skewed(datum, xs, ys):
        v = real(datum, xs, ys)
        return v * q if len(next(iter(xs), ())) == 2 else v

    monkeypatch.setattr(h.pr, "tau_combo", skewed)
    report = run_suite(CheckConfig(A2, max_height=3, checks=["theorem"], timing=False))
    assert not report.passed
    assert report.checks[0].counterexample is not None


def test_printed_sibling_identity_has_counterexample(A1):
    """yx with S on x_(0) fails at x = e1, y = f1; S on y_(0) is the identity that holds."""
    x, y = alg.e(A1, 0), alg.f(A1, 0)
    dx, dy = alg.iterated_coproduct(x, 2), alg.iterated_coproduct(y, 2)

    def rhs(s_on_x: bool) -> Element:
        acc = Element(A1)
        for (a0, a1, a2), ca in dx.terms.items():
            for (b0, b1, b2), cb in dy.terms.items():
                ea0, fb0 = Element(A1, {a0: ONE}), Element(A1, {b0: ONE})
                first = pr.tau(alg.antipode(ea0), fb0) if s_on_x else pr.tau(ea0, alg.antipode(fb0))
                c = first * pr.tau(Element(A1, {a2: ONE}), Element(A1, {b2: ONE}))
                acc = acc + alg.multiply(Element(A1, {a1: ONE}), Element(A1, {b1: ONE})).scale(ca * cb * c)
        return acc

    yx = alg.multiply(y, x)
    assert pr.equality_oracle(rhs(False), yx)
    assert rhs(True) - yx == alg.k(A1, (-1,)).scale(-q.inverse())


def test_pbw_root_vectors_a2(A2):
    roots, es, fs, word = pbw_root_vectors(A2)
    assert word == (0, 1, 0)
    assert roots == [(1, 0), (1, 1), (0, 1)]
    assert es[1] == {(0, 1): ONE, (1, 0): -q.inverse()}
    assert pr.tau_combo(A2, es[1], fs[1]) == pr.tau_words(A2, (1,), (1,))
