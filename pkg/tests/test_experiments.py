"""Experiment runners and their serialization: deterministic bytes, strict
JSON, exact counterexample rows, config hashing and validation."""

import json
import math
from fractions import Fraction

import numpy as np
import pytest

from logcap.errors import InvalidArgumentError
from logcap.experiments import (
    CounterexampleParams,
    ExperimentConfig,
    ResultTable,
    emit,
    format_value,
    run_counterexample_check,
    run_redistribute_once,
)
from logcap.logdomain import LN2


def cfg_for(command, **kwargs):
    return ExperimentConfig.from_mapping(command, kwargs)


# -- formatting ------------------------------------------------------------------

def test_format_value():
    assert format_value(None) == ""
    assert format_value(True) == "true"
    assert format_value(False) == "false"
    assert format_value(7) == "7"
    assert format_value(np.int64(7)) == "7"
    assert format_value(Fraction(31, 32)) == "31/32"
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(np.float64(0.5)) == "0.5"
    assert format_value("label") == "label"
    assert format_value(math.inf) == "inf"


def test_empty_table_renders_header_only():
    t = ResultTable(columns=("a", "b"))
    assert t.to_csv_text() == "a,b\n"
    payload = json.loads(t.to_json_text())
    assert payload["rows"] == []
    assert payload["all_pass"] is True


def test_add_row_arity_check():
    t = ResultTable(columns=("a", "b"))
    with pytest.raises(InvalidArgumentError):
        t.add_row(1)


def test_all_pass_semantics():
    t = ResultTable(columns=("x", "ok_pass"))
    t.add_row(1, True)
    t.add_row(2, None)  # not-applicable cells do not fail the table
    assert t.all_pass()
    t.add_row(3, False)
    assert not t.all_pass()

    clean = ResultTable(columns=("x",), metadata={"claims": {"holds": False}})
    clean.add_row(1)
    assert not clean.all_pass()
    clean.metadata["claims"]["holds"] = True
    assert clean.all_pass()


# -- config ----------------------------------------------------------------------

def test_config_hash_stable_and_sensitive():
    a = cfg_for("redistribute", n=16, log_r=-10.0)
    b = cfg_for("redistribute", n=16, log_r=-10.0)
    c = cfg_for("redistribute", n=17, log_r=-10.0)
    assert a.config_hash == b.config_hash
    assert a.config_hash != c.config_hash
    assert len(a.config_hash) == 12
    assert set(a.config_hash) <= set("0123456789abcdef")
    # canonical form is key-sorted, so hashing is insertion-order blind
    assert json.loads(a.canonical_json()) == json.loads(b.canonical_json())


def test_config_rejects_unknown_keys_and_bad_grids():
    with pytest.raises(InvalidArgumentError):
        cfg_for("redistribute", radius=1.0)
    with pytest.raises(InvalidArgumentError):
        cfg_for("converge", n_grid=(10, 10))
    with pytest.raises(InvalidArgumentError):
        cfg_for("converge", n_grid=(100, 10))
    with pytest.raises(InvalidArgumentError):
        cfg_for("averaged", m_grid=(0, 4))
    with pytest.raises(InvalidArgumentError):
        cfg_for("redistribute", fmt="yaml")
    with pytest.raises(InvalidArgumentError):
        cfg_for("redistribute", seed=1.5)


# -- deterministic emission ---------------------------------------------------------

def test_emitted_bytes_are_deterministic(tmp_path):
    cfg = cfg_for("redistribute", n=16, log_r=-10.0)
    _, _, t1 = run_redistribute_once(cfg)
    _, _, t2 = run_redistribute_once(cfg)
    assert t1.to_csv_text() == t2.to_csv_text()
    assert t1.to_json_text() == t2.to_json_text()

    d1, d2 = tmp_path / "one", tmp_path / "two"
    p1 = emit(t1, "csv", d1, "redistribute")
    p2 = emit(t2, "csv", d2, "redistribute")
    assert [p.name for p in p1] == [p.name for p in p2] == ["redistribute.csv"]
    assert p1[0].read_bytes() == p2[0].read_bytes()


def test_json_output_is_strict_and_complete():
    cfg = cfg_for("redistribute", n=8, log_r=-12.0)
    _, _, table = run_redistribute_once(cfg)
    payload = json.loads(table.to_json_text())  # must parse as strict JSON
    assert payload["columns"][0] == "n"
    assert payload["all_pass"] is True
    md = payload["metadata"]
    assert md["experiment"] == "redistribute"
    assert md["evidence"] == "finite-depth"
    assert md["config_hash"] == cfg.config_hash
    assert md["config"]["n"] == 8
    assert md["backend"] in ("compiled", "numpy")
    assert isinstance(md["claim"], str) and md["claim"]


def test_nonfinite_floats_serialize_as_strings():
    t = ResultTable(columns=("v",))
    t.add_row(math.inf)
    t.add_row(math.nan)
    payload = json.loads(t.to_json_text())
    assert payload["rows"][0] == ["inf"]
    assert payload["rows"][1] == ["nan"]
    assert t.to_csv_text() == "v\ninf\nnan\n"


def test_plot_format(tmp_path):
    cfg = cfg_for("redistribute", n=16, log_r=-10.0)
    _, _, table = run_redistribute_once(cfg)
    text = emit(table, "plot", None, "redistribute")
    assert text.startswith("# ")
    blocks = [b for b in text.split("# ") if b.strip()]
    # first numeric column (n) against every other numeric column
    assert len(blocks) >= 3
    for block in blocks:
        _, data = block.split("\n", 1)
        for line in data.strip().splitlines():
            x, y = line.split()
            float(x), float(y)
    paths = emit(table, "plot", tmp_path, "redistribute")
    assert len(paths) == len(blocks)
    for p in paths:
        assert p.exists() and p.suffix == ".dat"


def test_emit_rejects_unknown_format():
    with pytest.raises(InvalidArgumentError):
        emit(ResultTable(columns=("a",)), "xml", None, "t")


# -- redistribute runner ---------------------------------------------------------------

def test_redistribute_once_runner():
    cfg = cfg_for("redistribute", n=16, log_r=-10.0)
    mu, brk, table = run_redistribute_once(cfg)
    assert mu.is_probability
    assert table.all_pass()
    row = dict(zip(table.columns, table.rows[0]))
    assert row["n"] == 16
    assert row["total"] == pytest.approx(brk.total)
    # I = (1/n)(-log r + 3/2) + cross >= self alone, and certified error tiny
    assert row["self"] == pytest.approx((10.0 + 1.5) / 16.0, rel=1e-12)
    assert 0.0 <= row["certified_error"] < 1e-9


# -- counterexample runner -------------------------------------------------------------

def test_counterexample_exact_rows():
    cfg = cfg_for("counterexample", n1=8, depth=2)
    table = run_counterexample_check(cfg)
    assert table.column("n") == [8, 512]
    assert table.column("k") == [1, 2]

    first = dict(zip(table.columns, table.rows[0]))
    assert first["leb_leftover"] == Fraction(1)
    assert first["mass_ratio"] == Fraction(1)
    assert first["factorization_pass"] is True
    assert first["mass_half_pass"] is True

    second = dict(zip(table.columns, table.rows[1]))
    # level 1 occupies exactly 1/32 of the unit interval, so the leftover is
    # 31/32 and independence makes the conditioned mass ratio equal it
    assert second["leb_leftover"] == Fraction(31, 32)
    assert second["mass_ratio"] == Fraction(31, 32)
    assert second["leb_level"].numerator == 1
    assert second["leb_level"].denominator == 2**503
    assert second["factorization_pass"] is True
    assert second["mass_half_pass"] is True
    assert second["budget_pass"] is True
    assert second["energy_restricted"] <= second["energy_budget"]
    assert table.metadata["claims"]["final_budget_within_4x"] is True
    assert table.all_pass()


def test_counterexample_argument_guards():
    with pytest.raises(InvalidArgumentError):
        run_counterexample_check(cfg_for("counterexample", n1=1, depth=2))
    with pytest.raises(InvalidArgumentError):
        run_counterexample_check(cfg_for("counterexample", n1=8, depth=0))
    # towers that would exceed the exact-arithmetic cap are refused up front
    with pytest.raises(InvalidArgumentError):
        run_counterexample_check(cfg_for("counterexample", n1=8, depth=4))
    # without a power-of-two n1 the grids are not dyadic and the exact
    # factorization identity is meaningless, so construction refuses
    with pytest.raises(InvalidArgumentError):
        CounterexampleParams(n1=6, depth=2)


def test_counterexample_params_match_config_route():
    params = CounterexampleParams(n1=8, depth=2)
    assert params.tower() == [8, 512]
    via_params = run_counterexample_check(params)
    via_config = run_counterexample_check(cfg_for("counterexample", n1=8, depth=2))
    assert via_params.rows == via_config.rows
    assert via_params.metadata == via_config.metadata
