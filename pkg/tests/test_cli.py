"""End-to-end CLI behavior: flags, files, exit codes, determinism."""

from __future__ import annotations

from pathlib import Path

from spreadforge import codecs
from spreadforge.cli import main


def _construct(tmp_path: Path, name: str, *extra) -> Path:
    out = tmp_path / name
    rc = main(["construct", "--p", "2", "--e", "1", "--k", "2", "--t", "2",
               "--out", str(out), *extra])
    assert rc == 0
    return out


# --- params -------------------------------------------------------------------


def test_params_listing_contents(capsys):
    assert main(["params", "--max-order", "16"]) == 0
    out = capsys.readouterr().out
    rows = {tuple(line.split()[:4]) for line in out.splitlines()[1:]}
    for included in (("2", "1", "1", "2"), ("2", "1", "1", "3"),
                     ("2", "1", "2", "2"), ("2", "2", "1", "2")):
        assert included in rows
    assert ("2", "1", "2", "3") not in rows  # gcd violation
    spread_row = next(l for l in out.splitlines() if l.split()[:4] == ["2", "1", "2", "2"])
    assert spread_row.split()[-3:] == ["5", "75", "85"]  # r, orbit, spread


def test_params_empty_range(capsys):
    assert main(["params", "--max-order", "1"]) == 0
    assert capsys.readouterr().out == ""


# --- construct -----------------------------------------------------------------


def test_construct_writes_four_files(tmp_path, capsys):
    out = _construct(tmp_path, "run", "--i", "1", "--j", "3")
    text = capsys.readouterr().out
    assert "spread: 85 members, min distance 4" in text
    for name, members in (("ci.code", 75), ("ai.code", 5), ("bj.code", 5), ("spread.code", 85)):
        header, code = codecs.read_code((out / name).read_text())
        assert len(code) == members
    header, _ = codecs.read_code((out / "spread.code").read_text())
    assert header.component == "spread" and header.i == 1 and header.j == 3
    assert header.bm is not None


def test_construct_defaults(tmp_path):
    out = tmp_path / "defaults"
    rc = main(["construct", "--p", "2", "--e", "1", "--k", "1", "--t", "2",
               "--out", str(out)])
    assert rc == 0
    header, code = codecs.read_code((out / "spread.code").read_text())
    assert len(code) == 15
    assert (header.i, header.j) == (1, 3)


def test_construct_rejects_bad_index(tmp_path, capsys):
    rc = main(["construct", "--p", "2", "--e", "1", "--k", "2", "--t", "2",
               "--i", "3", "--out", str(tmp_path / "x")])
    assert rc == 2
    assert "1..2" in capsys.readouterr().err


def test_construct_gcd_violation_exits_3(tmp_path):
    rc = main(["construct", "--p", "2", "--e", "1", "--k", "2", "--t", "3",
               "--out", str(tmp_path / "x")])
    assert rc == 3


def test_construct_io_failure_exits_4(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory")
    rc = main(["construct", "--p", "2", "--e", "1", "--k", "1", "--t", "2",
               "--out", str(blocker)])
    assert rc == 4


def test_construct_is_deterministic(tmp_path):
    a = _construct(tmp_path, "a")
    b = _construct(tmp_path, "b")
    for name in ("ci.code", "ai.code", "bj.code", "spread.code"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_oracle_is_deterministic(tmp_path):
    flags = ["oracle", "--p", "2", "--e", "1", "--k", "2", "--t", "2"]
    assert main(flags + ["--out", str(tmp_path / "a.code")]) == 0
    assert main(flags + ["--out", str(tmp_path / "b.code")]) == 0
    assert (tmp_path / "a.code").read_bytes() == (tmp_path / "b.code").read_bytes()


# --- verify ---------------------------------------------------------------------


def test_verify_spread_ok(tmp_path, capsys):
    out = _construct(tmp_path, "run")
    rc = main(["verify", "--in", str(out / "spread.code")])
    assert rc == 0
    text = capsys.readouterr().out
    assert "verdict=Spread" in text and "coverage_count=255" in text


def test_verify_components_are_partial_spreads(tmp_path):
    out = _construct(tmp_path, "run")
    for name in ("ci.code", "ai.code", "bj.code"):
        assert main(["verify", "--in", str(out / name)]) == 0


def test_verify_detects_missing_member(tmp_path, capsys):
    out = _construct(tmp_path, "run")
    path = out / "spread.code"
    lines = path.read_text().splitlines()
    lines.remove(next(l for l in lines if not l.startswith("#")))
    patched = [l.replace("members=85", "members=84") for l in lines]
    path.write_text("\n".join(patched) + "\n")
    rc = main(["verify", "--in", str(path)])
    assert rc == 5
    captured = capsys.readouterr()
    assert "coverage_count=252" in captured.out
    assert "expected Spread" in captured.err


def test_verify_duplicate_member_is_io_error(tmp_path, capsys):
    out = _construct(tmp_path, "run")
    path = out / "spread.code"
    lines = path.read_text().splitlines()
    body = [l for l in lines if not l.startswith("#")]
    lines.insert(lines.index(body[0]), body[0])  # duplicate, still sorted
    path.write_text("\n".join(l.replace("members=85", "members=86") for l in lines) + "\n")
    assert main(["verify", "--in", str(path)]) == 4


def test_verify_missing_file_exits_4(tmp_path):
    assert main(["verify", "--in", str(tmp_path / "nope.code")]) == 4


# --- oracle / compare ---------------------------------------------------------------


def test_oracle_compare_cycle(tmp_path, capsys):
    out = _construct(tmp_path, "run")
    oracle = tmp_path / "oracle.code"
    assert main(["oracle", "--p", "2", "--e", "1", "--k", "2", "--t", "2",
                 "--out", str(oracle)]) == 0
    assert main(["compare", str(out / "spread.code"), str(oracle)]) == 0
    capsys.readouterr()
    rc = main(["compare", str(out / "ci.code"), str(oracle)])
    assert rc == 1
    text = capsys.readouterr().out
    assert "differ" in text
    sample = [l for l in text.splitlines() if l.startswith("  ")]
    assert len(sample) == 10  # symmetric difference sample is capped


def test_compare_same_file(tmp_path):
    out = _construct(tmp_path, "run")
    spread = str(out / "spread.code")
    assert main(["compare", spread, spread]) == 0


def test_compare_missing_file_exits_4(tmp_path):
    out = _construct(tmp_path, "run")
    assert main(["compare", str(out / "spread.code"), str(tmp_path / "gone.code")]) == 4


# --- distance -------------------------------------------------------------------------


def test_distance_of_spread(tmp_path, capsys):
    out = _construct(tmp_path, "run")
    assert main(["distance", "--in", str(out / "spread.code")]) == 0
    assert "min distance (brute force): 4" in capsys.readouterr().out


def test_distance_orbit_formula_agreement(tmp_path, capsys):
    out = _construct(tmp_path, "run")
    assert main(["distance", "--in", str(out / "ci.code"), "--orbit"]) == 0
    text = capsys.readouterr().out
    assert "orbit formula): 4" in text and "agreement: yes" in text
    assert main(["distance", "--in", str(out / "bj.code"), "--orbit"]) == 0
    assert "agreement: yes" in capsys.readouterr().out


def test_distance_orbit_rejected_for_non_orbit_component(tmp_path):
    out = _construct(tmp_path, "run")
    assert main(["distance", "--in", str(out / "ai.code"), "--orbit"]) == 2


def test_distance_singleton_exits_2(tmp_path, capsys, ctx_2112):
    header = codecs.CodeHeader(p=2, e=1, k=1, t=2, kind=codecs.KIND_LINES,
                               component="external")
    single = frozenset([ctx_2112.unit_line(1)])
    path = tmp_path / "single.code"
    path.write_text(codecs.write_code(single, header))
    assert main(["distance", "--in", str(path)]) == 2
    assert "d_S = 0" in capsys.readouterr().out


def test_distance_orbit_respects_max_order(tmp_path, capsys):
    out = _construct(tmp_path, "run")
    rc = main(["distance", "--in", str(out / "ci.code"), "--orbit", "--max-order", "4"])
    assert rc == 2
    assert "max-order" in capsys.readouterr().err


# --- workers ---------------------------------------------------------------------------


def test_workers_flag_and_env_agree(tmp_path, capsys, monkeypatch):
    out = _construct(tmp_path, "run")
    spread = str(out / "spread.code")
    capsys.readouterr()  # drop the construct summary
    assert main(["verify", "--in", spread, "--workers", "1"]) == 0
    reference = capsys.readouterr().out
    assert main(["verify", "--in", spread, "--workers", "2"]) == 0
    assert capsys.readouterr().out == reference
    monkeypatch.setenv("SPREADFORGE_WORKERS", "2")
    assert main(["verify", "--in", spread]) == 0
    assert capsys.readouterr().out == reference


def test_usage_error_exit_code():
    assert main(["construct", "--p", "2"]) == 2
    assert main([]) == 2


# --- the full pipeline over the test matrix ----------------------------------------


def test_pipeline_matrix_every_ij_choice(tmp_path):
    # construct -> verify -> compare-with-oracle for every (i, j) at the four
    # main parameter sets, plus two extra sets at their default choice
    sweep = [(2, 1, 1, 2), (2, 1, 1, 3), (2, 1, 2, 2), (2, 2, 1, 2)]
    extras = [(2, 1, 1, 4), (3, 1, 2, 1)]

    for p, e, k, t in sweep + extras:
        flags = ["--p", str(p), "--e", str(e), "--k", str(k), "--t", str(t)]
        oracle = tmp_path / f"oracle_{p}_{e}_{k}_{t}.code"
        assert main(["oracle", *flags, "--out", str(oracle)]) == 0
        choices = (
            [(i, j) for i in range(1, t + 1) for j in range(t + 1, 2 * t + 1)]
            if (p, e, k, t) in sweep else [(1, t + 1)]
        )
        for i, j in choices:
            out = tmp_path / f"run_{p}_{e}_{k}_{t}_{i}_{j}"
            assert main(["construct", *flags, "--i", str(i), "--j", str(j),
                         "--out", str(out), "--workers", "1"]) == 0
            for name in ("ci.code", "ai.code", "bj.code", "spread.code"):
                assert main(["verify", "--in", str(out / name), "--workers", "1"]) == 0
            assert main(["compare", str(out / "spread.code"), str(oracle)]) == 0
