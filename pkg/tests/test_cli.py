"""Scenario grammar, CSV output, overrides, and exit codes."""

import math

import pytest

from optimist.cli import (
    COMMANDS,
    Scenario,
    bundled_scenario,
    format_distribution,
    main,
    parse_distribution,
    parse_scenario,
)
from optimist.distributions import (
    GEV,
    GPD,
    AffineTransform,
    Degenerate,
    DomainError,
    Empirical,
    Logistic,
    Normal,
    Pareto,
    StudentT,
    Triangular,
)

CHOOSE_TEXT = """\
command = choose
alpha = 0.8
action a=1: u=0, dist = affine(triangular(lower=0, mode=0, upper=2), scale=1, shift=-1)
action a=-1: u=0, dist = affine(triangular(lower=0, mode=0, upper=2), scale=-1, shift=0.33333333333333331)
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


# ---------------------------------------------------------------------------
# distribution grammar


ZOO = [
    Normal(),
    Normal(2.0, 0.5),
    Logistic(-1.0, 3.0),
    StudentT(5.0, 1.5, 0.25),
    Pareto(1.0, 2.0),
    GPD(0.3, 1.0),
    GPD(-0.75, 2.0),
    GEV(0.0, 1.0, 0.2),
    Triangular(0.0, 0.0, 2.0),
    Degenerate(1.0 / 3.0),
    Empirical((1.0, 2.5, -0.125)),
    AffineTransform(Triangular(0.0, 0.0, 2.0), -1.0, 1.0 / 3.0),
    AffineTransform(AffineTransform(Normal(), 2.0, 1.0), -0.5, 0.1),
]


@pytest.mark.parametrize("law", ZOO, ids=lambda d: format_distribution(d)[:40])
def test_distribution_round_trip(law):
    assert parse_distribution(format_distribution(law)) == law


def test_distribution_defaults():
    assert parse_distribution("normal()") == Normal()
    assert parse_distribution("logistic(scale=2)") == Logistic(0.0, 2.0)
    assert parse_distribution("student_t(df=5)") == StudentT(5.0)


def test_distribution_whitespace_and_case():
    assert parse_distribution("  Normal( loc = 1 , scale = 2 )  ") == Normal(1.0, 2.0)


def test_distribution_errors():
    with pytest.raises(DomainError, match="unknown distribution family 'cauchy'"):
        parse_distribution("cauchy(loc=0)")
    with pytest.raises(DomainError, match="unknown parameter 'mu' for normal"):
        parse_distribution("normal(mu=0)")
    with pytest.raises(DomainError, match="pareto needs parameter 'shape'"):
        parse_distribution("pareto(scale=1)")
    with pytest.raises(DomainError, match="duplicate parameter 'loc'"):
        parse_distribution("normal(loc=0, loc=1)")
    with pytest.raises(DomainError, match="malformed distribution"):
        parse_distribution("normal")
    with pytest.raises(DomainError, match="unbalanced parentheses"):
        parse_distribution("affine(normal(, scale=1, shift=0)")
    with pytest.raises(DomainError, match="is not a number"):
        parse_distribution("normal(loc=zero)")
    with pytest.raises(DomainError, match="shape must exceed 1"):
        parse_distribution("pareto(scale=1, shape=0.5)")


def test_empirical_inline_and_file(tmp_path):
    assert parse_distribution("empirical(values=1;2;3)") == Empirical((1.0, 2.0, 3.0))
    (tmp_path / "vals.txt").write_text("1.5\n\n2.5\n-3\n", encoding="utf-8")
    law = parse_distribution("empirical(path=vals.txt)", base_dir=str(tmp_path))
    assert law == Empirical((1.5, 2.5, -3.0))
    with pytest.raises(DomainError, match="exactly one of values"):
        parse_distribution("empirical()")
    with pytest.raises(DomainError, match="exactly one of values"):
        parse_distribution("empirical(values=1, path=x)")
    with pytest.raises(DomainError, match="cannot read empirical data file"):
        parse_distribution("empirical(path=missing.txt)", base_dir=str(tmp_path))


# ---------------------------------------------------------------------------
# scenario parsing


def test_parse_minimal_choose():
    s = parse_scenario(CHOOSE_TEXT)
    assert s.command == "choose"
    assert s.alpha == 0.8
    assert s.grid is None
    assert [a.label for a in s.actions] == ["a=1", "a=-1"]
    assert s.actions[0].label == "a=1"  # labels may contain '='
    assert s.method == "auto"
    assert s.seed == 0


def test_parse_comments_and_blank_lines():
    text = "# header\n\ncommand = choose  # trailing\nalpha = 0.5\naction x: dist = normal()\n"
    s = parse_scenario(text)
    assert s.command == "choose"
    assert s.actions[0].u == 0.0


def test_parse_alpha_domain_error_carries_line():
    text = "command = choose\nalpha = 1.0\naction x: dist = normal()\n"
    with pytest.raises(DomainError, match=r"line 2: alpha must lie in \[0,1\)"):
        parse_scenario(text)


def test_parse_distribution_error_carries_line():
    text = "command = choose\nalpha = 0.5\naction x: dist = pareto(scale=1, shape=1)\n"
    with pytest.raises(DomainError, match="line 3: shape must exceed 1"):
        parse_scenario(text)


def test_parse_unknown_and_duplicate_keys():
    with pytest.raises(DomainError, match="line 1: unknown key 'frobnicate'"):
        parse_scenario("frobnicate = 1\n")
    text = "command = choose\ncommand = sweep\n"
    with pytest.raises(DomainError, match="line 2: duplicate key 'command'"):
        parse_scenario(text)


def test_parse_duplicate_action_label():
    text = "command = choose\nalpha = 0.5\naction x: dist = normal()\naction x: dist = normal()\n"
    with pytest.raises(DomainError, match="line 4: duplicate action label 'x'"):
        parse_scenario(text)


def test_parse_action_line_errors():
    base = "command = choose\nalpha = 0.5\n"
    with pytest.raises(DomainError, match="action needs a dist"):
        parse_scenario(base + "action x: u=1\n")
    with pytest.raises(DomainError, match="action fields are"):
        parse_scenario(base + "action x: dist = normal(), color=red\n")
    with pytest.raises(DomainError, match="duplicate action field 'u'"):
        parse_scenario(base + "action x: u=1, u=2, dist = normal()\n")
    with pytest.raises(DomainError, match="action line must be"):
        parse_scenario(base + "action : dist = normal()\n")


def test_parse_required_keys():
    with pytest.raises(DomainError, match="missing required key 'command'"):
        parse_scenario("alpha = 0.5\naction x: dist = normal()\n")
    with pytest.raises(DomainError, match="missing required key 'alpha'"):
        parse_scenario("command = choose\naction x: dist = normal()\n")
    with pytest.raises(DomainError, match="unknown command 'rank'"):
        parse_scenario("command = rank\nalpha = 0.5\naction x: dist = normal()\n")


def test_parse_grid_versus_scalar_rules():
    with pytest.raises(DomainError, match="'choose' needs a single alpha, not a grid"):
        parse_scenario("command = choose\nalpha = grid(0.1, 0.9, 5)\naction x: dist = normal()\n")
    with pytest.raises(DomainError, match=r"'sweep' needs alpha = grid\(start, stop, count\)"):
        parse_scenario(
            "command = sweep\nalpha = 0.5\naction x: dist = normal()\naction y: dist = normal(loc=1)\n"
        )


def test_parse_grid_validation():
    head = "command = sweep\n"
    tail = "\naction x: dist = normal()\naction y: dist = normal(loc=1)\n"
    with pytest.raises(DomainError, match="at least 2 points"):
        parse_scenario(head + "alpha = grid(0.1, 0.9, 1)" + tail)
    with pytest.raises(DomainError, match="start < stop"):
        parse_scenario(head + "alpha = grid(0.9, 0.1, 5)" + tail)
    with pytest.raises(DomainError, match=r"alpha must lie in \(0,1\)"):
        parse_scenario(head + "alpha = grid(0, 0.9, 5)" + tail)
    with pytest.raises(DomainError, match="count is not an integer"):
        parse_scenario(head + "alpha = grid(0.1, 0.9, few)" + tail)


def test_parse_grid_points_are_linspaced():
    text = (
        "command = sweep\nalpha = grid(0.1, 0.9, 5)\n"
        "action x: dist = normal()\naction y: dist = normal(loc=1)\n"
    )
    s = parse_scenario(text)
    assert s.grid == pytest.approx((0.1, 0.3, 0.5, 0.7, 0.9))


def test_parse_method_and_seed_and_variant():
    text = (
        "command = choose\nalpha = 0.5\nmethod = average\nseed = 7\n"
        "paper_variant_pareto = true\naction x: dist = normal()\n"
    )
    s = parse_scenario(text)
    assert s.method == "quantile_average"
    assert s.seed == 7
    assert s.paper_variant_pareto is True
    with pytest.raises(DomainError, match="unknown method 'simpson'"):
        parse_scenario("command = choose\nalpha = 0.5\nmethod = simpson\naction x: dist = normal()\n")
    with pytest.raises(DomainError, match="64-bit unsigned"):
        parse_scenario("command = choose\nalpha = 0.5\nseed = -1\naction x: dist = normal()\n")
    with pytest.raises(DomainError, match="must be true or false"):
        parse_scenario(
            "command = choose\nalpha = 0.5\npaper_variant_pareto = yes\naction x: dist = normal()\n"
        )


def test_parse_action_count_rules():
    with pytest.raises(DomainError, match="scenario declares no actions"):
        parse_scenario("command = choose\nalpha = 0.5\n")
    with pytest.raises(DomainError, match="sweep needs at least two actions"):
        parse_scenario("command = sweep\nalpha = grid(0.1, 0.9, 3)\naction x: dist = normal()\n")
    with pytest.raises(DomainError, match="entry needs exactly one action"):
        parse_scenario(
            "command = entry\nalpha = grid(0.1, 0.9, 3)\nk = 1\n"
            "action x: dist = normal()\naction y: dist = normal(loc=1)\n"
        )


def test_parse_entry_and_belief_keys():
    with pytest.raises(DomainError, match="missing required key 'k'"):
        parse_scenario("command = entry\nalpha = grid(0.1, 0.9, 3)\naction x: dist = normal()\n")
    with pytest.raises(DomainError, match="'k' only applies to entry"):
        parse_scenario("command = choose\nalpha = 0.5\nk = 1\naction x: dist = normal()\n")
    with pytest.raises(DomainError, match="entry cost k must be positive"):
        parse_scenario("command = entry\nalpha = grid(0.1, 0.9, 3)\nk = 0\naction x: dist = normal()\n")
    with pytest.raises(DomainError, match="missing required key 'zgrid'"):
        parse_scenario("command = belief\nalpha = 0.5\naction x: dist = normal()\n")
    with pytest.raises(DomainError, match="'zgrid' only applies to belief"):
        parse_scenario("command = choose\nalpha = 0.5\nzgrid = grid(0, 1, 5)\naction x: dist = normal()\n")
    belief = parse_scenario(
        "command = belief\nalpha = 0.5\nzgrid = grid(-2, 2, 5)\naction x: dist = normal()\n"
    )
    assert belief.zgrid == pytest.approx((-2.0, -1.0, 0.0, 1.0, 2.0))


def test_parse_output_resolves_against_base_dir(tmp_path):
    text = CHOOSE_TEXT + "output = out.csv\n"
    s = parse_scenario(text, base_dir=str(tmp_path))
    assert s.output == str(tmp_path / "out.csv")


# ---------------------------------------------------------------------------
# bundled scenarios


@pytest.mark.parametrize("name", ["example1", "figure", "entry_normal"])
def test_bundled_scenarios_parse(name):
    scenario = parse_scenario(bundled_scenario(name))
    assert scenario.command in COMMANDS


def test_bundled_scenario_unknown_name():
    with pytest.raises(DomainError, match="no bundled scenario named 'nope'"):
        bundled_scenario("nope")


# ---------------------------------------------------------------------------
# end-to-end runs


def test_choose_output_reproduces_the_reversal(tmp_path, capsys):
    path = _write(tmp_path, "ex.scn", bundled_scenario("example1"))
    assert main(["choose", "--scenario", path]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "label,quantile,superquantile,choose_winner,quantile_winner"
    assert lines[1] == "a=1,0.105572809,0.403715206,1,0"
    assert lines[2] == "a=-1,0.122187715,0.229721648,0,1"


def test_runs_are_byte_identical(tmp_path, capsys):
    path = _write(tmp_path, "ex.scn", bundled_scenario("example1"))
    main(["choose", "--scenario", path])
    first = capsys.readouterr().out
    main(["choose", "--scenario", path])
    assert capsys.readouterr().out == first


def test_entry_output_headline_and_single_flip(tmp_path, capsys):
    path = _write(tmp_path, "entry.scn", bundled_scenario("entry_normal"))
    assert main(["entry", "--scenario", path]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "alpha_hat,0.618914396"
    assert lines[1] == "alpha,superquantile,gap,decision"
    verdicts = [row.split(",")[3] for row in lines[2:]]
    assert set(verdicts) <= {"enter", "stay_out"}
    flips = sum(x != y for x, y in zip(verdicts, verdicts[1:]))
    assert flips == 1
    gaps = [float(row.split(",")[2]) for row in lines[2:]]
    assert all(b >= a for a, b in zip(gaps, gaps[1:]))


def test_sweep_probabilities_climb(tmp_path, capsys):
    path = _write(tmp_path, "fig.scn", bundled_scenario("figure"))
    assert main(["sweep", "--scenario", path, "--grid", "21"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "alpha,label,V_alpha,prob"
    risky = [float(r.split(",")[3]) for r in lines[1:] if r.split(",")[1] == "a1"]
    assert len(risky) == 21
    assert all(b >= a - 1e-9 for a, b in zip(risky, risky[1:]))
    assert risky[0] == pytest.approx(1.0 / (1.0 + math.e), abs=1e-3)


def test_belief_output_is_a_cdf(tmp_path, capsys):
    text = (
        "command = belief\nalpha = 0.8\nzgrid = grid(-1, 4, 41)\n"
        "action x: dist = normal()\n"
    )
    path = _write(tmp_path, "belief.scn", text)
    assert main(["belief", "--scenario", path]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "z,G"
    gs = [float(r.split(",")[1]) for r in lines[1:]]
    assert all(0.0 <= g <= 1.0 for g in gs)
    assert all(b >= a for a, b in zip(gs, gs[1:]))
    assert gs[0] == 0.0


def test_superquantile_output_columns(tmp_path, capsys):
    text = (
        "command = superquantile\nalpha = 0.8\nmethod = mc\nseed = 0\n"
        "action e: u=2, dist = empirical(values=1;2;3;4;5;6;7;8;9;10)\n"
    )
    path = _write(tmp_path, "sq.scn", text)
    assert main(["superquantile", "--scenario", path]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "label,u,dist,alpha,quantile,superquantile,engine,error_bound"
    fields = lines[1].split(",")
    assert fields[0] == "e"
    assert fields[1] == "2"
    assert float(fields[-3]) == 11.5
    assert fields[-2] == "monte_carlo"
    # the dist column survives a round trip
    assert "empirical(values=" in lines[1]


def test_output_file_matches_stdout(tmp_path, capsys):
    path = _write(tmp_path, "ex.scn", bundled_scenario("example1"))
    main(["choose", "--scenario", path])
    streamed = capsys.readouterr().out
    out = tmp_path / "result.csv"
    assert main(["choose", "--scenario", path, "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert out.read_text(encoding="utf-8") == streamed


def test_scenario_output_key_is_used(tmp_path, capsys):
    text = CHOOSE_TEXT + "output = fromkey.csv\n"
    path = _write(tmp_path, "ex.scn", text)
    assert main(["choose", "--scenario", path]) == 0
    assert capsys.readouterr().out == ""
    assert (tmp_path / "fromkey.csv").exists()


def test_empirical_path_resolves_relative_to_scenario(tmp_path, capsys):
    (tmp_path / "draws.txt").write_text("\n".join(str(v) for v in range(1, 11)), encoding="utf-8")
    text = "command = superquantile\nalpha = 0.8\naction e: dist = empirical(path=draws.txt)\n"
    path = _write(tmp_path, "sq.scn", text)
    assert main(["superquantile", "--scenario", path]) == 0
    line = capsys.readouterr().out.splitlines()[1]
    assert float(line.split(",")[-3]) == 9.5


# ---------------------------------------------------------------------------
# overrides and exit codes


def test_method_override(tmp_path, capsys):
    path = _write(tmp_path, "ex.scn", bundled_scenario("example1"))
    assert main(["choose", "--scenario", path, "--method", "rockafellar"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert float(lines[1].split(",")[2]) == pytest.approx(0.403715206, abs=1e-8)


def test_command_mismatch_is_a_domain_error(tmp_path, capsys):
    path = _write(tmp_path, "ex.scn", bundled_scenario("example1"))
    assert main(["sweep", "--scenario", path]) == 1
    assert "declares command 'choose'" in capsys.readouterr().err


def test_grid_override_rules(tmp_path, capsys):
    ex = _write(tmp_path, "ex.scn", bundled_scenario("example1"))
    assert main(["choose", "--scenario", ex, "--grid", "11"]) == 1
    assert "--grid only applies" in capsys.readouterr().err
    fig = _write(tmp_path, "fig.scn", bundled_scenario("figure"))
    assert main(["sweep", "--scenario", fig, "--grid", "1"]) == 1
    assert "at least 2 points" in capsys.readouterr().err


def test_domain_error_exit_code(tmp_path, capsys):
    text = "command = choose\nalpha = 1.5\naction x: dist = normal()\n"
    path = _write(tmp_path, "bad.scn", text)
    assert main(["choose", "--scenario", path]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error: ")
    assert "alpha must lie in [0,1)" in err


def test_numeric_error_exit_code(tmp_path, capsys):
    text = (
        "command = superquantile\nalpha = 0.5\nmethod = average\n"
        "action p: dist = pareto(scale=1, shape=1.0001)\n"
    )
    path = _write(tmp_path, "slow.scn", text)
    assert main(["superquantile", "--scenario", path]) == 2
    assert "error: " in capsys.readouterr().err


def test_filesystem_error_exit_codes(tmp_path, capsys):
    assert main(["choose", "--scenario", str(tmp_path / "missing.scn")]) == 3
    capsys.readouterr()
    path = _write(tmp_path, "ex.scn", bundled_scenario("example1"))
    assert main(["choose", "--scenario", path, "--out", "/dev/null/x/y.csv"]) == 3
    assert "error: " in capsys.readouterr().err


def test_usage_errors_do_not_collide_with_numeric_code(capsys):
    assert main(["frobnicate", "--scenario", "x.scn"]) == 1
    capsys.readouterr()
    assert main(["choose"]) == 1
    assert "--scenario" in capsys.readouterr().err
