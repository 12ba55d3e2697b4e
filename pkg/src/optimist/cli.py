"""Scenario-driven command line: parse a declarative file, emit CSV.

A scenario is a flat text file of ``key = value`` lines plus one
``action`` line per alternative:

    # lines starting with # are comments
    command = choose
    alpha = 0.8
    action a=1: u=0, dist = affine(triangular(lower=0, mode=0, upper=2), scale=1, shift=-1)

Five commands cover the toolkit: ``choose`` (rank a menu once),
``sweep`` (logit curve over an optimism grid), ``entry`` (threshold
plus decision table), ``belief`` (censored cdf on a value grid) and
``superquantile`` (one tail average per action, engine annotated).

Output is CSV with a fixed header per command, every numeric printed
with 9 significant digits, distribution strings printed at full
precision so they parse back to equal laws.  A given scenario file and
seed produce byte-identical output on every run.

Exit codes: 0 success, 1 domain error (bad scenario, bad arguments),
2 numerical failure, 3 filesystem failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass, replace
from importlib import resources

import numpy as np

from .beliefs import censor, censored_cdf
from .choice import ChoiceProblem, choose, quantile_choose
from .distributions import (
    GEV,
    GPD,
    AffineTransform,
    Degenerate,
    Distribution,
    DomainError,
    Empirical,
    Logistic,
    Normal,
    NumericError,
    Pareto,
    StudentT,
    Triangular,
)
from .entry import EntryProblem, entry_decision, entry_threshold
from .stochastic import luce_curve
from .superquantile import Action, check_optimism, superquantile

__all__ = [
    "COMMANDS",
    "METHOD_ALIASES",
    "Scenario",
    "parse_scenario",
    "parse_distribution",
    "format_distribution",
    "bundled_scenario",
    "run",
    "main",
]

COMMANDS = ("choose", "sweep", "entry", "belief", "superquantile")

METHOD_ALIASES = {
    "auto": "auto",
    "closed": "closed_form",
    "average": "quantile_average",
    "rockafellar": "rockafellar",
    "conditional": "conditional_tail",
    "mc": "monte_carlo",
}

_SCALAR_COMMANDS = ("choose", "belief", "superquantile")
_GRID_COMMANDS = ("sweep", "entry")


@dataclass(frozen=True)
class Scenario:
    """A fully validated scenario, ready to run."""

    command: str
    actions: tuple[Action, ...]
    alpha: float | None = None
    grid: tuple[float, ...] | None = None
    method: str = "auto"
    seed: int = 0
    paper_variant_pareto: bool = False
    output: str | None = None
    k: float | None = None
    zgrid: tuple[float, ...] | None = None


def _fmt(x) -> str:
    return format(float(x), ".9g")


def _fmt_param(x) -> str:
    # full precision so printed laws parse back to equal objects
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# distribution grammar


def _split_top_level(text: str) -> list[str]:
    """Split on commas outside parentheses."""
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise DomainError("unbalanced parentheses")
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth != 0:
        raise DomainError("unbalanced parentheses")
    parts.append(text[start:])
    return [p.strip() for p in parts]


def _parse_float(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise DomainError(f"{what} is not a number: {text!r}") from None


def _parse_kwargs(parts: list[str], family: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for part in parts:
        if not part:
            raise DomainError(f"empty parameter in {family}(...)")
        key, eq, value = part.partition("=")
        if not eq:
            raise DomainError(f"expected key=value in {family}(...), got {part!r}")
        key = key.strip()
        if key in out:
            raise DomainError(f"duplicate parameter {key!r} in {family}(...)")
        out[key] = value.strip()
    return out


def _take(kwargs: dict[str, str], family: str, name: str, default=None) -> float:
    if name in kwargs:
        return _parse_float(kwargs.pop(name), f"{family} parameter {name!r}")
    if default is None:
        raise DomainError(f"{family} needs parameter {name!r}")
    return default


def _reject_extras(kwargs: dict[str, str], family: str) -> None:
    if kwargs:
        extra = sorted(kwargs)[0]
        raise DomainError(f"unknown parameter {extra!r} for {family}")


def _parse_empirical(kwargs: dict[str, str], base_dir: str) -> Empirical:
    has_values = "values" in kwargs
    has_path = "path" in kwargs
    if has_values == has_path:
        raise DomainError("empirical needs exactly one of values=... or path=...")
    if has_values:
        raw = kwargs.pop("values")
        items = [v for v in raw.split(";") if v.strip()]
        if not items:
            raise DomainError("empirical values list is empty")
        vals = tuple(_parse_float(v, "empirical value") for v in items)
    else:
        rel = kwargs.pop("path")
        path = rel if os.path.isabs(rel) else os.path.join(base_dir, rel)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                lines = [ln.strip() for ln in fh]
        except OSError as err:
            raise DomainError(f"cannot read empirical data file {rel!r}: {err}") from None
        items = [ln for ln in lines if ln]
        if not items:
            raise DomainError(f"empirical data file {rel!r} is empty")
        vals = tuple(_parse_float(v, "empirical value") for v in items)
    _reject_extras(kwargs, "empirical")
    return Empirical(vals)


def parse_distribution(text: str, base_dir: str = ".") -> Distribution:
    """Parse a ``family(param=value, ...)`` string into a law.

    ``affine`` nests: its first argument is another distribution
    string.  ``empirical`` takes either ``values=v1;v2;...`` inline or
    ``path=file`` naming a newline-delimited text file resolved
    relative to ``base_dir``.
    """
    text = text.strip()
    open_paren = text.find("(")
    if open_paren < 0 or not text.endswith(")"):
        raise DomainError(f"malformed distribution {text!r}; expected family(...)")
    family = text[:open_paren].strip().lower()
    inner = text[open_paren + 1 : -1].strip()
    parts = _split_top_level(inner) if inner else []

    if family == "affine":
        if not parts:
            raise DomainError("affine needs a base distribution and scale, shift")
        base = parse_distribution(parts[0], base_dir)
        kwargs = _parse_kwargs(parts[1:], "affine")
        scale = _take(kwargs, "affine", "scale")
        shift = _take(kwargs, "affine", "shift")
        _reject_extras(kwargs, "affine")
        return AffineTransform(base, scale, shift)
    if family == "empirical":
        return _parse_empirical(_parse_kwargs(parts, "empirical"), base_dir)

    kwargs = _parse_kwargs(parts, family)
    if family == "normal":
        d = Normal(loc=_take(kwargs, family, "loc", 0.0), scale=_take(kwargs, family, "scale", 1.0))
    elif family == "logistic":
        d = Logistic(loc=_take(kwargs, family, "loc", 0.0), scale=_take(kwargs, family, "scale", 1.0))
    elif family == "student_t":
        d = StudentT(
            df=_take(kwargs, family, "df"),
            scale=_take(kwargs, family, "scale", 1.0),
            loc=_take(kwargs, family, "loc", 0.0),
        )
    elif family == "pareto":
        d = Pareto(scale=_take(kwargs, family, "scale"), shape=_take(kwargs, family, "shape"))
    elif family == "gpd":
        d = GPD(shape=_take(kwargs, family, "shape"), scale=_take(kwargs, family, "scale"))
    elif family == "gev":
        d = GEV(
            loc=_take(kwargs, family, "loc"),
            scale=_take(kwargs, family, "scale"),
            shape=_take(kwargs, family, "shape"),
        )
    elif family == "triangular":
        d = Triangular(
            lower=_take(kwargs, family, "lower"),
            mode=_take(kwargs, family, "mode"),
            upper=_take(kwargs, family, "upper"),
        )
    elif family == "degenerate":
        d = Degenerate(value=_take(kwargs, family, "value"))
    else:
        raise DomainError(f"unknown distribution family {family!r}")
    _reject_extras(kwargs, family)
    return d


def format_distribution(d: Distribution) -> str:
    """Canonical string for a law; parses back to an equal object."""
    if isinstance(d, Normal):
        return f"normal(loc={_fmt_param(d.loc)}, scale={_fmt_param(d.scale)})"
    if isinstance(d, Logistic):
        return f"logistic(loc={_fmt_param(d.loc)}, scale={_fmt_param(d.scale)})"
    if isinstance(d, StudentT):
        return (
            f"student_t(df={_fmt_param(d.df)}, scale={_fmt_param(d.scale)}, "
            f"loc={_fmt_param(d.loc)})"
        )
    if isinstance(d, Pareto):
        return f"pareto(scale={_fmt_param(d.scale)}, shape={_fmt_param(d.shape)})"
    if isinstance(d, GPD):
        return f"gpd(shape={_fmt_param(d.shape)}, scale={_fmt_param(d.scale)})"
    if isinstance(d, GEV):
        return (
            f"gev(loc={_fmt_param(d.loc)}, scale={_fmt_param(d.scale)}, "
            f"shape={_fmt_param(d.shape)})"
        )
    if isinstance(d, Triangular):
        return (
            f"triangular(lower={_fmt_param(d.lower)}, mode={_fmt_param(d.mode)}, "
            f"upper={_fmt_param(d.upper)})"
        )
    if isinstance(d, Degenerate):
        return f"degenerate(value={_fmt_param(d.value)})"
    if isinstance(d, Empirical):
        return "empirical(values=" + ";".join(_fmt_param(v) for v in d.values) + ")"
    if isinstance(d, AffineTransform):
        return (
            f"affine({format_distribution(d.base)}, scale={_fmt_param(d.scale)}, "
            f"shift={_fmt_param(d.shift)})"
        )
    raise DomainError(f"no scenario syntax for {type(d).__name__}")


# ---------------------------------------------------------------------------
# scenario parsing


def _parse_grid(value: str, what: str) -> tuple[float, float, int]:
    body = value.strip()
    if not (body.startswith("grid(") and body.endswith(")")):
        raise DomainError(f"{what} grid must look like grid(start, stop, count)")
    parts = _split_top_level(body[5:-1])
    if len(parts) != 3:
        raise DomainError(f"{what} grid needs exactly start, stop, count")
    start = _parse_float(parts[0], f"{what} grid start")
    stop = _parse_float(parts[1], f"{what} grid stop")
    try:
        count = int(parts[2])
    except ValueError:
        raise DomainError(f"{what} grid count is not an integer: {parts[2]!r}") from None
    if count < 2:
        raise DomainError(f"{what} grid needs at least 2 points")
    if not (math.isfinite(start) and math.isfinite(stop) and start < stop):
        raise DomainError(f"{what} grid needs start < stop")
    return start, stop, count


def _alpha_grid(start: float, stop: float, count: int) -> tuple[float, ...]:
    check_optimism(start, allow_zero=False)
    check_optimism(stop, allow_zero=False)
    return tuple(float(a) for a in np.linspace(start, stop, count))


def _line_error(lineno: int, err: Exception) -> DomainError:
    return DomainError(f"line {lineno}: {err}")


def _parse_action_line(rest: str, lineno: int, base_dir: str) -> Action:
    label, colon, body = rest.partition(":")
    label = label.strip()
    if not colon or not label:
        raise DomainError(f"line {lineno}: action line must be 'action <label>: ...'")
    u = 0.0
    law = None
    seen = set()
    try:
        parts = _split_top_level(body)
    except DomainError as err:
        raise _line_error(lineno, err) from None
    for part in parts:
        if not part:
            continue
        key, eq, value = part.partition("=")
        key = key.strip()
        if not eq or key not in ("u", "dist"):
            raise DomainError(
                f"line {lineno}: action fields are u=<real> and dist=<family(...)>, got {part!r}"
            )
        if key in seen:
            raise DomainError(f"line {lineno}: duplicate action field {key!r}")
        seen.add(key)
        try:
            if key == "u":
                u = _parse_float(value.strip(), "u")
            else:
                law = parse_distribution(value.strip(), base_dir)
        except DomainError as err:
            raise _line_error(lineno, err) from None
    if law is None:
        raise DomainError(f"line {lineno}: action needs a dist=... field")
    try:
        return Action(label, law, u)
    except DomainError as err:
        raise _line_error(lineno, err) from None


_SCENARIO_KEYS = (
    "command",
    "alpha",
    "method",
    "seed",
    "paper_variant_pareto",
    "output",
    "k",
    "zgrid",
)


def parse_scenario(text: str, base_dir: str = ".") -> Scenario:
    """Parse and validate scenario text; errors carry their line numbers."""
    entries: dict[str, tuple[str, int]] = {}
    actions: list[Action] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("action ") or line.startswith("action\t"):
            action = _parse_action_line(line[len("action") :].strip(), lineno, base_dir)
            if any(a.label == action.label for a in actions):
                raise DomainError(f"line {lineno}: duplicate action label {action.label!r}")
            actions.append(action)
            continue
        key, eq, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not eq:
            raise DomainError(f"line {lineno}: expected 'key = value', got {line!r}")
        if key not in _SCENARIO_KEYS:
            raise DomainError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise DomainError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = (value, lineno)

    def pop(key: str) -> tuple[str, int] | None:
        return entries.pop(key, None)

    got = pop("command")
    if got is None:
        raise DomainError("scenario is missing required key 'command'")
    command, cmd_line = got
    if command not in COMMANDS:
        raise DomainError(
            f"line {cmd_line}: unknown command {command!r}; expected one of {', '.join(COMMANDS)}"
        )

    got = pop("alpha")
    if got is None:
        raise DomainError("scenario is missing required key 'alpha'")
    alpha_raw, alpha_line = got
    alpha: float | None = None
    grid: tuple[float, ...] | None = None
    if alpha_raw.startswith("grid"):
        if command not in _GRID_COMMANDS:
            raise DomainError(
                f"line {alpha_line}: command {command!r} needs a single alpha, not a grid"
            )
        try:
            grid = _alpha_grid(*_parse_grid(alpha_raw, "alpha"))
        except DomainError as err:
            raise _line_error(alpha_line, err) from None
    else:
        if command in _GRID_COMMANDS:
            raise DomainError(
                f"line {alpha_line}: command {command!r} needs alpha = grid(start, stop, count)"
            )
        try:
            alpha = check_optimism(_parse_float(alpha_raw, "alpha"))
        except DomainError as err:
            raise _line_error(alpha_line, err) from None

    method = "auto"
    got = pop("method")
    if got is not None:
        value, lineno = got
        if value not in METHOD_ALIASES:
            raise DomainError(
                f"line {lineno}: unknown method {value!r}; expected one of "
                + ", ".join(METHOD_ALIASES)
            )
        method = METHOD_ALIASES[value]

    seed = 0
    got = pop("seed")
    if got is not None:
        value, lineno = got
        try:
            seed = int(value, 10)
        except ValueError:
            raise DomainError(f"line {lineno}: seed is not an integer: {value!r}") from None
        if not (0 <= seed < 2**64):
            raise DomainError(f"line {lineno}: seed must be a 64-bit unsigned integer")

    variant = False
    got = pop("paper_variant_pareto")
    if got is not None:
        value, lineno = got
        if value not in ("true", "false"):
            raise DomainError(f"line {lineno}: paper_variant_pareto must be true or false")
        variant = value == "true"

    output = None
    got = pop("output")
    if got is not None:
        value, lineno = got
        if not value:
            raise DomainError(f"line {lineno}: output path is empty")
        output = value if os.path.isabs(value) else os.path.join(base_dir, value)

    k = None
    got = pop("k")
    if got is not None:
        value, lineno = got
        if command != "entry":
            raise DomainError(f"line {lineno}: key 'k' only applies to entry scenarios")
        k = _parse_float(value, "k")
        if not (math.isfinite(k) and k > 0.0):
            raise DomainError(f"line {lineno}: entry cost k must be positive")
    elif command == "entry":
        raise DomainError("entry scenario is missing required key 'k'")

    zgrid = None
    got = pop("zgrid")
    if got is not None:
        value, lineno = got
        if command != "belief":
            raise DomainError(f"line {lineno}: key 'zgrid' only applies to belief scenarios")
        try:
            lo, hi, count = _parse_grid(value, "z")
        except DomainError as err:
            raise _line_error(lineno, err) from None
        zgrid = tuple(float(z) for z in np.linspace(lo, hi, count))
    elif command == "belief":
        raise DomainError("belief scenario is missing required key 'zgrid'")

    if not actions:
        raise DomainError("scenario declares no actions")
    if command == "sweep" and len(actions) < 2:
        raise DomainError("sweep needs at least two actions")
    if command in ("entry", "belief") and len(actions) != 1:
        raise DomainError(f"{command} needs exactly one action")

    return Scenario(
        command=command,
        actions=tuple(actions),
        alpha=alpha,
        grid=grid,
        method=method,
        seed=seed,
        paper_variant_pareto=variant,
        output=output,
        k=k,
        zgrid=zgrid,
    )


def bundled_scenario(name: str) -> str:
    """Text of a scenario shipped with the package (example1, figure, entry_normal)."""
    try:
        return (resources.files("optimist") / "scenarios" / f"{name}.scn").read_text(
            encoding="utf-8"
        )
    except (FileNotFoundError, ModuleNotFoundError) as err:
        raise DomainError(f"no bundled scenario named {name!r}") from err


# ---------------------------------------------------------------------------
# command execution


def _csv_buffer():
    buf = io.StringIO()
    return buf, csv.writer(buf, lineterminator="\n")


def _run_choose(s: Scenario, w) -> None:
    problem = ChoiceProblem(s.actions, s.alpha, method=s.method)
    picked = choose(
        problem, paper_variant_pareto=s.paper_variant_pareto, mc_seed=s.seed
    )
    by_quantile = quantile_choose(problem)
    w.writerow(["label", "quantile", "superquantile", "choose_winner", "quantile_winner"])
    for action in s.actions:
        w.writerow(
            [
                action.label,
                _fmt(by_quantile.values[action.label]),
                _fmt(picked.values[action.label]),
                int(action.label == picked.winner),
                int(action.label == by_quantile.winner),
            ]
        )


def _run_sweep(s: Scenario, w) -> None:
    curve = luce_curve(
        s.actions,
        grid=s.grid,
        method=s.method,
        paper_variant_pareto=s.paper_variant_pareto,
        mc_seed=s.seed,
    )
    w.writerow(["alpha", "label", "V_alpha", "prob"])
    for i, alpha in enumerate(curve.alphas):
        for action in s.actions:
            w.writerow(
                [
                    _fmt(alpha),
                    action.label,
                    _fmt(curve.values[action.label][i]),
                    _fmt(curve.probs[action.label][i]),
                ]
            )


def _run_entry(s: Scenario, w) -> None:
    problem = EntryProblem(shock=s.actions[0].utility_law(), k=s.k)
    alpha_hat = entry_threshold(problem, tol=1e-9)
    w.writerow(["alpha_hat", _fmt(alpha_hat)])
    w.writerow(["alpha", "superquantile", "gap", "decision"])
    for alpha in s.grid:
        decision = entry_decision(problem, alpha, method=s.method)
        w.writerow(
            [
                _fmt(alpha),
                _fmt(decision.gap + s.k),
                _fmt(decision.gap),
                decision.verdict,
            ]
        )


def _run_belief(s: Scenario, w) -> None:
    action = s.actions[0]
    belief = censor(action, s.alpha)
    gs = censored_cdf(action, belief.alpha, np.asarray(s.zgrid, dtype=float))
    w.writerow(["z", "G"])
    for z, g in zip(s.zgrid, np.asarray(gs, dtype=float)):
        w.writerow([_fmt(z), _fmt(g)])


def _run_superquantile(s: Scenario, w) -> None:
    w.writerow(
        [
            "label",
            "u",
            "dist",
            "alpha",
            "quantile",
            "superquantile",
            "engine",
            "error_bound",
        ]
    )
    for action in s.actions:
        res = superquantile(
            action,
            s.alpha,
            s.method,
            paper_variant_pareto=s.paper_variant_pareto,
            mc_seed=s.seed,
        )
        w.writerow(
            [
                action.label,
                _fmt(action.u),
                format_distribution(action.law),
                _fmt(s.alpha),
                _fmt(res.multiplier),
                _fmt(res.value),
                res.engine,
                _fmt(res.error_bound),
            ]
        )


_RUNNERS = {
    "choose": _run_choose,
    "sweep": _run_sweep,
    "entry": _run_entry,
    "belief": _run_belief,
    "superquantile": _run_superquantile,
}


def _execute(s: Scenario) -> None:
    buf, writer = _csv_buffer()
    _RUNNERS[s.command](s, writer)
    payload = buf.getvalue()
    if s.output is None:
        sys.stdout.write(payload)
    else:
        with open(s.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)


def _error_code(err: Exception) -> int:
    if isinstance(err, DomainError):
        return 1
    if isinstance(err, NumericError):
        return 2
    return 3


def run(scenario: Scenario) -> int:
    """Execute a validated scenario; returns the process exit code."""
    try:
        _execute(scenario)
    except (DomainError, NumericError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return _error_code(err)
    return 0


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors, which collides with
    # the numeric-failure code; surface them as domain errors instead
    def error(self, message):
        raise DomainError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="optimist", description="Optimistic decision analysis from scenario files.")
    parser.add_argument("command", choices=COMMANDS, help="what to compute")
    parser.add_argument("--scenario", required=True, help="path to a scenario file")
    parser.add_argument("--out", default=None, help="output CSV path (default: scenario's output key, else stdout)")
    parser.add_argument(
        "--grid",
        type=int,
        default=None,
        metavar="N",
        help="re-space the scenario's alpha grid to N points over the same range",
    )
    parser.add_argument(
        "--method",
        choices=tuple(METHOD_ALIASES),
        default=None,
        help="override the scenario's engine",
    )
    parser.add_argument(
        "--paper-variant-pareto",
        action="store_true",
        help="use the originally printed Pareto tail-average factor",
    )
    return parser


def _apply_overrides(scenario: Scenario, args: argparse.Namespace) -> Scenario:
    if scenario.command != args.command:
        raise DomainError(
            f"scenario declares command {scenario.command!r} but {args.command!r} was invoked"
        )
    if args.method is not None:
        scenario = replace(scenario, method=METHOD_ALIASES[args.method])
    if args.paper_variant_pareto:
        scenario = replace(scenario, paper_variant_pareto=True)
    if args.grid is not None:
        if scenario.grid is None:
            raise DomainError("--grid only applies to scenarios with an alpha grid")
        if args.grid < 2:
            raise DomainError("--grid needs at least 2 points")
        scenario = replace(
            scenario,
            grid=_alpha_grid(scenario.grid[0], scenario.grid[-1], args.grid),
        )
    if args.out is not None:
        scenario = replace(scenario, output=args.out)
    return scenario


def main(argv=None) -> int:
    """Entry point; returns the exit code instead of raising."""
    try:
        args = _build_parser().parse_args(argv)
        with open(args.scenario, "r", encoding="utf-8") as fh:
            text = fh.read()
        base_dir = os.path.dirname(os.path.abspath(args.scenario))
        scenario = _apply_overrides(parse_scenario(text, base_dir), args)
    except (DomainError, NumericError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return _error_code(err)
    return run(scenario)
