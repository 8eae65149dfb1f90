"""Command-line entry point.

Exit codes: 0 success, 1 invalid input or usage, 2 a verification that ran
and found a failing check.

Option values are resolved as command-line flag, then the matching section of
``--config FILE.json``, then the built-in default.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import __version__
from .dimension import box_count, cantor_set, rasterize_union, segment_grid, stretched_union_dimension
from .emit import box_count_csv, chart_dot, chart_table_csv, tree_csv, tree_dot
from .errors import SizeLimitError, TopexError
from .finite_topology import (check_expanding, coproduct, coproduct_characterizations_agree,
                              encode_stretching_tree, verify_fractal_family)
from .index_algebra import enumerate_lambda
from .io import (dumps, presentation_from_dict, presentation_to_dict, spaces_from_json, tree_from_dict,
                 tree_to_dict)
from .mean_functions import (DeltaSchedule, IteratedMean, SampledFunction, WeierstrassParams,
                             extra_level_convergence, mean_derivative_check, weierstrass)
from .report import AxiomReport
from .stretching import EpsilonSchedule, OpenBox, build_tree, verify_stretching_axioms

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2

DEFAULTS: dict[str, dict[str, Any]] = {
    "lambda": {"step": None, "chart_table": False, "cap": None},
    "stretch": {"base": "0,1", "eps": None, "depth": 1, "format": "json", "verify": False, "cap": None},
    "topology": {"family": None, "spaces": None, "tree": None, "check": False, "format": "text"},
    "mean": {"signs": "+", "deltas": None, "f": "weierstrass:0.5,13,30", "domain": "0,2", "intervals": 10_000,
             "xs": None, "out": "csv", "check_derivative": False, "check_l1": False,
             "delta_next": ",".join(repr(2.0 ** -k) for k in range(3, 11)), "samples": 200, "seed": 0,
             "rtol": 1e-6},
    "dimension": {"tree": None, "step": None, "resolution": 1024, "out": "csv", "shape": None},
    "diagram": {"tree": None, "charts": False, "step": 1},
}


class UsageError(Exception):
    pass


class ConfigError(TopexError):
    def __init__(self, name: str, message: str):
        super().__init__(f"--{name.replace('_', '-')}: {message}")
        self.name = name


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _flag(p, *names, **kw):
    # Every option defaults to None so that config-file values can fill the gaps.
    kw.setdefault("default", None)
    p.add_argument(*names, **kw)


def _switch(p, name, help):
    p.add_argument(name, action="store_const", const=True, default=None, help=help)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="JSON file with one section per subcommand")
    common.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")

    parser = _Parser(prog="topex", description="Stretching trees, finite coproduct topologies, "
                     "iterated integral means and box-counting dimension.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("lambda", parents=[common], help="list the sign strings of one step")
    _flag(p, "--step", type=int, help="step index n (2^(n+1) strings)")
    _switch(p, "--chart-table", "CSV table with chart numbers and compositions")
    _flag(p, "--cap", type=int, help="enumeration cap on the step index")

    p = sub.add_parser("stretch", parents=[common], help="build a stretching tree")
    _flag(p, "--base", help='box sides, e.g. "0,1" or "0,1;0,1"')
    _flag(p, "--eps", help='decreasing schedule, e.g. "0.5,0.25,0.125"')
    _flag(p, "--depth", type=int)
    _flag(p, "--format", choices=["json", "dot", "csv"])
    _switch(p, "--verify", "print the axiom report instead of the tree")
    _flag(p, "--cap", type=int)

    p = sub.add_parser("topology", parents=[common], help="finite-topology checks")
    p.add_argument("action", choices=["verify", "coproduct", "encode"])
    _flag(p, "--family", help="family presentation JSON")
    _flag(p, "--spaces", help="tagged spaces JSON")
    _flag(p, "--tree", help="tree JSON written by `stretch`")
    _switch(p, "--check", "compare both forms of the coproduct topology")
    _flag(p, "--format", choices=["text", "json"])

    p = sub.add_parser("mean", parents=[common], help="iterated integral means")
    _flag(p, "--signs")
    _flag(p, "--deltas")
    _flag(p, "--f", help="weierstrass[:amp,freq,terms] | linear | const:c | sin | cos")
    _flag(p, "--domain", help='sampled interval "a,b"')
    _flag(p, "--intervals", type=int, help="grid intervals (multiple of 4)")
    _flag(p, "--xs", help='"a:b:step" or "x1,x2,..."')
    _flag(p, "--out", choices=["csv", "json"], help="output format")
    _switch(p, "--check-derivative", "compare the x-derivative of the mean with its closed form")
    _switch(p, "--check-l1", "tabulate the error of one extra level against its width")
    _flag(p, "--delta-next", help="widths of the extra level for --check-l1")
    _flag(p, "--samples", type=int)
    _flag(p, "--seed", type=int)
    _flag(p, "--rtol", type=float)

    p = sub.add_parser("dimension", parents=[common], help="box-counting dimension")
    _flag(p, "--tree")
    _flag(p, "--step", type=int)
    _flag(p, "--resolution", type=int)
    _flag(p, "--out", choices=["csv", "json"], help="output format")
    _flag(p, "--shape", choices=["square", "segment", "cantor"], help="calibration shape instead of a tree")

    p = sub.add_parser("diagram", parents=[common], help="DOT diagrams")
    _flag(p, "--tree")
    _switch(p, "--charts", "chart diagram instead of a tree")
    _flag(p, "--step", type=int)
    return parser


@dataclass
class RunConfig:
    command: str
    action: str | None = None
    options: dict = field(default_factory=dict)
    output: str | None = None

    def __getattr__(self, name):
        try:
            return self.__dict__["options"][name]
        except KeyError:
            raise AttributeError(name) from None


def resolve_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise UsageError(build_parser().format_usage() + "topex: error: a subcommand is required")
    section: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", str(exc)) from None
        if not isinstance(loaded, dict):
            raise ConfigError("config", "expected a JSON object with one section per subcommand")
        section = loaded.get(args.command, {})
        if not isinstance(section, dict):
            raise ConfigError("config", f"section {args.command!r} must be an object")
    defaults = DEFAULTS[args.command]
    unknown = sorted(set(section) - set(defaults))
    if unknown:
        raise ConfigError(unknown[0], f"not an option of `{args.command}` (config file)")
    options = {}
    for name, default in defaults.items():
        value = getattr(args, name, None)
        if value is None:
            value = section.get(name, default)
        options[name] = value
    return RunConfig(args.command, getattr(args, "action", None), options, args.output)


# -- value parsers --------------------------------------------------------------


def _floats(name, text) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = [p for p in str(text).replace("[", "").replace("]", "").split(",") if p.strip()]
    try:
        vals = tuple(float(p) for p in parts)
    except (TypeError, ValueError):
        raise ConfigError(name, f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise ConfigError(name, "no values given")
    return vals


def _required(name, value):
    if value is None:
        raise ConfigError(name, "is required")
    return value


def parse_base(text) -> OpenBox:
    sides = []
    for chunk in str(text).split(";"):
        vals = _floats("base", chunk)
        if len(vals) != 2:
            raise ConfigError("base", f"each side needs two endpoints, got {chunk!r}")
        sides.append(vals)
    try:
        return OpenBox(tuple(sides))
    except TopexError as exc:
        raise ConfigError("base", str(exc)) from None


def parse_function(text: str) -> Callable:
    name, _, arg = str(text).partition(":")
    name = name.strip().lower()
    if name == "weierstrass":
        try:
            return weierstrass(WeierstrassParams.parse(arg) if arg else WeierstrassParams())
        except TopexError as exc:
            raise ConfigError("f", str(exc)) from None
    if name in ("linear", "identity"):
        return lambda t: np.asarray(t, dtype=np.float64) * 1.0
    if name == "const":
        c = _floats("f", arg)[0]
        return lambda t: np.full(np.shape(t), c)
    if name == "sin":
        return np.sin
    if name == "cos":
        return np.cos
    raise ConfigError("f", f"unknown function {text!r}")


def parse_xs(text) -> np.ndarray:
    text = str(text)
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError("xs", f'expected "a:b:step", got {text!r}')
        a, b, step = _floats("xs", ",".join(parts))
        if not step > 0 or b < a:
            raise ConfigError("xs", "need a <= b and step > 0")
        count = int(math.floor((b - a) / step + 1e-9))
        return a + step * np.arange(count + 1)
    return np.asarray(_floats("xs", text))


def _wrap(name, fn, *args):
    try:
        return fn(*args)
    except ConfigError:
        raise
    except TopexError as exc:
        raise ConfigError(name, str(exc)) from None


def _load_json(name, path):
    try:
        with open(_required(name, path), encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(name, str(exc)) from None


# -- subcommands ----------------------------------------------------------------


def cmd_lambda(cfg: RunConfig) -> tuple[str, int]:
    n = _required("step", cfg.step)
    if cfg.chart_table:
        return chart_table_csv(n), EXIT_OK
    return "".join(f"{j}\n" for j in enumerate_lambda(n, cfg.cap)), EXIT_OK


def _tree_from_cfg(cfg):
    base = parse_base(cfg.base)
    eps = _wrap("eps", EpsilonSchedule, _floats("eps", _required("eps", cfg.eps)))
    depth = int(cfg.depth)
    if depth >= len(eps):
        raise ConfigError("depth", f"depth {depth} needs {depth + 1} epsilon terms, --eps has {len(eps)}")
    return build_tree(base, eps, depth, cfg.cap)


def _report_text(reports: list[AxiomReport], fmt: str) -> str:
    if fmt == "json":
        return dumps({"passed": all(reports), "reports": [r.to_dict() for r in reports]})
    return "\n".join(str(r) for r in reports) + "\n"


def cmd_stretch(cfg):
    tree = _tree_from_cfg(cfg)
    if cfg.verify:
        report = verify_stretching_axioms(tree)
        return _report_text([report], "text"), EXIT_OK if report else EXIT_FAILED
    fmt = cfg.format
    if fmt == "json":
        return dumps(tree_to_dict(tree)), EXIT_OK
    if fmt == "dot":
        return tree_dot(tree), EXIT_OK
    if fmt == "csv":
        return tree_csv(tree), EXIT_OK
    raise ConfigError("format", f"unknown format {fmt!r}")


def cmd_topology(cfg):
    fmt = cfg.format
    if cfg.action == "verify":
        if cfg.family is None and cfg.tree is None:
            raise ConfigError("family", "is required (or give --tree)")
        if cfg.family is not None:
            pres = presentation_from_dict(_load_json("family", cfg.family))
            reports = [verify_fractal_family(pres)]
            if reports[0]:
                reports.append(check_expanding(pres))
        else:
            tree = tree_from_dict(_load_json("tree", cfg.tree))
            reports = [verify_stretching_axioms(tree)]
            if tree.base.dim == 1 and reports[0]:
                pres = encode_stretching_tree(tree)
                reports += [verify_fractal_family(pres), check_expanding(pres)]
        return _report_text(reports, fmt), EXIT_OK if all(reports) else EXIT_FAILED
    if cfg.action == "coproduct":
        family = spaces_from_json(_load_json("spaces", cfg.spaces))
        cp = coproduct(family)
        out = {
            "points": sorted(([p, t] for p, t in cp.points), key=repr),
            "opens": sorted((sorted(([p, t] for p, t in o), key=repr) for o in cp.opens), key=lambda o: (len(o), repr(o))),
            "open_count": len(cp.opens),
        }
        code = EXIT_OK
        if cfg.check:
            verdict = coproduct_characterizations_agree(family)
            out["characterizations_agree"] = verdict.ok
            out["check"] = verdict.reason
            code = EXIT_OK if verdict else EXIT_FAILED
        return dumps(out), code
    if cfg.action == "encode":
        tree = tree_from_dict(_load_json("tree", cfg.tree))
        return dumps(presentation_to_dict(encode_stretching_tree(tree))), EXIT_OK
    raise ConfigError("action", f"unknown action {cfg.action!r}")


def _csv_lines(header, rows) -> str:
    return "\n".join([",".join(header)] + [",".join(repr(v) if isinstance(v, float) else str(v) for v in r)
                                           for r in rows]) + "\n"


def cmd_mean(cfg):
    source = parse_function(cfg.f)
    dom = _floats("domain", cfg.domain)
    if len(dom) != 2 or not dom[0] < dom[1]:
        raise ConfigError("domain", f'expected "a,b" with a < b, got {cfg.domain!r}')
    n = int(cfg.intervals)
    if n < 8 or n % 4:
        raise ConfigError("intervals", f"must be a multiple of 4 and at least 8, got {n}")
    f = SampledFunction.from_callable(source, dom[0], dom[1], n)
    deltas = _wrap("deltas", DeltaSchedule, _floats("deltas", _required("deltas", cfg.deltas)))
    signs = str(cfg.signs)
    if len(signs) != len(deltas):
        raise ConfigError("signs", f"{len(signs)} signs but {len(deltas)} deltas")
    evaluator = _wrap("deltas", IteratedMean, f, signs, deltas)
    lo, hi = evaluator.valid_range

    if cfg.check_derivative:
        rng = np.random.default_rng(cfg.seed)
        s0 = 1 if signs[0] == "+" else -1
        lo0, hi0 = (f.a, f.b - deltas[0]) if s0 > 0 else (f.a + deltas[0], f.b)
        if cfg.xs is not None:
            cases = [(float(x), deltas[0], s0) for x in parse_xs(cfg.xs)]
        else:
            cases = []
            for _ in range(int(cfg.samples)):
                s = int(rng.choice([1, -1]))
                d = float(rng.uniform(2 * f.h, deltas[0]))
                a, b = (f.a, f.b - d) if s > 0 else (f.a + d, f.b)
                cases.append((float(rng.uniform(a + f.h, b - f.h)), d, s))
        rows, ok = [], True
        for x, d, s in cases:
            num, ana = _wrap("xs", mean_derivative_check, f, x, d, s, source)
            rel = abs(num - ana) / max(abs(ana), 1.0)
            ok &= rel <= cfg.rtol
            rows.append((x, d, "+" if s > 0 else "-", num, ana, rel))
        text = _csv_lines(["x", "delta", "sigma", "numeric", "analytic", "rel_err"], rows)
        return text, EXIT_OK if ok else EXIT_FAILED

    if cfg.check_l1:
        xs = parse_xs(cfg.xs) if cfg.xs is not None else np.array([0.5 * (lo + hi)])
        nxt = _floats("delta_next", cfg.delta_next)
        rows, ok = [], True
        for x in xs:
            table = _wrap("delta_next", extra_level_convergence, f, float(x), signs, deltas, nxt)
            errs = [e for d, e in table if d > 0]
            ok &= all(a > b for a, b in zip(errs, errs[1:]))
            rows += [(float(x), d, e) for d, e in table]
        return _csv_lines(["x", "delta_next", "error"], rows), EXIT_OK if ok else EXIT_FAILED

    xs = parse_xs(_required("xs", cfg.xs))
    val, err = _wrap("xs", evaluator.evaluate, xs)
    val, err = np.atleast_1d(val), np.atleast_1d(err)
    if cfg.out == "json":
        return dumps({"signs": signs, "deltas": list(deltas.deltas), "function": str(cfg.f),
                      "valid_range": [lo, hi],
                      "rows": [{"x": float(x), "F": float(v), "err_bound": float(e)}
                               for x, v, e in zip(xs, val, err)]}), EXIT_OK
    return _csv_lines(["x", "F(x)", "err_bound"], [(float(x), float(v), float(e)) for x, v, e in zip(xs, val, err)]), EXIT_OK


def cmd_dimension(cfg):
    res = int(cfg.resolution)
    if cfg.shape is not None:
        grid = {"square": lambda: rasterize_union([OpenBox.unit(2)], res),
                "segment": lambda: segment_grid(res),
                "cantor": lambda: cantor_set(8)}[cfg.shape]
        grid = _wrap("resolution", grid)
        result = _wrap("resolution", box_count, grid)
    else:
        tree = tree_from_dict(_load_json("tree", cfg.tree))
        step = tree.depth if cfg.step is None else int(cfg.step)
        if not 0 <= step <= tree.depth:
            raise ConfigError("step", f"step {step} outside 0..{tree.depth}")
        if tree.base.dim == 2:
            result = _wrap("resolution", stretched_union_dimension, tree, step, res)
        else:
            result = _wrap("resolution", lambda: box_count(rasterize_union([b for _, b in tree.level(step)], res)))
    if cfg.out == "json":
        return dumps({"scales": list(result.scales), "counts": list(result.counts),
                      "slope": result.slope, "r2": result.r2}), EXIT_OK
    return box_count_csv(result), EXIT_OK


def cmd_diagram(cfg):
    if cfg.charts:
        step = int(cfg.step)
        if step < 0:
            raise ConfigError("step", "must be non-negative")
        enumerate_lambda(step)
        return chart_dot(step), EXIT_OK
    tree = tree_from_dict(_load_json("tree", cfg.tree))
    return tree_dot(tree), EXIT_OK


COMMANDS = {"lambda": cmd_lambda, "stretch": cmd_stretch, "topology": cmd_topology, "mean": cmd_mean,
            "dimension": cmd_dimension, "diagram": cmd_diagram}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg = resolve_config(list(sys.argv[1:] if argv is None else argv))
        text, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_INVALID
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (TopexError, SizeLimitError) as exc:
        stderr.write(f"topex: error: {exc}\n")
        return EXIT_INVALID
    if cfg.output:
        try:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            stderr.write(f"topex: error: --output: {exc}\n")
            return EXIT_INVALID
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
