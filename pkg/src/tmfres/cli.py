"""Command line entry point.

Subcommands: validate, ext, margolis, cobar, mrss, parabola, chart.  Tables go
to stdout (or ``--out``) as TSV with a ``#`` header line.  A config file of
``key = value`` lines (``#`` starts a comment) supplies defaults for option
names; explicit flags win.  Failures print one line ``error<TAB>kind<TAB>message``
to stderr and exit 1.  Modules are file paths, or ``@appendixA`` / ``@F2``.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__

__all__ = ["main", "build_parser", "read_config"]


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def read_config(path: str | Path) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError("config", f"{path}:{lineno}: expected 'key = value'")
        key, value = (x.strip() for x in line.split("=", 1))
        if not key:
            raise CliError("config", f"{path}:{lineno}: empty key")
        out[key.replace("-", "_")] = value
    return out


def _load(name: str):
    from .modfmt import appendix_a_module, load_module, parse_module

    if name == "@appendixA":
        return appendix_a_module()
    if name == "@F2":
        return parse_module("1\n0\n")
    return load_module(name)


def _write(args, rows: list[list], header: list[str]) -> None:
    text = "#" + "\t".join(header) + "\n" + "".join("\t".join(str(x) for x in r) + "\n" for r in rows)
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# --- subcommands ------------------------------------------------------------

def cmd_validate(args) -> None:
    from .modfmt import validate_module

    m = _load(args.module)
    bad = validate_module(m, args.relation_top)
    if bad:
        a, b, i = bad[0]
        raise CliError("adem", f"Sq^{a}Sq^{b} fails on generator {i} ({len(bad)} failures)")
    print(f"OK {m.dim} generators")


def cmd_ext(args) -> None:
    from .resolution import Algebra, minimal_resolution

    alg = Algebra.from_name(args.algebra, truncation=args.truncation)
    r = minimal_resolution(alg, _load(args.module), args.smax, args.tmax)
    rows = [[s, t, t - s, n] for (s, t), n in sorted(r.dims().items()) if n]
    _write(args, rows, ["s", "t", "t-s", "dim"])


def cmd_margolis(args) -> None:
    from .margolis import margolis_homology

    res = margolis_homology(_load(args.module), args.n, args.maxdeg)
    rows = [[d, res.ker_dims[d], res.im_dims[d], res.homology_dims[d]] for d in sorted(res.ker_dims)]
    _write(args, rows, ["degree", "ker", "im", "homology"])


def cmd_cobar(args) -> None:
    from .hopfcobar import cobar_cohomology, preset

    res = cobar_cohomology(preset(args.preset, window=args.window), args.nmax, args.tmax)
    rows = [[n, t, d] for (n, t), d in sorted(res.dims.items()) if d]
    _write(args, rows, ["n", "t", "dim"])


def cmd_mrss(args) -> None:
    from .ssq import ce_complex, cohomology

    fc = ce_complex(args.variant, args.smax, args.tmax)
    h = cohomology(fc, s_range=range(0, args.smax + 1), t_max=args.tmax)
    rows = [[s, t, f, n] for (s, t, f), n in sorted((h.graded_dims or {}).items())]
    _write(args, rows, ["s", "t", "mr_weight", "dim"])


def cmd_parabola(args) -> None:
    from .ssq import parabola_points

    try:
        pts = parabola_points(Fraction(args.mass), range(1, args.nmax + 1))
    except (ValueError, ZeroDivisionError) as e:
        raise CliError("argument", str(e)) from None
    _write(args, [[n, y, int(ok)] for n, y, ok in pts], ["n", "t-n", "integer"])


def cmd_chart(args) -> None:
    from .chart import from_dims, render

    xy: dict[tuple[int, int], int] = {}
    for line in Path(args.input).read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        f = line.split("\t")
        s, t, n = int(f[0]), int(f[1]), int(f[-1])
        xy[(t - s, s)] = xy.get((t - s, s), 0) + n
    doc = from_dims(xy)
    if args.vanishing_line:
        doc.lines.append((Fraction(1, 11), Fraction(12, 11)))
    for m in args.parabola or []:
        doc.parabolas.append(Fraction(m))
    data = render(doc, args.format)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tmfres", description="Ext, Margolis, cobar and CE computations over F2.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--config", help="file of 'key = value' defaults")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="parse a module file and check Adem relations")
    v.add_argument("--module", required=True)
    v.add_argument("--relation-top", type=int, default=23)
    v.set_defaults(func=cmd_validate)

    e = sub.add_parser("ext", help="minimal resolution Ext dimensions")
    e.add_argument("--module", default="@F2")
    e.add_argument("--algebra", default="A1", help="A, A0, A1, A2 or EQn")
    e.add_argument("--truncation", type=int, default=None, help="degree cap for the full algebra A")
    e.add_argument("--smax", type=int, default=8)
    e.add_argument("--tmax", type=int, default=30)
    e.add_argument("--out")
    e.set_defaults(func=cmd_ext)

    m = sub.add_parser("margolis", help="Margolis homology H(M; Q_n)")
    m.add_argument("--module", required=True)
    m.add_argument("--n", type=int, default=2)
    m.add_argument("--maxdeg", type=int, default=None)
    m.add_argument("--out")
    m.set_defaults(func=cmd_margolis)

    c = sub.add_parser("cobar", help="cobar cohomology of a preset Hopf algebra")
    c.add_argument("--preset", default="dual-A1")
    c.add_argument("--nmax", type=int, default=4)
    c.add_argument("--tmax", type=int, default=24)
    c.add_argument("--window", type=int, default=48)
    c.add_argument("--out")
    c.set_defaults(func=cmd_cobar)

    r = sub.add_parser("mrss", help="CE cohomology per (s, t, MR weight)")
    r.add_argument("--variant", choices=["l2", "l2bar"], default="l2bar")
    r.add_argument("--smax", type=int, default=4)
    r.add_argument("--tmax", type=int, default=60)
    r.add_argument("--out")
    r.set_defaults(func=cmd_mrss)

    b = sub.add_parser("parabola", help="points on t - n = (4/M) n^2 - 3n + 6")
    b.add_argument("--mass", default="1")
    b.add_argument("--nmax", type=int, default=10)
    b.add_argument("--out")
    b.set_defaults(func=cmd_parabola)

    h = sub.add_parser("chart", help="render an (s, t, ..., dim) TSV as a chart")
    h.add_argument("--input", required=True)
    h.add_argument("--format", choices=["svg", "tsv"], default="svg")
    h.add_argument("--vanishing-line", action="store_true")
    h.add_argument("--parabola", action="append")
    h.add_argument("--out")
    h.set_defaults(func=cmd_chart)
    return p


def _apply_config(parser: argparse.ArgumentParser, command: str, conf: dict[str, str]) -> None:
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction)).choices[command]
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in conf.items():
        act = known.get(key)
        if act is None or key in ("help", "func"):
            continue  # keys for other subcommands
        if isinstance(act, argparse._StoreTrueAction):
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
        else:
            defaults[key] = act.type(raw) if act.type else raw
        act.required = False
    sub.set_defaults(**defaults)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    try:
        known, rest = pre.parse_known_args(argv)
        if known.config:
            conf = read_config(known.config)
            commands = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction)).choices
            command = next((x for x in rest if x in commands), None)
            if command is not None:
                _apply_config(parser, command, conf)
        args = parser.parse_args(argv)  # exits 2 on usage errors
        args.func(args)
    except CliError as e:
        print(f"error\t{e.kind}\t{e}", file=sys.stderr)
        return 1
    except (OSError, ValueError, AssertionError) as e:
        print(f"error\t{type(e).__name__}\t{e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
