"""Command-line interface.

Every subcommand reads a context (CSV pairs, Burmeister CXT or FIMI), runs one
pipeline stage and writes CSV or JSON. Reports that have a natural picture
(band, fold table, metarule averages, degree distribution) also get a PNG next
to the output file.

Option precedence: command-line flags, then a ``--config`` JSON file, then
built-in defaults. ``CONCEPTREC_THREADS`` and ``CONCEPTREC_OUTPUT_DIR`` set
the default worker count and output directory.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import formats, plotting
from .concepts import BandConstraints, count_band, mine_concepts
from .errors import ConceptRecError, ParameterError
from .evaluation import SplitSpec, cross_validate
from .morpho import MORPH_FORMS, StemmerSpec, build_stem_context, gen_metarules, metarule_stats
from .onto import load_binding, load_ontology, onto_metarules
from .recommend import recommend, recommend_all
from .rules import MiningParams, exact_rules, informative_basis
from .synthetic import generate_planted

log = logging.getLogger("conceptrec")

ENV_THREADS = "CONCEPTREC_THREADS"
ENV_OUTPUT_DIR = "CONCEPTREC_OUTPUT_DIR"


def parse_min_supp(text: str):
    """``30`` is absolute; ``1.5%`` and ``0.015`` are relative."""
    text = text.strip()
    try:
        if text.endswith("%"):
            return Fraction(text[:-1]) / 100
        if any(c in text for c in ".eE/"):
            return Fraction(text)
        return int(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid support threshold {text!r}") from None


def parse_conf(text: str) -> Fraction:
    try:
        value = Fraction(text.strip()[:-1]) / 100 if text.strip().endswith("%") else Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid confidence {text!r}") from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"confidence {text} outside [0, 1]")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(ENV_THREADS, "1")))
    except ValueError:
        return 1


# -- parser -----------------------------------------------------------------


def _common(p: argparse.ArgumentParser, needs_input: bool = True) -> None:
    if needs_input:
        p.add_argument("input", help="context file")
        p.add_argument("--format", choices=formats.CONTEXT_FORMATS,
                       help="input format (default: from the file extension)")
        p.add_argument("--no-normalize", dest="normalize", action="store_false",
                       help="keep labels as written instead of trimming and lowercasing")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--output-format", choices=("csv", "json"), default="csv")
    p.add_argument("--no-figures", dest="figures", action="store_false",
                   help="do not render a PNG next to the output file")
    p.add_argument("--threads", type=_positive, default=_default_threads())
    p.add_argument("--config", help="JSON file with option defaults")


def _thresholds(p: argparse.ArgumentParser, conf: bool = True, supp_default: str = "1") -> None:
    p.add_argument("--min-supp", type=parse_min_supp, default=parse_min_supp(supp_default),
                   help="absolute count (30) or relative fraction (0.015 or 1.5%%)")
    if conf:
        p.add_argument("--min-conf", type=parse_conf, default=Fraction(0))
    p.add_argument("--include-empty", action="store_true",
                   help="keep rules with an empty antecedent")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conceptrec", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("mine-concepts", help="enumerate a band of formal concepts")
    _common(p)
    p.add_argument("--min-extent", type=_nonnegative, default=0)
    p.add_argument("--min-intent", type=_nonnegative, default=0)
    p.add_argument("--count-only", action="store_true")

    p = sub.add_parser("mine-rules", help="informative basis of approximate rules")
    _common(p)
    _thresholds(p)
    p.add_argument("--with-exact", action="store_true", help="append exact rules")

    p = sub.add_parser("exact-rules", help="implications from frequent generators")
    _common(p)
    _thresholds(p, conf=False)

    p = sub.add_parser("recommend", help="rank unbought terms per firm")
    _common(p)
    p.add_argument("--rules", required=True, help="rules file written by mine-rules")
    p.add_argument("--rules-format", choices=("csv", "json"))
    p.add_argument("--firm", help="firm label (default: every firm)")
    p.add_argument("--top-n", type=_positive)

    p = sub.add_parser("metarules-morph", help="morphology-based metarules")
    _common(p)
    _thresholds(p, supp_default="0")
    p.add_argument("--form", choices=MORPH_FORMS + ("all",), default="all")
    p.add_argument("--stemmer", choices=("porter", "identity"), default="porter")
    p.add_argument("--stem-dict", help="word,stem CSV overriding the built-in stemmer")
    p.add_argument("--split-consequents", action="store_true",
                   help="score each consequent phrase as its own rule")
    p.add_argument("--stats-min-conf", type=parse_conf,
                   help="confidence floor applied before averaging")

    p = sub.add_parser("metarules-onto", help="ontology-based metarules")
    _common(p)
    _thresholds(p, supp_default="0")
    p.add_argument("--ontology", required=True, help="child,parent CSV")
    p.add_argument("--binding", help="node,attribute_label CSV")
    p.add_argument("--kind", choices=("generalization", "neighborhood"), default="neighborhood")
    p.add_argument("--level", type=_positive, default=1)

    p = sub.add_parser("crossval", help="k-fold validation of the informative basis")
    _common(p)
    _thresholds(p, supp_default="0.015")
    p.set_defaults(min_conf=Fraction(9, 10))
    p.add_argument("--folds", type=_positive, default=10)
    p.add_argument("--seed", type=_nonnegative, default=0)
    p.add_argument("--with-exact", action="store_true", help="also validate exact rules")

    p = sub.add_parser("synth", help="generate a synthetic context with planted sectors")
    _common(p, needs_input=False)
    p.add_argument("--objects", type=_nonnegative, default=2000)
    p.add_argument("--attributes", type=_nonnegative, default=3000)
    p.add_argument("--incidences", type=_nonnegative, default=92345)
    p.add_argument("--sectors", type=_nonnegative, default=10)
    p.add_argument("--sector-objects", type=_nonnegative, default=20)
    p.add_argument("--sector-attributes", type=_nonnegative, default=15)
    p.add_argument("--seed", type=_nonnegative, default=0)
    p.add_argument("--context-format", choices=formats.CONTEXT_FORMATS, default="csv")
    p.add_argument("--blocks", help="also write the planted blocks as JSON here")

    p = sub.add_parser("stats", help="shape and degree bounds of a context")
    _common(p)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    path = Path(known.config)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{path}:{exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ParameterError(f"{path}: config must be a JSON object")
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    command = next((a for a in argv if a in subparsers.choices), None)
    values = {k: v for k, v in data.items() if not isinstance(v, dict)}
    values.update(data.get(command, {}) if command else {})
    values = {k.replace("-", "_"): v for k, v in values.items()}
    for key in ("min_supp",):
        if key in values:
            values[key] = parse_min_supp(str(values[key]))
    for key in ("min_conf", "stats_min_conf"):
        if key in values and values[key] is not None:
            values[key] = parse_conf(str(values[key]))
    if command is not None:
        subparsers.choices[command].set_defaults(**values)


# -- output helpers ---------------------------------------------------------


def _output_path(args, ext: str) -> Path | None:
    if args.output:
        return Path(args.output)
    out_dir = os.environ.get(ENV_OUTPUT_DIR)
    if out_dir:
        return Path(out_dir) / f"{args.command}.{ext}"
    return None


def _emit(args, write_csv, to_json) -> Path | None:
    """Write the payload once, after it is fully assembled."""
    buf = io.StringIO()
    if args.output_format == "json":
        json.dump(to_json(), buf, indent=2, ensure_ascii=False)
        buf.write("\n")
    else:
        write_csv(buf)
    path = _output_path(args, args.output_format)
    if path is None:
        sys.stdout.write(buf.getvalue())
        return None
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())
    return path


def _figure(args, path: Path | None, draw, suffix: str = "") -> None:
    if path is None or not args.figures:
        return
    target = path.with_name(path.stem + suffix + ".png")
    draw(target)
    log.info("wrote %s", target)


def _params(args) -> MiningParams:
    return MiningParams(args.min_supp, getattr(args, "min_conf", Fraction(0)), args.include_empty)


def _load(args):
    return formats.read_context(args.input, args.format, args.normalize)


# -- subcommands ------------------------------------------------------------


def cmd_mine_concepts(args) -> None:
    ctx = _load(args)
    band = BandConstraints(args.min_extent, args.min_intent)
    if args.count_only:
        n = count_band(ctx, band)
        _emit(args, lambda s: s.write(f"concepts\n{n}\n"), lambda: {"concepts": n})
        return
    concepts = mine_concepts(ctx, band)
    path = _emit(
        args,
        lambda s: formats.write_concepts_csv(ctx, concepts, s),
        lambda: formats.concepts_to_json(ctx, concepts),
    )
    _figure(args, path, lambda p: plotting.plot_band(concepts, p))


def cmd_mine_rules(args) -> None:
    ctx = _load(args)
    params = _params(args)
    rules = informative_basis(ctx, params)
    if args.with_exact:
        rules = sorted(rules + exact_rules(ctx, params.min_supp, params.include_empty_antecedent),
                       key=lambda r: r.sort_key())
    _emit(
        args,
        lambda s: formats.write_rules_csv(ctx, rules, s),
        lambda: {"rules": formats.rules_to_json(ctx, rules)},
    )


def cmd_exact_rules(args) -> None:
    ctx = _load(args)
    rules = exact_rules(ctx, args.min_supp, args.include_empty)
    _emit(
        args,
        lambda s: formats.write_rules_csv(ctx, rules, s),
        lambda: {"rules": formats.rules_to_json(ctx, rules)},
    )


def cmd_recommend(args) -> None:
    ctx = _load(args)
    rules_fmt = args.rules_format or ("json" if args.rules.endswith(".json") else "csv")
    with open(args.rules, encoding="utf-8", newline="") as fh:
        rules = formats.read_rules(fh, ctx, args.rules, rules_fmt)
    if args.firm is not None:
        firm = args.firm.strip().lower() if args.normalize else args.firm
        recs = recommend(ctx, rules, ctx.object_index(firm), args.top_n)
    else:
        recs = [r for per_firm in recommend_all(ctx, rules, args.top_n).values() for r in per_firm]
    _emit(
        args,
        lambda s: formats.write_recommendations_csv(ctx, recs, s),
        lambda: {"recommendations": formats.recommendations_to_json(ctx, recs)},
    )


def cmd_metarules_morph(args) -> None:
    ctx = _load(args)
    if args.stem_dict:
        with open(args.stem_dict, encoding="utf-8", newline="") as fh:
            stemmer = StemmerSpec.from_dictionary(fh, args.stem_dict)
    else:
        stemmer = StemmerSpec(args.stemmer)
    ctx_ts = build_stem_context(list(ctx.attribute_labels), stemmer)
    params = _params(args)
    forms = MORPH_FORMS if args.form == "all" else (args.form,)
    rules = []
    for form in forms:
        rules += gen_metarules(ctx, ctx_ts, form, params, args.split_consequents)
    stats = metarule_stats(rules, args.stats_min_conf)
    path = _emit(
        args,
        lambda s: formats.write_metarules_csv(ctx, rules, s),
        lambda: {
            "metarules": formats.metarules_to_json(ctx, rules),
            "stats": formats.stats_to_json(stats),
        },
    )
    if path is not None and args.output_format == "csv":
        stats_path = path.with_name(path.stem + ".stats.csv")
        with open(stats_path, "w", encoding="utf-8", newline="") as fh:
            formats.write_stats_csv(stats, fh)
    _figure(args, path, lambda p: plotting.plot_metarule_stats(stats, p), ".stats")


def cmd_metarules_onto(args) -> None:
    ctx = _load(args)
    binding = None
    if args.binding:
        with open(args.binding, encoding="utf-8", newline="") as fh:
            binding = load_binding(fh, args.binding)
        if args.normalize:
            binding = {node: formats.normalize(label) for node, label in binding.items()}
    with open(args.ontology, encoding="utf-8", newline="") as fh:
        onto = load_ontology(fh, args.ontology, binding)
    rules = onto_metarules(ctx, onto, args.kind, _params(args), args.level)
    _emit(
        args,
        lambda s: formats.write_metarules_csv(ctx, rules, s),
        lambda: {"metarules": formats.metarules_to_json(ctx, rules)},
    )


def cmd_crossval(args) -> None:
    ctx = _load(args)
    spec = SplitSpec(args.folds, args.seed)
    result = cross_validate(ctx, _params(args), spec, args.with_exact, args.threads)
    path = _emit(
        args,
        lambda s: formats.write_folds_csv(result.reports, s),
        lambda: formats.folds_to_json(result.reports, spec.seed, spec.k),
    )
    _figure(args, path, lambda p: plotting.plot_folds(result.reports, p, float(args.min_conf)))


def cmd_synth(args) -> None:
    ctx, blocks = generate_planted(
        args.objects, args.attributes, args.incidences,
        (args.sectors, args.sector_objects, args.sector_attributes), args.seed,
    )
    if args.blocks:
        payload = [
            {"objects": ctx.object_names(b.objects), "attributes": ctx.item_labels(b.attributes)}
            for b in blocks
        ]
        blocks_path = Path(args.blocks)
        blocks_path.parent.mkdir(parents=True, exist_ok=True)
        blocks_path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    args.output_format = "csv"
    path = _emit(args, lambda s: formats.write_context(ctx, s, args.context_format), lambda: None)
    _figure(args, path, lambda p: plotting.plot_degrees(ctx, p))


def cmd_stats(args) -> None:
    ctx = _load(args)
    stats = formats.context_stats(ctx)

    def write_csv(s):
        s.write("key,value\n")
        for k, v in stats.items():
            s.write(f"{k},{v}\n")

    path = _emit(args, write_csv, lambda: stats)
    _figure(args, path, lambda p: plotting.plot_degrees(ctx, p))


COMMANDS = {
    "mine-concepts": cmd_mine_concepts,
    "mine-rules": cmd_mine_rules,
    "exact-rules": cmd_exact_rules,
    "recommend": cmd_recommend,
    "metarules-morph": cmd_metarules_morph,
    "metarules-onto": cmd_metarules_onto,
    "crossval": cmd_crossval,
    "synth": cmd_synth,
    "stats": cmd_stats,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (ConceptRecError, OSError, argparse.ArgumentTypeError) as exc:
        print(f"conceptrec: error: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        COMMANDS[args.command](args)
    except (ConceptRecError, OSError) as exc:
        print(f"conceptrec: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
