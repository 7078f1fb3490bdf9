"""Readers and writers for contexts and mining results.

Context formats:

* ``csv``  -- ``object,attribute`` pairs, one incidence per record
* ``cxt``  -- Burmeister format (``B``, sizes, labels, ``X``/``.`` rows)
* ``fimi`` -- one transaction of integer item ids per line

All writers emit ``\\n`` line endings so repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .concepts import FormalConcept
from .context import FormalContext
from .errors import InvalidInputError, ParseError
from .evaluation import FoldReport
from .morpho import FormStats, Metarule
from .recommend import Recommendation
from .rules import AssociationRule, evaluate_rule

CONTEXT_FORMATS = ("csv", "cxt", "fimi")
ITEM_SEP = ";"


def normalize(label: str) -> str:
    return label.strip().lower()


def fmt_ratio(value: Fraction | None) -> str:
    return "" if value is None else f"{float(value):.4f}"


def _exact(value: Fraction | None) -> str | None:
    return None if value is None else f"{value.numerator}/{value.denominator}"


# -- contexts ---------------------------------------------------------------


def parse_csv_pairs(stream: TextIO, source: str | None = None, normalize_labels: bool = False) -> FormalContext:
    """Read ``object,attribute`` pairs; labels keep first-appearance order."""
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["object", "attribute"]:
        raise ParseError("expected header 'object,attribute'", source, 1)
    pairs = []
    for row in reader:
        line = reader.line_num
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", source, line)
        g, a = row
        if normalize_labels:
            g, a = normalize(g), normalize(a)
        if not g.strip() or not a.strip():
            raise ParseError("empty label", source, line)
        pairs.append((g, a))
    return FormalContext.from_pairs(pairs)


def write_csv_pairs(ctx: FormalContext, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["object", "attribute"])
    for g, a in ctx.pairs():
        writer.writerow([ctx.object_labels[g], ctx.attribute_labels[a]])


def parse_cxt(stream: TextIO, source: str | None = None, normalize_labels: bool = False) -> FormalContext:
    lines = stream.read().splitlines()

    def line(i: int) -> str:
        if i >= len(lines):
            raise ParseError("unexpected end of file", source, i + 1)
        return lines[i]

    if line(0).strip() != "B":
        raise ParseError("missing 'B' magic line", source, 1)
    if line(1).strip():
        raise ParseError("expected a blank line", source, 2)
    sizes = []
    for i in (2, 3):
        try:
            sizes.append(int(line(i).strip()))
        except ValueError:
            raise ParseError(f"expected a size, got {line(i)!r}", source, i + 1) from None
        if sizes[-1] < 0:
            raise ParseError("negative size", source, i + 1)
    n, m = sizes
    if line(4).strip():
        raise ParseError("expected a blank line after the sizes", source, 5)
    pos = 5
    objects = [line(pos + i) for i in range(n)]
    pos += n
    attributes = [line(pos + j) for j in range(m)]
    pos += m
    if normalize_labels:
        objects = [normalize(x) for x in objects]
        attributes = [normalize(x) for x in attributes]
    incidence = []
    for g in range(n):
        row = line(pos + g).rstrip("\r")
        if len(row) != m:
            raise ParseError(f"row has width {len(row)}, expected {m}", source, pos + g + 1)
        for a, ch in enumerate(row):
            if ch in "Xx":
                incidence.append((g, a))
            elif ch != ".":
                raise ParseError(f"illegal row character {ch!r}", source, pos + g + 1)
    pos += n
    for i in range(pos, len(lines)):
        if lines[i].strip():
            raise ParseError("trailing content after the incidence rows", source, i + 1)
    try:
        return FormalContext(objects, attributes, incidence)
    except InvalidInputError as exc:
        raise ParseError(str(exc), source) from None


def write_cxt(ctx: FormalContext, stream: TextIO) -> None:
    stream.write(f"B\n\n{ctx.n_objects}\n{ctx.n_attributes}\n\n")
    for label in ctx.object_labels:
        stream.write(label + "\n")
    for label in ctx.attribute_labels:
        stream.write(label + "\n")
    m = ctx.n_attributes
    for row in ctx.rows:
        cells = ["."] * m
        for a in row:
            cells[a] = "X"
        stream.write("".join(cells) + "\n")


def parse_fimi(stream: TextIO, source: str | None = None) -> FormalContext:
    """Objects are labelled by 1-based line number; attributes by item id, ascending."""
    transactions = []
    for lineno, raw in enumerate(stream.read().splitlines(), start=1):
        ids = []
        for token in raw.split():
            if not token.isdigit():
                raise ParseError(f"item id {token!r} is not a nonnegative integer", source, lineno)
            ids.append(int(token))
        transactions.append(ids)
    observed = sorted({i for t in transactions for i in t})
    index = {item: a for a, item in enumerate(observed)}
    return FormalContext.from_rows(
        [str(i) for i in range(1, len(transactions) + 1)],
        [str(i) for i in observed],
        [[index[i] for i in t] for t in transactions],
    )


def write_fimi(ctx: FormalContext, stream: TextIO) -> None:
    """Write item ids; attribute labels are used when they are all integers, else indices."""
    labels = ctx.attribute_labels
    if all(x.isdigit() for x in labels):
        ids = [int(x) for x in labels]
    else:
        ids = list(range(ctx.n_attributes))
    for row in ctx.rows:
        stream.write(" ".join(str(i) for i in sorted(ids[a] for a in row)) + "\n")


def detect_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".cxt":
        return "cxt"
    if suffix in (".dat", ".fimi", ".txt"):
        return "fimi"
    return "csv"


def read_context(path: str | Path, fmt: str | None = None, normalize_labels: bool = True) -> FormalContext:
    fmt = fmt or detect_format(path)
    source = str(path)
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            if fmt == "csv":
                return parse_csv_pairs(fh, source, normalize_labels)
            if fmt == "cxt":
                return parse_cxt(fh, source, normalize_labels)
            if fmt == "fimi":
                return parse_fimi(fh, source)
    except UnicodeDecodeError as exc:
        raise ParseError(f"not UTF-8 ({exc.reason})", source) from None
    raise InvalidInputError(f"unknown context format {fmt!r}")


def write_context(ctx: FormalContext, stream: TextIO, fmt: str) -> None:
    {"csv": write_csv_pairs, "cxt": write_cxt, "fimi": write_fimi}[fmt](ctx, stream)


# -- rules ------------------------------------------------------------------


def _join(labels: Iterable[str]) -> str:
    labels = list(labels)
    for x in labels:
        if ITEM_SEP in x:
            raise InvalidInputError(f"label {x!r} contains the item separator {ITEM_SEP!r}")
    return ITEM_SEP.join(labels)


def _quoted(text: str) -> str:
    return '"' + text.replace('"', '""') + '"'


def write_rules_csv(ctx: FormalContext, rules: Sequence[AssociationRule], stream: TextIO) -> None:
    stream.write("antecedent,consequent,support,confidence\n")
    for r in rules:
        ante, cons = r.labels(ctx)
        stream.write(f"{_quoted(_join(ante))},{_quoted(_join(cons))},{r.support},{fmt_ratio(r.confidence)}\n")


def rules_to_json(ctx: FormalContext, rules: Sequence[AssociationRule]) -> list[dict]:
    out = []
    for r in rules:
        ante, cons = r.labels(ctx)
        out.append({
            "antecedent": ante,
            "consequent": cons,
            "support": r.support,
            "confidence": round(float(r.confidence), 4),
            "confidence_exact": _exact(r.confidence),
        })
    return out


def _split(field: str) -> list[str]:
    return [x for x in field.split(ITEM_SEP) if x] if field else []


def read_rules(stream: TextIO, ctx: FormalContext, source: str | None = None, fmt: str = "csv") -> list[AssociationRule]:
    """Load rules written by this module, resolving labels against ``ctx``."""
    if fmt == "json":
        try:
            data = json.load(stream)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, source, exc.lineno) from None
        records = data["rules"] if isinstance(data, dict) else data
        rows = [
            (i + 1, rec["antecedent"], rec["consequent"], rec["support"],
             rec.get("confidence_exact") or str(rec["confidence"]))
            for i, rec in enumerate(records)
        ]
    else:
        reader = csv.reader(stream)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["antecedent", "consequent", "support", "confidence"]:
            raise ParseError("expected header 'antecedent,consequent,support,confidence'", source, 1)
        rows = []
        for row in reader:
            if len(row) != 4:
                raise ParseError(f"expected 4 fields, got {len(row)}", source, reader.line_num)
            rows.append((reader.line_num, _split(row[0]), _split(row[1]), row[2], row[3]))
    rules = []
    for line, ante, cons, supp, conf in rows:
        try:
            items = ctx.itemset(ante), ctx.itemset(cons)
            rules.append(AssociationRule(*items, int(supp), _recover_confidence(ctx, *items, int(supp), conf)))
        except (InvalidInputError, ValueError) as exc:
            raise ParseError(str(exc), source, line) from None
    return rules


def _recover_confidence(ctx: FormalContext, ante, cons, supp: int, text: str) -> Fraction:
    """Exact confidence for a value that may have been rounded on output.

    When the rule re-evaluated on ``ctx`` has the recorded support and rounds to
    the recorded confidence, the exact recomputed ratio is used; otherwise the
    written value is taken literally.
    """
    written = Fraction(text)
    if "/" in text:
        return written
    actual_supp, actual = evaluate_rule(ctx, ante, cons)
    if actual is not None and actual_supp == supp and fmt_ratio(actual) == fmt_ratio(written):
        return actual
    return written


# -- other results ----------------------------------------------------------


def write_concepts_csv(ctx: FormalContext, concepts: Sequence[FormalConcept], stream: TextIO) -> None:
    stream.write("extent_size,intent_size,extent,intent\n")
    for c in concepts:
        stream.write(
            f"{len(c.extent)},{len(c.intent)},"
            f"{_quoted(_join(ctx.object_names(c.extent)))},{_quoted(_join(ctx.item_labels(c.intent)))}\n"
        )


def concepts_to_json(ctx: FormalContext, concepts: Sequence[FormalConcept]) -> list[dict]:
    return [
        {"extent": ctx.object_names(c.extent), "intent": ctx.item_labels(c.intent)}
        for c in concepts
    ]


def write_recommendations_csv(
    ctx: FormalContext, recs: Iterable[Recommendation], stream: TextIO
) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["firm", "item", "score", "support_rules", "rule_support"])
    for r in recs:
        writer.writerow([
            ctx.object_labels[r.firm], ctx.attribute_labels[r.item],
            fmt_ratio(r.score), r.support_rules, r.rule_support,
        ])


def recommendations_to_json(ctx: FormalContext, recs: Iterable[Recommendation]) -> list[dict]:
    return [
        {
            "firm": ctx.object_labels[r.firm],
            "item": ctx.attribute_labels[r.item],
            "score": round(float(r.score), 4),
            "score_exact": _exact(r.score),
            "support_rules": r.support_rules,
            "rule_support": r.rule_support,
        }
        for r in recs
    ]


def write_metarules_csv(ctx: FormalContext, rules: Sequence[Metarule], stream: TextIO) -> None:
    stream.write("form,antecedent,consequent,support,confidence,via\n")
    for r in rules:
        stream.write(
            f"{r.form},{_quoted(ctx.attribute_labels[r.antecedent])},"
            f"{_quoted(_join(ctx.item_labels(r.consequent)))},{r.support},"
            f"{fmt_ratio(r.confidence)},{_quoted(r.via)}\n"
        )


def metarules_to_json(ctx: FormalContext, rules: Sequence[Metarule]) -> list[dict]:
    return [
        {
            "form": r.form,
            "antecedent": ctx.attribute_labels[r.antecedent],
            "consequent": ctx.item_labels(r.consequent),
            "support": r.support,
            "confidence": None if r.confidence is None else round(float(r.confidence), 4),
            "confidence_exact": _exact(r.confidence),
            "via": r.via,
        }
        for r in rules
    ]


def write_stats_csv(stats: dict[str, FormStats], stream: TextIO) -> None:
    stream.write("form,rules,average_supp,average_conf,undefined_conf\n")
    for form, s in stats.items():
        stream.write(
            f"{form},{s.count},{fmt_ratio(s.average_support)},{fmt_ratio(s.average_confidence)},"
            f"{s.undefined_confidence}\n"
        )


def stats_to_json(stats: dict[str, FormStats]) -> dict:
    return {
        form: {
            "rules": s.count,
            "average_supp": None if s.average_support is None else round(float(s.average_support), 4),
            "average_conf": None if s.average_confidence is None else round(float(s.average_confidence), 4),
            "undefined_conf": s.undefined_confidence,
        }
        for form, s in stats.items()
    }


FOLD_COLUMNS = (
    "fold",
    "n_rules",
    "n_rules_test_supp_pos",
    "average_conf",
    "n_rules_conf_ge_half",
    "average_conf_restricted",
    "average_conf_all_rules",
)


def _mean_or_none(values: list) -> Fraction | None:
    values = [v for v in values if v is not None]
    return Fraction(sum(values)) / len(values) if values else None


def fold_means(reports: Sequence[FoldReport]) -> dict:
    n = len(reports)
    return {
        "n_rules": Fraction(sum(r.n_rules for r in reports), n),
        "n_rules_test_supp_pos": Fraction(sum(r.n_rules_test_supp_pos for r in reports), n),
        "average_conf": _mean_or_none([r.average_conf for r in reports]),
        "n_rules_conf_ge_half": Fraction(sum(r.n_rules_conf_ge_half for r in reports), n),
        "average_conf_restricted": _mean_or_none([r.average_conf_restricted for r in reports]),
        "average_conf_all_rules": _mean_or_none([r.average_conf_all_rules for r in reports]),
    }


def write_folds_csv(reports: Sequence[FoldReport], stream: TextIO) -> None:
    """One row per fold plus a trailing ``means`` row."""
    stream.write(",".join(FOLD_COLUMNS) + "\n")
    for r in reports:
        stream.write(
            f"{r.fold_index + 1},{r.n_rules},{r.n_rules_test_supp_pos},{fmt_ratio(r.average_conf)},"
            f"{r.n_rules_conf_ge_half},{fmt_ratio(r.average_conf_restricted)},"
            f"{fmt_ratio(r.average_conf_all_rules)}\n"
        )
    if reports:
        m = fold_means(reports)
        stream.write(
            f"means,{float(m['n_rules']):.1f},{float(m['n_rules_test_supp_pos']):.1f},"
            f"{fmt_ratio(m['average_conf'])},{float(m['n_rules_conf_ge_half']):.1f},"
            f"{fmt_ratio(m['average_conf_restricted'])},{fmt_ratio(m['average_conf_all_rules'])}\n"
        )


def folds_to_json(reports: Sequence[FoldReport], seed: int, k: int) -> dict:
    def num(v):
        return None if v is None else round(float(v), 4)

    m = fold_means(reports) if reports else {}
    return {
        "seed": seed,
        "k": k,
        "folds": [
            {
                "fold": r.fold_index + 1,
                "n_train": r.n_train,
                "n_test": r.n_test,
                "n_rules": r.n_rules,
                "n_rules_test_supp_pos": r.n_rules_test_supp_pos,
                "average_conf": num(r.average_conf),
                "n_rules_conf_ge_half": r.n_rules_conf_ge_half,
                "average_conf_restricted": num(r.average_conf_restricted),
                "average_conf_all_rules": num(r.average_conf_all_rules),
            }
            for r in reports
        ],
        "means": {k_: num(v) for k_, v in m.items()},
    }


def context_stats(ctx: FormalContext) -> dict:
    """Shape and degree bounds of a context."""
    row_deg = [len(r) for r in ctx.rows]
    col_deg = [len(c) for c in ctx.cols]
    cells = ctx.n_objects * ctx.n_attributes
    return {
        "objects": ctx.n_objects,
        "attributes": ctx.n_attributes,
        "incidences": ctx.n_incidences,
        "density": round(ctx.n_incidences / cells, 6) if cells else 0.0,
        "min_object_degree": min(row_deg, default=0),
        "max_object_degree": max(row_deg, default=0),
        "min_attribute_degree": min(col_deg, default=0),
        "max_attribute_degree": max(col_deg, default=0),
    }
