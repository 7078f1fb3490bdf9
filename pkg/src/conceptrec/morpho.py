"""Morphology-based metarules.

A phrase x stem context is built from the attribute labels of a purchase
context; candidate rules are then read off the stem context and scored on the
purchase context. Five rule forms are supported:

``A``  t -> phrases sharing one given stem of t (one rule per stem)
``B``  t -> phrases sharing at least one stem with t
``C``  t -> phrases whose stems include all stems of t
``D``  t -> t2 for each phrase t2 whose stems are a subset of the stems of t
``E``  t -> union of all such t2
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

from . import porter
from .context import FormalContext, iter_bits
from .errors import ConfigurationError, InvalidInputError, ParameterError, ParseError
from .rules import MiningParams, as_fraction, evaluate_rule

MORPH_FORMS = ("A", "B", "C", "D", "E")


@dataclass(frozen=True)
class StemmerSpec:
    """How words map to stems. ``kind`` is ``porter``, ``identity`` or ``table``.

    A ``table`` stemmer looks words up in ``table`` and falls back to the
    Porter stemmer for words it does not list.
    """

    kind: str = "porter"
    table: dict[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in ("porter", "identity", "table"):
            raise ParameterError(f"unknown stemmer kind {self.kind!r}")

    def stem(self, word: str) -> str:
        word = word.lower()
        if self.kind == "identity":
            return word
        if self.kind == "table" and word in self.table:
            return self.table[word]
        return porter.stem(word)

    @classmethod
    def from_dictionary(cls, stream: TextIO, source: str | None = None) -> "StemmerSpec":
        """Read a ``word,stem`` CSV."""
        reader = csv.reader(stream)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["word", "stem"]:
            raise ParseError("expected header 'word,stem'", source, 1)
        table = {}
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 fields, got {len(row)}", source, line)
            word, stem = row[0].strip().lower(), row[1].strip().lower()
            if not word or not stem:
                raise ParseError("empty word or stem", source, line)
            table[word] = stem
        return cls("table", table)


def tokenize(phrase: str) -> list[str]:
    return phrase.lower().split()


def phrase_stems(phrase: str, stemmer: StemmerSpec) -> set[str]:
    return {stemmer.stem(w) for w in tokenize(phrase)}


def build_stem_context(phrases: Sequence[str], stemmer: StemmerSpec | None = None) -> FormalContext:
    """Phrase x stem context; word order is ignored and stems are sorted."""
    stemmer = stemmer or StemmerSpec()
    if not phrases:
        raise InvalidInputError("no phrases given")
    stem_sets = []
    for p in phrases:
        stems = phrase_stems(p, stemmer)
        if not stems:
            raise InvalidInputError(f"phrase {p!r} has no words")
        stem_sets.append(stems)
    axis = sorted(set().union(*stem_sets))
    index = {s: i for i, s in enumerate(axis)}
    return FormalContext.from_rows(
        list(phrases), axis, [[index[s] for s in stems] for stems in stem_sets]
    )


@dataclass(frozen=True)
class Metarule:
    """Candidate rule from linguistic or ontological knowledge, scored on K_FT.

    ``antecedent`` and ``consequent`` are attribute indices of the purchase
    context. ``confidence`` is None when no firm bought the antecedent.
    """

    form: str
    antecedent: int
    consequent: tuple[int, ...]
    support: int
    confidence: Fraction | None
    via: str = ""

    def sort_key(self):
        return (self.form, self.antecedent, self.consequent, self.via)


def _axis_map(ctx_ft: FormalContext, ctx_ts: FormalContext) -> list[int]:
    """Purchase-context attribute index for each stem-context object."""
    if set(ctx_ft.attribute_labels) != set(ctx_ts.object_labels):
        missing = set(ctx_ts.object_labels) ^ set(ctx_ft.attribute_labels)
        raise ConfigurationError(
            f"phrase axes differ ({len(missing)} labels in only one context)"
        )
    return [ctx_ft.attribute_index(label) for label in ctx_ts.object_labels]


def _consequents(ctx_ts: FormalContext, t: int, form: str) -> Iterable[tuple[int, str]]:
    """Yield ``(phrase mask, note)`` candidates for phrase ``t`` of the stem context."""
    rows, cols = ctx_ts.row_bits, ctx_ts.col_bits
    stems = rows[t]
    self_bit = 1 << t
    if form == "A":
        for s in iter_bits(stems):
            yield cols[s] & ~self_bit, ctx_ts.attribute_labels[s]
    elif form == "B":
        union = 0
        for s in iter_bits(stems):
            union |= cols[s]
        yield union & ~self_bit, ""
    elif form == "C":
        yield ctx_ts.extent_mask(stems) & ~self_bit, ""
    elif form in ("D", "E"):
        # a subset phrase shares at least one stem with t
        near = 0
        for s in iter_bits(stems):
            near |= cols[s]
        subs = 0
        for t2 in iter_bits(near & ~self_bit):
            if rows[t2] & ~stems == 0:
                subs |= 1 << t2
        if form == "D":
            for t2 in iter_bits(subs):
                yield 1 << t2, ""
        else:
            yield subs, ""
    else:
        raise ParameterError(f"unknown metarule form {form!r}")


def passes_thresholds(supp: int, conf: Fraction | None, threshold: int, min_conf: Fraction) -> bool:
    if supp < threshold:
        return False
    if conf is None:
        return min_conf == 0
    return conf >= min_conf


def score_metarule(
    ctx_ft: FormalContext, form: str, antecedent: int, consequent: Iterable[int], via: str = ""
) -> Metarule:
    consequent = tuple(sorted(set(consequent)))
    supp, conf = evaluate_rule(ctx_ft, (antecedent,), consequent)
    return Metarule(form, antecedent, consequent, supp, conf, via)


def gen_metarules(
    ctx_ft: FormalContext,
    ctx_ts: FormalContext,
    form: str,
    params: MiningParams | None = None,
    split_consequents: bool = False,
) -> list[Metarule]:
    """Generate and score one metarule form.

    ``split_consequents`` scores every consequent phrase as its own rule
    instead of one conjunctive rule per candidate.
    """
    if form not in MORPH_FORMS:
        raise ParameterError(f"unknown metarule form {form!r}")
    params = params or MiningParams(0, 0)
    to_ft = _axis_map(ctx_ft, ctx_ts)
    threshold = params.absolute_min_supp(ctx_ft.n_objects)
    out = []
    for t in range(ctx_ts.n_objects):
        for mask, via in _consequents(ctx_ts, t, form):
            if not mask:
                continue
            targets = [to_ft[x] for x in iter_bits(mask)]
            groups = [[x] for x in targets] if split_consequents else [targets]
            for cons in groups:
                rule = score_metarule(ctx_ft, form, to_ft[t], cons, via)
                if passes_thresholds(rule.support, rule.confidence, threshold, params.min_conf):
                    out.append(rule)
    out.sort(key=Metarule.sort_key)
    return out


@dataclass(frozen=True)
class FormStats:
    count: int
    average_support: Fraction | None
    average_confidence: Fraction | None
    undefined_confidence: int


def metarule_stats(
    rules: Iterable[Metarule], min_conf: float | Fraction | None = None
) -> dict[str, FormStats]:
    """Per-form rule count and mean support/confidence.

    With ``min_conf`` set, only rules whose confidence reaches it are counted.
    Rules with undefined confidence count towards ``count`` and the support mean
    but not the confidence mean.
    """
    floor = None if min_conf is None else as_fraction(min_conf)
    groups: dict[str, list[Metarule]] = {}
    for r in rules:
        if floor is not None and (r.confidence is None or r.confidence < floor):
            continue
        groups.setdefault(r.form, []).append(r)
    stats = {}
    for form in sorted(groups):
        group = groups[form]
        defined = [r.confidence for r in group if r.confidence is not None]
        stats[form] = FormStats(
            count=len(group),
            average_support=Fraction(sum(r.support for r in group), len(group)),
            average_confidence=Fraction(sum(defined)) / len(defined) if defined else None,
            undefined_confidence=len(group) - len(defined),
        )
    return stats
