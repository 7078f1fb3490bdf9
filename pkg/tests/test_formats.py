import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conceptrec import AssociationRule, FormalContext, MiningParams, ParseError, informative_basis, recommend_all
from conceptrec import formats
from conceptrec.errors import InvalidInputError

from tests.conftest import TOY_FIRMS, TOY_PHRASES
from tests.test_context import contexts

DATA = "tests/data/toy_kft.csv"


def _parse(fn, text, **kw):
    return fn(io.StringIO(text), "in.txt", **kw)


def _write(fn, ctx):
    buf = io.StringIO()
    fn(ctx, buf)
    return buf.getvalue()


class TestCsvPairs:
    def test_toy_file(self, toy):
        ctx = formats.read_context(DATA)
        assert ctx.n_incidences == 15
        assert ctx.object_labels == tuple(TOY_FIRMS)
        assert ctx.same_relation(toy)

    def test_header_only(self):
        ctx = _parse(formats.parse_csv_pairs, "object,attribute\n")
        assert (ctx.n_objects, ctx.n_attributes) == (0, 0)

    def test_duplicates_collapse(self):
        dup = _parse(formats.parse_csv_pairs, "object,attribute\na,x\na,x\nb,y\n")
        assert dup == _parse(formats.parse_csv_pairs, "object,attribute\na,x\nb,y\n")

    def test_quoting(self):
        ctx = _parse(formats.parse_csv_pairs, 'object,attribute\n"acme, inc","ink ""jet"""\n')
        assert ctx.labelled_pairs() == {("acme, inc", 'ink "jet"')}
        assert _parse(formats.parse_csv_pairs, _write(formats.write_csv_pairs, ctx)) == ctx

    def test_normalization(self):
        text = "object,attribute\n F1 , Cheap  Hotel\nf1,cheap  hotel\n"
        assert _parse(formats.parse_csv_pairs, text).n_incidences == 2
        assert _parse(formats.parse_csv_pairs, text, normalize_labels=True).labelled_pairs() == {
            ("f1", "cheap  hotel")
        }

    @pytest.mark.parametrize("text,line", [
        ("", 1), ("firm,term\na,b\n", 1), ("object,attribute\na,b\nc\n", 3),
        ("object,attribute\na,b,c\n", 2), ("object,attribute\n,b\n", 2), ("object,attribute\na, \n", 2),
    ])
    def test_errors_name_file_and_line(self, text, line):
        with pytest.raises(ParseError) as err:
            _parse(formats.parse_csv_pairs, text)
        assert err.value.line == line
        assert str(err.value).startswith(f"in.txt:{line}:")


class TestCxt:
    EXAMPLE = "B\n\n2\n2\n\nf1\nf2\na\nb\nX.\n.X\n"

    def test_identity_relation(self):
        ctx = _parse(formats.parse_cxt, self.EXAMPLE)
        assert ctx.rows == ((0,), (1,))
        assert ctx.object_labels == ("f1", "f2") and ctx.attribute_labels == ("a", "b")
        assert _write(formats.write_cxt, ctx) == self.EXAMPLE

    def test_toy_roundtrip(self, toy):
        assert _parse(formats.parse_cxt, _write(formats.write_cxt, toy)) == toy

    def test_missing_trailing_newline(self):
        assert _parse(formats.parse_cxt, self.EXAMPLE.rstrip("\n")).rows == ((0,), (1,))

    @pytest.mark.parametrize("text,line", [
        ("A\n\n2\n2\n\nf1\nf2\na\nb\nX.\n.X\n", 1),
        ("B\n\n2\n2\n\nf1\nf2\na\nb\nX\n.X\n", 10),
        ("B\n\n2\n2\n\nf1\nf2\na\nb\nX.\n.Q\n", 11),
        ("B\n\nzwei\n2\n\n", 3),
        ("B\n\n2\n2\n\nf1\nf2\na\nb\nX.\n", 11),
        ("B\n\n2\n2\n\nf1\nf2\na\nb\nX.\n.X\nextra\n", 12),
        ("B\n\n2\n2\n\nf1\nf1\na\nb\nX.\n.X\n", None),
    ])
    def test_errors(self, text, line):
        with pytest.raises(ParseError) as err:
            _parse(formats.parse_cxt, text)
        assert err.value.line == line


class TestFimi:
    def test_basic(self):
        ctx = _parse(formats.parse_fimi, "0 2\n1\n")
        assert (ctx.n_objects, ctx.n_attributes, ctx.n_incidences) == (2, 3, 3)
        assert ctx.object_labels == ("1", "2")

    def test_empty_line_is_empty_row(self):
        ctx = _parse(formats.parse_fimi, "3\n\n3 7\n")
        assert ctx.rows == ((0,), (), (0, 1))
        assert ctx.attribute_labels == ("3", "7")

    def test_toy_as_ids(self, toy):
        ctx = _parse(formats.parse_fimi, _write(formats.write_fimi, toy))
        assert ctx.rows == toy.rows

    def test_bad_token(self):
        with pytest.raises(ParseError) as err:
            _parse(formats.parse_fimi, "1 2\n3 x\n")
        assert err.value.line == 2


@settings(max_examples=100, deadline=None)
@given(contexts(9, 9))
def test_cxt_property_roundtrip(ctx):
    text = _write(formats.write_cxt, ctx)
    assert _parse(formats.parse_cxt, text) == ctx
    assert _write(formats.write_cxt, _parse(formats.parse_cxt, text)) == text


@settings(max_examples=100, deadline=None)
@given(contexts(9, 9))
def test_csv_and_fimi_property_roundtrip(ctx):
    parsed = _parse(formats.parse_csv_pairs, _write(formats.write_csv_pairs, ctx))
    assert parsed.labelled_pairs() == ctx.labelled_pairs()
    assert _parse(formats.parse_csv_pairs, _write(formats.write_csv_pairs, parsed)) == parsed
    fimi = _parse(formats.parse_fimi, _write(formats.write_fimi, ctx))
    assert [tuple(int(fimi.attribute_labels[a]) for a in r) for r in fimi.rows] == list(ctx.rows)


def test_detect_format():
    assert formats.detect_format("a.cxt") == "cxt"
    assert formats.detect_format("retail.dat") == "fimi"
    assert formats.detect_format("pairs.csv") == "csv"


class TestRules:
    @pytest.fixture
    def rules(self, toy):
        return informative_basis(toy, MiningParams(2, 0.6))

    def test_csv_schema(self, toy, rules):
        lines = _write(lambda c, s: formats.write_rules_csv(c, rules, s), toy).splitlines()
        assert lines[0] == "antecedent,consequent,support,confidence"
        assert lines[1] == '"calling distance long","calling distance long plan",2,0.6667'

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_roundtrip_is_exact(self, toy, rules, fmt):
        if fmt == "csv":
            text = _write(lambda c, s: formats.write_rules_csv(c, rules, s), toy)
        else:
            text = json.dumps({"rules": formats.rules_to_json(toy, rules)})
        back = formats.read_rules(io.StringIO(text), toy, "rules", fmt)
        assert back == rules

    def test_rounded_confidence_kept_when_context_disagrees(self, toy):
        text = 'antecedent,consequent,support,confidence\n"calling distance long","cheap distance long",5,0.3333\n'
        (rule,) = formats.read_rules(io.StringIO(text), toy, "r.csv")
        assert rule.confidence == Fraction(3333, 10000)

    @pytest.mark.parametrize("text,line", [
        ("a,b\n", 1),
        ('antecedent,consequent,support,confidence\n"x","cheap distance long",2,1\n', 2),
        ('antecedent,consequent,support,confidence\n"call distance long","",2,1\n', 2),
        ('antecedent,consequent,support,confidence\n"call distance long","cheap distance long",two,1\n', 2),
    ])
    def test_errors(self, toy, text, line):
        with pytest.raises(ParseError) as err:
            formats.read_rules(io.StringIO(text), toy, "r.csv")
        assert err.value.line == line

    def test_separator_in_label(self):
        ctx = FormalContext.from_rows(["f"], ["a;b", "c"], [[0, 1]])
        rule = AssociationRule((1,), (0,), 1, Fraction(1))
        with pytest.raises(InvalidInputError):
            formats.write_rules_csv(ctx, [rule], io.StringIO())


def test_recommendations_csv(toy):
    recs = [r for rs in recommend_all(toy, informative_basis(toy, MiningParams(2, 0.6))).values() for r in rs]
    lines = _write(lambda c, s: formats.write_recommendations_csv(c, recs, s), toy).splitlines()
    assert lines[0] == "firm,item,score,support_rules,rule_support"
    assert f"f3,{TOY_PHRASES[1]},0.6667,1,2" in lines


def test_context_stats(toy):
    assert formats.context_stats(toy) == {
        "objects": 5, "attributes": 5, "incidences": 15, "density": 0.6,
        "min_object_degree": 2, "max_object_degree": 4, "min_attribute_degree": 2, "max_attribute_degree": 4,
    }
