import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURES
from symdyn import enumerate_language, golden_mean, make_shift, sft
from symdyn.docio import DocumentError, dump_shift_spec, load_shift_spec, parse_shift_spec
from symdyn.words import Membership

GOOD = sorted(p for p in FIXTURES.glob("*.yaml") if p.stem != "broken_family")


@pytest.mark.parametrize("path", GOOD, ids=lambda p: p.stem)
@pytest.mark.parametrize("fmt", ["yaml", "json"])
def test_fixtures_round_trip(path, fmt):
    spec = load_shift_spec(path)
    text = dump_shift_spec(spec, fmt)
    again = parse_shift_spec(text)
    assert again == spec
    assert dump_shift_spec(again, fmt) == text


def test_octal_looking_words_stay_text():
    spec = parse_shift_spec("family: sft\nalphabet: '01'\nforbidden: [0110, 11]\n")
    s = make_shift(spec)
    assert s.contains((0, 1, 1, 0)) is Membership.OUT
    assert s.contains((0, 1, 0)) is Membership.IN
    assert enumerate_language(s, 4).count == 8


def test_alphabet_string_splits_into_letters():
    s = make_shift(parse_shift_spec("family: sft\nalphabet: 012\nforbidden: ['00']\n"))
    assert s.alphabet.size == 3


def test_golden_fixture_is_the_golden_mean():
    assert make_shift(load_shift_spec(FIXTURES / "golden.yaml")) is golden_mean()


def test_broken_document_names_line_and_field():
    with pytest.raises(DocumentError) as e:
        load_shift_spec(FIXTURES / "broken_family.yaml")
    assert e.value.line == 3 and e.value.field == "forbidden"
    assert str(e.value).startswith(f"{FIXTURES / 'broken_family.yaml'}:3:")


@pytest.mark.parametrize(
    "text, line, field",
    [
        ("family: sft\nalphabet: '01'\nforbidden:\n  - '11'\n  - '2'\n", 5, "forbidden"),
        ("family: nope\n", 1, "family"),
        ("family: factor\nbase: {family: full, alphabet: 2}\nradius: x\ntable: {}\n", 3, "radius"),
        ("family: sft\nalphabet: '01'\nforbidden: [[\n", None, None),
    ],
)
def test_error_locations(text, line, field):
    with pytest.raises(DocumentError) as e:
        parse_shift_spec(text, "doc.yaml")
    if line is not None:
        assert (e.value.line, e.value.field) == (line, field)
    assert str(e.value).startswith("doc.yaml:")


def test_top_level_must_be_a_mapping():
    with pytest.raises(DocumentError):
        parse_shift_spec("- 1\n- 2\n")


@given(st.lists(st.text("01", min_size=1, max_size=5), min_size=1, max_size=4, unique=True))
def test_random_sft_documents_round_trip(forbidden):
    spec = sft("01", forbidden).spec
    for fmt in ("yaml", "json"):
        assert parse_shift_spec(dump_shift_spec(spec, fmt)) == spec
