import pytest
from hypothesis import given

from helpers import EX1, EX1_TEXT, tiny_instances
from sdtp.io import InstanceFormatError, parse, read_instance, serialize, write_instance


def test_parse_ex1():
    assert parse(EX1_TEXT) == EX1


def test_comments_and_line_order_are_free():
    text = "c hello\np sdtp 2 1 2\nd 2 1 9 12\nc mid\nd 1 2 0 2 8 10\na 2 1 5\n"
    assert parse(text) == EX1


def test_file_round_trip(tmp_path):
    path = tmp_path / "ex1.sdtp"
    write_instance(EX1, path, comments=["fixture"])
    back = read_instance(path)
    assert back == EX1
    assert back.name == "ex1"
    assert path.read_text().startswith("c fixture\n")


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("a 1 2 3\n", "before problem line"),
        ("p sdtp 2 0 0\np sdtp 2 0 0\n", "duplicate problem line"),
        ("p sdtp 2 0 1\nd 1 2 0 1\n", "interval count"),
        ("p sdtp 2 0 2\nd 1 1 0 1\nd 1 1 3 4\n", "duplicate d line"),
        ("p sdtp 2 0 1\nd 3 1 0 1\n", "out of range"),
        ("p sdtp 2 1 0\na 1 2 x\n", "non-integer"),
        ("p stp 2 0 0\n", "expected 'p sdtp"),
    ],
)
def test_malformed_input(text, fragment):
    with pytest.raises(InstanceFormatError, match=fragment):
        parse(text)


@given(tiny_instances())
def test_serialize_round_trip(inst):
    assert parse(serialize(inst)) == inst
