import json

import pytest

from dgamassey import modelfile
from dgamassey.errors import InvalidDifferential, ParseError
from dgamassey.fields import GF
from dgamassey.models import iwasawa, kodaira_thurston

TEXT = """{
  "field": "Q",
  "generators": [{"name": "x", "degree": 1}, {"name": "y", "degree": 1}, {"name": "z", "degree": 1}],
  "differential": {"z": "x*y"},
  "truncation": 3,
  "classes": {"alpha": "x", "beta": "y"}
}
"""


def test_load_and_labels():
    mf = modelfile.loads(TEXT)
    assert mf.model.betti_numbers() == (1, 2, 2, 1)
    assert mf.label("α") == mf.label("alpha") == mf.model.element("x")
    with pytest.raises(KeyError):
        mf.label("gamma")


def test_roundtrip():
    mf = modelfile.loads(TEXT)
    again = modelfile.loads(modelfile.dumps(mf))
    assert again.model == mf.model
    assert again.classes == mf.classes


def test_from_model_roundtrip():
    M = iwasawa(1, 1)
    assert modelfile.loads(modelfile.dumps(modelfile.from_model(M))).model == M


def test_field_override():
    mf = modelfile.loads(TEXT, field=GF(3))
    assert mf.model.field == GF(3)


def test_unknown_key_location():
    text = TEXT.replace('"truncation": 3,', '"truncation": 3,\n  "bogus": 1,')
    with pytest.raises(ParseError) as err:
        modelfile.loads(text)
    assert (err.value.line, err.value.column) == (6, 3)


def test_json_syntax_error():
    with pytest.raises(ParseError) as err:
        modelfile.loads('{"field": "Q",')
    assert err.value.line == 1


def test_bad_polynomial_location():
    text = TEXT.replace('"z": "x*y"', '"z": "x*w"')
    with pytest.raises(ParseError) as err:
        modelfile.loads(text)
    line = text.splitlines()[err.value.line - 1]
    assert line[err.value.column - 1] == "w"


def test_degree_error_unless_unchecked():
    text = TEXT.replace('"z": "x*y"', '"z": "x"')
    with pytest.raises(InvalidDifferential):
        modelfile.loads(text)
    mf = modelfile.loads(text, check=False)
    assert not mf.model.is_valid


def test_bad_field():
    with pytest.raises(ParseError):
        modelfile.loads(TEXT.replace('"Q"', '"F4"'))


def test_dumps_is_json_with_fixed_order():
    data = json.loads(modelfile.dumps(modelfile.from_model(kodaira_thurston())))
    assert list(data) == ["field", "generators", "differential", "truncation", "classes"]
