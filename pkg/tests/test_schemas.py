import json
from importlib.resources import files

import jsonschema
import pytest

from gmcocycle import cli, suite
from gmcocycle.chains import realize


def _schema(name):
    return json.loads(files("gmcocycle").joinpath("schemas", name).read_text())


@pytest.mark.parametrize("name", ["kelement.json", "rays.json", "stellar_instance.json",
                                  "gammas.json", "matrix.json", "suite_report.json"])
def test_schemas_are_valid(name):
    jsonschema.Draft202012Validator.check_schema(_schema(name))


def test_outputs_match_schemas():
    e = realize([(1, 2), (0, 1)])
    jsonschema.validate(e.to_json(), _schema("kelement.json"))
    rep = suite.run_suite(suite.RunConfig(seed=1), only={"sullivan_denominator", "fundamental_class"})
    jsonschema.validate(json.loads(suite.dumps(rep)), _schema("suite_report.json"))
    code, text, _ = cli.run(["theta", "--gammas", "[[[0,-1],[1,0]]]", "--json"])
    jsonschema.validate(json.loads(text)["element"], _schema("kelement.json"))


def test_inputs_match_schemas():
    jsonschema.validate([[1, 0], [0, 1]], _schema("rays.json"))
    jsonschema.validate({"gammas": [[[0, -1], [1, 0]]]}, _schema("gammas.json"))
    jsonschema.validate([[1, -1]], _schema("matrix.json"))
    jsonschema.validate({"base": [[1, 0], [0, 1]], "r": 2, "m": [1, 1]}, _schema("stellar_instance.json"))
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"base": [[1, 0]], "r": 1, "m": [1]}, _schema("stellar_instance.json"))
