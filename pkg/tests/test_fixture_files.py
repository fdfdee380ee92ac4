from pathlib import Path

import pytest

from finmode import fixtures
from finmode.classifier import Beltrami, NonSolution, PlanarQ, classify_euler
from finmode.field import parse, serialize

DIR = Path(__file__).resolve().parent.parent / "fixtures"

FILES = {
    "abc.json": (fixtures.abc(), Beltrami),
    "tetrahedron.json": (fixtures.tetrahedron(), None),
    "perturbed.json": (fixtures.perturbed_abc(), NonSolution),
    "planar_q.json": (fixtures.planar_q((1, 2, 2), [0, 1]), PlanarQ),
}


@pytest.mark.parametrize("name", sorted(FILES))
def test_fixture_file_matches_constructor(name):
    text = (DIR / name).read_text()
    built, family = FILES[name]
    assert text == serialize(built)
    f = parse(text)
    if family is not None:
        assert isinstance(classify_euler(f), family)
