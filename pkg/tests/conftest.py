from pathlib import Path

import pytest

from skylattice import Relation

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def housing() -> Relation:
    return Relation.load_csv(DATA / "housing.csv", criteria=["P", "E", "C", "V"])
