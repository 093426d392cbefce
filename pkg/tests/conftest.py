import pytest

from amparse.demo import (
    demo_costs,
    demo_expected_graph,
    demo_gold_tree,
    demo_lexicon,
)
from amparse.lexicon import augment_closure


@pytest.fixture(scope="session")
def lex():
    return demo_lexicon()


@pytest.fixture(scope="session")
def closed_lex():
    return augment_closure(demo_lexicon())


@pytest.fixture(scope="session")
def gold():
    return demo_gold_tree()


@pytest.fixture()
def costs():
    return demo_costs()


@pytest.fixture(scope="session")
def expected_graph():
    return demo_expected_graph()
