import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from shapefrag.rdf import IRI
from shapefrag.turtle import parse_turtle

settings.register_profile(
    "default", deadline=None, max_examples=100,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).resolve().parent.parent / "data"
EX = "http://example.org/"

ENDPOINT_ENV = "SHAPEFRAG_SPARQL_ENDPOINT"
UPDATE_ENV = "SHAPEFRAG_SPARQL_UPDATE"


def ex(local: str) -> IRI:
    return IRI(EX + local)


def load(name: str):
    return parse_turtle((DATA / name).read_text(encoding="utf-8"))


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def sparql_endpoint():
    """(query URL, update URL) of a SPARQL 1.1 endpoint with update support.

    An external one is taken from the environment. Otherwise an in-process
    Oxigraph server is started, and the tests skip when pyoxigraph is missing.
    """
    query_url = os.environ.get(ENDPOINT_ENV)
    if query_url:
        update_url = os.environ.get(UPDATE_ENV)
        if not update_url:
            pytest.skip(f"{ENDPOINT_ENV} is set but {UPDATE_ENV} is not, so test data cannot be loaded")
        yield query_url, update_url
        return
    from shapefrag import local_endpoint

    if not local_endpoint.available():
        pytest.skip("no SPARQL endpoint configured and pyoxigraph is not installed")
    with local_endpoint.LocalEndpoint() as ep:
        yield ep.query_url, ep.update_url


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[key])
