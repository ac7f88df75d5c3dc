import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lexsparql.kgexec import LocalExecutor, Snapshot, default_snapshot, parse_snapshot  # noqa: E402
from lexsparql.registry import default_registry  # noqa: E402
from lexsparql.templates import default_catalog  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"

# Exact texts below keep their trailing spaces.

# the reference gender query (eleven spaces before wdt:P5185)
GENDER_QUERY = """SELECT ?lexeme ?qitem ?lemma ?qitemLabel
WHERE
{
  VALUES ?lemma {'Apfel'@de} .
  ?lexeme wikibase:lemma ?lemma ;
           wdt:P5185 ?qitem.
  SERVICE wikibase:label { 
    bd:serviceParam wikibase:language 'en' 
  }
}"""

# the same query as used in the reference prompt (ten spaces)
PROMPT_APFEL_QUERY = """SELECT ?lexeme ?qitem ?lemma ?qitemLabel
WHERE
{
  VALUES ?lemma {'Apfel'@de} .
  ?lexeme wikibase:lemma ?lemma ;
          wdt:P5185 ?qitem.
  SERVICE wikibase:label { 
    bd:serviceParam wikibase:language 'en' 
  }
}"""

PROMPT_MEDAILON_QUERY = PROMPT_APFEL_QUERY.replace("'Apfel'@de", "'medailon'@cs")

Q20_QUERY = """SELECT ?etonymLexeme ?qitemLanguageOfOrigin 
       ?etonym ?qitemLanguageOfOriginLabel
WHERE {
  VALUES ?lemma {'color'@en} .
  ?lexeme wikibase:lemma ?lemma ;
          wdt:P5191 ?etonymLexeme.
  ?etonymLexeme dct:language ?qitemOrigin;
                wikibase:lemma ?etonym .
  SERVICE wikibase:label { 
    bd:serviceParam wikibase:language 'en' 
  }
}"""

# German Apfel planted feminine, plus a masculine noun so a non-answer exists
FEMININE_APFEL = """
wd:L1 wikibase:lemma 'Apfel'@de .
wd:L1 dct:language wd:Q188 .
wd:L1 wikibase:lexicalCategory wd:Q1084 .
wd:L1 wdt:P5185 wd:Q1775415 .
wd:L2 wikibase:lemma 'Garten'@de .
wd:L2 dct:language wd:Q188 .
wd:L2 wdt:P5185 wd:Q499327 .
wd:Q188 rdfs:label 'German'@en .
wd:Q1775415 rdfs:label 'feminine'@en .
wd:Q499327 rdfs:label 'masculine'@en .
wd:Q1084 rdfs:label 'noun'@en .
"""


@pytest.fixture(scope="session")
def snapshot() -> Snapshot:
    return default_snapshot()


@pytest.fixture(scope="session")
def executor(snapshot):
    return LocalExecutor(snapshot)


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture
def feminine_apfel():
    return parse_snapshot(FEMININE_APFEL)


@pytest.fixture(scope="session")
def populated(catalog, executor):
    from lexsparql.population import fetch_catalog

    return fetch_catalog(catalog, executor)


@pytest.fixture(scope="session")
def records(catalog, populated):
    from lexsparql.population import build_dataset

    return build_dataset(catalog, populated, seed=0)


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
