"""Freeze reference BLEU values for the metrics tests.

Scores come from sacrebleu (an independent implementation), so the
package's own scorer is checked against numbers it did not produce.
Run from the repo root:

    python tools/make_bleu_fixture.py
"""

import json
from pathlib import Path

import sacrebleu
from sacrebleu.metrics import BLEU

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "tests" / "fixtures" / "bleu_fixture.json"

GENDER = """SELECT ?lexeme ?qitem ?lemma ?qitemLabel
WHERE
{
  VALUES ?lemma {'Apfel'@de} .
  ?lexeme wikibase:lemma ?lemma ;
          wdt:P5185 ?qitem.
  SERVICE wikibase:label { 
    bd:serviceParam wikibase:language 'en' 
  }
}"""

PAIRS = [
    # (candidate, reference)
    (GENDER, GENDER),
    (GENDER.replace("Apfel", "Birne"), GENDER),
    (GENDER.replace("?qitem", "?gender"), GENDER),
    (GENDER.replace("'en'", "'de'"), GENDER),
    ("SELECT ?lexeme WHERE { ?lexeme wikibase:lemma 'Apfel'@de }", GENDER),
    ("", "ASK WHERE { ?lexeme wdt:P5185 wd:Q499327 }"),
    ("ASK { ?lexeme wdt:P5185 wd:Q499327 }", "ASK WHERE { ?lexeme wdt:P5185 wd:Q499327 }"),
    ("ASK WHERE { ?lexeme wdt:P5185 wd:Q1775415 }", "ASK WHERE { ?lexeme wdt:P5185 wd:Q499327 }"),
    ("SELECT ?lexeme ?lemma WHERE {\n  ?lexeme dct:language wd:Q1860 ;\n          wikibase:lemma ?lemma .\n}\nLIMIT 50",
     "SELECT ?lexeme ?lemma WHERE {\n  ?lexeme dct:language wd:Q1860 ;\n          wikibase:lemma ?lemma .\n}\nLIMIT 5.0"),
    ("SELECT ?lexeme ?lemma WHERE { ?lexeme wikibase:lemma ?lemma . FILTER(regex(STR(?lemma), \"^app\")) } LIMIT 50",
     "SELECT ?lexeme ?lemma WHERE { ?lexeme wikibase:lemma ?lemma . FILTER(regex(STR(?lemma), \"ple$\")) } LIMIT 50"),
    ("SELECT ?lexeme ?lemma WHERE { ?lexeme wikibase:lemma ?lemma } ORDER BY DESC(STRLEN(STR(?lemma))) LIMIT 50",
     "SELECT ?lexeme ?lemma WHERE { ?lexeme wikibase:lemma ?lemma } ORDER BY DESC(STRLEN(STR(?lemma))) LIMIT 50"),
    ("select ?lexeme where { ?lexeme wikibase:lemma ?lemma }", "SELECT ?lexeme WHERE { ?lexeme wikibase:lemma ?lemma }"),
    ("SELECT ?lexeme ?gloss WHERE { ?lexeme ontolex:sense ?sense . ?sense skos:definition ?gloss . FILTER(LANG(?gloss) = 'en') }",
     "SELECT ?lexeme ?gloss WHERE { ?lexeme ontolex:sense ?sense . ?sense skos:definition ?gloss . FILTER(LANG(?gloss) = \"en\") }"),
    ("The answer is <code>SELECT ?x WHERE { ?x ?p ?o }</code>", "SELECT ?x WHERE { ?x ?p ?o }"),
    ("SELECT", "SELECT ?lexeme WHERE { ?lexeme wdt:P5191 ?origin }"),
    ("SELECT ?lexeme ?origin WHERE { ?lexeme wdt:P5191 ?origin . OPTIONAL { ?origin wikibase:lemma ?originLemma } }",
     "SELECT ?lexeme ?origin ?originLemma WHERE { ?lexeme wdt:P5191 ?origin . ?origin wikibase:lemma ?originLemma }"),
    ("SELECT ?form ?ipa WHERE { ?lexeme ontolex:lexicalForm ?form . ?form wdt:P898 ?ipa }",
     "SELECT ?form ?ipa WHERE { ?lexeme ontolex:lexicalForm ?form . ?form wdt:P898 ?ipa . ?form wdt:P2859 ?xsampa }"),
    ("SELECT ?a WHERE { ?a wdt:P5973 ?b . ?b wdt:P5974 ?c . ?c wdt:P5975 ?d . ?d wdt:P5976 ?e }",
     "SELECT ?a WHERE { ?a wdt:P5973 ?b . ?b wdt:P5974 ?c . ?c wdt:P5975 ?d . ?d wdt:P5976 ?e . ?e wdt:P5977 ?f }"),
    ("SELECT ?lexeme WHERE { VALUES ?lemma {'aujourd\\'hui'@fr} . ?lexeme wikibase:lemma ?lemma }",
     "SELECT ?lexeme WHERE { VALUES ?lemma {'aujourd\\'hui'@fr} . ?lexeme wikibase:lemma ?lemma . }"),
    ("SELECT ?lexeme WHERE { VALUES ?lemma {'中国'@zh} . ?lexeme wikibase:lemma ?lemma ; wdt:P5425 ?han }",
     "SELECT ?lexeme ?han WHERE { VALUES ?lemma {'中国'@zh} . ?lexeme wikibase:lemma ?lemma ; wdt:P5425 ?han }"),
]

SUBSETS = {
    "all": list(range(20)),
    "first_five": [0, 1, 2, 3, 4],
    "ask_only": [5, 6, 7],
    "without_empty": [i for i in range(20) if i != 5],
}


def score(indices):
    metric = BLEU(tokenize="13a", smooth_method="exp", effective_order=False)
    cands = [PAIRS[i][0] for i in indices]
    refs = [PAIRS[i][1] for i in indices]
    result = metric.corpus_score(cands, [refs])
    return result, str(metric.get_signature())


def main():
    assert len(PAIRS) == 20
    doc = {"scorer": f"sacrebleu {sacrebleu.__version__}", "pairs": [list(p) for p in PAIRS],
           "corpus": {}, "single": []}
    for name, indices in SUBSETS.items():
        result, signature = score(indices)
        doc["corpus"][name] = {"indices": indices, "score": result.score,
                               "counts": result.counts, "totals": result.totals,
                               "sys_len": result.sys_len, "ref_len": result.ref_len}
        doc["signature"] = signature
    for i in range(len(PAIRS)):
        result, _ = score([i])
        doc["single"].append(result.score)
    OUT.write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
    print(doc["signature"], doc["corpus"]["all"]["score"])


if __name__ == "__main__":
    main()
