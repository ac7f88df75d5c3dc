"""Regenerate the property and multi-property catalog files.

The property family is a grid: every registered property lands in one of
nine archetypes by (attachment, range kind), and each archetype comes in a
single-lexeme, ASK, LIMIT and ORDER BY flavour. Run from the repo root:

    python tools/gen_catalog.py
"""

import csv
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "src" / "lexsparql" / "data"

LABEL_SERVICE = [
    "  SERVICE wikibase:label { ",
    "    bd:serviceParam wikibase:language 'en' ",
    "  }",
]
POP_LABELS = "  SERVICE wikibase:label { bd:serviceParam wikibase:language 'en' }"

ARCHETYPES = {
    ("lexeme", "q_item"): "t1",
    ("lexeme", "lexeme"): "t2",
    ("lexeme", "monolingual_text"): "t3",
    ("sense", "q_item"): "t4",
    ("sense", "sense"): "t5",
    ("sense", "lexeme"): "t6",
    ("form", "q_item"): "t7",
    ("sense", "monolingual_text"): "t8",
    ("form", "string"): "t9",
}

NOUNS = {
    "P5185": "gender",
    "P5186": "conjugation class",
    "P5187": "word stem",
    "P5191": "origin",
    "P5238": "component words",
    "P5402": "homograph",
    "P5526": "valency",
    "P5713": "required grammatical feature",
    "P5911": "paradigm class",
    "P7486": "grammatical aspect",
    "P9970": "predicate target",
    "P5323": "attestation",
    "P6684": "first attestation",
    "P5401": "auxiliary verb",
    "P5978": "classifier",
    "P6084": "usage location",
    "P5831": "usage example",
    "P5923": "created lexeme type",
    "P5976": "false friend",
    "P5973": "synonym",
    "P5974": "antonym",
    "P5975": "troponym",
    "P11577": "equivalent lexeme",
    "P8471": "pertainym",
    "P5425": "Han character",
    "P898": "IPA transcription",
    "P2859": "X-SAMPA code",
    "P5276": "Slavistic phonetic transcription",
    "P7243": "pronunciation",
    "P5972": "translation",
    "P7481": "variety",
    "P6191": "language style",
    "P6571": "collective noun",
    "P5426": "tone class",
}

MULTI_SINGLE = [
    ("P5185", "P5911"),
    ("P5185", "P5191"),
    ("P5186", "P7486"),
    ("P5191", "P5238", "P5920"),
    ("P5185", "P5402", "P8530"),
    ("P5187", "P5911"),
    ("P5526", "P5401", "P7486"),
    ("P5323", "P6684"),
    ("P5185", "P5187", "P5191", "P5911"),
]
MULTI_MULTI = [
    ("P5185", "P5911"),
    ("P5186", "P5401"),
    ("P5191", "P5920"),
    ("P5185", "P5187"),
    ("P7486", "P5526"),
    ("P6684", "P5323", "P5191"),
    ("P5238", "P5923"),
    ("P11577", "P5976", "P5402"),
]
POOL_NOUNS = {"P5920": "root", "P8530": "alternative form"}


def archetype_parts(arch, pid, value):
    """Pattern lines after the lemma line, the projected value variables,
    the answer/label variables for ASK rewriting, and the label service flag.

    ``value`` is the object position: a variable for SELECT, ``{answer}`` for ASK.
    """
    dot = "." if value.startswith("?") else " ."
    if arch == "t1":
        return ["          wdt:%s %s%s" % (pid, value, dot)], "?qitem", "?qitemLabel", True
    if arch == "t2":
        lines = ["          wdt:%s %s%s" % (pid, value, dot)]
        if value.startswith("?"):
            lines.append("  ?otherLexeme wikibase:lemma ?otherLemma.")
        return lines, "?otherLexeme", "?otherLemma", False
    if arch == "t3":
        return ["          wdt:%s %s%s" % (pid, value, dot)], "?stem", "?stem", False
    if arch in ("t4", "t5", "t6", "t8"):
        lines = ["          ontolex:sense ?sense.", "  ?sense wdt:%s %s%s" % (pid, value, dot)]
        if arch == "t4":
            return lines, "?qitem", "?qitemLabel", True
        if arch == "t5":
            if value.startswith("?"):
                lines += ["  ?otherLexeme ontolex:sense ?otherSense ;",
                          "               wikibase:lemma ?otherLemma."]
            return lines, "?otherSense", "?otherLemma", False
        if arch == "t6":
            if value.startswith("?"):
                lines.append("  ?otherLexeme wikibase:lemma ?otherLemma.")
            return lines, "?otherLexeme", "?otherLemma", False
        return lines, "?example", "?example", False
    if arch == "t7":
        lines = ["          ontolex:lexicalForm ?form.",
                 "  ?form wdt:%s %s ;" % (pid, value),
                 "        ontolex:representation ?representation."]
        return lines, "?qitem", "?qitemLabel", True
    lines = ["          ontolex:lexicalForm ?form.",
             "  ?form wdt:%s %s ;" % (pid, value),
             "        ontolex:representation ?representation."]
    return lines, "?transcription", "?transcription", False


SELECT_VARS = {
    "t1": "?lexeme ?qitem ?lemma ?qitemLabel",
    "t2": "?lexeme ?lemma ?otherLexeme ?otherLemma",
    "t3": "?lexeme ?lemma ?stem",
    "t4": "?lexeme ?sense ?lemma ?qitem ?qitemLabel",
    "t5": "?lexeme ?sense ?lemma ?otherSense ?otherLemma",
    "t6": "?lexeme ?sense ?lemma ?otherLexeme ?otherLemma",
    "t7": "?lexeme ?form ?representation ?qitem ?qitemLabel",
    "t8": "?lexeme ?sense ?lemma ?example",
    "t9": "?lexeme ?form ?representation ?transcription",
}
VALUE_VAR = {"t1": "?qitem", "t2": "?otherLexeme", "t3": "?stem", "t4": "?qitem",
             "t5": "?otherSense", "t6": "?otherLexeme", "t7": "?qitem", "t8": "?example",
             "t9": "?transcription"}


def single_body(arch, pid):
    lines, _, _, labels = archetype_parts(arch, pid, VALUE_VAR[arch])
    out = ["SELECT " + SELECT_VARS[arch], "WHERE", "{",
           "  VALUES ?lemma {'{word}'@{code}} .",
           "  ?lexeme wikibase:lemma ?lemma ;"]
    out += lines
    if labels:
        out += LABEL_SERVICE
    out.append("}")
    return out


def ask_body(arch, pid):
    lines, _, _, _ = archetype_parts(arch, pid, "{answer}")
    return ["ASK", "WHERE", "{",
            "  VALUES ?lemma {'{word}'@{code}} .",
            "  ?lexeme wikibase:lemma ?lemma ;"] + lines + ["}"]


def language_body(arch, pid, tail):
    lines, _, _, labels = archetype_parts(arch, pid, VALUE_VAR[arch])
    out = ["SELECT " + SELECT_VARS[arch], "WHERE", "{",
           "  ?lexeme dct:language wd:{language_qid} ;",
           "          wikibase:lemma ?lemma ;"]
    out += lines
    if labels:
        out += LABEL_SERVICE
    out.append("}")
    out.append(tail)
    return out


def value_path(arch, pid):
    """Population pattern lines binding ?value (and ?valueLabel) for ``pid``."""
    if arch in ("t1", "t2", "t3"):
        core = ["  ?lexeme wdt:%s ?value ." % pid]
    elif arch in ("t4", "t5", "t6", "t8"):
        core = ["  ?lexeme ontolex:sense ?sense .", "  ?sense wdt:%s ?value ." % pid]
    else:
        core = ["  ?lexeme ontolex:lexicalForm ?form .", "  ?form wdt:%s ?value ." % pid]
    if arch == "t2" or arch == "t6":
        core.append("  ?value wikibase:lemma ?valueLemma .")
    if arch == "t5":
        core.append("  ?valueLexeme ontolex:sense ?value ;")
        core.append("               wikibase:lemma ?valueLemma .")
    return core


def label_bind(arch):
    if arch in ("t1", "t4", "t7"):
        return "str(?valueLabel)"
    if arch in ("t2", "t5", "t6"):
        return "str(?valueLemma)"
    return "str(?value)"


def lexeme_population(arch, pid, with_value):
    head = "SELECT ?lexeme ?lemma ?language ?languageLabel"
    if with_value:
        head += " ?value"
        head += " ?valueLabel" if arch in ("t1", "t4", "t7") else ""
        head += " ?valueLemma" if arch in ("t2", "t5", "t6") else ""
    out = [head + " WHERE {",
           "  ?lexeme wikibase:lemma ?lemma ;",
           "          dct:language ?language ."]
    out += value_path(arch, pid)
    out.append(POP_LABELS)
    out.append("}")
    return out


def language_population(arch, pid):
    out = ["SELECT DISTINCT ?language ?languageLabel WHERE {",
           "  ?lexeme dct:language ?language ."]
    out += value_path(arch, pid)
    out.append(POP_LABELS)
    out.append("}")
    return out


def candidates_query(arch, pid):
    sel = "SELECT DISTINCT ?answer ?answerLabel WHERE {"
    if arch in ("t1", "t4", "t7"):
        subj = {"t1": "?lexeme", "t4": "?sense", "t7": "?form"}[arch]
        return [sel, "  %s wdt:%s ?answer ." % (subj, pid),
                "  SERVICE wikibase:label { bd:serviceParam wikibase:language 'en' }", "}"]
    if arch in ("t2", "t6"):
        subj = "?lexeme" if arch == "t2" else "?sense"
        return [sel, "  %s wdt:%s ?answer ." % (subj, pid),
                "  ?answer wikibase:lemma ?answerLabel .", "}"]
    if arch == "t5":
        return [sel, "  ?sense wdt:%s ?answer ." % pid,
                "  ?answerLexeme ontolex:sense ?answer ;",
                "                wikibase:lemma ?answerLabel .", "}"]
    subj = {"t3": "?lexeme", "t8": "?sense", "t9": "?form"}[arch]
    return ["SELECT DISTINCT ?answer WHERE {", "  %s wdt:%s ?answer ." % (subj, pid), "}"]


def single_variants(noun):
    return [
        "What is the %s of {word} in {language}?" % noun,
        "{word} %s in {language}" % noun,
        "{word} %s {language}" % noun,
        "What is {word}s %s in {language}?" % noun,
        "What is the %s of '{word}' in {language}?" % noun,
        "Tell me the %s of the {language} word {word}" % noun,
        "Which %s does {word} have in {language}?" % noun,
    ]


def ask_variants(noun):
    return [
        "Is the %s of '{word}' in {language} {answer_label}?" % noun,
        "Is the %s of {word} in {language} {answer_label}?" % noun,
        "Does the {language} word {word} have the %s {answer_label}?" % noun,
        "Is {answer_label} the %s of {word} in {language}?" % noun,
    ]


def limit_variants(noun):
    return [
        "Find at most 50 {language} words with a %s" % noun,
        "List 50 {language} lexemes that have a %s" % noun,
        "Show up to 50 {language} words and their %s" % noun,
        "Give me 50 {language} words with %s information" % noun,
    ]


def order_variants(noun):
    return [
        "List {language} words with a %s in alphabetical order" % noun,
        "Alphabetical list of {language} words and their %s" % noun,
        "Sort {language} lexemes with a %s alphabetically" % noun,
        "Show {language} words with their %s, sorted by lemma" % noun,
    ]


def doc(tid, header, sections):
    out = ["=== " + tid]
    for k, v in header:
        out.append("%s: %s" % (k, v))
    for name, lines in sections:
        out.append("--- " + name)
        out.extend(lines)
    out.append("")
    return "\n".join(out)


LEXEME_BINDS = ["word = str(?lemma)", "code = lang(?lemma)", "language = str(?languageLabel)"]
LANGUAGE_BINDS = ["language_qid = local(?language)", "language = str(?languageLabel)"]


def property_family(rows):
    docs = []
    for row in rows:
        pid = row["pid"]
        arch = ARCHETYPES[(row["attachment"], row["range_kind"])]
        noun = NOUNS[pid]
        tid = "%s_%s" % (arch, pid)
        _, answer_var, label_var, _ = archetype_parts(arch, pid, VALUE_VAR[arch])
        attested = tid == "t1_P5185"
        docs.append(doc(tid, [
            ("paradigm", "property"), ("output", "single"), ("linguality", "mono"),
            ("complexity", "simple"), ("tags", "word:lemma code:language_code language:free_text"),
            ("provenance", "attested" if attested else "reconstructed"),
            ("note", "archetype %s, %s x %s" % (arch, row["attachment"], row["range_kind"])),
        ], [
            ("variants", single_variants(noun)),
            ("sparql", single_body(arch, pid)),
            ("population", lexeme_population(arch, pid, False)),
            ("bind", LEXEME_BINDS),
            ("ask", ["template: ask_" + tid,
                     "utterance: Is the %s of '{word}' in {language} {answer_label}?" % noun,
                     "answer_var: " + answer_var, "label_var: " + label_var]),
            ("ask_candidates", candidates_query(arch, pid)),
        ]))
        docs.append(doc("ask_" + tid, [
            ("paradigm", "property"), ("output", "single"), ("linguality", "mono"),
            ("complexity", "simple"),
            ("tags", "word:lemma code:language_code language:free_text "
                     "answer:property_value answer_label:free_text"),
            ("provenance", "reconstructed"),
            ("note", "ASK adaptation of %s" % tid),
        ], [
            ("variants", ask_variants(noun)),
            ("sparql", ask_body(arch, pid)),
            ("population", lexeme_population(arch, pid, True)),
            ("bind", LEXEME_BINDS + ["answer = term(?value)", "answer_label = " + label_bind(arch)]),
        ]))
        for prefix, tail, variants in (
            ("limit", "LIMIT 50", limit_variants(noun)),
            ("order", "ORDER BY ?lemma", order_variants(noun)),
        ):
            docs.append(doc("%s_%s" % (prefix, tid), [
                ("paradigm", "property"), ("output", "multi"), ("linguality", "mono"),
                ("complexity", "simple"), ("tags", "language_qid:language_qid language:free_text"),
                ("provenance", "reconstructed"),
                ("note", "multi-lexeme adaptation of %s" % tid),
            ], [
                ("variants", variants),
                ("sparql", language_body(arch, pid, tail)),
                ("population", language_population(arch, pid)),
                ("bind", LANGUAGE_BINDS),
            ]))
    return docs


def multi_nouns(pids):
    nouns = [NOUNS.get(p) or POOL_NOUNS[p] for p in pids]
    return ", ".join(nouns[:-1]) + " and " + nouns[-1]


def multi_family():
    docs = []
    for n, pids in enumerate(MULTI_SINGLE, start=1):
        nouns = multi_nouns(pids)
        values = " ".join("?value%d" % i for i in range(1, len(pids) + 1))
        body = ["SELECT ?lexeme ?lemma " + values, "WHERE", "{",
                "  VALUES ?lemma {'{word}'@{code}} .",
                "  ?lexeme wikibase:lemma ?lemma ."]
        body += ["  OPTIONAL { ?lexeme wdt:%s ?value%d . }" % (p, i) for i, p in enumerate(pids, 1)]
        body.append("}")
        pop = ["SELECT ?lexeme ?lemma ?language ?languageLabel WHERE {",
               "  ?lexeme wikibase:lemma ?lemma ;",
               "          dct:language ?language ;",
               "          wdt:%s ?value ." % pids[0],
               POP_LABELS, "}"]
        docs.append(doc("multi_s%d" % n, [
            ("paradigm", "multi_property"), ("output", "single"), ("linguality", "mono"),
            ("complexity", "complex"), ("tags", "word:lemma code:language_code language:free_text"),
            ("provenance", "reconstructed"),
            ("note", "single-lexeme base template with %d properties" % len(pids)),
        ], [
            ("variants", [
                "What are the %s of {word} in {language}?" % nouns,
                "{word} in {language}: %s" % nouns,
                "Give me the %s of the {language} word {word}" % nouns,
                "Show %s for {word} ({language})" % nouns,
            ]),
            ("sparql", body),
            ("population", pop),
            ("bind", LEXEME_BINDS),
        ]))
    for n, pids in enumerate(MULTI_MULTI, start=1):
        nouns = multi_nouns(pids)
        values = " ".join("?value%d" % i for i in range(1, len(pids) + 1))
        body = ["SELECT ?lexeme ?lemma " + values, "WHERE", "{",
                "  ?lexeme dct:language wd:{language_qid} ;",
                "          wikibase:lemma ?lemma ."]
        body += ["  OPTIONAL { ?lexeme wdt:%s ?value%d . }" % (p, i) for i, p in enumerate(pids, 1)]
        body += ["}", "LIMIT 50"]
        pop = ["SELECT DISTINCT ?language ?languageLabel WHERE {",
               "  ?lexeme dct:language ?language ;",
               "          wdt:%s ?value ." % pids[0],
               POP_LABELS, "}"]
        docs.append(doc("multi_m%d" % n, [
            ("paradigm", "multi_property"), ("output", "multi"), ("linguality", "mono"),
            ("complexity", "complex"), ("tags", "language_qid:language_qid language:free_text"),
            ("provenance", "reconstructed"),
            ("note", "multi-lexeme base template with %d properties" % len(pids)),
        ], [
            ("variants", [
                "List 50 {language} words with their %s" % nouns,
                "Show up to 50 {language} lexemes including %s" % nouns,
                "Find at most 50 {language} words and give their %s" % nouns,
            ]),
            ("sparql", body),
            ("population", pop),
            ("bind", LANGUAGE_BINDS),
        ]))
    return docs


def main():
    with open(DATA / "registry.csv", encoding="utf-8") as fh:
        lines = [l for l in fh if l.strip() and not l.startswith("#")]
    rows = list(csv.DictReader(lines))
    head = "# Generated by tools/gen_catalog.py; edit the generator, not this file.\n\n"
    (DATA / "catalog" / "property.tpl").write_text(head + "\n".join(property_family(rows)), encoding="utf-8")
    (DATA / "catalog" / "multi_property.tpl").write_text(head + "\n".join(multi_family()), encoding="utf-8")


if __name__ == "__main__":
    main()
