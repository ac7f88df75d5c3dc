"""Build the packaged desk-scale lexeme snapshot.

The data is hand-curated and small: about a hundred lexemes over eleven
languages, enough that every catalog template populates and every
property has at least two distinct values. Item ids for languages,
lexical categories and grammatical features are the real Wikidata ones;
items in the Q9000000 range are local stand-ins. Run from the repo root:

    python tools/build_snapshot.py
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from lexsparql.kgexec.snapshot import Snapshot  # noqa: E402
from lexsparql.kgexec.terms import PREFIXES, RDF_TYPE, RDFS_LABEL, RdfTerm, wd  # noqa: E402

ONTOLEX = PREFIXES["ontolex"]
WIKIBASE = PREFIXES["wikibase"]
WDT = PREFIXES["wdt"]

LANGUAGES = {
    "de": ("Q188", "German"), "en": ("Q1860", "English"), "fr": ("Q150", "French"),
    "cs": ("Q9056", "Czech"), "es": ("Q1321", "Spanish"), "eu": ("Q8752", "Basque"),
    "sv": ("Q9027", "Swedish"), "zh": ("Q7850", "Chinese"), "ja": ("Q5287", "Japanese"),
    "ru": ("Q7737", "Russian"), "la": ("Q397", "Latin"), "pl": ("Q809", "Polish"),
    "ko": ("Q9176", "Korean"), "vi": ("Q9199", "Vietnamese"),
}

REAL_ITEMS = {
    "noun": "Q1084", "verb": "Q24905", "adjective": "Q34698", "abbreviation": "Q102786",
    "adverb": "Q380057", "onomatopoeia": "Q170239",
    "masculine": "Q499327", "feminine": "Q1775415", "neuter": "Q1775461",
    "singular": "Q110786", "plural": "Q146786", "past tense": "Q1994301",
    "American English": "Q7976", "British English": "Q7979",
    "United Kingdom": "Q145", "United States": "Q30", "lion": "Q140",
    "Austria": "Q40", "Spain": "Q29", "Belgium": "Q31",
}

LOCAL_ITEMS = [
    "interjection", "suffix", "proper noun", "numeral",
    "strong verb", "weak verb", "irregular verb", "-ar verb", "-er verb",
    "intransitive verb", "transitive verb",
    "imperfective aspect", "perfective aspect",
    "German strong noun declension", "German mixed noun declension", "Czech hard masculine paradigm",
    "Oxford English Dictionary", "Deutsches Wörterbuch",
    "13th century", "8th century",
    "marriage", "eating",
    "colloquialism", "neutral register", "slang",
    "goose", "first tone", "second tone", "fourth tone",
    "Austrian German", "Belgian French", "European Spanish", "wolf", "fish",
    "Dictionnaire de l'Académie française", "12th century", "Russian first declension",
    "accent 1", "heiban", "falling tone",
]


class Builder:
    def __init__(self):
        self.triples = set()
        self.items = {}
        self.next_lexeme = 1
        self.forms = {}
        self.senses = {}
        for code, (qid, label) in LANGUAGES.items():
            self.items[label] = qid
        self.items.update(REAL_ITEMS)
        for n, name in enumerate(LOCAL_ITEMS, start=1):
            self.items[name] = "Q%d" % (9000000 + n)
        for name, qid in self.items.items():
            self.add(wd(qid), RDFS_LABEL, RdfTerm.literal(name, language="en"))

    def add(self, s, p, o):
        if isinstance(p, str):
            p = RdfTerm.iri(p)
        self.triples.add((s, p, o))

    def item(self, name):
        return wd(self.items[name])

    def lexeme(self, lemma, code, category, forms=(), senses=(), **claims):
        lid = "L%d" % self.next_lexeme
        self.next_lexeme += 1
        node = wd(lid)
        self.add(node, RDF_TYPE, RdfTerm.iri(ONTOLEX + "LexicalEntry"))
        self.add(node, WIKIBASE + "lemma", RdfTerm.literal(lemma, language=code))
        self.add(node, PREFIXES["dct"] + "language", wd(LANGUAGES[code][0]))
        self.add(node, WIKIBASE + "lexicalCategory", self.item(category))
        for n, form in enumerate(forms, start=1):
            rep, features = form[0], form[1]
            extra = form[2] if len(form) > 2 else {}
            fnode = wd("%s-F%d" % (lid, n))
            self.add(node, ONTOLEX + "lexicalForm", fnode)
            self.add(fnode, RDF_TYPE, RdfTerm.iri(ONTOLEX + "Form"))
            self.add(fnode, ONTOLEX + "representation", RdfTerm.literal(rep, language=code))
            for feat in features:
                self.add(fnode, WIKIBASE + "grammaticalFeature", self.item(feat))
            for pid, value in extra.items():
                self.claim(fnode, pid, value)
        for n, gloss in enumerate(senses, start=1):
            snode = wd("%s-S%d" % (lid, n))
            self.add(node, ONTOLEX + "sense", snode)
            self.add(snode, RDF_TYPE, RdfTerm.iri(ONTOLEX + "LexicalSense"))
            self.add(snode, PREFIXES["skos"] + "definition", RdfTerm.literal(gloss, language="en"))
        for pid, value in claims.items():
            self.claim(node, pid, value)
        return lid

    def claim(self, subject, pid, value):
        if isinstance(subject, str):
            subject = wd(subject)
        values = value if isinstance(value, list) else [value]
        for v in values:
            self.add(subject, WDT + pid, self.value(v))

    def value(self, v):
        if isinstance(v, RdfTerm):
            return v
        if isinstance(v, tuple):  # (text, language) monolingual text
            return RdfTerm.literal(v[0], language=v[1])
        if v in self.items:
            return self.item(v)
        if v.startswith("L"):
            return wd(v)
        return RdfTerm.literal(v)

    def sense_claim(self, lid, n, pid, value):
        self.claim("%s-S%d" % (lid, n), pid, value)

    def snapshot(self):
        return Snapshot(self.triples)


def lexicon(b):
    L = {}

    def lex(key, *args, **kwargs):
        L[key] = b.lexeme(*args, **kwargs)
        return L[key]

    # --- German ------------------------------------------------------------
    lex("Apfel", "Apfel", "de", "noun",
        forms=[("Apfel", ["singular"], {"P898": "ˈapfl̩", "P2859": "\"apf@l", "P7243": "Apfel"}),
               ("Äpfel", ["plural"], {"P898": "ˈɛpfl̩", "P2859": "\"Epf@l"})],
        senses=["round fruit of the apple tree"],
        P5185="masculine", P5911="German strong noun declension", P5187=("Apfel", "de"),
        P5323="Deutsches Wörterbuch", P6684="8th century")
    lex("Probekörper", "Probekörper", "de", "noun",
        forms=[("Probekörper", ["singular"], {"P898": "ˈpʁoːbəˌkœʁpɐ"})],
        senses=["test specimen"], P5185="neuter", P5911="German strong noun declension")
    lex("See_m", "See", "de", "noun", forms=[("See", ["singular"], {"P2859": "ze:"})],
        senses=["lake"], P5185="masculine")
    lex("See_f", "See", "de", "noun", forms=[("See", ["singular"])],
        senses=["sea"], P5185="feminine")
    lex("Haus", "Haus", "de", "noun",
        forms=[("Haus", ["singular"], {"P898": "haʊ̯s", "P2859": "haUs"}),
               ("Häuser", ["plural"], {"P898": "ˈhɔɪ̯zɐ", "P2859": "\"hOYz6"})],
        senses=["building for living in"], P5185="neuter", P5911="German mixed noun declension",
        P5187=("Haus", "de"))
    lex("Kind", "Kind", "de", "noun", forms=[("Kind", ["singular"]), ("Kinder", ["plural"])],
        senses=["young human being"], P5185="neuter")
    lex("Garten", "Garten", "de", "noun", forms=[("Garten", ["singular"])],
        senses=["plot of cultivated land"], P5185="masculine")
    lex("Kindergarten", "Kindergarten", "de", "noun", senses=["preschool"],
        P5185="masculine")
    lex("Gift", "Gift", "de", "noun", senses=["poison"], P5185="neuter")
    lex("Buch", "Buch", "de", "noun", forms=[("Buch", ["singular"]), ("Bücher", ["plural"])],
        senses=["bound written work"], P5185="neuter")
    lex("Eltern", "Eltern", "de", "noun", senses=["mother and father"], P5713="plural")
    lex("Obst", "Obst", "de", "noun", senses=["fruit collectively"], P5185="neuter",
        P5713="singular")
    lex("Bulle", "Bulle", "de", "noun", senses=["police officer"], P5185="masculine")
    lex("sein", "sein", "de", "verb", forms=[("war", ["past tense"])], senses=["to be"],
        P5186="irregular verb", P5526="intransitive verb", P5187=("sei", "de"))
    lex("haben", "haben", "de", "verb", forms=[("hatte", ["past tense"])], senses=["to have"],
        P5186="weak verb", P5526="transitive verb", P5187=("hab", "de"))
    lex("gehen", "gehen", "de", "verb", forms=[("ging", ["past tense"])], senses=["to walk"],
        P5186="strong verb", P5526="intransitive verb", P5187=("geh", "de"))
    lex("essen", "essen", "de", "verb", forms=[("aß", ["past tense"])], senses=["to eat"],
        P5186="strong verb", P5526="transitive verb")
    lex("schnell", "schnell", "de", "adjective", senses=["moving quickly"])
    lex("rasch", "rasch", "de", "adjective", senses=["happening quickly"])
    lex("wau", "wau", "de", "interjection", senses=["sound a dog makes"], P31="onomatopoeia")
    lex("miau_de", "miau", "de", "interjection", senses=["sound a cat makes"], P31="onomatopoeia")
    lex("-heit", "-heit", "de", "suffix", senses=["forms abstract nouns"], P5923="noun")

    # --- English -----------------------------------------------------------
    lex("color", "color", "en", "noun",
        forms=[("color", ["singular"], {"P898": "ˈkʌlɚ", "P7243": "color"}),
               ("colors", ["plural"], {"P898": "ˈkʌlɚz"})],
        senses=["visual property of objects"],
        P7481="American English", P5323="Oxford English Dictionary", P6684="13th century")
    lex("colour", "colour", "en", "noun", forms=[("colour", ["singular"]), ("colours", ["plural"])],
        senses=["visual property of objects"], P7481="British English")
    lex("colorful", "colorful", "en", "adjective", senses=["having bright colors"])
    lex("apple", "apple", "en", "noun",
        forms=[("apple", ["singular"], {"P898": "ˈæpəl"}), ("apples", ["plural"], {"P898": "ˈæpəlz"})],
        senses=["round fruit of the apple tree"], P5323="Oxford English Dictionary",
        P6684="8th century")
    lex("sauce", "sauce", "en", "noun", forms=[("sauce", ["singular"]), ("sauces", ["plural"])],
        senses=["liquid served with food"])
    lex("applesauce", "applesauce", "en", "noun", senses=["puree of apples"])
    lex("sun", "sun", "en", "noun", senses=["star at the centre of the solar system"])
    lex("flower", "flower", "en", "noun", senses=["reproductive part of a plant"])
    lex("sunflower", "sunflower", "en", "noun", senses=["tall plant with large yellow flowers"])
    lex("house", "house", "en", "noun",
        forms=[("house", ["singular"], {"P898": "haʊs"}), ("houses", ["plural"], {"P898": "ˈhaʊzɪz"})],
        senses=["building for living in"])
    lex("book", "book", "en", "noun", forms=[("book", ["singular"]), ("books", ["plural"])],
        senses=["bound written work"])
    lex("go", "go", "en", "verb",
        forms=[("go", [], {"P898": "ɡoʊ"}), ("went", ["past tense"], {"P898": "wɛnt"})],
        senses=["to move from one place to another"], P5186="irregular verb",
        P5526="intransitive verb")
    lex("walk", "walk", "en", "verb", forms=[("walk", []), ("walked", ["past tense"])],
        senses=["to move on foot"], P5186="weak verb")
    lex("eat", "eat", "en", "verb", forms=[("eat", []), ("ate", ["past tense"])],
        senses=["to consume food"], P5526="transitive verb")
    lex("run", "run", "en", "verb", forms=[("run", []), ("ran", ["past tense"])],
        senses=["to move quickly on foot"])
    lex("sprint", "sprint", "en", "verb", senses=["to run at top speed"])
    lex("jog", "jog", "en", "verb", senses=["to run at a slow pace"])
    lex("speak", "speak", "en", "verb", senses=["to communicate with the voice"])
    lex("whisper", "whisper", "en", "verb", senses=["to speak softly"])
    lex("marry", "marry", "en", "verb", senses=["to take as a spouse"])
    lex("dine", "dine", "en", "verb", senses=["to eat a meal"])
    lex("big", "big", "en", "adjective", senses=["of great size"])
    lex("large", "large", "en", "adjective", senses=["of considerable size"])
    lex("small", "small", "en", "adjective", senses=["of little size"])
    lex("fast", "fast", "en", "adjective", senses=["moving with speed"])
    lex("quick", "quick", "en", "adjective", senses=["done with speed"])
    lex("slow", "slow", "en", "adjective", senses=["taking a long time"])
    lex("gift", "gift", "en", "noun", forms=[("gift", ["singular"]), ("gifts", ["plural"])],
        senses=["something given"])
    lex("embarrassed", "embarrassed", "en", "adjective", senses=["feeling awkward"])
    lex("kid", "kid", "en", "noun", forms=[("kid", ["singular"]), ("kids", ["plural"])],
        senses=["child"])
    lex("child", "child", "en", "noun", forms=[("child", ["singular"]), ("children", ["plural"])],
        senses=["young human being"])
    lex("cop", "cop", "en", "noun", senses=["police officer"])
    lex("pride", "pride", "en", "noun", senses=["group of lions"])
    lex("gaggle", "gaggle", "en", "noun", senses=["group of geese"])
    lex("lift", "lift", "en", "noun", senses=["cabin moving between floors"])
    lex("elevator", "elevator", "en", "noun", senses=["cabin moving between floors"])
    lex("gray", "gray", "en", "adjective", senses=["between black and white"])
    lex("grey", "grey", "en", "adjective", senses=["between black and white"])
    lex("music", "music", "en", "noun", senses=["art of organised sound"])
    lex("musical", "musical", "en", "adjective", senses=["relating to music"])
    lex("scissors", "scissors", "en", "noun", senses=["cutting tool with two blades"],
        P5713="plural")
    lex("CPR", "CPR", "en", "abbreviation", senses=["cardiopulmonary resuscitation"])
    lex("ICU", "ICU", "en", "abbreviation", senses=["intensive care unit"])
    lex("GI", "GI", "en", "abbreviation", senses=["government issue, a soldier"])
    lex("woof", "woof", "en", "interjection", senses=["sound a dog makes"], P31="onomatopoeia")
    lex("meow", "meow", "en", "interjection", senses=["sound a cat makes"], P31="onomatopoeia")
    lex("-ness", "-ness", "en", "suffix", senses=["forms nouns of state"], P5923="noun",
        P31="suffix")
    lex("-ly", "-ly", "en", "suffix", senses=["forms adverbs"], P5923="adverb")

    # --- French ------------------------------------------------------------
    lex("livre_m", "livre", "fr", "noun", forms=[("livre", ["singular"], {"P898": "livʁ"})],
        senses=["book"], P5185="masculine")
    lex("livre_f", "livre", "fr", "noun", forms=[("livre", ["singular"])],
        senses=["pound, unit of weight"], P5185="feminine")
    lex("pomme", "pomme", "fr", "noun", forms=[("pomme", ["singular"], {"P898": "pɔm"})],
        senses=["apple"], P5185="feminine")
    lex("maison", "maison", "fr", "noun", senses=["house"], P5185="feminine")
    lex("cigare", "cigare", "fr", "noun", senses=["rolled tobacco leaves"], P5185="masculine")
    lex("grand", "grand", "fr", "adjective",
        forms=[("grand", ["masculine"]), ("grande", ["feminine"])], senses=["big"])
    lex("aujourd'hui", "aujourd'hui", "fr", "adverb",
        forms=[("aujourd'hui", [], {"P898": "oʒuʁdɥi"})], senses=["today"])
    lex("aller", "aller", "fr", "verb", senses=["to go"], P5186="irregular verb")
    lex("être", "être", "fr", "verb", senses=["to be"], P5186="irregular verb")
    lex("manger", "manger", "fr", "verb", senses=["to eat"], P5186="-er verb")
    lex("avoir", "avoir", "fr", "verb", senses=["to have"], P5186="irregular verb")

    # --- Czech ---------------------------------------------------------------
    lex("medailon", "medailon", "cs", "noun",
        forms=[("medailon", ["singular"], {"P5276": "medajlon", "P898": "ˈmɛdajlon"})],
        senses=["medallion"], P5185="masculine", P5911="Czech hard masculine paradigm")
    lex("kniha", "kniha", "cs", "noun",
        forms=[("kniha", ["singular"], {"P5276": "kɲiɦa"}), ("knihy", ["plural"])],
        senses=["book"], P5185="feminine")
    lex("dělat", "dělat", "cs", "verb", senses=["to do"], P7486="imperfective aspect")
    lex("udělat", "udělat", "cs", "verb", senses=["to do, completed"], P7486="perfective aspect")

    # --- Spanish -------------------------------------------------------------
    lex("manzana", "manzana", "es", "noun",
        forms=[("manzana", ["singular"], {"P898": "manˈθana"}), ("manzanas", ["plural"])],
        senses=["apple"], P5185="feminine")
    lex("libro", "libro", "es", "noun", senses=["book"], P5185="masculine")
    lex("cigarro", "cigarro", "es", "noun", senses=["cigar"], P5185="masculine")
    lex("embarazada", "embarazada", "es", "adjective", senses=["pregnant"])
    lex("bueno", "bueno", "es", "adjective",
        forms=[("bueno", ["masculine"]), ("buena", ["feminine"])], senses=["good"])
    lex("hablar", "hablar", "es", "verb", senses=["to speak"], P5186="-ar verb")
    lex("comer", "comer", "es", "verb", senses=["to eat"], P5186="-er verb")

    # --- Basque, Swedish, Latin ----------------------------------------------
    lex("sagar", "sagar", "eu", "noun", forms=[("sagar", [], {"P898": "saɣar"})], senses=["apple"])
    lex("etxe", "etxe", "eu", "noun", senses=["house"])
    lex("äpple", "äpple", "sv", "noun", forms=[("äpple", ["singular"], {"P7243": "äpple"})],
        senses=["apple"], P5185="neuter")
    lex("bok", "bok", "sv", "noun", senses=["book"], P5185="feminine")
    lex("color_la", "color", "la", "noun", senses=["colour, hue"], P5185="masculine")
    lex("musica", "musica", "la", "noun", senses=["music"], P5185="feminine")

    # --- Chinese, Japanese ---------------------------------------------------
    lex("中", "中", "zh", "noun", senses=["middle"])
    lex("国", "国", "zh", "noun", forms=[("国", [], {"P5426": "second tone", "P7243": "guó"})],
        senses=["country"])
    lex("中国", "中国", "zh", "proper noun", senses=["China"])
    lex("本_zh", "本", "zh", "noun", forms=[("本", [], {"P5426": "first tone"})],
        senses=["classifier for books"])
    lex("只", "只", "zh", "noun", forms=[("只", [], {"P5426": "first tone"})],
        senses=["classifier for animals"])
    lex("书", "书", "zh", "noun", forms=[("书", [], {"P5426": "first tone", "P7243": "shū"})],
        senses=["book"])
    lex("猫", "猫", "zh", "noun", forms=[("猫", [], {"P5426": "first tone"})], senses=["cat"])
    lex("日", "日", "ja", "noun", senses=["sun, day"])
    lex("本_ja", "本", "ja", "noun", senses=["origin, book"])
    lex("日本", "日本", "ja", "proper noun",
        forms=[("日本", [], {"P898": "ɲihoɴ", "P7243": "にほん"})], senses=["Japan"])

    # --- Russian -------------------------------------------------------------
    lex("читать", "читать", "ru", "verb", senses=["to read"], P7486="imperfective aspect")
    lex("прочитать", "прочитать", "ru", "verb", senses=["to read through"],
        P7486="perfective aspect")
    lex("книга", "книга", "ru", "noun",
        forms=[("книга", ["singular"], {"P5276": "kn'iga"})], senses=["book"], P5185="feminine")
    return L


def relations(b, L):
    lex_claim = b.claim

    def sense(key, n=1):
        return "%s-S%d" % (L[key], n)

    # derived from, combines, homographs, auxiliaries, false friends
    lex_claim(L["color"], "P5191", L["color_la"])
    lex_claim(L["colour"], "P5191", L["color_la"])
    lex_claim(L["colorful"], "P5191", L["color"])
    lex_claim(L["cigare"], "P5191", L["cigarro"])
    lex_claim(L["musical"], "P5191", L["music"])
    lex_claim(L["Kindergarten"], "P5238", [L["Kind"], L["Garten"]])
    lex_claim(L["applesauce"], "P5238", [L["apple"], L["sauce"]])
    lex_claim(L["sunflower"], "P5238", [L["sun"], L["flower"]])
    lex_claim(L["See_m"], "P5402", L["See_f"])
    lex_claim(L["See_f"], "P5402", L["See_m"])
    lex_claim(L["livre_m"], "P5402", L["livre_f"])
    lex_claim(L["livre_f"], "P5402", L["livre_m"])
    lex_claim(L["gehen"], "P5401", L["sein"])
    lex_claim(L["essen"], "P5401", L["haben"])
    lex_claim(L["aller"], "P5401", L["être"])
    lex_claim(L["manger"], "P5401", L["avoir"])
    lex_claim(L["Gift"], "P5976", L["gift"])
    lex_claim(L["gift"], "P5976", L["Gift"])
    lex_claim(L["embarazada"], "P5976", L["embarrassed"])
    lex_claim(L["gray"], "P11577", L["grey"])
    lex_claim(L["grey"], "P11577", L["gray"])
    lex_claim(L["中国"], "P5425", [L["中"], L["国"]])
    lex_claim(L["日本"], "P5425", [L["日"], L["本_ja"]])
    # pool properties used by the multi-property templates
    lex_claim(L["colorful"], "P5920", L["color"])
    lex_claim(L["Kindergarten"], "P5920", L["Kind"])
    lex_claim(L["gray"], "P8530", L["grey"])
    lex_claim(L["colour"], "P8530", L["color"])

    # sense-level relations
    pairs = [("big", "large"), ("fast", "quick"), ("schnell", "rasch")]
    for a, c in pairs:
        lex_claim(sense(a), "P5973", sense(c))
        lex_claim(sense(c), "P5973", sense(a))
    lex_claim(sense("big"), "P5974", sense("small"))
    lex_claim(sense("small"), "P5974", sense("big"))
    lex_claim(sense("fast"), "P5974", sense("slow"))
    lex_claim(sense("slow"), "P5974", sense("fast"))
    lex_claim(sense("sprint"), "P5975", sense("run"))
    lex_claim(sense("jog"), "P5975", sense("run"))
    lex_claim(sense("whisper"), "P5975", sense("speak"))
    lex_claim(sense("colorful"), "P8471", sense("color"))
    lex_claim(sense("musical"), "P8471", sense("music"))
    lex_claim(sense("书"), "P5978", L["本_zh"])
    lex_claim(sense("猫"), "P5978", L["只"])
    lex_claim(sense("marry"), "P9970", "marriage")
    lex_claim(sense("dine"), "P9970", "eating")
    lex_claim(sense("lift"), "P6084", "United Kingdom")
    lex_claim(sense("elevator"), "P6084", "United States")
    lex_claim(sense("kid"), "P6191", "colloquialism")
    lex_claim(sense("child"), "P6191", "neutral register")
    lex_claim(sense("cop"), "P6191", "slang")
    lex_claim(sense("Bulle"), "P6191", "slang")
    lex_claim(sense("pride"), "P6571", "lion")
    lex_claim(sense("gaggle"), "P6571", "goose")
    lex_claim(sense("apple"), "P5831", ("She ate an apple.", "en"))
    lex_claim(sense("color"), "P5831", ("What color is the sky?", "en"))
    lex_claim(sense("Apfel"), "P5831", ("Der Apfel ist rot.", "de"))

    # translations, symmetric
    groups = [
        ["Apfel", "apple", "pomme", "manzana", "sagar", "äpple"],
        ["Haus", "house", "maison", "etxe"],
        ["Buch", "book", "livre_m", "libro", "kniha", "bok", "книга"],
        ["medailon"],
        ["color", "color_la"],
        ["music", "musica"],
    ]
    for group in groups:
        for a in group:
            for c in group:
                if a != c:
                    lex_claim(sense(a), "P5972", sense(c))


def supplement(b, L):
    """Extra lexemes so that every template has rows in at least three languages."""

    def lex(key, *args, **kwargs):
        L[key] = b.lexeme(*args, **kwargs)
        return L[key]

    def sense(key, n=1):
        return "%s-S%d" % (L[key], n)

    # regional varieties and where a sense is used
    lex("Paradeiser", "Paradeiser", "de", "noun", senses=["tomato"], P7481="Austrian German",
        P5185="masculine")
    lex("septante", "septante", "fr", "numeral", senses=["seventy"], P7481="Belgian French")
    lex("ordenador", "ordenador", "es", "noun", senses=["computer"], P7481="European Spanish",
        P5185="masculine")
    b.claim(sense("Paradeiser"), "P6084", "Austria")
    b.claim(sense("septante"), "P6084", "Belgium")
    b.claim(sense("ordenador"), "P6084", "Spain")
    # spelling variants
    lex("Photographie", "Photographie", "de", "noun", senses=["photograph"], P5185="feminine")
    lex("Fotografie", "Fotografie", "de", "noun", senses=["photograph"], P5185="feminine")
    lex("clé", "clé", "fr", "noun", senses=["key"], P5185="feminine")
    lex("clef", "clef", "fr", "noun", senses=["key"], P5185="feminine")
    for a, c in (("Photographie", "Fotografie"), ("clé", "clef")):
        b.claim(L[a], "P11577", L[c])
        b.claim(L[c], "P11577", L[a])
    # stems
    b.claim(L["walk"], "P5187", ("walk", "en"))
    b.claim(L["manger"], "P5187", ("mang", "fr"))
    # collective nouns, predicates, antonyms, troponyms, pertainyms
    lex("Rudel", "Rudel", "de", "noun", senses=["pack of animals"], P5185="neuter")
    lex("meute", "meute", "fr", "noun", senses=["pack of hounds"], P5185="feminine")
    lex("banc", "banc", "fr", "noun", senses=["school of fish"], P5185="masculine")
    b.claim(sense("Rudel"), "P6571", "wolf")
    b.claim(sense("meute"), "P6571", "wolf")
    b.claim(sense("banc"), "P6571", "fish")
    lex("heiraten", "heiraten", "de", "verb", senses=["to marry"], P5526="transitive verb")
    lex("épouser", "épouser", "fr", "verb", senses=["to marry"], P5526="transitive verb")
    b.claim(sense("heiraten"), "P9970", "marriage")
    b.claim(sense("épouser"), "P9970", "marriage")
    lex("langsam", "langsam", "de", "adjective", senses=["not fast"])
    lex("petit", "petit", "fr", "adjective",
        forms=[("petit", ["masculine"]), ("petite", ["feminine"])], senses=["small"])
    for a, c in (("schnell", "langsam"), ("grand", "petit")):
        b.claim(sense(a), "P5974", sense(c))
        b.claim(sense(c), "P5974", sense(a))
    lex("sprechen", "sprechen", "de", "verb", senses=["to speak"], P5186="strong verb")
    lex("flüstern", "flüstern", "de", "verb", senses=["to speak softly"])
    lex("parler", "parler", "fr", "verb", senses=["to speak"], P5186="-er verb")
    lex("chuchoter", "chuchoter", "fr", "verb", senses=["to speak softly"])
    b.claim(sense("flüstern"), "P5975", sense("sprechen"))
    b.claim(sense("chuchoter"), "P5975", sense("parler"))
    lex("Farbe", "Farbe", "de", "noun", senses=["colour"], P5185="feminine")
    lex("farbig", "farbig", "de", "adjective", senses=["coloured"])
    lex("musique", "musique", "fr", "noun", senses=["music"], P5185="feminine")
    lex("musical_fr", "musical", "fr", "adjective", senses=["relating to music"])
    lex("solar", "solar", "en", "adjective", senses=["relating to the sun"])
    b.claim(sense("farbig"), "P8471", sense("Farbe"))
    b.claim(sense("musical_fr"), "P8471", sense("musique"))
    b.claim(sense("solar"), "P8471", sense("sun"))
    lex("commencer", "commencer", "fr", "verb", senses=["to begin"])
    lex("débuter", "débuter", "fr", "verb", senses=["to start"])
    b.claim(sense("commencer"), "P5973", sense("débuter"))
    b.claim(sense("débuter"), "P5973", sense("commencer"))
    # classifiers, tones, Han characters
    lex("권", "권", "ko", "noun", senses=["classifier for books"])
    lex("책", "책", "ko", "noun", senses=["book"])
    lex("con", "con", "vi", "noun", forms=[("con", [], {"P5426": "falling tone"})],
        senses=["classifier for animals"])
    lex("mèo", "mèo", "vi", "noun", forms=[("mèo", [], {"P5426": "falling tone"})], senses=["cat"])
    lex("匹", "匹", "ja", "noun", senses=["classifier for small animals"])
    lex("猫_ja", "猫", "ja", "noun", forms=[("猫", [], {"P5426": "heiban"})], senses=["cat"])
    lex("anden", "anden", "sv", "noun", forms=[("anden", [], {"P5426": "accent 1"})],
        senses=["the duck"], P5185="feminine")
    b.claim(sense("책"), "P5978", L["권"])
    b.claim(sense("mèo"), "P5978", L["con"])
    b.claim(sense("猫_ja"), "P5978", L["匹"])
    lex("중국", "중국", "ko", "proper noun", senses=["China"])
    b.claim(L["중국"], "P5425", [L["中"], L["国"]])
    # transcriptions
    b.claim("%s-F1" % L["apple"], "P2859", "{p@l")
    b.claim("%s-F1" % L["pomme"], "P2859", "pOm")
    lex("książka", "książka", "pl", "noun",
        forms=[("książka", ["singular"], {"P5276": "kśõška"})], senses=["book"], P5185="feminine")
    lex("czytać", "czytać", "pl", "verb", senses=["to read"], P7486="imperfective aspect")
    lex("przeczytać", "przeczytać", "pl", "verb", senses=["to read through"],
        P7486="perfective aspect")
    # usage examples, attestations, valency, number, paradigms, affixes
    b.claim(sense("pomme"), "P5831", ("Je mange une pomme.", "fr"))
    b.claim(sense("house"), "P5831", ("They live in a small house.", "en"))
    b.claim(L["pomme"], "P5323", "Dictionnaire de l'Académie française")
    b.claim(L["pomme"], "P6684", "12th century")
    b.claim(L["manger"], "P5526", "transitive verb")
    lex("ciseaux", "ciseaux", "fr", "noun", senses=["scissors"], P5713="plural", P5185="masculine")
    b.claim(L["книга"], "P5911", "Russian first declension")
    lex("-ment", "-ment", "fr", "suffix", senses=["forms adverbs"], P5923="adverb")
    # etymology, compounds, auxiliaries, homographs, registers
    lex("fenestra", "fenestra", "la", "noun", senses=["window"], P5185="feminine")
    lex("Fenster", "Fenster", "de", "noun", senses=["window"], P5185="neuter", P5191=L["fenestra"])
    lex("sunny", "sunny", "en", "adjective", senses=["full of sunshine"], P5191=L["sun"])
    lex("mos", "mos", "sv", "noun", senses=["mash"])
    lex("äppelmos", "äppelmos", "sv", "noun", senses=["apple sauce"], P5238=[L["äpple"], L["mos"]])
    lex("haber", "haber", "es", "verb", senses=["to have, auxiliary"], P5186="-er verb")
    b.claim(L["comer"], "P5401", L["haber"])
    lex("bass_fish", "bass", "en", "noun", senses=["kind of fish"])
    lex("bass_music", "bass", "en", "noun", senses=["low musical range"])
    b.claim(L["bass_fish"], "P5402", L["bass_music"])
    b.claim(L["bass_music"], "P5402", L["bass_fish"])
    lex("bouquin", "bouquin", "fr", "noun", senses=["book, informal"], P5185="masculine")
    b.claim(sense("bouquin"), "P6191", "colloquialism")
    # onomatopoeia
    lex("miaou", "miaou", "fr", "interjection", senses=["sound a cat makes"], P31="onomatopoeia")
    lex("ワンワン", "ワンワン", "ja", "interjection", senses=["sound a dog makes"], P31="onomatopoeia")


def main():
    b = Builder()
    L = lexicon(b)
    relations(b, L)
    supplement(b, L)
    snap = b.snapshot()
    out = ROOT / "src" / "lexsparql" / "data" / "snapshot.txt"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("# Desk-scale lexeme snapshot, generated by tools/build_snapshot.py.\n")
        fh.write("# Items Q9000001 and up are local stand-ins, not Wikidata items.\n")
        snap.dump(fh)
    print("%d lexemes, %d triples -> %s" % (b.next_lexeme - 1, len(snap), out))


if __name__ == "__main__":
    main()
