"""Template-driven text-to-SPARQL datasets over lexicographic knowledge graphs.

Modules, bottom up:

- ``registry``: lexicographic properties, categories and languages
- ``templates``: the template catalog and rendering
- ``sparqlcheck``: tokenizer and structural granularity checks
- ``kgexec``: local evaluator, remote client and mock endpoint
- ``population``: fetching tag bindings and materializing records
- ``dataset``: records, train/test split, exports and few-shot prompts
- ``metrics``: pass@k, granularity and corpus BLEU
- ``generalize``: yes/no rewrites and shape hold-outs
- ``cli``: the ``lexsparql`` command
"""

__version__ = "0.1.0"
