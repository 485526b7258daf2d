
_documentation = """
Joint entity and relation extraction: head entities are tagged first, then the tail
entities and relations of every head, both with a hierarchical boundary tagger.
"""

metadata = {
    "name": "headtail",
    "title": "HeadTail",
    "description": "Span-based joint entity and relation extraction toolkit",
    "version": "0.1.0",
    "documentation": _documentation,
    "license": {
        "name": "MIT",
        "url": "https://opensource.org/licenses/MIT",
    },
}
