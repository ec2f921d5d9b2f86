"""Local bilingual dictionary index for per-token relevant-terms panels.

The source file is UTF-8 TSV with a required header row and columns
headword / language / gloss / notes. Lookup ranks exact headword
matches over headword prefixes over headword substrings over gloss
substrings; within a tier shorter headwords come first, then
lexicographic order. Matching folds case for Latin letters only, so
syllabary text matches by exact codepoint.
"""

from dataclasses import dataclass

DEFAULT_LIMIT = 15

_TIER_EXACT, _TIER_PREFIX, _TIER_SUBSTRING, _TIER_GLOSS = range(4)


@dataclass(frozen=True)
class DictEntry:
    headword: str
    language: str
    gloss: str
    notes: str = ""

    def __post_init__(self):
        if not self.headword:
            raise ValueError("headword must be non-empty")


def _fold(text: str) -> str:
    return "".join(c.lower() if c.isascii() else c for c in text)


class DictionaryIndex:
    """Immutable after construction; lookups are side-effect free."""

    def __init__(self, entries):
        self.entries = list(entries)
        self._prepared = [
            (_fold(e.headword), _fold(e.gloss), order, e)
            for order, e in enumerate(self.entries)
        ]

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, token: str, limit: int = DEFAULT_LIMIT) -> list[DictEntry]:
        if limit < 1:
            raise ValueError("limit must be >= 1")
        query = _fold(token)
        if not query:
            return []
        ranked = []
        for head, gloss, order, entry in self._prepared:
            if head == query:
                tier = _TIER_EXACT
            elif head.startswith(query):
                tier = _TIER_PREFIX
            elif query in head:
                tier = _TIER_SUBSTRING
            elif query in gloss:
                tier = _TIER_GLOSS
            else:
                continue
            ranked.append((tier, len(entry.headword), entry.headword, entry.gloss, order, entry))
        ranked.sort(key=lambda item: item[:5])
        return [entry for *_, entry in ranked[:limit]]


def build_index(entries) -> DictionaryIndex:
    return DictionaryIndex(entries)


def load_dictionary_tsv(path) -> list[DictEntry]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        columns = header.split("\t")
        if [c.strip().lower() for c in columns[:4]] != ["headword", "language", "gloss", "notes"]:
            raise ValueError(f"{path}: expected header 'headword\\tlanguage\\tgloss\\tnotes'")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) < 3:
                raise ValueError(f"{path}:{lineno}: expected at least 3 columns")
            notes = fields[3] if len(fields) > 3 else ""
            entries.append(DictEntry(fields[0], fields[1], fields[2], notes))
    return entries
