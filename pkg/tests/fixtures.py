"""Shared deterministic fixtures for the test suite."""

# 20 hypothesis/reference pairs with punctuation, digits, casing, and
# length variety. Plain strings; tests tokenize them as needed.
BLEU_FIXTURE_20 = [
    ("the cat sat on the mat .", "the cat sat on the mat ."),
    ("the cat sat on a mat .", "the cat sat on the mat ."),
    ("a quick brown fox jumps over the lazy dog", "the quick brown fox jumped over the lazy dog"),
    ("he said : hello world !", "she said : hello , world !"),
    ("it rained for 3 days in 1999 .", "it rained for 3 days in 1999 ."),
    ("it rained 3 days .", "it rained for 3 days in 1999 ."),
    ("one two three four five six seven", "one two three four five six seven eight nine"),
    ("completely different tokens here", "nothing matches in this reference sentence"),
    ("the Old Testament was translated first", "the Old Testament was translated first"),
    ("The old testament was Translated First", "the Old Testament was translated first"),
    ("water is flowing down the long river", "water flows down the long river"),
    ("we will go to town today , maybe", "we went to town today"),
    ("short", "a very much longer reference than the hypothesis"),
    ("this is a much longer hypothesis than its tiny reference", "tiny reference"),
    ("numbers like 12,345.67 stay joined", "numbers like 12,345.67 stay joined"),
    ("he speaks the language very well indeed", "she speaks the language well"),
    ("thy word is a lamp unto my feet", "your word is a lamp for my feet"),
    ("repeat repeat repeat repeat", "repeat once only"),
    ("( parenthetical remark ) follows the text", "a parenthetical remark follows the text"),
    ("final sentence of the fixture corpus .", "final sentence of the fixture set ."),
]
