"""Deterministic English suffix-stripping stemmer (classic Porter algorithm).

The implementation follows the original 1980 rule tables step by step; within
a step the longest matching suffix wins and, if its condition fails, the step
performs no rewrite. Words of length <= 2 pass through untouched. Output is
stable across runs and platforms, which the golden tests rely on.
"""

from __future__ import annotations

# Irregular forms folded to their base before suffix stripping.
LEMMA_EXCEPTIONS = {
    "bent": "bend",
    "blew": "blow",
    "blown": "blow",
    "broke": "break",
    "broken": "break",
    "built": "build",
    "dealt": "deal",
    "drawn": "draw",
    "drew": "draw",
    "fallen": "fall",
    "fell": "fall",
    "froze": "freeze",
    "frozen": "freeze",
    "gave": "give",
    "given": "give",
    "gone": "go",
    "held": "hold",
    "kept": "keep",
    "lit": "light",
    "lost": "lose",
    "made": "make",
    "meant": "mean",
    "ran": "run",
    "risen": "rise",
    "rose": "rise",
    "shaken": "shake",
    "shook": "shake",
    "swept": "sweep",
    "taken": "take",
    "took": "take",
    "tore": "tear",
    "torn": "tear",
    "went": "go",
    "wore": "wear",
    "worn": "wear",
    "written": "write",
    "wrote": "write",
}

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        # y counts as a vowel when preceded by a consonant
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-consonant sequences in ``stem`` (Porter's m)."""
    shape = []
    for i in range(len(stem)):
        c = _is_consonant(stem, i)
        if not shape or shape[-1] != c:
            shape.append(c)
    return sum(1 for j in range(len(shape) - 1) if not shape[j] and shape[j + 1])


def _contains_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    return (
        _is_consonant(word, len(word) - 3)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 1)
        and word[-1] not in "wxy"
    )


def _rule_step(word: str, rules, min_measure: int) -> str:
    """Apply the longest-suffix rule from ``rules`` whose measure condition holds."""
    for suffix, replacement in rules:
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if _measure(stem) > min_measure:
                return stem + replacement
            return word
    return word


_STEP2 = [
    ("ational", "ate"), ("ization", "ize"), ("iveness", "ive"), ("fulness", "ful"),
    ("ousness", "ous"), ("biliti", "ble"), ("tional", "tion"), ("entli", "ent"),
    ("ousli", "ous"), ("ation", "ate"), ("alism", "al"), ("aliti", "al"),
    ("iviti", "ive"), ("enci", "ence"), ("anci", "ance"), ("izer", "ize"),
    ("abli", "able"), ("alli", "al"), ("ator", "ate"), ("eli", "e"),
]

_STEP3 = [
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
]

_STEP4_SUFFIXES = [
    "ement", "ance", "ence", "able", "ible", "ment", "ion", "ant", "ent",
    "ism", "ate", "iti", "ous", "ive", "ize", "al", "er", "ic", "ou",
]


def porter_stem(word: str) -> str:
    if len(word) <= 2:
        return word

    # Step 1a
    if word.endswith("sses"):
        word = word[:-2]
    elif word.endswith("ies"):
        word = word[:-2]
    elif word.endswith("ss"):
        pass
    elif word.endswith("s"):
        word = word[:-1]

    # Step 1b
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            word = word[:-1]
    else:
        stripped = None
        if word.endswith("ed") and _contains_vowel(word[:-2]):
            stripped = word[:-2]
        elif word.endswith("ing") and _contains_vowel(word[:-3]):
            stripped = word[:-3]
        if stripped is not None:
            word = stripped
            if word.endswith(("at", "bl", "iz")):
                word += "e"
            elif _ends_double_consonant(word) and word[-1] not in "lsz":
                word = word[:-1]
            elif _measure(word) == 1 and _ends_cvc(word):
                word += "e"

    # Step 1c
    if word.endswith("y") and _contains_vowel(word[:-1]):
        word = word[:-1] + "i"

    word = _rule_step(word, _STEP2, 0)
    word = _rule_step(word, _STEP3, 0)

    # Step 4
    for suffix in _STEP4_SUFFIXES:
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if _measure(stem) > 1 and (suffix != "ion" or (stem and stem[-1] in "st")):
                word = stem
            break

    # Step 5a
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            word = stem

    # Step 5b
    if _measure(word) > 1 and _ends_double_consonant(word) and word[-1] == "l":
        word = word[:-1]

    return word
