import string
from typing import List

PUNCTUATION = frozenset(string.punctuation)


def tokenize(text: str) -> List[str]:
    """
    Lowercase, split on whitespace, and detach leading/trailing punctuation.

    Each detached punctuation character becomes its own token, so
    "Hello, world!" gives ["hello", ",", "world", "!"]. Never yields empty tokens.
    """
    tokens: List[str] = []
    for chunk in text.lower().split():
        start, end = 0, len(chunk)
        while start < end and chunk[start] in PUNCTUATION:
            start += 1
        while end > start and chunk[end - 1] in PUNCTUATION:
            end -= 1
        tokens.extend(chunk[:start])
        if start < end:
            tokens.append(chunk[start:end])
        tokens.extend(chunk[end:])
    return tokens


def detokenize(tokens: List[str]) -> str:
    return " ".join(tokens)
