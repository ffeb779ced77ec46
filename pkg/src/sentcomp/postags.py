"""Coarse part-of-speech tags and mappings from common fine tagsets.

All pattern mining and feature code works over a fixed six-tag coarse set.
Fine tags (Penn treebank, CMU tweet tagger single letters) are folded into
it through a mapping that callers may replace with their own table.
"""

from __future__ import annotations

from .errors import ParseError

COARSE_TAGS: tuple[str, ...] = ("adj", "adv", "det", "noun", "verb", "other")

# Penn treebank prefixes plus the CMU tweet tagger's single-letter codes.
# Already-coarse names map to themselves so coarse input passes through.
DEFAULT_TAG_MAP: dict[str, str] = {
    "adj": "adj", "adv": "adv", "det": "det", "noun": "noun",
    "verb": "verb", "other": "other",
    "jj": "adj", "jjr": "adj", "jjs": "adj",
    "rb": "adv", "rbr": "adv", "rbs": "adv", "wrb": "adv",
    "nn": "noun", "nns": "noun", "nnp": "noun", "nnps": "noun",
    "vb": "verb", "vbd": "verb", "vbg": "verb", "vbn": "verb",
    "vbp": "verb", "vbz": "verb", "md": "verb",
    "dt": "det", "wdt": "det", "pdt": "det",
    "a": "adj", "r": "adv", "n": "noun", "v": "verb", "d": "det",
    "^": "noun", "s": "noun", "z": "noun",
}


def coarsen(tag: str, mapping: dict[str, str] | None = None) -> str:
    """Map a fine tag onto the coarse set; unknown tags become "other"."""
    table = DEFAULT_TAG_MAP if mapping is None else mapping
    return table.get(tag.lower(), "other")


def load_tag_map(path) -> dict[str, str]:
    """Read a two-column TSV of fine-tag -> coarse-tag overrides."""
    table: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(path, line_no, "expected two tab-separated columns")
            fine, coarse = parts[0].strip().lower(), parts[1].strip().lower()
            if coarse not in COARSE_TAGS:
                raise ParseError(path, line_no, f"unknown coarse tag {coarse!r}")
            table[fine] = coarse
    return table
