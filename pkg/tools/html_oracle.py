"""Reference HTML cleaner built on the stdlib tokenizer.

Implements the same documented rule set as shoprank.documents.strip_html
but through html.parser.HTMLParser instead of a hand-rolled scanner, so
the two can check each other on corpus snippets. Deliberately imports
nothing from shoprank.

Scope: well-formed snippets. The stdlib tokenizer differs from the
pinned scanner on pathological inputs (semicolon-less entities, '>'
inside attribute values, processing instructions, self-closing script
tags), so corpus snippets must avoid those; malformed-markup behavior
is covered by hand-written unit tests instead.
"""

from __future__ import annotations

from html.parser import HTMLParser

BLOCK_TAGS = frozenset({"p", "br", "li", "div", "tr"})
DROP_CONTENT_TAGS = frozenset({"script", "style"})
NAMED_ENTITIES = {"amp": "&", "lt": "<", "gt": ">", "quot": '"', "nbsp": " "}


class _Cleaner(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=False)
        self.parts: list[str] = []
        self._skip_until: str | None = None

    def _emit(self, text: str) -> None:
        if self._skip_until is None:
            self.parts.append(text)

    def handle_starttag(self, tag, attrs):
        if self._skip_until is None and tag in DROP_CONTENT_TAGS:
            self._skip_until = tag
            return
        if tag in BLOCK_TAGS:
            self._emit(" ")

    def handle_endtag(self, tag):
        if self._skip_until is not None:
            if tag == self._skip_until:
                self._skip_until = None
            return
        if tag in BLOCK_TAGS:
            self._emit(" ")

    def handle_startendtag(self, tag, attrs):
        if tag in BLOCK_TAGS:
            self._emit(" ")

    def handle_data(self, data):
        self._emit(data)

    def handle_entityref(self, name):
        decoded = NAMED_ENTITIES.get(name.lower())
        self._emit(decoded if decoded is not None else f"&{name};")

    def handle_charref(self, name):
        codepoint = int(name[1:], 16) if name[0] in "xX" else int(name)
        if 0x20 <= codepoint <= 0x7E:
            self._emit(chr(codepoint))
        else:
            self._emit(f"&#{name};")

    def handle_comment(self, data):
        pass

    def handle_decl(self, decl):
        pass


def _clean_once(raw: str) -> str:
    cleaner = _Cleaner()
    cleaner.feed(raw)
    cleaner.close()
    return " ".join("".join(cleaner.parts).split())


def oracle_strip(raw: str, max_passes: int = 10) -> str:
    """Apply the rule set until the text stops changing."""
    prev = raw
    for _ in range(max_passes):
        cur = _clean_once(prev)
        if cur == prev:
            return cur
        prev = cur
    raise RuntimeError(f"no fixpoint after {max_passes} passes: {raw!r}")
