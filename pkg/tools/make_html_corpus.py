"""Freeze the HTML cleaning corpus fixture.

Fifty product-description snippets in the shapes that show up in real
catalog exports. Expected outputs come from the independent reference
cleaner in html_oracle.py, then get frozen into
tests/fixtures/html_corpus.json. The script also cross-checks the
shipped implementation and exits nonzero on any disagreement so a
divergence gets investigated rather than silently frozen.

Run from the repository root:  python3 tools/make_html_corpus.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from html_oracle import oracle_strip

SNIPPETS = [
    ("plain_paragraph", "<p>Soft cotton crew neck t-shirt for everyday wear.</p>"),
    ("bold_feature", "Premium <b>stainless steel</b> construction"),
    ("bullet_list", "<ul><li>BPA free</li><li>Dishwasher safe</li><li>24 oz capacity</li></ul>"),
    ("br_separated", "Fits most laptops<br>Water resistant<br>Padded straps"),
    ("amp_entity", "Black &amp; Decker cordless drill with charger"),
    ("nbsp_spacing", "King&nbsp;size memory foam mattress"),
    ("apostrophe_charref", "Men&#39;s running shorts with liner"),
    ("quot_entity", "27&quot; curved gaming monitor"),
    ("lt_gt_entities", "Supports temperatures &lt;40C and &gt;5C"),
    ("div_sections", "<div>Package includes:</div><div>1 x charger</div><div>2 x cables</div>"),
    ("nested_inline", "<p>Ultra <strong>lightweight <em>breathable</em></strong> mesh.</p>"),
    ("style_block", "<style>.desc { color: red; }</style>Classic denim jacket"),
    ("script_block", '<script type="text/javascript">trackView(123);</script>Ceramic dinner plate set'),
    ("comment_removed", "<!-- imported from feed -->Solid oak bookshelf with 5 shelves"),
    ("comment_with_tags", "<!-- <b>legacy markup</b> -->Velvet throw pillow cover"),
    ("uppercase_tags", "<P>Galvanized steel watering can</P>"),
    ("mixed_case_tags", "<Div>Holds up to 50 lbs</Div>"),
    ("attributes_dropped", '<p class="description" id="main">Bamboo cutting board</p>'),
    ("anchor_href", 'See our <a href="https://example.com/care">care guide</a> for details'),
    ("img_dropped", '<img src="x.jpg" alt="front view">Leather crossbody bag'),
    ("self_closing_br", "100% cotton<br/>Machine washable"),
    ("table_rows", "<table><tr><td>Size</td> <td>Medium</td></tr><tr><td>Color</td> <td>Navy</td></tr></table>"),
    ("inline_tag_no_space", "Turbo<span>Boost</span> technology"),
    ("heading_tags", "<h2>Key Features</h2>Adjustable height and tilt"),
    ("whitespace_collapse", "Extra   spaces\tand\nnewlines   everywhere"),
    ("leading_trailing_space", "   Trimmed candle gift set   "),
    ("double_escaped_nbsp", "Queen&amp;nbsp;bed frame"),
    ("double_escaped_amp", "Tools &amp;amp; hardware"),
    ("entity_encoded_markup", "&lt;b&gt;Bold claim&lt;/b&gt; verified"),
    ("numeric_hex_charref", "Compact 13&#x22; sleeve"),
    ("degree_charref_kept", "Heats to 400&#176;F quickly"),
    ("trademark_charref_kept", "UltraGrip&#8482; soles"),
    ("unknown_entity_kept", "Fleece &copy; 2021 collection"),
    ("bare_ampersand", "Salt & pepper grinder set"),
    ("literal_less_than", "Weighs < 2 pounds fully loaded"),
    ("accents_passthrough", "Café au lait ceramic mug été"),
    ("cjk_passthrough", "日本製 炊飯器 5.5合"),
    ("list_with_markup", "<ul><li>Includes <b>2</b> filters</li><li>Quiet &lt; 30 dB motor</li></ul>"),
    ("paragraph_runs", "<p>First paragraph.</p><p>Second paragraph.</p>"),
    ("deep_nesting", "<div><div><p>Deeply nested product copy</p></div></div>"),
    ("hr_joins_words", "Solar<hr>Powered"),
    ("entity_mix", "Ben &amp; Jerry&#39;s &quot;limited&quot; edition"),
    ("style_then_entities", "<style>p{}</style>Wool &amp; cashmere blend scarf"),
    ("script_with_string", '<script>var s = "hello";</script>Insulated lunch tote'),
    ("empty_tags_only", "<p></p><div></div>"),
    ("only_whitespace", "   \n\t  "),
    ("no_markup_plain", "Heavy duty extension cord 25 ft"),
    ("full_listing", "<p>The <b>AeroChef</b> air fryer cooks with 85% less oil.</p><ul><li>6 qt basket</li><li>Digital touch panel</li></ul><p>Includes recipe book &amp; rack.</p>"),
    ("spec_table_mix", "<div>Dimensions</div><table><tr><td>W</td> <td>60 cm</td></tr></table><div>Weight 12 kg</div>"),
    ("marketing_with_breaks", "NEW!<br>Limited stock<br><br>Ships in 24 hours"),
]


def main() -> int:
    assert len(SNIPPETS) == 50, len(SNIPPETS)
    assert len({name for name, _ in SNIPPETS}) == 50

    cases = [
        {"name": name, "html": html, "text": oracle_strip(html)}
        for name, html in SNIPPETS
    ]

    from shoprank.documents import strip_html

    disagreements = 0
    for case in cases:
        got = strip_html(case["html"])
        if got != case["text"]:
            disagreements += 1
            print(f"DISAGREE {case['name']}")
            print(f"  oracle:         {case['text']!r}")
            print(f"  implementation: {got!r}")
    if disagreements:
        print(f"{disagreements} disagreement(s); fixture not written")
        return 1

    out = Path(__file__).parent.parent / "tests" / "fixtures" / "html_corpus.json"
    out.write_text(json.dumps(cases, ensure_ascii=False, indent=2) + "\n",
                   encoding="utf-8")
    print(f"wrote {out} ({len(cases)} cases)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
