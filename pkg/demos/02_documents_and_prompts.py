"""From raw catalog HTML to a budgeted scoring prompt.

Product descriptions arrive as scraped HTML. The documents module
reduces them to plain text with a small fixed rule set; the prompts
module then renders the scoring input

    Query: {query} Document: {document} Relevant:

and shortens only the document part when the result would blow the
length budget. The budget counts whitespace runs plus a correction for
CJK scripts, standing in for a tokenizer limit of 512 pieces.
"""

from shoprank import (
    LengthBudget,
    Product,
    build_document,
    default_length_fn,
    render,
    strip_html,
)

messy = (
    '<p>The <b>AeroChef</b> fryer cooks with 85% less oil.</p>'
    '<ul><li>6 qt basket</li><li>Touch panel &amp; timer</li></ul>'
    '<script>trackView(1);</script>'
)
print("raw description:")
print(f"  {messy}")
print("cleaned:")
print(f"  {strip_html(messy)}")
print()

product = Product(
    product_id="B77", locale="us",
    title="AeroChef air fryer",
    description=messy,
    bullet_points="easy to clean",
    brand="AeroChef",
    color_name="black",
)
doc = build_document(product)
print("document (title + description + bullets + brand + color):")
print(f"  {doc.text}")
print()

roomy = LengthBudget(max_units=512, length_fn=default_length_fn)
prompt = render("air fryer", doc, roomy, query_id="q1")
print(f"prompt under the default budget (truncated={prompt.truncated}):")
print(f"  {prompt.text}")
print()

tight = LengthBudget(max_units=10, length_fn=default_length_fn)
prompt = render("air fryer", doc, tight, query_id="q1")
print(f"same pair under a 10-unit budget (truncated={prompt.truncated}):")
print(f"  {prompt.text}")
print()
print("Only the document shrank; the query and the template markers are")
print("never cut, so an over-long query is returned intact and flagged.")
