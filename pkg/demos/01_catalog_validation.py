"""Load a product catalog and relevance judgments, then validate them.

The pipeline consumes two CSV files: a product table keyed by
(product_id, locale) and a judgments table mapping each query to the
products a human labeled for it. Labels use the four-way scheme
Exact / Substitute / Complement / Irrelevant. This demo builds a tiny
pair of files, loads them, and prints the validation report, including
a judgment that points at a product the catalog does not contain.
"""

import csv
import tempfile
from pathlib import Path

from shoprank import Catalog, load_judgments, load_products, validate

work = Path(tempfile.mkdtemp(prefix="shoprank_demo_"))

products_csv = work / "products.csv"
with open(products_csv, "w", newline="") as handle:
    writer = csv.writer(handle)
    writer.writerow(["product_id", "product_locale", "product_title",
                     "product_description", "product_bullet_point",
                     "product_brand", "product_color_name"])
    writer.writerow(["B001", "us", "espresso machine", "<p>15 bar pump</p>",
                     "includes tamper", "Brewzi", "silver"])
    writer.writerow(["B002", "us", "coffee grinder", "", "ceramic burrs", "Brewzi", ""])
    writer.writerow(["B003", "es", "cafetera italiana", "", "", "", "negro"])

judgments_csv = work / "judgments.csv"
with open(judgments_csv, "w", newline="") as handle:
    writer = csv.writer(handle)
    writer.writerow(["query_id", "query", "query_locale", "product_id", "esci_label"])
    writer.writerow(["q1", "espresso maker", "us", "B001", "Exact"])
    writer.writerow(["q1", "espresso maker", "us", "B002", "Complement"])
    writer.writerow(["q1", "espresso maker", "us", "B999", "Substitute"])  # not in catalog
    writer.writerow(["q2", "cafetera", "es", "B003", "Exact"])

products = load_products(products_csv)
queries = load_judgments(judgments_csv)
print(f"loaded {len(products)} products and {len(queries)} queries")

catalog = Catalog(products=products, queries=tuple(queries))
report = validate(catalog)
print()
print(report.to_text())
print()
print("The dangling (q1, B999) pair is reported, not silently dropped;")
print("ranking and export skip it with a warning so one bad row never")
print("sinks a whole batch.")
