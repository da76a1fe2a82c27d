# 20 labeled pairs with a known confusion matrix under tree.json
# (title < 0.5 and author < 0.5 -> match):
#   15 positives whose preprint is an exact copy            -> tp
#    3 positives whose preprint got an unrelated title      -> fn
#    2 negatives whose preprint nearly copies its zb record -> fp
import json, pathlib

here = pathlib.Path(__file__).parent
syll = ["ka", "lo", "mi", "nu", "pe", "ri", "so", "ta", "vu", "ze"]
words = iter(a + b + c for a in syll for b in syll for c in syll)
def title(n=5):
    return " ".join(next(words) for _ in range(n)).capitalize()

zb, ax, pairs = [], [], []
def zrec(i, t, authors, doi):
    return {"zbl_id": f"{1100 + i:04d}.{10000 + i:05d}", "title": t, "authors": authors,
            "msc_codes": ["33C05"], "year": 1990 + i, "doi": doi}

for i in range(20):
    fam = next(words).capitalize()
    authors = [f"{fam}, {next(words).capitalize()}"]
    t = title()
    z = zrec(i, t, authors, f"10.4242/z{i}" if i < 18 else None)
    zb.append(z)
    aid = f"2001.{i:05d}"
    if i < 15:
        ax.append({"arxiv_id": aid, "title": t, "authors": authors, "year": z["year"], "doi": z["doi"]})
        pairs.append({"zbl_id": z["zbl_id"], "arxiv_id": aid, "label": True})
    elif i < 18:
        ax.append({"arxiv_id": aid, "title": title(), "authors": authors, "year": z["year"], "doi": z["doi"]})
        pairs.append({"zbl_id": z["zbl_id"], "arxiv_id": aid, "label": True})
    else:
        near = t.split(" ")
        near[-1] = next(words)
        ax.append({"arxiv_id": aid, "title": " ".join(near), "authors": authors, "year": z["year"] + 1,
                   "doi": f"10.9999/x{i}"})
        pairs.append({"zbl_id": z["zbl_id"], "arxiv_id": aid, "label": False})

tree = {"magic": "zblinks-decision-tree", "version": 1,
        "params": {"max_depth": 5, "min_leaf": 2, "seed": 42},
        "nodes": [{"leaf": False, "feature": 0, "threshold": 0.5, "left": 1, "right": 4},
                  {"leaf": False, "feature": 1, "threshold": 0.5, "left": 2, "right": 3},
                  {"leaf": True, "label": True},
                  {"leaf": True, "label": False},
                  {"leaf": True, "label": False}]}

def dump(name, rows):
    with open(here / name, "w") as f:
        for r in rows:
            f.write(json.dumps(r) + "\n")
dump("zb.jsonl", zb); dump("arxiv.jsonl", ax); dump("pairs.jsonl", pairs)
json.dump(tree, open(here / "tree.json", "w"), indent=1)
