# Expected BM25 rankings for docs.jsonl, computed directly from the formula
# (k1=1.2, b=0.75, idf = ln(1 + (N - df + 0.5)/(df + 0.5))). ASCII-only
# fixture, so tokens are lowercase [a-z0-9]+ runs.
import json, math, re, pathlib

here = pathlib.Path(__file__).parent
K1, B = 1.2, 0.75

def toks(s):
    return re.findall(r"[a-z0-9]+", s.lower())

docs = [json.loads(l) for l in open(here / "docs.jsonl")]
bags = [toks(d["title"]) + [t for a in d["authors"] for t in toks(a)] for d in docs]
N = len(docs)
avg = sum(len(b) for b in bags) / N

queries = [
    {"title": "Special functions", "authors": ["Andrews, G. E."], "k": 10},
    {"title": "Special functions of mathematical physics", "authors": [], "k": 3},
    {"title": "asymptotics", "authors": ["Olver"], "k": 10},
    {"title": "Handbook of mathematical functions", "authors": ["Abramowitz, Milton", "Stegun, Irene"], "k": 5},
    {"title": "quantum groups", "authors": [], "k": 3},
]

for q in queries:
    terms = set(toks(q["title"])) | {t for a in q["authors"] for t in toks(a)}
    scores = []
    for d, bag in zip(docs, bags):
        s = 0.0
        for t in terms:
            tf = bag.count(t)
            if not tf:
                continue
            df = sum(1 for b in bags if t in b)
            idf = math.log(1 + (N - df + 0.5) / (df + 0.5))
            s += idf * tf * (K1 + 1) / (tf + K1 * (1 - B + B * len(bag) / avg))
        if s > 0:
            scores.append((d["id"], s))
    scores.sort(key=lambda x: (-x[1], x[0]))
    q["expected"] = [[i, s] for i, s in scores[: q["k"]]]

with open(here / "expected.json", "w") as f:
    json.dump(queries, f, indent=1)
    f.write("\n")
