#!/usr/bin/env python3
"""Regenerate the bundled toy dataset under data/synthetic.

Six small taxonomies, twenty requirements, expert-style labels, a concept
corpus and a word-vector file, all drawn from one fixed seed so the output is
stable across runs and machines.
"""

import json
import random
import sys
from pathlib import Path

SEED = 20240611

THEMES = {
    "signal": ["signal", "lamp", "light", "aspect", "indicator", "beacon", "lantern", "semaphore"],
    "sign": ["sign", "marking", "symbol", "plate", "board", "arrow", "post", "panel"],
    "crossing": ["crossing", "barrier", "gate", "boom", "bell", "warning", "pedestrian", "level"],
    "track": ["track", "rail", "sleeper", "ballast", "switch", "turnout", "gauge", "fastening"],
    "bridge": ["bridge", "span", "pier", "abutment", "deck", "girder", "arch", "culvert"],
    "tunnel": ["tunnel", "portal", "lining", "shaft", "ventilation", "drainage", "escape", "bore"],
    "power": ["power", "cable", "catenary", "transformer", "substation", "voltage", "conductor", "insulator"],
    "vehicle": ["vehicle", "train", "locomotive", "wagon", "coach", "brake", "axle", "wheel"],
    "station": ["station", "platform", "shelter", "canopy", "ramp", "stair", "lift", "seat"],
    "safety": ["safety", "fence", "guard", "railing", "hazard", "protection", "inspection", "maintenance"],
    "road": ["road", "lane", "carriageway", "shoulder", "kerb", "pavement", "junction", "roundabout"],
}
FILLER = ["the", "a", "of", "and", "for", "with", "on", "at", "in", "to", "is", "are", "be", "by"]
ADJECTIVES = ["visible", "safe", "clear", "separate", "appropriate", "available", "general", "special"]

# (id, node count, depth); depth 1 is a flat list.
SPACES = [("OS_A", 20, 3), ("OS_B", 28, 1), ("OS_C", 36, 2), ("OS_D", 44, 4), ("OS_E", 52, 2), ("OS_F", 60, 3)]


def phrase(rng, nouns, n):
    return " ".join(rng.sample(nouns, n))


def make_taxonomy(rng, space_id, size, depth):
    themes = rng.sample(sorted(THEMES), k=min(len(THEMES), max(3, size // 6)))
    nodes = []
    prefix = space_id[-1]

    def new_node(parent, theme):
        nouns = THEMES[theme]
        head = rng.choice(nouns)
        name = f"{theme.capitalize()} {head}" if head != theme else theme.capitalize()
        desc_words = rng.sample(nouns, rng.randint(1, 3))
        description = f"{rng.choice(ADJECTIVES).capitalize()} {' and '.join(desc_words)}"
        synonyms = [rng.choice(nouns)] if rng.random() < 0.3 else []
        node = {"id": f"{prefix}{len(nodes) + 1:02d}", "parent_id": parent, "name": name,
                "description": description, "synonyms": synonyms}
        nodes.append(node)
        return node["id"]

    levels = {}
    roots = [new_node(None, t) for t in themes[: min(len(themes), size)]]
    for r, t in zip(roots, themes):
        levels[r] = (1, t)
    while len(nodes) < size:
        candidates = [nid for nid, (lvl, _) in levels.items() if lvl < depth]
        if not candidates:  # flat space: more top-level nodes
            t = rng.choice(themes)
            nid = new_node(None, t)
            levels[nid] = (1, t)
            continue
        parent = rng.choice(sorted(candidates))
        lvl, theme = levels[parent]
        nid = new_node(parent, theme)
        levels[nid] = (lvl + 1, theme)
    return nodes


def write_tsv(path, nodes):
    lines = ["id\tparent_id\tname\tdescription\tsynonyms"]
    for n in nodes:
        lines.append("\t".join([n["id"], n["parent_id"] or "", n["name"], n["description"], "|".join(n["synonyms"])]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def make_requirements(rng, count):
    themes = sorted(THEMES)
    reqs = []
    for i in range(count):
        picked = rng.sample(themes, 2)
        a, b = THEMES[picked[0]], THEMES[picked[1]]
        nouns = rng.sample(a, 2) + rng.sample(b, 1)
        text = (f"The {nouns[0]} {rng.choice(['shall', 'must'])} be {rng.choice(ADJECTIVES)} "
                f"from the {nouns[1]} at every {nouns[2]}.")
        reqs.append({"id": f"R{i + 1:02d}", "text": text,
                     "document_title": f"Technical requirements for {picked[0]}",
                     "section_title": rng.choice(a).capitalize(), "_nouns": nouns})
    return reqs


def make_truth(rng, spaces, reqs):
    records = []
    for space_id, nodes in spaces:
        sample = f"sample_{space_id[-1]}"
        for r in reqs:
            hits = [n["id"] for n in nodes
                    if any(w in (n["name"] + " " + n["description"]).lower().split() for w in r["_nouns"])]
            if not hits:
                if rng.random() < 0.2:
                    records.append({"requirement_id": r["id"], "output_space_id": space_id,
                                    "sample_id": sample, "labels": ["No Available Code"]})
                continue
            labels = sorted(rng.sample(hits, min(len(hits), rng.randint(1, 3))))
            records.append({"requirement_id": r["id"], "output_space_id": space_id, "sample_id": sample,
                            "labels": labels})
    return records


def make_corpus(rng):
    docs = {}
    themes = sorted(THEMES)
    for t in themes:
        for j in range(3):
            words = []
            for _ in range(rng.randint(40, 80)):
                roll = rng.random()
                if roll < 0.55:
                    words.append(rng.choice(THEMES[t]))
                elif roll < 0.7:
                    words.append(rng.choice(THEMES[rng.choice(themes)]))
                elif roll < 0.8:
                    words.append(rng.choice(ADJECTIVES))
                else:
                    words.append(rng.choice(FILLER))
            docs[f"{t}_{j + 1}"] = " ".join(words).capitalize() + ".\n"
    return docs


def make_embeddings(rng, dim=16):
    rows = []
    centres = {t: [rng.gauss(0, 1) for _ in range(dim)] for t in sorted(THEMES)}
    for t in sorted(THEMES):
        for w in THEMES[t]:
            rows.append((w, [c + rng.gauss(0, 0.45) for c in centres[t]]))
    for w in ADJECTIVES:
        rows.append((w, [rng.gauss(0, 1) for _ in range(dim)]))
    seen, unique = set(), []
    for w, v in rows:
        if w not in seen:
            seen.add(w)
            unique.append((w, v))
    lines = [f"{len(unique)} {dim}"]
    lines += [w + " " + " ".join(f"{x:.6f}" for x in v) for w, v in unique]
    return "\n".join(lines) + "\n"


def main(root):
    rng = random.Random(SEED)
    out = Path(root) / "data" / "synthetic"
    (out / "taxonomies").mkdir(parents=True, exist_ok=True)
    (out / "corpus").mkdir(parents=True, exist_ok=True)

    spaces = []
    for space_id, size, depth in SPACES:
        nodes = make_taxonomy(rng, space_id, size, depth)
        spaces.append((space_id, nodes))
        if space_id == "OS_F":
            (out / "taxonomies" / f"{space_id}.json").write_text(
                json.dumps({"id": space_id, "nodes": nodes}, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
        else:
            write_tsv(out / "taxonomies" / f"{space_id}.tsv", nodes)

    reqs = make_requirements(rng, 20)
    truth = make_truth(rng, spaces, reqs)
    for r in reqs:
        del r["_nouns"]
    (out / "requirements.json").write_text(json.dumps(reqs, indent=1) + "\n", encoding="utf-8")
    (out / "truth.json").write_text(json.dumps(truth, indent=1) + "\n", encoding="utf-8")
    for name, text in make_corpus(rng).items():
        (out / "corpus" / f"{name}.txt").write_text(text, encoding="utf-8")
    (out / "embeddings.txt").write_text(make_embeddings(rng), encoding="utf-8")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent)
