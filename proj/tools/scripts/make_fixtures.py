#!/usr/bin/env python3
#
# Copyright 2026 The augwork Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""Regenerates the reference fixtures under tests/fixtures.

Usage: make_fixtures.py <tests/fixtures dir>

Outputs are computed here, independently of the C++ code:
  tokenize_docs.txt / tokenize_reference.tsv   reference tokenizer below
  tag_reference.tsv                           TextBlob's pattern tagger
  ttest_*.csv / ttest_reference.json          scipy.stats.ttest_ind
  table2_{passages,sentences}_*.jsonl         expert-study replay data
"""
import json
import os
import random
import sys

import numpy as np
from scipy import stats
from textblob.en import tag as pattern_tag
import wordfreq

COARSE = {
    "NN": "NOUN", "NNS": "NOUN", "NNP": "NOUN", "NNPS": "NOUN",
    "VB": "VERB", "VBD": "VERB", "VBG": "VERB", "VBN": "VERB", "VBP": "VERB",
    "VBZ": "VERB", "MD": "VERB",
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ",
    "DT": "DET", "PDT": "DET", "WDT": "DET",
}

APOSTROPHES = "'’"
EXTRA_WORDS = ["café", "naïve", "Zürich", "façade", "Ærø", "señora", "Łódź",
               "мир", "Αθήνα", "don't", "it’s", "o'clock", "rock'n'roll", "B2B",
               "COVID19", "3rd", "1,000", "24/7", "e-mail", "well-being", "x_y"]
SEPARATORS = [" ", " ", " ", " ", ", ", ". ", "; ", " - ", " — ", "! ", "? ",
              " (", ") ", " \"", "\" ", "\n", "\t", " “", "” ", "...", " / ",
              " \U0001F600 ", " & ", " #", "@", "  "]


def reference_tokenize(text):
    out, cur = [], []
    for ch in text:
        if ch.isalpha() or ("0" <= ch <= "9") or ch in APOSTROPHES:
            cur.append(ch)
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return out


def make_tokenize(out_dir, n_docs=1000):
    rng = random.Random(20240611)
    words = [w for w in wordfreq.top_n_list("en", 3000) if w.isalpha()]
    docs = []
    for _ in range(n_docs):
        parts = []
        for _ in range(rng.randint(0, 30)):
            w = rng.choice(EXTRA_WORDS) if rng.random() < 0.08 else rng.choice(words)
            if rng.random() < 0.15:
                w = w.capitalize()
            parts.append(w)
            parts.append(rng.choice(SEPARATORS))
        doc = "".join(parts).replace("\n", " \\n ").strip()
        docs.append(doc)
    with open(os.path.join(out_dir, "tokenize_docs.txt"), "w", encoding="utf-8") as f:
        for d in docs:
            f.write(d + "\n")
    with open(os.path.join(out_dir, "tokenize_reference.tsv"), "w", encoding="utf-8") as f:
        for i, d in enumerate(docs):
            toks = reference_tokenize(d)
            f.write(f"{i}\t{len(toks)}\t{' '.join(toks)}\n")


def make_tags(out_dir):
    with open(os.path.join(out_dir, "tag_sentences.txt"), encoding="utf-8") as f:
        sentences = [l.strip() for l in f if l.strip()]
    with open(os.path.join(out_dir, "tag_reference.tsv"), "w", encoding="utf-8") as f:
        for s in sentences:
            toks = reference_tokenize(s)
            for tok, penn in pattern_tag(" ".join(toks), tokenize=False):
                f.write(f"{tok}\t{COARSE.get(penn, 'OTHER')}\n")
            f.write("\n")


def ttest_entry(a, b):
    r = stats.ttest_ind(a, b, equal_var=True)
    return {"a": list(map(float, a)), "b": list(map(float, b)),
            "t": float(r.statistic), "df": len(a) + len(b) - 2, "p": float(r.pvalue)}


def write_column(path, values):
    with open(path, "w") as f:
        f.write("score\n")
        for v in values:
            f.write(f"{v!r}\n")


def make_ttests(out_dir):
    write_column(os.path.join(out_dir, "ttest_a.csv"), [1.0, 2.0, 3.0, 4.0, 5.0])
    write_column(os.path.join(out_dir, "ttest_b.csv"), [2.0, 3.0, 4.0, 5.0, 6.0])
    g = np.random.default_rng(7)
    low = np.round(g.normal(0.30, 0.03, 12), 4)
    high = np.round(g.normal(0.45, 0.03, 12), 4)
    write_column(os.path.join(out_dir, "ttest_n12_a.csv"), low.tolist())
    write_column(os.path.join(out_dir, "ttest_n12_b.csv"), high.tolist())
    ref = {"small": ttest_entry([1, 2, 3, 4, 5], [2, 3, 4, 5, 6]),
           "n12": ttest_entry(low, high), "random": []}
    for _ in range(100):
        na, nb = int(g.integers(2, 30)), int(g.integers(2, 30))
        a = g.normal(g.uniform(-1, 1), g.uniform(0.05, 2), na)
        b = g.normal(g.uniform(-1, 1), g.uniform(0.05, 2), nb)
        ref["random"].append(ttest_entry(a, b))
    with open(os.path.join(out_dir, "ttest_reference.json"), "w") as f:
        json.dump(ref, f, indent=1)
        f.write("\n")


THEMES = ["Contact with Agencies", "Indicative Behaviour", "Indicative Circumstances",
          "Mental Health Issues", "Reflections"]
GOOD = {"passages": [12, 12, 11, 11, 11], "sentences": [13, 15, 13, 14, 11]}
TOPIC = {
    "Contact with Agencies": ["police", "social services", "the GP", "housing", "probation"],
    "Indicative Behaviour": ["shouting", "controlling messages", "threats", "missed visits", "drinking"],
    "Indicative Circumstances": ["debt", "unemployment", "a recent move", "isolation", "eviction"],
    "Mental Health Issues": ["depression", "anxiety", "self-harm", "medication", "counselling"],
    "Reflections": ["the review", "lessons learned", "missed opportunities", "training", "the panel"],
}


def make_table2(out_dir):
    for sample, goods in GOOD.items():
        rng = random.Random("table2-" + sample)
        data, script = [], []
        for t, theme in enumerate(THEMES):
            for i in range(20):
                iid = f"{sample[0]}{t}-{i:02d}"
                focus = TOPIC[theme][i % 5]
                text = f"Record {i + 1} for this theme mentions {focus}."
                if sample == "passages":
                    text += f" A second remark about {TOPIC[theme][(i + 2) % 5]} follows."
                data.append({"id": iid, "text": text, "label": theme})
                final = "good" if i < goods[t] else "bad"
                first = final
                second = final
                if i % 7 == 3:
                    second = "unsure"
                elif i % 9 == 5:
                    second = "bad" if final == "good" else "good"
                script.append({"op": "verdict", "annotator": "expert_a", "instance_id": iid,
                               "verdict": first})
                script.append({"op": "verdict", "annotator": "expert_b", "instance_id": iid,
                               "verdict": second})
                script.append({"op": "consensus", "instance_id": iid, "verdict": final})
        rng.shuffle(script)
        # Verdicts precede consensus for each instance.
        script.sort(key=lambda e: e["op"] == "consensus")
        with open(os.path.join(out_dir, f"table2_{sample}_data.jsonl"), "w") as f:
            for r in data:
                f.write(json.dumps(r) + "\n")
        with open(os.path.join(out_dir, f"table2_{sample}_script.jsonl"), "w") as f:
            for e in script:
                f.write(json.dumps(e) + "\n")
    expected = {"themes": THEMES,
                "passages": {"good": GOOD["passages"], "bad": [20 - g for g in GOOD["passages"]]},
                "sentences": {"good": GOOD["sentences"], "bad": [20 - g for g in GOOD["sentences"]]}}
    with open(os.path.join(out_dir, "table2_expected.json"), "w") as f:
        json.dump(expected, f, indent=1)
        f.write("\n")


def main(out_dir):
    make_tokenize(out_dir)
    make_tags(out_dir)
    make_ttests(out_dir)
    make_table2(out_dir)


if __name__ == "__main__":
    main(sys.argv[1])
