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

"""Builds core/data/lexicon.tsv: ~5k frequent English words with coarse tags.

Word list: wordfreq's English top-N. Tags: the first (most frequent) Penn tag
in the Brill lexicon bundled with TextBlob, collapsed to NOUN/VERB/ADJ/DET/OTHER.
"""
import os
import sys

import textblob
import wordfreq

COARSE = {
    "NN": "NOUN", "NNS": "NOUN", "NNP": "NOUN", "NNPS": "NOUN",
    "VB": "VERB", "VBD": "VERB", "VBG": "VERB", "VBN": "VERB", "VBP": "VERB",
    "VBZ": "VERB", "MD": "VERB",
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ",
    "DT": "DET", "PDT": "DET", "WDT": "DET",
}


def coarse(tag):
    return COARSE.get(tag, "OTHER")


def main(out_path, size=5000):
    brill = {}
    path = os.path.join(os.path.dirname(textblob.__file__), "en", "en-lexicon.txt")
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.startswith(";;;"):
                continue
            parts = line.split()
            if len(parts) < 2:
                continue
            word = parts[0]
            if word.lower() != word:
                continue
            brill.setdefault(word, parts[1])
    rows = []
    for word in wordfreq.top_n_list("en", 40000):
        if not word.isalpha() or word not in brill:
            continue
        if len(word) == 1 and word not in ("a", "i"):
            continue
        rows.append((word, coarse(brill[word])))
        if len(rows) == size:
            break
    rows.sort()
    with open(out_path, "w", encoding="utf-8") as f:
        for word, tag in rows:
            f.write(f"{word}\t{tag}\n")


if __name__ == "__main__":
    main(sys.argv[1])
