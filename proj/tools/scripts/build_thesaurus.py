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

"""Builds core/data/thesaurus.tsv from a WordNet 3.0 dict directory.

Lemmas are the NOUN/VERB/ADJ entries of core/data/lexicon.tsv. Synonyms are
the other members of the lemma's first two synsets for that part of speech.

usage: build_thesaurus.py <wordnet-dict-dir> <lexicon.tsv> <stopwords.txt> <out.tsv>
"""
import os
import re
import sys

POS_FILES = {"NOUN": ("index.noun", ["data.noun1", "data.noun2"], "data.noun"),
             "VERB": ("index.verb", ["data.verb"], "data.verb"),
             "ADJ": ("index.adj", ["data.adj"], "data.adj")}
WORD_RE = re.compile(r"^[a-z][a-z' -]*[a-z]$")


def load_data(dict_dir, parts):
    blob = b""
    for p in parts:
        path = os.path.join(dict_dir, p)
        if os.path.exists(path):
            with open(path, "rb") as f:
                blob += f.read()
    return blob


def load_index(path):
    index = {}
    with open(path, encoding="latin-1") as f:
        for line in f:
            if line.startswith("  "):
                continue
            fields = line.split()
            lemma, synset_cnt, p_cnt = fields[0], int(fields[2]), int(fields[3])
            offsets = fields[4 + p_cnt + 2:]
            index[lemma] = [int(o) for o in offsets[:synset_cnt]]
    return index


def synset_words(blob, offset):
    end = blob.index(b"\n", offset)
    fields = blob[offset:end].decode("latin-1").split()
    count = int(fields[3], 16)
    words = []
    for i in range(count):
        w = fields[4 + 2 * i]
        w = re.sub(r"\((a|p|ip)\)$", "", w)
        words.append(w.replace("_", " ").lower())
    return words


def main(dict_dir, lexicon_path, stop_path, out_path, senses=2, limit=6):
    with open(stop_path, encoding="utf-8") as f:
        stop = {l.strip() for l in f if l.strip() and not l.startswith("#")}
    tables = {}
    for tag, (idx, parts, _) in POS_FILES.items():
        tables[tag] = (load_index(os.path.join(dict_dir, idx)), load_data(dict_dir, parts))
    rows = []
    with open(lexicon_path, encoding="utf-8") as f:
        for line in f:
            if line.startswith("#") or "\t" not in line:
                continue
            word, tag = line.rstrip("\n").split("\t")[:2]
            if tag not in tables or word in stop or len(word) < 3:
                continue
            index, blob = tables[tag]
            syns = []
            for off in index.get(word, [])[:senses]:
                for w in synset_words(blob, off):
                    if w != word and w not in syns and WORD_RE.match(w) and w not in stop:
                        syns.append(w)
            if syns:
                rows.append((word, syns[:limit]))
    rows.sort()
    with open(out_path, "w", encoding="utf-8") as out:
        out.write("# lemma<TAB>synonym|synonym|...  Derived from WordNet 3.0"
                  " (see wordnet.LICENSE).\n")
        for word, syns in rows:
            out.write(word + "\t" + "|".join(syns) + "\n")
    print("wrote %d lemmas to %s" % (len(rows), out_path))


if __name__ == "__main__":
    if len(sys.argv) != 5:
        sys.exit(__doc__)
    main(*sys.argv[1:])
