"""Tokenize the contraction sample with NLTK's Treebank-style word tokenizer.

The output is frozen as tests/fixtures/tokenizer/contractions.expected.json and
compared against the C++ tokenizer.
"""
import json
import pathlib

from nltk.tokenize import NLTKWordTokenizer

here = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "tokenizer"
tok = NLTKWordTokenizer()
lines = (here / "contractions.txt").read_text(encoding="utf-8").splitlines()
out = [{"sentence": s, "words": tok.tokenize(s)} for s in lines]
(here / "contractions.expected.json").write_text(json.dumps(out, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
print(len(out))
for o in out[:6]:
    print(o["words"])
