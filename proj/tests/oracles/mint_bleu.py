"""Mint golden corpus BLEU values for tests/fixtures/bleu with sacrebleu (13a, no smoothing)."""
import json
import pathlib

import sacrebleu

here = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "bleu"
out = {}
for name in ("a", "b", "c"):
    hyps = (here / f"{name}.hyp").read_text(encoding="utf-8").splitlines()
    refs = (here / f"{name}.ref").read_text(encoding="utf-8").splitlines()
    out[name] = sacrebleu.corpus_bleu(hyps, [refs], tokenize="13a", smooth_method="none").score
print(json.dumps(out, indent=2))
(here / "golden.json").write_text(json.dumps(out, indent=2) + "\n", encoding="utf-8")
