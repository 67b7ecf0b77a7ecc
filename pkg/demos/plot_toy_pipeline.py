"""
The iterative pipeline on toy backends
======================================

Two styles, six gold pairs, two rounds. The toy models are template
encoders and lexicon decoders, enough to watch the loop move data around.
"""

import tempfile

from tstar.metrics import EmbeddingSimilarity
from tstar.pipeline import (
    GoldAmrCorpus,
    MonoStyleCorpus,
    PipelineConfig,
    ToyEncoder,
    run_pipeline,
    style_agnosticity_probe,
    style_transfer,
    toy_backends,
)
from tstar.wmd import EmbeddingStore

lexicons = {"bible": {"you": "thou", "your": "thy"}, "modern": {"you": "u", "your": "ur"}}
backends = toy_backends(lexicons)

enc = ToyEncoder()
gold = GoldAmrCorpus(tuple((s, enc.to_amr(s)) for s in
                           ["you eat bread", "you love your dog", "farmers plant wheat", "dogs chase cats"]))
mono = {
    "bible": MonoStyleCorpus("bible", ("thou eat bread", "thou love thy brother", "thy dog eats", "thou plant wheat")),
    "modern": MonoStyleCorpus("modern", ("u eat bread", "u love ur brother", "ur dog eats", "u plant wheat")),
}

store = EmbeddingStore.hashed(64)
cfg = PipelineConfig(("bible", "modern"), delta=0.7, iterations=2)
out = tempfile.mkdtemp()
result = run_pipeline(cfg, backends, gold, mono, EmbeddingSimilarity(store), store, out)
for entry in result.logs:
    print(entry["iteration"], entry["sizes"], "encoder SMATCH", entry["snapshot"]["encoder_smatch_f"])
print("artifacts in", out)

# after training the encoder reads 'thou' as plain 'you'
text, graph = style_transfer("thou love thy dog", "bible", "modern", backends.encoder, backends.decoders)
print(graph)
print("->", text)

# and a style classifier gets less out of the graph than out of the text
print(style_agnosticity_probe(mono, backends.encoder).format_tsv())
