#!/usr/bin/env python3
"""Remote provider backend built on Hugging Face models.

Serves the line-delimited JSON protocol used by `lexsimp simplify --providers
remote`:

  masked_topk  RoBERTa masked LM (default roberta-base)
  entail       MNLI classifier, probability of the entailment label
               (default roberta-large-mnli)
  embed        fastText-format .vec file (e.g. crawl-300d-2M-subword.vec)

Run over stdio:
  lexsimp simplify ... --providers remote \
      --endpoint "exec:python3 tools/remote_backend.py --vectors crawl-300d-2M-subword.vec"
or over TCP with --port.

Needs torch and transformers. Models are fetched from the Hugging Face hub on
first use.
"""
import argparse
import json
import socketserver
import sys

import torch
from transformers import AutoModelForMaskedLM, AutoModelForSequenceClassification, AutoTokenizer


class Backend:
    def __init__(self, mlm_name, nli_name, vectors, vectors_limit, device):
        self.device = device
        self.mlm_tok = AutoTokenizer.from_pretrained(mlm_name)
        self.mlm = AutoModelForMaskedLM.from_pretrained(mlm_name).to(device).eval()
        self.nli_tok = AutoTokenizer.from_pretrained(nli_name)
        self.nli = AutoModelForSequenceClassification.from_pretrained(nli_name).to(device).eval()
        self.entail_label = next(i for i, name in self.nli.config.id2label.items() if name.lower() == "entailment")
        self.vectors = load_vectors(vectors, vectors_limit) if vectors else {}
        self._word_ids = None

    def _mask_distribution(self, text):
        # Pair encodings already carry <s> and </s>; plain sentences do not.
        enc = self.mlm_tok(text, add_special_tokens=not text.startswith(self.mlm_tok.bos_token), return_tensors="pt")
        enc = {k: v.to(self.device) for k, v in enc.items()}
        positions = (enc["input_ids"][0] == self.mlm_tok.mask_token_id).nonzero()
        if len(positions) != 1:
            raise ValueError(f"expected one mask token, found {len(positions)}")
        with torch.no_grad():
            logits = self.mlm(**enc).logits[0, positions[0, 0]]
        return torch.softmax(logits, dim=-1)

    def _whole_word_ids(self):
        # Vocabulary entries that start a new word and are purely alphabetic.
        if self._word_ids is None:
            ids, words = [], []
            for token, idx in self.mlm_tok.get_vocab().items():
                if token.startswith("Ġ") and token[1:].isalpha():
                    ids.append(idx)
                    words.append(token[1:])
            self._word_ids = (torch.tensor(ids, device=self.device), words)
        return self._word_ids

    def masked_topk(self, args):
        probs = self._mask_distribution(args["text"])
        if "words" in args:
            out = []
            for word in args["words"]:
                # Multi-piece words are scored by their first piece.
                piece = self.mlm_tok.encode(" " + word, add_special_tokens=False)[0]
                out.append(float(probs[piece]))
            return {"probs": out}
        ids, words = self._whole_word_ids()
        sub = probs[ids]
        top = torch.topk(sub, min(int(args["k"]), len(words)))
        return {"tokens": [{"word": words[i], "prob": float(p)} for p, i in zip(top.values.tolist(), top.indices.tolist())]}

    def entail(self, args):
        enc = self.nli_tok(args["premise"], args["hypothesis"], return_tensors="pt", truncation=True)
        enc = {k: v.to(self.device) for k, v in enc.items()}
        with torch.no_grad():
            probs = torch.softmax(self.nli(**enc).logits[0], dim=-1)
        return {"prob": float(probs[self.entail_label])}

    def embed(self, args):
        return {"vector": self.vectors.get(args["word"], [])}

    def handle(self, line):
        req = json.loads(line)
        try:
            return {"id": req["id"], "result": getattr(self, req["op"])(req["args"])}
        except Exception as exc:
            return {"id": req.get("id"), "error": f"{type(exc).__name__}: {exc}"}


def load_vectors(path, limit):
    table = {}
    with open(path, encoding="utf-8", errors="replace") as f:
        first = f.readline().split()
        if len(first) != 2:
            f.seek(0)
        for n, line in enumerate(f):
            if limit and n >= limit:
                break
            parts = line.rstrip().split(" ")
            table[parts[0]] = [float(x) for x in parts[1:]]
    return table


def serve(backend, rfile, wfile):
    for line in rfile:
        if line.strip():
            wfile.write(json.dumps(backend.handle(line), ensure_ascii=False) + "\n")
            wfile.flush()


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--mlm", default="roberta-base")
    parser.add_argument("--nli", default="roberta-large-mnli")
    parser.add_argument("--vectors", help="fastText .vec file for the embed operation")
    parser.add_argument("--vectors-limit", type=int, default=0, help="read only the first N vectors")
    parser.add_argument("--device", default="cuda" if torch.cuda.is_available() else "cpu")
    parser.add_argument("--port", type=int, help="serve TCP on 127.0.0.1:PORT instead of stdio")
    args = parser.parse_args()
    backend = Backend(args.mlm, args.nli, args.vectors, args.vectors_limit, args.device)

    if args.port is None:
        sys.stdin.reconfigure(encoding="utf-8")
        sys.stdout.reconfigure(encoding="utf-8")
        serve(backend, sys.stdin, sys.stdout)
        return

    class Handler(socketserver.StreamRequestHandler):
        def handle(self):
            lines = (raw.decode("utf-8") for raw in self.rfile)
            serve(backend, lines, Writer(self.wfile))

    with socketserver.TCPServer(("127.0.0.1", args.port), Handler) as server:
        server.serve_forever()


class Writer:
    def __init__(self, raw):
        self.raw = raw

    def write(self, s):
        self.raw.write(s.encode("utf-8"))

    def flush(self):
        self.raw.flush()


if __name__ == "__main__":
    main()
