#!/usr/bin/env python3
"""Line-delimited JSON backend that mirrors the built-in hash stubs.

Speaks the remote provider protocol on stdin/stdout, so it can be used as
`--endpoint "exec:python3 tools/stub_backend.py --vocab words.txt"` or served
over TCP with --port. Useful for exercising the remote code path without any
model downloads.
"""
import argparse
import json
import socketserver
import sys

OFFSET = 14695981039346656037
PRIME = 1099511628211
MASK = (1 << 64) - 1


def fnv1a64(text):
    h = OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * PRIME) & MASK
    return h


def unit(text):
    return (fnv1a64(text) % 1000) / 1000.0


class Stub:
    def __init__(self, vocab, dim=8):
        self.vocab = vocab
        self.dim = dim

    def masked_topk(self, args):
        text = args["text"]
        if "words" in args:
            return {"probs": [max(fnv1a64(text + "|" + w) % 1000, 1) / 1000.0 for w in args["words"]]}
        # The whole vocabulary is returned; the client normalizes and trims to k.
        return {"tokens": [{"word": w, "prob": unit(w)} for w in self.vocab]}

    def entail(self, args):
        p, h = args["premise"], args["hypothesis"]
        return {"prob": 1.0 if p == h else unit(p + "→" + h)}

    def embed(self, args):
        w = args["word"]
        return {"vector": [2.0 * unit(f"{w}#{i}") - 1.0 for i in range(self.dim)]}

    def handle(self, line):
        req = json.loads(line)
        try:
            result = getattr(self, req["op"])(req["args"])
            return {"id": req["id"], "result": result}
        except Exception as exc:  # reported to the client as a protocol error
            return {"id": req.get("id"), "error": f"{type(exc).__name__}: {exc}"}


def serve(stub, rfile, wfile):
    for line in rfile:
        if not line.strip():
            continue
        wfile.write(json.dumps(stub.handle(line), ensure_ascii=False) + "\n")
        wfile.flush()


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--vocab", required=True, help="one vocabulary entry per line")
    parser.add_argument("--port", type=int, help="serve TCP on 127.0.0.1:PORT instead of stdio")
    args = parser.parse_args()
    with open(args.vocab, encoding="utf-8") as f:
        stub = Stub([line.rstrip("\n") for line in f if line.rstrip("\n")])

    if args.port is None:
        sys.stdin.reconfigure(encoding="utf-8")
        sys.stdout.reconfigure(encoding="utf-8")
        serve(stub, sys.stdin, sys.stdout)
        return

    class Handler(socketserver.StreamRequestHandler):
        def handle(self):
            reader = (raw.decode("utf-8") for raw in self.rfile)
            writer = _TextWriter(self.wfile)
            serve(stub, reader, writer)

    with socketserver.ThreadingTCPServer(("127.0.0.1", args.port), Handler) as server:
        server.serve_forever()


class _TextWriter:
    def __init__(self, raw):
        self.raw = raw

    def write(self, s):
        self.raw.write(s.encode("utf-8"))

    def flush(self):
        self.raw.flush()


if __name__ == "__main__":
    main()
