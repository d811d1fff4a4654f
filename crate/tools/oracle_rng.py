"""Pure-Python reimplementation of the seeded generator, the synthetic process
and sentiment training, used to check the frozen fixtures.

    python3 tools/oracle_rng.py
"""
import csv
import math
import struct
import sys
import unicodedata

M64 = (1 << 64) - 1
M32 = (1 << 32) - 1


def seed_bytes(state):
    # rand_core's seed_from_u64: PCG32 output words, little endian.
    out = b""
    for _ in range(8):
        state = (state * 6364136223846793005 + 11634580027462260723) & M64
        xs = (((state >> 18) ^ state) >> 27) & M32
        rot = state >> 59
        x = ((xs >> rot) | (xs << ((32 - rot) & 31))) & M32
        out += struct.pack("<I", x)
    return out


def rotl(v, c):
    return ((v << c) | (v >> (32 - c))) & M32


def chacha_block(key, counter, rounds=8):
    c = [0x61707865, 0x3320646E, 0x79622D32, 0x6B206574]
    k = list(struct.unpack("<8I", key))
    s = c + k + [counter & M32, counter >> 32, 0, 0]
    x = s[:]

    def qr(a, b, cc, d):
        x[a] = (x[a] + x[b]) & M32; x[d] = rotl(x[d] ^ x[a], 16)
        x[cc] = (x[cc] + x[d]) & M32; x[b] = rotl(x[b] ^ x[cc], 12)
        x[a] = (x[a] + x[b]) & M32; x[d] = rotl(x[d] ^ x[a], 8)
        x[cc] = (x[cc] + x[d]) & M32; x[b] = rotl(x[b] ^ x[cc], 7)

    for _ in range(rounds // 2):
        qr(0, 4, 8, 12); qr(1, 5, 9, 13); qr(2, 6, 10, 14); qr(3, 7, 11, 15)
        qr(0, 5, 10, 15); qr(1, 6, 11, 12); qr(2, 7, 8, 13); qr(3, 4, 9, 14)
    return [(x[i] + s[i]) & M32 for i in range(16)]


class Sampler:
    def __init__(self, seed):
        self.key = seed_bytes(seed)
        self.counter = 0
        self.words = []
        self.spare = None

    def next_u32(self):
        if not self.words:
            self.words = chacha_block(self.key, self.counter)
            self.counter += 1
        return self.words.pop(0)

    def next_u64(self):
        lo = self.next_u32()
        hi = self.next_u32()
        return (hi << 32) | lo

    def uniform(self):
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def sample(self):
        if self.spare is not None:
            z, self.spare = self.spare, None
            return z
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        t = 2.0 * math.pi * u2
        self.spare = r * math.sin(t)
        return r * math.cos(t)

    def shuffle(self, items):
        for i in range(len(items) - 1, 0, -1):
            j = min(int(self.uniform() * (i + 1)), i)
            items[i], items[j] = items[j], items[i]


def gen_synthetic(n, c, sd, seed):
    g = Sampler(seed)
    x = [g.sample() for _ in range(n)]
    y = [0.0]
    for t in range(1, n):
        y.append(0.5 * y[t - 1] + c * x[t - 1] + sd * g.sample())
    return y, x


HASH_SEED = 0x5EED20150504F1A1
DIM = 1 << 16


def hash_token(tok):
    h = 0xCBF29CE484222325 ^ HASH_SEED
    for b in tok.encode("utf-8"):
        h = ((h ^ b) * 0x100000001B3) & M64
    h ^= h >> 30; h = (h * 0xBF58476D1CE4E5B9) & M64
    h ^= h >> 27; h = (h * 0x94D049BB133111EB) & M64
    return h ^ (h >> 31)


def is_alnum(ch):
    return unicodedata.category(ch)[0] in "LN"


def tokenize(text):
    out = []
    for t in text.lower().split():
        i, j = 0, len(t)
        while i < j and not is_alnum(t[i]):
            i += 1
        while j > i and not is_alnum(t[j - 1]):
            j -= 1
        if i < j:
            out.append(t[i:j])
    return out


def featurize(text):
    counts = {}
    for t in tokenize(text):
        k = hash_token(t) & (DIM - 1)
        counts[k] = counts.get(k, 0.0) + 1.0
    norm = math.sqrt(sum(v * v for _, v in sorted(counts.items())))
    return [(k, v / norm) for k, v in sorted(counts.items())]


def sigmoid(z):
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def train(rows, ratio=0.8, epochs=30, lr=1.0, batch=8, seed=2015):
    feats = [featurize(t) for t, _ in rows]
    targets = [1.0 if l == "pos" else 0.0 for _, l in rows]
    g = Sampler(seed)
    order = list(range(len(rows)))
    g.shuffle(order)
    n_train = int(math.floor(ratio * len(rows) + 1e-9))
    tr = order[:n_train]
    w = {}
    b = 0.0
    for _ in range(epochs):
        g.shuffle(tr)
        for s in range(0, len(tr), batch):
            chunk = tr[s:s + batch]
            step = lr / len(chunk)
            ups = []
            bg = 0.0
            for i in chunk:
                z = 0.0
                for k, v in feats[i]:
                    z += v * w.get(k, 0.0)
                err = sigmoid(z + b) - targets[i]
                bg += err
                ups.extend((k, err * v) for k, v in feats[i])
            for k, gk in ups:
                w[k] = w.get(k, 0.0) - step * gk
            b -= step * bg
    return w, b


def main():
    ok = True
    y, x = gen_synthetic(500, 0.8, 0.1, 42)
    with open("crates/sentcause/tests/fixtures/causal/close.csv") as f:
        close = [float(r["close"]) for r in csv.DictReader(f)]
    with open("crates/sentcause/tests/fixtures/causal/sentiment.csv") as f:
        score = [float(r["score"]) for r in csv.DictReader(f)]
    dy = max(abs(a - b) for a, b in zip(y, close))
    dx = max(abs(a - b) for a, b in zip(x, score))
    print("synthetic max |diff|", dy, dx)
    print("first rows", [(y[i], x[i]) for i in range(3)])
    ok &= dy < 1e-12 and dx < 1e-12

    with open("crates/sentcause/data/demo_corpus.csv") as f:
        rows = [(r["text"], r["label"]) for r in csv.DictReader(f)]
    w, b = train(rows)
    model = {}
    with open("crates/sentcause/tests/fixtures/demo_model.txt") as f:
        lines = f.read().split("\n")
    bias = float(lines[3].split()[1])
    start = lines.index(next(l for l in lines if l.startswith("nonzero"))) + 1
    for l in lines[start:]:
        if l:
            k, v = l.split()
            model[int(k)] = float(v)
    keys = set(model) | {k for k, v in w.items() if v != 0.0}
    dw = max(abs(model.get(k, 0.0) - w.get(k, 0.0)) for k in keys)
    print("model max |dw|", dw, "|db|", abs(bias - b), "nonzero", len(model))
    ok &= dw < 1e-12 and abs(bias - b) < 1e-12
    print("OK" if ok else "MISMATCH")
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
