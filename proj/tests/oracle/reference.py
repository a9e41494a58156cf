"""Independent reference for golden values used by the C++ tests.

Re-implements, from the written format descriptions only, the counter
entropy source, unbiased and full-range shuffles, the chunk selection rule
and the key file layout. Run with python3 to print the frozen values.
"""
import zlib


class Counter:
    """Bytes 0, 1, 2, ... consumed most-significant bit first."""

    def __init__(self, start=0):
        self.byte = start
        self.bits = []
        self.position = 0

    def bit(self):
        if not self.bits:
            self.bits = [(self.byte >> (7 - k)) & 1 for k in range(8)]
            self.byte = (self.byte + 1) % 256
        self.position += 1
        return self.bits.pop(0)

    def uint(self, width):
        v = 0
        for _ in range(width):
            v = (v << 1) | self.bit()
        return v

    def randint(self, lo, hi):
        span = hi - lo
        if span == 0:
            return lo
        width = span.bit_length()
        while True:
            d = self.uint(width)
            if d <= span:
                return lo + d


def shuffle(n, src, full_range=False):
    s = list(range(n))
    if full_range:
        k = [src.randint(1, n) - 1 for _ in range(n)]
        for i in reversed(range(n)):
            s[k[i]], s[i] = s[i], s[k[i]]
    else:
        for i in reversed(range(n)):
            j = src.randint(1, i + 1) - 1
            s[j], s[i] = s[i], s[j]
    return s


def expand(bits, maps, src):
    n = len(maps[0])
    w = (len(maps) - 1).bit_length()
    out, sels = [], []
    full = len(bits) // n
    for c in range(full):
        sel = src.uint(w)
        sels.append(sel)
        chunk = bits[c * n:(c + 1) * n]
        out += [chunk[maps[sel][i]] for i in range(n)]
    out += bits[full * n:]
    return out, sels


def key_bytes(maps, sels, tail, length):
    n, m = len(maps[0]), len(maps)
    width = 1 if n - 1 <= 0xFF else 2 if n - 1 <= 0xFFFF else 4
    w = (m - 1).bit_length()
    b = bytearray(b"PERMXKEY")
    b += (1).to_bytes(2, "little") + n.to_bytes(4, "little")
    b += m.to_bytes(4, "little") + bytes([tail]) + length.to_bytes(8, "little")
    for mp in maps:
        for t in mp:
            b += t.to_bytes(width, "little")
    bits = []
    for s in sels:
        bits += [(s >> (w - 1 - k)) & 1 for k in range(w)]
    while len(bits) % 8:
        bits.append(0)
    for i in range(0, len(bits), 8):
        b.append(int("".join(map(str, bits[i:i + 8])), 2))
    b += zlib.crc32(bytes(b)).to_bytes(4, "little")
    return bytes(b)


M32 = 0xFFFFFFFF
M64 = 0xFFFFFFFFFFFFFFFF


def seed_seq(v, n):
    """std::seed_seq::generate as defined by the C++ standard."""
    b = [0x8B8B8B8B] * n
    s = len(v)
    t = 11 if n >= 623 else 7 if n >= 68 else 5 if n >= 39 else 3 if n >= 7 else (n - 1) // 2
    p = (n - t) // 2
    q = p + t
    m = max(s + 1, n)

    def T(x):
        return x ^ (x >> 27)

    for k in range(m):
        r1 = (1664525 * T(b[k % n] ^ b[(k + p) % n] ^ b[(k - 1) % n])) & M32
        if k == 0:
            r2 = r1 + s
        elif k <= s:
            r2 = r1 + k % n + v[k - 1]
        else:
            r2 = r1 + k % n
        r2 &= M32
        b[(k + p) % n] = (b[(k + p) % n] + r1) & M32
        b[(k + q) % n] = (b[(k + q) % n] + r2) & M32
        b[k % n] = r2
    for k in range(m, m + n):
        r3 = (1566083941 * T((b[k % n] + b[(k + p) % n] + b[(k - 1) % n]) & M32)) & M32
        r4 = (r3 - k % n) & M32
        b[(k + p) % n] ^= r3
        b[(k + q) % n] ^= r4
        b[k % n] = r4
    return b


class MT64:
    N, M = 312, 156

    def __init__(self, state):
        self.mt = state
        self.i = self.N

    @classmethod
    def from_int(cls, seed):
        mt = [seed & M64]
        for i in range(1, cls.N):
            mt.append((6364136223846793005 * (mt[-1] ^ (mt[-1] >> 62)) + i) & M64)
        return cls(mt)

    @classmethod
    def from_words(cls, words):
        a = seed_seq(words, 2 * cls.N)
        mt = [a[2 * i] | (a[2 * i + 1] << 32) for i in range(cls.N)]
        if (mt[0] >> 31) == 0 and all(x == 0 for x in mt[1:]):
            mt[0] = 1 << 63
        return cls(mt)

    def __call__(self):
        if self.i >= self.N:
            for k in range(self.N):
                y = (self.mt[k] & ~0x7FFFFFFF & M64) | (self.mt[(k + 1) % self.N] & 0x7FFFFFFF)
                x = self.mt[(k + self.M) % self.N] ^ (y >> 1)
                if y & 1:
                    x ^= 0xB5026F5AA96619E9
                self.mt[k] = x
            self.i = 0
        y = self.mt[self.i]
        self.i += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & M64


class Seeded(Counter):
    """Seed bytes packed big-endian into 32-bit words; output words
    emitted most-significant byte first."""

    def __init__(self, seed):
        words = [0] * ((len(seed) + 3) // 4)
        for i, x in enumerate(seed):
            words[i // 4] |= x << (24 - 8 * (i % 4))
        self.engine = MT64.from_words(words)
        self.pending = []
        self.bits = []
        self.position = 0

    def bit(self):
        if not self.bits:
            if not self.pending:
                w = self.engine()
                self.pending = [(w >> (56 - 8 * k)) & 0xFF for k in range(8)]
            byte = self.pending.pop(0)
            self.bits = [(byte >> (7 - k)) & 1 for k in range(8)]
        self.position += 1
        return self.bits.pop(0)


if __name__ == "__main__":
    src = Counter()
    maps = [shuffle(4, src) for _ in range(4)]
    print("unbiased N=4 m=4 counter:", maps, "bits", src.position)
    src = Counter()
    print("full-range N=4 counter:", shuffle(4, src, True), "bits", src.position)
    src = Counter()
    maps = [shuffle(8, src) for _ in range(2)]
    data = [int(c) for c in "".join(f"{b:08b}" for b in b"permx!")]
    out, sels = expand(data, maps, src)
    print("N=8 m=2 maps", maps)
    print("expand 'permx!' ->", bytes(int("".join(map(str, out[i:i+8])), 2)
                                     for i in range(0, len(out), 8)).hex(), "sels", sels)
    print("key hex", key_bytes(maps, sels, 0, len(data)).hex())

    mt = MT64.from_int(5489)
    for _ in range(9999):
        mt()
    print("mt19937_64 default seed, 10000th output:", mt())
    src = Seeded(bytes.fromhex("c0ffee"))
    maps = [shuffle(64, src) for _ in range(4)]
    text = b"Seeded runs must give identical bytes everywhere.\n"
    data = [int(c) for c in "".join(f"{b:08b}" for b in text)]
    out, sels = expand(data, maps, src)
    out_bytes = bytes(int("".join(map(str, out[i:i+8])), 2) for i in range(0, len(out), 8))
    key = key_bytes(maps, sels, 0, len(data))
    print("seed c0ffee N=64 m=4 input", text)
    print("  output hex", out_bytes.hex())
    print("  key size", len(key), "crc32 of key file", hex(zlib.crc32(key)))
