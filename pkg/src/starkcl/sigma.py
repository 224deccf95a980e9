"""ElGamal-style hybrid encryption over Cl(K) (toy sizes only).

Deterministic randomness: a counter-mode generator whose i-th block is
SHA-256(seed || i as 8-byte big-endian); integers in [lo, hi] are drawn by
rejection sampling from the minimal number of bytes.

serialize(class) = enc(Delta) || enc(a) || enc(b) || enc(c) for the canonical
form, where enc(n) = 2-byte big-endian length L || sign byte (0 or 1) ||
L - 1 bytes of |n| (minimal big-endian, empty for 0).
"""

import hashlib
import struct
from dataclasses import dataclass

from .classgroup import Form, IdealClass, class_group, element_order, power
from .errors import (
    BadDiscriminant,
    DiscriminantMismatch,
    MessageLengthMismatch,
    NonCyclicGroup,
)
from .quadfield import make_field

DEFAULT_HASH = "sha256"
DEFAULT_K = 256
KEY_MAGIC = b"SGK1"
CT_MAGIC = b"SGC1"


class CounterRNG:
    def __init__(self, seed, hash_name=DEFAULT_HASH):
        if isinstance(seed, int):
            seed = seed.to_bytes(max(1, (seed.bit_length() + 7) // 8), "big")
        elif isinstance(seed, str):
            seed = seed.encode()
        self.seed = bytes(seed)
        self.hash_name = hash_name
        self.counter = 0
        self.buf = b""

    def read(self, n):
        while len(self.buf) < n:
            h = hashlib.new(self.hash_name, self.seed + self.counter.to_bytes(8, "big"))
            self.buf += h.digest()
            self.counter += 1
        out, self.buf = self.buf[:n], self.buf[n:]
        return out

    def randint(self, lo, hi):
        """Uniform integer in [lo, hi]."""
        span = hi - lo + 1
        if span <= 0:
            raise ValueError("empty range")
        nbytes = max(1, (span.bit_length() + 7) // 8)
        limit = (1 << (8 * nbytes)) // span * span
        while True:
            x = int.from_bytes(self.read(nbytes), "big")
            if x < limit:
                return lo + x % span


def _enc_int(n):
    mag = abs(n)
    body = mag.to_bytes((mag.bit_length() + 7) // 8, "big")
    return struct.pack(">HB", len(body) + 1, 1 if n < 0 else 0) + body


def _dec_int(buf, pos):
    (L,) = struct.unpack_from(">H", buf, pos)
    sign = buf[pos + 2]
    mag = int.from_bytes(buf[pos + 3: pos + 2 + L], "big")
    return (-mag if sign else mag), pos + 2 + L


def serialize(cls):
    a, b, c = cls.canon.astuple()
    return b"".join(_enc_int(n) for n in (cls.delta, a, b, c))


def deserialize(buf, pos=0):
    vals = []
    for _ in range(4):
        v, pos = _dec_int(buf, pos)
        vals.append(v)
    delta, a, b, c = vals
    f = Form(a, b, c)
    if f.disc != delta:
        raise DiscriminantMismatch("serialized form does not match its discriminant")
    return IdealClass.of(f), pos


def H(cls, k=DEFAULT_K, hash_name=DEFAULT_HASH):
    """k-bit digest of serialize(cls); expanded by counter if k exceeds the digest."""
    data = serialize(cls)
    nbytes = (k + 7) // 8
    out = hashlib.new(hash_name, data).digest()
    i = 1
    while len(out) < nbytes:
        out += hashlib.new(hash_name, data + i.to_bytes(4, "big")).digest()
        i += 1
    return out[:nbytes]


def _xor(x, y):
    return bytes(a ^ b for a, b in zip(x, y))


@dataclass(frozen=True)
class PublicKey:
    delta: int
    g: IdealClass
    order_g: int
    pk: IdealClass


@dataclass(frozen=True)
class Keypair:
    D: int
    delta: int
    g: IdealClass
    order_g: int
    x: int
    pk: IdealClass

    def public(self):
        return PublicKey(self.delta, self.g, self.order_g, self.pk)


@dataclass(frozen=True)
class Ciphertext:
    c1: IdealClass
    c2: bytes


def choose_generator(G):
    """Least canonical element of order h; refuses non-cyclic or trivial groups."""
    if G.h == 1:
        raise NonCyclicGroup("h = 1: the only element is the identity, no usable generator")
    if not G.is_cyclic():
        raise NonCyclicGroup(
            f"Cl(K) has elementary divisors {list(G.divisors)}; no element of order h = {G.h}")
    for x in G.elements():
        if element_order(x) == G.h:
            return x
    raise NonCyclicGroup("no generator found")  # pragma: no cover


def keygen(D, seed, hash_name=DEFAULT_HASH, group=None):
    if D % 4 != 1:
        raise BadDiscriminant(f"D = {D} must be 1 mod 4")
    K = make_field(D, compute_unit=False)
    G = group if group is not None else class_group(K.delta)
    g = choose_generator(G)
    rng = CounterRNG(seed, hash_name)
    x = rng.randint(1, G.h - 1)
    return Keypair(D, K.delta, g, G.h, x, power(g, x))


def encrypt(pub, m, seed, k=DEFAULT_K, hash_name=DEFAULT_HASH):
    if len(m) * 8 != k:
        raise MessageLengthMismatch(f"message has {len(m) * 8} bits, expected {k}")
    rng = CounterRNG(seed, hash_name)
    r = rng.randint(1, pub.order_g - 1)
    c1 = power(pub.g, r)
    s = power(pub.pk, r)
    return Ciphertext(c1, _xor(m, H(s, k, hash_name)))


def decrypt(kp, ct, hash_name=DEFAULT_HASH):
    if ct.c1.delta != kp.delta:
        raise DiscriminantMismatch(f"ciphertext is over {ct.c1.delta}, key over {kp.delta}")
    s = power(ct.c1, kp.x)
    return _xor(ct.c2, H(s, len(ct.c2) * 8, hash_name))


# -- files ----------------------------------------------------------------------

def _enc_bytes(b):
    return struct.pack(">I", len(b)) + b


def _dec_bytes(buf, pos):
    (n,) = struct.unpack_from(">I", buf, pos)
    return buf[pos + 4: pos + 4 + n], pos + 4 + n


def dump_keypair(kp, private=True):
    body = _enc_int(kp.D) + serialize(kp.g) + _enc_int(kp.order_g) + serialize(kp.pk)
    body += _enc_int(kp.x if private else 0)
    return KEY_MAGIC + bytes([1 if private else 0]) + body


def load_keypair(buf):
    if buf[:4] != KEY_MAGIC:
        raise ValueError("not a key file (bad magic)")
    pos = 5
    D, pos = _dec_int(buf, pos)
    g, pos = deserialize(buf, pos)
    order_g, pos = _dec_int(buf, pos)
    pk, pos = deserialize(buf, pos)
    x, pos = _dec_int(buf, pos)
    return Keypair(D, g.delta, g, order_g, x, pk)


def dump_ciphertext(ct):
    return CT_MAGIC + serialize(ct.c1) + _enc_bytes(ct.c2)


def load_ciphertext(buf):
    if buf[:4] != CT_MAGIC:
        raise ValueError("not a ciphertext file (bad magic)")
    c1, pos = deserialize(buf, 4)
    c2, _ = _dec_bytes(buf, pos)
    return Ciphertext(c1, c2)


def cyclic_fields(limit, min_h=3):
    """D = 1 mod 4 below ``limit`` whose class group is cyclic of order >= min_h."""
    from .arith import is_squarefree

    out = []
    for D in range(5, limit, 4):
        if not is_squarefree(D):
            continue
        G = class_group(D)
        if G.h >= min_h and G.is_cyclic():
            out.append(D)
    return out
