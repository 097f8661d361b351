"""Black-box functions queried by the algorithms.

Truth tables are uint8 arrays indexed big-endian (index ``x`` is the bit
string ``x1..xn`` with ``x1`` most significant). For exhaustive sweeps a
table is also addressable as a ``2**n``-bit integer whose most significant
bit is ``f(0)``, i.e. ``int(table_string, 2)``.

Each oracle exposes two views: :meth:`BooleanOracle.query` is the counted
black box used by classical solvers, while :attr:`BooleanOracle.table` is the
uncounted whole-table view used by the simulator, where one oracle
application counts as a single quantum query.
"""

from __future__ import annotations

import enum
import itertools
import math
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_PROMISE_N = 4


def parity(v: int) -> int:
    return bin(v).count("1") & 1


def dot2(a: int, x: int) -> int:
    """Inner product of two bit strings modulo 2."""
    return parity(a & x)


def to_bits(v: int, n: int) -> str:
    return format(v, f"0{n}b")


def from_bits(bits: str, n: int | None = None) -> int:
    bits = bits.strip()
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a bit string: {bits!r}")
    if n is not None and len(bits) != n:
        raise ValueError(f"expected {n} bits, got {len(bits)} in {bits!r}")
    return int(bits, 2)


class PromiseClass(enum.Enum):
    CONSTANT = "constant"
    BALANCED = "balanced"
    NEITHER = "neither"


class PromiseViolationError(ValueError):
    """Raised when an oracle breaks the constant-or-balanced promise."""


class BooleanOracle:
    """A function ``{0,1}^n -> {0,1}`` given by its truth table."""

    def __init__(self, n: int, table: Sequence[int] | np.ndarray) -> None:
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        arr = np.array(table, dtype=np.uint8).reshape(-1)
        if arr.shape[0] != 1 << n:
            raise ValueError(f"truth table for n={n} must have {1 << n} entries, got {arr.shape[0]}")
        if np.any(arr > 1):
            raise ValueError("truth table entries must be 0 or 1")
        arr.setflags(write=False)
        self.n = n
        self._table = arr
        self._lock = threading.Lock()
        self._queries = 0
        self._applications = 0

    @classmethod
    def from_string(cls, bits: str) -> BooleanOracle:
        bits = bits.strip()
        if set(bits) - {"0", "1"}:
            raise ValueError(f"truth table may only contain '0' and '1': {bits!r}")
        n = len(bits).bit_length() - 1
        if n < 1 or len(bits) != 1 << n:
            raise ValueError(f"truth table length {len(bits)} is not a power of two >= 2")
        return cls(n, [int(b) for b in bits])

    @classmethod
    def from_int(cls, n: int, value: int) -> BooleanOracle:
        size = 1 << n
        if not 0 <= value < 1 << size:
            raise ValueError(f"table integer out of range for n={n}")
        return cls(n, [(value >> (size - 1 - x)) & 1 for x in range(size)])

    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def query_count(self) -> int:
        return self._queries

    @property
    def quantum_queries(self) -> int:
        return self._applications

    def query(self, x: int) -> int:
        """Counted black-box evaluation of ``f(x)``."""
        if not 0 <= x < 1 << self.n:
            raise ValueError(f"query index {x} out of range for n={self.n}")
        with self._lock:
            self._queries += 1
        return int(self._table[x])

    def note_application(self) -> None:
        with self._lock:
            self._applications += 1

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self._table.tolist())

    def to_int(self) -> int:
        return int(self.to_string(), 2)

    def popcount(self) -> int:
        return int(self._table.sum(dtype=np.int64))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BooleanOracle):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._table, other._table))

    def __hash__(self) -> int:
        return hash((self.n, self._table.tobytes()))

    def __repr__(self) -> str:
        body = self.to_string() if self.n <= 5 else f"{self.popcount()} ones"
        return f"BooleanOracle(n={self.n}, {body})"

    def __getstate__(self) -> dict:
        state = self.__dict__.copy()
        del state["_lock"]
        return state

    def __setstate__(self, state: dict) -> None:
        self.__dict__.update(state)
        self._lock = threading.Lock()


@dataclass(frozen=True, order=True)
class LinearBooleanFunction:
    """``f(x) = (a . x) XOR c``; ``a`` is an n-bit integer, big-endian."""

    n: int
    a: int
    c: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.a < 1 << self.n:
            raise ValueError(f"a={self.a} does not fit in {self.n} bits")
        if self.c not in (0, 1):
            raise ValueError("c must be 0 or 1")

    @classmethod
    def parse(cls, spec: str) -> LinearBooleanFunction:
        """Parse ``"c=0,a=101"``."""
        fields: dict[str, str] = {}
        for part in spec.split(","):
            key, sep, val = part.partition("=")
            if not sep:
                raise ValueError(f"malformed linear spec {spec!r}, expected c=C,a=BITS")
            fields[key.strip()] = val.strip()
        if set(fields) != {"a", "c"}:
            raise ValueError(f"linear spec needs exactly c and a, got {sorted(fields)}")
        a_bits = fields["a"]
        a = from_bits(a_bits)
        if fields["c"] not in ("0", "1"):
            raise ValueError(f"c must be 0 or 1, got {fields['c']!r}")
        return cls(len(a_bits), a, int(fields["c"]))

    @property
    def a_bits(self) -> str:
        return to_bits(self.a, self.n)

    def bit(self, k: int) -> int:
        """``a_k`` for qubit ``k`` in 1..n."""
        return (self.a >> (self.n - k)) & 1

    def __call__(self, x: int) -> int:
        return dot2(self.a, x) ^ self.c

    def __str__(self) -> str:
        return f"c={self.c},a={self.a_bits}"


class VectorOracle:
    """A 2-to-1 function ``{0,1}^n -> {0,1}^n`` with non-zero period ``a``."""

    def __init__(self, n: int, table: Sequence[int] | np.ndarray, period: int) -> None:
        arr = np.array(table, dtype=np.int64).reshape(-1)
        if arr.shape[0] != 1 << n:
            raise ValueError(f"table for n={n} must have {1 << n} entries")
        if np.any(arr < 0) or np.any(arr >= 1 << n):
            raise ValueError(f"table outputs must be {n}-bit strings")
        if not 0 < period < 1 << n:
            raise ValueError("period must be a non-zero n-bit string")
        xs = np.arange(1 << n)
        if not np.array_equal(arr, arr[xs ^ period]):
            raise ValueError("table is not invariant under x -> x XOR period")
        if np.unique(arr).shape[0] != 1 << (n - 1):
            raise ValueError("table is not exactly 2-to-1")
        arr.setflags(write=False)
        self.n = n
        self.period = period
        self._table = arr
        self._lock = threading.Lock()
        self._applications = 0

    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def quantum_queries(self) -> int:
        return self._applications

    def note_application(self) -> None:
        with self._lock:
            self._applications += 1

    def __repr__(self) -> str:
        return f"VectorOracle(n={self.n}, a={to_bits(self.period, self.n)})"

    def __getstate__(self) -> dict:
        state = self.__dict__.copy()
        del state["_lock"]
        return state

    def __setstate__(self, state: dict) -> None:
        self.__dict__.update(state)
        self._lock = threading.Lock()


def expand_linear(f: LinearBooleanFunction) -> BooleanOracle:
    xs = np.arange(1 << f.n, dtype=np.int64)
    masked = xs & f.a
    par = np.zeros_like(masked)
    for k in range(f.n):
        par ^= (masked >> k) & 1
    return BooleanOracle(f.n, (par ^ f.c).astype(np.uint8))


def classify(f: BooleanOracle) -> PromiseClass:
    """Whole-table inspection; leaves the query counter alone."""
    ones = f.popcount()
    if ones in (0, 1 << f.n):
        return PromiseClass.CONSTANT
    if ones == 1 << (f.n - 1):
        return PromiseClass.BALANCED
    return PromiseClass.NEITHER


def identify_linear(f: BooleanOracle) -> LinearBooleanFunction | None:
    table = f.table
    c = int(table[0])
    a = 0
    for k in range(1, f.n + 1):
        a = (a << 1) | (int(table[1 << (f.n - k)]) ^ c)
    candidate = LinearBooleanFunction(f.n, a, c)
    if np.array_equal(expand_linear(candidate).table, table):
        return candidate
    return None


def enumerate_linear_family(n: int) -> Iterator[LinearBooleanFunction]:
    """All ``2**(n+1)`` affine functions, ordered by ``(c, a)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    for c in (0, 1):
        for a in range(1 << n):
            yield LinearBooleanFunction(n, a, c)


def promise_population(n: int) -> int:
    return 2 + math.comb(1 << n, 1 << (n - 1))


def enumerate_promise_functions(n: int) -> Iterator[BooleanOracle]:
    """Both constants, then every balanced table in lexicographic order of its ones."""
    if not 1 <= n <= MAX_PROMISE_N:
        raise ValueError(f"promise enumeration supports 1 <= n <= {MAX_PROMISE_N}, got {n}")
    size = 1 << n
    yield BooleanOracle(n, np.zeros(size, dtype=np.uint8))
    yield BooleanOracle(n, np.ones(size, dtype=np.uint8))
    for ones in itertools.combinations(range(size), size // 2):
        table = np.zeros(size, dtype=np.uint8)
        table[list(ones)] = 1
        yield BooleanOracle(n, table)


def make_simon_oracle(n: int, a: int) -> VectorOracle:
    """Label each coset ``{x, x^a}`` by the rank of its smaller member."""
    if not 0 < a < 1 << n:
        raise ValueError(f"Simon period must be a non-zero {n}-bit string")
    table = np.empty(1 << n, dtype=np.int64)
    rank = 0
    for x in range(1 << n):
        partner = x ^ a
        if x < partner:
            table[x] = table[partner] = rank
            rank += 1
    return VectorOracle(n, table, a)


def make_grover_oracle(n: int, marked: Iterable[int]) -> BooleanOracle:
    table = np.zeros(1 << n, dtype=np.uint8)
    for x in marked:
        if not 0 <= x < 1 << n:
            raise ValueError(f"marked index {x} out of range for n={n}")
        table[x] = 1
    return BooleanOracle(n, table)


def factor_oracle_local(f: LinearBooleanFunction) -> tuple[int, list[np.ndarray]]:
    """Split the phase oracle of ``f`` into a sign and ``n`` single-qubit diagonals.

    Gate ``k`` is ``diag(1, (-1)**a_k)``; with the sign ``(-1)**c`` their
    tensor product equals ``diag((-1)**f(x))`` exactly.
    """
    sign = -1 if f.c else 1
    gates = [np.diag([1.0, -1.0 if f.bit(k) else 1.0]) for k in range(1, f.n + 1)]
    return sign, gates


def local_gate_diagonal(sign: int, gates: Sequence[np.ndarray]) -> np.ndarray:
    diag = np.array([float(sign)])
    for g in gates:
        diag = np.kron(diag, np.diag(g))
    return diag


# text formats


def format_truth_table(f: BooleanOracle) -> str:
    return f"n={f.n}\n{f.to_string()}\n"


def parse_truth_table(text: str) -> BooleanOracle:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != 2 or not lines[0].startswith("n="):
        raise ValueError("truth table file must be 'n=<k>' followed by one line of bits")
    try:
        n = int(lines[0][2:])
    except ValueError:
        raise ValueError(f"bad header {lines[0]!r}") from None
    f = BooleanOracle.from_string(lines[1])
    if f.n != n:
        raise ValueError(f"header says n={n} but table has {len(lines[1])} entries")
    return f


def read_truth_table(path: str | Path) -> BooleanOracle:
    return parse_truth_table(Path(path).read_text())


def format_simon_table(f: VectorOracle) -> str:
    rows = [f"n={f.n} a={to_bits(f.period, f.n)}"]
    rows += [to_bits(int(v), f.n) for v in f.table]
    return "\n".join(rows) + "\n"


def parse_simon_table(text: str) -> VectorOracle:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty Simon table")
    head = dict(part.split("=", 1) for part in lines[0].split() if "=" in part)
    if set(head) != {"n", "a"}:
        raise ValueError("Simon table header must be 'n=<k> a=<bits>'")
    n = int(head["n"])
    a = from_bits(head["a"], n)
    body = lines[1:]
    if len(body) != 1 << n:
        raise ValueError(f"expected {1 << n} table rows, found {len(body)}")
    return VectorOracle(n, [from_bits(r, n) for r in body], a)
