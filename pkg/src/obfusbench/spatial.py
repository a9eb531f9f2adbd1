"""Direction-sense paths: exact displacement, self-canceling detours, clock-face surfaces."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction

from sklearn.base import BaseEstimator, TransformerMixin

from ._rng import derive_rng
from ._validation import check_positive_int, check_seed, check_sequence

DIRECTIONS = ("N", "E", "S", "W")
VECTORS = {"N": (0, 1), "S": (0, -1), "E": (1, 0), "W": (-1, 0)}
INVERSE = {"N": "S", "S": "N", "E": "W", "W": "E"}
WORDS = {"N": "North", "S": "South", "E": "East", "W": "West"}
TURNS = {"right": 1, "left": -1, "back": 2, None: 0, "straight": 0}


class InvalidMagnitudeRange(ValueError):
    pass


class InvalidMove(ValueError):
    pass


@dataclass(frozen=True)
class Move:
    direction: str
    magnitude: Fraction

    def __post_init__(self):
        if self.direction not in VECTORS:
            raise InvalidMove(f"direction must be one of N, S, E, W, got {self.direction!r}")
        mag = Fraction(self.magnitude)
        if mag < 0:
            raise InvalidMove(f"magnitude must be non-negative, got {mag}")
        object.__setattr__(self, "magnitude", mag)

    @classmethod
    def parse(cls, token):
        """``"N5"``, ``"E3/2"`` and the like."""
        m = re.fullmatch(r"\s*([NSEW])\s*(\d+(?:/\d+)?)\s*", token)
        if not m:
            raise InvalidMove(f"cannot parse move {token!r}")
        return cls(m.group(1), Fraction(m.group(2)))

    def inverse(self):
        return Move(INVERSE[self.direction], self.magnitude)

    def __str__(self):
        return f"{self.direction}{self.magnitude}"


@dataclass(frozen=True)
class Note:
    """A narrative tag shown before move ``index`` (``index == len`` means at the end).

    ``kind`` is ``"turn"`` (value right/left/back) or ``"distractor"`` (value is
    the sentence). Neither adds distance.
    """

    index: int
    kind: str
    value: str


def moves_of(items):
    return tuple(m if isinstance(m, Move) else Move.parse(m) for m in items)


@dataclass(frozen=True)
class MovementPath:
    moves: tuple
    notes: tuple = ()
    unit: str = "km"

    def __post_init__(self):
        object.__setattr__(self, "moves", moves_of(self.moves))
        object.__setattr__(self, "notes", tuple(self.notes))
        for n in self.notes:
            if not 0 <= n.index <= len(self.moves):
                raise ValueError(f"note index {n.index} outside the path")

    @classmethod
    def of(cls, *tokens, unit="km"):
        return cls(moves_of(tokens), unit=unit)

    def __len__(self):
        return len(self.moves)

    def __str__(self):
        return "[" + ", ".join(map(str, self.moves)) + "]"


_BEARINGS = {
    (0, 0): "Origin", (0, 1): "North", (0, -1): "South", (1, 0): "East", (-1, 0): "West",
    (1, 1): "North-East", (-1, 1): "North-West", (1, -1): "South-East", (-1, -1): "South-West",
}


def _sign(x):
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Displacement:
    east: Fraction
    north: Fraction

    @property
    def squared_distance(self):
        return self.east ** 2 + self.north ** 2

    @property
    def distance(self):
        return float(self.squared_distance) ** 0.5

    @property
    def bearing(self):
        return _BEARINGS[_sign(self.east), _sign(self.north)]

    def rounded_distance(self, places=2):
        """Distance rounded half-up from the exact squared distance."""
        sq = self.squared_distance
        with localcontext() as ctx:
            ctx.prec = 40
            d = (Decimal(sq.numerator) / Decimal(sq.denominator)).sqrt()
            return d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)

    def report(self, unit="km", places=2):
        """Answer string such as ``"5.83 km away, North-East"``."""
        return f"{self.rounded_distance(places)} {unit} away, {self.bearing}"

    def __sub__(self, other):
        return Displacement(self.east - other.east, self.north - other.north)


def net_displacement(p):
    east = north = Fraction(0)
    for m in (p.moves if isinstance(p, MovementPath) else moves_of(p)):
        dx, dy = VECTORS[m.direction]
        east += dx * m.magnitude
        north += dy * m.magnitude
    return Displacement(east, north)


def _check_range(magnitude_range):
    try:
        lo, hi = magnitude_range
    except (TypeError, ValueError):
        raise InvalidMagnitudeRange(f"magnitude range must be a (low, high) pair, got {magnitude_range!r}") from None
    if isinstance(lo, bool) or isinstance(hi, bool) or not (isinstance(lo, int) and isinstance(hi, int)):
        raise InvalidMagnitudeRange("magnitude range bounds must be integers")
    if lo < 1 or hi < lo:
        raise InvalidMagnitudeRange(f"need 1 <= low <= high, got {magnitude_range!r}")
    return lo, hi


def _insert(moves, notes, pos, move):
    moves.insert(pos, move)
    return [Note(n.index + 1, n.kind, n.value) if n.index >= pos else n for n in notes]


def insert_detours(p, pairs, seed, magnitude_range=(1, 9), *, stream=()):
    """Insert ``pairs`` canceling pairs ``(w, w^-1)`` at seeded positions.

    The two members need not be adjacent; base moves keep their relative
    order, so the net displacement is unchanged exactly.
    """
    pairs = check_positive_int(pairs, "pairs")
    seed = check_seed(seed)
    lo, hi = _check_range(magnitude_range)
    rng = derive_rng(seed, "direction", *stream)
    moves, notes = list(p.moves), list(p.notes)
    for _ in range(pairs):
        w = Move(rng.choice(DIRECTIONS), Fraction(rng.randint(lo, hi)))
        i = rng.randint(0, len(moves))
        notes = _insert(moves, notes, i, w)
        j = rng.randint(i + 1, len(moves))
        notes = _insert(moves, notes, j, w.inverse())
    return MovementPath(tuple(moves), tuple(notes), p.unit)


DISTRACTORS = (
    "A dog barks and they stop to shoo it away (no walking during the stop).",
    "A milkman slows them to ask directions (no extra distance).",
    "They glance at the fields without stopping.",
    "A child waves from a bicycle.",
    "A vendor calls out, selling sugarcane.",
    "They pause at a small pond to watch the ripples (no walking during the pause).",
)


def add_distractors(p, count, seed, *, stream=()):
    """Add ``count`` seeded zero-distance narrative sentences."""
    seed = check_seed(seed)
    rng = derive_rng(seed, "distractor", *stream)
    notes = list(p.notes)
    for _ in range(count):
        notes.append(Note(rng.randint(0, len(p.moves)), "distractor", rng.choice(DISTRACTORS)))
    notes.sort(key=lambda n: n.index)
    return MovementPath(p.moves, tuple(notes), p.unit)


CLOCK_RULES = {
    "directions": {"N": "facing 12 o'clock", "S": "facing 6 o'clock",
                   "E": "facing 3 o'clock", "W": "facing 9 o'clock"},
    "turns": {"right": "rotate 1 quarter-turn clockwise",
              "left": "rotate 1 quarter-turn counterclockwise",
              "back": "rotate 2 quarter-turns"},
}
PLAIN_RULES = {
    "directions": {d: "heading " + WORDS[d].lower() for d in DIRECTIONS},
    "turns": {"right": "turn right", "left": "turn left", "back": "turn back"},
}


def _fmt(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def render_move(m, rules=CLOCK_RULES, unit="km"):
    return f"{rules['directions'][m.direction]}, walk {_fmt(m.magnitude)} {unit}"


def _sentence(fragment):
    fragment = fragment[:1].upper() + fragment[1:]
    return fragment if fragment.endswith((".", "?", "!")) else fragment + "."


def substitute_surface(p, rules=CLOCK_RULES):
    """Render ``p`` as narrative text; returns ``(text, segments)``.

    ``segments`` records each sentence with the distance it contributes, so
    distractor sentences are visibly zero-distance.
    """
    by_index = {}
    for n in p.notes:
        by_index.setdefault(n.index, []).append(n)
    segments = []

    def emit_notes(i):
        for n in by_index.get(i, ()):
            text = rules["turns"][n.value] if n.kind == "turn" else n.value
            segments.append({"kind": n.kind, "text": _sentence(text), "distance": "0"})

    for i, m in enumerate(p.moves):
        emit_notes(i)
        segments.append({"kind": "move", "text": _sentence(render_move(m, rules, p.unit)),
                         "direction": m.direction, "distance": _fmt(m.magnitude)})
    emit_notes(len(p.moves))
    return " ".join(s["text"] for s in segments), segments


def parse_surface(text, rules=CLOCK_RULES, unit="km"):
    """Recover the moves from text produced by :func:`substitute_surface`."""
    phrase = {v.lower(): d for d, v in rules["directions"].items()}
    alt = "|".join(re.escape(k) for k in sorted(phrase, key=len, reverse=True))
    pat = re.compile(rf"({alt}), walk (\d+(?:/\d+)?) {re.escape(unit)}", re.IGNORECASE)
    return MovementPath(tuple(Move(phrase[d.lower()], Fraction(q)) for d, q in pat.findall(text)),
                        unit=unit)


_ORDER = ("N", "E", "S", "W")


def compile_relative(steps, initial_heading="N", unit="km"):
    """Compile heading-relative steps into absolute moves.

    ``steps`` is a sequence of ``(turn, magnitude)`` with turn one of
    ``None``/``"straight"``, ``"right"``, ``"left"`` or ``"back"``, applied
    before walking. The initial heading must be given explicitly.
    """
    if initial_heading not in VECTORS:
        raise InvalidMove(f"initial heading must be one of N, S, E, W, got {initial_heading!r}")
    heading = _ORDER.index(initial_heading)
    moves, notes = [], []
    for turn, mag in steps:
        if turn not in TURNS:
            raise InvalidMove(f"unknown turn {turn!r}")
        if TURNS[turn]:
            notes.append(Note(len(moves), "turn", turn))
        heading = (heading + TURNS[turn]) % 4
        moves.append(Move(_ORDER[heading], Fraction(mag)))
    return MovementPath(tuple(moves), tuple(notes), unit)


@dataclass(frozen=True)
class Invariant:
    kind: str = field(default="invariant", init=False)

    @property
    def invariant(self):
        return True

    def to_dict(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class Drift:
    delta: Displacement
    kind: str = field(default="drift", init=False)

    @property
    def invariant(self):
        return False

    def to_dict(self):
        return {"kind": self.kind, "east": str(self.delta.east), "north": str(self.delta.north)}


def verify_invariance(base, obf):
    """Exact comparison of net displacements; ``Drift`` carries obf minus base."""
    delta = net_displacement(obf) - net_displacement(base)
    if delta.east == 0 and delta.north == 0:
        return Invariant()
    return Drift(delta)


def path_to_list(p):
    return [[m.direction, m.magnitude.numerator, m.magnitude.denominator] for m in p.moves]


def path_from_list(items, unit="km"):
    try:
        return MovementPath(tuple(Move(d, Fraction(n, den)) for d, n, den in items), unit=unit)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidMove(f"bad serialized path {items!r}: {exc}") from None


def notes_to_list(p):
    return [[n.index, n.kind, n.value] for n in p.notes]


def notes_from_list(items):
    return tuple(Note(i, k, v) for i, k, v in items)


class DetourInserter(TransformerMixin, BaseEstimator):
    """Estimator wrapper around :func:`insert_detours` (plus optional distractors).

    Sample ``i`` of a batch uses the seed stream ``(i,)``, so results do not
    depend on batch composition order.
    """

    def __init__(self, pairs=2, seed=0, magnitude_range=(1, 9), distractors=0):
        self.pairs = pairs
        self.seed = seed
        self.magnitude_range = magnitude_range
        self.distractors = distractors

    def fit(self, X=None, y=None):
        check_positive_int(self.pairs, "pairs")
        check_seed(self.seed)
        _check_range(self.magnitude_range)
        if self.distractors < 0:
            raise ValueError("distractors must be non-negative")
        self.n_samples_seen_ = 0 if X is None else len(check_sequence(X))
        return self

    def transform(self, X):
        if not hasattr(self, "n_samples_seen_"):
            raise AttributeError("DetourInserter is not fitted; call fit first")
        out = []
        for i, p in enumerate(check_sequence(X)):
            if not isinstance(p, MovementPath):
                p = MovementPath(moves_of(p))
            q = insert_detours(p, self.pairs, self.seed, self.magnitude_range, stream=(i,))
            if self.distractors:
                q = add_distractors(q, self.distractors, self.seed, stream=(i,))
            out.append(q)
        return out
