from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sklearn.base import clone

from obfusbench.spatial import (
    DetourInserter, Displacement, Drift, InvalidMagnitudeRange, InvalidMove, Invariant,
    Move, MovementPath, Note, add_distractors, compile_relative, insert_detours,
    net_displacement, parse_surface, path_from_list, path_to_list, render_move,
    substitute_surface, verify_invariance,
)

BASE = MovementPath.of("N5", "E3")
DETOURED = MovementPath.of("N6", "E4", "S6", "E3", "W4", "N5")


def test_worked_example_displacement():
    d = net_displacement(BASE)
    assert (d.east, d.north) == (3, 5)
    assert d.squared_distance == 34
    assert d.bearing == "North-East"
    assert d.report() == "5.83 km away, North-East"


def test_detoured_worked_path():
    assert net_displacement(DETOURED) == net_displacement(BASE)
    assert verify_invariance(BASE, DETOURED) == Invariant()


def test_empty_path():
    d = net_displacement(MovementPath(()))
    assert (d.east, d.north, d.bearing) == (0, 0, "Origin")


def test_drift():
    v = verify_invariance(BASE, MovementPath.of("N5", "E4"))
    assert isinstance(v, Drift) and v.delta == Displacement(Fraction(1), Fraction(0))
    assert v.to_dict() == {"kind": "drift", "east": "1", "north": "0"}


@pytest.mark.parametrize("east, north, label", [
    (0, 2, "North"), (0, -2, "South"), (2, 0, "East"), (-2, 0, "West"),
    (1, 1, "North-East"), (-1, 1, "North-West"), (1, -1, "South-East"), (-1, -1, "South-West"),
])
def test_bearings(east, north, label):
    assert Displacement(Fraction(east), Fraction(north)).bearing == label


def test_round_half_up():
    # sqrt(0.015625) = 0.125 exactly: half-up gives 0.13 where banker's rounding gives 0.12
    d = Displacement(Fraction(1, 8), Fraction(0))
    assert str(d.rounded_distance()) == "0.13"


def test_move_validation():
    with pytest.raises(InvalidMove):
        Move("NE", 1)
    with pytest.raises(InvalidMove):
        Move("N", -1)
    assert Move.parse("E3/2").magnitude == Fraction(3, 2)


def test_adjacent_pair():
    p = MovementPath.of("N5", "E2", "W2")
    assert net_displacement(p) == Displacement(Fraction(0), Fraction(5))


def test_insert_detours_shape():
    out = insert_detours(BASE, 2, 9)
    assert len(out) == len(BASE) + 4
    assert insert_detours(BASE, 2, 9) == out


@pytest.mark.parametrize("rng", [(0, 3), (4, 2), (1.5, 3), "x", (1,)])
def test_invalid_magnitude_range(rng):
    with pytest.raises(InvalidMagnitudeRange):
        insert_detours(BASE, 1, 0, rng)


def test_pairs_must_be_positive():
    with pytest.raises(ValueError):
        insert_detours(BASE, 0, 0)


def _is_subsequence(small, big):
    it = iter(big)
    return all(m in it for m in small)


moves = st.builds(Move, st.sampled_from("NSEW"),
                  st.fractions(min_value=0, max_value=20, max_denominator=6))
paths = st.lists(moves, max_size=8).map(lambda ms: MovementPath(tuple(ms)))


@settings(max_examples=300)
@given(paths, st.integers(1, 6), st.integers(-(2 ** 63), 2 ** 64 - 1))
def test_detours_invariant_and_subsequence(p, k, seed):
    out = insert_detours(p, k, seed)
    assert verify_invariance(p, out) == Invariant()
    assert len(out) == len(p) + 2 * k
    assert _is_subsequence(p.moves, out.moves)


def test_notes_follow_their_moves():
    p = MovementPath(BASE.moves, (Note(1, "turn", "right"),))
    for seed in range(50):
        out = insert_detours(p, 3, seed)
        (note,) = out.notes
        # the turn still precedes the base move it annotated
        assert out.moves[note.index] == BASE.moves[1]
        assert BASE.moves[0] in out.moves[:note.index]


def test_clock_face_rendering():
    assert render_move(Move("N", 5)) == "facing 12 o'clock, walk 5 km"
    text, _ = substitute_surface(MovementPath.of("S1", "E2", "W3"))
    assert "facing 6 o'clock" in text.lower()
    assert "Facing 3 o'clock, walk 2 km." in text and "Facing 9 o'clock, walk 3 km." in text


def test_turn_rendering():
    p = compile_relative([(None, 1), ("right", 1), ("left", 1), ("back", 1)])
    text, _ = substitute_surface(p)
    assert "Rotate 1 quarter-turn clockwise." in text
    assert "Rotate 1 quarter-turn counterclockwise." in text
    assert "Rotate 2 quarter-turns." in text


def test_distractors_are_zero_distance():
    p = add_distractors(BASE, 3, 1)
    assert net_displacement(p) == net_displacement(BASE)
    text, segments = substitute_surface(p)
    stops = [s for s in segments if s["kind"] == "distractor"]
    assert len(stops) == 3 and all(s["distance"] == "0" for s in stops)
    assert parse_surface(text).moves == BASE.moves


@given(paths, st.integers(0, 2 ** 32))
def test_surface_parses_back(p, seed):
    text, _ = substitute_surface(add_distractors(p, 2, seed))
    assert parse_surface(text).moves == p.moves


def test_compile_relative_shop_example():
    steps = [(None, 6), ("right", 4), ("right", 6), ("left", 3), ("back", 4), ("right", 5)]
    p = compile_relative(steps, initial_heading="N")
    assert p.moves == DETOURED.moves
    assert net_displacement(p).report() == "5.83 km away, North-East"


def test_compile_relative_needs_known_heading():
    with pytest.raises(InvalidMove):
        compile_relative([(None, 1)], initial_heading="up")
    with pytest.raises(InvalidMove):
        compile_relative([("sideways", 1)])


@given(paths)
def test_serialization_round_trip(p):
    assert path_from_list(path_to_list(p)).moves == p.moves


def test_bad_serialization():
    with pytest.raises(InvalidMove):
        path_from_list([["N", 1, 0]])


def test_estimator():
    est = DetourInserter(pairs=2, seed=9, distractors=1)
    assert clone(est).get_params() == est.get_params()
    out = est.fit([BASE]).transform([BASE, [("N1")]])
    assert all(verify_invariance(b, o).invariant for b, o in zip([BASE, MovementPath.of("N1")], out))
    with pytest.raises(InvalidMagnitudeRange):
        DetourInserter(magnitude_range=(5, 1)).fit()
