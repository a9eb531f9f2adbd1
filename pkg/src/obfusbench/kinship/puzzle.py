"""Resolving whole puzzles: several statements sharing named persons."""

from __future__ import annotations

from .chain import UnsupportedSentence, parse_puzzle
from .graph import FamilyGraph, combine, relation_name, walk_chain

SPEAKER = "<speaker>"


def _anchor_name(puzzle, chain):
    if chain.anchor is None:
        raise UnsupportedSentence("relation phrase has no anchor person")
    if chain.anchor.kind == "speaker":
        return puzzle.speaker or SPEAKER
    return chain.anchor.name


def _order(puzzle):
    """Statements in an order where each anchor is known before it is used."""
    pending = list(range(len(puzzle.statements)))
    bound = set()
    if puzzle.query:
        bound.add(puzzle.query[1])
    order = []
    while pending:
        ready = [i for i in pending
                 if _anchor_name(puzzle, puzzle.statements[i].chain) in bound]
        # prefer statements that introduce their subject
        fresh = [i for i in ready if puzzle.statements[i].subject not in bound]
        i = (fresh or ready or pending)[0]
        st = puzzle.statements[i]
        bound |= {_anchor_name(puzzle, st.chain), st.subject}
        order.append(i)
        pending.remove(i)
    return order


def puzzle_readings(puzzle, assumptions=None, *, allow_self=False):
    """Surviving (graph, bindings) readings of a puzzle."""
    assumptions = assumptions or {}
    branches = [FamilyGraph()]
    for i in _order(puzzle):
        st = puzzle.statements[i]
        anchor = _anchor_name(puzzle, st.chain)
        nxt = []
        for g in branches:
            g = g.copy()
            a = g.person(anchor)
            for h, x in walk_chain(g, a, st.chain, assumptions.get(i)):
                if not allow_self and x == a:
                    continue
                if st.subject in h.names:
                    if h.names[st.subject] != x:
                        continue
                else:
                    h.names[st.subject] = x
                if not h.set_gender(x, st.gender):
                    continue
                nxt.append(h)
        branches = nxt
    return [g for g in branches if g.constraints_hold()]


def statement_relation(puzzle, g, i):
    st = puzzle.statements[i]
    return relation_name(g, g.names[_anchor_name(puzzle, st.chain)], g.names[st.subject])


def resolve_puzzle(puzzle, assumptions=None, *, allow_self=False):
    """Canonical answer(s) of a puzzle.

    With a question the result is a 1-tuple naming the queried relation;
    otherwise one relation per statement (subject relative to its anchor).
    ``assumptions`` maps a statement index to its :class:`ChainAssumptions`.
    """
    if isinstance(puzzle, str):
        puzzle = parse_puzzle(puzzle)
    readings = puzzle_readings(puzzle, assumptions, allow_self=allow_self)
    if puzzle.query:
        subject, anchor = puzzle.query
        names = []
        for g in readings:
            if subject not in g.names or anchor not in g.names:
                raise UnsupportedSentence(f"question mentions unknown person {subject!r} or {anchor!r}")
            names.append(relation_name(g, g.names[anchor], g.names[subject]))
        return (combine(names),)
    return tuple(combine([statement_relation(puzzle, g, i) for g in readings])
                 for i in range(len(puzzle.statements)))
