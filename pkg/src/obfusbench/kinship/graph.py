"""Family graphs, relation-chain walks and naming.

Model defaults: monogamy, every person has two parents who are married to
each other, couples are of opposite gender, and a married person's children
are children of the couple.

Walk semantics. Parent and spouse steps are functional: the existing person
is reused, or created on first use. Child and sibling steps introduce a new
person. An ``only`` step is closed-world: it must denote the single person
already in the graph reached by that word, and a reading under which there is
no such person (or several) is discarded. Every ``only`` choice is re-checked
once the whole walk is done.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .vocabulary import (
    DEFINITIONS, FEMALE, MALE, PRIMITIVES, CanonicalRelation, common_name, is_a,
    opposite,
)


class KinshipError(ValueError):
    pass


class Ambiguous(KinshipError):
    def __init__(self, names):
        super().__init__(f"readings disagree: {sorted(set(names))}")
        self.names = sorted(set(names))


class Inconsistent(KinshipError):
    pass


class VocabularyGap(KinshipError):
    pass


class FamilyGraph:
    """Persons are integer ids; names bind puzzle letters to persons."""

    def __init__(self):
        self.gender = {}
        self.parents = {}
        self.spouse = {}
        self.names = {}
        # (start, path, chosen) for every "only" choice
        self.constraints = []

    def copy(self):
        g = FamilyGraph()
        g.gender = dict(self.gender)
        g.parents = dict(self.parents)
        g.spouse = dict(self.spouse)
        g.names = dict(self.names)
        g.constraints = list(self.constraints)
        return g

    def add_person(self, gender=None, name=None):
        pid = len(self.gender)
        self.gender[pid] = gender
        if name is not None:
            self.names[name] = pid
        return pid

    def person(self, name, gender=None):
        """Id bound to ``name``, creating the person on first mention."""
        if name not in self.names:
            self.add_person(gender, name)
        elif gender is not None and not self.set_gender(self.names[name], gender):
            raise Inconsistent(f"{name} cannot be {gender}")
        return self.names[name]

    def marry(self, a, b):
        if self.spouse.get(a, b) != b or self.spouse.get(b, a) != a:
            raise Inconsistent(f"{a} or {b} is already married")
        ga, gb = self.gender[a], self.gender[b]
        if ga is not None and gb is not None and ga == gb:
            raise Inconsistent(f"{a} and {b} have the same gender")
        self.spouse[a], self.spouse[b] = b, a
        if ga is not None:
            self.set_gender(b, opposite(ga))
        elif gb is not None:
            self.set_gender(a, opposite(gb))

    def add_parent_edge(self, parent, child):
        """Declare ``parent`` a parent of ``child`` (used to seed a context)."""
        known = self.parents.get(child)
        if known is None:
            other = self.spouse.get(parent)
            if other is None:
                other = self.add_person(opposite(self.gender[parent]))
                self.marry(parent, other)
            self.parents[child] = (parent, other)
        elif parent not in known:
            raise Inconsistent(f"{child} already has two parents")

    def set_gender(self, pid, gender):
        if gender is None or self.gender[pid] == gender:
            return True
        if self.gender[pid] is not None:
            return False
        self.gender[pid] = gender
        s = self.spouse.get(pid)
        return s is None or self.set_gender(s, opposite(gender))

    def children(self, pid):
        return sorted(c for c, ps in self.parents.items() if pid in ps)

    def siblings(self, pid):
        ps = self.parents.get(pid)
        if ps is None:
            return []
        return sorted(c for c, qs in self.parents.items() if c != pid and set(qs) == set(ps))

    def ensure_parents(self, pid):
        if pid not in self.parents:
            f, m = self.add_person(MALE), self.add_person(FEMALE)
            self.marry(f, m)
            self.parents[pid] = (f, m)
        return self.parents[pid]

    def ensure_spouse(self, pid):
        if pid not in self.spouse:
            s = self.add_person(opposite(self.gender[pid]))
            self.marry(pid, s)
        return self.spouse[pid]

    def existing(self, pid, op):
        """Persons already in the graph one primitive step from ``pid``."""
        kind, gender = PRIMITIVES[op]
        if kind == "parent":
            cands = list(self.parents.get(pid, ()))
        elif kind == "child":
            cands = self.children(pid)
        elif kind == "spouse":
            cands = [self.spouse[pid]] if pid in self.spouse else []
        else:
            cands = self.siblings(pid)
        return [c for c in cands if self.gender[c] in (gender, None) or gender is None]

    def closed_targets(self, pid, path):
        """Candidates for "only <path> of pid", preferring known-gender matches."""
        current = [pid]
        for op in path:
            nxt = {}
            for x in current:
                for y in self.existing(x, op):
                    nxt.setdefault(y, None)
            current = list(nxt)
        want = PRIMITIVES[path[-1]][1]
        if want is None:
            return current
        known = [c for c in current if self.gender[c] == want]
        return known or [c for c in current if self.gender[c] is None]

    def constraints_hold(self):
        return all(self.closed_targets(start, path) == [chosen]
                   for start, path, chosen in self.constraints)


def _step(g, x, op):
    """Open-world primitive step; returns the list of (graph, person) outcomes."""
    kind, gender = PRIMITIVES[op]
    out = []
    try:
        if kind == "parent":
            g = g.copy()
            for p in g.ensure_parents(x):
                h = g.copy()
                if h.set_gender(p, gender):
                    out.append((h, p))
        elif kind == "spouse":
            g = g.copy()
            if x in g.spouse or gender is None:
                s = g.ensure_spouse(x)
            elif g.set_gender(x, opposite(gender)):
                s = g.ensure_spouse(x)
            else:
                return []
            if g.set_gender(s, gender):
                out.append((g, s))
        elif kind == "child":
            g = g.copy()
            s = g.ensure_spouse(x)
            c = g.add_person(gender)
            g.parents[c] = (x, s)
            out.append((g, c))
        else:
            g = g.copy()
            ps = g.ensure_parents(x)
            c = g.add_person(gender)
            g.parents[c] = ps
            out.append((g, c))
    except Inconsistent:
        return []
    return out


def _closed_step(g, x, path):
    targets = g.closed_targets(x, path)
    if len(targets) != 1:
        return []
    g = g.copy()
    if not g.set_gender(targets[0], PRIMITIVES[path[-1]][1]):
        return []
    g.constraints.append((x, tuple(path), targets[0]))
    return [(g, targets[0])]


@dataclass(frozen=True)
class ChainAssumptions:
    """Declared reading of a chain.

    ``readings`` pins a step (by index) to one labelled alternative of its
    word (or a collection of labels), ``only`` marks single primitives ``(step, primitive)`` as
    closed-world, and ``anchor_role`` lists steps naming the anchor itself.
    """

    readings: dict = field(default_factory=dict)
    only: frozenset = frozenset()
    anchor_role: frozenset = frozenset()


def walk_chain(g, start, chain, assumptions=None):
    """All (graph, person) outcomes of walking ``chain`` from ``start``."""
    a = assumptions or ChainAssumptions()
    states = [(g, start)]
    for i, step in enumerate(chain.steps):
        alts = DEFINITIONS[step.word]
        if i in a.readings:
            wanted = a.readings[i]
            wanted = {wanted} if isinstance(wanted, str) else set(wanted)
            alts = [alt for alt in alts if alt[0] in wanted]
            if not alts:
                raise KeyError(f"{step.word!r} has no reading among {sorted(wanted)}")
        if i in a.anchor_role:
            # the word names the anchor's own role, so only its gender matters
            gender = PRIMITIVES[alts[0][1][-1]][1]
            states = [(h, x) for h, x in ((h.copy(), x) for h, x in states)
                      if h.set_gender(x, gender)]
            continue
        nxt = []
        for h, x in states:
            for _, path in alts:
                if step.only:
                    nxt += _closed_step(h, x, path)
                    continue
                cur = [(h, x)]
                for j, op in enumerate(path):
                    fn = _closed_step if (i, j) in a.only else None
                    cur = [o for hh, xx in cur
                           for o in (fn(hh, xx, [op]) if fn else _step(hh, xx, op))]
                nxt += cur
        states = nxt
    return states


def _shortest_paths(g, a, b):
    """Every shortest labelled path from ``a`` to ``b``."""
    def neighbours(x):
        for p in g.parents.get(x, ()):
            yield "up", p
        for c in g.children(x):
            yield "down", c
        if x in g.spouse:
            yield "sp", g.spouse[x]

    dist = {a: 0}
    preds = {a: []}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for label, y in neighbours(x):
            if y not in dist:
                dist[y] = dist[x] + 1
                preds[y] = [(x, label)]
                queue.append(y)
            elif dist[y] == dist[x] + 1:
                preds[y].append((x, label))
    if b not in dist:
        return []

    def back(y):
        if y == a:
            yield []
            return
        for x, label in preds[y]:
            for p in back(x):
                yield p + [(label, y)]

    return list(back(b))


# label pattern -> (male, female, neutral, inherits lineage from the first parent)
_PATTERNS = {
    ("up",): ("father", "mother", "parent", False),
    ("down",): ("son", "daughter", "child", False),
    ("sp",): ("husband", "wife", "spouse", False),
    ("up", "down"): ("brother", "sister", "sibling", False),
    ("up", "up"): ("grandfather", "grandmother", "grandparent", True),
    ("up", "up", "up"): ("great-grandfather", "great-grandmother", "great-grandparent", False),
    ("down", "down"): ("grandson", "granddaughter", "grandchild", False),
    ("down", "down", "down"): ("great-grandson", "great-granddaughter", "great-grandchild", False),
    ("up", "up", "down"): ("uncle", "aunt", "uncle-or-aunt", True),
    ("up", "up", "down", "sp"): ("uncle", "aunt", "uncle-or-aunt", False),
    ("up", "down", "down"): ("nephew", "niece", "nephew-or-niece", False),
    ("sp", "up", "down", "down"): ("nephew", "niece", "nephew-or-niece", False),
    ("up", "up", "down", "down"): ("cousin-brother", "cousin-sister", "cousin", False),
    ("sp", "up"): ("father-in-law", "mother-in-law", "parent-in-law", False),
    ("down", "sp"): ("son-in-law", "daughter-in-law", "child-in-law", False),
    ("up", "down", "sp"): ("brother-in-law", "sister-in-law", "sibling-in-law", False),
    ("sp", "up", "down"): ("brother-in-law", "sister-in-law", "sibling-in-law", False),
    ("down", "down", "sp"): ("grandson-in-law", "granddaughter-in-law", "grandchild-in-law", False),
}


def _name_path(g, path, target):
    entry = _PATTERNS.get(tuple(label for label, _ in path))
    if entry is None:
        return None
    male, female, neutral, by_line = entry
    gender = g.gender[target]
    name = {MALE: male, FEMALE: female}.get(gender, neutral)
    if by_line and gender is not None:
        line = g.gender[path[0][1]]
        if line is not None:
            name = ("paternal-" if line == MALE else "maternal-") + name
    return name


def relation_name(g, anchor, target):
    """Name of ``target`` as a relative of ``anchor``, or None if unnamed."""
    if anchor == target:
        return "self"
    for path in sorted(_shortest_paths(g, anchor, target), key=lambda p: [l for l, _ in p]):
        name = _name_path(g, path, target)
        if name is not None:
            return name
    return None


def combine(names):
    """Most specific name shared by all readings; raises if there is none."""
    if not names:
        raise Inconsistent("no reading satisfies the uniqueness constraints")
    if any(n is None for n in names):
        raise VocabularyGap("a reading ends at a relative with no name in the vocabulary")
    name = common_name(names)
    if name is None:
        raise Ambiguous(names)
    return CanonicalRelation(name)


def resolve_chain(chain, context=None, anchor=None, *, allow_self=True, assumptions=None):
    """Name the relation that ``chain`` denotes relative to its anchor.

    ``context`` is an optional :class:`FamilyGraph`; ``anchor`` is the person
    id to start from (default: the chain's named anchor, or a new person).
    """
    g = context.copy() if context is not None else FamilyGraph()
    if anchor is None:
        name = chain.anchor.name if chain.anchor and chain.anchor.kind == "person" else None
        anchor = g.person(name) if name else g.add_person()
    names = []
    for h, x in walk_chain(g, anchor, chain, assumptions):
        if not h.constraints_hold() or (not allow_self and x == anchor):
            continue
        names.append(relation_name(h, anchor, x))
    return combine(names)


def readings_within(word, general):
    """Labels of the alternatives of ``word`` whose relation specializes ``general``."""
    out = []
    for label, path in DEFINITIONS[word]:
        chain_ = _single(word)
        try:
            name = resolve_chain(chain_, assumptions=ChainAssumptions({0: label})).name
        except KinshipError:
            continue
        if is_a(name, general):
            out.append(label)
    return out


def _single(word):
    from .chain import RelationChain, Step
    return RelationChain((Step(word),))
