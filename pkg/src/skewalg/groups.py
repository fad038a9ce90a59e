"""Finite permutation groups, fully enumerated.

Permutations are tuples ``p`` with ``p[x]`` the image of ``x``.  Products
read left to right: ``g * h`` is "first ``g``, then ``h``", so that
``(g*h)[x] = h[g[x]]`` and points are acted on from the right.
"""

DEFAULT_ORDER_BOUND = 720


class GroupError(ValueError):
    pass


def compose(g, h):
    """``g * h``: apply ``g`` first."""
    return tuple(h[x] for x in g)


def invert(g):
    out = [0] * len(g)
    for x, y in enumerate(g):
        out[y] = x
    return tuple(out)


def _check_perm(p, degree):
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise GroupError(f"{list(p)} is not a permutation of 0..{degree - 1}")
    return tuple(int(x) for x in p)


class FiniteGroup:
    """Group generated by permutations; elements in breadth-first order from the identity."""

    def __init__(self, generators, degree=None, bound=DEFAULT_ORDER_BOUND, name=None):
        gens = [tuple(g) for g in generators]
        if degree is None:
            if not gens:
                raise GroupError("degree required for a group without generators")
            degree = len(gens[0])
        self.degree = degree
        self.generators = tuple(_check_perm(g, degree) for g in gens)
        self.name = name
        ident = tuple(range(degree))
        elems = [ident]
        index = {ident: 0}
        # words[k] = generator index sequence reaching element k
        self._parent_edge = [None]
        frontier = [0]
        while frontier:
            nxt = []
            for k in frontier:
                for s, g in enumerate(self.generators):
                    h = compose(elems[k], g)
                    if h not in index:
                        if len(elems) >= bound:
                            raise GroupError(f"group order exceeds the bound {bound}")
                        index[h] = len(elems)
                        elems.append(h)
                        self._parent_edge.append((k, s))
                        nxt.append(index[h])
            frontier = nxt
        self.elements = tuple(elems)
        self._index = index
        self.identity = 0
        self._mult = {}

    def __repr__(self):
        return f"FiniteGroup(order={self.order}{', ' + self.name if self.name else ''})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.elements == other.elements

    __hash__ = object.__hash__

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return self.order

    def index(self, perm):
        try:
            return self._index[tuple(perm)]
        except KeyError:
            raise GroupError(f"{list(perm)} is not an element of the group") from None

    def mul(self, i, j):
        key = (i, j)
        out = self._mult.get(key)
        if out is None:
            out = self._index[compose(self.elements[i], self.elements[j])]
            self._mult[key] = out
        return out

    def inv(self, i):
        return self._index[invert(self.elements[i])]

    def generator_indices(self):
        return [self._index[g] for g in self.generators]

    def word(self, i):
        """Generator indices whose left-to-right product is element ``i``."""
        out = []
        while self._parent_edge[i] is not None:
            i, s = self._parent_edge[i]
            out.append(s)
        return out[::-1]

    def bfs_edges(self):
        """``(k, s, child)`` spanning-tree edges in enumeration order."""
        for child, edge in enumerate(self._parent_edge):
            if edge is not None:
                yield edge[0], edge[1], child

    def whole(self):
        return Subgroup(self, range(self.order))

    def trivial_subgroup(self):
        return Subgroup(self, [self.identity])

    def subgroup_generated(self, idxs):
        return Subgroup(self, self.closure(idxs))

    def closure(self, idxs):
        """Set of element indices generated by ``idxs``."""
        members = {self.identity}
        frontier = list(members)
        idxs = list(idxs)
        while frontier:
            nxt = []
            for k in frontier:
                for s in idxs:
                    h = self.mul(k, s)
                    if h not in members:
                        members.add(h)
                        nxt.append(h)
            frontier = nxt
        return members


class Subgroup:
    """Subset of a :class:`FiniteGroup` closed under products, with right cosets ``H r``."""

    def __init__(self, parent, members):
        self.parent = parent
        self.members = tuple(sorted(set(int(m) for m in members)))
        mset = set(self.members)
        if parent.identity not in mset:
            raise GroupError("subgroup must contain the identity")
        for a in self.members:
            for b in self.members:
                if parent.mul(a, b) not in mset:
                    raise GroupError("subset is not closed under multiplication")
        self._mset = mset
        self._cosets()
        self.generators = self._small_generators()

    def __repr__(self):
        return f"Subgroup(order={self.order}, index={self.index})"

    @property
    def order(self):
        return len(self.members)

    @property
    def index(self):
        return len(self.coset_reps)

    def __contains__(self, g):
        return g in self._mset

    def is_whole(self):
        return self.order == self.parent.order

    def _cosets(self):
        G = self.parent
        rep_of = {}
        reps = []
        for g in range(G.order):
            if g in rep_of:
                continue
            reps.append(g)
            for h in self.members:
                rep_of[G.mul(h, g)] = g
        self.coset_reps = tuple(reps)
        self._rep_of = rep_of

    def decompose(self, g):
        """``(h, r)`` with ``g = h * r``, ``h`` in the subgroup and ``r`` a coset representative."""
        G = self.parent
        r = self._rep_of[g]
        return G.mul(g, G.inv(r)), r

    def _small_generators(self):
        G = self.parent
        gens = []
        span = {G.identity}
        for m in self.members:
            if m in span:
                continue
            gens.append(m)
            span = G.closure(gens)
        return tuple(gens)


# ------------------------------------------------------------------- actions

class GroupAction:
    """Right action of a group on ``{0..n-1}``: ``perm[g][x]`` is ``x . g``."""

    def __init__(self, group, npoints, generator_images):
        G = group
        self.group = G
        self.npoints = npoints
        imgs = [_check_perm(p, npoints) for p in generator_images]
        if len(imgs) != len(G.generators):
            raise GroupError("one image permutation per group generator is required")
        perms = [None] * G.order
        perms[G.identity] = tuple(range(npoints))
        for k, s, child in G.bfs_edges():
            perms[child] = compose(perms[k], imgs[s])
        # every Cayley-graph edge must agree for this to be a homomorphism
        for k in range(G.order):
            for s, gi in enumerate(G.generator_indices()):
                if compose(perms[k], imgs[s]) != perms[G.mul(k, gi)]:
                    raise GroupError("generator images do not define a group action")
        self.perms = tuple(perms)

    def image(self, x, g):
        return self.perms[g][x]


def stabilizer(G, action, point):
    if not isinstance(action, GroupAction):
        action = GroupAction(G, len(action[0]) if action else G.degree, action)
    if not 0 <= point < action.npoints:
        raise GroupError("point outside the acted-on set")
    return Subgroup(G, [g for g in range(G.order) if action.perms[g][point] == point])


def orbits(G, action):
    if not isinstance(action, GroupAction):
        action = GroupAction(G, len(action[0]) if action else G.degree, action)
    seen = set()
    out = []
    for x in range(action.npoints):
        if x in seen:
            continue
        orb = sorted({action.perms[g][x] for g in range(G.order)})
        seen.update(orb)
        out.append(tuple(orb))
    return out


def natural_action(G):
    return GroupAction(G, G.degree, G.generators)


# -------------------------------------------------------------- named groups

def trivial_group():
    return FiniteGroup([], degree=1, name="1")


def cyclic_group(n):
    if n == 1:
        return trivial_group()
    return FiniteGroup([tuple((i + 1) % n for i in range(n))], name=f"C{n}")


def symmetric_group(n):
    if n == 1:
        return FiniteGroup([], degree=1, name="S1")
    if n == 2:
        return FiniteGroup([(1, 0)], name="S2")
    cycle = tuple((i + 1) % n for i in range(n))
    swap = (1, 0) + tuple(range(2, n))
    return FiniteGroup([cycle, swap], name=f"S{n}")


def named_group(name):
    name = name.strip().upper()
    if name in ("1", "TRIVIAL"):
        return trivial_group()
    if name[0] == "C" and name[1:].isdigit():
        return cyclic_group(int(name[1:]))
    if name[0] == "S" and name[1:].isdigit():
        return symmetric_group(int(name[1:]))
    raise GroupError(f"unknown group name {name!r}")
