"""Generating sets from group actions on connected graphs with finite quotient.

A group G acting on a connected graph X with finite quotient Y is generated
by: stabilizers of one lifted vertex per orbit, one element per quotient loop
carrying the lifted vertex across a chosen lift of the loop, and one element
per non-tree quotient edge carrying the free endpoint of a chosen lift back
into the lifted tree.  This module implements that assembly generically, for
finite permutation instances where every claim can be checked exhaustively.
"""

from dataclasses import dataclass


class ActionInstanceError(ValueError):
    pass


class AssemblyConditionError(ValueError):
    """An assembly element fails its defining condition; names the edge."""


def perm_mul(p, q):
    """Composition: apply q first, then p."""
    return tuple(p[q[i]] for i in range(len(p)))


def perm_inv(p):
    out = [0] * len(p)
    for i, pi in enumerate(p):
        out[pi] = i
    return tuple(out)


def perm_closure(gens, n):
    """Subgroup of S_n generated by gens, as a sorted tuple of permutations."""
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = perm_mul(g, p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return tuple(sorted(seen))


@dataclass(frozen=True)
class FiniteActionInstance:
    """A finite group acting on a finite connected graph by permutations."""
    n_vertices: int
    edges: tuple       # unordered pairs (i, j) with i < j, no self-loops
    elements: tuple    # permutations of range(n_vertices), closed, with identity

    def validate(self):
        n = self.n_vertices
        ident = tuple(range(n))
        els = set(self.elements)
        if ident not in els:
            raise ActionInstanceError("group lacks the identity")
        for p in self.elements:
            if tuple(sorted(p)) != ident:
                raise ActionInstanceError("element %r is not a permutation" % (p,))
        for p in self.elements:
            for q in self.elements:
                if perm_mul(p, q) not in els:
                    raise ActionInstanceError("group not closed under composition")
        eset = set(self.edges)
        for (i, j) in self.edges:
            if not (0 <= i < j < n):
                raise ActionInstanceError("malformed edge (%d, %d)" % (i, j))
        for p in self.elements:
            for e in self.edges:
                if _edge_image(p, e) not in eset:
                    raise ActionInstanceError(
                        "element %r does not preserve edge %r" % (p, e))
        if not _connected(n, self.edges):
            raise ActionInstanceError("graph is disconnected")


def _edge_image(p, e):
    a, b = p[e[0]], p[e[1]]
    return (a, b) if a < b else (b, a)


def _connected(n, edges):
    adj = [[] for _ in range(n)]
    for (i, j) in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def _orbit_partition(items, act, elements):
    """Orbit id per item, scanning in item order so roots are least members."""
    index = {x: i for i, x in enumerate(items)}
    orbit_of = [-1] * len(items)
    roots = []
    for start in range(len(items)):
        if orbit_of[start] >= 0:
            continue
        oid = len(roots)
        roots.append(start)
        stack = [start]
        orbit_of[start] = oid
        while stack:
            cur = stack.pop()
            for g in elements:
                nxt = index[act(g, items[cur])]
                if orbit_of[nxt] < 0:
                    orbit_of[nxt] = oid
                    stack.append(nxt)
    return orbit_of, roots


@dataclass(frozen=True)
class AssemblyInput:
    """Everything the generating-set assembly needs, ready for eager checking.

    Indices refer to vertex orbits.  Each loop entry is
    (orbit id i, other endpoint of the chosen non-loop lift at tree_vertex[i],
    group element); each edge entry is (orbit i, orbit j, free endpoint w of
    the chosen lift incident to tree_vertex[i], group element).
    """
    instance: FiniteActionInstance
    tree_vertices: tuple   # lifted vertex per orbit
    stabilizer_gens: tuple  # per orbit: tuple of group elements
    loop_entries: tuple    # (orbit, other_vertex, element)
    edge_entries: tuple    # (orbit_i, orbit_j, free_vertex, element)


def assemble(inp):
    """Concatenate stabilizers, loop elements, and edge elements.

    Conditions are checked eagerly: a loop element must carry the lifted
    vertex to the other endpoint of its lift, an edge element must carry the
    free endpoint of its lift to the lifted vertex of the far orbit.  The
    output order is deterministic and duplicates are dropped.
    """
    eset = set(inp.instance.edges)
    out = []
    for i, gens in enumerate(inp.stabilizer_gens):
        v = inp.tree_vertices[i]
        for g in gens:
            if g[v] != v:
                raise AssemblyConditionError(
                    "stabilizer element %r moves vertex %d" % (g, v))
            out.append(g)
    for (i, other, g) in inp.loop_entries:
        v = inp.tree_vertices[i]
        e = (v, other) if v < other else (other, v)
        if other == v or e not in eset:
            raise AssemblyConditionError("loop lift %r is not an edge" % (e,))
        if g[v] != other:
            raise AssemblyConditionError(
                "loop element at orbit %d fails on edge %r" % (i, e))
        out.append(g)
    for (i, j, free, g) in inp.edge_entries:
        v = inp.tree_vertices[i]
        e = (v, free) if v < free else (free, v)
        if e not in eset:
            raise AssemblyConditionError("edge lift %r is not an edge" % (e,))
        if g[free] != inp.tree_vertices[j]:
            raise AssemblyConditionError(
                "edge element for orbits (%d, %d) fails on edge %r" % (i, j, e))
        out.append(g)
    return tuple(dict.fromkeys(out))


def verify_finite_instance(instance):
    """Build the full assembly for a finite instance and check generation.

    Computes vertex and edge orbits, a spanning tree of the quotient, a
    greedy lex-least lift, stabilizers by direct sweep, and loop/edge
    elements by search over the group; returns (ok, diagnostics) where ok
    means the assembled set generates the whole group.
    """
    instance.validate()
    els = tuple(sorted(instance.elements))
    n = instance.n_vertices
    verts = tuple(range(n))
    vorb, vroots = _orbit_partition(verts, lambda g, v: g[v], els)
    eorb, eroots = _orbit_partition(instance.edges, _edge_image, els)

    # quotient edges, separated into loops and cross edges between orbits
    loops = []
    cross = []
    for oid, root in enumerate(eroots):
        a, b = instance.edges[root]
        oa, ob = vorb[a], vorb[b]
        if oa == ob:
            loops.append((oa, oid))
        else:
            cross.append(((min(oa, ob), max(oa, ob)), oid))
    cross.sort()

    # spanning tree of the quotient: BFS from orbit 0 over cross edge orbits
    n_orb = len(vroots)
    tree_edges = {}
    seen = {0}
    frontier = [0]
    while frontier:
        base = frontier.pop(0)
        for ends, oid in cross:
            if base in ends:
                other = ends[0] if ends[1] == base else ends[1]
                if other not in seen:
                    seen.add(other)
                    tree_edges[(min(base, other), max(base, other))] = oid
                    frontier.append(other)
    if seen != set(range(n_orb)):
        raise ActionInstanceError("quotient graph is disconnected")

    adj = [[] for _ in range(n)]
    for (i, j) in instance.edges:
        adj[i].append(j)
        adj[j].append(i)

    # greedy lift of the tree: least vertex per newly reached orbit
    tree_vertices = [None] * n_orb
    tree_vertices[0] = vroots[0]
    placed = {0}
    frontier = [0]
    while frontier:
        base = frontier.pop(0)
        for (oi, oj) in sorted(tree_edges):
            other = None
            if oi == base and oj not in placed:
                other = oj
            elif oj == base and oi not in placed:
                other = oi
            if other is None:
                continue
            cands = sorted(w for w in adj[tree_vertices[base]]
                           if vorb[w] == other)
            assert cands, "tree edge has no lift at the lifted vertex"
            tree_vertices[other] = cands[0]
            placed.add(other)
            frontier.append(other)
    tree_vertices = tuple(tree_vertices)

    stabilizer_gens = tuple(
        tuple(g for g in els if g[tree_vertices[i]] == tree_vertices[i])
        for i in range(n_orb))

    loop_entries = []
    for (oi, oid) in loops:
        v = tree_vertices[oi]
        cands = sorted(w for w in adj[v]
                       if eorb[_edge_index(instance.edges, v, w)] == oid)
        assert cands, "loop orbit has no lift at the lifted vertex"
        other = cands[0]
        g = next(g for g in els if g[v] == other)
        loop_entries.append((oi, other, g))

    edge_entries = []
    tree_ids = set(tree_edges.values())
    for (oi, oj), oid in cross:
        if oid in tree_ids:
            continue
        v = tree_vertices[oi]
        cands = sorted(w for w in adj[v]
                       if eorb[_edge_index(instance.edges, v, w)] == oid)
        assert cands
        # prefer a free endpoint outside the lifted tree
        outside = [w for w in cands if w not in tree_vertices]
        free = outside[0] if outside else cands[0]
        g = next(g for g in els if g[free] == tree_vertices[oj])
        edge_entries.append((oi, oj, free, g))

    inp = AssemblyInput(instance=instance, tree_vertices=tree_vertices,
                        stabilizer_gens=stabilizer_gens,
                        loop_entries=tuple(loop_entries),
                        edge_entries=tuple(edge_entries))
    gens = assemble(inp)
    closure = perm_closure(gens, n) if gens else (tuple(range(n)),)
    ok = set(closure) == set(els)
    diagnostics = {
        "vertex_orbits": n_orb,
        "loop_orbits": len(loops),
        "cross_edge_orbits": len(cross),
        "non_tree_edge_orbits": len(edge_entries),
        "tree_vertices": tree_vertices,
        "assembled": len(gens),
        "group_order": len(els),
        "closure_order": len(closure),
        "input": inp,
    }
    return ok, diagnostics


def _edge_index(edges, v, w):
    e = (v, w) if v < w else (w, v)
    return edges.index(e)


def random_instance(rng, max_vertices=7):
    """A pseudorandom finite instance: a permutation subgroup acting on the
    edge-orbit closure of random seed edges, retried until connected."""
    while True:
        n = rng.randrange(3, max_vertices + 1)
        gens = []
        for _ in range(rng.randrange(1, 3)):
            p = list(range(n))
            rng.shuffle(p)
            gens.append(tuple(p))
        els = perm_closure(gens, n)
        if len(els) > 2000:
            continue
        edges = set()
        for _ in range(rng.randrange(1, 4)):
            i = rng.randrange(n)
            j = rng.randrange(n)
            if i == j:
                continue
            seed = (min(i, j), max(i, j))
            for g in els:
                edges.add(_edge_image(g, seed))
        if not edges or not _connected(n, tuple(edges)):
            continue
        return FiniteActionInstance(n_vertices=n, edges=tuple(sorted(edges)),
                                    elements=els)
