"""The mod-k curve graph of the genus-2 surface and its finite quotients.

Vertices are the primitive vectors of Z_k^4; two vertices are joined when
their symplectic pairing is +-1.  The congruence subgroup G_k attached to a
cover (symplectic matrices preserving the kernel lattice mod k) acts on this
graph; the quotient multigraph, with orbit representatives, witness matrices
and a spanning tree, is the finite object the generating-set machinery runs
on.
"""

from dataclasses import dataclass

from . import symplectic as sp
from . import words
from . import covers as cov


def is_edge(x, y, k):
    if x == y:
        return False
    return sp.pairing(x, y, k) in (1, k - 1)


def subgroup_elements(cover, k, bound=None):
    """All of G_k by filtering the full symplectic group (oracle path)."""
    kwargs = {} if bound is None else {"bound": bound}
    out = []
    for key in sp.enumerate_sp(k, **kwargs):
        m = sp.unpack_mat(int(key), k)
        if cov.is_liftable_mod(cover, m):
            out.append(m)
    return tuple(out)


def expected_subgroup_order(cover, k):
    if cover.kind == "cyclic":
        # G_k stabilizes the mod-k hyperplane x2 = 0; Sp acts transitively on
        # the (k^4-1)/(k-1) covector classes
        return sp.sp4_order(k) * (k - 1) // (k ** 4 - 1)
    if (cover.kind in ("klein", "elementary") and cover.k == 2
            and cov.scaled_positions(cover) == {1, 2}):
        # block-diagonal pairs: |SL(2,Z_2)|^2
        return 36
    return None


def group_generators(cover, k):
    """A verified generating set of G_k as mod-k matrices.

    Twist-word generators of the liftable group are augmented with the
    Gamma_0(k) Schreier generators embedded block-diagonally (needed for
    k >= 5, where the twist images alone generate an index-2 subgroup).
    The closure order is checked against the independent coset count.
    """
    gens = []
    if cover.kind == "cyclic":
        gen_words = ["a", "b^%d" % k, "c", "d", "e", "I"]
        gens = [words.psi_mod(w, k) for w in gen_words]
        gens += [sp.reduce_mat(cov.phi_embed(g), k)
                 for g in cov.gamma0_data(k)[2]]
        for j in range(1, k):
            jbar = pow(j, -1, k)
            gens.append(words.psi_mod("b^%d a b^%d" % (1 - j, 1 - jbar), k))
    elif k == 2 and cov.scaled_positions(cover) == {1, 2}:
        gens = [words.psi_mod(w, 2) for w in ["a", "b", "c^2", "d", "e", "I"]]
    else:
        return tuple(dict.fromkeys(subgroup_elements(cover, k)))
    gens = [g for g in gens if cov.is_liftable_mod(cover, g)]
    assert len(gens) > 0
    expect = expected_subgroup_order(cover, k)
    if expect is not None:
        got = len(sp.mulclose_fast(gens, k))
        assert got == expect, "generator closure %d != |G_k| %d" % (got, expect)
    return tuple(dict.fromkeys(gens))


@dataclass(frozen=True)
class OrbitData:
    """Orbit partition with parent pointers for witness reconstruction."""
    items: tuple           # all items, index order
    orbit_of: tuple        # item index -> orbit id
    roots: tuple           # orbit id -> root item index (lex-least member)
    parents: tuple         # item index -> (parent index, generator index) or None
    generators: tuple      # mod-k matrices

    def orbit_sizes(self):
        sizes = [0] * len(self.roots)
        for o in self.orbit_of:
            sizes[o] += 1
        return tuple(sizes)

    def members(self, orbit_id):
        return tuple(self.items[i] for i in range(len(self.items))
                     if self.orbit_of[i] == orbit_id)


def _bfs_orbits(items, images, generators):
    """Partition items under the maps images[g][i] -> item index."""
    n = len(items)
    orbit_of = [-1] * n
    parents = [None] * n
    roots = []
    for start in range(n):
        if orbit_of[start] >= 0:
            continue
        oid = len(roots)
        roots.append(start)
        orbit_of[start] = oid
        queue = [start]
        while queue:
            cur = queue.pop(0)
            for gi in range(len(generators)):
                nxt = images[gi][cur]
                if orbit_of[nxt] < 0:
                    orbit_of[nxt] = oid
                    parents[nxt] = (cur, gi)
                    queue.append(nxt)
    return OrbitData(tuple(items), tuple(orbit_of), tuple(roots),
                     tuple(parents), tuple(generators))


def vertex_orbit_data(cover, k, generators=None):
    verts = sp.primitive_vectors(k)
    index = {v: i for i, v in enumerate(verts)}
    gens = group_generators(cover, k) if generators is None else tuple(generators)
    images = [[index[sp.reduce_vec(sp.mat_vec(g, v), k)] for v in verts]
              for g in gens]
    data = _bfs_orbits(verts, images, gens)
    assert sum(data.orbit_sizes()) == k ** 4 - 1
    # unoriented curves determine vectors only up to sign; the quotient is
    # well-defined because -x always shares x's orbit
    for i, v in enumerate(verts):
        neg = index[sp.reduce_vec(tuple(-a for a in v), k)]
        assert data.orbit_of[neg] == data.orbit_of[i], "-x escapes the orbit of x"
    return data


def vertex_witness(data, k, target_index):
    """A matrix in <generators> carrying the orbit root to the target vertex."""
    w = sp.identity()
    cur = target_index
    # walking up meets the last-applied generator first, so accumulate on
    # the right: witness = g_1 g_2 ... g_m with g_m applied to the root
    while data.parents[cur] is not None:
        parent, gi = data.parents[cur]
        w = sp.mat_mul(w, data.generators[gi], k)
        cur = parent
    root = data.items[data.roots[data.orbit_of[target_index]]]
    assert sp.reduce_vec(sp.mat_vec(w, root), k) == data.items[target_index]
    return w


def all_edges(k):
    """All unordered edges of the mod-k curve graph, lexicographically sorted."""
    verts = sp.primitive_vectors(k)
    edges = []
    for i, x in enumerate(verts):
        for j in range(i + 1, len(verts)):
            if is_edge(x, verts[j], k):
                edges.append((i, j))
    return verts, edges


def quotient_edge_sets(cover, k, vdata):
    """Split curve-graph edges into quotient loop and cross items.

    Loops (both endpoints in one vertex orbit) stay unordered vector pairs.
    Edges between distinct vertex orbits are recorded as ordered pairs
    (u, w) with u in the lower-numbered orbit and pairing(u, w) = +1: curve
    orientations are arbitrary, so w may be negated to normalize the sign.
    This 2:1 normalization (for k > 2) is what makes the quotient counts
    well-defined on unoriented curves.
    """
    verts = vdata.items
    n = len(verts)
    loops = []
    cross = set()
    for i in range(n):
        x = verts[i]
        for j in range(i + 1, n):
            y = verts[j]
            if sp.pairing(x, y, k) not in (1, k - 1):
                continue
            oi, oj = vdata.orbit_of[i], vdata.orbit_of[j]
            if oi == oj:
                loops.append((x, y))
            else:
                u, w = (x, y) if oi < oj else (y, x)
                if sp.pairing(u, w, k) != 1:
                    w = sp.reduce_vec(tuple(-a for a in w), k)
                assert sp.pairing(u, w, k) == 1
                cross.add((u, w))
    return sorted(loops), sorted(cross)


def _loop_act(g, e, k):
    a = sp.mat_vec(g, e[0], k)
    b = sp.mat_vec(g, e[1], k)
    return (a, b) if a < b else (b, a)


def _cross_act(g, e, k):
    return (sp.mat_vec(g, e[0], k), sp.mat_vec(g, e[1], k))


def _orbit_data_over(items, gens, act, k):
    index = {e: i for i, e in enumerate(items)}
    images = [[index[act(g, e, k)] for e in items] for g in gens]
    return _bfs_orbits(items, images, gens)


def edge_orbit_data(cover, k, vdata=None):
    """Orbit data for quotient loops and normalized cross edges."""
    if vdata is None:
        vdata = vertex_orbit_data(cover, k)
    loops, cross = quotient_edge_sets(cover, k, vdata)
    ldata = _orbit_data_over(tuple(loops), vdata.generators, _loop_act, k)
    cdata = _orbit_data_over(tuple(cross), vdata.generators, _cross_act, k)
    # every curve-graph edge is a loop or the image of exactly one or two
    # unordered edges under sign normalization
    _, edges = all_edges(k)
    factor = 1 if k == 2 else 2
    assert len(edges) == len(loops) + factor * len(cross)
    return ldata, cdata, vdata


def edge_witness(data, k, target_index):
    """A group element carrying the orbit root edge to the target edge."""
    w = sp.identity()
    cur = target_index
    while data.parents[cur] is not None:
        parent, gi = data.parents[cur]
        w = sp.mat_mul(w, data.generators[gi], k)
        cur = parent
    return w


def orbits_by_sweep(cover, k):
    """Oracle orbit partitions using every element of G_k (small k only)."""
    els = subgroup_elements(cover, k)
    verts = sp.primitive_vectors(k)
    vindex = {v: i for i, v in enumerate(verts)}

    def partition(items, act):
        index = {e: i for i, e in enumerate(items)}
        parent = list(range(len(items)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in els:
            for i, e in enumerate(items):
                j = index[act(g, e, k)]
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
        groups = {}
        for i in range(len(items)):
            groups.setdefault(find(i), set()).add(items[i])
        return frozenset(frozenset(s) for s in groups.values())

    def vact(g, v, k):
        return sp.mat_vec(g, v, k)

    vpart = partition(verts, vact)
    vdata = vertex_orbit_data(cover, k)
    loops, cross = quotient_edge_sets(cover, k, vdata)
    lpart = partition(tuple(loops), _loop_act)
    cpart = partition(tuple(cross), _cross_act)
    return vpart, lpart, cpart


def partition_of(data):
    """Orbit partition of an OrbitData as a frozenset of frozensets."""
    groups = {}
    for i, o in enumerate(data.orbit_of):
        groups.setdefault(o, set()).add(data.items[i])
    return frozenset(frozenset(s) for s in groups.values())


VERTEX_CASE_LABELS = ("e1", "e2", "e3")
CANONICAL_REPS = {"e1": (1, 0, 0, 0), "e2": (0, 1, 0, 0), "e3": (0, 0, 1, 0)}


def classify_vertex(cover, x, k=None):
    """Orbit label and explicit witness for a primitive vector, cyclic covers.

    The witness A lies in G_k and carries the canonical representative of the
    orbit to x; it is built from one of four closed-form case templates.
    """
    if cover.kind != "cyclic":
        raise ValueError("closed-form classification needs a cyclic cover")
    k = cover.k if k is None else k
    if not cov._is_prime(k):
        raise ValueError("closed-form classification needs prime k")
    x = sp.reduce_vec(x, k)
    if not sp.is_primitive(x, k):
        raise ValueError("vector is not primitive")
    i1, i2, i3, i4 = x
    if i2 % k:
        i2b = pow(i2, -1, k)
        a = ((i2b, i1, (-i2b * i4) % k, (i2b * i3) % k),
             (0, i2, 0, 0),
             (0, i3, 1, 0),
             (0, i4, 0, 1))
        label = "e2"
    elif i3 % k:
        i3b = pow(i3, -1, k)
        a = ((1, 0, i1, 0),
             (0, 1, 0, 0),
             (0, 0, i3, 0),
             (0, (-i3b * i1) % k, i4, i3b))
        label = "e3"
    elif i4 % k:
        i4b = pow(i4, -1, k)
        a = ((1, 0, i1, 0),
             (0, 1, 0, 0),
             (0, (i4b * i1) % k, 0, (-i4b) % k),
             (0, 0, i4, 0))
        label = "e3"
    else:
        i1b = pow(i1, -1, k)
        a = ((i1, 0, 0, 0),
             (0, i1b, 0, 0),
             (0, 0, 1, 0),
             (0, 0, 0, 1))
        label = "e1"
    a = sp.reduce_mat(a, k)
    assert sp.is_symplectic(a, k)
    assert cov.is_liftable_mod(cover, a)
    assert sp.reduce_vec(sp.mat_vec(a, CANONICAL_REPS[label]), k) == x
    return label, a


@dataclass(frozen=True)
class QuotientMultigraph:
    cover_name: str
    k: int
    vertices: tuple     # (canonical rep vector, orbit size)
    loops: tuple        # (vertex orbit id, representative edge as vector pair)
    edges: tuple        # ((orbit id, orbit id), representative edge)
    tree: tuple         # edge ids (indices into edges) forming a spanning tree

    def loop_counts(self):
        counts = [0] * len(self.vertices)
        for at, _ in self.loops:
            counts[at] += 1
        return tuple(counts)


def quotient_graph(cover, k, generators=None):
    """Assemble the quotient multigraph with deterministic representatives."""
    vdata = vertex_orbit_data(cover, k, generators=generators)
    ldata, cdata, vdata = edge_orbit_data(cover, k, vdata=vdata)
    verts = vdata.items
    vindex = {v: i for i, v in enumerate(verts)}
    vertices = tuple((verts[vdata.roots[o]], size)
                     for o, size in enumerate(vdata.orbit_sizes()))
    loops = []
    for root in ldata.roots:
        rep = ldata.items[root]
        assert is_edge(rep[0], rep[1], k)
        loops.append((vdata.orbit_of[vindex[rep[0]]], rep))
    loops.sort(key=lambda t: (t[0], t[1]))
    nonloops = []
    for root in cdata.roots:
        rep = cdata.items[root]
        assert is_edge(rep[0], rep[1], k)
        oi = vdata.orbit_of[vindex[rep[0]]]
        oj = vdata.orbit_of[vindex[rep[1]]]
        nonloops.append(((min(oi, oj), max(oi, oj)), rep))
    nonloops.sort(key=lambda t: (t[0], t[1]))
    # spanning tree: BFS over vertex orbits from the least representative,
    # taking the lexicographically least parallel edge orbit
    seen = {0}
    tree = []
    frontier = [0]
    while frontier:
        base = frontier.pop(0)
        for eid, (ends, _) in enumerate(nonloops):
            if base in ends:
                other = ends[0] if ends[1] == base else ends[1]
                if other not in seen:
                    seen.add(other)
                    tree.append(eid)
                    frontier.append(other)
    assert seen == set(range(len(vertices))), "quotient graph is disconnected"
    return QuotientMultigraph(cover_name=cover.name, k=k,
                              vertices=vertices, loops=tuple(loops),
                              edges=tuple(nonloops), tree=tuple(tree))


def to_json_dict(qg):
    return {
        "k": qg.k,
        "cover": qg.cover_name,
        "vertices": [{"rep": list(rep), "size": size}
                     for rep, size in qg.vertices],
        "loops": [{"at": at, "rep_edge": [list(u), list(v)]}
                  for at, (u, v) in qg.loops],
        "edges": [{"ends": list(ends), "rep_edge": [list(u), list(v)]}
                  for ends, (u, v) in qg.edges],
        "tree": list(qg.tree),
    }


def to_dot(qg):
    def vname(i):
        return '"%s"' % ",".join(map(str, qg.vertices[i][0]))

    lines = ["graph quotient {"]
    for i, (rep, size) in enumerate(qg.vertices):
        lines.append('  %s [label="%s (size %d)"];'
                     % (vname(i), ",".join(map(str, rep)), size))
    for at, _ in qg.loops:
        lines.append("  %s -- %s;" % (vname(at), vname(at)))
    for eid, (ends, _) in enumerate(qg.edges):
        style = " [style=bold]" if eid in qg.tree else ""
        lines.append("  %s -- %s%s;" % (vname(ends[0]), vname(ends[1]), style))
    lines.append("}")
    return "\n".join(lines) + "\n"
