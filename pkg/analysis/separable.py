"""Contains enumeration of linearly separable subsets, their inclusion poset and maximum antichains"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms import bipartite

from geometry.core import (
    DirectedLine,
    Point,
    PointSet,
    Side,
    convex_hull,
    hulls_intersect,
    require_general_position,
    side_of_line,
)
from geometry.fileio import (
    InstanceFileException,
    line_from_json,
    line_to_json,
    point_set_from_json,
    point_set_to_json,
)
from util.helpers import indices_of, is_subset, mask_of

SubsetId = int


class DilworthCertificateException(Exception):
    """
    Thrown if the chain partition and the antichain found differ in size
    """

    pass


@dataclass
class SubsetFamily:
    """Family of subsets of an ambient point set, members are bitmasks"""

    ambient: PointSet
    members: List[SubsetId]

    def __len__(self):
        return len(self.members)

    def __iter__(self) -> Iterator[SubsetId]:
        return iter(self.members)

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": "family",
            "ambient": point_set_to_json(self.ambient),
            "members": [indices_of(member) for member in self.members],
        }

    @classmethod
    def _members_from_json(cls, family_json: Dict[str, Any], ambient: PointSet) -> List[int]:
        members = []
        for member_json in family_json.get("members", []):
            if not isinstance(member_json, list) or any(
                not isinstance(i, int) or not 0 <= i < len(ambient) for i in member_json
            ):
                raise InstanceFileException(f"Member {member_json!r} is not a list of point indices")
            members.append(mask_of(member_json))
        return members


@dataclass
class SeparableFamily(SubsetFamily):
    """
    Linearly separable subsets; every member lies strictly on the right-hand
    side of its witness line and the rest of the ambient set strictly on the left
    """

    witnesses: Dict[SubsetId, DirectedLine] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        family_json = super().to_json()
        family_json["witnesses"] = [
            line_to_json(self.witnesses[member]) if member in self.witnesses else None
            for member in self.members
        ]
        return family_json


def family_from_json(family_json: Dict[str, Any]) -> SubsetFamily:
    """
    Reads a family document; documents carrying witnesses become SeparableFamily
    """
    if "ambient" not in family_json:
        raise InstanceFileException("Family needs an 'ambient' point set")
    ambient = point_set_from_json(family_json["ambient"])
    members = SubsetFamily._members_from_json(family_json, ambient)
    if "witnesses" not in family_json:
        return SubsetFamily(ambient, members)
    witnesses_json = family_json["witnesses"]
    if len(witnesses_json) != len(members):
        raise InstanceFileException("Family needs exactly one witness entry per member")
    witnesses = {
        member: line_from_json(witness)
        for member, witness in zip(members, witnesses_json)
        if witness is not None
    }
    return SeparableFamily(ambient, members, witnesses)


def _below_mask(p: PointSet, line: DirectedLine) -> int:
    return mask_of(i for i, point in enumerate(p) if side_of_line(point, line) == Side.BELOW)


def _nearby_lines(p: PointSet, i: int, j: int) -> List[DirectedLine]:
    """
    Four rightward lines close to the line through p[i] and p[j], with
    (both, left one only, right one only, neither) of the two strictly below
    and every other point on its original side
    """
    left, right = sorted((p[i], p[j]))
    base = DirectedLine.through(left, right)
    others = [point for k, point in enumerate(p) if k not in (i, j)]
    gap = min(
        (abs(point.y - base.value_at(point.x)) for point in others), default=Fraction(1)
    )
    mid = Point((left.x + right.x) / 2, (left.y + right.y) / 2)
    spread = max(abs(point.x - mid.x) for point in p)
    tilt = gap / (2 * spread)

    def rotated(slope: Fraction) -> DirectedLine:
        return DirectedLine(slope, mid.y - slope * mid.x)

    return [
        DirectedLine(base.slope, base.intercept + gap / 2),
        rotated(base.slope - tilt),
        rotated(base.slope + tilt),
        DirectedLine(base.slope, base.intercept - gap / 2),
    ]


def _candidate_witnesses(p: PointSet) -> Iterator[Tuple[SubsetId, DirectedLine]]:
    # rightward (below-type) witnesses first, then the same lines reversed
    lines = [
        DirectedLine(0, min(point.y for point in p) - 1),
        DirectedLine(0, max(point.y for point in p) + 1),
    ]
    for i, j in combinations(range(len(p)), 2):
        lines.extend(_nearby_lines(p, i, j))
    below_masks = [_below_mask(p, line) for line in lines]
    for mask, line in zip(below_masks, lines):
        yield mask, line
    for mask, line in zip(below_masks, lines):
        yield p.full_mask & ~mask, line.reversed()


def _sort_key(member: SubsetId) -> Tuple[int, List[int]]:
    indices = indices_of(member)
    return len(indices), indices


def is_separable(s: SubsetId, p: PointSet) -> Optional[DirectedLine]:
    """
    Decides whether s is the intersection of p with a half-plane
    Args:
        s: subset bitmask
        p: ambient point set in general position

    Returns:
        strict witness line (s strictly on its right-hand side, the rest
        strictly on its left) or None
    """
    if s < 0 or s > p.full_mask:
        raise ValueError(f"Subset {s} is out of bounds for {len(p)} points")
    require_general_position(p)
    for mask, line in _candidate_witnesses(p):
        if mask == s:
            return line
    return None


def enumerate_separable(p: PointSet) -> SeparableFamily:
    """
    Collects every linearly separable subset of p. Each subset arises from a
    line through two points of p, nudged so that each of the two points is
    either in or out, read with either orientation.
    Args:
        p: point set in general position with distinct x-coordinates

    Returns:
        complete family, members ordered by size then by indices
    """
    if len(p) == 0:
        raise ValueError("Enumeration needs at least one point")
    require_general_position(p)
    witnesses: Dict[SubsetId, DirectedLine] = {}
    for mask, line in _candidate_witnesses(p):
        if mask not in witnesses:
            witnesses[mask] = line
    members = sorted(witnesses, key=_sort_key)
    return SeparableFamily(p, members, witnesses)


def brute_force_separable(p: PointSet) -> List[SubsetId]:
    """
    Oracle: every subset whose hull is disjoint from the hull of its complement
    """
    members = []
    for mask in range(p.full_mask + 1):
        complement = p.full_mask & ~mask
        if mask == 0 or complement == 0:
            members.append(mask)
        elif not hulls_intersect(convex_hull(p, mask), convex_hull(p, complement)):
            members.append(mask)
    return sorted(members, key=_sort_key)


def k_sets(p: PointSet, k: int) -> List[SubsetId]:
    if not 0 <= k <= len(p):
        raise ValueError(f"k={k} out of range for {len(p)} points")
    return [member for member in enumerate_separable(p).members if bin(member).count("1") == k]


def layer_sizes(family: SubsetFamily) -> Dict[int, int]:
    """Number of members per cardinality"""
    sizes: Dict[int, int] = {}
    for member in family.members:
        k = bin(member).count("1")
        sizes[k] = sizes.get(k, 0) + 1
    return dict(sorted(sizes.items()))


@dataclass
class InclusionPoset:
    elements: List[SubsetId]
    # reachability[u][v] iff elements[u] is a proper subset of elements[v]
    reachability: List[List[bool]]
    hasse: nx.DiGraph

    def longest_chain(self) -> int:
        if len(self.elements) == 0:
            return 0
        return nx.dag_longest_path_length(self.hasse) + 1


def inclusion_poset(family: SubsetFamily) -> InclusionPoset:
    elements = list(family.members)
    size = len(elements)
    reachability = [
        [u != v and elements[u] != elements[v] and is_subset(elements[u], elements[v])
         for v in range(size)]
        for u in range(size)
    ]
    graph = nx.DiGraph()
    graph.add_nodes_from(range(size))
    graph.add_edges_from(
        (u, v) for u in range(size) for v in range(size) if reachability[u][v]
    )
    return InclusionPoset(elements, reachability, nx.transitive_reduction(graph))


@dataclass
class AntichainResult:
    antichain: List[SubsetId]
    chains: List[List[SubsetId]]

    def __len__(self):
        return len(self.antichain)

    def certificate_valid(self, family: SubsetFamily) -> bool:
        """
        Machine check of the Dilworth certificate against the family
        """
        covered = [member for chain in self.chains for member in chain]
        if sorted(covered) != sorted(family.members):
            return False
        for chain in self.chains:
            if any(not is_subset(a, b) or a == b for a, b in zip(chain, chain[1:])):
                return False
            if sum(1 for member in chain if member in self.antichain) > 1:
                return False
        return verify_antichain(self.antichain) and len(self.chains) == len(self.antichain)


def max_antichain(family: SubsetFamily) -> AntichainResult:
    """
    Maximum antichain with a minimum chain partition of the same size.
    The partition comes from a maximum matching in the comparability
    bipartite graph, the antichain from the complement of a minimum vertex
    cover (König).
    """
    poset = inclusion_poset(family)
    size = len(poset.elements)
    if size == 0:
        return AntichainResult([], [])
    graph = nx.Graph()
    top_nodes = [("L", u) for u in range(size)]
    graph.add_nodes_from(top_nodes, bipartite=0)
    graph.add_nodes_from((("R", v) for v in range(size)), bipartite=1)
    graph.add_edges_from(
        (("L", u), ("R", v))
        for u in range(size)
        for v in range(size)
        if poset.reachability[u][v]
    )
    matching = bipartite.hopcroft_karp_matching(graph, top_nodes=top_nodes)
    cover = bipartite.to_vertex_cover(graph, matching, top_nodes=top_nodes)

    antichain_positions = [
        u for u in range(size) if ("L", u) not in cover and ("R", u) not in cover
    ]
    successor = {u: matching[("L", u)][1] for u in range(size) if ("L", u) in matching}
    has_predecessor = set(successor.values())
    chains = []
    for start in range(size):
        if start in has_predecessor:
            continue
        chain = [start]
        while chain[-1] in successor:
            chain.append(successor[chain[-1]])
        chains.append([poset.elements[u] for u in chain])

    if len(chains) != len(antichain_positions):
        raise DilworthCertificateException(
            f"{len(chains)} chains but antichain of size {len(antichain_positions)}"
        )
    return AntichainResult([poset.elements[u] for u in antichain_positions], chains)


def max_antichain_oracle(family: SubsetFamily, limit: int) -> List[SubsetId]:
    """
    Exhaustive maximum antichain: maximum clique of the incomparability graph
    Args:
        family: family to search
        limit: refuse families larger than this

    Returns:
        one maximum antichain
    """
    if len(family) > limit:
        raise ValueError(f"Family of size {len(family)} exceeds oracle limit {limit}")
    if len(family) == 0:
        return []
    graph = nx.Graph()
    graph.add_nodes_from(family.members)
    graph.add_edges_from(
        (a, b)
        for a, b in combinations(family.members, 2)
        if not is_subset(a, b) and not is_subset(b, a)
    )
    best: List[SubsetId] = []
    for clique in nx.find_cliques(graph):
        if len(clique) > len(best):
            best = clique
    return sorted(best, key=_sort_key)


def verify_antichain(members: Sequence[SubsetId]) -> bool:
    return all(
        not is_subset(a, b) and not is_subset(b, a) for a, b in combinations(members, 2)
    )
