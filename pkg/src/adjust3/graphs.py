"""Signed three-variable causal graphs: notation, catalog, classification.

The study universe is every acyclic configuration of directed edges among
the variables X, W, Y, written in a compact arrow notation such as
``"X<-W->Y,X->Y"`` (W causes X and Y; X causes Y). A dash marks an absent
edge, and a lower-case ``n`` in front of W marks a negative W-X
coefficient, e.g. ``"X<-nW->Y"`` — the "twisted" variants. Every present
edge carries a slope coefficient of magnitude 1/sqrt(3); by convention the
X-Y and W-Y effects are always positive, so the only legal ``n`` sits on
the W-X edge of a graph with both W edges present.

The catalog enumerates the 33 data-generating processes: the 25 acyclic
all-positive graphs (27 combinations minus the two directed cycles) plus
8 twisted variants, ordered by the report's figure layout (three panels
per figure: X->Y, X<-Y, no X-Y edge).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from enum import Enum

#: Magnitude of every structural slope coefficient.
EDGE_COEF = 1.0 / math.sqrt(3.0)

X, W, Y = 0, 1, 2
NODE_NAMES = ("x", "w", "y")


class GraphError(ValueError):
    """Base class for graph construction and parsing failures."""


class NotationError(GraphError):
    """Malformed notation string."""


class CycleError(GraphError):
    """Edge configuration contains a directed cycle."""


class SignError(GraphError):
    """Negative sign in a position the catalog convention forbids."""


class UnknownClassError(GraphError):
    """Graph does not correspond to any catalog entry."""


class Orientation(str, Enum):
    """Direction of an edge relative to the (first, second) endpoint pair."""

    TOWARD_FIRST = "toward_first"
    TOWARD_SECOND = "toward_second"
    ABSENT = "absent"


class Sign(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class EdgeSpec:
    """One edge slot between an ordered pair of variables.

    The sign of an absent edge is canonicalized to positive so that value
    equality is well defined.
    """

    orientation: Orientation = Orientation.ABSENT
    sign: Sign = Sign.POSITIVE

    def __post_init__(self):
        if self.orientation is Orientation.ABSENT and self.sign is Sign.NEGATIVE:
            object.__setattr__(self, "sign", Sign.POSITIVE)

    @property
    def present(self) -> bool:
        return self.orientation is not Orientation.ABSENT

    @property
    def coefficient(self) -> float:
        """Signed slope coefficient, 0 when absent."""
        if not self.present:
            return 0.0
        return -EDGE_COEF if self.sign is Sign.NEGATIVE else EDGE_COEF


ABSENT_EDGE = EdgeSpec()


@dataclass(frozen=True)
class CausalGraph:
    """Edges among X, W, Y.

    Slot endpoint order: ``wx`` is (W, X), ``wy`` is (W, Y), ``xy`` is
    (X, Y); e.g. W->X is ``wx.orientation == TOWARD_SECOND``. Construction
    rejects the two directed cycles. Sign conventions (negatives only on a
    twisted wx edge) are enforced by the parser and by `classify`, not
    here, so that out-of-catalog graphs remain representable.
    """

    wx: EdgeSpec = ABSENT_EDGE
    wy: EdgeSpec = ABSENT_EDGE
    xy: EdgeSpec = ABSENT_EDGE

    def __post_init__(self):
        fwd = (  # X -> W -> Y -> X
            self.wx.orientation is Orientation.TOWARD_FIRST
            and self.wy.orientation is Orientation.TOWARD_SECOND
            and self.xy.orientation is Orientation.TOWARD_FIRST
        )
        bwd = (  # X <- W <- Y <- X
            self.wx.orientation is Orientation.TOWARD_SECOND
            and self.wy.orientation is Orientation.TOWARD_FIRST
            and self.xy.orientation is Orientation.TOWARD_SECOND
        )
        if fwd or bwd:
            raise CycleError(f"directed cycle in {format_graph(self)}")

    def parents(self, node: int) -> tuple[tuple[int, float], ...]:
        """(parent, signed coefficient) pairs of `node`, parent index ascending."""
        out = []
        if node == X:
            if self.wx.orientation is Orientation.TOWARD_SECOND:
                out.append((W, self.wx.coefficient))
            if self.xy.orientation is Orientation.TOWARD_FIRST:
                out.append((Y, self.xy.coefficient))
        elif node == W:
            if self.wx.orientation is Orientation.TOWARD_FIRST:
                out.append((X, self.wx.coefficient))
            if self.wy.orientation is Orientation.TOWARD_FIRST:
                out.append((Y, self.wy.coefficient))
        else:
            if self.xy.orientation is Orientation.TOWARD_SECOND:
                out.append((X, self.xy.coefficient))
            if self.wy.orientation is Orientation.TOWARD_SECOND:
                out.append((W, self.wy.coefficient))
        return tuple(sorted(out))


class WClass(str, Enum):
    """Role of W in the data-generating process (figure taxonomy)."""

    CONFOUNDING = "confounding"
    TWISTED_CONFOUNDING = "twisted_confounding"
    COLLIDER = "collider"
    TWISTED_COLLIDER = "twisted_collider"
    INSTRUMENTAL = "instrumental"
    WEAK_CONFOUNDING = "weak_confounding"
    POST_TREATMENT = "post_treatment"
    POST_RESPONSE = "post_response"
    IRRELEVANT = "irrelevant"
    FORWARD_CHAIN = "forward_chain"
    TWISTED_FORWARD_CHAIN = "twisted_forward_chain"
    BACKWARD_CHAIN = "backward_chain"
    TWISTED_BACKWARD_CHAIN = "twisted_backward_chain"


class XYRelation(str, Enum):
    X_CAUSES_Y = "x_causes_y"
    Y_CAUSES_X = "y_causes_x"
    NONE = "none"


@dataclass(frozen=True)
class GraphClass:
    w_class: WClass
    xy_relation: XYRelation


@dataclass(frozen=True)
class CatalogEntry:
    id: int
    graph: CausalGraph
    graph_class: GraphClass
    notation: str


_ARROW_WX = {"<-": Orientation.TOWARD_SECOND, "->": Orientation.TOWARD_FIRST, "-": Orientation.ABSENT}
_ARROW_WY = {"->": Orientation.TOWARD_SECOND, "<-": Orientation.TOWARD_FIRST, "-": Orientation.ABSENT}
_ARROW_XY = {"->": Orientation.TOWARD_SECOND, "<-": Orientation.TOWARD_FIRST, "-": Orientation.ABSENT}

_NOTATION_RE = re.compile(
    r"^X(?P<wx><-|->|-)(?P<nw>n?)W(?P<wy>->|<-|-)(?P<ny>n?)Y,X(?P<xy>->|<-|-)(?P<nxy>n?)Y$"
)


def parse_graph(notation: str) -> CausalGraph:
    """Parse arrow notation like ``"X<-W->Y,X->Y"`` into a CausalGraph.

    Raises NotationError for malformed strings, SignError for an ``n`` off
    the twisted W-X position, and CycleError for the two directed cycles.
    """
    m = _NOTATION_RE.match(notation)
    if m is None:
        raise NotationError(f"unparseable graph notation {notation!r}")
    if m["ny"] or m["nxy"]:
        raise SignError(f"negative sign allowed only on the W-X edge: {notation!r}")
    wx_orient = _ARROW_WX[m["wx"]]
    wy_orient = _ARROW_WY[m["wy"]]
    if m["nw"]:
        if wx_orient is Orientation.ABSENT:
            raise SignError(f"negative sign on an absent W-X edge: {notation!r}")
        if wy_orient is Orientation.ABSENT:
            raise SignError(f"negative W-X edge requires a W-Y edge (twisted pair): {notation!r}")
    wx = EdgeSpec(wx_orient, Sign.NEGATIVE if m["nw"] else Sign.POSITIVE)
    wy = EdgeSpec(wy_orient)
    xy = EdgeSpec(_ARROW_XY[m["xy"]])
    return CausalGraph(wx=wx, wy=wy, xy=xy)


def format_graph(graph: CausalGraph) -> str:
    """Canonical notation; inverse of parse_graph on catalog-convention graphs."""
    wx_arrow = {Orientation.TOWARD_SECOND: "<-", Orientation.TOWARD_FIRST: "->", Orientation.ABSENT: "-"}
    wy_arrow = {Orientation.TOWARD_SECOND: "->", Orientation.TOWARD_FIRST: "<-", Orientation.ABSENT: "-"}
    nw = "n" if (graph.wx.present and graph.wx.sign is Sign.NEGATIVE) else ""
    ny = "n" if (graph.wy.present and graph.wy.sign is Sign.NEGATIVE) else ""
    nxy = "n" if (graph.xy.present and graph.xy.sign is Sign.NEGATIVE) else ""
    return (
        f"X{wx_arrow[graph.wx.orientation]}{nw}W{wy_arrow[graph.wy.orientation]}{ny}Y"
        f",X{wy_arrow[graph.xy.orientation]}{nxy}Y"
    )


def true_effect(graph: CausalGraph) -> float:
    """Total causal effect of X on Y: sum over directed X->Y paths of the
    products of signed edge coefficients (0 when no such path exists)."""
    total = 0.0
    if graph.xy.orientation is Orientation.TOWARD_SECOND:
        total += graph.xy.coefficient
    if (
        graph.wx.orientation is Orientation.TOWARD_FIRST
        and graph.wy.orientation is Orientation.TOWARD_SECOND
    ):
        total += graph.wx.coefficient * graph.wy.coefficient
    return total


# Figure layout: (figure number, base class, W-part). Panels within each
# figure run X->Y, X<-Y, X-Y; the two cyclic panels are replaced by the
# twisted chains (figure 10 slot 2, figure 11 slot 1).
_FIGURE_W_PARTS = (
    (1, WClass.CONFOUNDING, "X<-W->Y"),
    (2, WClass.TWISTED_CONFOUNDING, "X<-nW->Y"),
    (3, WClass.COLLIDER, "X->W<-Y"),
    (4, WClass.TWISTED_COLLIDER, "X->nW<-Y"),
    (5, WClass.INSTRUMENTAL, "X<-W-Y"),
    (6, WClass.WEAK_CONFOUNDING, "X-W->Y"),
    (7, WClass.POST_TREATMENT, "X->W-Y"),
    (8, WClass.POST_RESPONSE, "X-W<-Y"),
    (9, WClass.IRRELEVANT, "X-W-Y"),
)

_CHAIN_FIGURES = (
    (10, ("X->W->Y,X->Y", "X->nW->Y,X->Y", "X->W->Y,X-Y")),
    (11, ("X<-nW<-Y,X<-Y", "X<-W<-Y,X<-Y", "X<-W<-Y,X-Y")),
)

_W_CLASS_TABLE = {
    # (wx orientation, wx negative, wy orientation) -> class
    (Orientation.TOWARD_SECOND, False, Orientation.TOWARD_SECOND): WClass.CONFOUNDING,
    (Orientation.TOWARD_SECOND, True, Orientation.TOWARD_SECOND): WClass.TWISTED_CONFOUNDING,
    (Orientation.TOWARD_FIRST, False, Orientation.TOWARD_FIRST): WClass.COLLIDER,
    (Orientation.TOWARD_FIRST, True, Orientation.TOWARD_FIRST): WClass.TWISTED_COLLIDER,
    (Orientation.TOWARD_SECOND, False, Orientation.ABSENT): WClass.INSTRUMENTAL,
    (Orientation.ABSENT, False, Orientation.TOWARD_SECOND): WClass.WEAK_CONFOUNDING,
    (Orientation.TOWARD_FIRST, False, Orientation.ABSENT): WClass.POST_TREATMENT,
    (Orientation.ABSENT, False, Orientation.TOWARD_FIRST): WClass.POST_RESPONSE,
    (Orientation.ABSENT, False, Orientation.ABSENT): WClass.IRRELEVANT,
    (Orientation.TOWARD_FIRST, False, Orientation.TOWARD_SECOND): WClass.FORWARD_CHAIN,
    (Orientation.TOWARD_FIRST, True, Orientation.TOWARD_SECOND): WClass.TWISTED_FORWARD_CHAIN,
    (Orientation.TOWARD_SECOND, False, Orientation.TOWARD_FIRST): WClass.BACKWARD_CHAIN,
    (Orientation.TOWARD_SECOND, True, Orientation.TOWARD_FIRST): WClass.TWISTED_BACKWARD_CHAIN,
}

_XY_RELATION = {
    Orientation.TOWARD_SECOND: XYRelation.X_CAUSES_Y,
    Orientation.TOWARD_FIRST: XYRelation.Y_CAUSES_X,
    Orientation.ABSENT: XYRelation.NONE,
}

_catalog_cache: tuple[CatalogEntry, ...] | None = None


def _structural_class(graph: CausalGraph) -> GraphClass:
    if graph.wy.sign is Sign.NEGATIVE or graph.xy.sign is Sign.NEGATIVE:
        raise UnknownClassError(f"negative sign off the W-X edge: {format_graph(graph)}")
    key = (graph.wx.orientation, graph.wx.sign is Sign.NEGATIVE, graph.wy.orientation)
    w_class = _W_CLASS_TABLE.get(key)
    if w_class is None:
        raise UnknownClassError(f"no catalog class for {format_graph(graph)}")
    return GraphClass(w_class, _XY_RELATION[graph.xy.orientation])


def enumerate_catalog() -> tuple[CatalogEntry, ...]:
    """The 33 catalog entries, ids dense 1..33 in figure order."""
    global _catalog_cache
    if _catalog_cache is not None:
        return _catalog_cache
    notations: list[str] = []
    for _num, _cls, w_part in _FIGURE_W_PARTS:
        for xy_part in ("X->Y", "X<-Y", "X-Y"):
            notations.append(f"{w_part},{xy_part}")
    for _num, panel_notations in _CHAIN_FIGURES:
        notations.extend(panel_notations)
    entries = []
    for i, notation in enumerate(notations, start=1):
        graph = parse_graph(notation)
        entries.append(
            CatalogEntry(
                id=i,
                graph=graph,
                graph_class=_structural_class(graph),
                notation=format_graph(graph),
            )
        )
    _catalog_cache = tuple(entries)
    return _catalog_cache


def classify(graph: CausalGraph) -> GraphClass:
    """The (w_class, xy_relation) pair of a catalog graph.

    Raises UnknownClassError for graphs outside the catalog, e.g. a
    negative W-Y edge or a twisted chain with the wrong X-Y state.
    """
    graph_class = _structural_class(graph)
    if graph_class not in {e.graph_class for e in enumerate_catalog()}:
        raise UnknownClassError(
            f"{format_graph(graph)} ({graph_class.w_class.value}, "
            f"{graph_class.xy_relation.value}) is not a catalog entry"
        )
    return graph_class


def entry_by_id(graph_id: int) -> CatalogEntry:
    catalog = enumerate_catalog()
    if not 1 <= graph_id <= len(catalog):
        raise GraphError(f"graph id {graph_id} out of range 1..{len(catalog)}")
    return catalog[graph_id - 1]


def entry_by_notation(notation: str) -> CatalogEntry:
    canonical = format_graph(parse_graph(notation))
    for entry in enumerate_catalog():
        if entry.notation == canonical:
            return entry
    raise GraphError(f"{notation!r} is a valid graph but not a catalog entry")


def figure_number(entry: CatalogEntry) -> int:
    """1..11; entries are laid out three panels per figure."""
    return (entry.id - 1) // 3 + 1


def panel_slot(entry: CatalogEntry) -> int:
    """0..2 position of the entry within its figure."""
    return (entry.id - 1) % 3


def catalog_to_json(entries=None, indent: int | None = 2) -> str:
    """JSON array of {id, notation, w_class, xy_relation, true_effect}."""
    if entries is None:
        entries = enumerate_catalog()
    rows = [
        {
            "id": e.id,
            "notation": e.notation,
            "w_class": e.graph_class.w_class.value,
            "xy_relation": e.graph_class.xy_relation.value,
            "true_effect": true_effect(e.graph),
        }
        for e in entries
    ]
    return json.dumps(rows, indent=indent)
