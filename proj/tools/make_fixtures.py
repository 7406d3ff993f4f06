#!/usr/bin/env python3
"""Regenerate the bundled manifests in fixtures/.

Incidence signs come from the lifted geometry: an edge runs from its first
vertex (sign -1) to its second (+1); a square lists its boundary edges with
+1 when the edge direction agrees with the counterclockwise boundary.
"""
import json
import pathlib
import re

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


class Builder:
    def __init__(self, name, description):
        self.doc = {"name": name, "description": description, "cells": [], "charts": [],
                    "transports": [], "discriminant": [], "kinks": [], "single_parameter": True,
                    "gluing": [], "slabs": [], "cycles": [], "skeleton_weights": []}
        self.ids = {}

    def cell(self, label, dim, facets=()):
        cid = len(self.doc["cells"])
        entry = {"id": cid, "label": label, "dim": dim}
        if facets:
            entry["facets"] = [[self.ids[f], s] for f, s in facets]
        self.doc["cells"].append(entry)
        self.ids[label] = cid
        return cid

    def __getitem__(self, label):
        return self.ids[label]

    def write(self):
        OUT.mkdir(exist_ok=True)
        path = OUT / (self.doc["name"] + ".json")
        text = json.dumps(self.doc, indent=1)
        # Keep numeric vectors and matrix rows on one line.
        flat = re.compile(r"\[\s*([-\d.,\s]*?)\s*\]")
        text = flat.sub(lambda m: "[" + re.sub(r"\s*,\s*", ", ", m.group(1).strip()) + "]", text)
        path.write_text(text + "\n")


def tate(k=2):
    b = Builder("tate_k2", "R/Z with one vertex, one loop edge and kink k; the Tate curve degeneration")
    b.cell("v", 0)
    b.cell("e", 1, [("v", -1), ("v", 1)])
    b.doc["charts"].append({"cell": b["e"], "corners": [[0], [1]]})
    b.doc["kinks"].append({"facet": b["v"], "kink": k})
    b.doc["slabs"].append({"facet": b["v"], "constant": [1, 0], "order": 3, "terms": []})
    # One vertex inside e, one edge leaving through the slot-1 end and
    # re-entering through slot 0.
    b.doc["cycles"].append({"name": "beta", "vertices": [{"cell": b["e"], "anchor": b["e"]}],
                            "edges": [{"source": 0, "target": 0, "xi": [1],
                                       "route": [{"facet": b["v"], "from_side": 1}]}]})
    b.doc["skeleton_weights"].append({"name": "unit", "weights": [{"edge": b["e"], "a": 1}]})
    b.write()


def interval():
    b = Builder("interval", "[0,2] subdivided at 1, with boundary at both ends")
    for i in range(3):
        b.cell(f"v{i}", 0)
    for i in range(2):
        b.cell(f"e{i}", 1, [(f"v{i}", -1), (f"v{i+1}", 1)])
        b.doc["charts"].append({"cell": b[f"e{i}"], "corners": [[i], [i + 1]]})
    b.doc["kinks"].append({"facet": b["v1"], "kink": 1})
    b.doc["skeleton_weights"].append({"name": "span", "weights": [{"edge": b["e0"], "a": 1}, {"edge": b["e1"], "a": 1}]})
    b.write()


def circle():
    b = Builder("circle", "R/2Z with two vertices and two edges")
    b.cell("v0", 0)
    b.cell("v1", 0)
    b.cell("e0", 1, [("v0", -1), ("v1", 1)])
    b.cell("e1", 1, [("v1", -1), ("v0", 1)])
    b.doc["charts"].append({"cell": b["e0"], "corners": [[0], [1]]})
    b.doc["charts"].append({"cell": b["e1"], "corners": [[1], [2]]})
    b.doc["kinks"] += [{"facet": b["v0"], "kink": 1}, {"facet": b["v1"], "kink": 1}]
    b.doc["skeleton_weights"].append({"name": "unit", "weights": [{"edge": b["e0"], "a": 1}, {"edge": b["e1"], "a": 1}]})
    b.write()


def grid(b, nx, ny, wrap_x):
    """Vertices (i,j), edges h(i,j): (i,j)->(i+1,j), v(i,j): (i,j)->(i,j+1), squares sq(i,j).

    y always wraps with period ny; x wraps with period nx when wrap_x, else
    vertices run over i = 0..nx.
    """
    vx = nx if wrap_x else nx + 1
    V = lambda i, j: f"p{i % vx if wrap_x else i}{j % ny}"
    for i in range(vx):
        for j in range(ny):
            b.cell(V(i, j), 0)
    for i in range(nx):
        for j in range(ny):
            b.cell(f"h{i}{j}", 1, [(V(i, j), -1), (V(i + 1, j), 1)])
    for i in range(vx):
        for j in range(ny):
            b.cell(f"v{i}{j}", 1, [(V(i, j), -1), (V(i, j + 1), 1)])
    H = lambda i, j: f"h{i % nx}{j % ny}"
    W = lambda i, j: f"v{i % vx if wrap_x else i}{j % ny}"
    for i in range(nx):
        for j in range(ny):
            b.cell(f"sq{i}{j}", 2, [(H(i, j), 1), (W(i + 1, j), 1), (H(i, j + 1), -1), (W(i, j), -1)])
            corners = []
            for a in (0, 1):
                for c in (0, 1):
                    corners.append((b[V(i + a, j + c)], [i + a, j + c]))
            corners.sort()
            b.doc["charts"].append({"cell": b[f"sq{i}{j}"], "corners": [xy for _, xy in corners]})
    return V, H, W


def torus():
    b = Builder("torus", "R^2/2Z^2 cut into a 2x2 grid of unit squares; no discriminant")
    V, H, W = grid(b, 2, 2, True)
    # Kinks constant along each grid line keep the PL function closed up at every vertex.
    row = {0: 1, 1: 2}
    col = {0: 1, 1: 3}
    for i in range(2):
        for j in range(2):
            b.doc["kinks"].append({"facet": b[H(i, j)], "kink": row[j]})
            b.doc["kinks"].append({"facet": b[W(i, j)], "kink": col[i]})
    # Nontrivial gluing on the plus side of h00 and v10.
    b.doc["gluing"].append({"facet": b["h00"], "side": 1, "values": [[2, 0], [1, 0]]})
    b.doc["gluing"].append({"facet": b["v10"], "side": 1, "values": [[1, 0], [0, 1]]})
    b.doc["slabs"].append({"facet": b["h01"], "constant": [3, 0], "order": 3, "terms": []})
    # Horizontal ring y = 1/2 and vertical ring x = 1/2 as skeleton-weight cycles.
    b.doc["skeleton_weights"].append({"name": "row0", "weights": [{"edge": b[H(i, 0)], "a": 1} for i in range(2)]})
    b.doc["skeleton_weights"].append({"name": "col0", "weights": [{"edge": b[W(0, j)], "a": 1} for j in range(2)]})
    b.doc["skeleton_weights"].append({"name": "row1", "weights": [{"edge": b[H(i, 1)], "a": 1} for i in range(2)]})
    b.doc["skeleton_weights"].append({"name": "col1", "weights": [{"edge": b[W(1, j)], "a": 2} for j in range(2)]})
    # Explicit cycles: horizontal loop through sq00, sq10 and a vertical loop through sq00, sq01.
    for name, xi in (("horizontal_e1", [1, 0]), ("horizontal_e2", [0, 1])):
        b.doc["cycles"].append({"name": name,
                                "vertices": [{"cell": b["sq00"], "anchor": b["sq00"]}, {"cell": b["sq10"], "anchor": b["sq10"]}],
                                "edges": [{"source": 0, "target": 1, "xi": xi,
                                           "route": [{"facet": b["v10"], "corner": b[V(1, 0)], "from_side": 0}]},
                                          {"source": 1, "target": 0, "xi": xi,
                                           "route": [{"facet": b["v00"], "corner": b[V(0, 0)], "from_side": 1}]}]})
    for name, xi in (("vertical_e1", [1, 0]), ("vertical_e2", [0, 1])):
        b.doc["cycles"].append({"name": name,
                                "vertices": [{"cell": b["sq00"], "anchor": b["sq00"]}, {"cell": b["sq01"], "anchor": b["sq01"]}],
                                "edges": [{"source": 0, "target": 1, "xi": xi,
                                           "route": [{"facet": b["h01"], "corner": b[V(0, 1)], "from_side": 0}]},
                                          {"source": 1, "target": 0, "xi": xi,
                                           "route": [{"facet": b["h00"], "corner": b[V(0, 0)], "from_side": 1}]}]})
    b.write()
    return b


def from_side(b, facet, start):
    """0 when `start` is the lower-id cell containing `facet`."""
    cofaces = [c["id"] for c in b.doc["cells"] if any(f == b[facet] for f, _ in c.get("facets", []))]
    return cofaces.index(b[start])


def focus_focus():
    b = Builder("focus_focus", "annulus [0,2] x R/2Z, each unit square split along its diagonal, "
                "with one focus-focus point on the edge h01; cut to the right boundary")
    V = lambda i, j: f"p{i}{j % 2}"
    H = lambda i, j: f"h{i}{j % 2}"
    W = lambda i, j: f"v{i}{j % 2}"
    for i in range(3):
        for j in range(2):
            b.cell(V(i, j), 0)
    for i in range(2):
        for j in range(2):
            b.cell(H(i, j), 1, [(V(i, j), -1), (V(i + 1, j), 1)])
    for i in range(3):
        for j in range(2):
            b.cell(W(i, j), 1, [(V(i, j), -1), (V(i, j + 1), 1)])
    for i in range(2):
        for j in range(2):
            b.cell(f"d{i}{j}", 1, [(V(i, j), -1), (V(i + 1, j + 1), 1)])
    # lo below the diagonal, up above it; boundaries counterclockwise.
    for i in range(2):
        for j in range(2):
            b.cell(f"lo{i}{j}", 2, [(H(i, j), 1), (W(i + 1, j), 1), (f"d{i}{j}", -1)])
            b.cell(f"up{i}{j}", 2, [(f"d{i}{j}", 1), (H(i, j + 1), -1), (W(i, j), -1)])
            for tri, pts in ((f"lo{i}{j}", [(i, j), (i + 1, j), (i + 1, j + 1)]),
                             (f"up{i}{j}", [(i, j), (i + 1, j + 1), (i, j + 1)])):
                corners = sorted((b[V(x, y)], [x, y]) for x, y in pts)
                b.doc["charts"].append({"cell": b[tri], "corners": [xy for _, xy in corners]})
    shear = [[1, 1], [0, 1]]
    rho = b["h01"]
    b.doc["transports"].append({"facet": rho, "from": b["up00"], "matrix": shear, "corners": [b["p11"]]})
    b.doc["transports"].append({"facet": b["h11"], "from": b["up10"], "matrix": shear})
    b.doc["discriminant"].append({"edge": rho, "reference": b["up00"], "monodromy": None})
    # In the chart at p11 developed through the cut the rays are E(1,0),
    # NE(0,1), N(-1,1), W(-1,0), SW(-1,-1), S(0,-1); closing sum κ_ρ d_ρ = 0
    # forces κ(h11) = κ(v11) + κ(h01) + κ(d00).
    for i in range(2):
        for j in range(2):
            b.doc["kinks"].append({"facet": b[H(i, j)], "kink": 4 if (i, j) == (1, 1) else 1 + j})
            b.doc["kinks"].append({"facet": b[f"d{i}{j}"], "kink": 1})
    for j in range(2):
        b.doc["kinks"].append({"facet": b[W(1, j)], "kink": 1})

    def step(facet, start, corner=None):
        s = {"facet": b[facet], "from_side": from_side(b, facet, start)}
        if corner:
            s["corner"] = b[corner]
        return s
    # Vertical loops on either side of the focus-focus point, one vertex each.
    b.doc["cycles"].append({"name": "left_loop", "vertices": [{"cell": b["up00"], "anchor": b["up00"]}],
                            "edges": [{"source": 0, "target": 0, "xi": [0, 1],
                                       "route": [step("h01", "up00", "p01"), step("d01", "lo01", "p01"),
                                                 step("h00", "up01", "p00"), step("d00", "lo00", "p00")]}]})
    b.doc["cycles"].append({"name": "right_loop", "vertices": [{"cell": b["lo10"], "anchor": b["lo10"]}],
                            "edges": [{"source": 0, "target": 0, "xi": [1, 0],
                                       "route": [step("d10", "lo10", "p21"), step("h11", "up10", "p21"),
                                                 step("d11", "lo11", "p20"), step("h10", "up11", "p20")]}]})
    # Skeleton weights. Balancing at p11 reads a(h11) = a(h01) + a(column)
    # because the cut shears the upper frames.
    b.doc["skeleton_weights"].append({"name": "column", "weights": [{"edge": b[W(1, j)], "a": 1} for j in range(2)] + [{"edge": b["h11"], "a": 1}]})
    b.doc["skeleton_weights"].append({"name": "ring0", "weights": [{"edge": b[H(i, 0)], "a": 1} for i in range(2)]})
    b.doc["skeleton_weights"].append({"name": "ring1", "weights": [{"edge": b[H(i, 1)], "a": 1} for i in range(2)]})
    # Diagonal arc p01 -> p10 -> p21 away from the cut.
    b.doc["skeleton_weights"].append({"name": "diagonal", "weights": [{"edge": b["d01"], "a": 1}, {"edge": b["d10"], "a": 1}]})
    # Diagonal arc through p11: the sheared d11 needs h11 to balance.
    b.doc["skeleton_weights"].append({"name": "bent_diagonal", "weights": [{"edge": b["d00"], "a": 1}, {"edge": b["d11"], "a": 1}, {"edge": b["h11"], "a": 1}]})
    b.write()


if __name__ == "__main__":
    tate()
    interval()
    circle()
    torus()
    focus_focus()
