"""
OFF meshes.

A "# dim n" comment records the dimension. 3D polytopes are written with one
face per facet. Planar bodies (n = 2) get z = 0 and a single face, and read back
as 2D; files without the comment count as 2D when z = 0 and at most one face.
"""

from typing import List

import numpy as np

from core.adapters.base_adapter import RecordAdapter
from core.bodies.polytope import Polytope
from core.exceptions import PolytopeError, RecordFormatError


def _polygon_loop(vertices: np.ndarray) -> List[int]:
    center = vertices.mean(axis=0)
    angles = np.arctan2(vertices[:, 1] - center[1], vertices[:, 0] - center[0])
    return [int(i) for i in np.argsort(angles, kind="stable")]


class OffAdapter(RecordAdapter):
    """Object File Format reader/writer for polytopes"""

    format_name = "off"
    extensions = (".off",)

    def render(self, body: Polytope) -> str:
        if not isinstance(body, Polytope):
            raise TypeError(f"OFF meshes hold polytopes, got {type(body).__name__}")
        vertices = body.vertices
        if body.dim == 2:
            faces = [_polygon_loop(vertices)] if len(vertices) > 1 else []
            vertices = np.column_stack([vertices, np.zeros(len(vertices))])
        elif body.kind == "flat":
            faces = [[int(i) for i in body.facets[0]]] if body.facets else []
        else:
            faces = [[int(i) for i in facet] for facet in body.facets]

        lines = ["OFF", f"# dim {body.dim}", f"{len(vertices)} {len(faces)} 0"]
        lines += [" ".join(f"{x:.17g}" for x in row) for row in vertices]
        lines += [" ".join(str(i) for i in [len(face)] + face) for face in faces]
        return "\n".join(lines) + "\n"

    def parse(self, text: str, source: str = "<string>") -> Polytope:
        rows, declared = [], None
        for number, raw in enumerate(text.splitlines(), start=1):
            comment = raw.partition("#")[2].split()
            if len(comment) == 2 and comment[0] == "dim" and comment[1] in ("2", "3"):
                declared = int(comment[1])
            line = raw.split('#', 1)[0].strip()
            if line:
                rows.append((number, line))
        if not rows or rows[0][1].split()[0] != "OFF":
            raise RecordFormatError("missing OFF header", source, "line 1")

        header = rows[0][1].split()[1:]
        body = rows[1:]
        if not header:
            if not body:
                raise RecordFormatError("missing counts line", source, "line 2")
            number, counts_line = body[0]
            header, body = counts_line.split(), body[1:]
        else:
            number = rows[0][0]
        try:
            vertex_count = int(header[0])
        except (IndexError, ValueError):
            raise RecordFormatError("bad counts line", source, f"line {number}") from None

        if len(body) < vertex_count:
            raise RecordFormatError(
                f"expected {vertex_count} vertex lines, found {len(body)}", source
            )
        points = []
        for number, line in body[:vertex_count]:
            try:
                coords = [float(x) for x in line.split()[:3]]
            except ValueError:
                raise RecordFormatError("bad vertex line", source, f"line {number}") from None
            if len(coords) != 3:
                raise RecordFormatError("vertex needs 3 coordinates", source, f"line {number}")
            points.append(coords)

        points = np.array(points).reshape(-1, 3)
        face_count = int(header[1]) if len(header) > 1 and header[1].isdigit() else 0
        planar = len(points) > 0 and np.all(points[:, 2] == 0.0) and face_count <= 1
        if declared == 2 or (declared is None and planar):
            points = points[:, :2]
        try:
            return Polytope.from_vertices(points)
        except PolytopeError as e:
            raise RecordFormatError(f"degenerate mesh: {e}", source) from e
