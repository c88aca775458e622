"""Mesh writers and readers: text OBJ, binary little-endian PLY, CSV dump.

OBJ carries positions (17 significant digits), normals and the parameter
coordinates as texture coordinates.  PLY is binary little-endian with double
positions/normals, the Gauss curvature as a per-vertex ``quality`` scalar
and the parameter coordinates as (u, v); a PLY round trip is bit exact.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .immersion import SurfaceMesh


def write_obj(mesh: SurfaceMesh, path) -> None:
    if mesh.n_vertices == 0:
        raise ValidationError("refusing to write an empty mesh to OBJ")
    with open(path, "w") as fh:
        fh.write("# minlam surface mesh\n")
        for v in mesh.vertices:
            fh.write(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}\n")
        for p in mesh.params:
            fh.write(f"vt {p[0]:.17g} {p[1]:.17g}\n")
        for n in mesh.normals:
            fh.write(f"vn {n[0]:.17g} {n[1]:.17g} {n[2]:.17g}\n")
        for t in mesh.triangles:
            i, j, k = (int(x) + 1 for x in t)
            fh.write(f"f {i}/{i}/{i} {j}/{j}/{j} {k}/{k}/{k}\n")


def read_obj(path) -> SurfaceMesh:
    verts, uvs, normals, faces = [], [], [], []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            tag = parts[0]
            if tag == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif tag == "vt":
                uvs.append([float(x) for x in parts[1:3]])
            elif tag == "vn":
                normals.append([float(x) for x in parts[1:4]])
            elif tag == "f":
                faces.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
    nv = len(verts)
    return SurfaceMesh(
        vertices=np.asarray(verts, float).reshape(nv, 3),
        params=np.asarray(uvs, float).reshape(-1, 2) if uvs else np.zeros((nv, 2)),
        triangles=np.asarray(faces, np.int64).reshape(-1, 3),
        normals=np.asarray(normals, float).reshape(-1, 3) if normals else np.zeros((nv, 3)),
        gauss_curvature=np.zeros(nv),
    )


_PLY_VERTEX_DTYPE = np.dtype(
    [
        ("x", "<f8"), ("y", "<f8"), ("z", "<f8"),
        ("nx", "<f8"), ("ny", "<f8"), ("nz", "<f8"),
        ("quality", "<f8"),
        ("u", "<f8"), ("v", "<f8"),
    ]
)
_PLY_FACE_DTYPE = np.dtype([("n", "u1"), ("i0", "<u4"), ("i1", "<u4"), ("i2", "<u4")])


def write_ply(mesh: SurfaceMesh, path) -> None:
    if mesh.n_vertices == 0:
        raise ValidationError("refusing to write an empty mesh to PLY")
    header = (
        "ply\n"
        "format binary_little_endian 1.0\n"
        "comment minlam surface mesh\n"
        f"element vertex {mesh.n_vertices}\n"
        "property double x\nproperty double y\nproperty double z\n"
        "property double nx\nproperty double ny\nproperty double nz\n"
        "property double quality\n"
        "property double u\nproperty double v\n"
        f"element face {mesh.n_triangles}\n"
        "property list uchar uint vertex_indices\n"
        "end_header\n"
    )
    vrec = np.empty(mesh.n_vertices, _PLY_VERTEX_DTYPE)
    for i, name in enumerate(("x", "y", "z")):
        vrec[name] = mesh.vertices[:, i]
    for i, name in enumerate(("nx", "ny", "nz")):
        vrec[name] = mesh.normals[:, i]
    vrec["quality"] = mesh.gauss_curvature
    vrec["u"] = mesh.params[:, 0]
    vrec["v"] = mesh.params[:, 1]
    frec = np.empty(mesh.n_triangles, _PLY_FACE_DTYPE)
    frec["n"] = 3
    for i, name in enumerate(("i0", "i1", "i2")):
        frec[name] = mesh.triangles[:, i]
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(vrec.tobytes())
        fh.write(frec.tobytes())


def read_ply(path) -> SurfaceMesh:
    with open(path, "rb") as fh:
        blob = fh.read()
    end = blob.index(b"end_header\n") + len(b"end_header\n")
    header = blob[:end].decode("ascii").splitlines()
    if "format binary_little_endian 1.0" not in header[1]:
        raise ValidationError("only binary little-endian PLY is supported")
    nv = nf = 0
    for line in header:
        if line.startswith("element vertex"):
            nv = int(line.split()[-1])
        elif line.startswith("element face"):
            nf = int(line.split()[-1])
    vbytes = nv * _PLY_VERTEX_DTYPE.itemsize
    vrec = np.frombuffer(blob[end : end + vbytes], dtype=_PLY_VERTEX_DTYPE)
    frec = np.frombuffer(blob[end + vbytes :], dtype=_PLY_FACE_DTYPE, count=nf)
    return SurfaceMesh(
        vertices=np.column_stack([vrec["x"], vrec["y"], vrec["z"]]),
        params=np.column_stack([vrec["u"], vrec["v"]]),
        triangles=np.column_stack([frec["i0"], frec["i1"], frec["i2"]]).astype(np.int64),
        normals=np.column_stack([vrec["nx"], vrec["ny"], vrec["nz"]]),
        gauss_curvature=np.asarray(vrec["quality"], float),
    )


def write_mesh_csv(mesh: SurfaceMesh, path) -> None:
    """Per-vertex dump: parameter coordinates, position, Gauss curvature."""
    with open(path, "w") as fh:
        fh.write("x,y,x1,x2,x3,K\n")
        for p, v, k in zip(mesh.params, mesh.vertices, mesh.gauss_curvature):
            fh.write(
                f"{p[0]!r},{p[1]!r},{v[0]!r},{v[1]!r},{v[2]!r},{k!r}\n"
            )
