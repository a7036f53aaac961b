"""Named charts, surface patches and fields, and the JSON configuration format.

Every catalog entry ships analytic derivatives so that finite differences
are only ever taken once (by the ``numeric()`` twins).  JSON documents carry
the tag ``schema: "cosserat-curvature/1"``; rotation angle functions use a
1-based ``var`` index there and a 0-based one in Python.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import jsonschema
import numpy as np

from .cosserat3d import Config3D
from .curvilinear import Chart3
from .errors import SchemaError
from .fields import (AngleFunction, Field, affine_field, axis_angle_field, composed_rotation,
                     constant_rotation, polynomial_field, sum_fields)
from .shell import ShellConfig
from .surface import SurfacePatch

SCHEMA_TAG = "cosserat-curvature/1"


# ---------------------------------------------------------------------------
# charts


def identity_chart(box=((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))) -> Chart3:
    return Chart3(lambda x: x.copy(), box, lambda x: np.eye(3), lambda x: np.zeros((3, 3, 3)),
                  name="identity")


def affine_chart(diag=(2.0, 3.0, 1.0), box=((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))) -> Chart3:
    d = np.asarray(diag, dtype=float)
    return Chart3(lambda x: d * x, box, lambda x: np.diag(d), lambda x: np.zeros((3, 3, 3)),
                  name="affine")


def cylindrical_chart(box=((0.5, 0.0, 0.0), (1.5, 1.5, 1.0))) -> Chart3:
    """``(r cos t, r sin t, z)`` away from the axis."""

    def theta(x):
        return np.array([x[0] * np.cos(x[1]), x[0] * np.sin(x[1]), x[2]])

    def jac(x):
        c, s = np.cos(x[1]), np.sin(x[1])
        return np.array([[c, s, 0.0], [-x[0] * s, x[0] * c, 0.0], [0.0, 0.0, 1.0]])

    def hess(x):
        c, s = np.cos(x[1]), np.sin(x[1])
        h = np.zeros((3, 3, 3))
        h[0, 1] = h[1, 0] = (-s, c, 0.0)
        h[1, 1] = (-x[0] * c, -x[0] * s, 0.0)
        return h

    return Chart3(theta, box, jac, hess, name="cylindrical")


def perturbed_chart(amplitude=0.1, box=((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))) -> Chart3:
    """``x + a (sin x2, sin x3, sin x1)``: curved and non-orthogonal."""
    a = float(amplitude)

    def theta(x):
        return x + a * np.sin(x[[1, 2, 0]])

    def jac(x):
        c = np.cos(x)
        return np.array([[1.0, 0.0, a * c[0]], [a * c[1], 1.0, 0.0], [0.0, a * c[2], 1.0]])

    def hess(x):
        s = np.sin(x)
        h = np.zeros((3, 3, 3))
        h[0, 0, 2] = -a * s[0]
        h[1, 1, 0] = -a * s[1]
        h[2, 2, 1] = -a * s[2]
        return h

    return Chart3(theta, box, jac, hess, name="perturbed")


# ---------------------------------------------------------------------------
# surface patches


def plane_patch(box=((0.0, 0.0), (1.0, 1.0))) -> SurfacePatch:
    return SurfacePatch(lambda x: np.array([x[0], x[1], 0.0]), box,
                        lambda x: np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
                        lambda x: np.zeros((2, 2, 3)), name="plane")


def tilted_plane_patch(u=(1.0, 0.0, 0.3), v=(0.2, 1.0, 0.5),
                       box=((0.0, 0.0), (1.0, 1.0))) -> SurfacePatch:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return SurfacePatch(lambda x: x[0] * u + x[1] * v, box, lambda x: np.vstack([u, v]),
                        lambda x: np.zeros((2, 2, 3)), name="tilted_plane")


def cylinder_patch(radius=2.0, box=((0.0, 0.0), (1.5, 1.0))) -> SurfacePatch:
    """Normal ``(cos x1, sin x1, 0)`` points outward, so ``b_11 = -R``."""
    R = float(radius)

    def y0(x):
        return np.array([R * np.cos(x[0]), R * np.sin(x[0]), x[1]])

    def jac(x):
        return np.array([[-R * np.sin(x[0]), R * np.cos(x[0]), 0.0], [0.0, 0.0, 1.0]])

    def hess(x):
        h = np.zeros((2, 2, 3))
        h[0, 0] = (-R * np.cos(x[0]), -R * np.sin(x[0]), 0.0)
        return h

    return SurfacePatch(y0, box, jac, hess, name="cylinder")


def sphere_patch(radius=1.0, box=((0.0, -0.8), (1.5, 0.8))) -> SurfacePatch:
    """Longitude/latitude patch; the normal points outward, so ``b = -a / R``."""
    R = float(radius)

    def y0(x):
        c1, s1, c2, s2 = np.cos(x[0]), np.sin(x[0]), np.cos(x[1]), np.sin(x[1])
        return R * np.array([c1 * c2, s1 * c2, s2])

    def jac(x):
        c1, s1, c2, s2 = np.cos(x[0]), np.sin(x[0]), np.cos(x[1]), np.sin(x[1])
        return R * np.array([[-s1 * c2, c1 * c2, 0.0], [-c1 * s2, -s1 * s2, c2]])

    def hess(x):
        c1, s1, c2, s2 = np.cos(x[0]), np.sin(x[0]), np.cos(x[1]), np.sin(x[1])
        h = np.empty((2, 2, 3))
        h[0, 0] = R * np.array([-c1 * c2, -s1 * c2, 0.0])
        h[0, 1] = h[1, 0] = R * np.array([s1 * s2, -c1 * s2, 0.0])
        h[1, 1] = R * np.array([-c1 * c2, -s1 * c2, -s2])
        return h

    return SurfacePatch(y0, box, jac, hess, name="sphere")


def graph_patch(amplitude=0.2, box=((0.0, 0.0), (1.5, 1.5))) -> SurfacePatch:
    """``(x1, x2, A sin x1 sin x2)``."""
    A = float(amplitude)

    def y0(x):
        return np.array([x[0], x[1], A * np.sin(x[0]) * np.sin(x[1])])

    def jac(x):
        c1, s1, c2, s2 = np.cos(x[0]), np.sin(x[0]), np.cos(x[1]), np.sin(x[1])
        return np.array([[1.0, 0.0, A * c1 * s2], [0.0, 1.0, A * s1 * c2]])

    def hess(x):
        c1, s1, c2, s2 = np.cos(x[0]), np.sin(x[0]), np.cos(x[1]), np.sin(x[1])
        h = np.zeros((2, 2, 3))
        h[0, 0, 2] = h[1, 1, 2] = -A * s1 * s2
        h[0, 1, 2] = h[1, 0, 2] = A * c1 * c2
        return h

    return SurfacePatch(y0, box, jac, hess, name="graph")


# ---------------------------------------------------------------------------
# default families used by the validation suites


def default_charts() -> dict[str, Chart3]:
    return {"identity": identity_chart(), "affine": affine_chart(),
            "cylindrical": cylindrical_chart(), "perturbed": perturbed_chart()}


def default_patches() -> dict[str, SurfacePatch]:
    return {"plane": plane_patch(), "tilted_plane": tilted_plane_patch(),
            "cylinder": cylinder_patch(), "sphere": sphere_patch(), "graph": graph_patch()}


def rotation_fields_3d() -> dict[str, Field]:
    axis = np.array([1.0, 2.0, 2.0]) / 3.0
    return {
        "twist": axis_angle_field((0, 0, 1), AngleFunction("linear", 1.0, 0), name="twist"),
        "wave": axis_angle_field(axis, AngleFunction("sin", 1.3, 1), name="wave"),
        "tilted": composed_rotation([constant_rotation((1, 1, 0), 0.7),
                                     axis_angle_field((0.3, -0.5, 0.8), AngleFunction("linear", 0.9, 2))],
                                    name="tilted"),
        "composed": composed_rotation([
            axis_angle_field((1, 0, 0), AngleFunction("sin", 0.8, 2)),
            axis_angle_field((0, 1, 0), AngleFunction("linear", 0.6, 0)),
            axis_angle_field(axis, AngleFunction("sin", 1.3, 1)),
        ], name="composed"),
    }


def rotation_fields_2d() -> dict[str, Field]:
    axis = np.array([1.0, 2.0, 2.0]) / 3.0
    return {
        "twist": axis_angle_field((0, 0, 1), AngleFunction("linear", 1.0, 0), name="twist"),
        "wave": axis_angle_field(axis, AngleFunction("sin", 1.3, 1), name="wave"),
        "tilted": composed_rotation([constant_rotation((1, 1, 0), 0.7),
                                     axis_angle_field((0.3, -0.5, 0.8), AngleFunction("linear", 0.9, 1))],
                                    name="tilted"),
        "composed": composed_rotation([
            axis_angle_field((1, 0, 0), AngleFunction("sin", 0.8, 1)),
            axis_angle_field((0, 1, 0), AngleFunction("linear", 0.6, 0)),
            axis_angle_field(axis, AngleFunction("sin", 1.3, 1)),
        ], name="composed"),
    }


def nontrivial_initial_rotation_3d() -> Field:
    return composed_rotation([constant_rotation((0, 1, 1), 0.4),
                              axis_angle_field((1, 0, 0), AngleFunction("sin", 0.7, 1))],
                             name="q0_3d")


def polynomial_deformation(base: Field, dim: int, seed: int = 0, scale: float = 0.05) -> Field:
    """``base + p`` with a seeded polynomial perturbation ``p`` of degree <= 2."""
    rng = np.random.default_rng(seed)
    terms = []
    for powers in np.ndindex(*(3,) * dim):
        if 0 < sum(powers) <= 2:
            terms.append((scale * rng.standard_normal(3), powers))
    return sum_fields(base, polynomial_field(terms), name="polynomial")


# ---------------------------------------------------------------------------
# JSON configuration


@dataclass(frozen=True)
class Document:
    kind: str
    config: object
    params: dict | None
    raw: dict


def _schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("schema.json").read_text())


def _pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def validate_document(doc) -> None:
    validator = jsonschema.Draft202012Validator(_schema())
    error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if error is not None:
        raise SchemaError(error.message, _pointer(error.absolute_path))


def _angle(node) -> AngleFunction:
    return AngleFunction(node["kind"], float(node["coeff"]), int(node["var"]) - 1)


def rotation_from_json(node, dim: int, pointer: str = "") -> Field:
    kind = node["type"]
    if kind == "constant":
        return constant_rotation(node.get("axis", (0, 0, 1)), float(node.get("angle", 0.0)))
    if kind == "axis_angle":
        angle = _angle(node["angle"])
        if angle.var >= dim:
            raise SchemaError(f"var must be between 1 and {dim}", pointer + "/angle/var")
        return axis_angle_field(node["axis"], angle)
    return composed_rotation([rotation_from_json(f, dim, f"{pointer}/factors/{i}")
                              for i, f in enumerate(node["factors"])])


def deformation_from_json(node, base: Field, dim: int) -> Field:
    kind = node["type"]
    if kind == "reference":
        return base
    if kind == "affine":
        return affine_field(base, node["matrix"], node.get("offset", (0.0, 0.0, 0.0)))
    terms = [(np.asarray(t["coeff"], dtype=float), t["powers"]) for t in node["terms"]]
    bad = [i for i, (_, p) in enumerate(terms) if len(p) != dim]
    if bad:
        raise SchemaError(f"powers must have {dim} entries", f"/deformation/terms/{bad[0]}/powers")
    poly = polynomial_field(terms)
    return sum_fields(base, poly) if node.get("add_reference", True) else poly


def chart_from_json(node) -> Chart3:
    kind = node["type"]
    if kind == "identity":
        return identity_chart()
    if kind == "affine":
        return affine_chart(node.get("diag", (2.0, 3.0, 1.0)))
    if kind == "cylindrical":
        return cylindrical_chart()
    return perturbed_chart(node.get("amplitude", 0.1))


def patch_from_json(node) -> SurfacePatch:
    kind = node["type"]
    if kind == "plane":
        return plane_patch()
    if kind == "tilted_plane":
        return tilted_plane_patch(node.get("u", (1.0, 0.0, 0.3)), node.get("v", (0.2, 1.0, 0.5)))
    if kind == "cylinder":
        return cylinder_patch(node.get("radius", 2.0))
    if kind == "sphere":
        return sphere_patch(node.get("radius", 1.0))
    return graph_patch(node.get("amplitude", 0.2))


def parse_document(doc) -> Document:
    """Validate ``doc`` and build the configuration it describes."""
    validate_document(doc)
    kind = doc["kind"]
    params = doc.get("params")
    if kind == "continuum":
        chart = chart_from_json(doc["chart"])
        cfg = Config3D(chart, deformation_from_json(doc.get("deformation", {"type": "reference"}),
                                                    chart.as_field(), 3),
                       rotation_from_json(doc["rotation"], 3, "/rotation"))
        if "initial_rotation" in doc:
            cfg = Config3D(cfg.chart, cfg.deformation, cfg.rotation,
                           rotation_from_json(doc["initial_rotation"], 3, "/initial_rotation"))
        return Document(kind, cfg, params, doc)
    if kind == "shell":
        patch = patch_from_json(doc["patch"])
        q0 = doc.get("initial_rotation")
        cfg = ShellConfig(patch, deformation_from_json(doc.get("deformation", {"type": "reference"}),
                                                       patch.as_field(), 2),
                          rotation_from_json(doc["rotation"], 2, "/rotation"),
                          None if q0 is None else rotation_from_json(q0, 2, "/initial_rotation"))
        return Document(kind, cfg, params, doc)
    return Document(kind, None, params, doc)


def load_document(path) -> Document:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return parse_document(doc)
