"""The scene script language: one element per line, call-expression syntax.

    wall_0=Wall(ax,ay,az,bx,by,bz,height,thickness)
    door_0=Door(wall_0,cx,cy,cz,width,height)
    window_0=Window(wall_0,cx,cy,cz,width,height)
    bbox_0=Bbox(category,cx,cy,cz,angle_z,sx,sy,sz)

UTF-8, LF line endings, ``#`` starts a comment. Serialization is
deterministic: walls, doors, windows, then boxes, ids ascending; numbers are
fixed 3-decimal floats, or integer bins when a QuantizationSpec is given.
"""

from __future__ import annotations

import re
import warnings

from .quantize import (
    QuantizationSpec,
    dequantize_angle,
    dequantize_coord,
    dequantize_length,
    quantize_scene,
)
from .scene import Opening, OrientedBox3D, Scene, Vec3, Wall, require_valid


class ScriptError(ValueError):
    """Parse failure; carries the 1-based line and column."""

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class ScriptWarning(UserWarning):
    """Lenient-mode diagnostics (e.g. unknown commands skipped)."""


_LINE_RE = re.compile(
    r"^(?P<ident>[A-Za-z_][A-Za-z0-9_]*)=(?P<command>[A-Za-z_][A-Za-z0-9_]*)\((?P<args>.*)\)$"
)
_IDENT_RE = re.compile(r"^(?P<family>[a-z]+)_(?P<id>\d+)$")
_WALL_REF_RE = re.compile(r"^wall_(?P<id>\d+)$")

_ARITY = {"Wall": 8, "Door": 6, "Window": 6, "Bbox": 8}
_FAMILY_FOR_COMMAND = {"Wall": "wall", "Door": "door", "Window": "window", "Bbox": "bbox"}


def _parse_number(token: str, line_no: int, col: int, quantized: bool) -> float:
    token = token.strip()
    if quantized and not re.fullmatch(r"[+-]?\d+", token):
        raise ScriptError(line_no, col, f"expected integer bin index, got {token!r}")
    try:
        return float(token)
    except ValueError:
        raise ScriptError(line_no, col, f"expected a number, got {token!r}") from None


def parse_script(
    text: str,
    strict: bool = True,
    spec: QuantizationSpec | None = None,
) -> Scene:
    """Parse script text into a Scene, preserving line order.

    In lenient mode (``strict=False``) lines with unknown commands are
    skipped and reported as ScriptWarning; strict mode raises. When ``spec``
    is given, numeric tokens are integer bins and are dequantized to bin
    centers (inverse of ``serialize_scene(scene, spec)``).
    """
    walls: list[Wall] = []
    openings: list[Opening] = []
    boxes: list[OrientedBox3D] = []
    seen_idents: set[str] = set()
    opening_lines: dict[str, int] = {}

    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE_RE.match(line)
        if m is None:
            col = raw.index(line[0]) + 1 if line else 1
            raise ScriptError(line_no, col, f"malformed line: {line!r}")
        ident, command, args_src = m.group("ident"), m.group("command"), m.group("args")

        if command not in _ARITY:
            if strict:
                raise ScriptError(line_no, 1, f"unknown command {command!r}")
            warnings.warn(
                f"line {line_no}: unknown command {command!r} skipped",
                ScriptWarning,
                stacklevel=2,
            )
            continue

        im = _IDENT_RE.match(ident)
        family = _FAMILY_FOR_COMMAND[command]
        if im is None or im.group("family") != family:
            raise ScriptError(line_no, 1, f"identifier {ident!r} does not match {family}_<n>")
        elem_id = int(im.group("id"))
        if ident in seen_idents:
            raise ScriptError(line_no, 1, f"duplicate identifier {ident!r}")
        seen_idents.add(ident)

        args = [a.strip() for a in args_src.split(",")] if args_src.strip() else []
        arity = _ARITY[command]
        if len(args) != arity:
            raise ScriptError(
                line_no, 1, f"{command} expects {arity} arguments, got {len(args)}"
            )
        arg_col = line.index("(") + 2

        if command == "Wall":
            nums = [_parse_number(a, line_no, arg_col, spec is not None) for a in args]
            if spec is not None:
                a = _dq_point(nums[0:3], spec)
                b = _dq_point(nums[3:6], spec)
                height = dequantize_length(int(nums[6]), spec)
                thickness = dequantize_length(int(nums[7]), spec)
            else:
                a = (nums[0], nums[1], nums[2])
                b = (nums[3], nums[4], nums[5])
                height, thickness = nums[6], nums[7]
            walls.append(Wall(elem_id, a, b, height, thickness))
        elif command in ("Door", "Window"):
            wm = _WALL_REF_RE.match(args[0])
            if wm is None:
                raise ScriptError(
                    line_no, arg_col, f"first argument must be a wall reference, got {args[0]!r}"
                )
            wall_id = int(wm.group("id"))
            nums = [_parse_number(a, line_no, arg_col, spec is not None) for a in args[1:]]
            if spec is not None:
                center = _dq_point(nums[0:3], spec)
                width = dequantize_length(int(nums[3]), spec)
                height = dequantize_length(int(nums[4]), spec)
            else:
                center = (nums[0], nums[1], nums[2])
                width, height = nums[3], nums[4]
            opening = Opening(elem_id, command.lower(), wall_id, center, width, height)
            opening_lines[opening.ident] = line_no
            openings.append(opening)
        else:  # Bbox
            category = args[0]
            if not category or any(ch in category for ch in "()=,"):
                raise ScriptError(line_no, arg_col, f"bad category token {category!r}")
            nums = [_parse_number(a, line_no, arg_col, spec is not None) for a in args[1:]]
            if spec is not None:
                center = _dq_point(nums[0:3], spec)
                angle = dequantize_angle(int(nums[3]), spec)
                scale = (
                    dequantize_length(int(nums[4]), spec),
                    dequantize_length(int(nums[5]), spec),
                    dequantize_length(int(nums[6]), spec),
                )
            else:
                center = (nums[0], nums[1], nums[2])
                angle = nums[3]
                scale = (nums[4], nums[5], nums[6])
            boxes.append(OrientedBox3D(elem_id, category, center, angle, scale))

    # Unresolvable wall references are a parse error (strict and lenient):
    # the script cannot be interpreted without its referent.
    wall_ids = {w.id for w in walls}
    for o in openings:
        if o.wall_id not in wall_ids:
            raise ScriptError(
                opening_lines[o.ident], 1, f"{o.ident} references missing wall_{o.wall_id}"
            )

    return Scene(tuple(walls), tuple(openings), tuple(boxes))


def _dq_point(nums: list[float], spec: QuantizationSpec) -> Vec3:
    return (
        dequantize_coord(int(nums[0]), spec, 0),
        dequantize_coord(int(nums[1]), spec, 1),
        dequantize_coord(int(nums[2]), spec, 2),
    )


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def serialize_scene(scene: Scene, spec: QuantizationSpec | None = None) -> str:
    """Serialize a valid scene to script text.

    Deterministic: walls, doors, windows, boxes, ids ascending. With a spec,
    every number is an integer bin (positions vs spec origin, lengths vs
    zero origin, angles on the [-pi, pi) grid); otherwise fixed 3-decimal
    floats. The empty scene serializes to "".
    """
    require_valid(scene)
    if spec is not None:
        scene = quantize_scene(scene, spec)
        fmt = lambda x: str(int(x))  # noqa: E731 - quantized values are integral
    else:
        fmt = _fmt

    lines: list[str] = []
    for w in sorted(scene.walls, key=lambda e: e.id):
        nums = [*w.a, *w.b, w.height, w.thickness]
        lines.append(f"wall_{w.id}=Wall({','.join(fmt(v) for v in nums)})")
    for kind, command in (("door", "Door"), ("window", "Window")):
        elems = [o for o in scene.openings if o.kind == kind]
        for o in sorted(elems, key=lambda e: e.id):
            nums = [*o.center, o.width, o.height]
            lines.append(
                f"{kind}_{o.id}={command}(wall_{o.wall_id},{','.join(fmt(v) for v in nums)})"
            )
    for b in sorted(scene.boxes, key=lambda e: e.id):
        nums = [*b.center, b.angle_z, *b.scale]
        lines.append(f"bbox_{b.id}=Bbox({b.category},{','.join(fmt(v) for v in nums)})")
    return "\n".join(lines) + ("\n" if lines else "")
