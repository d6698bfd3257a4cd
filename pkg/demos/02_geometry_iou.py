# ## Geometric kernels: plane quads, polygon clipping, planar and box IoU
#
# Layout elements are plane segments; objects are z-rotated cuboids. Both
# metrics reduce to convex polygon clipping plus interval arithmetic.

import math

import scenekit as sk
from scenekit.geometry import Polygon2D

# ### Walls become quads, openings become in-wall rectangles

scene = sk.parse_script(
    "wall_0=Wall(0,0,0,4,0,0,2.6,0.1)\ndoor_0=Door(wall_0,2,0,1,1,2)\n"
)
wall_quad = sk.element_quad(scene.walls[0], scene)
door_quad = sk.element_quad(scene.openings[0], scene)
print("wall corners:", wall_quad.corners)
print("door corners:", door_quad.corners)

# ### Convex clipping: the classic square-vs-rotated-square octagon

square = Polygon2D(((-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)))
r = math.sqrt(2) / 2
diamond = Polygon2D(((-r, 0), (0, -r), (r, 0), (0, r)))
print("octagon area:", sk.convex_clip_area(square, diamond))
print("analytic:     ", 2 * (math.sqrt(2) - 1))

# ### Planar IoU projects the prediction into the ground-truth plane
#
# Shifting a wall by half its length leaves overlap L/2 against union 3L/2.

gt = sk.parse_script("wall_0=Wall(0,0,0,4,0,0,2.6,0.1)")
pred = sk.parse_script("wall_0=Wall(2,0,0,6,0,0,2.6,0.1)")
iou = sk.iou_planar(sk.element_quad(pred.walls[0], pred), sk.element_quad(gt.walls[0], gt))
print("half-shift planar IoU:", iou)  # 1/3

# The projection direction is defined by the ground truth, so the metric is
# deliberately asymmetric for non-parallel elements.

# ### Rotated-box IoU is exact: footprint clipping x height overlap

cube = sk.OrientedBox3D(0, "crate", (0, 0, 0), 0.0, (1, 1, 1))
turned = sk.OrientedBox3D(0, "crate", (0, 0, 0), math.pi / 4, (1, 1, 1))
print("cube vs 45-degree cube:", sk.iou_box3d(cube, turned))  # ~0.7071

lifted = sk.OrientedBox3D(0, "crate", (0, 0, 0.5), 0.0, (1, 1, 1))
print("cube vs half-lifted cube:", sk.iou_box3d(cube, lifted))  # 1/3
