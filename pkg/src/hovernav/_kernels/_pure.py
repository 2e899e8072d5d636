"""Per-tick viewport kernels, pure-Python reference implementation.

Every function here is mirrored one-to-one in the compiled backend
(``hovernav._kernels._native``). The two files must stay identical operation
for operation: session logs promise bit-identical replay, and the test suite
asserts both backends agree on the last bit. When editing a formula, edit
both files and keep the evaluation order the same.

Conventions: all lengths in meters, screen frame origin at the display
center, map frame origin at the map center, y up. `scale` is screen meters
per map meter; 1.0 is the maximum (1:1) zoom, `min_scale` shows the whole
map.
"""

from math import sqrt

BACKEND = "pure"

# Gesture codes consumed by step_baseline (classification happens in the
# techniques layer, which matches touch ids between ticks).
GESTURE_IDLE = 0
GESTURE_DRAG = 1
GESTURE_PINCH = 2
GESTURE_GRIP = 3


def min_scale(map_w, map_h, disp_w, disp_h):
    """Smallest legal scale: the whole map just fits the display."""
    a = disp_w / map_w
    b = disp_h / map_h
    return a if a < b else b


def clamp_viewport(cx, cy, scale, map_w, map_h, disp_w, disp_h):
    """Clamp scale to [min_scale, 1] and keep the visible rect inside the map.

    At min_scale the whole map is visible on both axes, so the center is
    pinned to the origin exactly (no float dust from the limit arithmetic).
    """
    smin = min_scale(map_w, map_h, disp_w, disp_h)
    if scale <= smin:
        return 0.0, 0.0, smin
    if scale > 1.0:
        scale = 1.0
    lim_x = (map_w - disp_w / scale) * 0.5
    lim_y = (map_h - disp_h / scale) * 0.5
    if lim_x <= 0.0:
        cx = 0.0
    elif cx < -lim_x:
        cx = -lim_x
    elif cx > lim_x:
        cx = lim_x
    if lim_y <= 0.0:
        cy = 0.0
    elif cy < -lim_y:
        cy = -lim_y
    elif cy > lim_y:
        cy = lim_y
    return cx, cy, scale


def zoom_about_pivot(cx, cy, scale, px, py, new_scale,
                     map_w, map_h, disp_w, disp_h):
    """Rescale so the map point under screen point (px, py) stays put."""
    smin = min_scale(map_w, map_h, disp_w, disp_h)
    if new_scale < smin:
        new_scale = smin
    elif new_scale > 1.0:
        new_scale = 1.0
    if new_scale == scale:
        return clamp_viewport(cx, cy, scale, map_w, map_h, disp_w, disp_h)
    mx = cx + px / scale
    my = cy + py / scale
    cx = mx - px / new_scale
    cy = my - py / new_scale
    return clamp_viewport(cx, cy, new_scale, map_w, map_h, disp_w, disp_h)


def step_rate(cx, cy, scale, fx, fy, h, touching,
              zoom_speed, plane_gain, h_min, h_max, dead_half,
              map_w, map_h, disp_w, disp_h):
    """One tick of the hover-height rate-controlled technique.

    Finger height above the display picks a per-tick scale multiplier:
    heights in the upper half-volume shrink the map (multiplier below 1),
    heights in the lower half grow it, the midpoint is neutral. The finger's
    planar offset from the display center is a pan velocity, and the finger
    itself is the zoom pivot. Any touch contact freezes the viewport
    entirely so touchscreen input does not fight the hover control.

    `zoom_speed` and `plane_gain` arrive pre-scaled for the session tick
    rate; `plane_gain` converts finger offset (m) to screen travel per tick.
    """
    if touching:
        return cx, cy, scale
    h_mid = (h_min + h_max) * 0.5
    mult = 1.0
    if h > h_mid + dead_half:
        u = (h - h_mid) / (h_max - h_mid)
        if u < 0.0:
            u = 0.0
        elif u > 1.0:
            u = 1.0
        mult = 1.0 - zoom_speed * u
    elif h < h_mid - dead_half:
        u = (h_mid - h) / (h_mid - h_min)
        if u < 0.0:
            u = 0.0
        elif u > 1.0:
            u = 1.0
        mult = 1.0 + zoom_speed * u
    if mult != 1.0:
        cx, cy, scale = zoom_about_pivot(cx, cy, scale, fx, fy, scale * mult,
                                         map_w, map_h, disp_w, disp_h)
    if fx != 0.0 or fy != 0.0:
        cx = cx + (fx * plane_gain) / scale
        cy = cy + (fy * plane_gain) / scale
        return clamp_viewport(cx, cy, scale, map_w, map_h, disp_w, disp_h)
    return cx, cy, scale


def step_absolute(cx, cy, scale, fx, fy, h, touching,
                  log_mapping, h_max, plane_gain,
                  map_w, map_h, disp_w, disp_h):
    """One tick of the position-controlled variant: height IS the scale.

    h = 0 maps to scale 1, h = h_max to min_scale, linearly in scale (or in
    log scale when `log_mapping` is set). Pivot, pan, and touch freezing
    behave exactly as in step_rate.
    """
    if touching:
        return cx, cy, scale
    smin = min_scale(map_w, map_h, disp_w, disp_h)
    t = h / h_max
    if t <= 0.0:
        new_scale = 1.0
    elif t >= 1.0:
        new_scale = smin
    elif log_mapping:
        new_scale = smin ** t
    else:
        new_scale = 1.0 + (smin - 1.0) * t
    cx, cy, scale = zoom_about_pivot(cx, cy, scale, fx, fy, new_scale,
                                     map_w, map_h, disp_w, disp_h)
    if fx != 0.0 or fy != 0.0:
        cx = cx + (fx * plane_gain) / scale
        cy = cy + (fy * plane_gain) / scale
        return clamp_viewport(cx, cy, scale, map_w, map_h, disp_w, disp_h)
    return cx, cy, scale


def step_baseline(cx, cy, scale, gesture,
                  ax, ay, bx, by, ex, ey, gx, gy,
                  fvx, fvy, drag_gain, decay, min_speed, dt,
                  map_w, map_h, disp_w, disp_h):
    """One tick of the two-finger pinch/drag baseline with inertia.

    gesture=DRAG: one matched touch moved from (ax, ay) to (bx, by); content
    follows the finger and the instantaneous screen velocity is recorded for
    the fling. gesture=PINCH: two matched touches moved from pair (a, b) to
    pair (e, g); the map point under the previous midpoint lands under the
    current midpoint at the rescaled zoom, which pins content to the fingers.
    gesture=GRIP: fresh contact this tick; it anchors (and kills inertia).
    gesture=IDLE: no contact; an earlier fling velocity keeps panning with
    exponential decay until it drops below min_speed.

    Returns (cx, cy, scale, fling_vx, fling_vy).
    """
    if gesture == GESTURE_DRAG:
        dx = (bx - ax) * drag_gain
        dy = (by - ay) * drag_gain
        nvx = dx / dt
        nvy = dy / dt
        if dx != 0.0 or dy != 0.0:
            cx = cx - dx / scale
            cy = cy - dy / scale
            cx, cy, scale = clamp_viewport(cx, cy, scale,
                                           map_w, map_h, disp_w, disp_h)
        return cx, cy, scale, nvx, nvy
    if gesture == GESTURE_PINCH:
        dx0 = bx - ax
        dy0 = by - ay
        dx1 = gx - ex
        dy1 = gy - ey
        d0 = sqrt(dx0 * dx0 + dy0 * dy0)
        d1 = sqrt(dx1 * dx1 + dy1 * dy1)
        if d0 > 0.0:
            ratio = d1 / d0
        else:
            ratio = 1.0
        pmx = (ax + bx) * 0.5
        pmy = (ay + by) * 0.5
        cmx = (ex + gx) * 0.5
        cmy = (ey + gy) * 0.5
        if ratio == 1.0 and cmx == pmx and cmy == pmy:
            return cx, cy, scale, 0.0, 0.0
        smin = min_scale(map_w, map_h, disp_w, disp_h)
        s2 = scale * ratio
        if s2 < smin:
            s2 = smin
        elif s2 > 1.0:
            s2 = 1.0
        mx = cx + pmx / scale
        my = cy + pmy / scale
        cx = mx - cmx / s2
        cy = my - cmy / s2
        cx, cy, scale = clamp_viewport(cx, cy, s2,
                                       map_w, map_h, disp_w, disp_h)
        return cx, cy, scale, 0.0, 0.0
    if gesture == GESTURE_GRIP:
        return cx, cy, scale, 0.0, 0.0
    # idle: coast on the fling velocity, if any
    if fvx * fvx + fvy * fvy < min_speed * min_speed:
        return cx, cy, scale, 0.0, 0.0
    cx = cx - (fvx * dt) / scale
    cy = cy - (fvy * dt) / scale
    cx, cy, scale = clamp_viewport(cx, cy, scale, map_w, map_h, disp_w, disp_h)
    return cx, cy, scale, fvx * decay, fvy * decay
