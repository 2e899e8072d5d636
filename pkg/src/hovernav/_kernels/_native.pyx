# cython: language_level=3, boundscheck=False, cdivision=True
"""Per-tick viewport kernels, compiled backend.

Line-for-line mirror of ``hovernav._kernels._pure``; see that module for the
semantics. The arithmetic must match the pure module operation for operation
(and the build uses -ffp-contract=off) so both backends produce bit-identical
doubles.
"""

from libc.math cimport sqrt, pow

BACKEND = "native"

GESTURE_IDLE = 0
GESTURE_DRAG = 1
GESTURE_PINCH = 2
GESTURE_GRIP = 3


cdef inline double _min_scale(double map_w, double map_h,
                              double disp_w, double disp_h) nogil:
    cdef double a = disp_w / map_w
    cdef double b = disp_h / map_h
    return a if a < b else b


cdef inline (double, double, double) _clamp(double cx, double cy, double scale,
                                            double map_w, double map_h,
                                            double disp_w, double disp_h) nogil:
    cdef double smin = _min_scale(map_w, map_h, disp_w, disp_h)
    cdef double lim_x, lim_y
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


cdef inline (double, double, double) _zoom_about(double cx, double cy, double scale,
                                                 double px, double py, double new_scale,
                                                 double map_w, double map_h,
                                                 double disp_w, double disp_h) nogil:
    cdef double smin = _min_scale(map_w, map_h, disp_w, disp_h)
    cdef double mx, my
    if new_scale < smin:
        new_scale = smin
    elif new_scale > 1.0:
        new_scale = 1.0
    if new_scale == scale:
        return _clamp(cx, cy, scale, map_w, map_h, disp_w, disp_h)
    mx = cx + px / scale
    my = cy + py / scale
    cx = mx - px / new_scale
    cy = my - py / new_scale
    return _clamp(cx, cy, new_scale, map_w, map_h, disp_w, disp_h)


def min_scale(double map_w, double map_h, double disp_w, double disp_h):
    return _min_scale(map_w, map_h, disp_w, disp_h)


def clamp_viewport(double cx, double cy, double scale,
                   double map_w, double map_h, double disp_w, double disp_h):
    cdef (double, double, double) r = _clamp(cx, cy, scale,
                                             map_w, map_h, disp_w, disp_h)
    return r[0], r[1], r[2]


def zoom_about_pivot(double cx, double cy, double scale,
                     double px, double py, double new_scale,
                     double map_w, double map_h, double disp_w, double disp_h):
    cdef (double, double, double) r = _zoom_about(cx, cy, scale, px, py, new_scale,
                                                  map_w, map_h, disp_w, disp_h)
    return r[0], r[1], r[2]


def step_rate(double cx, double cy, double scale,
              double fx, double fy, double h, bint touching,
              double zoom_speed, double plane_gain,
              double h_min, double h_max, double dead_half,
              double map_w, double map_h, double disp_w, double disp_h):
    cdef double h_mid, mult, u
    cdef (double, double, double) r
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
        r = _zoom_about(cx, cy, scale, fx, fy, scale * mult,
                        map_w, map_h, disp_w, disp_h)
        cx = r[0]
        cy = r[1]
        scale = r[2]
    if fx != 0.0 or fy != 0.0:
        cx = cx + (fx * plane_gain) / scale
        cy = cy + (fy * plane_gain) / scale
        r = _clamp(cx, cy, scale, map_w, map_h, disp_w, disp_h)
        return r[0], r[1], r[2]
    return cx, cy, scale


def step_absolute(double cx, double cy, double scale,
                  double fx, double fy, double h, bint touching,
                  bint log_mapping, double h_max, double plane_gain,
                  double map_w, double map_h, double disp_w, double disp_h):
    cdef double smin, t, new_scale
    cdef (double, double, double) r
    if touching:
        return cx, cy, scale
    smin = _min_scale(map_w, map_h, disp_w, disp_h)
    t = h / h_max
    if t <= 0.0:
        new_scale = 1.0
    elif t >= 1.0:
        new_scale = smin
    elif log_mapping:
        new_scale = pow(smin, t)
    else:
        new_scale = 1.0 + (smin - 1.0) * t
    r = _zoom_about(cx, cy, scale, fx, fy, new_scale,
                    map_w, map_h, disp_w, disp_h)
    cx = r[0]
    cy = r[1]
    scale = r[2]
    if fx != 0.0 or fy != 0.0:
        cx = cx + (fx * plane_gain) / scale
        cy = cy + (fy * plane_gain) / scale
        r = _clamp(cx, cy, scale, map_w, map_h, disp_w, disp_h)
        return r[0], r[1], r[2]
    return cx, cy, scale


def step_baseline(double cx, double cy, double scale, int gesture,
                  double ax, double ay, double bx, double by,
                  double ex, double ey, double gx, double gy,
                  double fvx, double fvy,
                  double drag_gain, double decay, double min_speed, double dt,
                  double map_w, double map_h, double disp_w, double disp_h):
    cdef double dx, dy, nvx, nvy
    cdef double dx0, dy0, dx1, dy1, d0, d1, ratio
    cdef double pmx, pmy, cmx, cmy, smin, s2, mx, my
    cdef (double, double, double) r
    if gesture == 1:  # drag
        dx = (bx - ax) * drag_gain
        dy = (by - ay) * drag_gain
        nvx = dx / dt
        nvy = dy / dt
        if dx != 0.0 or dy != 0.0:
            cx = cx - dx / scale
            cy = cy - dy / scale
            r = _clamp(cx, cy, scale, map_w, map_h, disp_w, disp_h)
            cx = r[0]
            cy = r[1]
            scale = r[2]
        return cx, cy, scale, nvx, nvy
    if gesture == 2:  # pinch
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
        smin = _min_scale(map_w, map_h, disp_w, disp_h)
        s2 = scale * ratio
        if s2 < smin:
            s2 = smin
        elif s2 > 1.0:
            s2 = 1.0
        mx = cx + pmx / scale
        my = cy + pmy / scale
        cx = mx - cmx / s2
        cy = my - cmy / s2
        r = _clamp(cx, cy, s2, map_w, map_h, disp_w, disp_h)
        return r[0], r[1], r[2], 0.0, 0.0
    if gesture == 3:  # fresh grip
        return cx, cy, scale, 0.0, 0.0
    if fvx * fvx + fvy * fvy < min_speed * min_speed:
        return cx, cy, scale, 0.0, 0.0
    cx = cx - (fvx * dt) / scale
    cy = cy - (fvy * dt) / scale
    r = _clamp(cx, cy, scale, map_w, map_h, disp_w, disp_h)
    return r[0], r[1], r[2], fvx * decay, fvy * decay
