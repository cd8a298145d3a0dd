import itertools

import numpy as np

from blenderlab.error import ParameterArgumentError


class Interval(object):
    """ Closed interval [a, b]; empty when a > b. """

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = float(a)
        self.b = float(b)

    @property
    def length(self):
        return max(self.b - self.a, 0.0)

    @property
    def mid(self):
        return (self.a + self.b) / 2

    def is_empty(self):
        return self.a > self.b

    def contains(self, value, tol=0.0):
        return self.a - tol <= value <= self.b + tol

    def intersects(self, interval):
        return not (interval.a > self.b or self.a > interval.b)

    def __repr__(self):
        return r"Interval(%s,%s)" % (self.a, self.b)


class IntervalSet(object):
    """ Union of closed intervals, overlapping members merged on construction. """

    def __init__(self, intervals):
        ordered = sorted((iv for iv in intervals if not iv.is_empty()), key=lambda iv: iv.a)
        stack = []
        for interval in ordered:
            if stack and interval.a <= stack[-1].b:
                stack[-1] = Interval(stack[-1].a, max(stack[-1].b, interval.b))
            else:
                stack.append(Interval(interval.a, interval.b))
        self.intervals = stack

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def covers(self, interval):
        return any(iv.a <= interval.a and interval.b <= iv.b for iv in self.intervals)

    def largest_gap(self, interval):
        """Length of the longest stretch of `interval` left uncovered."""
        gap = 0.0
        cursor = interval.a
        for iv in self.intervals:
            if iv.b < cursor:
                continue
            if iv.a > interval.b:
                break
            gap = max(gap, iv.a - cursor)
            cursor = max(cursor, iv.b)
        return max(gap, interval.b - cursor)


class Box(object):
    """Axis-aligned box given by lower and upper corner arrays."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo = np.asarray(lo, dtype=float).reshape(-1)
        hi = np.asarray(hi, dtype=float).reshape(-1)
        if lo.shape != hi.shape:
            raise ParameterArgumentError("box corners must have equal length")
        self.lo = lo
        self.hi = hi

    @classmethod
    def from_json(cls, data, name="box"):
        if not isinstance(data, dict) or "lo" not in data or "hi" not in data:
            raise ParameterArgumentError(f"{name} must be an object with lo and hi")
        return cls(data["lo"], data["hi"])

    @classmethod
    def around(cls, center, halfwidths):
        center = np.asarray(center, dtype=float)
        halfwidths = np.broadcast_to(np.asarray(halfwidths, dtype=float), center.shape)
        return cls(center - halfwidths, center + halfwidths)

    def to_dict(self):
        return {"lo": self.lo.tolist(), "hi": self.hi.tolist()}

    @property
    def dim(self):
        return self.lo.size

    @property
    def center(self):
        return (self.lo + self.hi) / 2

    @property
    def widths(self):
        return np.maximum(self.hi - self.lo, 0.0)

    def is_empty(self):
        return bool(np.any(self.lo > self.hi))

    def contains(self, point, tol=0.0):
        point = np.asarray(point, dtype=float)
        slack = tol * np.maximum(1.0, np.abs(point))
        return bool(np.all(point >= self.lo - slack) and np.all(point <= self.hi + slack))

    def contains_points(self, points, tol=0.0):
        points = np.asarray(points, dtype=float)
        slack = tol * np.maximum(1.0, np.abs(points))
        inside = (points >= self.lo - slack) & (points <= self.hi + slack)
        return np.all(inside, axis=-1)

    def contains_box(self, other, tol=0.0):
        return bool(np.all(other.lo >= self.lo - tol) and np.all(other.hi <= self.hi + tol))

    def intersect(self, other):
        return Box(np.maximum(self.lo, other.lo), np.minimum(self.hi, other.hi))

    def disjoint(self, other):
        return bool(np.any(self.hi < other.lo) or np.any(other.hi < self.lo))

    def sub(self, index):
        return Box(self.lo[index], self.hi[index])

    def replace(self, index, sub_box):
        lo, hi = self.lo.copy(), self.hi.copy()
        lo[index] = sub_box.lo
        hi[index] = sub_box.hi
        return Box(lo, hi)

    def diameter(self, index=None):
        widths = self.widths if index is None else self.widths[index]
        return float(np.sqrt(np.sum(widths ** 2)))

    def corners(self):
        return np.array(list(itertools.product(*zip(self.lo, self.hi))), dtype=float)

    def linear_image(self, matrix):
        """Bounding box of the image of the box under a linear map."""
        matrix = np.asarray(matrix, dtype=float)
        center = matrix @ self.center
        radius = np.abs(matrix) @ (self.widths / 2)
        return Box(center - radius, center + radius)

    def translate(self, offset):
        offset = np.asarray(offset, dtype=float)
        return Box(self.lo + offset, self.hi + offset)

    def linear_preimage(self, matrix):
        """Exact preimage for diagonal maps, bounding box of it otherwise."""
        matrix = np.asarray(matrix, dtype=float)
        if matrix.size == 0:
            return Box(self.lo, self.hi)
        if np.count_nonzero(matrix - np.diag(np.diag(matrix))) == 0:
            diag = np.diag(matrix)
            with np.errstate(divide="ignore"):
                a = self.lo / diag
                b = self.hi / diag
            return Box(np.minimum(a, b), np.maximum(a, b))
        return Box(self.lo, self.hi).linear_image(np.linalg.inv(matrix))

    def grid(self, points_per_axis):
        axes = [np.linspace(lo, hi, points_per_axis) for lo, hi in zip(self.lo, self.hi)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=-1)

    def __repr__(self):
        return "Box(lo=%s, hi=%s)" % (self.lo.tolist(), self.hi.tolist())
