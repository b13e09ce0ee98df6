"""Small reverse-mode tape over numpy arrays.

Every operation here accepts either a plain ``numpy`` array (returning a plain
array, no overhead beyond an ``isinstance`` check) or a :class:`Node`
(returning a ``Node`` that remembers how to push gradients back).  Writing the
numerical core of the package in terms of these functions gives one code path
for both plain evaluation and differentiation.

Boundary handling: ``atanh`` clamps its argument to ``ATANH_MAX`` before
evaluation, and the ball clip used by the geometry layer reports when its
rescale branch fires.  Both kinds of event are counted per-thread so a caller
can tell whether a just-computed gradient crossed a non-smooth point.
"""

from __future__ import annotations

import threading

import numpy as np

ATANH_MAX = 1.0 - 1e-15


class _Events(threading.local):
    """Per-thread counters for non-smooth branch activations."""

    def __init__(self):
        self.atanh_clamps = 0
        self.clip_rescales = 0


_events = _Events()

# Cumulative, process-wide atanh clamp diagnostic (never reset by gradient
# evaluation; guarded because geometry ops may run from many threads).
_clamp_lock = threading.Lock()
_total_atanh_clamps = 0


def reset_events():
    """Zero the per-thread non-smooth event counters."""
    _events.atanh_clamps = 0
    _events.clip_rescales = 0


def events_active():
    """True if any clamp/clip event happened on this thread since the last reset."""
    return _events.atanh_clamps > 0 or _events.clip_rescales > 0


def total_atanh_clamps():
    """Cumulative process-wide count of atanh boundary clamps."""
    return _total_atanh_clamps


def _record_atanh_clamps(count):
    global _total_atanh_clamps
    _events.atanh_clamps += count
    with _clamp_lock:
        _total_atanh_clamps += count


def record_clip_rescales(count):
    """Called by the geometry clip when its rescale branch fires."""
    _events.clip_rescales += count


class Node:
    """A value in the computation graph.

    ``parents`` is a tuple of ``(node, vjp)`` pairs where ``vjp`` maps the
    output gradient to that parent's gradient contribution.
    """

    __slots__ = ("value", "parents")

    # defer numpy binary operators to this class's reflected methods
    __array_ufunc__ = None
    __array_priority__ = 1000

    def __init__(self, value, parents=()):
        self.value = np.asarray(value, dtype=np.float64)
        self.parents = parents

    @property
    def shape(self):
        return self.value.shape

    @property
    def ndim(self):
        return self.value.ndim

    # arithmetic sugar
    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __neg__(self):
        return mul(self, -1.0)

    def __pow__(self, p):
        return power(self, p)

    def __matmul__(self, other):
        return matmul(self, other)

    def __rmatmul__(self, other):
        return matmul(other, self)

    def __getitem__(self, key):
        return _getitem(self, key)

    def reshape(self, *shape):
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        return reshape(self, shape)

    @property
    def T(self):
        return transpose(self)

    def __repr__(self):
        return f"Node(shape={self.value.shape})"


def is_node(x):
    return isinstance(x, Node)


def val(x):
    """Underlying numpy value of ``x`` whether or not it is a Node."""
    return x.value if isinstance(x, Node) else np.asarray(x, dtype=np.float64)


def detach(x):
    """Constant copy of ``x``; gradients do not flow through it."""
    return np.array(val(x))


def _unbroadcast(g, shape):
    """Sum ``g`` down to ``shape`` (the reverse of numpy broadcasting)."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g.reshape(shape)


def _make(value, *pairs):
    """Build a Node keeping only the parents that are Nodes."""
    parents = tuple((p, vjp) for p, vjp in pairs if isinstance(p, Node))
    return Node(value, parents)


def add(a, b):
    if not (isinstance(a, Node) or isinstance(b, Node)):
        return np.add(val(a), val(b))
    va, vb = val(a), val(b)
    return _make(va + vb,
                 (a, lambda g, s=va.shape: _unbroadcast(g, s)),
                 (b, lambda g, s=vb.shape: _unbroadcast(g, s)))


def sub(a, b):
    if not (isinstance(a, Node) or isinstance(b, Node)):
        return np.subtract(val(a), val(b))
    va, vb = val(a), val(b)
    return _make(va - vb,
                 (a, lambda g, s=va.shape: _unbroadcast(g, s)),
                 (b, lambda g, s=vb.shape: _unbroadcast(-g, s)))


def mul(a, b):
    if not (isinstance(a, Node) or isinstance(b, Node)):
        return np.multiply(val(a), val(b))
    va, vb = val(a), val(b)
    return _make(va * vb,
                 (a, lambda g, o=vb, s=va.shape: _unbroadcast(g * o, s)),
                 (b, lambda g, o=va, s=vb.shape: _unbroadcast(g * o, s)))


def div(a, b):
    if not (isinstance(a, Node) or isinstance(b, Node)):
        return np.divide(val(a), val(b))
    va, vb = val(a), val(b)
    out = va / vb
    return _make(out,
                 (a, lambda g, o=vb, s=va.shape: _unbroadcast(g / o, s)),
                 (b, lambda g, o=vb, y=out, s=vb.shape: _unbroadcast(-g * y / o, s)))


def power(a, p):
    """Elementwise power with a scalar exponent."""
    if not isinstance(a, Node):
        return np.power(val(a), p)
    va = a.value
    return _make(np.power(va, p),
                 (a, lambda g, x=va: g * p * np.power(x, p - 1)))


def matmul(a, b):
    if not (isinstance(a, Node) or isinstance(b, Node)):
        return np.matmul(val(a), val(b))
    va, vb = val(a), val(b)
    if va.ndim != 2 or vb.ndim != 2:
        raise ValueError("matmul on the tape supports 2-D operands only")
    return _make(va @ vb,
                 (a, lambda g, o=vb: g @ o.T),
                 (b, lambda g, o=va: o.T @ g))


def transpose(a):
    if not isinstance(a, Node):
        return np.transpose(val(a))
    return _make(a.value.T, (a, lambda g: g.T))


def reshape(a, shape):
    if not isinstance(a, Node):
        return np.reshape(val(a), shape)
    old = a.value.shape
    return _make(a.value.reshape(shape), (a, lambda g, s=old: g.reshape(s)))


def sum(a, axis=None, keepdims=False):  # noqa: A001 - mirrors numpy naming
    if not isinstance(a, Node):
        return np.sum(val(a), axis=axis, keepdims=keepdims)
    va = a.value

    def vjp(g, shape=va.shape):
        if axis is None:
            gg = np.asarray(g).reshape((1,) * len(shape))
            return np.broadcast_to(gg, shape).copy()
        gg = g
        if not keepdims:
            ax = axis if isinstance(axis, tuple) else (axis,)
            for i in sorted(a % len(shape) for a in ax):
                gg = np.expand_dims(gg, i)
        return np.broadcast_to(gg, shape).copy()

    return _make(np.sum(va, axis=axis, keepdims=keepdims), (a, vjp))


def mean(a, axis=None, keepdims=False):
    va = val(a)
    if axis is None:
        n = va.size
    else:
        ax = axis if isinstance(axis, tuple) else (axis,)
        n = 1
        for i in ax:
            n *= va.shape[i]
    return sum(a, axis=axis, keepdims=keepdims) / float(n)


def tanh(a):
    if not isinstance(a, Node):
        return np.tanh(val(a))
    y = np.tanh(a.value)
    return _make(y, (a, lambda g, yy=y: g * (1.0 - yy * yy)))


def atanh(a):
    """Inverse hyperbolic tangent with boundary clamping.

    Arguments with ``|x| >= ATANH_MAX`` are clamped; the clamp is treated as a
    constant (zero gradient) and counted as a non-smooth event.
    """
    va = val(a)
    clipped = np.clip(va, -ATANH_MAX, ATANH_MAX)
    n_clamped = int(np.count_nonzero(np.abs(va) >= ATANH_MAX))
    if n_clamped:
        _record_atanh_clamps(n_clamped)
    y = np.arctanh(clipped)
    if not isinstance(a, Node):
        return y
    inside = np.abs(va) < ATANH_MAX

    def vjp(g, x=clipped, m=inside):
        return np.where(m, g / (1.0 - x * x), 0.0)

    return _make(y, (a, vjp))


def exp(a):
    if not isinstance(a, Node):
        return np.exp(val(a))
    y = np.exp(a.value)
    return _make(y, (a, lambda g, yy=y: g * yy))


def log(a):
    if not isinstance(a, Node):
        return np.log(val(a))
    va = a.value
    return _make(np.log(va), (a, lambda g, x=va: g / x))


def sqrt(a):
    if not isinstance(a, Node):
        return np.sqrt(val(a))
    y = np.sqrt(a.value)
    return _make(y, (a, lambda g, yy=y: g / (2.0 * yy)))


def maximum(a, b):
    """Elementwise max; ties route the gradient to the first operand."""
    if not (isinstance(a, Node) or isinstance(b, Node)):
        return np.maximum(val(a), val(b))
    va, vb = val(a), val(b)
    take_a = va >= vb
    return _make(np.maximum(va, vb),
                 (a, lambda g, m=take_a, s=va.shape: _unbroadcast(np.where(m, g, 0.0), s)),
                 (b, lambda g, m=take_a, s=vb.shape: _unbroadcast(np.where(m, 0.0, g), s)))


def where(cond, a, b):
    """Select by a constant boolean mask."""
    cond = np.asarray(cond, dtype=bool)
    if not (isinstance(a, Node) or isinstance(b, Node)):
        return np.where(cond, val(a), val(b))
    va, vb = val(a), val(b)
    return _make(np.where(cond, va, vb),
                 (a, lambda g, m=cond, s=va.shape: _unbroadcast(np.where(m, g, 0.0), s)),
                 (b, lambda g, m=cond, s=vb.shape: _unbroadcast(np.where(m, 0.0, g), s)))


def take(a, indices):
    """Gather rows along axis 0; the backward pass scatter-adds."""
    idx = np.asarray(indices)
    if not isinstance(a, Node):
        return val(a)[idx]
    va = a.value

    def vjp(g, shape=va.shape, ii=idx):
        out = np.zeros(shape)
        np.add.at(out, ii, g)
        return out

    return _make(va[idx], (a, vjp))


def gather_cols(a, cols):
    """Pick one column per row: ``out[i] = a[i, cols[i]]``."""
    cols = np.asarray(cols)
    if not isinstance(a, Node):
        va = val(a)
        return va[np.arange(va.shape[0]), cols]
    va = a.value
    rows = np.arange(va.shape[0])

    def vjp(g, shape=va.shape, rr=rows, cc=cols):
        out = np.zeros(shape)
        np.add.at(out, (rr, cc), g)
        return out

    return _make(va[rows, cols], (a, vjp))


def stack(items, axis=0):
    values = [val(x) for x in items]
    if not any(isinstance(x, Node) for x in items):
        return np.stack(values, axis=axis)
    pairs = []
    for i, x in enumerate(items):
        pairs.append((x, lambda g, k=i: np.take(g, k, axis=axis)))
    return _make(np.stack(values, axis=axis), *pairs)


def _getitem(a, key):
    va = a.value
    out = va[key]

    def vjp(g, shape=va.shape, kk=key):
        buf = np.zeros(shape)
        if isinstance(kk, slice):
            buf[kk] += g
        else:
            np.add.at(buf, kk, g)
        return buf

    return _make(out, (a, vjp))


def grad(out, wrt):
    """Gradients of a scalar Node ``out`` with respect to ``wrt`` leaves.

    Returns a list aligned with ``wrt``; leaves the graph did not touch get
    zero gradients.
    """
    if not isinstance(out, Node):
        raise TypeError("output is not a Node; nothing to differentiate")
    if out.value.ndim != 0 and out.value.size != 1:
        raise ValueError("grad expects a scalar output")

    topo = []
    seen = set()
    stack_ = [(out, False)]
    while stack_:
        node, done = stack_.pop()
        if done:
            topo.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack_.append((node, True))
        for parent, _ in node.parents:
            if id(parent) not in seen:
                stack_.append((parent, False))

    grads = {id(out): np.ones_like(out.value)}
    for node in reversed(topo):
        g = grads.get(id(node))
        if g is None:
            continue
        for parent, vjp in node.parents:
            contribution = vjp(g)
            acc = grads.get(id(parent))
            grads[id(parent)] = contribution if acc is None else acc + contribution

    results = []
    for leaf in wrt:
        g = grads.get(id(leaf))
        results.append(np.zeros_like(leaf.value) if g is None else g)
    return results
