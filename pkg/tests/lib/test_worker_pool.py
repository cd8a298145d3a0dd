import pytest
from sure import expect

from blenderlab.lib.worker_pool import OrderedWorkerPool


def square(x):
    return x * x


def test_inline_pool_keeps_order():
    expect(OrderedWorkerPool(1).map(square, range(5))).to.equal([0, 1, 4, 9, 16])


def test_threaded_pool_keeps_order():
    expect(OrderedWorkerPool(4).map(square, range(50))).to.equal([x * x for x in range(50)])


def test_threaded_pool_reraises_first_failure():
    def fail_on_odd(x):
        if x % 2:
            raise ValueError("odd cell %d" % x)
        return x

    with pytest.raises(ValueError) as info:
        OrderedWorkerPool(3).map(fail_on_odd, range(6))
    expect(str(info.value)).to.equal("odd cell 1")


def test_empty_cells():
    expect(OrderedWorkerPool(4).map(square, [])).to.equal([])
