import logging
import threading

from twisted.python.threadpool import ThreadPool


class OrderedWorkerPool(object):
    """Runs independent cells on a Twisted thread pool and returns results in cell order.

    Keyword Args:
        threads (int, optional): number of worker threads. With 1 the cells run inline.
        name (str, optional): thread-pool name used in log lines.
    """

    def __init__(self, threads=1, name="blenderlab"):
        self.threads = max(int(threads), 1)
        self.name = name

    def map(self, func, cells):
        cells = list(cells)
        if self.threads == 1 or len(cells) < 2:
            return [func(cell) for cell in cells]

        results = [None] * len(cells)
        failures = {}
        lock = threading.Lock()
        finished = threading.Event()
        remaining = [len(cells)]

        def on_result(index):
            def callback(success, result):
                with lock:
                    if success:
                        results[index] = result
                    else:
                        failures[index] = result
                    remaining[0] -= 1
                    if remaining[0] == 0:
                        finished.set()

            return callback

        pool = ThreadPool(minthreads=1, maxthreads=self.threads, name=self.name)
        logging.debug("starting pool %s with %d threads" % (self.name, self.threads))
        pool.start()
        try:
            for index, cell in enumerate(cells):
                pool.callInThreadWithCallback(on_result(index), func, cell)
            finished.wait()
        finally:
            pool.stop()
            logging.debug("stopped pool %s" % self.name)

        if failures:
            failures[min(failures)].raiseException()
        return results
