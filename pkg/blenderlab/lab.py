import logging

import numpy as np

from blenderlab.lib.utils import check_count_parameter
from blenderlab.lib.utils import merge_tolerances
from blenderlab.lib.worker_pool import OrderedWorkerPool


class Lab(object):
    """Lab base class

    Keyword Args:
        threads (int, optional): size of the worker pool used by sweeps and batteries. By default it's 1 (inline).
        tolerance_overrides (dict, optional): entries replacing the default tolerance table, e.g. {'newton_residual': 1e-12}
        seed (int, optional): seed for every random draw made by the lab (random disks, perturbation trials). By default it's 0.
    """

    def __init__(self, threads=1, tolerance_overrides=None, seed=0):
        check_count_parameter(threads, "threads", minimum=1)
        check_count_parameter(seed, "seed")
        self.threads = threads
        self.seed = seed
        self.tolerances = merge_tolerances(tolerance_overrides)
        logging.debug("lab threads=%d seed=%d" % (threads, seed))

    def tol(self, name):
        return self.tolerances[name]

    def rng(self, stream=0):
        """A fresh generator; the same (seed, stream) always yields the same draws."""
        return np.random.default_rng([self.seed, stream])

    def map_cells(self, func, cells):
        return OrderedWorkerPool(self.threads).map(func, cells)
