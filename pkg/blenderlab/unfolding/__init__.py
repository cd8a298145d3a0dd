from blenderlab.unfolding.params import UnfoldingParams  # noqa: F401
from blenderlab.unfolding.saddles import SaddleSearch  # noqa: F401
from blenderlab.unfolding.saddles import SingleRoundSaddle  # noqa: F401
from blenderlab.unfolding.sweep import SweepResult  # noqa: F401
