from blenderlab.local_model.model import Dims  # noqa: F401
from blenderlab.local_model.model import LocalTangencyModel  # noqa: F401
from blenderlab.local_model.model import Remainder  # noqa: F401
from blenderlab.local_model.model import TransitionMap  # noqa: F401
from blenderlab.local_model.strips import Strip  # noqa: F401
from blenderlab.local_model.experiments import AffineDisk  # noqa: F401
