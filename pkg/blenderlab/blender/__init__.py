from blenderlab.blender.spec import BlenderSpec  # noqa: F401
from blenderlab.blender.spec import Branch  # noqa: F401
from blenderlab.blender.spec import SsDisk  # noqa: F401
from blenderlab.blender.product import AffineRepeller  # noqa: F401
from blenderlab.blender.product import PlanarRepeller  # noqa: F401
from blenderlab.blender.tangency import ClosedCurve  # noqa: F401
from blenderlab.blender.tangency import Foliation  # noqa: F401
