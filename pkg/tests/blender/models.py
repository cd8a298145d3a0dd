SS = {"ss": [[0.5]]}
U = {"lo": [-1.0, -0.5, 0.0], "hi": [1.0, 1.5, 1.0]}


def branch(rate, offset, slab, uu_offset):
    return {
        "linear": dict(SS, c=[[rate]], uu=[[2.5]]),
        "offset": [0.0, offset, uu_offset],
        "domain": {"lo": [-1.0, -0.5, slab[0]], "hi": [1.0, 1.5, slab[1]]},
    }


def affine_blender(rates, offsets, **extra):
    """Two-branch 1-1-1 blender whose central fixed points are 0 and 1."""
    data = {
        "dims": {"ss": 1, "cs": 1, "uu": 1},
        "U": {"lo": list(U["lo"]), "hi": list(U["hi"])},
        "branches": [
            branch(rates[0], offsets[0], (0.1, 0.5), -0.25),
            branch(rates[1], offsets[1], (0.6, 1.0), -1.5),
        ],
    }
    data.update(extra)
    return data
