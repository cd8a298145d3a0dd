from blenderlab.lab import Lab


class BlenderLab(Lab):
    def __init__(self, **kwargs):
        super().__init__(**kwargs)

    # SPECTRA
    from blenderlab.spectra import classify
    from blenderlab.spectra import effective_dimension
    from blenderlab.spectra import rotation_eigenvalues
    from blenderlab.spectra import saddle_node_angle
    from blenderlab.spectra import predicted_index_variation
    from blenderlab.spectra import double_blender_dimension

    # LOCAL MODEL
    from blenderlab.local_model.maps import apply_T0
    from blenderlab.local_model.maps import apply_T1
    from blenderlab.local_model.maps import return_map
    from blenderlab.local_model.maps import return_jacobian
    from blenderlab.local_model.maps import transition_enclosure
    from blenderlab.local_model.maps import check_generic_conditions
    from blenderlab.local_model.strips import first_strip_index
    from blenderlab.local_model.strips import strip
    from blenderlab.local_model.strips import resized_strip
    from blenderlab.local_model.strips import is_centered
    from blenderlab.local_model.experiments import volume_expansion_experiment
    from blenderlab.local_model.experiments import diameter_experiment
    from blenderlab.local_model.experiments import random_cu_disk

    # UNFOLDING
    from blenderlab.unfolding.params import active_parameters
    from blenderlab.unfolding.family import unfold
    from blenderlab.unfolding.family import unfolded_return_map
    from blenderlab.unfolding.saddles import find_single_round_saddles
    from blenderlab.unfolding.sweep import index_variation_sweep
    from blenderlab.unfolding.witness import cycle_witness

    # BLENDER
    from blenderlab.blender.covering import covering_criterion
    from blenderlab.blender.covering import robustness_margin
    from blenderlab.blender.superposition import verify_superposition
    from blenderlab.blender.superposition import verify_superposition_battery
    from blenderlab.blender.superposition import distinctive_saddle_disk
    from blenderlab.blender.superposition import reduce_central_dimension
    from blenderlab.blender.product import product_blender
    from blenderlab.blender.tangency import tangency_witness

    # ENTROPY
    from blenderlab.entropy import topological_entropy
    from blenderlab.entropy import maximal_entropy_measure
    from blenderlab.entropy import lyapunov_spectrum
    from blenderlab.entropy import entropy_gap

    # CONES
    from blenderlab.cones import domination_time
    from blenderlab.cones import check_cone_invariance
    from blenderlab.cones import uniform_rate_check
    from blenderlab.cones import cone_half_angle_for
