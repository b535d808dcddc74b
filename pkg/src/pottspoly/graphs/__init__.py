from .connected import (
    CoreSetCertificate,
    SubgraphRecord,
    connected_vertex_masks,
    core_set_certificate,
    count_connected_sets_with_boundary,
    enumerate_connected_sets,
)
from .core import (
    Graph,
    MultiGraph,
    complete,
    complete_bipartite,
    cycle,
    dump_graph,
    generate,
    graph_from_json,
    graph_power,
    hypercube,
    load_graph,
    mask_vertices,
    parse_edge_list,
    path,
    petersen,
    random_graph,
    random_regular,
    vertex_mask,
)
from .cuts import (
    boundary_size,
    check_eta,
    check_property_31,
    count_cuts_at_most,
    edge_boundary,
    eta_expansion,
    exhaustive_min_cut,
    min_cut,
)
