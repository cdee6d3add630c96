#include "looprate/error.hpp"

namespace looprate {

const char* errc_name(errc c) {
    switch (c) {
        case errc::disconnected_graph: return "DisconnectedGraph";
        case errc::self_loop: return "SelfLoop";
        case errc::non_positive_weight: return "NonPositiveWeight";
        case errc::unknown_endpoint: return "UnknownEndpoint";
        case errc::incomplete_rotation: return "IncompleteRotation";
        case errc::bridge_present: return "BridgePresent";
        case errc::empty_merge_set: return "EmptyMergeSet";
        case errc::non_square: return "NonSquare";
        case errc::singular: return "Singular";
        case errc::index_out_of_range: return "IndexOutOfRange";
        case errc::k_out_of_range: return "KOutOfRange";
        case errc::too_large: return "TooLarge";
        case errc::unreachable_target: return "UnreachableTarget";
        case errc::vertex_stable: return "VertexStable";
        case errc::unstable: return "Unstable";
        case errc::not_a_tree: return "NotATree";
        case errc::not_recurrent: return "NotRecurrent";
        case errc::no_unicycle: return "NoUnicycle";
        case errc::unknown_lattice: return "UnknownLattice";
        case errc::non_positive_beta: return "NonPositiveBeta";
        case errc::quadrature_not_converged: return "QuadratureNotConverged";
        case errc::missing_kernel: return "MissingKernel";
        case errc::bad_input: return "BadInput";
    }
    return "Unknown";
}

}  // namespace looprate
